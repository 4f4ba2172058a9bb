//! Logarithmic energy of the half-complemented density and the variational
//! (Robin) conditions of the minimizer.
//!
//! The double log-integral is assembled panel by panel over the support of
//! h. On a single panel the cosine substitution mu = mid + hw cos(theta)
//! diagonalizes the log kernel,
//!
//! ```text
//! log 1/|mu(th) - mu(ph)| = log(2/hw) + 2 sum_{k>=1} cos(k th) cos(k ph) / k,
//! ```
//!
//! so the self-interaction reduces to cosine moments of the panel density.
//! Cross-panel terms are analytic away from the shared corner and are
//! integrated on endpoint-graded Gauss-Legendre grids.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad;

use super::density::density_of_profile;
use super::{profile, EquilibriumProfile, Regime};

/// Value of the energy functional and a quadrature error estimate obtained
/// by re-evaluating at a coarser resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyEstimate {
    pub value: f64,
    pub quadrature_error: f64,
}

/// Zone classification for the variational conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Zone {
    Void,
    Band,
    Saturated,
}

/// One grid point of the effective-potential check: the residual
/// (effective potential minus the Robin constant) and the zone it falls in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalSample {
    pub mu: f64,
    pub residual: f64,
    pub zone: Zone,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Panel {
    pub lo: f64,
    pub hi: f64,
    pub mid: f64,
    pub hw: f64,
}

impl Panel {
    fn new(lo: f64, hi: f64) -> Self {
        Panel {
            lo,
            hi,
            mid: 0.5 * (lo + hi),
            hw: 0.5 * (hi - lo),
        }
    }
}

/// Panels covering the support of h, split at every breakpoint (band
/// endpoints, the origin, the potential kink) and dropping pieces where h
/// vanishes identically.
pub(crate) fn support_panels(prof: &EquilibriumProfile) -> Result<Vec<Panel>> {
    let mut cuts: Vec<f64> = Vec::new();
    let (support_lo, support_hi) = match prof.regime {
        Regime::TwoCut => {
            let ep = prof.endpoints.expect("two-cut endpoints");
            cuts.extend_from_slice(&ep);
            (ep[0], ep[3])
        }
        Regime::OneCutLeft => {
            let r = 2.0 * (-prof.eta / 2.0).exp();
            (-r, r)
        }
        Regime::Vkls => (-2.0, 2.0),
    };
    for extra in [0.0, prof.x] {
        if extra > support_lo && extra < support_hi {
            cuts.push(extra);
        }
    }
    cuts.push(support_lo);
    cuts.push(support_hi);
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    cuts.dedup_by(|p, q| (*p - *q).abs() < 1e-13);

    let mut panels = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi - lo < 1e-12 {
            continue;
        }
        // drop panels where h is identically zero (saturated region left of
        // the origin inside the two-cut plateau)
        if let Regime::TwoCut = prof.regime {
            let ep = prof.endpoints.unwrap();
            let mid = 0.5 * (lo + hi);
            if mid > ep[1] && mid < ep[2] && mid <= 0.0 {
                continue;
            }
        }
        panels.push(Panel::new(lo, hi));
    }
    if panels.is_empty() {
        return Err(Error::Integration("empty support for h".into()));
    }
    Ok(panels)
}

/// Node set graded geometrically toward both panel ends, in the theta
/// parametrization of the panel.
fn graded_theta_nodes(levels: u32, order: usize) -> Vec<(f64, f64)> {
    let (gl_nodes, gl_weights) = quad::gauss_legendre(order);
    let mut cuts = vec![0.0];
    for j in (0..=levels).rev() {
        cuts.push(0.5 * PI / 2f64.powi(j as i32));
    }
    let mut full: Vec<f64> = cuts.clone();
    for &cut in cuts.iter().rev() {
        let mirrored = PI - cut;
        if mirrored > *full.last().unwrap() + 1e-15 {
            full.push(mirrored);
        }
    }
    let mut out = Vec::new();
    for w in full.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for (x, wt) in gl_nodes.iter().zip(&gl_weights) {
            out.push((mid + half * x, wt * half));
        }
    }
    out
}

struct PanelData {
    panel: Panel,
    /// graded nodes: (mu, f * weight) with f = h(mu) * |dmu/dtheta|
    graded: Vec<(f64, f64)>,
    /// cosine moments C_k of f on the uniform-GL theta grid
    moments: Vec<f64>,
}

struct Resolution {
    levels: u32,
    order: usize,
    spectral_nodes: usize,
    k_max: usize,
}

fn build_panel_data<H>(
    panels: &[Panel],
    h: &H,
    res: &Resolution,
) -> Result<Vec<PanelData>>
where
    H: Fn(f64) -> Result<f64>,
{
    let theta_nodes = graded_theta_nodes(res.levels, res.order);
    let (gl_nodes, gl_weights) = quad::gauss_legendre(res.spectral_nodes);
    let mut out = Vec::with_capacity(panels.len());
    for p in panels {
        let mut graded = Vec::with_capacity(theta_nodes.len());
        for &(th, w) in &theta_nodes {
            let mu = p.mid + p.hw * th.cos();
            let f = h(mu)? * p.hw * th.sin();
            graded.push((mu, f * w));
        }
        // cosine moments on [0, pi]
        let mut fvals = Vec::with_capacity(res.spectral_nodes);
        let mut thetas = Vec::with_capacity(res.spectral_nodes);
        for (x, w) in gl_nodes.iter().zip(&gl_weights) {
            let th = 0.5 * PI * (x + 1.0);
            let mu = p.mid + p.hw * th.cos();
            let f = h(mu)? * p.hw * th.sin();
            fvals.push(f * w * 0.5 * PI);
            thetas.push(th);
        }
        let mut moments = Vec::with_capacity(res.k_max + 1);
        for k in 0..=res.k_max {
            let mut c = 0.0;
            for (fw, th) in fvals.iter().zip(&thetas) {
                c += fw * (k as f64 * th).cos();
            }
            moments.push(c);
        }
        out.push(PanelData {
            panel: *p,
            graded,
            moments,
        });
    }
    Ok(out)
}

fn double_log_integral(data: &[PanelData]) -> f64 {
    let mut total = 0.0;
    // self terms: A^2 log(2/hw) + 2 sum_k C_k^2 / k
    for pd in data {
        let a = pd.moments[0];
        let mut acc = a * a * (2.0 / pd.panel.hw).ln();
        for (k, c) in pd.moments.iter().enumerate().skip(1) {
            acc += 2.0 * c * c / k as f64;
        }
        total += acc;
    }
    // cross terms on the graded grids
    for i in 0..data.len() {
        for j in (i + 1)..data.len() {
            let mut acc = 0.0;
            for &(mu, fwi) in &data[i].graded {
                let mut inner = 0.0;
                for &(nu, fwj) in &data[j].graded {
                    inner += fwj * (mu - nu).abs().max(1e-300).ln();
                }
                acc += fwi * inner;
            }
            total -= 2.0 * acc;
        }
    }
    total
}

fn linear_term(data: &[PanelData], eta: f64, x: f64) -> f64 {
    // potential term eta [mu - x]_+ (twice the half-slope form; the full
    // slope is what the hook-integral reduction and the g-function jumps use)
    let mut total = 0.0;
    for pd in data {
        for &(mu, fw) in &pd.graded {
            let log_abs = if mu == 0.0 { 0.0 } else { mu.abs().ln() };
            let v = eta * (mu - x).max(0.0);
            total += fw * (2.0 * mu * (log_abs - 1.0) + v);
        }
    }
    total
}

/// Logarithmic energy of the half-complemented density supplied by `rho`,
/// for the equilibrium problem at (eta, x). The provider maps mu to the
/// density value rho(mu) on the support of h.
pub fn energy<H>(eta: f64, x: f64, rho: H) -> Result<EnergyEstimate>
where
    H: Fn(f64) -> Result<f64>,
{
    let prof = profile(eta, x)?;
    let panels = support_panels(&prof)?;
    let h = |mu: f64| -> Result<f64> { Ok(rho(mu)? - if mu <= 0.0 { 1.0 } else { 0.0 }) };

    let fine = Resolution {
        levels: 6,
        order: 16,
        spectral_nodes: 512,
        k_max: 240,
    };
    let coarse = Resolution {
        levels: 4,
        order: 10,
        spectral_nodes: 260,
        k_max: 120,
    };
    let data_fine = build_panel_data(&panels, &h, &fine)?;
    let data_coarse = build_panel_data(&panels, &h, &coarse)?;
    let value_fine = double_log_integral(&data_fine) + linear_term(&data_fine, eta, x);
    let value_coarse = double_log_integral(&data_coarse) + linear_term(&data_coarse, eta, x);
    let err = (value_fine - value_coarse).abs();
    if !value_fine.is_finite() {
        return Err(Error::Integration("energy quadrature diverged".into()));
    }
    Ok(EnergyEstimate {
        value: value_fine,
        quadrature_error: err,
    })
}

/// [`energy`] with the built-in equilibrium density as provider.
pub fn energy_of_profile(eta: f64, x: f64) -> Result<EnergyEstimate> {
    let prof = profile(eta, x)?;
    energy(eta, x, |mu| Ok(density_of_profile(&prof, mu)?.rho))
}

/// Log-potential of h at mu: int log(1/|mu - nu|) h(nu) d nu.
fn log_potential(prof: &EquilibriumProfile, panels: &[Panel], mu: f64) -> Result<f64> {
    let mut total = 0.0;
    for p in panels {
        if mu > p.lo + 1e-13 && mu < p.hi - 1e-13 {
            // split at mu; grade toward all singular ends
            for (a, b) in [(p.lo, mu), (mu, p.hi)] {
                total += graded_plain_integral(prof, a, b, mu)?;
            }
        } else {
            for &(nu, fw) in &panel_graded_plain(prof, p)? {
                total -= fw * (mu - nu).abs().max(1e-300).ln();
            }
        }
    }
    Ok(total)
}

fn panel_graded_plain(prof: &EquilibriumProfile, p: &Panel) -> Result<Vec<(f64, f64)>> {
    let theta_nodes = graded_theta_nodes(6, 12);
    let mut out = Vec::with_capacity(theta_nodes.len());
    for &(th, w) in &theta_nodes {
        let nu = p.mid + p.hw * th.cos();
        let f = density_of_profile(prof, nu)?.h * p.hw * th.sin();
        out.push((nu, f * w));
    }
    Ok(out)
}

/// int_a^b log(1/|mu - nu|) h(nu) d nu with nodes graded toward both ends.
fn graded_plain_integral(prof: &EquilibriumProfile, a: f64, b: f64, mu: f64) -> Result<f64> {
    if b - a < 1e-14 {
        return Ok(0.0);
    }
    let (gl_nodes, gl_weights) = quad::gauss_legendre(12);
    let mut cuts = vec![0.0f64];
    for j in (0..=8).rev() {
        cuts.push(0.5 / 2f64.powi(j));
    }
    let mut full = cuts.clone();
    for &c in cuts.iter().rev() {
        if 1.0 - c > *full.last().unwrap() + 1e-15 {
            full.push(1.0 - c);
        }
    }
    let mut acc = 0.0;
    for w in full.windows(2) {
        let (lo, hi) = (a + (b - a) * w[0], a + (b - a) * w[1]);
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        for (xn, wt) in gl_nodes.iter().zip(&gl_weights) {
            let nu = mid + half * xn;
            let h = density_of_profile(prof, nu)?.h;
            acc -= wt * half * h * (mu - nu).abs().max(1e-300).ln();
        }
    }
    Ok(acc)
}

/// Evaluates the effective potential minus the Robin constant on a grid and
/// classifies each point by zone (>= 0 on voids, ~ 0 on bands, <= 0 on
/// saturated regions, up to the quadrature tolerance).
pub fn variational_check(eta: f64, x: f64, grid: &[f64]) -> Result<Vec<VariationalSample>> {
    let prof = profile(eta, x)?;
    let panels = support_panels(&prof)?;
    // Robin constant in the log-potential normalization: the g-function
    // satisfies g(z) = U(z) + z(log z - 1) + g_inf, so the band equality
    // g_+ + g_- + eta [mu-x]_+ = ell reads 2U + 2 mu (log|mu|-1)
    // + eta [mu-x]_+ = ell - 2 g_inf.
    let robin = prof.ell - 2.0 * prof.g_inf;
    let mut out = Vec::with_capacity(grid.len());
    for &mu in grid {
        let u = log_potential(&prof, &panels, mu)?;
        let log_abs = if mu == 0.0 { 0.0 } else { mu.abs().ln() };
        let v = eta * (mu - x).max(0.0);
        let lhs = 2.0 * u + 2.0 * mu * (log_abs - 1.0) + v;
        out.push(VariationalSample {
            mu,
            residual: lhs - robin,
            zone: classify(&prof, mu),
        });
    }
    Ok(out)
}

fn classify(prof: &EquilibriumProfile, mu: f64) -> Zone {
    match prof.regime {
        Regime::TwoCut => {
            let ep = prof.endpoints.unwrap();
            if mu < ep[0] || (mu > ep[1] && mu < ep[2]) {
                Zone::Saturated
            } else if mu > ep[3] {
                Zone::Void
            } else {
                Zone::Band
            }
        }
        Regime::OneCutLeft => {
            let r = 2.0 * (-prof.eta / 2.0).exp();
            if mu < -r {
                Zone::Saturated
            } else if mu > r {
                Zone::Void
            } else {
                Zone::Band
            }
        }
        Regime::Vkls => {
            if mu < -2.0 {
                Zone::Saturated
            } else if mu > 2.0 {
                Zone::Void
            } else {
                Zone::Band
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ETA5: f64 = 1.6094379124341003;

    #[test]
    fn vkls_energy_is_minus_one() {
        // for x >= 2 the functional equals the unconstrained minimum: 1 + E = 0
        let e = energy_of_profile(ETA5, 2.3).unwrap();
        assert!(
            (e.value + 1.0).abs() < 2e-3,
            "VKLS energy {} (err est {})",
            e.value,
            e.quadrature_error
        );
    }

    #[test]
    fn one_cut_energy_matches_rate_function() {
        let x = -1.5;
        let e = energy_of_profile(ETA5, x).unwrap();
        let f = profile(ETA5, x).unwrap().f;
        let lhs = 1.0 + ETA5 * x * x / 2.0 + e.value;
        assert!((lhs - f).abs() < 2e-3, "one-cut energy relation: {lhs} vs {f}");
    }

    #[test]
    fn two_cut_energy_matches_rate_function() {
        let x = 0.6;
        let e = energy_of_profile(ETA5, x).unwrap();
        let f = profile(ETA5, x).unwrap().f;
        let lhs = 1.0 + e.value; // x > 0: no parabola term
        assert!(
            (lhs - f).abs() < 2e-3,
            "two-cut energy relation: {lhs} vs {f} (err est {})",
            e.quadrature_error
        );
    }

    #[test]
    fn variational_zones() {
        let x = 0.6;
        let ep = crate::equilibrium::endpoints(ETA5, x).unwrap();
        let grid = [
            0.5 * (ep[2] + ep[3]),  // inside band (c,d)
            0.5 * (ep[0] + ep[1]),  // inside band (a,b)
            ep[3] + 0.5,            // void
            0.5 * (ep[1] + ep[2]),  // saturated
            ep[0] - 0.4,            // saturated
        ];
        let samples = variational_check(ETA5, x, &grid).unwrap();
        assert_eq!(samples[0].zone, Zone::Band);
        assert!(samples[0].residual.abs() < 5e-3, "band residual {}", samples[0].residual);
        assert!(samples[1].residual.abs() < 5e-3, "band residual {}", samples[1].residual);
        assert_eq!(samples[2].zone, Zone::Void);
        assert!(samples[2].residual > 0.0, "void residual {}", samples[2].residual);
        assert_eq!(samples[3].zone, Zone::Saturated);
        assert!(samples[3].residual < 5e-3, "saturated residual {}", samples[3].residual);
        assert!(samples[4].residual < 5e-3, "saturated residual {}", samples[4].residual);
    }

    #[test]
    fn variational_zones_one_cut() {
        let x = -1.5;
        let r = 2.0 * (-ETA5 / 2.0).exp();
        let grid = [0.0, r + 0.5, -r - 0.3];
        let samples = variational_check(ETA5, x, &grid).unwrap();
        assert!(samples[0].residual.abs() < 5e-3);
        assert!(samples[1].residual > 0.0);
        assert!(samples[2].residual < 5e-3);
    }
}
