//! Pointwise equilibrium densities in the three phases.
//!
//! The two-cut formula needs two quadratures per point: the tail integral
//! over (d, +inf) after an endpoint-flattening substitution, and the band
//! integral over (c, d) with the Cauchy kernel. The principal value over
//! (c, d) is handled by singularity subtraction against the Chebyshev-weight
//! identity p.v. int_c^d dv / ((v - mu) sqrt((v-c)(d-v))) = 0.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad;

use super::{profile, EquilibriumProfile, Regime};

/// One point of the equilibrium density: the value rho in [0, 1] and the
/// half-complemented value h = rho - 1_{mu <= 0}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySample {
    pub mu: f64,
    pub rho: f64,
    pub h: f64,
}

/// Arccosine profile: 1 below -2, arccos(mu/2)/pi on (-2, 2), 0 above 2.
pub(crate) fn rho_arccos(mu: f64) -> f64 {
    if mu <= -2.0 {
        1.0
    } else if mu >= 2.0 {
        0.0
    } else {
        (mu / 2.0).acos() / PI
    }
}

/// Equilibrium density at position mu for the problem at (eta, x).
pub fn density(eta: f64, x: f64, mu: f64) -> Result<DensitySample> {
    let prof = profile(eta, x)?;
    density_of_profile(&prof, mu)
}

/// Same as [`density`] but reusing an already-solved profile.
pub fn density_of_profile(prof: &EquilibriumProfile, mu: f64) -> Result<DensitySample> {
    if !mu.is_finite() {
        return Err(Error::Domain("mu is not finite".into()));
    }
    let rho = match prof.regime {
        Regime::Vkls => rho_arccos(mu),
        Regime::OneCutLeft => rho_arccos((prof.eta / 2.0).exp() * mu),
        Regime::TwoCut => {
            let ep = prof.endpoints.expect("two-cut profile carries endpoints");
            two_cut_density(prof.eta, &ep, mu)?
        }
    };
    Ok(DensitySample {
        mu,
        rho,
        h: rho - if mu <= 0.0 { 1.0 } else { 0.0 },
    })
}

fn two_cut_density(eta: f64, ep: &[f64; 4], mu: f64) -> Result<f64> {
    let [a, b, c, d] = *ep;
    if mu <= a || (mu >= b && mu <= c) {
        return Ok(1.0);
    }
    if mu >= d {
        return Ok(0.0);
    }
    let r = ((mu - a).abs() * (mu - b).abs() * (mu - c).abs() * (mu - d).abs()).sqrt();
    let tail = tail_integral(ep, mu);
    if mu > a && mu < b {
        let band = band_integral_regular(ep, mu);
        Ok(1.0 + r / PI * (tail - eta / (2.0 * PI) * band))
    } else {
        // mu in (c, d)
        let band = band_integral_principal_value(ep, mu);
        let rho = 1.0 - r / PI * (tail - eta / (2.0 * PI) * band);
        if !rho.is_finite() {
            return Err(Error::Convergence(format!(
                "density quadrature failed at mu = {mu}"
            )));
        }
        Ok(rho)
    }
}

/// int_d^inf dv / (R(v)(v - mu)), flattened by v = d + w^2/(1 - w^2).
fn tail_integral(ep: &[f64; 4], mu: f64) -> f64 {
    let [a, b, c, d] = *ep;
    quad::integrate(
        &|w: f64| {
            let u = w * w;
            let nu = d + u / (1.0 - u);
            let rr = ((nu - a) * (nu - b) * (nu - c)).sqrt();
            2.0 / ((1.0 - u).powf(1.5) * rr * (nu - mu))
        },
        0.0,
        1.0,
        240,
    )
}

/// int_c^d dv / (R(v)(v - mu)) for mu outside [c, d], by the cosine map.
fn band_integral_regular(ep: &[f64; 4], mu: f64) -> f64 {
    let [a, b, c, d] = *ep;
    let mid = 0.5 * (c + d);
    let hw = 0.5 * (d - c);
    quad::integrate(
        &|th: f64| {
            let nu = mid + hw * th.cos();
            let g = 1.0 / ((nu - a) * (nu - b)).sqrt();
            g / (nu - mu)
        },
        0.0,
        PI,
        200,
    )
}

/// p.v. int_c^d dv / (R(v)(v - mu)) for mu inside (c, d): subtract the
/// vanishing Chebyshev-kernel part, leaving a difference quotient of the
/// smooth factor g(v) = ((v-a)(v-b))^{-1/2}.
fn band_integral_principal_value(ep: &[f64; 4], mu: f64) -> f64 {
    let [a, b, c, d] = *ep;
    let mid = 0.5 * (c + d);
    let hw = 0.5 * (d - c);
    let g = |nu: f64| 1.0 / ((nu - a) * (nu - b)).sqrt();
    let g_mu = g(mu);
    // g' and g'' for the near-singular fallback
    let s_mu = 1.0 / (mu - a) + 1.0 / (mu - b);
    let gp_mu = -0.5 * g_mu * s_mu;
    let sp_mu = -1.0 / ((mu - a) * (mu - a)) - 1.0 / ((mu - b) * (mu - b));
    let gpp_mu = g_mu * (0.25 * s_mu * s_mu - 0.5 * sp_mu);
    quad::integrate(
        &|th: f64| {
            let nu = mid + hw * th.cos();
            let dist = nu - mu;
            if dist.abs() < 1e-7 * hw.max(1e-300) {
                gp_mu + 0.5 * dist * gpp_mu
            } else {
                (g(nu) - g_mu) / dist
            }
        },
        0.0,
        PI,
        200,
    )
}
