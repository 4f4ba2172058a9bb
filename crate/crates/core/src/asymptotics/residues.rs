//! Endpoint residue data of the outer-parametrix correction: the local
//! coefficients T, S, A, B, C at each band endpoint, the four (1,1)-residues,
//! and their sum X(x, t) = -1/24 + sum res, a real function periodic in t.
//!
//! The ratio chi(w) = theta11(w/2K - tL) / theta11(w/2K) and its first two
//! w-derivatives carry all the t-dependence. The b- and c-residues come with
//! an overall phase e^{-2 pi i t L} that combines with the anti-periodicity
//! of chi to make X periodic; reality is asserted numerically.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::elliptic::{theta_trip, weier, zeta_ipi_ratio, RectLattice, ThetaKind, WeierKind};
use crate::equilibrium::{profile, EquilibriumProfile, Regime};
use crate::error::{Error, Result};

/// Residue data at the four endpoints (order a, b, c, d).
#[derive(Debug, Clone)]
pub struct ResidueData {
    pub endpoints: [f64; 4],
    /// T: products of root distances
    pub t_coefs: [f64; 4],
    /// S: signed sixth of the inverse-distance sums
    pub s_coefs: [f64; 4],
    pub a_coefs: [f64; 4],
    pub b_coefs: [f64; 4],
    pub c_coefs: [f64; 4],
    /// the four (1,1)-residues
    pub res11: [Complex64; 4],
    /// X(x,t) = -1/24 + sum of the residues (real part; imaginary part is
    /// checked to vanish)
    pub x_value: f64,
}

struct ChiContext {
    lat: RectLattice,
    two_k: f64,
    tl: f64,
}

impl ChiContext {
    /// chi, chi', chi'' in the w variable.
    fn trip(&self, w: Complex64) -> Result<[Complex64; 3]> {
        let u = w / self.two_k;
        let num = theta_trip(ThetaKind::OneOne, u - self.tl, &self.lat)?;
        let den = theta_trip(ThetaKind::OneOne, u, &self.lat)?;
        let chi = num[0] / den[0];
        // d/dw = (1/2K) d/du on the ratio N(u - tL)/D(u)
        let dchi = (num[1] / den[0] - num[0] * den[1] / (den[0] * den[0])) / self.two_k;
        let ddchi = (num[2] / den[0] - 2.0 * num[1] * den[1] / (den[0] * den[0])
            - num[0] * den[2] / (den[0] * den[0])
            + 2.0 * num[0] * den[1] * den[1] / (den[0] * den[0] * den[0]))
            / (self.two_k * self.two_k);
        Ok([chi, dchi, ddchi])
    }
}

/// Residue data at (eta, x, t); two-cut phase only.
pub fn residues(eta: f64, x: f64, t: f64) -> Result<ResidueData> {
    let prof = profile(eta, x)?;
    residues_of(&prof, t)
}

pub(crate) fn residues_of(prof: &EquilibriumProfile, t: f64) -> Result<ResidueData> {
    if prof.regime != Regime::TwoCut {
        return Err(Error::Regime(format!(
            "residue data lives in the two-cut phase, got x = {}",
            prof.x
        )));
    }
    let eta = prof.eta;
    let k = prof.k.unwrap();
    let ep = prof.endpoints.unwrap();
    let [a, b, c, d] = ep;
    let m = prof.u;
    let lat = RectLattice::new(k)?;
    let zi = zeta_ipi_ratio(&lat);

    // uniformizer images of the endpoints
    let w_of = [
        Complex64::new(k, 0.0),      // a
        Complex64::new(k, PI),       // b
        Complex64::new(0.0, PI),     // c
        Complex64::new(0.0, 0.0),    // d
    ];

    let mut t_coefs = [0.0; 4];
    let mut s_coefs = [0.0; 4];
    let mut c_coefs = [0.0; 4];
    let mut a_coefs = [0.0; 4];
    let mut b_coefs = [0.0; 4];
    for (idx, &z0) in ep.iter().enumerate() {
        let others: Vec<f64> = ep.iter().copied().filter(|&z| z != z0).collect();
        t_coefs[idx] = others.iter().map(|z| (z0 - z).abs().sqrt()).product();
        let inv_sum: f64 = others.iter().map(|z| 1.0 / (z0 - z)).sum();
        let sign = if idx == 0 || idx == 2 { 1.0 } else { -1.0 };
        s_coefs[idx] = sign / 6.0 * inv_sum;

        let half = Complex64::new(eta / 2.0, 0.0);
        let zeta_sum = weier(WeierKind::Zeta, half + w_of[idx], &lat)?
            + weier(WeierKind::Zeta, half - w_of[idx], &lat)?;
        let c_val = -zi * eta + zeta_sum;
        if c_val.im.abs() > 1e-9 * c_val.norm().max(1.0) {
            return Err(Error::Convergence(format!(
                "endpoint coefficient acquired an imaginary part: {c_val}"
            )));
        }
        c_coefs[idx] = c_val.re;
        a_coefs[idx] = 8.0 * m / (3.0 * t_coefs[idx]) * c_coefs[idx];
        let wp_sum = weier(WeierKind::PPrime, half + w_of[idx], &lat)?
            + weier(WeierKind::PPrime, half - w_of[idx], &lat)?;
        b_coefs[idx] = 8.0 * m / (5.0 * t_coefs[idx])
            * (s_coefs[idx] * c_coefs[idx]
                - 2.0 * m * m / (3.0 * t_coefs[idx] * t_coefs[idx]) * wp_sum.re);
    }

    let chi = ChiContext {
        lat,
        two_k: 2.0 * k,
        tl: t * prof.l,
    };
    let half = eta / 2.0;
    // w_inf = eta/2, w_1 = eta/2 - K + i pi, w_2 = -eta/2 + K + i pi
    let denom_l = chi.trip(Complex64::new(k, -PI))?[0]; // chi(w_inf - w_1)
    let denom_r = chi.trip(Complex64::new(-k, -PI))?[0]; // chi(-w_inf - w_2)
    let phase = (-Complex64::i() * 2.0 * PI * t * prof.l).exp();

    // arguments of chi entering each endpoint's residue
    let arg_d = (Complex64::new(k - half, -PI), Complex64::new(half - k, -PI));
    let arg_a = (Complex64::new(2.0 * k - half, -PI), Complex64::new(half, -PI));
    let arg_b = (Complex64::new(2.0 * k - half, 0.0), Complex64::new(half, 0.0));
    let arg_c = (Complex64::new(k - half, 0.0), Complex64::new(half - k, 0.0));

    let d1 = chi.trip(arg_d.0)?;
    let d2 = chi.trip(arg_d.1)?;
    let a1 = chi.trip(arg_a.0)?;
    let a2 = chi.trip(arg_a.1)?;
    let b1 = chi.trip(arg_b.0)?;
    let b2 = chi.trip(arg_b.1)?;
    let c1 = chi.trip(arg_c.0)?;
    let c2 = chi.trip(arg_c.1)?;

    let base = |idx: usize| 1.0 / (a_coefs[idx] * denom_l * denom_r);

    // endpoint d
    let res_d = base(3)
        * (m / (18.0 * t_coefs[3]) * (d1[1] * d2[0] - d1[0] * d2[1])
            - m * m / (36.0 * t_coefs[3] * (d - b))
                * (5.0 * d1[2] * d2[0] + 14.0 * d1[1] * d2[1] + 5.0 * d1[0] * d2[2])
            + ((d - a) * (d - c) / (d - b)).sqrt() / 144.0
                * (10.0 * b_coefs[3] / a_coefs[3] - 5.0 / (d - a) + 5.0 / (d - b)
                    - 5.0 / (d - c)
                    + 14.0 * (d - b) / ((d - a) * (d - c)))
                * d1[0]
                * d2[0]);

    // endpoint a
    let res_a = base(0)
        * (-m / (18.0 * t_coefs[0]) * (a1[1] * a2[0] - a1[0] * a2[1])
            - m * m / (36.0 * t_coefs[0] * (c - a))
                * (5.0 * a1[2] * a2[0] + 14.0 * a1[1] * a2[1] + 5.0 * a1[0] * a2[2])
            + ((b - a) * (d - a) / (c - a)).sqrt() / 144.0
                * (10.0 * b_coefs[0] / a_coefs[0] + 5.0 / (a - b) - 5.0 / (a - c)
                    + 5.0 / (a - d)
                    + 14.0 * (c - a) / ((b - a) * (d - a)))
                * a1[0]
                * a2[0]);

    // endpoint b (carries the oscillatory phase; note the + sign on the
    // second-derivative block)
    let res_b = phase
        * base(1)
        * (-m / (18.0 * t_coefs[1]) * (b1[1] * b2[0] - b1[0] * b2[1])
            + m * m / (36.0 * t_coefs[1] * (d - b))
                * (5.0 * b1[2] * b2[0] + 14.0 * b1[1] * b2[1] + 5.0 * b1[0] * b2[2])
            + ((b - a) * (c - b) / (d - b)).sqrt() / 144.0
                * (-10.0 * b_coefs[1] / a_coefs[1] + 5.0 / (b - a) + 5.0 / (b - c)
                    - 5.0 / (b - d)
                    - 14.0 * (d - b) / ((b - a) * (c - b)))
                * b1[0]
                * b2[0]);

    // endpoint c (also carries the phase)
    let res_c = phase
        * base(2)
        * (-m / (18.0 * t_coefs[2]) * (c1[1] * c2[0] - c1[0] * c2[1])
            - m * m / (36.0 * t_coefs[2] * (c - a))
                * (5.0 * c1[2] * c2[0] + 14.0 * c1[1] * c2[1] + 5.0 * c1[0] * c2[2])
            + ((c - b) * (d - c) / (c - a)).sqrt() / 144.0
                * (10.0 * b_coefs[2] / a_coefs[2] - 5.0 / (c - a) + 5.0 / (c - b)
                    + 5.0 / (c - d)
                    + 14.0 * (c - a) / ((c - b) * (d - c)))
                * c1[0]
                * c2[0]);

    let total = Complex64::new(-1.0 / 24.0, 0.0) + res_a + res_b + res_c + res_d;
    if total.im.abs() > 1e-9 * total.norm().max(1.0) {
        return Err(Error::Convergence(format!(
            "residue sum failed the reality check: {total}"
        )));
    }
    Ok(ResidueData {
        endpoints: ep,
        t_coefs,
        s_coefs,
        a_coefs,
        b_coefs,
        c_coefs,
        res11: [res_a, res_b, res_c, res_d],
        x_value: total.re,
    })
}
