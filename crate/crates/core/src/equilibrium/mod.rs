//! Equilibrium measure of the constrained log-gas: the implicit half-period
//! K(x), the rate function and its derivatives, band endpoints, pointwise
//! densities, and the logarithmic-energy functional.
//!
//! The position axis splits into three phases at x_* = -2(1-e^{-eta})/eta
//! and at 2: a rescaled arccosine profile on the left, a two-band profile
//! with two saturated regions in the middle, and the plain arccosine profile
//! on the right.

mod density;
mod energy;

pub use density::{density, DensitySample};
pub use energy::{
    energy, energy_of_profile, variational_check, EnergyEstimate, VariationalSample, Zone,
};

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::elliptic::{theta, weier, zeta_ipi_ratio, RectLattice, ThetaKind, WeierKind};
use crate::error::{Error, Result};
use crate::quad;

/// Phase of the equilibrium measure at a given position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// x <= x_*: rescaled arccosine density.
    OneCutLeft,
    /// x_* < x < 2: two bands, two saturated regions.
    TwoCut,
    /// x >= 2: arccosine density, zero rate function.
    Vkls,
}

/// Everything the downstream layers need about the equilibrium problem at a
/// given (eta, x).
#[derive(Debug, Clone)]
pub struct EquilibriumProfile {
    pub eta: f64,
    pub x: f64,
    pub regime: Regime,
    pub x_star: f64,
    /// Implicit half-period, two-cut regime only.
    pub k: Option<f64>,
    /// The transcendental-equation pair at K (limit values outside TwoCut).
    pub u: f64,
    pub v: f64,
    /// Slope function: 0 for x <= x_*, the band formula in between, -x for
    /// x >= 2 (the continuation through K = eta/2).
    pub l: f64,
    /// Band endpoints a < b < c < d (two-cut regime only).
    pub endpoints: Option<[f64; 4]>,
    pub f: f64,
    pub df: f64,
    pub d2f: f64,
    pub g1: f64,
    pub g_inf: f64,
    pub ell: f64,
}

/// Critical position x_* = -2(1-e^{-eta})/eta where the saturated regions merge.
pub fn x_star(eta: f64) -> Result<f64> {
    check_eta(eta)?;
    Ok(-2.0 * (1.0 - (-eta).exp()) / eta)
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::Domain(format!("eta must be positive, got {eta}")));
    }
    Ok(())
}

fn check_k_domain(eta: f64, k: f64) -> Result<()> {
    if !(k > eta / 2.0) || !k.is_finite() {
        return Err(Error::Domain(format!(
            "half-period K must exceed eta/2 = {}, got {k}",
            eta / 2.0
        )));
    }
    Ok(())
}

/// The function U(K) > 0 from the endpoint system, in its Weierstrass-sigma
/// form exp(-eta/2 - zi eta^2/2) sigma(eta | K, i pi).
pub fn u_of_k(eta: f64, k: f64) -> Result<f64> {
    check_eta(eta)?;
    check_k_domain(eta, k)?;
    let lat = RectLattice::new(k)?;
    let zi = zeta_ipi_ratio(&lat);
    let sigma = weier(WeierKind::Sigma, Complex64::new(eta, 0.0), &lat)?;
    let value = (-eta / 2.0 - zi * eta * eta / 2.0).exp() * sigma.re;
    debug_assert!(
        {
            let twin = u_theta_form(eta, k, &lat).unwrap_or(f64::NAN);
            (twin - value).abs() <= 1e-10 * value.abs().max(1e-3)
        },
        "sigma-form and theta-form of U disagree"
    );
    Ok(value)
}

/// Theta-function twin of `u_of_k`: 2K e^{(eta/2)(eta/2K - 1)}
/// theta_11(eta/2K) / theta_11'(0), modulus i pi / K.
#[doc(hidden)]
pub fn u_theta_form(eta: f64, k: f64, lat: &RectLattice) -> Result<f64> {
    let arg = Complex64::new(eta / (2.0 * k), 0.0);
    let th = theta(ThetaKind::OneOne, arg, lat, 0)?;
    let thp0 = theta(ThetaKind::OneOne, Complex64::new(0.0, 0.0), lat, 1)?;
    let pref = 2.0 * k * ((eta / 2.0) * (eta / (2.0 * k) - 1.0)).exp();
    Ok(pref * (th / thp0).re)
}

/// The companion function V(K) = 1 + K (Z^2 - P(eta) + 2 zi) with
/// Z = zeta(eta) - eta zi.
pub fn v_of_k(eta: f64, k: f64) -> Result<f64> {
    check_eta(eta)?;
    check_k_domain(eta, k)?;
    let lat = RectLattice::new(k)?;
    let zi = zeta_ipi_ratio(&lat);
    let zeta_eta = weier(WeierKind::Zeta, Complex64::new(eta, 0.0), &lat)?.re;
    let wp_eta = weier(WeierKind::P, Complex64::new(eta, 0.0), &lat)?.re;
    let z = zeta_eta - eta * zi;
    Ok(1.0 + k * (z * z - wp_eta + 2.0 * zi))
}

/// Product U(K) V(K), the left side of the transcendental endpoint equation.
pub fn uv_product(eta: f64, k: f64) -> Result<f64> {
    Ok(u_of_k(eta, k)? * v_of_k(eta, k)?)
}

/// Solves U(K) V(K) = -eta x / 2 for the implicit half-period K(x),
/// x strictly inside (x_*, 2). The product is monotone increasing in K with
/// range (-eta, 1 - e^{-eta}), so a bracket-and-bisect scheme is safe.
pub fn solve_k(eta: f64, x: f64) -> Result<f64> {
    check_eta(eta)?;
    let xs = x_star(eta)?;
    if !(x > xs && x < 2.0) {
        return Err(Error::Regime(format!(
            "K(x) is defined for x in ({xs}, 2), got {x}"
        )));
    }
    let target = -eta * x / 2.0;
    let mut lo = eta / 2.0 * (1.0 + 1e-8);
    let mut hi = eta.max(4.0);
    let mut f_hi = uv_product(eta, hi)? - target;
    let mut grow_guard = 0;
    while f_hi < 0.0 {
        hi *= 2.0;
        f_hi = uv_product(eta, hi)? - target;
        grow_guard += 1;
        if grow_guard > 60 {
            return Err(Error::Convergence(
                "bracket expansion for K(x) failed".into(),
            ));
        }
    }
    let f_lo = uv_product(eta, lo)? - target;
    if f_lo > 0.0 {
        // root sits between eta/2 and lo; the bracketing start is already
        // within 1e-8 relative of the lower boundary
        return Ok(lo);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) < 1e-13 * hi {
            break;
        }
        let f_mid = uv_product(eta, mid)? - target;
        if f_mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Slope function on the two-cut phase: -(eta x / 2 + U(K)) / K.
fn l_two_cut(eta: f64, x: f64, k: f64, u: f64, v: f64) -> f64 {
    let l = -(eta * x / 2.0 + u) / k;
    debug_assert!(
        (l - u * (v - 1.0) / k).abs() <= 1e-10 * l.abs().max(1e-6),
        "the two algebraic forms of L disagree"
    );
    l
}

/// Full equilibrium data at (eta, x). Total over real x: the regime dispatch
/// resolves the junctions |x - x_*| < 1e-12 and |x - 2| < 1e-12 to the
/// closed-form outer branches.
pub fn profile(eta: f64, x: f64) -> Result<EquilibriumProfile> {
    check_eta(eta)?;
    if !x.is_finite() {
        return Err(Error::Domain("x is not finite".into()));
    }
    let xs = x_star(eta)?;
    let em = (-eta).exp();
    if x <= xs + 1e-12 {
        return Ok(EquilibriumProfile {
            eta,
            x,
            regime: Regime::OneCutLeft,
            x_star: xs,
            k: None,
            u: 1.0 - em,
            v: 1.0,
            l: 0.0,
            endpoints: None,
            f: eta * x * x / 2.0 + 1.0 - em,
            df: eta * x,
            d2f: eta,
            g1: -em,
            g_inf: eta * (-eta / 2.0).exp(),
            ell: eta * (2.0 * (-eta / 2.0).exp() - x),
        });
    }
    if x >= 2.0 - 1e-12 {
        return Ok(EquilibriumProfile {
            eta,
            x,
            regime: Regime::Vkls,
            x_star: xs,
            k: None,
            u: 0.0,
            v: 1.0,
            l: -x,
            endpoints: None,
            f: 0.0,
            df: 0.0,
            d2f: 0.0,
            g1: -1.0,
            g_inf: 0.0,
            ell: 0.0,
        });
    }

    let k = solve_k(eta, x)?;
    let u = u_of_k(eta, k)?;
    let v = v_of_k(eta, k)?;
    let l = l_two_cut(eta, x, k, u, v);
    let lat = RectLattice::new(k)?;
    let zi = zeta_ipi_ratio(&lat);
    let wp_eta = weier(WeierKind::P, Complex64::new(eta, 0.0), &lat)?.re;
    let zeta_k_val = weier(WeierKind::Zeta, Complex64::new(k, 0.0), &lat)?.re;
    let zeta_eta = weier(WeierKind::Zeta, Complex64::new(eta, 0.0), &lat)?.re;
    let zeta_eta_half = weier(WeierKind::Zeta, Complex64::new(eta / 2.0, 0.0), &lat)?.re;

    let f = 1.0 + (eta / 2.0) * (1.0 - eta / (2.0 * k)) * x * x - 3.0 * eta * u / (4.0 * k) * x
        - u * u * (wp_eta + zeta_k_val / k);
    let df = eta * (x + l);
    let d2f = eta * (1.0 - eta / (2.0 * k));
    let g1 = -u * u * (wp_eta + zi - (v - 1.0) / (2.0 * k));
    let base = zi * eta - 2.0 * zeta_eta + 2.0 * zeta_eta_half;
    let g_inf = eta * u / 2.0 * (base + (v - 1.0) / k);
    let ell = eta * u * (base + 2.0 * v / eta);
    let endpoints = endpoints_weier_form(eta, k, u, &lat)?;

    Ok(EquilibriumProfile {
        eta,
        x,
        regime: Regime::TwoCut,
        x_star: xs,
        k: Some(k),
        u,
        v,
        l,
        endpoints: Some(endpoints),
        f,
        df,
        d2f,
        g1,
        g_inf,
        ell,
    })
}

/// Band endpoints a < b < x < c < d in the two-cut phase.
pub fn endpoints(eta: f64, x: f64) -> Result<[f64; 4]> {
    let prof = profile(eta, x)?;
    prof.endpoints.ok_or_else(|| {
        Error::Regime(format!(
            "endpoints are defined in the two-cut phase ({}, 2), got x = {x}",
            prof.x_star
        ))
    })
}

/// Weierstrass-zeta form of the endpoints.
fn endpoints_weier_form(eta: f64, k: f64, u: f64, lat: &RectLattice) -> Result<[f64; 4]> {
    let zi = zeta_ipi_ratio(lat);
    let zeta_eta = weier(WeierKind::Zeta, Complex64::new(eta, 0.0), lat)?;
    let base = Complex64::new(zi * eta, 0.0) - 2.0 * zeta_eta;
    let zc = Complex64::new;
    let half = eta / 2.0;
    let za = base
        + weier(WeierKind::Zeta, zc(half + k, 0.0), lat)?
        + weier(WeierKind::Zeta, zc(half - k, 0.0), lat)?;
    let zb = base
        + weier(WeierKind::Zeta, zc(half + k, PI), lat)?
        + weier(WeierKind::Zeta, zc(half - k, -PI), lat)?;
    let zcc = base
        + weier(WeierKind::Zeta, zc(half, PI), lat)?
        + weier(WeierKind::Zeta, zc(half, -PI), lat)?;
    let zd = base + 2.0 * weier(WeierKind::Zeta, zc(half, 0.0), lat)?;
    for (name, v) in [("a", za), ("b", zb), ("c", zcc), ("d", zd)] {
        if v.im.abs() > 1e-9 * v.norm().max(1.0) {
            return Err(Error::Convergence(format!(
                "endpoint {name} acquired a spurious imaginary part {v}"
            )));
        }
    }
    Ok([u * za.re, u * zb.re, u * zcc.re, u * zd.re])
}

/// Theta-function twin of the endpoints, through the affine map
/// T(v) = (U/K)(v - eta/2 - [theta11'/theta11](eta/2K)).
#[doc(hidden)]
pub fn endpoints_theta_form(eta: f64, x: f64) -> Result<[f64; 4]> {
    let k = solve_k(eta, x)?;
    let u = u_of_k(eta, k)?;
    let lat = RectLattice::new(k)?;
    let log_deriv = |kind: ThetaKind, z: f64| -> Result<f64> {
        let arg = Complex64::new(z, 0.0);
        let f = theta(kind, arg, &lat, 0)?;
        let fp = theta(kind, arg, &lat, 1)?;
        Ok((fp / f).re)
    };
    let shift = eta / 2.0 + log_deriv(ThetaKind::OneOne, eta / (2.0 * k))?;
    let affine = |v: f64| u / k * (v - shift);
    let arg = eta / (4.0 * k);
    Ok([
        affine(log_deriv(ThetaKind::ZeroOne, arg)?),
        affine(log_deriv(ThetaKind::ZeroZero, arg)?),
        affine(log_deriv(ThetaKind::OneZero, arg)?),
        affine(log_deriv(ThetaKind::OneOne, arg)?),
    ])
}

/// Theta-function twin of the closed-form rate function value (two-cut).
#[doc(hidden)]
pub fn rate_theta_form(eta: f64, x: f64) -> Result<f64> {
    let k = solve_k(eta, x)?;
    let u = u_of_k(eta, k)?;
    let lat = RectLattice::new(k)?;
    let arg = Complex64::new(eta / (2.0 * k), 0.0);
    let f0 = theta(ThetaKind::OneOne, arg, &lat, 0)?;
    let f1 = theta(ThetaKind::OneOne, arg, &lat, 1)?;
    let f2 = theta(ThetaKind::OneOne, arg, &lat, 2)?;
    // d^2/d eta^2 of log theta11(eta / 2K)
    let dd = ((f2 / f0) - (f1 / f0) * (f1 / f0)).re / (4.0 * k * k);
    Ok(1.0 + (eta / 2.0) * (1.0 - eta / (2.0 * k)) * x * x - 3.0 * eta * u / (4.0 * k) * x
        + u * u * dd)
}

/// Rate function through the integral representation
/// eta x^2/2 + 1 - e^{-eta} + eta * int_{x_*}^x L(y) dy.
///
/// Each integrand evaluation costs a K-solve; this route is a cross-check
/// oracle for the closed form, not a production path.
pub fn rate_integral(eta: f64, x: f64) -> Result<f64> {
    check_eta(eta)?;
    let xs = x_star(eta)?;
    let em = (-eta).exp();
    if x <= xs {
        return Ok(eta * x * x / 2.0 + 1.0 - em);
    }
    if x >= 2.0 {
        return Ok(0.0);
    }
    let integral = quad::integrate_adaptive(
        &|y: f64| {
            if y <= xs || y >= 2.0 {
                return 0.0;
            }
            match solve_k(eta, y) {
                Ok(k) => {
                    let u = u_of_k(eta, k).unwrap_or(f64::NAN);
                    -(eta * y / 2.0 + u) / k
                }
                Err(_) => 0.0,
            }
        },
        xs,
        x,
        1e-11,
    )?;
    Ok(eta * x * x / 2.0 + 1.0 - em + eta * integral)
}
