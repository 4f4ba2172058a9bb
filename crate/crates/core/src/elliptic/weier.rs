//! Weierstrass sigma, zeta, and P functions with half-periods (K, i*pi).
//!
//! Two series representations are used, switched at K = pi where both
//! expansion parameters equal e^{-2 pi}:
//!
//! * trigonometric series in the nome e^{-2 pi^2 / K} (K < pi), built on the
//!   real half-period K;
//! * hyperbolic series in e^{-2K} (K >= pi), built on the imaginary
//!   half-period i*pi after a basis swap of the same lattice.
//!
//! Arguments are reduced into the fundamental cell |Re z| <= K,
//! |Im z| <= pi first; quasi-periodicity supplies the correction factors.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::RectLattice;

/// Member of the Weierstrass family to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeierKind {
    Sigma,
    Zeta,
    P,
    PPrime,
}

/// Quantity to differentiate in the real half-period at fixed argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeierDkKind {
    LogSigma,
    Zeta,
    P,
}

const TERM_EPS: f64 = 1e-16;
const ITER_CAP: usize = 10_000;
const POLE_RADIUS: f64 = 1e-10;

/// zeta(i*pi) / (i*pi), a real number.
///
/// For K >= pi this is the series -1/12 + (1/2) sum_n sinh(nK)^{-2}; for
/// K < pi it is recovered from the companion constant zeta(K) through the
/// Legendre identity.
pub fn zeta_ipi_ratio(lattice: &RectLattice) -> f64 {
    if lattice.k() >= PI {
        zeta_ipi_ratio_hyperbolic(lattice.k())
    } else {
        (zeta_k_trig(lattice.k()) - 0.5) / lattice.k()
    }
}

#[doc(hidden)]
pub fn zeta_ipi_ratio_hyperbolic(k: f64) -> f64 {
    let mut acc = -1.0 / 12.0;
    for n in 1..=ITER_CAP {
        let term = 0.5 / (n as f64 * k).sinh().powi(2);
        acc += term;
        if term < TERM_EPS * acc.abs() {
            break;
        }
    }
    acc
}

#[doc(hidden)]
pub fn zeta_ipi_ratio_trig(k: f64) -> f64 {
    (zeta_k_trig(k) - 0.5) / k
}

/// zeta(K) from the explicit sum over the trigonometric lattice direction.
fn zeta_k_trig(k: f64) -> f64 {
    let p2k = PI * PI / k;
    let mut acc = p2k / 12.0;
    for n in 1..=ITER_CAP {
        let term = 0.5 * p2k / (n as f64 * p2k).sinh().powi(2);
        acc -= term;
        if term < TERM_EPS * acc.abs() {
            break;
        }
    }
    acc
}

/// zeta(K), the quasi-period constant of the real half-period.
pub(crate) fn zeta_k(lattice: &RectLattice) -> f64 {
    if lattice.k() >= PI {
        0.5 + lattice.k() * zeta_ipi_ratio_hyperbolic(lattice.k())
    } else {
        zeta_k_trig(lattice.k())
    }
}

/// Evaluates sigma, zeta, P, or P' at `z`.
pub fn weier(kind: WeierKind, z: Complex64, lattice: &RectLattice) -> Result<Complex64> {
    weier_impl(kind, z, lattice, lattice.k() >= PI)
}

/// P''(z), needed by the half-period derivative formulas and the lattice
/// invariants.
pub(crate) fn wp_second(z: Complex64, lattice: &RectLattice) -> Result<Complex64> {
    let (z0, _, _) = reduce(z, lattice.k())?;
    guard_pole(z0)?;
    if lattice.k() >= PI {
        Ok(hyperbolic_wp2(z0, lattice.k()))
    } else {
        Ok(trig_wp2(z0, lattice.k()))
    }
}

#[doc(hidden)]
pub fn weier_trig_branch(kind: WeierKind, z: Complex64, lattice: &RectLattice) -> Result<Complex64> {
    weier_impl(kind, z, lattice, false)
}

#[doc(hidden)]
pub fn weier_hyperbolic_branch(
    kind: WeierKind,
    z: Complex64,
    lattice: &RectLattice,
) -> Result<Complex64> {
    weier_impl(kind, z, lattice, true)
}

fn weier_impl(
    kind: WeierKind,
    z: Complex64,
    lattice: &RectLattice,
    hyperbolic: bool,
) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain("argument is not finite".into()));
    }
    let k = lattice.k();
    let (z0, n_sh, m_sh) = reduce(z, k)?;
    if kind != WeierKind::Sigma {
        guard_pole(z0)?;
    }
    match kind {
        WeierKind::P => Ok(if hyperbolic {
            hyperbolic_wp(z0, k)
        } else {
            trig_wp(z0, k)
        }),
        WeierKind::PPrime => Ok(if hyperbolic {
            hyperbolic_wp_prime(z0, k)
        } else {
            trig_wp_prime(z0, k)
        }),
        WeierKind::Zeta => {
            let base = if hyperbolic {
                hyperbolic_zeta(z0, k)
            } else {
                trig_zeta(z0, k)
            };
            let zk = if hyperbolic {
                0.5 + k * zeta_ipi_ratio_hyperbolic(k)
            } else {
                zeta_k_trig(k)
            };
            let zi = if hyperbolic {
                zeta_ipi_ratio_hyperbolic(k)
            } else {
                (zk - 0.5) / k
            };
            // zeta(z + 2Kn + 2 pi i m) = zeta(z) + 2n zeta(K) + 2m zeta(i pi)
            Ok(base
                + 2.0 * n_sh as f64 * zk
                + 2.0 * m_sh as f64 * Complex64::new(0.0, PI) * zi)
        }
        WeierKind::Sigma => {
            let base = if hyperbolic {
                hyperbolic_sigma(z0, k)
            } else {
                trig_sigma(z0, k)
            };
            let zk = if hyperbolic {
                0.5 + k * zeta_ipi_ratio_hyperbolic(k)
            } else {
                zeta_k_trig(k)
            };
            let zi = if hyperbolic {
                zeta_ipi_ratio_hyperbolic(k)
            } else {
                (zk - 0.5) / k
            };
            let zeta_im = Complex64::new(0.0, PI) * zi; // zeta(i pi)
            // walk back from z0 to z applying sigma(w + 2w_j) = -e^{2 zeta(w_j)(w + w_j)} sigma(w)
            let mut value = base;
            let mut w = z0;
            let omega_re = Complex64::new(k, 0.0);
            let omega_im = Complex64::new(0.0, PI);
            for _ in 0..n_sh.abs() {
                if n_sh > 0 {
                    value = -value * (2.0 * zk * (w + omega_re)).exp();
                    w += 2.0 * omega_re;
                } else {
                    value = -value * (-2.0 * zk * (w - omega_re)).exp();
                    w -= 2.0 * omega_re;
                }
            }
            for _ in 0..m_sh.abs() {
                if m_sh > 0 {
                    value = -value * (2.0 * zeta_im * (w + omega_im)).exp();
                    w += 2.0 * omega_im;
                } else {
                    value = -value * (-2.0 * zeta_im * (w - omega_im)).exp();
                    w -= 2.0 * omega_im;
                }
            }
            Ok(value)
        }
    }
}

/// Reduces `z` into the fundamental cell, returning the shift counts.
fn reduce(z: Complex64, k: f64) -> Result<(Complex64, i64, i64)> {
    let n = (z.re / (2.0 * k)).round();
    let m = (z.im / (2.0 * PI)).round();
    if n.abs() > 1e6 || m.abs() > 1e6 {
        return Err(Error::Domain("argument too far from the fundamental cell".into()));
    }
    let z0 = Complex64::new(z.re - 2.0 * k * n, z.im - 2.0 * PI * m);
    Ok((z0, n as i64, m as i64))
}

fn guard_pole(z0: Complex64) -> Result<()> {
    if z0.norm() < POLE_RADIUS {
        Err(Error::Pole { re: z0.re, im: z0.im })
    } else {
        Ok(())
    }
}

// ---- trigonometric branch (parameter e^{-2 pi^2 / K}, valid for K < pi) ----

fn trig_nome(k: f64) -> f64 {
    (-2.0 * PI * PI / k).exp()
}

fn trig_sigma(z: Complex64, k: f64) -> Complex64 {
    let q = trig_nome(k);
    let zk = zeta_k_trig(k);
    let u = PI / (2.0 * k) * z;
    let mut prod = Complex64::new(1.0, 0.0);
    let cos2u = (2.0 * u).cos();
    let mut qn = 1.0;
    for _ in 1..=ITER_CAP {
        qn *= q;
        let num = 1.0 - 2.0 * qn * cos2u + qn * qn;
        let den = (1.0 - qn).powi(2);
        prod *= num / den;
        if qn < TERM_EPS {
            break;
        }
    }
    (2.0 * k / PI) * (zk * z * z / (2.0 * k)).exp() * u.sin() * prod
}

fn trig_zeta(z: Complex64, k: f64) -> Complex64 {
    let q = trig_nome(k);
    let zk = zeta_k_trig(k);
    let a = PI / (2.0 * k);
    let u = a * z;
    let mut acc = zk * z / k + a * u.cos() / u.sin();
    let mut qn = 1.0;
    for n in 1..=ITER_CAP {
        qn *= q;
        let term = 4.0 * a * qn / (1.0 - qn) * (2.0 * n as f64 * u).sin();
        acc += term;
        if qn < TERM_EPS && term.norm() < TERM_EPS * acc.norm().max(1.0) {
            break;
        }
    }
    acc
}

fn trig_wp(z: Complex64, k: f64) -> Complex64 {
    let q = trig_nome(k);
    let zk = zeta_k_trig(k);
    let a = PI / (2.0 * k);
    let u = a * z;
    let s = u.sin();
    let mut acc = -zk / k + a * a / (s * s);
    let mut qn = 1.0;
    for n in 1..=ITER_CAP {
        qn *= q;
        let nf = n as f64;
        let term = -8.0 * a * a * nf * qn / (1.0 - qn) * (2.0 * nf * u).cos();
        acc += term;
        if qn < TERM_EPS && term.norm() < TERM_EPS * acc.norm().max(1.0) {
            break;
        }
    }
    acc
}

fn trig_wp_prime(z: Complex64, k: f64) -> Complex64 {
    let q = trig_nome(k);
    let a = PI / (2.0 * k);
    let u = a * z;
    let s = u.sin();
    let mut acc = -2.0 * a.powi(3) * u.cos() / (s * s * s);
    let mut qn = 1.0;
    for n in 1..=ITER_CAP {
        qn *= q;
        let nf = n as f64;
        let term = 16.0 * a.powi(3) * nf * nf * qn / (1.0 - qn) * (2.0 * nf * u).sin();
        acc += term;
        if qn < TERM_EPS && term.norm() < TERM_EPS * acc.norm().max(1.0) {
            break;
        }
    }
    acc
}

fn trig_wp2(z: Complex64, k: f64) -> Complex64 {
    let q = trig_nome(k);
    let a = PI / (2.0 * k);
    let u = a * z;
    let s = u.sin();
    let c = u.cos();
    let mut acc = a.powi(4) * (6.0 * c * c / (s * s * s * s) + 2.0 / (s * s));
    let mut qn = 1.0;
    for n in 1..=ITER_CAP {
        qn *= q;
        let nf = n as f64;
        let term = 32.0 * a.powi(4) * nf.powi(3) * qn / (1.0 - qn) * (2.0 * nf * u).cos();
        acc += term;
        if qn < TERM_EPS && term.norm() < TERM_EPS * acc.norm().max(1.0) {
            break;
        }
    }
    acc
}

// ---- hyperbolic branch (parameter e^{-2K}, valid for K >= pi) ----

fn hyperbolic_sigma(z: Complex64, k: f64) -> Complex64 {
    let p = (-2.0 * k).exp();
    let zi = zeta_ipi_ratio_hyperbolic(k);
    let cosh_z = z.cosh();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut pn = 1.0;
    for _ in 1..=ITER_CAP {
        pn *= p;
        let num = 1.0 - 2.0 * pn * cosh_z + pn * pn;
        let den = (1.0 - pn).powi(2);
        prod *= num / den;
        if pn < TERM_EPS {
            break;
        }
    }
    2.0 * (z / 2.0).sinh() * (zi * z * z / 2.0).exp() * prod
}

fn hyperbolic_zeta(z: Complex64, k: f64) -> Complex64 {
    let p = (-2.0 * k).exp();
    let zi = zeta_ipi_ratio_hyperbolic(k);
    let half = z / 2.0;
    let mut acc = zi * z + 0.5 * half.cosh() / half.sinh();
    let mut pn = 1.0;
    for n in 1..=ITER_CAP {
        pn *= p;
        let term = -2.0 * pn / (1.0 - pn) * (n as f64 * z).sinh();
        acc += term;
        if pn < TERM_EPS && term.norm() < TERM_EPS * acc.norm().max(1.0) {
            break;
        }
    }
    acc
}

fn hyperbolic_wp(z: Complex64, k: f64) -> Complex64 {
    let p = (-2.0 * k).exp();
    let zi = zeta_ipi_ratio_hyperbolic(k);
    let sh = (z / 2.0).sinh();
    let mut acc = Complex64::new(-zi, 0.0) + 0.25 / (sh * sh);
    let mut pn = 1.0;
    for n in 1..=ITER_CAP {
        pn *= p;
        let nf = n as f64;
        let term = 2.0 * nf * pn / (1.0 - pn) * (nf * z).cosh();
        acc += term;
        if pn < TERM_EPS && term.norm() < TERM_EPS * acc.norm().max(1.0) {
            break;
        }
    }
    acc
}

fn hyperbolic_wp_prime(z: Complex64, k: f64) -> Complex64 {
    let p = (-2.0 * k).exp();
    let sh = (z / 2.0).sinh();
    let ch = (z / 2.0).cosh();
    let mut acc = -0.25 * ch / (sh * sh * sh);
    let mut pn = 1.0;
    for n in 1..=ITER_CAP {
        pn *= p;
        let nf = n as f64;
        let term = 2.0 * nf * nf * pn / (1.0 - pn) * (nf * z).sinh();
        acc += term;
        if pn < TERM_EPS && term.norm() < TERM_EPS * acc.norm().max(1.0) {
            break;
        }
    }
    acc
}

fn hyperbolic_wp2(z: Complex64, k: f64) -> Complex64 {
    let p = (-2.0 * k).exp();
    let sh = (z / 2.0).sinh();
    let ch = (z / 2.0).cosh();
    let mut acc =
        (6.0 * ch * ch / (sh * sh * sh * sh) - 2.0 / (sh * sh)) / 16.0;
    let mut pn = 1.0;
    for n in 1..=ITER_CAP {
        pn *= p;
        let nf = n as f64;
        let term = 2.0 * nf.powi(3) * pn / (1.0 - pn) * (nf * z).cosh();
        acc += term;
        if pn < TERM_EPS && term.norm() < TERM_EPS * acc.norm().max(1.0) {
            break;
        }
    }
    acc
}

// ---- lattice invariants and K-derivatives ----

/// Invariant g2 of the lattice, from P'' = 6 P^2 - g2/2 at a reference point.
pub fn invariant_g2(lattice: &RectLattice) -> Result<f64> {
    let z_ref = Complex64::new(0.37 * lattice.k(), 0.41 * PI);
    let wp = weier(WeierKind::P, z_ref, lattice)?;
    let wp2 = wp_second(z_ref, lattice)?;
    let g2 = 12.0 * wp * wp - 2.0 * wp2;
    debug_assert!(
        {
            let z2 = Complex64::new(0.59 * lattice.k(), 0.23 * PI);
            let alt = 12.0 * weier(WeierKind::P, z2, lattice)?.powi(2)
                - 2.0 * wp_second(z2, lattice)?;
            (alt - g2).norm() < 1e-8 * (1.0 + g2.norm())
        },
        "g2 reference points disagree"
    );
    Ok(g2.re)
}

/// Invariant g3, from the first-order differential equation of P at a
/// reference point (requires g2).
pub fn invariant_g3(lattice: &RectLattice) -> Result<f64> {
    let g2 = invariant_g2(lattice)?;
    let z_ref = Complex64::new(0.37 * lattice.k(), 0.41 * PI);
    let wp = weier(WeierKind::P, z_ref, lattice)?;
    let wpp = weier(WeierKind::PPrime, z_ref, lattice)?;
    Ok((4.0 * wp.powi(3) - g2 * wp - wpp * wpp).re)
}

/// Derivative in the real half-period K at fixed argument, by the closed
/// formulas involving g2 and zeta(i pi)/(i pi).
pub fn weier_dk(kind: WeierDkKind, z: Complex64, lattice: &RectLattice) -> Result<Complex64> {
    let g2 = invariant_g2(lattice)?;
    let zi = zeta_ipi_ratio(lattice);
    let zeta = weier(WeierKind::Zeta, z, lattice)?;
    let wp = weier(WeierKind::P, z, lattice)?;
    match kind {
        WeierDkKind::LogSigma => {
            Ok(wp - zeta * zeta - g2 * z * z / 12.0 + 2.0 * zi * (z * zeta - 1.0))
        }
        WeierDkKind::Zeta => {
            let wpp = weier(WeierKind::PPrime, z, lattice)?;
            Ok(wpp + 2.0 * zeta * wp - g2 * z / 6.0 + 2.0 * zi * (zeta - z * wp))
        }
        WeierDkKind::P => {
            let wpp = weier(WeierKind::PPrime, z, lattice)?;
            let wp2 = wp_second(z, lattice)?;
            Ok(-wp2 + 2.0 * wp * wp - 2.0 * zeta * wpp + g2 / 6.0 + 2.0 * zi * (2.0 * wp + z * wpp))
        }
    }
}

/// d/dK of zeta(i pi): the closed form 2 zeta(i pi)^2/(i pi) - (i pi/6) g2.
pub fn zeta_ipi_dk(lattice: &RectLattice) -> Result<Complex64> {
    let g2 = invariant_g2(lattice)?;
    let zi = zeta_ipi_ratio(lattice);
    let ipi = Complex64::new(0.0, PI);
    let zeta_ipi = ipi * zi;
    Ok(2.0 * zeta_ipi * zeta_ipi / ipi - ipi / 6.0 * g2)
}
