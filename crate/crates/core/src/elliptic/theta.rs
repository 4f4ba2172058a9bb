//! Jacobi theta functions on the modulus line tau = i*pi/K.
//!
//! Conventions:
//!
//! ```text
//! theta_00(z|tau) = sum_n e^{2 pi i n z + i pi n^2 tau}
//! theta_10(z|tau) = theta_00(z + 1/2 | tau)
//! theta_01(z|tau) = e^{i pi (z + tau/4)} theta_00(z + tau/2 | tau)
//! theta_11(z|tau) = i e^{i pi (z + tau/4)} theta_00(z + (1+tau)/2 | tau)
//! ```
//!
//! With q = e^{i pi tau} these reduce to the real trigonometric series
//!
//! ```text
//! theta_00(z) = 1 + 2 sum_{n>=1} q^{n^2} cos(2 pi n z)
//! theta_10(z) = 1 + 2 sum_{n>=1} (-1)^n q^{n^2} cos(2 pi n z)
//! theta_01(z) = 2 sum_{n>=0} q^{(n+1/2)^2} cos((2n+1) pi z)
//! theta_11(z) = -2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi z)
//! ```
//!
//! For K > pi the direct series in q = e^{-pi^2/K} degrades, so the value is
//! routed through the Jacobi imaginary transformation
//! theta(z|tau) = (-i tau)^{-1/2} e^{-i pi z^2 / tau} theta(z/tau | -1/tau),
//! which swaps the nome for e^{-K}. Arguments are first reduced into the
//! fundamental cell by the quasi-periodicity relations.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::{RectLattice, ThetaKind};

/// Series termination: stop once two consecutive terms fall below this
/// fraction of the accumulated magnitude.
const TERM_EPS: f64 = 1e-16;
/// Hard cap on the number of series terms.
const ITER_CAP: usize = 10_000;

/// Value and first two argument-derivatives of a theta function.
pub(crate) fn theta_trip(
    kind: ThetaKind,
    z: Complex64,
    lattice: &RectLattice,
) -> Result<[Complex64; 3]> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain("theta argument is not finite".into()));
    }
    let k = lattice.k();
    if k <= PI {
        theta_reduced(kind, z, PI / k)
    } else {
        theta_transformed(kind, z, k)
    }
}

/// Evaluates the theta function (or a z-derivative) per the crate contract.
pub fn theta(
    kind: ThetaKind,
    z: Complex64,
    lattice: &RectLattice,
    deriv_order: u8,
) -> Result<Complex64> {
    if deriv_order > 2 {
        return Err(Error::Domain(format!(
            "theta derivative order {deriv_order} not supported (max 2)"
        )));
    }
    Ok(theta_trip(kind, z, lattice)?[deriv_order as usize])
}

/// Direct evaluation for modulus i*im_tau after reduction into the
/// fundamental cell |Re z| <= 1/2, |Im z| <= im_tau/2.
#[doc(hidden)]
pub fn theta_reduced(kind: ThetaKind, z: Complex64, im_tau: f64) -> Result<[Complex64; 3]> {
    let n_shift = z.re.round();
    let m_shift = (z.im / im_tau).round();
    let tau = Complex64::new(0.0, im_tau);
    let zr = z - n_shift - m_shift * tau;
    let series = theta_series(kind, zr, im_tau)?;
    if n_shift == 0.0 && m_shift == 0.0 {
        return Ok(series);
    }
    // theta_ab(z + n + m tau) = (-1)^{bn+am} e^{-i pi m^2 tau - 2 pi i m z_r} theta_ab(z_r)
    let (a, b) = kind.characteristics();
    let mut sign = 1.0;
    if b == 1 && (n_shift as i64) % 2 != 0 {
        sign = -sign;
    }
    if a == 1 && (m_shift as i64) % 2 != 0 {
        sign = -sign;
    }
    let phase = (-Complex64::i() * PI * m_shift * m_shift * tau
        - Complex64::i() * 2.0 * PI * m_shift * zr)
        .exp()
        * sign;
    let dlog = -Complex64::i() * 2.0 * PI * m_shift; // d/dz of the exponent
    let f = phase * series[0];
    let fp = phase * (dlog * series[0] + series[1]);
    let fpp = phase * (dlog * dlog * series[0] + 2.0 * dlog * series[1] + series[2]);
    Ok([f, fp, fpp])
}

/// Jacobi imaginary transformation for K > pi: evaluates through the dual
/// series with nome e^{-K}. Kind pairing: 00<->00, 10<->01, 11->i*11.
fn theta_transformed(kind: ThetaKind, z: Complex64, k: f64) -> Result<[Complex64; 3]> {
    // Reduce the real part first: the transformed argument z/tau turns Re z
    // into an imaginary offset, which must stay within the dual cell.
    let n_shift = z.re.round();
    let zr = z - n_shift;
    let (_, b) = kind.characteristics();
    let outer_sign = if b == 1 && (n_shift as i64) % 2 != 0 {
        -1.0
    } else {
        1.0
    };

    let (dual_kind, extra) = match kind {
        ThetaKind::ZeroZero => (ThetaKind::ZeroZero, Complex64::new(1.0, 0.0)),
        ThetaKind::OneZero => (ThetaKind::ZeroOne, Complex64::new(1.0, 0.0)),
        ThetaKind::ZeroOne => (ThetaKind::OneZero, Complex64::new(1.0, 0.0)),
        ThetaKind::OneOne => (ThetaKind::OneOne, Complex64::i()),
    };
    let scale = (k / PI).sqrt(); // (-i tau)^{-1/2} with tau = i pi / K
    let alpha = Complex64::new(0.0, -k / PI); // d(z/tau)/dz
    let inner = alpha * zr;
    let g = theta_reduced(dual_kind, inner, k / PI)?;
    let gauss = (-k * zr * zr).exp() * scale * extra * outer_sign;
    let f = gauss * g[0];
    let fp = gauss * (-2.0 * k * zr * g[0] + alpha * g[1]);
    let fpp = gauss
        * ((4.0 * k * k * zr * zr - 2.0 * k) * g[0] - 4.0 * k * zr * alpha * g[1]
            + alpha * alpha * g[2]);
    Ok([f, fp, fpp])
}

fn theta_series(kind: ThetaKind, z: Complex64, im_tau: f64) -> Result<[Complex64; 3]> {
    let q_log = -PI * im_tau; // log q
    let two_pi = 2.0 * PI;
    let mut f = Complex64::new(0.0, 0.0);
    let mut fp = Complex64::new(0.0, 0.0);
    let mut fpp = Complex64::new(0.0, 0.0);
    let mut small_streak = 0;

    match kind {
        ThetaKind::ZeroZero | ThetaKind::OneZero => {
            f = Complex64::new(1.0, 0.0);
            let alternate = kind == ThetaKind::OneZero;
            for n in 1..=ITER_CAP {
                let nf = n as f64;
                let mut qn = ((nf * nf) * q_log).exp();
                if alternate && n % 2 == 1 {
                    qn = -qn;
                }
                let arg = two_pi * nf * z;
                let (s, c) = (arg.sin(), arg.cos());
                let t0 = 2.0 * qn * c;
                let t1 = -2.0 * qn * two_pi * nf * s;
                let t2 = -2.0 * qn * two_pi * two_pi * nf * nf * c;
                f += t0;
                fp += t1;
                fpp += t2;
                let mag = t0.norm().max(t1.norm()).max(t2.norm());
                let scale = f.norm().max(fp.norm()).max(fpp.norm()).max(1.0);
                if mag < TERM_EPS * scale {
                    small_streak += 1;
                    if small_streak >= 2 {
                        return Ok([f, fp, fpp]);
                    }
                } else {
                    small_streak = 0;
                }
            }
        }
        ThetaKind::ZeroOne | ThetaKind::OneOne => {
            let alternate = kind == ThetaKind::OneOne;
            for n in 0..=ITER_CAP {
                let half = n as f64 + 0.5;
                let mut qn = (half * half * q_log).exp();
                if alternate && n % 2 == 1 {
                    qn = -qn;
                }
                let m = 2.0 * half * PI; // (2n+1) pi
                let arg = m * z;
                let (s, c) = (arg.sin(), arg.cos());
                let (t0, t1, t2) = if alternate {
                    (-2.0 * qn * s, -2.0 * qn * m * c, 2.0 * qn * m * m * s)
                } else {
                    (2.0 * qn * c, -2.0 * qn * m * s, -2.0 * qn * m * m * c)
                };
                f += t0;
                fp += t1;
                fpp += t2;
                let mag = t0.norm().max(t1.norm()).max(t2.norm());
                let scale = f.norm().max(fp.norm()).max(fpp.norm()).max(1.0);
                if n > 0 && mag < TERM_EPS * scale {
                    small_streak += 1;
                    if small_streak >= 2 {
                        return Ok([f, fp, fpp]);
                    }
                } else {
                    small_streak = 0;
                }
            }
        }
    }
    Err(Error::Convergence(
        "theta series did not converge within the iteration cap".into(),
    ))
}
