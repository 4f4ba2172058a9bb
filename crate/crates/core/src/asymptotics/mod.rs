//! Explicit large-t predictions: the expansion of log Q, oscillatory
//! amplitudes, Toda background profiles, endpoint residue data with the
//! log-t coefficient, and the growth-model lower-tail rate function.

mod residues;

pub use residues::{residues, ResidueData};

use num_complex::Complex64;

use crate::elliptic::{theta, RectLattice, ThetaKind};
use crate::equilibrium::{profile, EquilibriumProfile, Regime};
use crate::error::{Error, Result};
use crate::quad;

/// All the explicit asymptotic terms at (eta, x, t), plus the predicted
/// observables.
#[derive(Debug, Clone)]
pub struct AsymptoticPrediction {
    pub eta: f64,
    pub x: f64,
    pub t: f64,
    pub regime: Regime,
    /// -t^2 F(x)
    pub leading: f64,
    /// log theta(t L | i pi / K), two-cut phase only (0 elsewhere)
    pub theta_osc: f64,
    /// A(eta) log t, two-cut phase only
    pub log_term: f64,
    pub predicted_log_beta: f64,
    pub predicted_alpha: f64,
    /// set when x is within 1e-3 of a transition point, where the expansion
    /// loses uniformity
    pub near_transition: bool,
}

/// Toda background profiles: the linear-in-t slope, the bounded oscillatory
/// part, and the Flaschka backgrounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TodaAsym {
    pub y1: f64,
    pub y0: f64,
    pub a0: f64,
    pub b0: f64,
}

/// Value and maximizer of the lower-tail rate function of the growth model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiMinusResult {
    pub value: f64,
    pub argmax_y: f64,
}

fn theta00_ratio(lat: &RectLattice, z: f64) -> Result<(f64, f64)> {
    let arg = Complex64::new(z, 0.0);
    let f = theta(ThetaKind::ZeroZero, arg, lat, 0)?;
    let fp = theta(ThetaKind::ZeroZero, arg, lat, 1)?;
    Ok((f.re, (fp / f).re))
}

/// Oscillatory amplitudes (p0, p_plus) in the two-cut phase:
/// p0 = e^{(eta/2)(eta/2K - 1)} [th11(eta/2K)/th11'(0)] th'(tL)/th(tL),
/// p_plus = e^{(eta/2)(eta/2K - 1)} th(tL + eta/2K)/th(tL).
pub fn p_amplitudes(eta: f64, x: f64, t: f64) -> Result<(f64, f64)> {
    let prof = profile(eta, x)?;
    p_amplitudes_of(&prof, t)
}

pub(crate) fn p_amplitudes_of(prof: &EquilibriumProfile, t: f64) -> Result<(f64, f64)> {
    let k = prof.k.ok_or_else(|| {
        Error::Regime(format!(
            "oscillatory amplitudes live in the two-cut phase, got x = {}",
            prof.x
        ))
    })?;
    let eta = prof.eta;
    let lat = RectLattice::new(k)?;
    let pref = ((eta / 2.0) * (eta / (2.0 * k) - 1.0)).exp();
    let th11 = theta(ThetaKind::OneOne, Complex64::new(eta / (2.0 * k), 0.0), &lat, 0)?;
    let th11p0 = theta(ThetaKind::OneOne, Complex64::new(0.0, 0.0), &lat, 1)?;
    let (_, log_deriv) = theta00_ratio(&lat, t * prof.l)?;
    let p0 = pref * (th11 / th11p0).re * log_deriv;
    debug_assert!(
        {
            // algebraic twin through U: p0 = (U / 2K) th'(tL)/th(tL)
            let twin = prof.u / (2.0 * k) * log_deriv;
            (twin - p0).abs() <= 1e-10 * p0.abs().max(1e-8)
        },
        "the two forms of p0 disagree"
    );
    let num = theta(
        ThetaKind::ZeroZero,
        Complex64::new(t * prof.l + eta / (2.0 * k), 0.0),
        &lat,
        0,
    )?;
    let den = theta(ThetaKind::ZeroZero, Complex64::new(t * prof.l, 0.0), &lat, 0)?;
    let p_plus = pref * (num / den).re;
    Ok((p0, p_plus))
}

/// Full asymptotic prediction at (eta, x, t).
pub fn predict(eta: f64, x: f64, t: f64) -> Result<AsymptoticPrediction> {
    let prof = profile(eta, x)?;
    let xs = prof.x_star;
    let near_transition = (x - xs).abs() < 1e-3 || (2.0 - x).abs() < 1e-3;
    match prof.regime {
        Regime::OneCutLeft => Ok(AsymptoticPrediction {
            eta,
            x,
            t,
            regime: prof.regime,
            leading: -t * t * prof.f,
            theta_osc: 0.0,
            log_term: 0.0,
            predicted_log_beta: x * t * eta - eta / 2.0,
            predicted_alpha: t * (1.0 - (-eta).exp()),
            near_transition,
        }),
        Regime::Vkls => Ok(AsymptoticPrediction {
            eta,
            x,
            t,
            regime: prof.regime,
            leading: 0.0,
            theta_osc: 0.0,
            log_term: 0.0,
            predicted_log_beta: 0.0,
            predicted_alpha: 0.0,
            near_transition,
        }),
        Regime::TwoCut => {
            let k = prof.k.unwrap();
            let lat = RectLattice::new(k)?;
            let (th, _) = theta00_ratio(&lat, t * prof.l)?;
            let (p0, p_plus) = p_amplitudes_of(&prof, t)?;
            let a_coef = a_coefficient(eta)?;
            Ok(AsymptoticPrediction {
                eta,
                x,
                t,
                regime: prof.regime,
                leading: -t * t * prof.f,
                theta_osc: th.ln(),
                log_term: a_coef * t.ln(),
                predicted_log_beta: t * eta * (x + prof.l) + p_plus.ln(),
                predicted_alpha: t * (1.0 + prof.g1) + p0,
                near_transition,
            })
        }
    }
}

/// Background profiles of the cylindrical Toda solution at (eta, x, t).
pub fn toda_profiles(eta: f64, x: f64, t: f64) -> Result<TodaAsym> {
    let prof = profile(eta, x)?;
    match prof.regime {
        Regime::OneCutLeft => Ok(TodaAsym {
            y1: -eta * x,
            y0: eta / 2.0,
            a0: (-eta / 2.0).exp(),
            b0: 0.0,
        }),
        Regime::Vkls => Ok(TodaAsym {
            y1: 0.0,
            y0: 0.0,
            a0: 1.0,
            b0: 0.0,
        }),
        Regime::TwoCut => {
            let k = prof.k.unwrap();
            let lat = RectLattice::new(k)?;
            let shift = eta / (2.0 * k);
            let tl = t * prof.l;
            let (th0, ld0) = theta00_ratio(&lat, tl)?;
            let (thp, ldp) = theta00_ratio(&lat, tl + shift)?;
            let (thm, _) = theta00_ratio(&lat, tl - shift)?;
            let y0 = eta / 2.0 - eta * eta / (4.0 * k) - (thp / th0).ln();
            let a0 = (-eta / 2.0 + eta * eta / (4.0 * k)).exp() * (thp * thm).sqrt() / th0;
            let b0 = prof.u / (2.0 * k) * (eta + ldp - ld0);
            Ok(TodaAsym {
                y1: -eta * (x + prof.l),
                y0,
                a0,
                b0,
            })
        }
    }
}

/// The coefficient of the log t term: -2 times the period average of the
/// residue sum at x = 0 (it depends on eta only).
pub fn a_coefficient(eta: f64) -> Result<f64> {
    a_coefficient_with_nodes(eta, 64, 1.0)
}

#[doc(hidden)]
pub fn a_coefficient_with_nodes(eta: f64, nodes: usize, t0: f64) -> Result<f64> {
    let prof = profile(eta, 0.0)?;
    if prof.regime != Regime::TwoCut {
        return Err(Error::Regime(
            "the log-t coefficient is defined through the two-cut phase at x = 0".into(),
        ));
    }
    let period = 1.0 / prof.l.abs();
    let (nodes_x, weights) = quad::gauss_legendre(nodes);
    let mut acc = 0.0;
    for (xn, w) in nodes_x.iter().zip(&weights) {
        let t = t0 + 0.5 * period * (xn + 1.0);
        let r = residues::residues_of(&prof, t)?;
        acc += w * 0.5 * period * r.x_value;
    }
    Ok(-2.0 * acc / period)
}

/// Lower-tail rate function of the droplet growth model:
/// Phi_-(mu) = max_y { F(y) - (eta/2)(mu - y)^2 } with eta = -log q.
pub fn phi_minus(q: f64, mu: f64) -> Result<PhiMinusResult> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain(format!("q must lie in (0,1), got {q}")));
    }
    let eta = -q.ln();
    let objective = |y: f64| -> Result<f64> {
        Ok(profile(eta, y)?.f - eta / 2.0 * (mu - y) * (mu - y))
    };
    let lo = mu - 4.0;
    let hi = 2f64.max(mu);
    let n = 200;
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=n {
        let y = lo + (hi - lo) * i as f64 / n as f64;
        let v = objective(y)?;
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let step = (hi - lo) / n as f64;
    let mut a = lo + step * best_i.saturating_sub(1) as f64;
    let mut b = (lo + step * (best_i + 1) as f64).min(hi);
    // golden-section refinement
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = objective(c)?;
    let mut fd = objective(d)?;
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = objective(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = objective(d)?;
        }
        if (b - a).abs() < 1e-12 {
            break;
        }
    }
    let y_star = 0.5 * (a + b);
    // derivative bisection polish where the slope changes sign:
    // g'(y) = F'(y) + eta (mu - y)
    let slope = |y: f64| -> Result<f64> { Ok(profile(eta, y)?.df + eta * (mu - y)) };
    let (mut ga, mut gb) = (y_star - 1e-4, y_star + 1e-4);
    let mut polished = y_star;
    if let (Ok(sa), Ok(sb)) = (slope(ga), slope(gb)) {
        if sa > 0.0 && sb < 0.0 {
            for _ in 0..60 {
                let mid = 0.5 * (ga + gb);
                if slope(mid)? > 0.0 {
                    ga = mid;
                } else {
                    gb = mid;
                }
            }
            polished = 0.5 * (ga + gb);
        }
    }
    let v_polished = objective(polished)?;
    let v_star = objective(y_star)?;
    Ok(if v_polished >= v_star {
        PhiMinusResult {
            value: v_polished,
            argmax_y: polished,
        }
    } else {
        PhiMinusResult {
            value: v_star,
            argmax_y: y_star,
        }
    })
}

/// Predicted log P(b_1 <= x t) of the positive-temperature process, up to
/// the undetermined constant: 0 above the right edge, the shared expansion
/// elsewhere.
pub fn bessel_tail(eta: f64, x: f64, t: f64) -> Result<f64> {
    if x > 2.0 {
        return Ok(0.0);
    }
    let pred = predict(eta, x, t)?;
    Ok(pred.leading + pred.theta_osc + pred.log_term)
}
