//! Discrete Bessel kernels on the half-integer lattice, their Fermi-weighted
//! deformations, and log Fredholm determinants with adaptive windowing.

mod bessel;
mod fredholm;

pub use bessel::{bessel_row, BesselTable};
pub use fredholm::{
    log_q, log_q_at, observables, FredholmResult, KernelMode, KernelWindow, Observables,
};

use crate::error::{Error, Result};

/// A half-integer index: the stored integer n represents the value n + 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub fn value(self) -> f64 {
        self.0 as f64 + 0.5
    }

    /// Bessel order of the lower companion, i.e. value - 1/2.
    fn order_minus(self) -> i64 {
        self.0
    }

    /// Bessel order of the upper companion, i.e. value + 1/2.
    fn order_plus(self) -> i64 {
        self.0 + 1
    }
}

impl std::fmt::Display for HalfInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/2", 2 * self.0 + 1)
    }
}

/// Correlation kernel of the Poissonized Plancherel point process.
///
/// Off the diagonal this is the Christoffel-Darboux ratio
/// t (J_{i-1/2} J_{j+1/2} - J_{i+1/2} J_{j-1/2}) / (i - j); on the diagonal
/// the series sum_{l>=1} J_{i+l-1/2}(2t)^2 (the j->i limit).
pub fn discrete_bessel(i: HalfInt, j: HalfInt, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
    }
    let max_order = table_order_for(i.0.max(j.0), t);
    let table = bessel_row(2.0 * t, max_order)?;
    Ok(discrete_bessel_with(i, j, t, &table))
}

fn table_order_for(max_index: i64, t: f64) -> usize {
    let turning = (2.0 * t).ceil() as i64 + (8.0 * t.cbrt()).ceil() as i64 + 60;
    (max_index + 1).max(turning).max(1) as usize
}

pub(crate) fn discrete_bessel_with(i: HalfInt, j: HalfInt, t: f64, table: &BesselTable) -> f64 {
    if i == j {
        return diagonal_series(i, table);
    }
    let num = table.j(i.order_minus()) * table.j(j.order_plus())
        - table.j(i.order_plus()) * table.j(j.order_minus());
    t * num / (i.0 - j.0) as f64
}

fn diagonal_series(i: HalfInt, table: &BesselTable) -> f64 {
    let mut acc = 0.0;
    let turning = table.arg.ceil() as i64 + 2;
    let mut order = i.order_plus();
    loop {
        let v = table.j(order);
        let term = v * v;
        acc += term;
        order += 1;
        if order > turning && term < 1e-18 * acc.max(1e-30) {
            break;
        }
        if order >= 0 && order as usize > table.max_order() {
            break;
        }
    }
    acc
}

/// Fermi weight 1/(1 + e^{-eta z}), overflow-safe on both tails.
pub fn fermi_weight(z: f64, eta: f64) -> f64 {
    let w = eta * z;
    if w >= 0.0 {
        1.0 / (1.0 + (-w).exp())
    } else {
        let e = w.exp();
        e / (1.0 + e)
    }
}

/// Positive-temperature deformation of the discrete Bessel kernel:
/// sum_{l in Z} J_{i+l-1/2}(2t) J_{j+l-1/2}(2t) / (1 + e^{-l eta}).
pub fn pos_temp_kernel(i: HalfInt, j: HalfInt, t: f64, eta: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
    }
    if !(eta > 0.0) {
        return Err(Error::Domain(format!("eta must be positive, got {eta}")));
    }
    let l_min = -((18.0 * std::f64::consts::LN_10 / eta).ceil() as i64) - 4;
    let turning = (2.0 * t).ceil() as i64 + (8.0 * t.cbrt()).ceil() as i64 + 40;
    let l_max = (turning - i.0.min(j.0)).max(4);
    let max_order = table_order_for(i.0.max(j.0) + l_max, t);
    let table = bessel_row(2.0 * t, max_order)?;
    Ok(pos_temp_with(i, j, eta, l_min, l_max, &table))
}

pub(crate) fn pos_temp_with(
    i: HalfInt,
    j: HalfInt,
    eta: f64,
    l_min: i64,
    l_max: i64,
    table: &BesselTable,
) -> f64 {
    pos_temp_with_offset(i, j, eta, 0.0, l_min, l_max, table)
}

/// Same sum with the Fermi factor offset to 1/(1 + e^{-(l+delta) eta}).
/// The restricted-determinant route uses delta to align its gap
/// probability with the requested shift s; delta = 0 is the kernel as
/// defined.
pub(crate) fn pos_temp_with_offset(
    i: HalfInt,
    j: HalfInt,
    eta: f64,
    delta: f64,
    l_min: i64,
    l_max: i64,
    table: &BesselTable,
) -> f64 {
    let mut acc = 0.0;
    for l in l_min..=l_max {
        let w = fermi_weight(l as f64 + delta, eta);
        if w < 1e-19 {
            continue;
        }
        acc += table.j(i.0 + l) * table.j(j.0 + l) * w;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_int_arithmetic() {
        let h = HalfInt(0);
        assert_eq!(h.value(), 0.5);
        assert_eq!(h.order_minus(), 0);
        assert_eq!(h.order_plus(), 1);
        assert_eq!(HalfInt(-1).value(), -0.5);
        assert_eq!(format!("{}", HalfInt(2)), "5/2");
    }

    #[test]
    fn kernel_symmetry() {
        let v1 = discrete_bessel(HalfInt(0), HalfInt(2), 3.0).unwrap();
        let v2 = discrete_bessel(HalfInt(2), HalfInt(0), 3.0).unwrap();
        assert!((v1 - v2).abs() < 1e-16);
    }

    #[test]
    fn kernel_at_zero_time() {
        for (i, j) in [(0, 0), (1, 3), (2, 2)] {
            let v = discrete_bessel(HalfInt(i), HalfInt(j), 0.0).unwrap();
            assert_eq!(v, 0.0, "K({i},{j};0)");
        }
        // below the origin the empty-partition diagram is fully occupied
        let v = discrete_bessel(HalfInt(-1), HalfInt(-1), 0.0).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn christoffel_darboux_matches_series() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let t = rng.gen_range(0.5..6.0);
            let i = HalfInt(rng.gen_range(-6..10));
            let mut j = HalfInt(rng.gen_range(-6..10));
            if i == j {
                j = HalfInt(j.0 + 1);
            }
            let max_order = table_order_for(i.0.max(j.0) + 80, t);
            let table = bessel_row(2.0 * t, max_order).unwrap();
            let cd = discrete_bessel_with(i, j, t, &table);
            let mut series = 0.0;
            for l in 1..=(table.max_order() as i64 - i.0.max(j.0)) {
                series += table.j(i.0 + l) * table.j(j.0 + l);
            }
            assert!(
                (cd - series).abs() < 1e-11,
                "CD vs series at i={i}, j={j}, t={t}: {cd} vs {series}"
            );
        }
    }

    #[test]
    fn fermi_weight_properties() {
        assert_eq!(fermi_weight(0.0, 2.0), 0.5);
        let eta = 1.3;
        let z = 3.7;
        assert!((fermi_weight(z, eta) + fermi_weight(-z, eta) - 1.0).abs() < 1e-15);
        assert!(fermi_weight(-50.0, 1.0) < 1e-21);
        assert!(fermi_weight(-50.0, 1.0) > 0.0);
    }

    #[test]
    fn pos_temp_symmetry_and_zero_temperature_limit() {
        let eta = 5f64.ln();
        let a = pos_temp_kernel(HalfInt(1), HalfInt(3), 2.0, eta).unwrap();
        let b = pos_temp_kernel(HalfInt(3), HalfInt(1), 2.0, eta).unwrap();
        assert!((a - b).abs() < 1e-16);

        // eta -> infinity: K_eta -> K + (1/2) J_{i-1/2} J_{j-1/2}
        let t = 2.0;
        let table = bessel_row(2.0 * t, 80).unwrap();
        for (i, j) in [(0i64, 0i64), (1, 4), (-2, 3)] {
            let hot = pos_temp_kernel(HalfInt(i), HalfInt(j), t, 40.0).unwrap();
            let cold = discrete_bessel(HalfInt(i), HalfInt(j), t).unwrap()
                + 0.5 * table.j(i) * table.j(j);
            assert!(
                (hot - cold).abs() < 1e-12,
                "limit mismatch at ({i},{j}): {hot} vs {cold}"
            );
        }
    }

    /// Diagonal of the kernel against the order-derivative limit of the
    /// Christoffel-Darboux form, computed with real-order Bessel values from
    /// the power series and a central difference in the order.
    #[test]
    fn diagonal_matches_order_derivative_oracle() {
        fn gamma_lanczos(x: f64) -> f64 {
            const G: [f64; 9] = [
                0.99999999999980993,
                676.5203681218851,
                -1259.1392167224028,
                771.32342877765313,
                -176.61502916214059,
                12.507343278686905,
                -0.13857109526572012,
                9.9843695780195716e-6,
                1.5056327351493116e-7,
            ];
            if x < 0.5 {
                std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma_lanczos(1.0 - x))
            } else {
                let x = x - 1.0;
                let mut a = G[0];
                let t = x + 7.5;
                for (i, &g) in G.iter().enumerate().skip(1) {
                    a += g / (x + i as f64);
                }
                (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
            }
        }
        fn j_real(nu: f64, x: f64) -> f64 {
            let half = x / 2.0;
            let mut acc = 0.0;
            let mut num = half.powf(nu);
            let mut kfact = 1.0;
            for k in 0..60 {
                if k > 0 {
                    kfact *= k as f64;
                }
                acc += num / (kfact * gamma_lanczos(k as f64 + nu + 1.0));
                num *= -half * half;
            }
            acc
        }

        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let t: f64 = rng.gen_range(0.5..4.0);
            let i = HalfInt(rng.gen_range(0..5));
            let series = discrete_bessel(i, i, t).unwrap();
            // K(i,i) = t [ J_{i+1/2} dJ_nu/dnu|_{i-1/2} - J_{i-1/2} dJ_nu/dnu|_{i+1/2} ]
            let h = 1e-4;
            let x = 2.0 * t;
            let lo = i.value() - 0.5;
            let hi = i.value() + 0.5;
            let d_lo = (j_real(lo + h, x) - j_real(lo - h, x)) / (2.0 * h);
            let d_hi = (j_real(hi + h, x) - j_real(hi - h, x)) / (2.0 * h);
            let oracle = t * (j_real(hi, x) * d_lo - j_real(lo, x) * d_hi);
            assert!(
                (series - oracle).abs() < 1e-6,
                "diagonal mismatch at i={i}, t={t}: {series} vs {oracle}"
            );
        }
    }
}
