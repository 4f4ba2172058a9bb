//! Integer-order Bessel J by Miller's backward recurrence.

use crate::error::{Error, Result};

/// Table of J_0(arg) .. J_max(arg); negative orders follow by parity.
#[derive(Debug, Clone)]
pub struct BesselTable {
    pub arg: f64,
    values: Vec<f64>,
}

impl BesselTable {
    /// J_m(arg) for any integer order (parity rule for m < 0); orders beyond
    /// the table are far past the turning point and return 0.
    pub fn j(&self, order: i64) -> f64 {
        let (m, sign) = if order < 0 {
            (-order as usize, if order % 2 != 0 { -1.0 } else { 1.0 })
        } else {
            (order as usize, 1.0)
        };
        match self.values.get(m) {
            Some(v) => sign * v,
            None => 0.0,
        }
    }

    pub fn max_order(&self) -> usize {
        self.values.len() - 1
    }
}

/// Builds the table by backward recurrence from a start order safely past
/// max(max_order, arg), normalized by J_0 + 2 J_2 + 2 J_4 + ... = 1.
pub fn bessel_row(arg: f64, max_order: usize) -> Result<BesselTable> {
    if !(arg >= 0.0) || !arg.is_finite() {
        return Err(Error::Domain(format!(
            "Bessel argument must be nonnegative, got {arg}"
        )));
    }
    if arg < 1e-280 {
        let mut values = vec![0.0; max_order + 1];
        values[0] = 1.0;
        return Ok(BesselTable { arg, values });
    }
    // start buffer: 40 beyond the turning point plus a slack growing with
    // sqrt(arg) keeps the seeded ratio error below 1e-15 through the
    // oscillatory range
    let start = max_order.max(arg.ceil() as usize) + 40 + (2.0 * arg.sqrt()).ceil() as usize;
    let mut values = vec![0.0; start + 2];
    values[start + 1] = 0.0;
    values[start] = 1e-280;
    let mut even_sum = 0.0; // accumulates J_0 + 2 sum J_{2k} contribution
    for m in (1..=start).rev() {
        let next = 2.0 * m as f64 / arg * values[m] - values[m + 1];
        values[m - 1] = next;
        if next.abs() > 1e250 {
            let scale = 1e-250;
            for v in values[m - 1..].iter_mut() {
                *v *= scale;
            }
        }
    }
    even_sum += values[0];
    let mut k = 2;
    while k <= start {
        even_sum += 2.0 * values[k];
        k += 2;
    }
    if even_sum == 0.0 || !even_sum.is_finite() {
        return Err(Error::Convergence(
            "Miller normalization sum vanished".into(),
        ));
    }
    let inv = 1.0 / even_sum;
    values.truncate(max_order + 1);
    for v in values.iter_mut() {
        *v *= inv;
    }
    Ok(BesselTable { arg, values })
}
