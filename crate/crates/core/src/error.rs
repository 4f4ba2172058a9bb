use std::fmt;

/// Failure modes of the numerical layers.
///
/// `Domain` covers invalid parameters, `Pole` an evaluation too close to a
/// lattice point, `Regime` a request outside the phase where a quantity is
/// defined. `NumericalBreakdown` signals a non-positive factorization pivot,
/// `PrecisionBudget` that double precision cannot represent the requested
/// determinant, and `Convergence`/`Integration` that an iterative scheme ran
/// out of budget.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    Domain(String),
    Convergence(String),
    Pole { re: f64, im: f64 },
    Regime(String),
    NumericalBreakdown(String),
    PrecisionBudget { requested_t: f64, max_t: f64 },
    Integration(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Convergence(msg) => write!(f, "convergence error: {msg}"),
            Error::Pole { re, im } => {
                write!(f, "pole error: argument {re}+{im}i too close to a lattice point")
            }
            Error::Regime(msg) => write!(f, "regime error: {msg}"),
            Error::NumericalBreakdown(msg) => write!(f, "numerical breakdown: {msg}"),
            Error::PrecisionBudget { requested_t, max_t } => write!(
                f,
                "precision budget exceeded: t = {requested_t} beyond the largest safe t ~ {max_t} in double precision"
            ),
            Error::Integration(msg) => write!(f, "integration error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(value: f64, what: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{what} is not finite")))
    }
}
