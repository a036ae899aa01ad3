use alloc::boxed::Box;
use alloc::string::String;

use crate::field::Partial;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("binomial index out of range: n={n}, k={k} (cache holds n <= {max_n})")]
    BinomialIndex { n: usize, k: usize, max_n: usize },

    #[error("point {0} lies outside [0, 1]")]
    OutsideUnitInterval(f64),

    #[error("degree must be at least 1")]
    ZeroDegree,

    #[error("shift component {0} lies outside [0, 1]")]
    InvalidShift(f64),

    #[error("log_gamma requires x > 0, got {0}")]
    GammaDomain(f64),

    #[error("weight index out of range: n={n}, k1={k1}, k2={k2}")]
    WeightIndex { n: usize, k1: usize, k2: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("non-finite integrand value at ({x1}, {x2})")]
    NonFinite { x1: f64, x2: f64 },

    #[error("adaptive Simpson on [{a}, {b}] exhausted {budget} subdivisions")]
    QuadratureBudget { a: f64, b: f64, budget: usize },

    #[error("cell {cell} integral failed: {source}")]
    LorentzCell {
        cell: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("Monte-Carlo estimate needs at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("field `{field}` does not supply the analytic partial {partial}")]
    MissingPartial { field: String, partial: Partial },
}
