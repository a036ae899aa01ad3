//! Bernstein and randomized Bernstein–Stancu operators on the unit square.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only numerics:
//! basis evaluation in log space, tensor-product operators and their
//! difference-form derivatives, the Monte-Carlo expectation over the random
//! node shift, midpoint L1 norms on `[0,1]²`, difference-quotient error
//! functionals, Gaussian mollification, and a corpus of test fields.
//!
//! IO, parallel sweeps and file formats live in the `bernstein-cli` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bernstein;
pub mod calculus;
pub mod corpus;
mod error;
pub mod field;
pub mod quadrature;
pub mod stancu;
pub mod sum;

pub use bernstein::{BasisCache, OperatorKernel};
pub use error::{Error, Result};
pub use field::{Partial, ScalarField2, SmoothnessClass, Support};
pub use quadrature::GridSpec;
pub use stancu::{McEstimate, SeededShifts, ShiftSource, ShiftVector};
