//! Randomized Bernstein–Stancu operator
//!
//! `B̃_{α,n}(f; x1, x2) = Σ_{k1,k2=0}^{n} f((k1+α1)/n, (k2+α2)/n) b_{n,k1}(x1) b_{n,k2}(x2)`
//!
//! with the shift `α` uniform on `[0,1]²`, and the Monte-Carlo estimate of
//! `E ∫∫_K |D B̃_{α,n} f − D f|` for `D` one of the identity, `∂/∂x1`,
//! `∂²/∂x1∂x2`. Nodes past 1 see the field's zero extension.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::bernstein::{BasisCache, DifferenceOrder, OperatorKernel};
use crate::field::{Partial, ScalarField2};
use crate::quadrature::{l1_distance, GridSpec};
use crate::sum::CompensatedSum;
use crate::{Error, Result};

/// Node shift `α = (α1, α2) ∈ [0,1]²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftVector {
    pub a1: f64,
    pub a2: f64,
}

impl ShiftVector {
    pub const ZERO: ShiftVector = ShiftVector { a1: 0.0, a2: 0.0 };

    pub fn new(a1: f64, a2: f64) -> Result<Self> {
        for a in [a1, a2] {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::InvalidShift(a));
            }
        }
        Ok(Self { a1, a2 })
    }
}

/// Source of the `i`-th shift of a Monte-Carlo run.
///
/// Implementations must be pure in `index` so that samples can be drawn in
/// any order, on any thread.
pub trait ShiftSource {
    fn shift(&self, index: u64) -> ShiftVector;

    /// Seed reported alongside the estimate.
    fn seed(&self) -> u64;
}

/// i.i.d. uniform shifts from ChaCha8 substreams: sample `i` reads stream `i`
/// of the generator keyed by `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeededShifts {
    seed: u64,
}

impl SeededShifts {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }
}

#[inline]
fn unit_f64(bits: u64) -> f64 {
    // 53 random mantissa bits, uniform on [0, 1)
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

impl ShiftSource for SeededShifts {
    fn shift(&self, index: u64) -> ShiftVector {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        let a1 = unit_f64(rng.next_u64());
        let a2 = unit_f64(rng.next_u64());
        ShiftVector { a1, a2 }
    }

    fn seed(&self) -> u64 {
        self.seed
    }
}

/// Fixed list of shifts, cycled by index. Used to pin Monte-Carlo runs.
#[derive(Debug, Clone)]
pub struct FixedShifts {
    pub shifts: Vec<ShiftVector>,
    pub seed: u64,
}

impl ShiftSource for FixedShifts {
    fn shift(&self, index: u64) -> ShiftVector {
        self.shifts[(index as usize) % self.shifts.len()]
    }

    fn seed(&self) -> u64 {
        self.seed
    }
}

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// Reduces per-sample values in index order.
    pub fn from_samples(values: &[f64], seed: u64) -> Result<Self> {
        let samples = values.len();
        if samples < 2 {
            return Err(Error::TooFewSamples(samples));
        }
        let count = samples as f64;
        let mean = values.iter().copied().collect::<CompensatedSum>().value() / count;
        let ss = values
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .collect::<CompensatedSum>()
            .value();
        let stderr = libm::sqrt(ss / (count - 1.0)) / libm::sqrt(count);
        Ok(Self { mean, stderr, samples, seed })
    }
}

pub fn stancu_2d(
    cache: &BasisCache,
    f: &ScalarField2,
    n: usize,
    alpha: ShiftVector,
    x1: f64,
    x2: f64,
) -> Result<f64> {
    OperatorKernel::build(f, n, alpha, Partial::Value)?.eval(cache, x1, x2)
}

/// `n Σ_{k1<n} Σ_{k2<=n} [f((k1+1+α1)/n, ·) − f((k1+α1)/n, ·)] b_{n−1,k1}(x1) b_{n,k2}(x2)`.
pub fn stancu_dx1(
    cache: &BasisCache,
    f: &ScalarField2,
    n: usize,
    alpha: ShiftVector,
    x1: f64,
    x2: f64,
) -> Result<f64> {
    OperatorKernel::build(f, n, alpha, Partial::Dx1)?.eval(cache, x1, x2)
}

/// `n² Σ_{k1,k2<n} Δ_(x1)Δ_(x2) f((k1+α1)/n, (k2+α2)/n) Π_{k1,k2}(x1, x2)`.
pub fn stancu_dx1dx2(
    cache: &BasisCache,
    f: &ScalarField2,
    n: usize,
    alpha: ShiftVector,
    x1: f64,
    x2: f64,
) -> Result<f64> {
    OperatorKernel::build(f, n, alpha, Partial::Dx1Dx2)?.eval(cache, x1, x2)
}

/// Grid L1 error of one shifted operator against a reference already
/// sampled on the grid.
pub fn sample_l1_error(
    cache: &BasisCache,
    f: &ScalarField2,
    reference: &[f64],
    partial: Partial,
    n: usize,
    grid: &GridSpec,
    alpha: ShiftVector,
) -> Result<f64> {
    let values = OperatorKernel::build(f, n, alpha, partial)?.eval_on_grid(cache, grid)?;
    l1_distance(&values, reference, grid)
}

/// Monte-Carlo estimate of `E ∫∫_K |D B̃_{α,n} f − reference|` with
/// ChaCha substreams keyed by `seed`.
#[allow(clippy::too_many_arguments)]
pub fn expected_l1_error(
    cache: &BasisCache,
    f: &ScalarField2,
    reference: impl Fn(f64, f64) -> f64,
    partial: Partial,
    n: usize,
    grid: &GridSpec,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    expected_l1_error_with(cache, f, reference, partial, n, grid, samples, &SeededShifts::new(seed))
}

/// [`expected_l1_error`] with an explicit shift source.
#[allow(clippy::too_many_arguments)]
pub fn expected_l1_error_with<S: ShiftSource>(
    cache: &BasisCache,
    f: &ScalarField2,
    reference: impl Fn(f64, f64) -> f64,
    partial: Partial,
    n: usize,
    grid: &GridSpec,
    samples: usize,
    source: &S,
) -> Result<McEstimate> {
    if samples < 2 {
        return Err(Error::TooFewSamples(samples));
    }
    let reference = grid.sample(reference)?;
    let values = (0..samples as u64)
        .map(|i| sample_l1_error(cache, f, &reference, partial, n, grid, source.shift(i)))
        .collect::<Result<Vec<_>>>()?;
    McEstimate::from_samples(&values, source.seed())
}

/// One shift's worth of the mixed-derivative symmetry check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedOrderSample {
    /// L1 distance between the two differencing orders.
    pub gap: f64,
    /// L1 error of `Δ_(x1)Δ_(x2)` (x2 differenced first) against the reference.
    pub error_x2_then_x1: f64,
    /// L1 error of `Δ_(x2)Δ_(x1)` (x1 differenced first) against the reference.
    pub error_x1_then_x2: f64,
}

pub fn mixed_order_sample(
    cache: &BasisCache,
    f: &ScalarField2,
    reference: &[f64],
    n: usize,
    grid: &GridSpec,
    alpha: ShiftVector,
) -> Result<MixedOrderSample> {
    let first = OperatorKernel::build_ordered(f, n, alpha, Partial::Dx1Dx2, DifferenceOrder::X2ThenX1)?
        .eval_on_grid(cache, grid)?;
    let second = OperatorKernel::build_ordered(f, n, alpha, Partial::Dx1Dx2, DifferenceOrder::X1ThenX2)?
        .eval_on_grid(cache, grid)?;
    Ok(MixedOrderSample {
        gap: l1_distance(&first, &second, grid)?,
        error_x2_then_x1: l1_distance(&first, reference, grid)?,
        error_x1_then_x2: l1_distance(&second, reference, grid)?,
    })
}
