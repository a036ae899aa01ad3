//! Bernstein basis, one- and two-dimensional Bernstein operators, and the
//! tensor kernels shared with the shifted (Stancu) operators.
//!
//! Basis functions are evaluated in log space from a compensated
//! log-factorial table, with the endpoints `x = 0` and `x = 1` handled by
//! case analysis. Two-dimensional operators are contractions
//! `Σ_{k1} b1[k1] Σ_{k2} c[k1][k2] b2[k2]` with the inner index `k2` summed
//! first; the pointwise and grid paths perform identical floating-point
//! operations, so they agree bit for bit.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{Partial, ScalarField2};
use crate::quadrature::GridSpec;
use crate::stancu::ShiftVector;
use crate::sum::CompensatedSum;
use crate::{Error, Result};

/// Default capacity of a cache, large enough for every degree the
/// experiments use.
pub const DEFAULT_MAX_N: usize = 4096;

/// Precomputed `ln k!` for `0 <= k <= max_n`.
///
/// Each entry is stored as a high part and a low correction taken from the
/// compensated running sum, so `ln C(n, k)` keeps roughly the absolute
/// accuracy of its own magnitude instead of that of `ln n!`.
#[derive(Debug, Clone)]
pub struct BasisCache {
    max_n: usize,
    log_factorial: Vec<f64>,
    log_factorial_lo: Vec<f64>,
}

impl Default for BasisCache {
    fn default() -> Self {
        Self::new(DEFAULT_MAX_N)
    }
}

impl BasisCache {
    pub fn new(max_n: usize) -> Self {
        let mut hi = Vec::with_capacity(max_n + 1);
        let mut lo = Vec::with_capacity(max_n + 1);
        let mut acc = CompensatedSum::new();
        hi.push(0.0);
        lo.push(0.0);
        for k in 1..=max_n {
            acc.add(libm::log(k as f64));
            let (h, l) = acc.parts();
            hi.push(h);
            lo.push(l);
        }
        Self { max_n, log_factorial: hi, log_factorial_lo: lo }
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// `ln k!`, or `None` past the table.
    pub fn log_factorial(&self, k: usize) -> Option<f64> {
        self.log_factorial.get(k).copied()
    }

    pub fn log_factorials(&self) -> &[f64] {
        &self.log_factorial
    }

    /// `ln C(n, k)` from the log-factorial table.
    pub fn log_binomial(&self, n: usize, k: usize) -> Result<f64> {
        if k > n || n > self.max_n {
            return Err(Error::BinomialIndex { n, k, max_n: self.max_n });
        }
        Ok(self.log_binomial_unchecked(n, k))
    }

    #[inline]
    fn log_binomial_unchecked(&self, n: usize, k: usize) -> f64 {
        let hi = self.log_factorial[n] - self.log_factorial[k] - self.log_factorial[n - k];
        let lo =
            self.log_factorial_lo[n] - self.log_factorial_lo[k] - self.log_factorial_lo[n - k];
        hi + lo
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::BinomialIndex { n, k: 0, max_n: self.max_n });
        }
        Ok(())
    }

    /// `C(n,k) x^k (1-x)^(n-k)`.
    pub fn basis_1d(&self, n: usize, k: usize, x: f64) -> Result<f64> {
        check_unit(x)?;
        if k > n || n > self.max_n {
            return Err(Error::BinomialIndex { n, k, max_n: self.max_n });
        }
        Ok(self.basis_unchecked(n, k, x, libm::log(x), libm::log1p(-x)))
    }

    #[inline]
    fn basis_unchecked(&self, n: usize, k: usize, x: f64, ln_x: f64, ln_1mx: f64) -> f64 {
        if x == 0.0 {
            return if k == 0 { 1.0 } else { 0.0 };
        }
        if x == 1.0 {
            return if k == n { 1.0 } else { 0.0 };
        }
        let e = self.log_binomial_unchecked(n, k) + k as f64 * ln_x + (n - k) as f64 * ln_1mx;
        libm::exp(e)
    }

    /// All `n + 1` basis values of degree `n` at `x`, written into `out`.
    pub fn basis_into(&self, n: usize, x: f64, out: &mut [f64]) -> Result<()> {
        check_unit(x)?;
        self.check_degree(n)?;
        if out.len() != n + 1 {
            return Err(Error::InvalidArgument("basis buffer must hold n + 1 values"));
        }
        let ln_x = libm::log(x);
        let ln_1mx = libm::log1p(-x);
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = self.basis_unchecked(n, k, x, ln_x, ln_1mx);
        }
        Ok(())
    }

    pub fn basis_vector(&self, n: usize, x: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; n + 1];
        self.basis_into(n, x, &mut out)?;
        Ok(out)
    }

    /// Row-major `m × (n + 1)` table of basis vectors at every grid node.
    pub fn basis_table(&self, n: usize, grid: &GridSpec) -> Result<Vec<f64>> {
        let width = n + 1;
        let mut out = vec![0.0; grid.m() * width];
        for (row, x) in out.chunks_exact_mut(width).zip(grid.nodes()) {
            self.basis_into(n, *x, row)?;
        }
        Ok(out)
    }
}

#[inline]
fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutsideUnitInterval(x))
    }
}

/// `B_n(f, x) = Σ_k f(k/n) C(n,k) x^k (1-x)^(n-k)`.
pub fn bernstein_1d(cache: &BasisCache, f: impl Fn(f64) -> f64, n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroDegree);
    }
    let basis = cache.basis_vector(n, x)?;
    let nf = n as f64;
    Ok(basis
        .iter()
        .enumerate()
        .map(|(k, b)| f(k as f64 / nf) * b)
        .collect::<CompensatedSum>()
        .value())
}

/// Which difference is taken first in a mixed second difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DifferenceOrder {
    /// `Δ_(x1) Δ_(x2) f`: difference in `x2` first, then in `x1`.
    #[default]
    X2ThenX1,
    /// `Δ_(x2) Δ_(x1) f`: difference in `x1` first, then in `x2`.
    X1ThenX2,
}

/// Coefficient matrix of a (shifted) tensor Bernstein operator or one of its
/// derivatives, ready to be contracted with two basis vectors.
///
/// For degree `n` and shift `α`, the field is sampled once on the nodes
/// `((k1+α1)/n, (k2+α2)/n)`, `0 <= k1, k2 <= n`, and the requested
/// differences are formed:
///
/// | partial  | coefficients                        | basis degrees | scale |
/// |----------|-------------------------------------|---------------|-------|
/// | value    | `F[k1][k2]`                         | `(n, n)`      | 1     |
/// | dx1      | `F[k1+1][k2] - F[k1][k2]`           | `(n-1, n)`    | n     |
/// | dx2      | `F[k1][k2+1] - F[k1][k2]`           | `(n, n-1)`    | n     |
/// | dx1dx2   | mixed second difference             | `(n-1, n-1)`  | n²    |
///
/// Building costs `(n+1)²` field evaluations; each point evaluation after
/// that costs O(n²), and a whole `m × m` grid costs O(m n² + m² n).
#[derive(Debug, Clone)]
pub struct OperatorKernel {
    partial: Partial,
    n: usize,
    deg1: usize,
    deg2: usize,
    coeffs: Vec<f64>,
    scale: f64,
}

impl OperatorKernel {
    pub fn build(f: &ScalarField2, n: usize, alpha: ShiftVector, partial: Partial) -> Result<Self> {
        Self::build_ordered(f, n, alpha, partial, DifferenceOrder::default())
    }

    pub fn build_ordered(
        f: &ScalarField2,
        n: usize,
        alpha: ShiftVector,
        partial: Partial,
        order: DifferenceOrder,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDegree);
        }
        let side = n + 1;
        let nf = n as f64;
        let mut samples = vec![0.0; side * side];
        for k1 in 0..side {
            let x1 = (k1 as f64 + alpha.a1) / nf;
            for k2 in 0..side {
                let x2 = (k2 as f64 + alpha.a2) / nf;
                samples[k1 * side + k2] = f.eval(x1, x2);
            }
        }
        let at = |k1: usize, k2: usize| samples[k1 * side + k2];

        let (deg1, deg2, scale) = match partial {
            Partial::Value => (n, n, 1.0),
            Partial::Dx1 => (n - 1, n, nf),
            Partial::Dx2 => (n, n - 1, nf),
            Partial::Dx1Dx2 => (n - 1, n - 1, nf * nf),
        };
        let mut coeffs = Vec::with_capacity((deg1 + 1) * (deg2 + 1));
        for k1 in 0..=deg1 {
            for k2 in 0..=deg2 {
                let c = match partial {
                    Partial::Value => at(k1, k2),
                    Partial::Dx1 => at(k1 + 1, k2) - at(k1, k2),
                    Partial::Dx2 => at(k1, k2 + 1) - at(k1, k2),
                    Partial::Dx1Dx2 => match order {
                        DifferenceOrder::X2ThenX1 => {
                            (at(k1 + 1, k2 + 1) - at(k1 + 1, k2)) - (at(k1, k2 + 1) - at(k1, k2))
                        }
                        DifferenceOrder::X1ThenX2 => {
                            (at(k1 + 1, k2 + 1) - at(k1, k2 + 1)) - (at(k1 + 1, k2) - at(k1, k2))
                        }
                    },
                };
                coeffs.push(c);
            }
        }
        Ok(Self { partial, n, deg1, deg2, coeffs, scale })
    }

    pub fn partial(&self) -> Partial {
        self.partial
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Basis degrees `(in x1, in x2)` the coefficients are contracted with.
    pub fn basis_degrees(&self) -> (usize, usize) {
        (self.deg1, self.deg2)
    }

    /// The unscaled difference matrix, row-major `(deg1+1) × (deg2+1)`.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    fn contract(&self, b1: &[f64], b2: &[f64]) -> f64 {
        let cols = self.deg2 + 1;
        let mut outer = CompensatedSum::new();
        for (row, w1) in self.coeffs.chunks_exact(cols).zip(b1) {
            let mut inner = CompensatedSum::new();
            for (c, w2) in row.iter().zip(b2) {
                inner.add(c * w2);
            }
            outer.add(w1 * inner.value());
        }
        self.scale * outer.value()
    }

    pub fn eval(&self, cache: &BasisCache, x1: f64, x2: f64) -> Result<f64> {
        let b1 = cache.basis_vector(self.deg1, x1)?;
        let b2 = cache.basis_vector(self.deg2, x2)?;
        Ok(self.contract(&b1, &b2))
    }

    /// Values at every grid node, row-major (`x1` index outer).
    ///
    /// Bit-identical to calling [`Self::eval`] at each node.
    pub fn eval_on_grid(&self, cache: &BasisCache, grid: &GridSpec) -> Result<Vec<f64>> {
        let m = grid.m();
        let rows = self.deg1 + 1;
        let cols = self.deg2 + 1;
        let b1 = cache.basis_table(self.deg1, grid)?;
        let b2 = cache.basis_table(self.deg2, grid)?;

        // inner[k1 * m + j] = Σ_k2 c[k1][k2] b2_j[k2]
        let mut inner = vec![0.0; rows * m];
        for (k1, row) in self.coeffs.chunks_exact(cols).enumerate() {
            for (j, b2j) in b2.chunks_exact(cols).enumerate() {
                let mut acc = CompensatedSum::new();
                for (c, w2) in row.iter().zip(b2j) {
                    acc.add(c * w2);
                }
                inner[k1 * m + j] = acc.value();
            }
        }

        let mut out = vec![0.0; m * m];
        for (i, b1i) in b1.chunks_exact(rows).enumerate() {
            for j in 0..m {
                let mut acc = CompensatedSum::new();
                for (k1, w1) in b1i.iter().enumerate() {
                    acc.add(w1 * inner[k1 * m + j]);
                }
                out[i * m + j] = self.scale * acc.value();
            }
        }
        Ok(out)
    }
}

/// Tensor-product Bernstein polynomial `B_n(f, x1, x2)`.
pub fn bernstein_2d(cache: &BasisCache, f: &ScalarField2, n: usize, x1: f64, x2: f64) -> Result<f64> {
    OperatorKernel::build(f, n, ShiftVector::ZERO, Partial::Value)?.eval(cache, x1, x2)
}

/// `∂/∂x1 B_n(f, x1, x2)` in difference form.
pub fn bernstein_2d_dx1(
    cache: &BasisCache,
    f: &ScalarField2,
    n: usize,
    x1: f64,
    x2: f64,
) -> Result<f64> {
    OperatorKernel::build(f, n, ShiftVector::ZERO, Partial::Dx1)?.eval(cache, x1, x2)
}

/// `∂²/∂x1∂x2 B_n(f, x1, x2) = n² Σ Δ_(x1)Δ_(x2) f(k1/n, k2/n) Π_{k1,k2}(x1, x2)`.
pub fn bernstein_2d_dx1dx2(
    cache: &BasisCache,
    f: &ScalarField2,
    n: usize,
    x1: f64,
    x2: f64,
) -> Result<f64> {
    OperatorKernel::build(f, n, ShiftVector::ZERO, Partial::Dx1Dx2)?.eval(cache, x1, x2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive};
    use proptest::prelude::*;

    fn cache() -> BasisCache {
        BasisCache::new(1024)
    }

    fn exact_binomial(n: u64, k: u64) -> u128 {
        (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
    }

    #[test]
    fn log_factorial_table_starts_at_zero_and_grows() {
        let c = cache();
        assert_eq!(c.log_factorial(0), Some(0.0));
        assert_eq!(c.log_factorial(1), Some(0.0));
        assert!(c.log_factorials().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn log_binomial_examples() {
        let c = cache();
        assert_eq!(c.log_binomial(5, 0).unwrap(), 0.0);
        assert_relative_eq!(c.log_binomial(4, 2).unwrap(), libm::log(6.0), max_relative = 1e-15);
        assert_eq!(exact_binomial(30, 15), 155_117_520);
        assert_relative_eq!(
            c.log_binomial(30, 15).unwrap(),
            libm::log(155_117_520.0),
            max_relative = 1e-14
        );
    }

    #[test]
    fn binomials_reproduce_exact_integers_up_to_30() {
        let c = cache();
        for n in 0..=30u64 {
            for k in 0..=n {
                let exact = exact_binomial(n, k) as f64;
                let got = libm::exp(c.log_binomial(n as usize, k as usize).unwrap());
                assert_relative_eq!(got, exact, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn log_binomial_rejects_bad_indices() {
        let c = BasisCache::new(10);
        assert!(matches!(c.log_binomial(3, 4), Err(Error::BinomialIndex { .. })));
        assert!(matches!(c.log_binomial(11, 1), Err(Error::BinomialIndex { .. })));
    }

    #[test]
    fn basis_examples() {
        let c = cache();
        assert_eq!(c.basis_1d(3, 0, 0.0).unwrap(), 1.0);
        assert_eq!(c.basis_1d(3, 3, 1.0).unwrap(), 1.0);
        assert_eq!(c.basis_1d(3, 1, 1.0).unwrap(), 0.0);
        assert_relative_eq!(c.basis_1d(2, 1, 0.5).unwrap(), 0.5, max_relative = 1e-15);
        assert!(matches!(c.basis_1d(3, 1, 1.5), Err(Error::OutsideUnitInterval(_))));
        assert!(matches!(c.basis_1d(3, 1, -0.0001), Err(Error::OutsideUnitInterval(_))));
    }

    #[test]
    fn basis_matches_exact_rational_evaluation() {
        // oracle: C(10,4) x^4 (1-x)^6 in exact rationals, x the double nearest 0.3
        let x = 0.3f64;
        let xr = BigRational::from_float(x).unwrap();
        let one = BigRational::one();
        let pow = |b: &BigRational, e: u32| (0..e).fold(BigRational::one(), |acc, _| acc * b);
        let exact = BigRational::from_integer(BigInt::from(210))
            * pow(&xr, 4)
            * pow(&(one - &xr), 6);
        let expected = exact.to_f64().unwrap();
        let got = cache().basis_1d(10, 4, x).unwrap();
        assert!((got - expected).abs() < 1e-13, "{got} vs {expected}");
    }

    #[test]
    fn no_underflow_at_high_degree() {
        let c = BasisCache::new(4096);
        let b = c.basis_vector(4096, 0.5).unwrap();
        let s: f64 = crate::sum::compensated_sum(b.iter().copied());
        assert!((s - 1.0).abs() < 1e-11, "{s}");
        assert!(b[2048] > 0.0);
    }

    #[test]
    fn partition_of_unity_up_to_1024() {
        let c = cache();
        for n in [1usize, 2, 3, 7, 64, 255, 512, 1000, 1024] {
            for i in 0..=32 {
                let x = i as f64 / 32.0;
                let s = crate::sum::compensated_sum(c.basis_vector(n, x).unwrap());
                assert!((s - 1.0).abs() < 1e-12, "n={n} x={x} sum={s}");
            }
        }
    }

    #[test]
    fn bernstein_1d_examples() {
        let c = cache();
        for n in [1, 5, 40] {
            assert_relative_eq!(bernstein_1d(&c, |_| 2.5, n, 0.71).unwrap(), 2.5, max_relative = 1e-14);
            assert_relative_eq!(bernstein_1d(&c, |t| t, n, 0.37).unwrap(), 0.37, max_relative = 1e-14);
        }
        // brute force: Σ (k/4)² C(4,k) 2^-4 = (0 + 4/16 + 6·4/16 + 4·9/16 + 16/16) / 16
        let brute = (0.0 + 4.0 * 1.0 / 16.0 + 6.0 * 4.0 / 16.0 + 4.0 * 9.0 / 16.0 + 1.0) / 16.0;
        assert_eq!(brute, 0.3125);
        assert_relative_eq!(bernstein_1d(&c, |t| t * t, 4, 0.5).unwrap(), 0.3125, max_relative = 1e-15);
        assert!(matches!(bernstein_1d(&c, |t| t, 0, 0.5), Err(Error::ZeroDegree)));
    }

    #[test]
    fn bernstein_1d_interpolates_endpoints_exactly() {
        let c = cache();
        let f = |t: f64| libm::sin(3.0 * t) + 0.25;
        for n in [1, 9, 300] {
            assert_eq!(bernstein_1d(&c, f, n, 0.0).unwrap(), f(0.0));
            assert_eq!(bernstein_1d(&c, f, n, 1.0).unwrap(), f(1.0));
        }
    }

    #[test]
    fn bernstein_2d_examples() {
        let c = cache();
        let one = ScalarField2::new("one", |_, _| 1.0);
        assert_relative_eq!(bernstein_2d(&c, &one, 6, 0.3, 0.8).unwrap(), 1.0, max_relative = 1e-14);
        let lin = ScalarField2::new("sum", |a, b| a + b);
        assert_relative_eq!(bernstein_2d(&c, &lin, 7, 0.2, 0.9).unwrap(), 1.1, max_relative = 1e-14);
        // brute-force double sum for x1·x2 at n = 3, (0.5, 0.5)
        let prod = ScalarField2::new("prod", |a, b| a * b);
        let w = [1.0 / 8.0, 3.0 / 8.0, 3.0 / 8.0, 1.0 / 8.0];
        let mut brute = 0.0;
        for k1 in 0..4 {
            for k2 in 0..4 {
                brute += (k1 as f64 / 3.0) * (k2 as f64 / 3.0) * w[k1] * w[k2];
            }
        }
        assert_relative_eq!(brute, 0.25, max_relative = 1e-15);
        assert_relative_eq!(bernstein_2d(&c, &prod, 3, 0.5, 0.5).unwrap(), brute, max_relative = 1e-14);
    }

    #[test]
    fn derivative_examples() {
        let c = cache();
        let konst = ScalarField2::new("c", |_, _| 3.0);
        let x1 = ScalarField2::new("x1", |a, _| a);
        let prod = ScalarField2::new("prod", |a, b| a * b);
        for n in [1, 4, 33] {
            for &(p, q) in &[(0.0, 0.0), (0.3, 0.7), (1.0, 0.5)] {
                assert_eq!(bernstein_2d_dx1(&c, &konst, n, p, q).unwrap(), 0.0);
                assert_eq!(bernstein_2d_dx1dx2(&c, &konst, n, p, q).unwrap(), 0.0);
                assert_relative_eq!(bernstein_2d_dx1(&c, &x1, n, p, q).unwrap(), 1.0, max_relative = 1e-12);
                assert_relative_eq!(
                    bernstein_2d_dx1dx2(&c, &prod, n, p, q).unwrap(),
                    1.0,
                    max_relative = 1e-11
                );
            }
        }
    }

    fn central_dx1(c: &BasisCache, f: &ScalarField2, n: usize, x1: f64, x2: f64, h: f64) -> f64 {
        (bernstein_2d(c, f, n, x1 + h, x2).unwrap() - bernstein_2d(c, f, n, x1 - h, x2).unwrap())
            / (2.0 * h)
    }

    fn central_dx1dx2(c: &BasisCache, f: &ScalarField2, n: usize, x1: f64, x2: f64, h: f64) -> f64 {
        let b = |p: f64, q: f64| bernstein_2d(c, f, n, p, q).unwrap();
        (b(x1 + h, x2 + h) - b(x1 + h, x2 - h) - b(x1 - h, x2 + h) + b(x1 - h, x2 - h))
            / (4.0 * h * h)
    }

    #[test]
    fn dx1_matches_finite_difference_example() {
        let c = cache();
        let f = ScalarField2::new("x1sq_x2", |a, b| a * a * b);
        let fd = central_dx1(&c, &f, 16, 0.5, 0.5, 1e-5);
        let got = bernstein_2d_dx1(&c, &f, 16, 0.5, 0.5).unwrap();
        assert!((got - fd).abs() < 1e-5, "{got} vs {fd}");
    }

    #[test]
    fn dx1dx2_matches_finite_difference_example() {
        let c = cache();
        let pi = core::f64::consts::PI;
        let f = ScalarField2::new("trig", move |a, b| libm::sin(pi * a) * libm::cos(pi * b));
        let fd = central_dx1dx2(&c, &f, 32, 0.25, 0.75, 1e-4);
        let got = bernstein_2d_dx1dx2(&c, &f, 32, 0.25, 0.75).unwrap();
        assert!((got - fd).abs() < 1e-4, "{got} vs {fd}");
    }

    #[test]
    fn derivative_consistency_on_interior_points() {
        let c = cache();
        let pi = core::f64::consts::PI;
        let fields = [
            ScalarField2::new("poly", |a, b| a * a * b + b),
            ScalarField2::new("trig", move |a, b| libm::sin(pi * a) * libm::cos(pi * b)),
        ];
        for f in &fields {
            for n in [4, 16, 64] {
                for i in 1..=5 {
                    for j in 1..=5 {
                        let (p, q) = (i as f64 / 6.0, j as f64 / 6.0);
                        let d1 = bernstein_2d_dx1(&c, f, n, p, q).unwrap();
                        let d12 = bernstein_2d_dx1dx2(&c, f, n, p, q).unwrap();
                        assert!((d1 - central_dx1(&c, f, n, p, q, 1e-5)).abs() < 1e-5);
                        assert!((d12 - central_dx1dx2(&c, f, n, p, q, 1e-4)).abs() < 1e-4);
                    }
                }
            }
        }
    }

    #[test]
    fn grid_evaluation_is_bit_identical_to_pointwise() {
        let c = cache();
        let grid = GridSpec::new(9).unwrap();
        let f = ScalarField2::new("wavy", |a, b| libm::sin(5.0 * a * b) + a);
        for partial in [Partial::Value, Partial::Dx1, Partial::Dx2, Partial::Dx1Dx2] {
            let k = OperatorKernel::build(&f, 13, ShiftVector::new(0.3, 0.6).unwrap(), partial).unwrap();
            let values = k.eval_on_grid(&c, &grid).unwrap();
            for (i, p) in grid.nodes().iter().enumerate() {
                for (j, q) in grid.nodes().iter().enumerate() {
                    assert_eq!(values[i * 9 + j].to_bits(), k.eval(&c, *p, *q).unwrap().to_bits());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn linear_precision(a in -2.0..2.0f64, b in -2.0..2.0f64, cc in -2.0..2.0f64,
                            n in 1usize..=256, x1 in 0.0..=1.0f64, x2 in 0.0..=1.0f64) {
            let cache = cache();
            let f = ScalarField2::new("affine", move |p, q| a + b * p + cc * q);
            let got = bernstein_2d(&cache, &f, n, x1, x2).unwrap();
            prop_assert!((got - (a + b * x1 + cc * x2)).abs() < 1e-11);
        }

        #[test]
        fn positivity_preserves_order(shift in 0.0..1.0f64, n in 1usize..=64,
                                      x1 in 0.0..=1.0f64, x2 in 0.0..=1.0f64) {
            let cache = cache();
            let f = ScalarField2::new("f", |p, q| libm::sin(7.0 * p) * libm::cos(3.0 * q));
            let g = ScalarField2::new("g", move |p, q| libm::sin(7.0 * p) * libm::cos(3.0 * q) + shift * p * q);
            for k in 0..=n {
                prop_assert!(cache.basis_1d(n, k, x1).unwrap() >= 0.0);
            }
            let bf = bernstein_2d(&cache, &f, n, x1, x2).unwrap();
            let bg = bernstein_2d(&cache, &g, n, x1, x2).unwrap();
            prop_assert!(bf <= bg + 1e-12);
        }
    }
}
