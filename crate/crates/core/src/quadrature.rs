//! Midpoint L1 norms on the unit square and the one-dimensional quadrature
//! and special-function helpers the rest of the crate needs.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use crate::bernstein::BasisCache;
use crate::sum::CompensatedSum;
use crate::{Error, Result};

/// Tensor midpoint grid on `[0,1]²`: nodes `(i + 1/2)/m`, weight `1/m²`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    m: usize,
    nodes: Vec<f64>,
    cell_weight: f64,
}

impl GridSpec {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument("grid needs at least 2 points per axis"));
        }
        let mf = m as f64;
        let nodes = (0..m).map(|i| (i as f64 + 0.5) / mf).collect();
        Ok(Self { m, nodes, cell_weight: 1.0 / (mf * mf) })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn cell_weight(&self) -> f64 {
        self.cell_weight
    }

    /// Node coordinates of a flat row-major index.
    pub fn node_at(&self, index: usize) -> (f64, f64) {
        (self.nodes[index / self.m], self.nodes[index % self.m])
    }

    /// `g` at every node, row-major (`x1` index outer).
    pub fn sample(&self, g: impl Fn(f64, f64) -> f64) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.m * self.m);
        for &x1 in &self.nodes {
            for &x2 in &self.nodes {
                let v = g(x1, x2);
                if !v.is_finite() {
                    return Err(Error::NonFinite { x1, x2 });
                }
                out.push(v);
            }
        }
        Ok(out)
    }
}

/// `Σ |g(node)| / m²`, summed row-major with compensation.
pub fn l1_norm_2d(g: impl Fn(f64, f64) -> f64, grid: &GridSpec) -> Result<f64> {
    let mut acc = CompensatedSum::new();
    for &x1 in grid.nodes() {
        for &x2 in grid.nodes() {
            let v = g(x1, x2);
            if !v.is_finite() {
                return Err(Error::NonFinite { x1, x2 });
            }
            acc.add(v.abs());
        }
    }
    Ok(acc.value() * grid.cell_weight())
}

/// Grid L1 distance between two row-major node tables.
///
/// Same summation order as [`l1_norm_2d`] applied to `a - b`.
pub fn l1_distance(a: &[f64], b: &[f64], grid: &GridSpec) -> Result<f64> {
    let len = grid.m() * grid.m();
    if a.len() != len || b.len() != len {
        return Err(Error::InvalidArgument("node tables must have m² entries"));
    }
    let mut acc = CompensatedSum::new();
    for (idx, (p, q)) in a.iter().zip(b).enumerate() {
        let d = p - q;
        if !d.is_finite() {
            let (x1, x2) = grid.node_at(idx);
            return Err(Error::NonFinite { x1, x2 });
        }
        acc.add(d.abs());
    }
    Ok(acc.value() * grid.cell_weight())
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0`.
///
/// Lanczos approximation (g = 7, 9 terms) for `x >= 1/2`, reflection below.
/// Integer arguments up to 20 go through the exact factorial, so
/// `ln Γ(1) = ln Γ(2) = 0` exactly.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // rejects NaN too
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::GammaDomain(x));
    }
    if x <= 20.0 && x == libm::floor(x) {
        let k = x as u64;
        let fact = (1..k).fold(1.0f64, |acc, i| acc * i as f64);
        return Ok(libm::log(fact));
    }
    if x < 0.5 {
        // Γ(x) Γ(1-x) = π / sin(πx)
        let s = libm::sin(PI * x);
        return Ok(libm::log(PI / s) - lanczos_log_gamma(1.0 - x));
    }
    Ok(lanczos_log_gamma(x))
}

fn lanczos_log_gamma(x: f64) -> f64 {
    let z = x - 1.0;
    let mut a = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * libm::log(2.0 * PI) + (z + 0.5) * libm::log(t) - t + libm::log(a)
}

/// `ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a + b)`.
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}

/// `n² C(n−1,k1) C(n−1,k2) B(k1+1, n−k1) B(k2+1, n−k2)`, evaluated in log
/// space. Binomials come from the cache, Beta values from [`log_gamma`], so
/// the two factors are computed independently; the product is exactly 1.
pub fn beta_weight_identity(cache: &BasisCache, n: usize, k1: usize, k2: usize) -> Result<f64> {
    if n == 0 || k1 >= n || k2 >= n {
        return Err(Error::WeightIndex { n, k1, k2 });
    }
    let nf = n as f64;
    let log_weight = 2.0 * libm::log(nf)
        + cache.log_binomial(n - 1, k1)?
        + cache.log_binomial(n - 1, k2)?
        + log_beta(k1 as f64 + 1.0, (n - k1) as f64)?
        + log_beta(k2 as f64 + 1.0, (n - k2) as f64)?;
    Ok(libm::exp(log_weight))
}

/// Upper bound on interval splits in [`integrate_cell`].
pub const MAX_SUBDIVISIONS: usize = 10_000;

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    fl: f64,
    fr: f64,
    refined: f64,
    err: f64,
}

impl Panel {
    fn new(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> Self {
        let m = 0.5 * (a + b);
        let h = b - a;
        let fl = f(0.5 * (a + m));
        let fr = f(0.5 * (m + b));
        let whole = h / 6.0 * (fa + 4.0 * fm + fb);
        let refined = h / 12.0 * (fa + 4.0 * fl + 2.0 * fm + 4.0 * fr + fb);
        let err = libm::fabs(refined - whole) / 15.0;
        Self { a, b, fa, fm, fb, whole, fl, fr, refined, err }
    }

    fn estimate(&self) -> f64 {
        self.refined + (self.refined - self.whole) / 15.0
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err).then(other.a.total_cmp(&self.a))
    }
}

/// `∫_a^b f(t) dt` by globally adaptive Simpson: the panel with the largest
/// error estimate is split until the summed estimate is at most `tol`.
///
/// Globally adaptive splitting converges on jump discontinuities, where a
/// locally halved tolerance never would.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn integrate_cell(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a < b) {
        return Err(Error::InvalidArgument("integration interval must satisfy a < b"));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    let mut heap = BinaryHeap::new();
    heap.push(Panel::new(&f, a, b, f(a), f(0.5 * (a + b)), f(b)));
    for _ in 0..MAX_SUBDIVISIONS {
        let total_err: f64 = heap.iter().map(|p| p.err).sum();
        if total_err <= tol {
            let mut panels: Vec<Panel> = heap.into_vec();
            panels.sort_by(|p, q| p.a.total_cmp(&q.a));
            return Ok(panels.iter().map(Panel::estimate).collect::<CompensatedSum>().value());
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        if !(worst.a < m && m < worst.b) {
            break;
        }
        heap.push(Panel::new(&f, worst.a, m, worst.fa, worst.fl, worst.fm));
        heap.push(Panel::new(&f, m, worst.b, worst.fm, worst.fr, worst.fb));
    }
    Err(Error::QuadratureBudget { a, b, budget: MAX_SUBDIVISIONS })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(points: usize) -> (Vec<f64>, Vec<f64>) {
    let n = points;
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n and its derivative
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn_1 = if n <= 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pn_1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if libm::fabs(dx) < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn grid_nodes_are_interior_and_weights_sum_to_one() {
        for m in [2, 3, 64, 255, 256] {
            let g = GridSpec::new(m).unwrap();
            assert!(g.nodes().iter().all(|&x| x > 0.0 && x < 1.0));
            assert!((g.cell_weight() * (m * m) as f64 - 1.0).abs() < 1e-14);
        }
        assert!(GridSpec::new(1).is_err());
    }

    #[test]
    fn l1_norm_examples() {
        let g = GridSpec::new(256).unwrap();
        assert_eq!(l1_norm_2d(|_, _| 0.0, &g).unwrap(), 0.0);
        assert!((l1_norm_2d(|_, _| -2.75, &g).unwrap() - 2.75).abs() < 1e-14);
        assert!((l1_norm_2d(|a, _| a, &g).unwrap() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn l1_norm_reports_non_finite_node() {
        let g = GridSpec::new(4).unwrap();
        let err = l1_norm_2d(|a, b| if a > 0.5 && b > 0.5 { f64::NAN } else { 1.0 }, &g).unwrap_err();
        assert_eq!(err, Error::NonFinite { x1: 0.625, x2: 0.625 });
    }

    #[test]
    fn l1_distance_matches_norm_of_difference() {
        let g = GridSpec::new(17).unwrap();
        let a = g.sample(|p, q| libm::sin(4.0 * p) * q).unwrap();
        let b = g.sample(|p, q| p * p - q).unwrap();
        let direct = l1_norm_2d(|p, q| libm::sin(4.0 * p) * q - (p * p - q), &g).unwrap();
        assert_eq!(l1_distance(&a, &b, &g).unwrap(), direct);
    }

    #[test]
    fn log_gamma_examples() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
        assert_relative_eq!(log_gamma(5.0).unwrap(), libm::log(24.0), max_relative = 1e-15);
        assert!(matches!(log_gamma(0.0), Err(Error::GammaDomain(_))));
        assert!(matches!(log_gamma(-3.5), Err(Error::GammaDomain(_))));
    }

    #[test]
    fn log_gamma_against_high_precision_values() {
        // 40-digit reference values
        let cases = [
            (100.5, 361.435_540_467_777_621_555_251_912_702_520_8),
            (5000.0, 37_582.626_315_685_350_331_766_146_147_696_858),
            (2.5, 0.284_682_870_472_919_159_632_494_669_682_701_9),
            (0.25, 1.288_022_524_698_077_457_370_610_440_219_717),
            (1234.75, 7_552.330_430_458_289_624_660_565_682_574_71),
            (37.1, 96.079_565_748_160_373_996_915_783_793_679_7),
        ];
        for (x, want) in cases {
            let got = log_gamma(x).unwrap();
            assert!(((got - want) / want).abs() < 1e-12, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn log_gamma_recurrence_over_range() {
        // ln Γ(x+1) = ln Γ(x) + ln x, checked across [1, 5000]
        let mut x = 1.03;
        while x < 5000.0 {
            let lhs = log_gamma(x + 1.0).unwrap();
            let rhs = log_gamma(x).unwrap() + libm::log(x);
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0), "x={x}");
            x *= 1.37;
        }
    }

    #[test]
    fn beta_weight_examples() {
        let c = BasisCache::new(1024);
        assert_eq!(beta_weight_identity(&c, 1, 0, 0).unwrap(), 1.0);
        assert!((beta_weight_identity(&c, 5, 2, 4).unwrap() - 1.0).abs() < 1e-12);
        assert!((beta_weight_identity(&c, 1024, 511, 0).unwrap() - 1.0).abs() < 1e-10);
        assert!(matches!(beta_weight_identity(&c, 4, 4, 0), Err(Error::WeightIndex { .. })));
        assert!(matches!(beta_weight_identity(&c, 0, 0, 0), Err(Error::WeightIndex { .. })));
    }

    #[test]
    fn beta_weight_matches_exact_rationals_at_small_n() {
        // C(n-1,k) B(k+1, n-k) = C(n-1,k) k!(n-1-k)!/n! = 1/n exactly
        let c = BasisCache::new(64);
        for n in 1..=12usize {
            for k in 0..n {
                let fact = |m: usize| (1..=m).fold(1u128, |a, i| a * i as u128);
                let binom = fact(n - 1) / (fact(k) * fact(n - 1 - k));
                let beta_num = fact(k) * fact(n - 1 - k);
                let beta_den = fact(n);
                assert_eq!(binom * beta_num * n as u128, beta_den);
                assert!((beta_weight_identity(&c, n, k, k).unwrap() - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn beta_weight_exhaustive_up_to_64() {
        let c = BasisCache::new(64);
        for n in [1usize, 2, 4, 8, 16, 32, 64] {
            for k1 in 0..n {
                for k2 in 0..n {
                    let w = beta_weight_identity(&c, n, k1, k2).unwrap();
                    assert!((w - 1.0).abs() < 1e-10, "n={n} k1={k1} k2={k2} w={w}");
                }
            }
        }
    }

    #[test]
    fn integrate_cell_examples() {
        assert!((integrate_cell(|_| 1.0, 0.0, 0.25, 1e-10).unwrap() - 0.25).abs() < 1e-15);
        assert!((integrate_cell(|t| t * t, 0.0, 1.0, 1e-10).unwrap() - 1.0 / 3.0).abs() < 1e-10);
        let step = |t: f64| if t > 0.5 { 1.0 } else { 0.0 };
        assert!((integrate_cell(step, 0.4, 0.6, 1e-10).unwrap() - 0.1).abs() < 1e-8);
        // jump away from any dyadic node
        assert!((integrate_cell(|t| if t > 0.3 { 1.0 } else { 0.0 }, 0.0, 1.0, 1e-10).unwrap() - 0.7).abs() < 1e-8);
        assert!((integrate_cell(libm::exp, 0.0, 1.0, 1e-10).unwrap() - (core::f64::consts::E - 1.0)).abs() < 1e-10);
    }

    #[test]
    fn integrate_cell_errors() {
        assert!(matches!(integrate_cell(|t| t, 1.0, 0.0, 1e-10), Err(Error::InvalidArgument(_))));
        assert!(matches!(integrate_cell(|t| t, 0.0, 1.0, 0.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            integrate_cell(|_| f64::NAN, 0.0, 1.0, 1e-10),
            Err(Error::QuadratureBudget { .. })
        ));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 16, 64] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            // exact for degree 2n-1
            let deg = 2 * n - 2;
            let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * libm::pow(*xi, deg as f64)).sum();
            assert!((got - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n={n}");
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    fn field_pair() -> impl Strategy<Value = (f64, f64, f64)> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
    }

    proptest! {
        #[test]
        fn l1_norm_is_absolutely_homogeneous((a, b, c) in field_pair(), scale in -5.0..5.0f64) {
            let g = GridSpec::new(16).unwrap();
            let f = |p: f64, q: f64| a * libm::sin(3.0 * p) + b * q * q - c;
            let lhs = l1_norm_2d(|p, q| scale * f(p, q), &g).unwrap();
            let rhs = scale.abs() * l1_norm_2d(f, &g).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
        }

        #[test]
        fn l1_norm_triangle_inequality((a, b, c) in field_pair(), (d, e, h) in field_pair()) {
            let g = GridSpec::new(16).unwrap();
            let f1 = |p: f64, q: f64| a * p - b * libm::cos(5.0 * q) + c * p * q;
            let f2 = |p: f64, q: f64| d * q * q + e * libm::sin(2.0 * p) - h;
            let sum = l1_norm_2d(|p, q| f1(p, q) + f2(p, q), &g).unwrap();
            let bound = l1_norm_2d(f1, &g).unwrap() + l1_norm_2d(f2, &g).unwrap();
            prop_assert!(sum <= bound + 1e-12);
        }

        #[test]
        fn beta_weight_is_one_for_random_triples(n in 1usize..=1024, a in 0.0..1.0f64, b in 0.0..1.0f64) {
            let c = BasisCache::new(1024);
            let k1 = ((a * n as f64) as usize).min(n - 1);
            let k2 = ((b * n as f64) as usize).min(n - 1);
            prop_assert!((beta_weight_identity(&c, n, k1, k2).unwrap() - 1.0).abs() < 1e-10);
        }
    }
}
