//! Forward differences, difference-quotient error functionals, Gaussian
//! mollification and the Lorentz integral polynomial.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::bernstein::BasisCache;
use crate::field::{Partial, ScalarField2};
use crate::quadrature::{gauss_legendre, integrate_cell, l1_norm_2d, GridSpec};
use crate::sum::CompensatedSum;
use crate::{Error, Result};

/// `(x1, x2) ↦ f(x1 + h, x2) − f(x1, x2)`, through `f`'s own extension.
pub fn delta_x1(f: &ScalarField2, h: f64) -> Result<ScalarField2> {
    check_step(h)?;
    let g = f.clone();
    Ok(ScalarField2::plane(format!("dx1[{}]", f.name()), move |a, b| g.eval(a + h, b) - g.eval(a, b))
        .with_class(f.class()))
}

/// `(x1, x2) ↦ f(x1, x2 + h) − f(x1, x2)`.
pub fn delta_x2(f: &ScalarField2, h: f64) -> Result<ScalarField2> {
    check_step(h)?;
    let g = f.clone();
    Ok(ScalarField2::plane(format!("dx2[{}]", f.name()), move |a, b| g.eval(a, b + h) - g.eval(a, b))
        .with_class(f.class()))
}

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("difference step must be positive"))
    }
}

fn check_degree(n: usize) -> Result<f64> {
    if n == 0 {
        Err(Error::ZeroDegree)
    } else {
        Ok(n as f64)
    }
}

/// Integration region of the difference-quotient functionals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Region {
    /// Nodes whose forward-difference stencil stays inside `K`
    /// (`x1 + 1/n <= 1`, and `x2 + 1/n <= 1` where `x2` is differenced).
    #[default]
    Admissible,
    /// All of `K`. On the exit strip of width `1/n` the zero extension makes
    /// the quotient `n(0 − f)`, which contributes `≈ ∫|f(1, x2)| dx2`
    /// regardless of `n`.
    Square,
}

#[inline]
fn admitted(region: Region, x: f64, h: f64) -> bool {
    match region {
        Region::Square => true,
        Region::Admissible => x + h <= 1.0,
    }
}

/// `∫∫ |n (f(x1 + 1/n, x2) − f(x1, x2)) − f_x1(x1, x2)|` on the grid.
pub fn lemma_eqle1_error(
    f: &ScalarField2,
    f_x1_ref: impl Fn(f64, f64) -> f64,
    n: usize,
    grid: &GridSpec,
    region: Region,
) -> Result<f64> {
    let nf = check_degree(n)?;
    let h = 1.0 / nf;
    l1_norm_2d(
        |a, b| {
            if admitted(region, a, h) {
                nf * (f.eval(a + h, b) - f.eval(a, b)) - f_x1_ref(a, b)
            } else {
                0.0
            }
        },
        grid,
    )
}

/// `∫∫ |n (f_x2(x1 + 1/n, x2) − f_x2(x1, x2)) − f_x1x2(x1, x2)|`; takes the
/// `f_x2` field itself.
pub fn lemma_eqle2_error(
    f_x2: &ScalarField2,
    f_x1x2_ref: impl Fn(f64, f64) -> f64,
    n: usize,
    grid: &GridSpec,
    region: Region,
) -> Result<f64> {
    lemma_eqle1_error(f_x2, f_x1x2_ref, n, grid, region)
}

/// Reading of the third difference-quotient functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Eqle3Variant {
    /// `n² Δ_(x2)Δ_(x1) f_x2 − n Δ_(x1) f_x2`, taken literally.
    #[default]
    Verbatim,
    /// `n² Δ_(x2)Δ_(x1) f − n Δ_(x1) f_x2`: both terms approximate `f_x1x2`.
    Corrected,
}

impl Eqle3Variant {
    pub const fn as_str(self) -> &'static str {
        match self {
            Eqle3Variant::Verbatim => "verbatim",
            Eqle3Variant::Corrected => "corrected",
        }
    }
}

pub fn lemma_eqle3_error(
    f: &ScalarField2,
    n: usize,
    grid: &GridSpec,
    variant: Eqle3Variant,
    region: Region,
) -> Result<f64> {
    let nf = check_degree(n)?;
    let h = 1.0 / nf;
    let f_x2 = f.require_partial(Partial::Dx2)?;
    let second = match variant {
        Eqle3Variant::Verbatim => f_x2.clone(),
        Eqle3Variant::Corrected => f.clone(),
    };
    l1_norm_2d(
        |a, b| {
            if !(admitted(region, a, h) && admitted(region, b, h)) {
                return 0.0;
            }
            // Δ_(x2) Δ_(x1) g = (g(a+h, b+h) − g(a, b+h)) − (g(a+h, b) − g(a, b))
            let dd = (second.eval(a + h, b + h) - second.eval(a, b + h))
                - (second.eval(a + h, b) - second.eval(a, b));
            let d = f_x2.eval(a + h, b) - f_x2.eval(a, b);
            nf * nf * dd - nf * d
        },
        grid,
    )
}

/// Gaussian mollifier `φ^ε(y) = φ(y/ε)/ε`, truncated to `|y| <= Rε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollifierSpec {
    epsilon: f64,
    truncation_radius: f64,
    quad_points: usize,
}

impl MollifierSpec {
    pub const DEFAULT_RADIUS: f64 = 6.0;
    pub const DEFAULT_POINTS: usize = 64;

    pub fn new(epsilon: f64, truncation_radius: f64, quad_points: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidArgument("mollifier epsilon must be positive"));
        }
        if !(truncation_radius >= 4.0 && truncation_radius.is_finite()) {
            return Err(Error::InvalidArgument("mollifier truncation radius must be at least 4"));
        }
        if quad_points < 16 {
            return Err(Error::InvalidArgument("mollifier needs at least 16 points per axis"));
        }
        Ok(Self { epsilon, truncation_radius, quad_points })
    }

    /// `R = 6`, 64 Gauss–Legendre points per axis.
    pub fn with_epsilon(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, Self::DEFAULT_RADIUS, Self::DEFAULT_POINTS)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn truncation_radius(&self) -> f64 {
        self.truncation_radius
    }

    pub fn quad_points(&self) -> usize {
        self.quad_points
    }

    /// Offsets `y_i` and weights `w_i φ^ε(y_i)` of the 1D kernel rule.
    pub fn kernel_rule(&self) -> (Vec<f64>, Vec<f64>) {
        let half = self.truncation_radius * self.epsilon;
        let (t, w) = gauss_legendre(self.quad_points);
        let norm = 1.0 / (self.epsilon * libm::sqrt(2.0 * PI));
        let offsets: Vec<f64> = t.iter().map(|ti| half * ti).collect();
        let weights = offsets
            .iter()
            .zip(&w)
            .map(|(y, wi)| {
                let z = y / self.epsilon;
                half * wi * norm * libm::exp(-0.5 * z * z)
            })
            .collect();
        (offsets, weights)
    }

    /// `∫∫` of the discretized tensor kernel.
    pub fn kernel_mass(&self) -> f64 {
        let (_, w) = self.kernel_rule();
        let s = w.iter().copied().collect::<CompensatedSum>().value();
        s * s
    }
}

/// `f^ε(x) = ∫∫ f(x1 − y1, x2 − y2) φ^ε(y1) φ^ε(y2) dy` by tensor
/// Gauss–Legendre quadrature over `[−Rε, Rε]²`. The result is defined on the
/// whole plane.
pub fn mollify(f: &ScalarField2, spec: &MollifierSpec) -> ScalarField2 {
    let (offsets, weights) = spec.kernel_rule();
    let offsets: Arc<[f64]> = offsets.into();
    let weights: Arc<[f64]> = weights.into();
    let g = f.clone();
    ScalarField2::plane(format!("{}^eps={}", f.name(), spec.epsilon), move |a, b| {
        let mut outer = CompensatedSum::new();
        for (y1, w1) in offsets.iter().zip(weights.iter()) {
            let mut inner = CompensatedSum::new();
            for (y2, w2) in offsets.iter().zip(weights.iter()) {
                inner.add(w2 * g.eval(a - y1, b - y2));
            }
            outer.add(w1 * inner.value());
        }
        outer.value()
    })
    .with_class(f.class())
}

/// Absolute tolerance of each cell integral in [`lorentz_pn`].
pub const LORENTZ_CELL_TOL: f64 = 1e-10;

/// `P_n(f, x) = Σ_k C(n,k) x^k (1−x)^(n−k) (n+1) ∫_{k/(n+1)}^{(k+1)/(n+1)} f`,
/// the derivative of `B_{n+1}(F, x)` with `F` the antiderivative of `f`.
pub fn lorentz_pn(cache: &BasisCache, f: impl Fn(f64) -> f64, n: usize, x: f64) -> Result<f64> {
    let nf = check_degree(n)?;
    let basis = cache.basis_vector(n, x)?;
    let cells = nf + 1.0;
    let mut acc = CompensatedSum::new();
    for (k, b) in basis.iter().enumerate() {
        let lo = k as f64 / cells;
        let hi = (k + 1) as f64 / cells;
        let integral = integrate_cell(&f, lo, hi, LORENTZ_CELL_TOL)
            .map_err(|e| Error::LorentzCell { cell: k, source: alloc::boxed::Box::new(e) })?;
        acc.add(b * cells * integral);
    }
    Ok(acc.value())
}

/// `∫∫_K |g(x1 + a, x2 + b) − g(x1, x2)|` on the grid, through `g`'s own
/// extension.
pub fn translation_l1_modulus(g: &ScalarField2, a: f64, b: f64, grid: &GridSpec) -> Result<f64> {
    l1_norm_2d(|p, q| g.eval(p + a, q + b) - g.eval(p, q), grid)
}
