//! Named test fields covering the hypothesis classes of the convergence
//! statements, each with analytic partials.
//!
//! The singular factor `g(t) = (t − 1/2)² sin(1/(t − 1/2))`, `g(1/2) = 0`, has
//! a derivative at every point that is bounded but discontinuous at `t = 1/2`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::field::{Partial, ScalarField2, SmoothnessClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassTag {
    C2Smooth,
    DiscontinuousMixedDerivative,
    DiscontinuousFirstDerivative,
    BeyondHypothesis,
}

impl ClassTag {
    pub const fn as_str(self) -> &'static str {
        match self {
            ClassTag::C2Smooth => "C2-smooth",
            ClassTag::DiscontinuousMixedDerivative => "discontinuous-mixed-derivative",
            ClassTag::DiscontinuousFirstDerivative => "discontinuous-first-derivative",
            ClassTag::BeyondHypothesis => "beyond-hypothesis",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub field: ScalarField2,
    pub class_tags: &'static [ClassTag],
    /// Derivative orders whose convergence hypothesis the field satisfies
    /// (classical partial existing at every point of `K`, in `L1(K)`).
    pub hypotheses: &'static [Partial],
    /// `sup_K |f|`.
    pub bound: f64,
    pub closed_form_notes: &'static str,
}

impl CorpusEntry {
    pub fn name(&self) -> &str {
        self.field.name()
    }

    pub fn satisfies(&self, partial: Partial) -> bool {
        self.hypotheses.contains(&partial)
    }

    pub fn is_beyond_hypothesis(&self) -> bool {
        self.class_tags.contains(&ClassTag::BeyondHypothesis)
    }
}

/// `(t − 1/2)² sin(1/(t − 1/2))`, 0 at `t = 1/2`.
pub fn osc_factor(t: f64) -> f64 {
    let u = t - 0.5;
    if u == 0.0 {
        0.0
    } else {
        u * u * libm::sin(1.0 / u)
    }
}

/// `2(t − 1/2) sin(1/(t − 1/2)) − cos(1/(t − 1/2))`, 0 at `t = 1/2`.
pub fn osc_factor_derivative(t: f64) -> f64 {
    let u = t - 0.5;
    if u == 0.0 {
        0.0
    } else {
        let w = 1.0 / u;
        2.0 * u * libm::sin(w) - libm::cos(w)
    }
}

fn sign(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn poly() -> CorpusEntry {
    CorpusEntry {
        field: ScalarField2::new("poly", |a, b| a * a * b + b)
            .with_d1(|a, b| 2.0 * a * b)
            .with_d2(|a, _| a * a + 1.0)
            .with_d12(|a, _| 2.0 * a),
        class_tags: &[ClassTag::C2Smooth],
        hypotheses: &[Partial::Dx1, Partial::Dx2, Partial::Dx1Dx2],
        bound: 2.0,
        closed_form_notes: "x1^2 x2 + x2",
    }
}

fn trig() -> CorpusEntry {
    CorpusEntry {
        field: ScalarField2::new("trig", |a, b| libm::sin(PI * a) * libm::cos(PI * b))
            .with_d1(|a, b| PI * libm::cos(PI * a) * libm::cos(PI * b))
            .with_d2(|a, b| -PI * libm::sin(PI * a) * libm::sin(PI * b))
            .with_d12(|a, b| -PI * PI * libm::cos(PI * a) * libm::sin(PI * b)),
        class_tags: &[ClassTag::C2Smooth],
        hypotheses: &[Partial::Dx1, Partial::Dx2, Partial::Dx1Dx2],
        bound: 1.0,
        closed_form_notes: "sin(pi x1) cos(pi x2)",
    }
}

fn osc() -> CorpusEntry {
    CorpusEntry {
        field: ScalarField2::new("osc", |a, b| osc_factor(a) * osc_factor(b))
            .with_class(SmoothnessClass::DiscontinuousDerivative)
            .with_d1(|a, b| osc_factor_derivative(a) * osc_factor(b))
            .with_d2(|a, b| osc_factor(a) * osc_factor_derivative(b))
            .with_d12(|a, b| osc_factor_derivative(a) * osc_factor_derivative(b)),
        class_tags: &[ClassTag::DiscontinuousMixedDerivative],
        hypotheses: &[Partial::Dx1, Partial::Dx2, Partial::Dx1Dx2],
        bound: 1.0 / 16.0,
        closed_form_notes: "g(x1) g(x2), g(t) = (t-1/2)^2 sin(1/(t-1/2)); f_x1x2 = g'(x1) g'(x2) \
                            exists everywhere, is bounded, and is discontinuous on x1 = 1/2 and x2 = 1/2",
    }
}

fn ridge() -> CorpusEntry {
    CorpusEntry {
        field: ScalarField2::new("ridge", |a, b| osc_factor(a) * b)
            .with_class(SmoothnessClass::DiscontinuousDerivative)
            .with_d1(|a, b| osc_factor_derivative(a) * b)
            .with_d2(|a, _| osc_factor(a))
            .with_d12(|a, _| osc_factor_derivative(a)),
        class_tags: &[ClassTag::DiscontinuousFirstDerivative],
        hypotheses: &[Partial::Dx1, Partial::Dx2, Partial::Dx1Dx2],
        bound: 0.25,
        closed_form_notes: "h(x1) x2, h = g; f_x1 = h'(x1) x2 exists everywhere and is \
                            discontinuous on x1 = 1/2",
    }
}

fn kink() -> CorpusEntry {
    CorpusEntry {
        field: ScalarField2::new("kink", |a, b| libm::fabs(a - 0.5) * libm::fabs(b - 0.5))
            .with_class(SmoothnessClass::BeyondHypothesis)
            .with_d1(|a, b| sign(a - 0.5) * libm::fabs(b - 0.5))
            .with_d2(|a, b| libm::fabs(a - 0.5) * sign(b - 0.5))
            .with_d12(|a, b| sign(a - 0.5) * sign(b - 0.5)),
        class_tags: &[ClassTag::BeyondHypothesis],
        hypotheses: &[],
        bound: 0.25,
        closed_form_notes: "|x1-1/2| |x2-1/2|; partials fail on x1 = 1/2 and x2 = 1/2, \
                            f_x1x2 = sign(x1-1/2) sign(x2-1/2) a.e.",
    }
}

/// Corpus entries in a fixed order.
pub fn corpus() -> Vec<CorpusEntry> {
    vec![poly(), trig(), osc(), ridge(), kink()]
}

pub const CORPUS_NAMES: [&str; 5] = ["poly", "trig", "osc", "ridge", "kink"];

pub fn corpus_entry(name: &str) -> Option<CorpusEntry> {
    match name {
        "poly" => Some(poly()),
        "trig" => Some(trig()),
        "osc" => Some(osc()),
        "ridge" => Some(ridge()),
        "kink" => Some(kink()),
        _ => None,
    }
}
