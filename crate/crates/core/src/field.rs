//! Real fields on the unit square `K = [0,1]²`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

/// Shared, thread-safe evaluator `(x1, x2) -> value`.
pub type Fn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Which quantity of a field (or of an operator applied to it) is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Partial {
    Value,
    Dx1,
    Dx2,
    Dx1Dx2,
}

impl Partial {
    pub const fn as_str(self) -> &'static str {
        match self {
            Partial::Value => "value",
            Partial::Dx1 => "dx1",
            Partial::Dx2 => "dx2",
            Partial::Dx1Dx2 => "dx1dx2",
        }
    }
}

impl fmt::Display for Partial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Partial {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "value" => Ok(Partial::Value),
            "dx1" => Ok(Partial::Dx1),
            "dx2" => Ok(Partial::Dx2),
            "dx1dx2" => Ok(Partial::Dx1Dx2),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothnessClass {
    Smooth,
    DiscontinuousDerivative,
    BeyondHypothesis,
}

impl SmoothnessClass {
    pub const fn as_str(self) -> &'static str {
        match self {
            SmoothnessClass::Smooth => "smooth",
            SmoothnessClass::DiscontinuousDerivative => "discontinuous-derivative",
            SmoothnessClass::BeyondHypothesis => "beyond-hypothesis",
        }
    }
}

/// Out-of-square policy of a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    /// The formula is used on `K`; every evaluation outside `K` returns 0.
    UnitSquare,
    /// The formula is used everywhere. Test fields and derived fields
    /// (differences, mollifications) that already encode a zero extension.
    Plane,
}

/// A bounded real function on `K` with optional analytic partials.
///
/// All evaluation goes through [`ScalarField2::eval`] (or
/// [`ScalarField2::eval_partial`]), which applies the field's [`Support`].
#[derive(Clone)]
pub struct ScalarField2 {
    name: String,
    class: SmoothnessClass,
    support: Support,
    value: Fn2,
    d1: Option<Fn2>,
    d2: Option<Fn2>,
    d12: Option<Fn2>,
}

impl fmt::Debug for ScalarField2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField2")
            .field("name", &self.name)
            .field("class", &self.class)
            .field("support", &self.support)
            .field("d1", &self.d1.is_some())
            .field("d2", &self.d2.is_some())
            .field("d12", &self.d12.is_some())
            .finish()
    }
}

#[inline]
pub fn in_unit_square(x1: f64, x2: f64) -> bool {
    (0.0..=1.0).contains(&x1) && (0.0..=1.0).contains(&x2)
}

impl ScalarField2 {
    /// Field on `K`, extended by zero outside.
    pub fn new(
        name: impl Into<String>,
        value: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::with_support(name, Support::UnitSquare, value)
    }

    /// Field whose formula is used on the whole plane.
    pub fn plane(
        name: impl Into<String>,
        value: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::with_support(name, Support::Plane, value)
    }

    fn with_support(
        name: impl Into<String>,
        support: Support,
        value: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            class: SmoothnessClass::Smooth,
            support,
            value: Arc::new(value),
            d1: None,
            d2: None,
            d12: None,
        }
    }

    pub fn with_class(mut self, class: SmoothnessClass) -> Self {
        self.class = class;
        self
    }

    pub fn with_d1(mut self, d: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d1 = Some(Arc::new(d));
        self
    }

    pub fn with_d2(mut self, d: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d2 = Some(Arc::new(d));
        self
    }

    pub fn with_d12(mut self, d: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d12 = Some(Arc::new(d));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn class(&self) -> SmoothnessClass {
        self.class
    }

    pub fn support(&self) -> Support {
        self.support
    }

    #[inline]
    fn covers(&self, x1: f64, x2: f64) -> bool {
        match self.support {
            Support::Plane => true,
            Support::UnitSquare => in_unit_square(x1, x2),
        }
    }

    #[inline]
    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        if self.covers(x1, x2) {
            (self.value)(x1, x2)
        } else {
            0.0
        }
    }

    fn partial_fn(&self, partial: Partial) -> Option<&Fn2> {
        match partial {
            Partial::Value => Some(&self.value),
            Partial::Dx1 => self.d1.as_ref(),
            Partial::Dx2 => self.d2.as_ref(),
            Partial::Dx1Dx2 => self.d12.as_ref(),
        }
    }

    pub fn has_partial(&self, partial: Partial) -> bool {
        self.partial_fn(partial).is_some()
    }

    /// Analytic partial at a point, under the same out-of-square policy.
    #[inline]
    pub fn eval_partial(&self, partial: Partial, x1: f64, x2: f64) -> Option<f64> {
        let d = self.partial_fn(partial)?;
        Some(if self.covers(x1, x2) { d(x1, x2) } else { 0.0 })
    }

    /// The analytic partial as a field of its own (same support and class).
    pub fn partial_field(&self, partial: Partial) -> Option<ScalarField2> {
        let d = self.partial_fn(partial)?.clone();
        Some(Self {
            name: format!("{}_{}", self.name, partial),
            class: self.class,
            support: self.support,
            value: d,
            d1: None,
            d2: None,
            d12: None,
        })
    }

    /// Like [`Self::partial_field`] but failing with a descriptive error.
    pub fn require_partial(&self, partial: Partial) -> crate::Result<ScalarField2> {
        self.partial_field(partial)
            .ok_or_else(|| crate::Error::MissingPartial {
                field: self.name.clone(),
                partial,
            })
    }
}
