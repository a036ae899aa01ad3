use std::path::PathBuf;

use bernstein_core::bernstein::DEFAULT_MAX_N;
use bernstein_core::calculus::Eqle3Variant;
use bernstein_core::corpus::{corpus_entry, CORPUS_NAMES};
use bernstein_core::Partial;

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Theorem1,
    Lemma,
    BetaCheck,
    MixedSymmetry,
    Lorentz,
}

impl Experiment {
    pub const fn as_str(self) -> &'static str {
        match self {
            Experiment::Theorem1 => "theorem1",
            Experiment::Lemma => "lemma",
            Experiment::BetaCheck => "beta-check",
            Experiment::MixedSymmetry => "mixed-symmetry",
            Experiment::Lorentz => "lorentz",
        }
    }

    fn uses_monte_carlo(self) -> bool {
        matches!(self, Experiment::Theorem1 | Experiment::MixedSymmetry)
    }

    fn uses_grid(self) -> bool {
        matches!(self, Experiment::Theorem1 | Experiment::Lemma | Experiment::MixedSymmetry)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One-dimensional functions available to the Lorentz probe.
pub const LORENTZ_FUNCTIONS: [&str; 4] = ["identity", "square", "step", "one"];

pub const DEFAULT_N_LIST: [usize; 4] = [12, 24, 48, 96];
pub const DEFAULT_LORENTZ_N_LIST: [usize; 4] = [25, 50, 100, 200];
pub const DEFAULT_BETA_N_MAX: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub functions: Vec<String>,
    pub which: Partial,
    /// For `beta-check`, a single entry holding `n_max`.
    pub n_list: Vec<usize>,
    pub grid_m: usize,
    pub mc_samples: usize,
    pub seed: u64,
    /// Mollifier width; `lemma` adds a mollifier row per function when set.
    pub epsilon: Option<f64>,
    pub eqle3_variant: Eqle3Variant,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Worker threads; `None` uses every core.
    pub threads: Option<usize>,
    /// Record per-cell compute time. Off by default so output is byte-stable.
    pub timing: bool,
}

impl RunConfig {
    pub fn new(experiment: Experiment) -> Self {
        let (functions, n_list): (Vec<&str>, Vec<usize>) = match experiment {
            Experiment::Lorentz => (LORENTZ_FUNCTIONS.to_vec(), DEFAULT_LORENTZ_N_LIST.to_vec()),
            Experiment::BetaCheck => (Vec::new(), vec![DEFAULT_BETA_N_MAX]),
            _ => (CORPUS_NAMES.to_vec(), DEFAULT_N_LIST.to_vec()),
        };
        Self {
            experiment,
            functions: functions.into_iter().map(String::from).collect(),
            which: Partial::Dx1Dx2,
            n_list,
            grid_m: 128,
            mc_samples: 32,
            seed: 7,
            epsilon: None,
            eqle3_variant: Eqle3Variant::Verbatim,
            out: None,
            format: Format::Csv,
            threads: None,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.n_list.is_empty() {
            return bad("n list is empty".into());
        }
        if self.experiment == Experiment::BetaCheck {
            if self.n_list.len() != 1 {
                return bad("beta-check takes a single --n (n_max)".into());
            }
        } else if let Some(w) = self.n_list.windows(2).find(|w| w[0] >= w[1]) {
            return bad(format!("n list must be strictly increasing ({} then {})", w[0], w[1]));
        }
        if self.n_list[0] == 0 {
            return bad("n must be at least 1".into());
        }
        if let Some(&n) = self.n_list.iter().find(|&&n| n > DEFAULT_MAX_N) {
            return bad(format!("n = {n} exceeds the supported maximum {DEFAULT_MAX_N}"));
        }
        if self.experiment.uses_grid() && self.grid_m < 16 {
            return bad(format!("grid must be at least 16, got {}", self.grid_m));
        }
        if self.experiment.uses_monte_carlo() && self.mc_samples < 2 {
            return bad(format!("mc samples must be at least 2, got {}", self.mc_samples));
        }
        if self.experiment == Experiment::Theorem1 && !matches!(self.which, Partial::Dx1 | Partial::Dx1Dx2) {
            return bad(format!("--which must be dx1 or dx1dx2, got {}", self.which));
        }
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0 && eps.is_finite()) {
                return bad(format!("epsilon must be positive, got {eps}"));
            }
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1".into());
        }
        match self.experiment {
            Experiment::BetaCheck => {}
            Experiment::Lorentz => {
                if self.functions.is_empty() {
                    return bad("no functions selected".into());
                }
                if let Some(f) = self.functions.iter().find(|f| !LORENTZ_FUNCTIONS.contains(&f.as_str())) {
                    return bad(format!("unknown lorentz function '{f}' (expected one of {})", LORENTZ_FUNCTIONS.join(", ")));
                }
            }
            _ => {
                if self.functions.is_empty() {
                    return bad("no functions selected".into());
                }
                if let Some(f) = self.functions.iter().find(|f| corpus_entry(f).is_none()) {
                    return bad(format!("unknown function '{f}' (expected one of {})", CORPUS_NAMES.join(", ")));
                }
            }
        }
        Ok(())
    }

    pub fn max_n(&self) -> usize {
        self.n_list.iter().copied().max().unwrap_or(0)
    }
}
