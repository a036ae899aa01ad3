use std::io::Write;
use std::time::{Duration, Instant};

use bernstein_core::calculus::{
    lemma_eqle1_error, lemma_eqle2_error, lemma_eqle3_error, lorentz_pn, mollify, MollifierSpec, Region,
};
use bernstein_core::corpus::{corpus_entry, CorpusEntry};
use bernstein_core::quadrature::{beta_weight_identity, l1_norm_2d};
use bernstein_core::stancu::{mixed_order_sample, sample_l1_error};
use bernstein_core::{BasisCache, GridSpec, McEstimate, Partial, SeededShifts, ShiftSource};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Experiment, Format, RunConfig};
use crate::record::{write_beta_csv, write_json_lines, write_lorentz_csv, write_records_csv, ConvergenceRecord};
use crate::{CliError, Result};

type CoreResult<T> = bernstein_core::Result<T>;

/// Largest degree swept exhaustively by the Beta check.
pub const BETA_EXHAUSTIVE_N: usize = 64;
pub const BETA_SAMPLED_TRIPLES: usize = 1000;

pub const LORENTZ_PROBES: [f64; 4] = [0.1, 0.25, 0.75, 0.9];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellFailure {
    pub experiment: String,
    pub function: String,
    pub n: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepOutput {
    pub records: Vec<ConvergenceRecord>,
    pub failures: Vec<CellFailure>,
}

impl SweepOutput {
    fn push(&mut self, record: ConvergenceRecord, outcome: std::result::Result<(), String>) {
        if let Err(message) = outcome {
            self.failures.push(CellFailure {
                experiment: record.experiment.clone(),
                function: record.function.clone(),
                n: record.n,
                message,
            });
        }
        self.records.push(record);
    }

    fn finish(mut self) -> Self {
        self.records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        self
    }

    /// Finds the record for one cell.
    pub fn get(&self, experiment: &str, function: &str, n: usize) -> Option<&ConvergenceRecord> {
        self.records
            .iter()
            .find(|r| r.experiment == experiment && r.function == function && r.n == n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaReport {
    pub n_max: usize,
    pub exhaustive_n_max: usize,
    pub exhaustive_cases: usize,
    pub sampled_cases: usize,
    pub max_deviation_exhaustive: f64,
    pub max_deviation_sampled: f64,
    pub max_deviation: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LorentzRow {
    pub function: String,
    pub n: usize,
    pub x: f64,
    pub value: Option<f64>,
    pub deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunOutput {
    Sweep(SweepOutput),
    Beta(BetaReport),
    Lorentz { rows: Vec<LorentzRow>, failures: Vec<CellFailure> },
}

impl RunOutput {
    pub fn failures(&self) -> &[CellFailure] {
        match self {
            RunOutput::Sweep(s) => &s.failures,
            RunOutput::Beta(_) => &[],
            RunOutput::Lorentz { failures, .. } => failures,
        }
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> Result<()> {
        match (self, format) {
            (RunOutput::Sweep(s), Format::Csv) => write_records_csv(&s.records, out),
            (RunOutput::Sweep(s), Format::Json) => write_json_lines(&s.records, out),
            (RunOutput::Beta(r), Format::Csv) => write_beta_csv(r, out),
            (RunOutput::Beta(r), Format::Json) => write_json_lines(std::slice::from_ref(r), out),
            (RunOutput::Lorentz { rows, .. }, Format::Csv) => write_lorentz_csv(rows, out),
            (RunOutput::Lorentz { rows, .. }, Format::Json) => write_json_lines(rows, out),
        }
    }
}

/// Validates the configuration and runs it on a dedicated thread pool.
pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    pool.install(|| match cfg.experiment {
        Experiment::Theorem1 => run_theorem1(cfg, &entries(cfg)).map(RunOutput::Sweep),
        Experiment::Lemma => run_lemma(cfg, &entries(cfg)).map(RunOutput::Sweep),
        Experiment::MixedSymmetry => run_mixed_symmetry(cfg, &entries(cfg)).map(RunOutput::Sweep),
        Experiment::BetaCheck => run_beta_check(cfg.n_list[0], cfg.seed).map(RunOutput::Beta),
        Experiment::Lorentz => {
            let (rows, failures) = run_lorentz(cfg);
            Ok(RunOutput::Lorentz { rows, failures })
        }
    })
}

fn entries(cfg: &RunConfig) -> Vec<CorpusEntry> {
    cfg.functions.iter().filter_map(|f| corpus_entry(f)).collect()
}

fn require(entries: &[CorpusEntry], partials: &[Partial]) -> Result<()> {
    for e in entries {
        if let Some(p) = partials.iter().find(|&&p| !e.field.has_partial(p)) {
            return Err(CliError::Config(format!(
                "function '{}' has no analytic {} reference",
                e.name(),
                p
            )));
        }
    }
    Ok(())
}

fn class_of(entry: &CorpusEntry) -> String {
    entry.class_tags.iter().map(|t| t.as_str()).collect::<Vec<_>>().join("+")
}

/// Runs `cells × per_cell` tasks in parallel and regroups the results by
/// cell, in task-index order.
fn par_cells<T: Clone + Send>(
    cells: usize,
    per_cell: usize,
    task: impl Fn(usize, usize) -> CoreResult<T> + Sync + Send,
) -> Vec<(CoreResult<Vec<T>>, Duration)> {
    let timed: Vec<(CoreResult<T>, Duration)> = (0..cells * per_cell)
        .into_par_iter()
        .map(|i| {
            let start = Instant::now();
            let r = task(i / per_cell, i % per_cell);
            (r, start.elapsed())
        })
        .collect();
    timed
        .chunks(per_cell.max(1))
        .map(|chunk| {
            let spent = chunk.iter().map(|(_, d)| *d).sum();
            let values = chunk.iter().map(|(r, _)| r.clone()).collect();
            (values, spent)
        })
        .collect()
}

struct Cell<'a> {
    index: usize,
    entry: &'a CorpusEntry,
    n: usize,
}

fn cells<'a>(entries: &'a [CorpusEntry], n_list: &[usize]) -> Vec<Cell<'a>> {
    entries
        .iter()
        .enumerate()
        .flat_map(|(index, entry)| n_list.iter().map(move |&n| Cell { index, entry, n }))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn record(
    cfg: &RunConfig,
    experiment: &str,
    entry: &CorpusEntry,
    n: usize,
    which: Partial,
    estimate: Option<(f64, f64)>,
    mc_samples: usize,
    seed: u64,
    spent: Duration,
) -> ConvergenceRecord {
    ConvergenceRecord {
        experiment: experiment.to_string(),
        function: entry.name().to_string(),
        n,
        which: which.as_str().to_string(),
        error_mean: estimate.map(|e| e.0),
        error_stderr: estimate.map(|e| e.1),
        grid_m: cfg.grid_m,
        mc_samples,
        seed,
        wall_ms: if cfg.timing { spent.as_millis() as u64 } else { 0 },
        class: class_of(entry),
    }
}

fn sample_references(entries: &[CorpusEntry], partial: Partial, grid: &GridSpec) -> Vec<CoreResult<Vec<f64>>> {
    entries
        .iter()
        .map(|e| grid.sample(|a, b| e.field.eval_partial(partial, a, b).unwrap_or(f64::NAN)))
        .collect()
}

/// Expected L1 error of the randomized operator's derivative per
/// `(function, n)`, parallel over Monte-Carlo samples.
pub fn run_theorem1(cfg: &RunConfig, entries: &[CorpusEntry]) -> Result<SweepOutput> {
    let partial = cfg.which;
    require(entries, &[partial])?;
    let cache = BasisCache::new(cfg.max_n());
    let grid = GridSpec::new(cfg.grid_m)?;
    let shifts = SeededShifts::new(cfg.seed);
    let references = sample_references(entries, partial, &grid);
    let cells = cells(entries, &cfg.n_list);

    let results = par_cells(cells.len(), cfg.mc_samples, |c, s| {
        let cell = &cells[c];
        let reference = references[cell.index].as_ref().map_err(Clone::clone)?;
        sample_l1_error(&cache, &cell.entry.field, reference, partial, cell.n, &grid, shifts.shift(s as u64))
    });

    let mut out = SweepOutput::default();
    for (cell, (values, spent)) in cells.iter().zip(results) {
        let estimate = values.and_then(|v| McEstimate::from_samples(&v, cfg.seed));
        let (est, outcome) = match estimate {
            Ok(e) => (Some((e.mean, e.stderr)), Ok(())),
            Err(e) => (None, Err(e.to_string())),
        };
        let r = record(cfg, "theorem1", cell.entry, cell.n, partial, est, cfg.mc_samples, cfg.seed, spent);
        out.push(r, outcome);
    }
    Ok(out.finish())
}

#[derive(Debug, Clone, Copy)]
enum LemmaFunctional {
    Eqle1,
    Eqle2,
    Eqle3,
}

/// The three difference-quotient functionals per `(function, n)`, integrated
/// over the admissible region. Deterministic, so `stderr = 0`.
pub fn run_lemma(cfg: &RunConfig, entries: &[CorpusEntry]) -> Result<SweepOutput> {
    require(entries, &[Partial::Dx1, Partial::Dx2, Partial::Dx1Dx2])?;
    let grid = GridSpec::new(cfg.grid_m)?;
    let cells = cells(entries, &cfg.n_list);
    let kinds = [LemmaFunctional::Eqle1, LemmaFunctional::Eqle2, LemmaFunctional::Eqle3];
    let variant = cfg.eqle3_variant;
    let region = Region::Admissible;

    let results = par_cells(cells.len() * kinds.len(), 1, |i, _| {
        let cell = &cells[i / kinds.len()];
        let f = &cell.entry.field;
        match kinds[i % kinds.len()] {
            LemmaFunctional::Eqle1 => lemma_eqle1_error(
                f,
                |a, b| f.eval_partial(Partial::Dx1, a, b).unwrap_or(f64::NAN),
                cell.n,
                &grid,
                region,
            ),
            LemmaFunctional::Eqle2 => lemma_eqle2_error(
                &f.require_partial(Partial::Dx2)?,
                |a, b| f.eval_partial(Partial::Dx1Dx2, a, b).unwrap_or(f64::NAN),
                cell.n,
                &grid,
                region,
            ),
            LemmaFunctional::Eqle3 => lemma_eqle3_error(f, cell.n, &grid, variant, region),
        }
    });

    let eqle3_tag = format!("lemma-eqle3-{}", variant.as_str());
    let mut out = SweepOutput::default();
    for (i, (values, spent)) in results.into_iter().enumerate() {
        let cell = &cells[i / kinds.len()];
        let (tag, which) = match kinds[i % kinds.len()] {
            LemmaFunctional::Eqle1 => ("lemma-eqle1", Partial::Dx1),
            LemmaFunctional::Eqle2 => ("lemma-eqle2", Partial::Dx1Dx2),
            LemmaFunctional::Eqle3 => (eqle3_tag.as_str(), Partial::Dx1Dx2),
        };
        let (est, outcome) = match values {
            Ok(v) => (Some((v[0], 0.0)), Ok(())),
            Err(e) => (None, Err(e.to_string())),
        };
        out.push(record(cfg, tag, cell.entry, cell.n, which, est, 0, 0, spent), outcome);
    }

    if let Some(eps) = cfg.epsilon {
        let spec = MollifierSpec::with_epsilon(eps)?;
        let results = par_cells(entries.len(), 1, |i, _| {
            let f = &entries[i].field;
            let smooth = mollify(f, &spec);
            l1_norm_2d(|a, b| smooth.eval(a, b) - f.eval(a, b), &grid)
        });
        for (entry, (values, spent)) in entries.iter().zip(results) {
            let (est, outcome) = match values {
                Ok(v) => (Some((v[0], 0.0)), Ok(())),
                Err(e) => (None, Err(e.to_string())),
            };
            out.push(record(cfg, "lemma-mollifier", entry, 0, Partial::Value, est, 0, 0, spent), outcome);
        }
    }
    Ok(out.finish())
}

/// Compares the two differencing orders of the mixed derivative and reports
/// each order's distance to the analytic `f_x1x2`.
pub fn run_mixed_symmetry(cfg: &RunConfig, entries: &[CorpusEntry]) -> Result<SweepOutput> {
    require(entries, &[Partial::Dx1Dx2])?;
    let cache = BasisCache::new(cfg.max_n());
    let grid = GridSpec::new(cfg.grid_m)?;
    let shifts = SeededShifts::new(cfg.seed);
    let references = sample_references(entries, Partial::Dx1Dx2, &grid);
    let cells = cells(entries, &cfg.n_list);

    let results = par_cells(cells.len(), cfg.mc_samples, |c, s| {
        let cell = &cells[c];
        let reference = references[cell.index].as_ref().map_err(Clone::clone)?;
        mixed_order_sample(&cache, &cell.entry.field, reference, cell.n, &grid, shifts.shift(s as u64))
    });

    let mut out = SweepOutput::default();
    for (cell, (values, spent)) in cells.iter().zip(results) {
        let estimates = values.and_then(|v| {
            let gap: Vec<f64> = v.iter().map(|s| s.gap).collect();
            let x2_first: Vec<f64> = v.iter().map(|s| s.error_x2_then_x1).collect();
            let x1_first: Vec<f64> = v.iter().map(|s| s.error_x1_then_x2).collect();
            Ok([
                McEstimate::from_samples(&gap, cfg.seed)?,
                McEstimate::from_samples(&x1_first, cfg.seed)?,
                McEstimate::from_samples(&x2_first, cfg.seed)?,
            ])
        });
        let tags = ["mixed-symmetry-gap", "mixed-symmetry-x1-first", "mixed-symmetry-x2-first"];
        match estimates {
            Ok(est) => {
                for (tag, e) in tags.iter().zip(est) {
                    let r = record(cfg, tag, cell.entry, cell.n, Partial::Dx1Dx2, Some((e.mean, e.stderr)), cfg.mc_samples, cfg.seed, spent);
                    out.push(r, Ok(()));
                }
            }
            Err(e) => {
                for tag in tags {
                    let r = record(cfg, tag, cell.entry, cell.n, Partial::Dx1Dx2, None, cfg.mc_samples, cfg.seed, spent);
                    out.push(r, Err(e.to_string()));
                }
            }
        }
    }
    Ok(out.finish())
}

/// Max `|weight − 1|` over every `(n, k1, k2)` with `n <= min(n_max, 64)`,
/// plus seeded random triples with `64 < n <= n_max`.
pub fn run_beta_check(n_max: usize, seed: u64) -> Result<BetaReport> {
    if n_max == 0 {
        return Err(CliError::Config("beta-check needs n_max >= 1".into()));
    }
    let cache = BasisCache::new(n_max);
    let exhaustive_n_max = n_max.min(BETA_EXHAUSTIVE_N);
    let per_n: Vec<(usize, f64)> = (1..=exhaustive_n_max)
        .into_par_iter()
        .map(|n| {
            let mut worst = 0.0f64;
            for k1 in 0..n {
                for k2 in 0..n {
                    worst = worst.max((beta_weight_identity(&cache, n, k1, k2)? - 1.0).abs());
                }
            }
            Ok((n * n, worst))
        })
        .collect::<CoreResult<_>>()?;
    let exhaustive_cases = per_n.iter().map(|p| p.0).sum();
    let max_deviation_exhaustive = per_n.iter().map(|p| p.1).fold(0.0, f64::max);

    let mut sampled_cases = 0;
    let mut max_deviation_sampled = 0.0f64;
    if n_max > BETA_EXHAUSTIVE_N {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..BETA_SAMPLED_TRIPLES {
            let n = rng.random_range(BETA_EXHAUSTIVE_N + 1..=n_max);
            let k1 = rng.random_range(0..n);
            let k2 = rng.random_range(0..n);
            let dev = (beta_weight_identity(&cache, n, k1, k2)? - 1.0).abs();
            max_deviation_sampled = max_deviation_sampled.max(dev);
            sampled_cases += 1;
        }
    }
    Ok(BetaReport {
        n_max,
        exhaustive_n_max,
        exhaustive_cases,
        sampled_cases,
        max_deviation_exhaustive,
        max_deviation_sampled,
        max_deviation: max_deviation_exhaustive.max(max_deviation_sampled),
        seed,
    })
}

pub fn lorentz_function(name: &str) -> Option<fn(f64) -> f64> {
    match name {
        "identity" => Some(|x| x),
        "square" => Some(|x| x * x),
        "step" => Some(|x| if x >= 0.5 { 1.0 } else { 0.0 }),
        "one" => Some(|_| 1.0),
        _ => None,
    }
}

/// `|P_n(f, x) − f(x)|` at the fixed probe points.
pub fn run_lorentz(cfg: &RunConfig) -> (Vec<LorentzRow>, Vec<CellFailure>) {
    let cache = BasisCache::new(cfg.max_n());
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for name in &cfg.functions {
        let Some(f) = lorentz_function(name) else { continue };
        for &n in &cfg.n_list {
            for x in LORENTZ_PROBES {
                let (value, deviation) = match lorentz_pn(&cache, f, n, x) {
                    Ok(v) => (Some(v), Some((v - f(x)).abs())),
                    Err(e) => {
                        failures.push(CellFailure {
                            experiment: "lorentz".into(),
                            function: name.clone(),
                            n,
                            message: e.to_string(),
                        });
                        (None, None)
                    }
                };
                rows.push(LorentzRow { function: name.clone(), n, x, value, deviation });
            }
        }
    }
    (rows, failures)
}
