use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bernstein_cli::{run, CliError, Experiment, Format, RunConfig, RunOutput};
use bernstein_core::calculus::Eqle3Variant;
use bernstein_core::Partial;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bernstein", version, about = "Convergence experiments for Bernstein-Stancu operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expected L1 error of the randomized operator's derivative
    Theorem1(Common),
    /// Difference-quotient error functionals (no Monte-Carlo)
    Lemma(Common),
    /// Max deviation of the Beta weight identity from 1
    BetaCheck(Common),
    /// Mixed derivative under both differencing orders
    MixedSymmetry(Common),
    /// Pointwise error of the Lorentz integral polynomial
    Lorentz(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Dx1,
    Dx1dx2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Verbatim,
    Corrected,
}

#[derive(Args)]
struct Common {
    /// Comma-separated function names
    #[arg(long, value_delimiter = ',')]
    function: Vec<String>,
    #[arg(long, value_enum, default_value = "dx1dx2")]
    which: Which,
    /// Comma-separated degrees (beta-check: the single n_max)
    #[arg(long = "n", value_delimiter = ',')]
    n: Vec<usize>,
    /// Quadrature grid size m (m x m midpoint nodes)
    #[arg(long, default_value_t = 128)]
    grid: usize,
    /// Monte-Carlo samples per cell
    #[arg(long, default_value_t = 32)]
    mc: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Mollifier width; adds mollifier rows to `lemma`
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, value_enum, default_value = "verbatim")]
    eqle3_variant: Variant,
    /// Output file, truncated on each run (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Fill wall_ms with per-cell compute time
    #[arg(long)]
    timing: bool,
}

fn config(experiment: Experiment, args: Common) -> RunConfig {
    let mut cfg = RunConfig::new(experiment);
    if !args.function.is_empty() {
        cfg.functions = args.function;
    }
    if !args.n.is_empty() {
        cfg.n_list = args.n;
    }
    cfg.which = match args.which {
        Which::Dx1 => Partial::Dx1,
        Which::Dx1dx2 => Partial::Dx1Dx2,
    };
    cfg.eqle3_variant = match args.eqle3_variant {
        Variant::Verbatim => Eqle3Variant::Verbatim,
        Variant::Corrected => Eqle3Variant::Corrected,
    };
    cfg.grid_m = args.grid;
    cfg.mc_samples = args.mc;
    cfg.seed = args.seed;
    cfg.epsilon = args.epsilon;
    cfg.out = args.out;
    cfg.format = args.format;
    cfg.threads = args.threads;
    cfg.timing = args.timing;
    cfg
}

fn write(cfg: &RunConfig, output: &RunOutput) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => output.write(cfg.format, BufWriter::new(File::create(path)?)),
        None => output.write(cfg.format, io::stdout().lock()),
    }
}

fn report(output: &RunOutput) {
    if let RunOutput::Sweep(sweep) = output {
        let mut beyond: Vec<&str> = sweep
            .records
            .iter()
            .filter(|r| r.class.contains("beyond-hypothesis"))
            .map(|r| r.function.as_str())
            .collect();
        beyond.dedup();
        for f in beyond {
            eprintln!("note: {f} is beyond the convergence hypotheses; its rows are exploratory");
        }
    }
    for failure in output.failures() {
        eprintln!(
            "error: {} cell ({}, n={}) failed: {}",
            failure.experiment, failure.function, failure.n, failure.message
        );
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let cfg = match cli.command {
        Command::Theorem1(a) => config(Experiment::Theorem1, a),
        Command::Lemma(a) => config(Experiment::Lemma, a),
        Command::BetaCheck(a) => config(Experiment::BetaCheck, a),
        Command::MixedSymmetry(a) => config(Experiment::MixedSymmetry, a),
        Command::Lorentz(a) => config(Experiment::Lorentz, a),
    };
    let output = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Err(e) = write(&cfg, &output) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let _ = io::stderr().flush();
    report(&output);
    if output.failures().is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
