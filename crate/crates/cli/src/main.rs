//! `dpsem` — command-line front end for the analysis library.
//!
//! Subcommands: `analyze` (ε_max and tight δ(ε) curve), `semantic`
//! (posterior-loss report against a prior), `counterexample` (Gaussian-sum
//! belief attack trace), `verify` (seeded law suites), and `gen` (mechanism
//! file generation).
//!
//! Exit codes: 0 success, 1 verification failure (`verify` with a failing
//! law), 2 invalid input (bad flags, malformed files, parameter errors).

use std::fs::File;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dpsem::bayes::{
    counterexample_a2, reality_oblivious_report, semantic_report, A2Config, A2Report,
    SemanticReport,
};
use dpsem::dp;
use dpsem::io;
use dpsem::mechanism::{
    gaussian_sigma_for, make_local_sensitivity_laplace, make_noisy_sum, make_randomized_response,
    DatabaseSpace, LogBase, Mechanism, NoiseSpec, QueryKind, QueryTable, ENUMERATION_CAP,
};
use dpsem::verify;
use dpsem::{Error, Result};

/// Mechanisms whose dense table has at most this many cells are written as
/// explicit matrices by `gen`; larger ones keep their generator descriptor.
const DENSE_CELL_CAP: u128 = 4096;

#[derive(Parser)]
#[command(
    name = "dpsem",
    version,
    about = "Exact differential-privacy and Bayesian semantic-privacy analysis \
             of finite randomized mechanisms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Differential-privacy analysis: ε_max and the tight δ(ε) curve over
    /// all neighbor pairs.
    Analyze(AnalyzeArgs),
    /// Semantic-privacy report: per-transcript posterior losses of a prior.
    Semantic(SemanticArgs),
    /// Gaussian-sum belief-attack trace: neighbor pairs stay private while
    /// the posterior flips.
    Counterexample(CounterexampleArgs),
    /// Seeded verifier suites; one pass/fail line per law.
    Verify(VerifyArgs),
    /// Generate a mechanism file from a built-in family.
    Gen(GenArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Mechanism JSON file.
    #[arg(long)]
    mechanism: PathBuf,
    /// Comma-separated ε values for the tight δ(ε) curve.
    #[arg(long, value_delimiter = ',', required = true)]
    epsilons: Vec<f64>,
    /// Write the δ(ε) curve as CSV (epsilon,delta,worst_x,worst_y).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the full report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SemanticArgs {
    /// Mechanism JSON file.
    #[arg(long)]
    mechanism: PathBuf,
    /// Prior JSON file (list of {database, weight} entries).
    #[arg(long)]
    prior: PathBuf,
    /// Weight failure mass by this database's transcript distribution
    /// instead of the prior mixture (comma-separated symbols).
    #[arg(long)]
    real_db: Option<String>,
    /// Loss threshold at which mass_exceeding is printed.
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Write the per-(transcript, game) SD trace as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the full report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct CounterexampleArgs {
    /// Database length (≥ 2).
    #[arg(long)]
    n: usize,
    /// Certification ε.
    #[arg(long)]
    epsilon: f64,
    /// Certification δ.
    #[arg(long)]
    delta: f64,
    /// Base of the log in σ² = log(1/δ)/ε².
    #[arg(long, value_enum, default_value_t = LogBaseArg::Two)]
    log_base: LogBaseArg,
    /// Grid step (default σ/8).
    #[arg(long)]
    grid_step: Option<f64>,
    /// Untruncated tail mass folded into the end buckets (default 1e-12).
    #[arg(long)]
    tail_mass: Option<f64>,
    /// SD level whose transcript mass the summary reports.
    #[arg(long, default_value_t = 0.45)]
    sd_threshold: f64,
    /// Write the trace as CSV (transcript,ratio,posterior_x0,sd_game1).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the full report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LogBaseArg {
    /// σ² = log₂(1/δ)/ε².
    #[value(name = "2")]
    Two,
    /// σ² = ln(1/δ)/ε².
    #[value(name = "e")]
    E,
}

impl From<LogBaseArg> for LogBase {
    fn from(b: LogBaseArg) -> LogBase {
        match b {
            LogBaseArg::Two => LogBase::Two,
            LogBaseArg::E => LogBase::Natural,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Which suite to run.
    #[arg(long, value_enum)]
    suite: Suite,
    /// Random trials for the distribution-pair laws (indexed-family laws
    /// get trials/5).
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// RNG seed; a fixed seed makes the output byte-identical across runs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Claims,
    Theorems,
    All,
}

#[derive(Args)]
struct GenArgs {
    /// Mechanism family.
    #[arg(long = "type", value_enum)]
    kind: GenKind,
    /// Database length n.
    #[arg(long)]
    n: usize,
    /// Comma-separated domain symbols.
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    domain: Vec<String>,
    /// Default symbol used by coordinate suppression (default: first
    /// domain symbol).
    #[arg(long)]
    default_symbol: Option<String>,
    /// Per-coordinate flip probability in (0, 0.5) (randomized_response).
    #[arg(long)]
    flip_prob: Option<f64>,
    /// Laplace scale λ (laplace_sum).
    #[arg(long)]
    scale: Option<f64>,
    /// Gaussian σ (gaussian_sum); omit to derive from --epsilon/--delta
    /// via σ² = ln(1/δ)/ε².
    #[arg(long)]
    sigma: Option<f64>,
    /// ε: derives σ for gaussian_sum, sets the noise scale s/ε for
    /// ls_laplace.
    #[arg(long)]
    epsilon: Option<f64>,
    /// δ for the gaussian_sum σ derivation.
    #[arg(long)]
    delta: Option<f64>,
    /// Built-in query for ls_laplace: sum or median.
    #[arg(long)]
    query: Option<String>,
    /// Local-sensitivity bound s (ls_laplace).
    #[arg(long)]
    s: Option<f64>,
    /// Grid step override for noise mechanisms (default scale/8).
    #[arg(long)]
    grid_step: Option<f64>,
    /// Tail mass override for noise mechanisms (default 1e-12).
    #[arg(long)]
    tail_mass: Option<f64>,
    /// Output mechanism JSON path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    #[value(name = "randomized_response")]
    RandomizedResponse,
    #[value(name = "laplace_sum")]
    LaplaceSum,
    #[value(name = "gaussian_sum")]
    GaussianSum,
    #[value(name = "ls_laplace")]
    LsLaplace,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Analyze(args) => run_analyze(args).map(|()| ExitCode::SUCCESS),
        Command::Semantic(args) => run_semantic(args).map(|()| ExitCode::SUCCESS),
        Command::Counterexample(args) => run_counterexample(args).map(|()| ExitCode::SUCCESS),
        Command::Verify(args) => run_verify(args),
        Command::Gen(args) => run_gen(args).map(|()| ExitCode::SUCCESS),
    }
}

fn write_json<T: serde::Serialize>(path: &PathBuf, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(std::fs::write(path, text)?)
}

fn run_analyze(args: &AnalyzeArgs) -> Result<()> {
    let m = io::load_mechanism(&args.mechanism)?;
    let report = dp::tight_delta_curve(&m, &args.epsilons)?;
    println!("epsilon_max = {}", report.epsilon_max);
    for point in &report.delta_at {
        println!(
            "tight delta at epsilon {} = {:e}  (worst pair {} | {})",
            point.epsilon, point.delta, point.worst_x, point.worst_y
        );
    }
    println!(
        "pointwise check at (epsilon {}, delta {:e}): {}",
        report.pointwise_params.epsilon,
        report.pointwise_params.delta,
        if report.pointwise.passes(report.pointwise_params.delta) {
            "pass"
        } else {
            "fail"
        }
    );
    if let Some(path) = &args.csv {
        io::write_dp_csv(File::create(path)?, &report)?;
    }
    if let Some(path) = &args.json {
        write_json(path, &report)?;
    }
    Ok(())
}

fn print_semantic_summary(report: &SemanticReport, epsilon: f64) {
    match &report.weighting {
        dpsem::bayes::Weighting::Mixture => println!("weighting = mixture"),
        dpsem::bayes::Weighting::RealDb(db) => println!("weighting = real_db {db}"),
    }
    println!("epsilon_star = {}", report.epsilon_star);
    println!(
        "mass_exceeding({epsilon}) = {:e}",
        report.mass_exceeding(epsilon)
    );
    if report.skipped_mass > 0.0 {
        println!("skipped_mass = {:e}", report.skipped_mass);
    }
}

fn run_semantic(args: &SemanticArgs) -> Result<()> {
    let m = io::load_mechanism(&args.mechanism)?;
    let prior = io::load_prior(m.space(), &args.prior)?;
    let report = match &args.real_db {
        Some(s) => {
            let db = m.space().parse_database(s)?;
            reality_oblivious_report(&m, &prior, &db)?
        }
        None => semantic_report(&m, &prior)?,
    };
    print_semantic_summary(&report, args.epsilon);
    if let Some(path) = &args.csv {
        io::write_semantic_csv(File::create(path)?, &report)?;
    }
    if let Some(path) = &args.json {
        write_json(path, &report)?;
    }
    Ok(())
}

fn print_a2_summary(report: &A2Report) {
    println!(
        "sigma = {} (sigma^2 = {}), grid cells = {}",
        report.sigma, report.sigma_sq, report.grid_cells
    );
    for check in &report.pair_checks {
        println!(
            "pair ({} | {}): tight delta {:e} vs budget {:e} -> {}",
            check.x,
            check.y,
            check.tight_delta,
            check.budget,
            if check.pass { "pass" } else { "fail" }
        );
    }
    println!(
        "hypothesis (all touched pairs private): {}",
        if report.hypothesis_pass {
            "pass"
        } else {
            "fail"
        }
    );
    println!(
        "suppressed-game posterior exactly uniform: {}",
        report.b1_uniform_all
    );
    println!(
        "mass(SD >= {} | real database) = {}",
        report.sd_threshold, report.mass_sd_at_least
    );
}

fn run_counterexample(args: &CounterexampleArgs) -> Result<()> {
    let mut cfg = A2Config::new(args.n, args.epsilon, args.delta);
    cfg.log_base = args.log_base.into();
    cfg.grid_step = args.grid_step;
    cfg.tail_mass = args.tail_mass;
    cfg.sd_threshold = args.sd_threshold;
    let report = counterexample_a2(&cfg)?;
    print_a2_summary(&report);
    if let Some(path) = &args.csv {
        io::write_a2_csv(File::create(path)?, &report)?;
    }
    if let Some(path) = &args.json {
        write_json(path, &report)?;
    }
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let reports = match args.suite {
        Suite::Claims => verify::claims_suite(args.trials, args.seed)?,
        Suite::Theorems => verify::theorems_suite(args.seed)?,
        Suite::All => verify::all_suites(args.trials, args.seed)?,
    };
    let mut stdout = std::io::stdout().lock();
    let mut failures = 0usize;
    for r in &reports {
        writeln!(
            stdout,
            "{} {} margin={:.3e} — {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.law,
            r.margin,
            r.detail
        )?;
        if !r.pass {
            failures += 1;
        }
    }
    writeln!(
        stdout,
        "{}/{} laws passed",
        reports.len() - failures,
        reports.len()
    )?;
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn require<T: Copy>(value: Option<T>, flag: &str, kind: &str) -> Result<T> {
    value.ok_or_else(|| Error::input(format!("{kind} requires {flag}")))
}

fn build_noise(spec: NoiseSpec, args: &GenArgs) -> Result<NoiseSpec> {
    let mut spec = spec;
    if let Some(step) = args.grid_step {
        spec = spec.with_grid_step(step)?;
    }
    if let Some(tm) = args.tail_mass {
        spec = spec.with_tail_mass(tm)?;
    }
    Ok(spec)
}

fn run_gen(args: &GenArgs) -> Result<()> {
    let default_symbol = match &args.default_symbol {
        Some(s) => s.clone(),
        None => args
            .domain
            .first()
            .cloned()
            .ok_or_else(|| Error::input("domain must be non-empty"))?,
    };
    let space = DatabaseSpace::new(args.domain.clone(), args.n, &default_symbol)?;
    let m = match args.kind {
        GenKind::RandomizedResponse => {
            let p = require(args.flip_prob, "--flip-prob", "randomized_response")?;
            make_randomized_response(&space, p)?
        }
        GenKind::LaplaceSum => {
            let scale = require(args.scale, "--scale", "laplace_sum")?;
            make_noisy_sum(&space, build_noise(NoiseSpec::laplace(scale)?, args)?)?
        }
        GenKind::GaussianSum => {
            let sigma = match args.sigma {
                Some(s) => s,
                None => gaussian_sigma_for(
                    require(args.epsilon, "--epsilon (or --sigma)", "gaussian_sum")?,
                    require(args.delta, "--delta (or --sigma)", "gaussian_sum")?,
                    LogBase::Natural,
                )?,
            };
            make_noisy_sum(&space, build_noise(NoiseSpec::gaussian(sigma)?, args)?)?
        }
        GenKind::LsLaplace => {
            let query = match require(args.query.as_deref(), "--query", "ls_laplace")? {
                "sum" => QueryKind::Sum,
                "median" => QueryKind::Median,
                other => {
                    return Err(Error::input(format!(
                        "unknown query '{other}' (expected sum or median)"
                    )))
                }
            };
            make_local_sensitivity_laplace(
                QueryTable::Builtin(query),
                &space,
                require(args.s, "--s", "ls_laplace")?,
                require(args.epsilon, "--epsilon", "ls_laplace")?,
                args.grid_step,
                args.tail_mass,
            )?
        }
    };
    // small mechanisms are written as explicit matrices; large ones keep the
    // generator descriptor and are never densified
    let cells = m
        .space()
        .count()
        .map(|c| c.saturating_mul(m.transcripts().len() as u128));
    let to_save = match cells {
        Some(c) if c <= DENSE_CELL_CAP => m.densify(ENUMERATION_CAP)?,
        _ => m,
    };
    io::save_mechanism(&to_save, &args.out)?;
    print_gen_summary(&to_save);
    Ok(())
}

fn print_gen_summary(m: &Mechanism) {
    let kind = if m.is_dense() {
        "dense matrix"
    } else {
        "generator descriptor"
    };
    let dbs = m
        .space()
        .count()
        .map_or_else(|| "non-enumerable".to_string(), |c| c.to_string());
    println!(
        "wrote {kind}: {dbs} databases x {} transcripts",
        m.transcripts().len()
    );
}
