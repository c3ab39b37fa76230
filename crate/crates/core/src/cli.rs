//! Command-line surface: `fit`, `table1`, `sweep` and `variance`.
//!
//! Every command writes one CSV result file to `--out` and prints only that
//! path on stdout. Result files start with a `# seed=<s> version=<v>` line,
//! followed by a header row. Floating-point fields carry 17 significant
//! digits, so values read back are bit-identical.
//!
//! Exit codes: 0 on success, 2 for input errors, 3 for numeric or solver
//! failures.
//!
//! Dataset files are UTF-8 CSV with a header row, a first column `y` holding
//! 0/1 labels and the covariates in `x1..xd`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::asymptotics::{self, limit_constants, oversampling_factor, VarianceReport};
use crate::error::Error;
use crate::estimators::{EstimatorFamily, EstimatorKind};
use crate::model::{Coefficients, Covariates, Dataset, SolverSettings};
use crate::rng::stream;
use crate::simulation::{self, CovariateLaw, ExperimentConfig, ExperimentDesign};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Failure of a command, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("I/O error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(format!("CSV error: {e}"))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "rarelogit", version, about = "Rare-events logistic regression with under- and over-sampling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit one estimator to a dataset CSV.
    Fit(FitArgs),
    /// eMSE of the full-data MLE scaled by E(n1) and n, for the conditional Gaussian design.
    Table1(Table1Args),
    /// eMSE (x1e3) of the sampled estimators over grids of pi0 and lambda.
    Sweep(SweepArgs),
    /// Asymptotic covariance matrices and their limit constants.
    Variance(VarianceArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Convergence threshold on the gradient max-norm.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Maximum number of Newton iterations.
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
}

impl SolverArgs {
    fn settings(&self) -> SolverSettings {
        SolverSettings { tol: self.tol, max_iter: self.max_iter, ..SolverSettings::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    Full,
    UnderW,
    UnderBc,
    OverW,
    OverBc,
}

impl EstimatorArg {
    fn tag(self) -> &'static str {
        match self {
            EstimatorArg::Full => "full",
            EstimatorArg::UnderW => "under-w",
            EstimatorArg::UnderBc => "under-bc",
            EstimatorArg::OverW => "over-w",
            EstimatorArg::OverBc => "over-bc",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// Dataset CSV (header `y,x1,...,xd`).
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Full)]
    pub estimator: EstimatorArg,
    /// Control retention probability for the under-sampled estimators.
    #[arg(long)]
    pub pi0: Option<f64>,
    /// Mean number of extra copies per case for the over-sampled estimators.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Seed of the sampling design.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// True intercept; enables the variance report (with c = e^alpha_t/pi0, c_o = lambda e^alpha_t).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_t: Option<f64>,
    /// Limit constant c for the under-sampled variance; enables the variance report.
    #[arg(long)]
    pub c: Option<f64>,
    /// Limit constant c_o for the over-sampled bias-corrected variance; enables the variance report.
    #[arg(long)]
    pub c_o: Option<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
pub struct Table1Args {
    /// Full-data sample sizes.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1_000usize, 10_000, 100_000])]
    pub n: Vec<usize>,
    /// Event rates, paired with --n.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.02, 0.004, 0.0008])]
    pub rate: Vec<f64>,
    /// Monte Carlo replications per row.
    #[arg(long, default_value_t = 1000)]
    pub replications: usize,
    #[arg(long, default_value_t = 2018)]
    pub seed: u64,
    /// Case covariate mean.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub mu1: f64,
    /// Control covariate mean.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mu0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Under,
    Over,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Which sampling schemes to sweep.
    #[arg(long, value_enum, default_value_t = SchemeArg::Both)]
    pub scheme: SchemeArg,
    /// Control retention probabilities.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.005, 0.01, 0.05, 0.1, 0.2, 0.5, 0.8, 1.0])]
    pub pi0: Vec<f64>,
    /// Over-sampling rates.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.22, 0.49, 1.23, 3.48, 6.39, 11.18, 53.6])]
    pub lambda: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    /// True intercept.
    #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
    pub alpha: f64,
    /// True slopes; covariates are independent standard normals.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.0], allow_hyphen_values = true)]
    pub beta: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub replications: usize,
    #[arg(long, default_value_t = 2018)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VarianceKindArg {
    Full,
    UnderW,
    UnderBc,
    Ow,
    Obc,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct VarianceArgs {
    #[arg(long, value_enum, default_value_t = VarianceKindArg::All)]
    pub kind: VarianceKindArg,
    /// True slopes.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub beta: Vec<f64>,
    /// True intercept, used to derive c and c_o.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_t: Option<f64>,
    #[arg(long)]
    pub pi0: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Limit constant c (overrides alpha_t/pi0).
    #[arg(long)]
    pub c: Option<f64>,
    /// Limit constant c_o (overrides lambda e^alpha_t).
    #[arg(long)]
    pub c_o: Option<f64>,
    /// Covariate sample CSV (columns x1..xd; a leading y column is ignored).
    #[arg(long)]
    pub covariates: Option<PathBuf>,
    /// Means of the Gaussian covariate law (default 0).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub law_mean: Vec<f64>,
    /// Standard deviations of the Gaussian covariate law (default 1).
    #[arg(long, value_delimiter = ',')]
    pub law_sd: Vec<f64>,
    /// Draws from the covariate law.
    #[arg(long, default_value_t = 1_000_000)]
    pub m: usize,
    #[arg(long, default_value_t = 2018)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Runs a parsed command and returns the path of the result file.
pub fn run(cli: &Cli) -> CliResult<PathBuf> {
    match &cli.command {
        Command::Fit(args) => cmd_fit(args),
        Command::Table1(args) => cmd_table1(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Variance(args) => cmd_variance(args),
    }
}

/// Formats with 17 significant digits.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn read_dataset(path: &Path) -> CliResult<Dataset> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.len() < 2 || &headers[0] != "y" {
        return Err(CliError::Input(format!(
            "{}: expected header `y,x1,...,xd`, found `{}`",
            path.display(),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let d = headers.len() - 1;
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let label = match record[0].trim() {
            "0" => 0u8,
            "1" => 1u8,
            other => {
                return Err(CliError::Input(format!("{}: row {}: label {other:?} is not 0 or 1", path.display(), line + 1)))
            }
        };
        y.push(label);
        for field in record.iter().skip(1) {
            x.push(parse_num(field, path, line + 1)?);
        }
    }
    Ok(Dataset::new(Covariates::from_row_major(x, d)?, y)?)
}

fn parse_num(field: &str, path: &Path, line: usize) -> CliResult<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| CliError::Input(format!("{}: row {line}: {field:?} is not a number", path.display())))
}

pub fn write_dataset(path: &Path, data: &Dataset) -> CliResult<()> {
    let mut out = BufWriter::new(File::create(path)?);
    let header: Vec<String> = std::iter::once("y".to_string())
        .chain((1..=data.dim()).map(|j| format!("x{j}")))
        .collect();
    writeln!(out, "{}", header.join(","))?;
    for i in 0..data.n() {
        write!(out, "{}", data.label(i))?;
        for &v in data.row(i) {
            write!(out, ",{}", fmt_num(v))?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads covariate rows; a leading `y` column is dropped.
pub fn read_covariates(path: &Path) -> CliResult<Covariates> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    let headers = reader.headers()?.clone();
    let skip = usize::from(headers.get(0) == Some("y"));
    let d = headers.len() - skip;
    if d == 0 {
        return Err(CliError::Input(format!("{}: no covariate columns", path.display())));
    }
    let mut x = Vec::new();
    for (line, record) in reader.records().enumerate() {
        for field in record?.iter().skip(skip) {
            x.push(parse_num(field, path, line + 1)?);
        }
    }
    Ok(Covariates::from_row_major(x, d)?)
}

/// A result CSV: provenance line, header, rows.
struct ResultTable {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl ResultTable {
    fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn write(&self, path: &Path, seed: u64) -> CliResult<PathBuf> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "# seed={seed} version={VERSION}")?;
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(out, "{}", row.join(","))?;
        }
        out.flush()?;
        Ok(path.to_path_buf())
    }
}

fn push_matrix(table: &mut ResultTable, section: &str, report: &VarianceReport) {
    let p = report.v.nrows();
    for r in 0..p {
        for c in 0..p {
            table.push(vec![section.into(), format!("v_{r}_{c}"), fmt_num(report.v[(r, c)])]);
        }
    }
}

pub fn cmd_fit(args: &FitArgs) -> CliResult<PathBuf> {
    let data = read_dataset(&args.data)?;
    let rate = match args.estimator {
        EstimatorArg::Full => None,
        EstimatorArg::UnderW | EstimatorArg::UnderBc => args.pi0,
        EstimatorArg::OverW | EstimatorArg::OverBc => args.lambda,
    };
    let kind = EstimatorKind::from_tag(args.estimator.tag(), rate)?;
    let settings = args.solver.settings();
    let design = kind.realize_design(&data, &mut stream(args.seed, &[]))?;
    let fit = kind.fit(&data, design.as_ref(), &settings)?;

    let mut table = ResultTable::new(vec!["section", "name", "value"]);
    table.push(vec!["coef".into(), "alpha".into(), fmt_num(fit.theta.alpha)]);
    for (j, b) in fit.theta.beta.iter().enumerate() {
        table.push(vec!["coef".into(), format!("beta{}", j + 1), fmt_num(*b)]);
    }
    table.push(vec!["diag".into(), "converged".into(), u8::from(fit.converged).to_string()]);
    table.push(vec!["diag".into(), "iterations".into(), fit.iterations.to_string()]);
    table.push(vec!["diag".into(), "grad_max_norm".into(), fmt_num(fit.grad_max_norm)]);
    table.push(vec!["diag".into(), "n".into(), data.n().to_string()]);
    table.push(vec!["diag".into(), "n1".into(), data.n1().to_string()]);
    let effective = design.as_ref().map_or(data.n() as u64, |d| d.effective_sample_size());
    table.push(vec!["diag".into(), "effective_n".into(), effective.to_string()]);

    if args.alpha_t.is_some() || args.c.is_some() || args.c_o.is_some() {
        let xs = data.covariates();
        let beta = &fit.theta.beta;
        let constants = match args.alpha_t {
            Some(a) => Some(limit_constants(a, args.pi0.filter(|_| kind.rate() == args.pi0), args.lambda)?),
            None => None,
        };
        let c = args.c.or(constants.and_then(|k| k.c));
        let c_o = args.c_o.or(constants.and_then(|k| k.c_o));
        let missing = |name: &str| CliError::Input(format!("variance report for {} needs {name}", kind.tag()));
        let report = match kind {
            EstimatorKind::Full => asymptotics::v_full(xs, beta)?,
            EstimatorKind::UnderWeighted { .. } => {
                asymptotics::v_under_weighted(xs, beta, c.ok_or_else(|| missing("--c or --alpha-t"))?)?
            }
            EstimatorKind::UnderBiasCorrected { .. } => {
                asymptotics::v_under_bc(xs, beta, c.ok_or_else(|| missing("--c or --alpha-t"))?)?
            }
            EstimatorKind::OverWeighted { lambda } => asymptotics::v_over_weighted(xs, beta, lambda)?,
            EstimatorKind::OverBiasCorrected { lambda } => {
                asymptotics::v_over_bc(xs, beta, lambda, c_o.ok_or_else(|| missing("--c-o or --alpha-t"))?)?
            }
        };
        if let Some(c) = report.c {
            table.push(vec!["variance".into(), "c".into(), fmt_num(c)]);
        }
        if let Some(c_o) = report.c_o {
            table.push(vec!["variance".into(), "c_o".into(), fmt_num(c_o)]);
        }
        if let Some(lambda) = report.lambda {
            table.push(vec!["variance".into(), "factor".into(), fmt_num(oversampling_factor(lambda))]);
        }
        table.push(vec!["variance".into(), "condition".into(), fmt_num(report.condition)]);
        push_matrix(&mut table, "variance", &report);
    }
    table.write(&args.out, args.seed)
}

pub fn cmd_table1(args: &Table1Args) -> CliResult<PathBuf> {
    if args.n.len() != args.rate.len() {
        return Err(CliError::Input(format!(
            "--n has {} entries but --rate has {}",
            args.n.len(),
            args.rate.len()
        )));
    }
    let mut table = ResultTable::new(vec![
        "n",
        "expected_n1",
        "mean_n1",
        "alpha_t",
        "beta_t",
        "n1_emse_alpha",
        "n1_emse_beta",
        "n_emse_alpha",
        "n_emse_beta",
        "failed",
        "replications",
    ]);
    for (&n, &rate) in args.n.iter().zip(&args.rate) {
        let config = ExperimentConfig {
            design: ExperimentDesign::ConditionalGaussian { mu1: args.mu1, mu0: args.mu0, sigma: args.sigma, target_rate: rate },
            n,
            replications: args.replications,
            estimators: vec![EstimatorKind::Full],
            base_seed: args.seed,
            solver: args.solver.settings(),
            threads: args.threads,
        };
        let report = simulation::run_experiment(&config)?;
        let summary = &report.summaries[0];
        let expected_n1 = n as f64 * rate;
        let beta_emse: f64 = summary.emse.beta.iter().sum();
        eprintln!(
            "table1: n={n} rate={rate} E(n1)*eMSE(alpha)={:.3} E(n1)*eMSE(beta)={:.3} failed={}",
            expected_n1 * summary.emse.alpha,
            expected_n1 * beta_emse,
            summary.failed
        );
        table.push(vec![
            n.to_string(),
            fmt_num(expected_n1),
            fmt_num(summary.mean_n1),
            fmt_num(report.theta_t.alpha),
            fmt_num(report.theta_t.beta[0]),
            fmt_num(expected_n1 * summary.emse.alpha),
            fmt_num(expected_n1 * beta_emse),
            fmt_num(n as f64 * summary.emse.alpha),
            fmt_num(n as f64 * beta_emse),
            summary.failed.to_string(),
            summary.replications.to_string(),
        ]);
    }
    table.write(&args.out, args.seed)
}

/// The estimator list a sweep runs: the full-data baseline first.
pub fn sweep_estimators(args: &SweepArgs) -> Vec<EstimatorKind> {
    let mut kinds = vec![EstimatorKind::Full];
    if matches!(args.scheme, SchemeArg::Under | SchemeArg::Both) {
        for &pi0 in &args.pi0 {
            kinds.push(EstimatorKind::UnderWeighted { pi0 });
            kinds.push(EstimatorKind::UnderBiasCorrected { pi0 });
        }
    }
    if matches!(args.scheme, SchemeArg::Over | SchemeArg::Both) {
        for &lambda in &args.lambda {
            kinds.push(EstimatorKind::OverWeighted { lambda });
            kinds.push(EstimatorKind::OverBiasCorrected { lambda });
        }
    }
    kinds
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<PathBuf> {
    let d = args.beta.len();
    let config = ExperimentConfig {
        design: ExperimentDesign::MarginalLogistic {
            theta_t: Coefficients::new(args.alpha, args.beta.clone()),
            law: CovariateLaw::standard_normal(d),
        },
        n: args.n,
        replications: args.replications,
        estimators: sweep_estimators(args),
        base_seed: args.seed,
        solver: args.solver.settings(),
        threads: args.threads,
    };
    let report = simulation::run_experiment(&config)?;
    let mut table = ResultTable::new(vec![
        "scheme",
        "estimator",
        "rate",
        "n",
        "mean_n1",
        "emse_x1e3",
        "emse_alpha_x1e3",
        "emse_beta_x1e3",
        "failed",
        "replications",
    ]);
    for s in &report.summaries {
        let scheme = match s.kind.family() {
            EstimatorFamily::Full => "full",
            EstimatorFamily::UnderWeighted | EstimatorFamily::UnderBiasCorrected => "under",
            EstimatorFamily::OverWeighted | EstimatorFamily::OverBiasCorrected => "over",
        };
        table.push(vec![
            scheme.into(),
            s.kind.tag().into(),
            s.kind.rate().map(fmt_num).unwrap_or_default(),
            args.n.to_string(),
            fmt_num(s.mean_n1),
            fmt_num(1e3 * s.emse.total),
            fmt_num(1e3 * s.emse.alpha),
            fmt_num(1e3 * s.emse.beta.iter().sum::<f64>()),
            s.failed.to_string(),
            s.replications.to_string(),
        ]);
    }
    table.write(&args.out, args.seed)
}

pub fn cmd_variance(args: &VarianceArgs) -> CliResult<PathBuf> {
    let d = args.beta.len();
    let xs = match &args.covariates {
        Some(path) => read_covariates(path)?,
        None => {
            let means = if args.law_mean.is_empty() { vec![0.0; d] } else { args.law_mean.clone() };
            let sds = if args.law_sd.is_empty() { vec![1.0; d] } else { args.law_sd.clone() };
            CovariateLaw::gaussian(means, sds)?.sample(args.m, &mut stream(args.seed, &[]))
        }
    };
    let constants = match args.alpha_t {
        Some(a) => Some(limit_constants(a, args.pi0, args.lambda)?),
        None => None,
    };
    let c = args.c.or(constants.and_then(|k| k.c));
    let c_o = args.c_o.or(constants.and_then(|k| k.c_o));
    let lambda = args.lambda;

    let all = args.kind == VarianceKindArg::All;
    let wants = |k: VarianceKindArg| all || args.kind == k;
    let missing = |kind: &str, name: &str| CliError::Input(format!("--kind {kind} needs {name}"));

    let mut reports = Vec::new();
    if wants(VarianceKindArg::Full) {
        reports.push(asymptotics::v_full(&xs, &args.beta)?);
    }
    if wants(VarianceKindArg::UnderW) {
        match c {
            Some(c) => reports.push(asymptotics::v_under_weighted(&xs, &args.beta, c)?),
            None if !all => return Err(missing("under-w", "--c or --alpha-t with --pi0")),
            None => {}
        }
    }
    if wants(VarianceKindArg::UnderBc) {
        match c {
            Some(c) => reports.push(asymptotics::v_under_bc(&xs, &args.beta, c)?),
            None if !all => return Err(missing("under-bc", "--c or --alpha-t with --pi0")),
            None => {}
        }
    }
    if wants(VarianceKindArg::Ow) {
        match lambda {
            Some(l) => reports.push(asymptotics::v_over_weighted(&xs, &args.beta, l)?),
            None if !all => return Err(missing("ow", "--lambda")),
            None => {}
        }
    }
    if wants(VarianceKindArg::Obc) {
        match (lambda, c_o) {
            (Some(l), Some(co)) => reports.push(asymptotics::v_over_bc(&xs, &args.beta, l, co)?),
            _ if !all => return Err(missing("obc", "--lambda and --c-o (or --alpha-t)")),
            _ => {}
        }
    }

    let mut table = ResultTable::new(vec!["kind", "name", "value"]);
    for report in &reports {
        let tag = report.family.tag();
        table.push(vec![tag.into(), "mean_exp".into(), fmt_num(report.mean_exp)]);
        if let Some(c) = report.c {
            table.push(vec![tag.into(), "c".into(), fmt_num(c)]);
        }
        if let Some(c_o) = report.c_o {
            table.push(vec![tag.into(), "c_o".into(), fmt_num(c_o)]);
        }
        if let Some(l) = report.lambda {
            table.push(vec![tag.into(), "lambda".into(), fmt_num(l)]);
            table.push(vec![tag.into(), "factor".into(), fmt_num(oversampling_factor(l))]);
        }
        table.push(vec![tag.into(), "condition".into(), fmt_num(report.condition)]);
        push_matrix(&mut table, tag, report);
    }
    table.write(&args.out, args.seed)
}
