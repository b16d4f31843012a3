//! The `kernel-forge` command line.
//!
//! Exit codes: 0 on success, 1 when a numerical step fails (a matrix that
//! is not positive definite, a singular system, an unconverged iteration)
//! or a check reports `pass: false`, 2 on usage and input errors.
//!
//! Commands with tabular output print CSV to stdout by default. With
//! `--out`, the table goes to that file and a JSON report goes to stdout.
//! With `--format json` the report, including the data, is the only output.
//! Reports have the shape
//! `{"schema": "kernel-forge/1", "command", "config", "seed", "metrics"}`.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::factorize::{
    alt_cholesky_eigs, brownian_cholesky_closed_form, cholesky, inverse_gram, jacobi_eigs,
    ALT_CHOLESKY_MAX_ITER, ALT_CHOLESKY_TOL,
};
use crate::gpsim::{
    covariance_error, duality_check, frame_synthesize_values, ito_synthesize, mc_tolerance,
    quadratic_variation, sample_gaussian_vector, FactorizationPair, FeatureMap, PathEnsemble,
};
use crate::io;
use crate::kernels::{gram, GramMatrix, KernelSpec, Point};
use crate::measures::{self, MeasureModel};
use crate::rkhs::{self, DeltaPolicy, SampleSet};
use crate::sampling::{self, CountableSet, SlopeRule};

const SCHEMA: &str = "kernel-forge/1";
const THREADS_ENV: &str = "KERNEL_FORGE_THREADS";

#[derive(Parser)]
#[command(
    name = "kernel-forge",
    version,
    about = "Kernel factorization, RKHS linear algebra, Cantor measures and Gaussian-process synthesis"
)]
struct Cli {
    /// Worker threads for path-parallel work. Results do not depend on it.
    /// Falls back to KERNEL_FORGE_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(untagged)]
enum Command {
    /// Gram matrix of a kernel on a point file.
    Gram(GramArgs),
    /// Cholesky factor of a Gram matrix.
    Chol(CholArgs),
    /// Inverse of a Gram matrix.
    Inv(InvArgs),
    /// Eigenvalues of a Gram matrix.
    Eig(EigArgs),
    /// Project sampled values onto the span of kernel sections.
    Project(ProjectArgs),
    /// Test whether a point evaluation is in the RKHS along a chain.
    DeltaTest(DeltaArgs),
    /// Graph induced by the inverse Gram matrix.
    Graph(GraphArgs),
    /// Minimal-norm Brownian interpolant through (x, y) data.
    Interpolate(InterpolateArgs),
    /// Quarter Cantor measure and its spectrum.
    #[command(subcommand)]
    Cantor(CantorCommand),
    /// Sample paths of one of the built-in Gaussian processes.
    Simulate(SimulateArgs),
    /// Empirical covariance of synthesized paths against the kernel.
    Covcheck(CovcheckArgs),
    /// Quadratic variation of the Wiener process over refinements.
    Qvar(QvarArgs),
    /// Kernel versus feature-map factorization, by quadrature and Monte Carlo.
    Duality(DualityArgs),
    /// Frames of kernel sections.
    #[command(subcommand)]
    Frame(FrameCommand),
    /// Witness functions.
    #[command(subcommand)]
    Witness(WitnessCommand),
}

#[derive(Subcommand, Serialize)]
#[serde(untagged)]
enum CantorCommand {
    /// Staircase CDF on a uniform grid.
    Cdf(CdfArgs),
    /// Cells of the level-d partition with their masses.
    Cells(CellsArgs),
    /// Elements of the spectrum below a limit.
    Spectrum(SpectrumArgs),
    /// Gram matrix of exponentials in L²(μ₄).
    FourierGram(FourierGramArgs),
    /// Truncated generating function, as product and as sum.
    GenFn(GenFnArgs),
    /// Fourier transform of μ₄ by product formula and by quadrature.
    Fourier(FourierArgs),
}

#[derive(Subcommand, Serialize)]
#[serde(untagged)]
enum FrameCommand {
    /// Parseval check for kernel sections on a countable set.
    Check(FrameCheckArgs),
    /// Frame bounds of the sections at a finite point set.
    Bounds(FrameBoundsArgs),
    /// Reconstruct a function from its samples.
    Reconstruct(ReconstructArgs),
}

#[derive(Subcommand, Serialize)]
#[serde(untagged)]
enum WitnessCommand {
    /// Nonzero Brownian-RKHS function vanishing on every knot.
    Sawtooth(SawtoothArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum KernelName {
    BrownianMin,
    BrownianLine,
    Szego,
    CantorProduct,
    Shannon,
    DruryArveson,
    Overlap,
    #[value(name = "green-1d")]
    #[serde(rename = "green-1d")]
    Green1d,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum MeasureName {
    Lebesgue,
    Cantor4,
}

impl MeasureName {
    fn model(self, depth: u32) -> MeasureModel {
        match self {
            MeasureName::Lebesgue => MeasureModel::lebesgue(depth),
            MeasureName::Cantor4 => MeasureModel::cantor4(depth),
        }
    }
}

#[derive(Args, Serialize)]
struct KernelArgs {
    /// Kernel family.
    #[arg(long, value_enum)]
    kernel: Option<KernelName>,
    /// Number of factors of the cantor-product kernel.
    #[arg(long, default_value_t = 8)]
    factors: u32,
    /// Dimension of the drury-arveson ball.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Measure of the overlap kernel.
    #[arg(long = "overlap-measure", value_enum, default_value = "lebesgue")]
    overlap_measure: MeasureName,
    /// Partition depth of the overlap measure.
    #[arg(long = "overlap-depth", default_value_t = 12)]
    overlap_depth: u32,
    /// Positive factor multiplying the kernel.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
}

impl KernelArgs {
    fn spec(&self) -> Result<KernelSpec> {
        let Some(name) = self.kernel else {
            return Err(Error::InvalidInput("--kernel is required".into()));
        };
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidInput(format!("--scale must be positive, got {}", self.scale)));
        }
        let spec = match name {
            KernelName::BrownianMin => KernelSpec::brownian_min(),
            KernelName::BrownianLine => KernelSpec::brownian_line(),
            KernelName::Szego => KernelSpec::szego(),
            KernelName::CantorProduct => KernelSpec::cantor_product(self.factors)?,
            KernelName::Shannon => KernelSpec::shannon(),
            KernelName::DruryArveson => KernelSpec::drury_arveson(self.dim),
            KernelName::Overlap => {
                KernelSpec::overlap(self.overlap_measure.model(self.overlap_depth))
            }
            KernelName::Green1d => KernelSpec::green_1d(),
        };
        Ok(spec.scaled(self.scale))
    }
}

#[derive(Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Serialize)]
struct OutputArgs {
    /// Output format; CSV where the command has tabular output, else JSON.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the table (or, with --format json, the report) to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A Gram matrix read from a file or built from a kernel and points.
#[derive(Args, Serialize)]
struct MatrixSource {
    /// Matrix file: headerless CSV or JSON with `n` and `entries`.
    #[arg(long, conflicts_with_all = ["points", "kernel"])]
    matrix: Option<PathBuf>,
    /// Point file.
    #[arg(long)]
    points: Option<PathBuf>,
    #[command(flatten)]
    kernel: KernelArgs,
}

impl MatrixSource {
    fn load(&self) -> Result<GramMatrix> {
        match (&self.matrix, &self.points) {
            (Some(m), _) => io::read_matrix(m),
            (None, Some(p)) => gram(&self.kernel.spec()?, &io::read_points(p)?),
            (None, None) => Err(Error::InvalidInput(
                "give --matrix, or --kernel with --points".into(),
            )),
        }
    }
}

#[derive(Args, Serialize)]
struct GramArgs {
    #[command(flatten)]
    kernel: KernelArgs,
    /// Point file.
    #[arg(long)]
    points: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct CholArgs {
    #[command(flatten)]
    source: MatrixSource,
    /// Added to the diagonal before factoring.
    #[arg(long, default_value_t = 0.0)]
    ridge: f64,
    /// Relative pivot tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Use the increment formula for brownian-min on increasing points.
    #[arg(long)]
    closed_form: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct InvArgs {
    #[command(flatten)]
    source: MatrixSource,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum EigMethod {
    AltChol,
    Jacobi,
}

#[derive(Args, Serialize)]
struct EigArgs {
    #[command(flatten)]
    source: MatrixSource,
    #[arg(long, value_enum, default_value = "jacobi")]
    method: EigMethod,
    /// Stopping tolerance (default 1e-12 for alt-chol, 1e-15 for jacobi).
    #[arg(long)]
    tol: Option<f64>,
    /// Iteration cap for alt-chol.
    #[arg(long, default_value_t = ALT_CHOLESKY_MAX_ITER)]
    max_iter: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct ProjectArgs {
    #[command(flatten)]
    kernel: KernelArgs,
    /// Point file of the sample set.
    #[arg(long)]
    points: PathBuf,
    /// Sampled values, one per point.
    #[arg(long)]
    values: PathBuf,
    /// Point file to evaluate at (default: the sample points).
    #[arg(long)]
    eval: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct DeltaArgs {
    #[command(flatten)]
    kernel: KernelArgs,
    /// The point x, real or complex (`0.3+0.1i`).
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Chain file with a leading `level` column.
    #[arg(long, conflicts_with_all = ["zchain", "dyadic"])]
    chain: Option<PathBuf>,
    /// The chain {-n..n} for n = 1..N.
    #[arg(long, conflicts_with = "dyadic")]
    zchain: Option<i64>,
    /// Dyadic grids j/2^k for k in KMIN:KMAX.
    #[arg(long)]
    dyadic: Option<String>,
    #[arg(long, default_value_t = DeltaPolicy::default().rtol)]
    rtol: f64,
    #[arg(long, default_value_t = DeltaPolicy::default().cap)]
    cap: f64,
    #[arg(long, default_value_t = DeltaPolicy::default().growth)]
    growth: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct GraphArgs {
    #[command(flatten)]
    kernel: KernelArgs,
    #[arg(long)]
    points: PathBuf,
    /// Edge threshold on |D_ij| (default 1e-8 max|D|).
    #[arg(long)]
    threshold: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct InterpolateArgs {
    /// CSV with header and columns x, y.
    #[arg(long)]
    data: PathBuf,
    /// CSV with header and one column of abscissae to evaluate at.
    #[arg(long)]
    eval: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct CdfArgs {
    /// Number of grid intervals on [0, 1].
    #[arg(long, default_value_t = 256)]
    grid: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct CellsArgs {
    #[arg(long, default_value_t = 3)]
    depth: u32,
    #[arg(long, value_enum, default_value = "cantor4")]
    measure: MeasureName,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct SpectrumArgs {
    /// List elements up to this value.
    #[arg(long, default_value_t = 256)]
    limit: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct FourierGramArgs {
    /// Frequencies (default: the first --count spectrum elements).
    #[arg(long, value_delimiter = ',')]
    lambdas: Vec<u64>,
    #[arg(long, default_value_t = 8)]
    count: usize,
    #[arg(long, default_value_t = 12)]
    resolution: u32,
    /// Accept frequencies outside the spectrum.
    #[arg(long)]
    allow_any: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct GenFnArgs {
    /// Argument with |s| < 1, real or complex (`0.3+0.2i`).
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    #[arg(long, default_value_t = 8)]
    truncation: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct FourierArgs {
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
    #[arg(long, default_value_t = 12)]
    truncation: u32,
    #[arg(long, default_value_t = 12)]
    resolution: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Example {
    /// Brownian motion on [0, 1]: indicators against Lebesgue measure.
    Ex1,
    /// Hardy space on the disk: Szegő features on the circle.
    Ex2,
    /// Cantor products against the quarter Cantor measure.
    Ex3,
}

impl Example {
    fn pair(self, truncation: u32) -> FactorizationPair {
        match self {
            Example::Ex1 => FactorizationPair::brownian(),
            Example::Ex2 => FactorizationPair::hardy(),
            Example::Ex3 => FactorizationPair::cantor(truncation),
        }
    }

    fn default_grid(self) -> Vec<Point> {
        let disk = |re: f64, im: f64| Point::Disk(Complex64::new(re, im));
        match self {
            Example::Ex1 => (1..=9).map(|k| Point::Unit(k as f64 / 10.0)).collect(),
            Example::Ex2 => vec![disk(0.0, 0.0), disk(0.3, 0.0), disk(0.0, 0.5), disk(-0.4, 0.2)],
            Example::Ex3 => (0..5).map(|k| disk(0.2 * k as f64, 0.0)).collect(),
        }
    }
}

#[derive(Args, Serialize)]
struct ProcessArgs {
    #[arg(long, value_enum)]
    example: Example,
    /// Point file for the index grid (default depends on the example).
    #[arg(long)]
    grid_file: Option<PathBuf>,
    /// Number of factors in the ex3 features.
    #[arg(long, default_value_t = 4)]
    truncation: u32,
    /// Dyadic partition level.
    #[arg(long, default_value_t = 10)]
    resolution: u32,
    /// Monte Carlo paths.
    #[arg(long, default_value_t = 1000)]
    paths: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ProcessArgs {
    fn grid(&self) -> Result<Vec<Point>> {
        match &self.grid_file {
            Some(p) => io::read_points(p),
            None => Ok(self.example.default_grid()),
        }
    }
}

#[derive(Args, Serialize)]
struct SimulateArgs {
    #[command(flatten)]
    process: ProcessArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Synthesis {
    /// V = B z with B the Cholesky sampling factor.
    Cholesky,
    /// V = Σ g_n ζ_n over the columns of the sampling factor.
    Frame,
}

#[derive(Args, Serialize)]
struct CovcheckArgs {
    #[command(flatten)]
    kernel: KernelArgs,
    #[arg(long)]
    points: PathBuf,
    #[arg(long, value_enum, default_value = "cholesky")]
    via: Synthesis,
    #[arg(long, default_value_t = 10_000)]
    paths: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance override (default 5 max|K| / sqrt(paths)).
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct QvarArgs {
    #[arg(long, value_enum, default_value = "lebesgue")]
    measure: MeasureName,
    /// Interval endpoints a,b.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.0, 1.0])]
    interval: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [4, 5, 6, 7, 8, 9, 10])]
    resolutions: Vec<u32>,
    #[arg(long, default_value_t = 10_000)]
    paths: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Allowed relative deviation of each variance ratio from its exact value.
    #[arg(long, default_value_t = 0.2)]
    ratio_tolerance: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum DualityCase {
    /// Brownian motion on [0, 1].
    Ex1,
    /// Hardy space on the disk.
    Ex2,
    /// Cantor products against the quarter Cantor measure.
    Ex3,
    /// Indicator features against the Cantor measure, checked against
    /// brownian-min; expected to fail.
    Mismatched,
}

#[derive(Args, Serialize)]
struct DualityArgs {
    #[arg(long, value_enum)]
    example: DualityCase,
    /// Point file for the index grid (default depends on the example).
    #[arg(long)]
    grid_file: Option<PathBuf>,
    /// Number of factors in the ex3 features.
    #[arg(long, default_value_t = 4)]
    truncation: u32,
    /// Dyadic partition level of the quadrature and the Wiener increments.
    #[arg(long, default_value_t = 12)]
    resolution: u32,
    /// Monte Carlo paths.
    #[arg(long, default_value_t = 10_000)]
    paths: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SetName {
    Integers,
    PositiveIntegers,
}

#[derive(Args, Serialize)]
struct FrameCheckArgs {
    #[command(flatten)]
    kernel: KernelArgs,
    #[arg(long, value_enum, default_value = "integers")]
    set: SetName,
    /// Test points.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.25, 0.5, 0.75])]
    x: Vec<f64>,
    /// Truncation N of the sample set.
    #[arg(long, default_value_t = 100)]
    terms: i64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct FrameBoundsArgs {
    #[command(flatten)]
    kernel: KernelArgs,
    #[arg(long)]
    points: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct ReconstructArgs {
    #[command(flatten)]
    kernel: KernelArgs,
    #[arg(long)]
    points: PathBuf,
    #[arg(long)]
    values: PathBuf,
    #[arg(long)]
    eval: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum RuleName {
    Harmonic,
    Custom,
}

#[derive(Args, Serialize)]
struct SawtoothArgs {
    /// CSV with header and one column of increasing knots.
    #[arg(long)]
    knots: PathBuf,
    #[arg(long, value_enum, default_value = "harmonic")]
    rule: RuleName,
    /// Slopes for --rule custom, one per tooth.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    slopes: Vec<f64>,
    /// Sample the witness at this many grid intervals for plotting.
    #[arg(long)]
    samples: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

/// What a command produced.
struct Outcome {
    /// Tabular output, if any.
    table: Option<String>,
    /// Summary metrics, always reported.
    metrics: Map<String, Value>,
    /// Data added to the metrics when the report is the primary output.
    data: Map<String, Value>,
    seed: Option<u64>,
    pass: bool,
}

impl Outcome {
    fn report(metrics: Value) -> Self {
        Self::table(None, metrics, Value::Null)
    }

    fn table(table: Option<String>, metrics: Value, data: Value) -> Self {
        let obj = |v: Value| match v {
            Value::Object(m) => m,
            Value::Null => Map::new(),
            other => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                m
            }
        };
        Self {
            table,
            metrics: obj(metrics),
            data: obj(data),
            seed: None,
            pass: true,
        }
    }

    fn seeded(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    fn passing(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let threads = match cli.threads {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) if !v.trim().is_empty() => match v.trim().parse::<usize>() {
                Ok(n) => Some(n),
                Err(_) => {
                    eprintln!("error: {THREADS_ENV}='{v}' is not a thread count");
                    return 2;
                }
            },
            _ => None,
        },
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return 2;
        }
    };
    match pool.install(|| execute(&cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                1
            } else {
                2
            }
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gram(_) => "gram",
        Command::Chol(_) => "chol",
        Command::Inv(_) => "inv",
        Command::Eig(_) => "eig",
        Command::Project(_) => "project",
        Command::DeltaTest(_) => "delta-test",
        Command::Graph(_) => "graph",
        Command::Interpolate(_) => "interpolate",
        Command::Cantor(c) => match c {
            CantorCommand::Cdf(_) => "cantor cdf",
            CantorCommand::Cells(_) => "cantor cells",
            CantorCommand::Spectrum(_) => "cantor spectrum",
            CantorCommand::FourierGram(_) => "cantor fourier-gram",
            CantorCommand::GenFn(_) => "cantor gen-fn",
            CantorCommand::Fourier(_) => "cantor fourier",
        },
        Command::Simulate(_) => "simulate",
        Command::Covcheck(_) => "covcheck",
        Command::Qvar(_) => "qvar",
        Command::Duality(_) => "duality",
        Command::Frame(c) => match c {
            FrameCommand::Check(_) => "frame check",
            FrameCommand::Bounds(_) => "frame bounds",
            FrameCommand::Reconstruct(_) => "frame reconstruct",
        },
        Command::Witness(WitnessCommand::Sawtooth(_)) => "witness sawtooth",
    }
}

fn execute(command: &Command) -> Result<i32> {
    let name = command_name(command);
    let config = serde_json::to_value(command)?;
    let (outcome, output) = match command {
        Command::Gram(a) => (cmd_gram(a)?, &a.output),
        Command::Chol(a) => (cmd_chol(a)?, &a.output),
        Command::Inv(a) => (cmd_inv(a)?, &a.output),
        Command::Eig(a) => (cmd_eig(a)?, &a.output),
        Command::Project(a) => (cmd_project(a)?, &a.output),
        Command::DeltaTest(a) => (cmd_delta(a)?, &a.output),
        Command::Graph(a) => (cmd_graph(a)?, &a.output),
        Command::Interpolate(a) => (cmd_interpolate(a)?, &a.output),
        Command::Cantor(c) => match c {
            CantorCommand::Cdf(a) => (cmd_cdf(a)?, &a.output),
            CantorCommand::Cells(a) => (cmd_cells(a)?, &a.output),
            CantorCommand::Spectrum(a) => (cmd_spectrum(a)?, &a.output),
            CantorCommand::FourierGram(a) => (cmd_fourier_gram(a)?, &a.output),
            CantorCommand::GenFn(a) => (cmd_gen_fn(a)?, &a.output),
            CantorCommand::Fourier(a) => (cmd_fourier(a)?, &a.output),
        },
        Command::Simulate(a) => (cmd_simulate(a, &config)?, &a.output),
        Command::Covcheck(a) => (cmd_covcheck(a)?, &a.output),
        Command::Qvar(a) => (cmd_qvar(a)?, &a.output),
        Command::Duality(a) => (cmd_duality(a)?, &a.output),
        Command::Frame(c) => match c {
            FrameCommand::Check(a) => (cmd_frame_check(a)?, &a.output),
            FrameCommand::Bounds(a) => (cmd_frame_bounds(a)?, &a.output),
            FrameCommand::Reconstruct(a) => (cmd_reconstruct(a)?, &a.output),
        },
        Command::Witness(WitnessCommand::Sawtooth(a)) => (cmd_sawtooth(a)?, &a.output),
    };
    emit(name, config, output, outcome)
}

fn emit(name: &str, config: Value, output: &OutputArgs, outcome: Outcome) -> Result<i32> {
    let format = output.format.unwrap_or(if outcome.table.is_some() {
        Format::Csv
    } else {
        Format::Json
    });
    let code = if outcome.pass { 0 } else { 1 };
    let report = |with_data: bool| -> Result<String> {
        let mut metrics = outcome.metrics.clone();
        if with_data {
            metrics.extend(outcome.data.clone());
        }
        let r = json!({
            "schema": SCHEMA,
            "command": name,
            "config": config,
            "seed": outcome.seed,
            "metrics": metrics,
        });
        Ok(serde_json::to_string_pretty(&r)? + "\n")
    };
    match (format, &outcome.table, &output.out) {
        (Format::Csv, Some(table), Some(path)) => {
            write_file(path, table)?;
            write_stdout(&report(false)?)?;
        }
        (Format::Csv, Some(table), None) => write_stdout(table)?,
        (_, _, Some(path)) => write_file(path, &report(true)?)?,
        (_, _, None) => write_stdout(&report(true)?)?,
    }
    Ok(code)
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn write_stdout(content: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(content.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Io(e)),
        _ => Ok(()),
    }
}

fn cell(z: Complex64) -> Vec<String> {
    vec![format!("{}", z.re), format!("{}", z.im)]
}

/// `point,re,im` rows.
fn point_value_table(points: &[Point], values: &[Complex64]) -> Result<String> {
    let rows: Vec<Vec<String>> = points
        .iter()
        .zip(values)
        .map(|(p, &v)| {
            let mut r = vec![p.to_string()];
            r.extend(cell(v));
            r
        })
        .collect();
    io::table_csv(&["point", "re", "im"], &rows)
}

fn complex_list(values: &[Complex64]) -> Value {
    Value::Array(values.iter().map(|&z| io::complex_json(z)).collect())
}

fn cmd_gram(a: &GramArgs) -> Result<Outcome> {
    let spec = a.kernel.spec()?;
    let g = gram(&spec, &io::read_points(&a.points)?)?;
    Ok(Outcome::table(
        Some(io::matrix_csv(g.entries())),
        json!({"n": g.n(), "kernel": spec.family.name(), "max_abs": g.entries().max_abs()}),
        io::gram_json(&g),
    ))
}

fn cmd_chol(a: &CholArgs) -> Result<Outcome> {
    let g = a.source.load()?;
    let f = if a.closed_form {
        let xs: Option<Vec<f64>> = g.points().iter().map(Point::as_real).collect();
        match (a.source.kernel.kernel, xs) {
            (Some(KernelName::BrownianMin), Some(xs)) if a.source.kernel.scale == 1.0 => {
                brownian_cholesky_closed_form(&xs)?
            }
            _ => {
                return Err(Error::InvalidInput(
                    "--closed-form needs --kernel brownian-min (scale 1) with real points".into(),
                ))
            }
        }
    } else {
        cholesky(&g, a.ridge, a.tol)?
    };
    let reconstruction_error = f.reconstruct().max_abs_diff(&g.real_form());
    let b = f.sampling_factor();
    Ok(Outcome::table(
        Some(io::matrix_csv(&b)),
        json!({
            "n": g.n(),
            "embedded": f.embedded,
            "ridge_used": f.ridge_used,
            "reconstruction_error": reconstruction_error,
        }),
        json!({"factor": io::matrix_json(&b)}),
    ))
}

fn cmd_inv(a: &InvArgs) -> Result<Outcome> {
    let g = a.source.load()?;
    let d = inverse_gram(&g)?;
    let n = g.n();
    let dk = d.matmul(g.entries());
    let mut err: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            err = err.max((dk[(i, j)] - target).norm());
        }
    }
    Ok(Outcome::table(
        Some(io::matrix_csv(&d)),
        json!({"n": n, "identity_error": err}),
        json!({"inverse": io::matrix_json(&d)}),
    ))
}

fn cmd_eig(a: &EigArgs) -> Result<Outcome> {
    let g = a.source.load()?;
    let (result, tol) = match a.method {
        EigMethod::AltChol => {
            let tol = a.tol.unwrap_or(ALT_CHOLESKY_TOL);
            (alt_cholesky_eigs(&g, a.max_iter, tol)?, tol)
        }
        EigMethod::Jacobi => {
            let tol = a.tol.unwrap_or(1e-15);
            (jacobi_eigs(&g, tol), tol)
        }
    };
    let rows: Vec<Vec<String>> = result.eigenvalues.iter().map(|v| vec![format!("{v}")]).collect();
    Ok(Outcome::table(
        Some(io::table_csv(&["eigenvalue"], &rows)?),
        json!({
            "n": g.n(),
            "tolerance": tol,
            "iterations": result.iterations,
            "converged": result.converged,
        }),
        json!({"eigenvalues": result.eigenvalues}),
    )
    .passing(result.converged))
}

fn read_sampled(points: &Path, values: &Path) -> Result<(Vec<Point>, Vec<Complex64>)> {
    let pts = io::read_points(points)?;
    let vals = io::read_values(values)?;
    if vals.len() != pts.len() {
        return Err(Error::DimensionMismatch {
            expected: pts.len(),
            got: vals.len(),
        });
    }
    Ok((pts, vals))
}

fn cmd_project(a: &ProjectArgs) -> Result<Outcome> {
    let spec = a.kernel.spec()?;
    let (pts, vals) = read_sampled(&a.points, &a.values)?;
    let eval = match &a.eval {
        Some(p) => io::read_points(p)?,
        None => pts.clone(),
    };
    let g = rkhs::interpolant(&spec, &pts, &vals)?;
    let out = eval.iter().map(|t| g.eval(&spec, t)).collect::<Result<Vec<_>>>()?;
    Ok(Outcome::table(
        Some(point_value_table(&eval, &out)?),
        json!({"samples": pts.len(), "eval_points": eval.len(), "norm_sq": g.norm_sq(&spec)?}),
        json!({"points": eval, "values": complex_list(&out)}),
    ))
}

/// Reads `x` in the domain of `spec`, matching the tag of `like` when given.
fn parse_point(spec: &KernelSpec, s: &str, like: Option<&Point>) -> Result<Point> {
    let p = match like {
        Some(Point::Unit(_)) => Point::Unit(parse_real(s)?),
        Some(Point::Real(_)) => Point::Real(parse_real(s)?),
        Some(Point::Disk(_)) => Point::Disk(io::parse_complex(s)?),
        _ if spec.is_complex() => Point::Disk(io::parse_complex(s)?),
        _ => Point::Real(parse_real(s)?),
    };
    spec.check_point(&p)?;
    Ok(p)
}

fn parse_real(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("'{s}' is not a real number")))
}

fn cmd_delta(a: &DeltaArgs) -> Result<Outcome> {
    let spec = a.kernel.spec()?;
    let chain = match (&a.chain, a.zchain, &a.dyadic) {
        (Some(p), _, _) => io::read_chain(p)?,
        (None, Some(n), _) => SampleSet::symmetric_integer_chain(n)?,
        (None, None, Some(range)) => {
            let (lo, hi) = range
                .split_once(':')
                .and_then(|(l, h)| Some((l.trim().parse().ok()?, h.trim().parse().ok()?)))
                .ok_or_else(|| Error::Parse(format!("--dyadic expects KMIN:KMAX, got '{range}'")))?;
            SampleSet::dyadic_chain(lo, hi)?
        }
        _ => return Err(Error::InvalidInput("give one of --chain, --zchain, --dyadic".into())),
    };
    let x = parse_point(&spec, &a.x, chain.points().first())?;
    let policy = DeltaPolicy {
        rtol: a.rtol,
        cap: a.cap,
        growth: a.growth,
    };
    let report = rkhs::delta_membership(&spec, &x, &chain, &policy)?;
    let levels: Vec<Vec<&Point>> = chain
        .levels()
        .iter()
        .map(|l| l.iter().map(|&i| &chain.points()[i]).collect())
        .collect();
    let mut metrics = serde_json::to_value(&report)?;
    metrics["x"] = serde_json::to_value(&x)?;
    metrics["levels"] = serde_json::to_value(&levels)?;
    Ok(Outcome::report(metrics))
}

fn cmd_graph(a: &GraphArgs) -> Result<Outcome> {
    let spec = a.kernel.spec()?;
    let pts = io::read_points(&a.points)?;
    let g = rkhs::induced_graph(&spec, &pts, a.threshold)?;
    let rows: Vec<Vec<String>> = g
        .edges
        .iter()
        .map(|&(i, j, w)| {
            let mut r = vec![i.to_string(), j.to_string()];
            r.extend(cell(w));
            r
        })
        .collect();
    let edges: Vec<Value> = g
        .edges
        .iter()
        .map(|&(i, j, w)| json!({"i": i, "j": j, "weight": io::complex_json(w)}))
        .collect();
    Ok(Outcome::table(
        Some(io::table_csv(&["i", "j", "re", "im"], &rows)?),
        json!({"vertices": g.vertices.len(), "edges": g.edges.len(), "threshold": g.threshold}),
        json!({"points": g.vertices, "edge_list": edges}),
    ))
}

fn cmd_interpolate(a: &InterpolateArgs) -> Result<Outcome> {
    let data: Vec<(f64, f64)> = io::read_table(&a.data, 2)?.into_iter().map(|r| (r[0], r[1])).collect();
    let f = rkhs::min_norm_interpolant(&data)?;
    let xs: Vec<f64> = match &a.eval {
        Some(p) => io::read_table(p, 1)?.into_iter().map(|r| r[0]).collect(),
        None => f.knots.iter().map(|k| k.0).collect(),
    };
    let ys: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
    let rows: Vec<Vec<String>> = xs.iter().zip(&ys).map(|(x, y)| vec![format!("{x}"), format!("{y}")]).collect();
    Ok(Outcome::table(
        Some(io::table_csv(&["x", "f"], &rows)?),
        json!({"knots": f.knots, "norm_sq": f.norm_sq}),
        json!({"x": xs, "f": ys}),
    ))
}

fn cmd_cdf(a: &CdfArgs) -> Result<Outcome> {
    if a.grid == 0 {
        return Err(Error::InvalidInput("--grid must be positive".into()));
    }
    let xs: Vec<f64> = (0..=a.grid).map(|k| k as f64 / a.grid as f64).collect();
    let ys = xs.iter().map(|&x| measures::mu4_cdf(x)).collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<String>> = xs.iter().zip(&ys).map(|(x, y)| vec![format!("{x}"), format!("{y}")]).collect();
    Ok(Outcome::table(
        Some(io::table_csv(&["x", "cdf"], &rows)?),
        json!({"grid": a.grid}),
        json!({"x": xs, "cdf": ys}),
    ))
}

fn cmd_cells(a: &CellsArgs) -> Result<Outcome> {
    if a.depth > measures::MAX_RESOLUTION {
        return Err(Error::OutOfRange(format!(
            "depth {} exceeds {}",
            a.depth,
            measures::MAX_RESOLUTION
        )));
    }
    let part = measures::cells(&a.measure.model(a.depth), a.depth);
    let rows: Vec<Vec<String>> = part
        .cells
        .iter()
        .map(|c| vec![format!("{}", c.a), format!("{}", c.b), format!("{}", c.mass)])
        .collect();
    Ok(Outcome::table(
        Some(io::table_csv(&["a", "b", "mass"], &rows)?),
        json!({"depth": a.depth, "cells": part.len(), "total_mass": part.total_mass()}),
        json!({"cell_list": part.cells.iter().map(|c| [c.a, c.b, c.mass]).collect::<Vec<_>>()}),
    ))
}

fn cmd_spectrum(a: &SpectrumArgs) -> Result<Outcome> {
    let lams = measures::lambda4(a.limit);
    let rows: Vec<Vec<String>> = lams.iter().map(|l| vec![l.to_string()]).collect();
    Ok(Outcome::table(
        Some(io::table_csv(&["lambda"], &rows)?),
        json!({"limit": a.limit, "count": lams.len()}),
        json!({"lambdas": lams}),
    ))
}

fn cmd_fourier_gram(a: &FourierGramArgs) -> Result<Outcome> {
    let lams: Vec<u64> = if a.lambdas.is_empty() {
        let mut limit = 16u64;
        loop {
            let l = measures::lambda4(limit);
            if l.len() >= a.count || limit > u64::MAX / 4 {
                break l.into_iter().take(a.count).collect();
            }
            limit *= 4;
        }
    } else {
        a.lambdas.clone()
    };
    let g = measures::fourier_gram(&lams, a.resolution, a.allow_any)?;
    Ok(Outcome::table(
        Some(io::matrix_csv(g.entries())),
        json!({
            "lambdas": lams,
            "resolution": a.resolution,
            "off_diagonal_max": measures::off_diagonal_max(g.entries()),
        }),
        json!({"n": g.n(), "entries": io::matrix_json(g.entries())}),
    ))
}

fn cmd_gen_fn(a: &GenFnArgs) -> Result<Outcome> {
    let s = io::parse_complex(&a.s)?;
    let g = measures::generating_function(s, a.truncation)?;
    Ok(Outcome::report(json!({
        "s": [s.re, s.im],
        "product": [g.product.re, g.product.im],
        "sum": [g.sum.re, g.sum.im],
        "product_sum_difference": (g.product - g.sum).norm(),
        "gap_bound": g.gap_bound,
    })))
}

fn cmd_fourier(a: &FourierArgs) -> Result<Outcome> {
    if a.resolution > measures::MAX_RESOLUTION {
        return Err(Error::OutOfRange(format!(
            "resolution {} exceeds {}",
            a.resolution,
            measures::MAX_RESOLUTION
        )));
    }
    Ok(Outcome::report(serde_json::to_value(measures::mu4_fourier(
        a.t,
        a.truncation,
        a.resolution,
    ))?))
}

fn ensemble_table(e: &PathEnsemble, config: &Value) -> Result<String> {
    let real = e.is_real();
    let mut header = vec!["path".to_string()];
    for p in &e.grid {
        if real {
            header.push(format!("V({p})"));
        } else {
            header.push(format!("re V({p})"));
            header.push(format!("im V({p})"));
        }
    }
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(&header)?;
    for i in 0..e.n_paths() {
        let mut rec = vec![i.to_string()];
        for &z in e.paths.row(i) {
            if real {
                rec.push(format!("{}", z.re));
            } else {
                rec.extend(cell(z));
            }
        }
        w.write_record(&rec)?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    let body = String::from_utf8(body).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(format!(
        "# {SCHEMA} simulate seed={} config={}\n{body}",
        e.seed,
        serde_json::to_string(config)?
    ))
}

fn cmd_simulate(a: &SimulateArgs, config: &Value) -> Result<Outcome> {
    let p = &a.process;
    let grid = p.grid()?;
    let pair = p.example.pair(p.truncation);
    let e = ito_synthesize(&pair, p.resolution, &grid, p.n_paths()?, p.seed)?;
    let mean = e.mean()?;
    let max_mean = mean.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(Outcome::table(
        Some(ensemble_table(&e, config)?),
        json!({
            "n_paths": e.n_paths(),
            "grid": e.grid,
            "features": pair.features.name(),
            "resolution": p.resolution,
            "max_abs_mean": max_mean,
        }),
        json!({"paths": (0..e.n_paths()).map(|i| complex_list(e.paths.row(i))).collect::<Vec<_>>()}),
    )
    .seeded(p.seed))
}

impl ProcessArgs {
    fn n_paths(&self) -> Result<usize> {
        if self.paths == 0 {
            return Err(Error::EmptyEnsemble);
        }
        Ok(self.paths)
    }
}

fn cmd_covcheck(a: &CovcheckArgs) -> Result<Outcome> {
    let spec = a.kernel.spec()?;
    let pts = io::read_points(&a.points)?;
    if a.paths == 0 {
        return Err(Error::EmptyEnsemble);
    }
    let g = gram(&spec, &pts)?;
    let e = match a.via {
        Synthesis::Cholesky => sample_gaussian_vector(&g, a.paths, a.seed)?,
        Synthesis::Frame => {
            let b = cholesky(&g, 0.0, 1e-12)?.sampling_factor();
            frame_synthesize_values(&b, &pts, a.paths, a.seed)?
        }
    };
    let (err, kmax) = covariance_error(&e, &spec)?;
    let tol = a.tolerance.unwrap_or_else(|| mc_tolerance(kmax, a.paths));
    let pass = err <= tol;
    Ok(Outcome::report(json!({
        "max_abs_error": err,
        "tolerance": tol,
        "pass": pass,
        "max_abs_kernel": kmax,
        "n_paths": a.paths,
        "grid_size": pts.len(),
    }))
    .seeded(a.seed)
    .passing(pass))
}

fn cmd_qvar(a: &QvarArgs) -> Result<Outcome> {
    let &[lo, hi] = a.interval.as_slice() else {
        return Err(Error::InvalidInput("--interval expects a,b".into()));
    };
    let finest = a.resolutions.iter().copied().max().unwrap_or(0);
    let m = a.measure.model(finest);
    let r = quadratic_variation(&m, lo, hi, &a.resolutions, a.paths, a.seed)?;
    let mean_ok = r.rows.iter().all(|row| row.mean_q_error <= row.mean_q_tolerance);
    let ratio_errors: Vec<f64> = r
        .rows
        .windows(2)
        .zip(&r.ratios)
        .map(|(w, ratio)| {
            let expected = w[0].expected_mean_sq_dev / w[1].expected_mean_sq_dev;
            (ratio / expected - 1.0).abs()
        })
        .collect();
    let max_ratio_error = ratio_errors.iter().copied().fold(0.0, f64::max);
    let pass = mean_ok && max_ratio_error <= a.ratio_tolerance;
    let mut metrics = serde_json::to_value(&r)?;
    metrics["max_abs_error"] = json!(max_ratio_error);
    metrics["tolerance"] = json!(a.ratio_tolerance);
    metrics["ratio_relative_errors"] = json!(ratio_errors);
    metrics["pass"] = json!(pass);
    Ok(Outcome::report(metrics).seeded(a.seed).passing(pass))
}

fn cmd_duality(a: &DualityArgs) -> Result<Outcome> {
    let (pair, spec, example) = match a.example {
        DualityCase::Ex1 => (FactorizationPair::brownian(), KernelSpec::brownian_min(), Example::Ex1),
        DualityCase::Ex2 => (FactorizationPair::hardy(), KernelSpec::szego(), Example::Ex2),
        DualityCase::Ex3 => (
            FactorizationPair::cantor(a.truncation),
            KernelSpec::cantor_product(a.truncation)?,
            Example::Ex3,
        ),
        DualityCase::Mismatched => (
            FactorizationPair::new(FeatureMap::Indicator, MeasureModel::cantor4(a.resolution)),
            KernelSpec::brownian_min(),
            Example::Ex1,
        ),
    };
    let grid = match &a.grid_file {
        Some(p) => io::read_points(p)?,
        None => example.default_grid(),
    };
    if a.paths == 0 {
        return Err(Error::EmptyEnsemble);
    }
    let r = duality_check(&pair, &spec, &grid, a.resolution, a.paths, a.seed)?;
    let mut metrics = serde_json::to_value(&r)?;
    metrics["max_abs_error"] = json!(r.mc_error);
    metrics["tolerance"] = json!(r.mc_tolerance);
    Ok(Outcome::report(metrics).seeded(a.seed).passing(r.pass))
}

fn cmd_frame_check(a: &FrameCheckArgs) -> Result<Outcome> {
    let spec = a.kernel.spec()?;
    let set = match a.set {
        SetName::Integers => CountableSet::Integers,
        SetName::PositiveIntegers => CountableSet::PositiveIntegers,
    };
    let r = sampling::parseval_check(&spec, &set, &a.x, a.terms)?;
    Ok(Outcome::report(serde_json::to_value(&r)?))
}

fn cmd_frame_bounds(a: &FrameBoundsArgs) -> Result<Outcome> {
    let spec = a.kernel.spec()?;
    let pts = io::read_points(&a.points)?;
    let (lower, upper) = sampling::frame_bounds(&spec, &pts)?;
    Ok(Outcome::report(json!({
        "lower_bound": lower,
        "upper_bound": upper,
        "points": pts.len(),
        "scope": "bounds hold on the span of the sections at these points only",
    })))
}

fn cmd_reconstruct(a: &ReconstructArgs) -> Result<Outcome> {
    let spec = a.kernel.spec()?;
    let (pts, vals) = read_sampled(&a.points, &a.values)?;
    let eval = match &a.eval {
        Some(p) => io::read_points(p)?,
        None => pts.clone(),
    };
    let out = sampling::frame_reconstruct(&spec, &pts, &vals, &eval)?;
    let projected = rkhs::project(&spec, &pts, &vals, &eval)?;
    let diff = out
        .iter()
        .zip(&projected)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(Outcome::table(
        Some(point_value_table(&eval, &out)?),
        json!({"samples": pts.len(), "eval_points": eval.len(), "max_diff_from_projection": diff}),
        json!({"points": eval, "values": complex_list(&out)}),
    ))
}

fn cmd_sawtooth(a: &SawtoothArgs) -> Result<Outcome> {
    let knots: Vec<f64> = io::read_table(&a.knots, 1)?.into_iter().map(|r| r[0]).collect();
    let rule = match a.rule {
        RuleName::Harmonic => SlopeRule::Harmonic,
        RuleName::Custom => SlopeRule::Custom(a.slopes.clone()),
    };
    let w = sampling::sawtooth_witness(&knots, &rule)?;
    let at_knots = knots.iter().map(|&x| w.eval(x).abs()).fold(0.0, f64::max);
    let pairing = knots
        .iter()
        .map(|&x| w.derivative_pairing(x).abs())
        .fold(0.0, f64::max);
    let metrics = json!({
        "teeth": w.slopes.len(),
        "norm_sq": w.norm_sq,
        "max_abs_at_knots": at_knots,
        "max_abs_section_pairing": pairing,
        "max_apex": (0..w.slopes.len()).map(|n| w.apex(n).abs()).fold(0.0, f64::max),
    });
    let data = json!({
        "knots": w.knots,
        "slopes": w.slopes,
        "partial_norm_sq": w.partial_norm_sq,
    });
    let table = match a.samples {
        Some(n) if n > 0 => {
            let (lo, hi) = (knots[0], knots[knots.len() - 1]);
            let rows: Vec<Vec<String>> = (0..=n)
                .map(|k| {
                    let x = lo + (hi - lo) * k as f64 / n as f64;
                    vec![format!("{x}"), format!("{}", w.eval(x))]
                })
                .collect();
            Some(io::table_csv(&["x", "f"], &rows)?)
        }
        _ => None,
    };
    Ok(Outcome::table(table, metrics, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn argument_definitions_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(run(["kernel-forge", "--no-such-flag"]), 2);
        assert_eq!(run(["kernel-forge", "gram", "--kernel", "nope", "--points", "x.csv"]), 2);
        assert_eq!(run(["kernel-forge", "gram", "--kernel", "szego", "--points", "/nonexistent.csv"]), 2);
    }
}
