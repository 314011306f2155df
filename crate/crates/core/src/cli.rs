//! `cwvo` command-line front end: `solve`, `table` and `matrices`.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid configuration,
//! 3 singular collocation system.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::basis::WaveletBasis;
use crate::error::Error;
use crate::matrix::format_sig17;
use crate::model::{builtin_coefficients, builtin_example_with};
use crate::opmat::{vo_monomial_matrix, OperationalMatrices, OrderFunction};
use crate::solver::{error_report, solve, ErrorRow};

/// Largest `2^k M` the CLI accepts.
pub const MAX_BASIS_SIZE: usize = 64;
pub const DEFAULT_GRID: usize = 21;
/// Fixed abscissa and times of the error table.
pub const TABLE_X: f64 = 0.5;
pub const TABLE_TIMES: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Solver(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(Error::SingularSystem { .. }) => 3,
            CliError::Solver(Error::Internal(_)) => 1,
            CliError::Solver(_) => 2,
            CliError::Io { .. } => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "cwvo",
    version,
    about = "Chebyshev wavelet solver for variable-order fractional advection-dispersion"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a built-in example and write the solution/error grid.
    Solve(Flags),
    /// Print absolute errors at x = 0.5, t = 0.1..0.9 for several M.
    Table(Flags),
    /// Dump D, P, T and Q for a constant order.
    Matrices(Flags),
}

#[derive(Debug, Default, Clone, Args)]
pub struct Flags {
    /// Flat TOML file with any of the flag values; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub example: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long = "M")]
    pub m: Option<usize>,
    #[arg(long = "M-list", value_delimiter = ',')]
    pub m_list: Option<Vec<usize>>,
    #[arg(long = "grid-nx")]
    pub grid_nx: Option<usize>,
    #[arg(long = "grid-nt")]
    pub grid_nt: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub vartheta: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
}

/// Contents of a `--config` file.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub example: Option<u32>,
    pub k: Option<u32>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    #[serde(rename = "M_list")]
    pub m_list: Option<Vec<usize>>,
    pub grid_nx: Option<usize>,
    pub grid_nt: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub vartheta: Option<f64>,
    pub t: Option<f64>,
    pub alpha1: Option<f64>,
    pub alpha2: Option<f64>,
    pub mu1: Option<f64>,
    pub mu2: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Flags merged over the optional config file.
#[derive(Debug, Clone, Default)]
struct Merged {
    flags: Flags,
    file: FileConfig,
}

impl Merged {
    fn new(flags: Flags) -> CliResult<Self> {
        let file = match &flags.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        Ok(Self { flags, file })
    }

    fn example(&self) -> Option<u32> {
        self.flags.example.or(self.file.example)
    }
    fn k(&self) -> Option<u32> {
        self.flags.k.or(self.file.k)
    }
    fn m(&self) -> Option<usize> {
        self.flags.m.or(self.file.m)
    }
    fn m_list(&self) -> Option<Vec<usize>> {
        self.flags.m_list.clone().or_else(|| self.file.m_list.clone())
    }
    fn grid_nx(&self) -> Option<usize> {
        self.flags.grid_nx.or(self.file.grid_nx)
    }
    fn grid_nt(&self) -> Option<usize> {
        self.flags.grid_nt.or(self.file.grid_nt)
    }
    fn out(&self) -> Option<PathBuf> {
        self.flags.out.clone().or_else(|| self.file.out.clone())
    }
    fn format(&self) -> Option<OutputFormat> {
        self.flags.format.or(self.file.format)
    }
    fn vartheta(&self) -> Option<f64> {
        self.flags.vartheta.or(self.file.vartheta)
    }
    fn t(&self) -> Option<f64> {
        self.flags.t.or(self.file.t)
    }

    fn coefficients(&self, example: u32) -> CliResult<(f64, f64, f64, f64)> {
        let (a1, a2, m1, m2) = builtin_coefficients(example)?;
        Ok((
            self.file.alpha1.unwrap_or(a1),
            self.file.alpha2.unwrap_or(a2),
            self.file.mu1.unwrap_or(m1),
            self.file.mu2.unwrap_or(m2),
        ))
    }
}

/// Validated settings for `solve`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub example_id: u32,
    pub k: u32,
    #[serde(rename = "M")]
    pub m: usize,
    pub grid_nx: usize,
    pub grid_nt: usize,
    pub output_path: PathBuf,
    pub format: OutputFormat,
    pub alpha1: f64,
    pub alpha2: f64,
    pub mu1: f64,
    pub mu2: f64,
}

fn need<T>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Config(format!("missing required --{flag}")))
}

fn check_example(id: u32) -> CliResult<u32> {
    if (1..=4).contains(&id) {
        Ok(id)
    } else {
        Err(CliError::Config(format!("--example must be 1..4, got {id}")))
    }
}

fn check_basis(k: u32, m: usize, min_m: usize) -> CliResult<WaveletBasis> {
    if m < min_m {
        return Err(CliError::Config(format!("--M must be at least {min_m}, got {m}")));
    }
    if k > 6 || (1usize << k) * m > MAX_BASIS_SIZE {
        return Err(CliError::Config(format!(
            "2^k * M must not exceed {MAX_BASIS_SIZE} (k = {k}, M = {m})"
        )));
    }
    WaveletBasis::new(k, m).map_err(|e| CliError::Config(e.to_string()))
}

impl RunConfig {
    fn from_merged(cfg: &Merged) -> CliResult<Self> {
        let example_id = check_example(need(cfg.example(), "example")?)?;
        let k = cfg.k().unwrap_or(0);
        let m = need(cfg.m(), "M")?;
        check_basis(k, m, 2)?;
        let grid_nx = cfg.grid_nx().unwrap_or(DEFAULT_GRID);
        let grid_nt = cfg.grid_nt().unwrap_or(DEFAULT_GRID);
        if grid_nx == 0 || grid_nt == 0 {
            return Err(CliError::Config("grid sizes must be positive".into()));
        }
        let format = cfg.format().unwrap_or(OutputFormat::Csv);
        let output_path = cfg.out().unwrap_or_else(|| {
            PathBuf::from(match format {
                OutputFormat::Csv => "solution.csv",
                OutputFormat::Json => "solution.json",
            })
        });
        let (alpha1, alpha2, mu1, mu2) = cfg.coefficients(example_id)?;
        Ok(Self {
            example_id,
            k,
            m,
            grid_nx,
            grid_nt,
            output_path,
            format,
            alpha1,
            alpha2,
            mu1,
            mu2,
        })
    }
}

/// `n` uniformly spaced interior points `i / (n + 1)`.
pub fn interior_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|i| i as f64 / (n + 1) as f64).collect()
}

/// Result of `solve`, as written to disk.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub rows: Vec<ErrorRow>,
    pub max_abs_err: Option<f64>,
    pub condition_estimate: f64,
    pub max_interior_residual: f64,
}

pub fn run_solve(config: &RunConfig) -> CliResult<SolveOutcome> {
    let spec = builtin_example_with(config.example_id, config.alpha1, config.alpha2, config.mu1, config.mu2)?;
    let basis = WaveletBasis::new(config.k, config.m)?;
    let sol = solve(&spec, &basis)?;
    let rows = error_report(
        &sol,
        &spec,
        &interior_grid(config.grid_nx),
        &interior_grid(config.grid_nt),
    )?;
    let max_abs_err = rows.iter().map(|r| r.abs_err).reduce(f64::max);
    Ok(SolveOutcome {
        rows,
        max_abs_err,
        condition_estimate: sol.diagnostics.condition_estimate,
        max_interior_residual: sol.diagnostics.max_interior_residual,
    })
}

pub const CSV_HEADER: &str = "x,t,u_approx,u_exact,abs_err";

pub fn grid_csv(rows: &[ErrorRow]) -> String {
    let mut s = String::with_capacity(rows.len() * 100);
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let exact = |v: f64| if v.is_nan() { String::new() } else { format_sig17(v) };
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            format_sig17(r.x),
            format_sig17(r.t),
            format_sig17(r.u_approx),
            exact(r.u_exact),
            exact(r.abs_err)
        ));
    }
    s
}

/// Parses a grid written by [`grid_csv`]; empty exact fields become NaN.
pub fn parse_grid_csv(text: &str) -> CliResult<Vec<ErrorRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(CliError::Config("grid file has an unexpected header".into()));
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let f: Vec<f64> = l
                .split(',')
                .map(|v| if v.is_empty() { Ok(f64::NAN) } else { v.parse::<f64>() })
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| CliError::Config(format!("bad grid line {l:?}: {e}")))?;
            if f.len() != 5 {
                return Err(CliError::Config(format!("grid line has {} fields", f.len())));
            }
            Ok(ErrorRow {
                x: f[0],
                t: f[1],
                u_approx: f[2],
                u_exact: f[3],
                abs_err: f[4],
            })
        })
        .collect()
}

#[derive(Serialize)]
struct JsonRow {
    x: f64,
    t: f64,
    u_approx: f64,
    u_exact: Option<f64>,
    abs_err: Option<f64>,
}

#[derive(Serialize)]
struct JsonMeta<'a> {
    config: &'a RunConfig,
    condition_estimate: f64,
    max_abs_err: Option<f64>,
    max_interior_residual: f64,
}

#[derive(Serialize)]
struct JsonGrid<'a> {
    meta: JsonMeta<'a>,
    grid: Vec<JsonRow>,
}

pub fn grid_json(config: &RunConfig, outcome: &SolveOutcome) -> String {
    let finite = |v: f64| if v.is_nan() { None } else { Some(v) };
    let doc = JsonGrid {
        meta: JsonMeta {
            config,
            condition_estimate: outcome.condition_estimate,
            max_abs_err: outcome.max_abs_err,
            max_interior_residual: outcome.max_interior_residual,
        },
        grid: outcome
            .rows
            .iter()
            .map(|r| JsonRow {
                x: r.x,
                t: r.t,
                u_approx: r.u_approx,
                u_exact: finite(r.u_exact),
                abs_err: finite(r.abs_err),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("grid serializes")
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(io_err(path))
}

fn stdout_err(e: io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

pub fn cmd_solve(flags: Flags, out: &mut dyn Write) -> CliResult<()> {
    let config = RunConfig::from_merged(&Merged::new(flags)?)?;
    let outcome = run_solve(&config)?;
    let body = match config.format {
        OutputFormat::Csv => grid_csv(&outcome.rows),
        OutputFormat::Json => grid_json(&config, &outcome),
    };
    write_file(&config.output_path, &body)?;
    let err = outcome
        .max_abs_err
        .map_or_else(|| "nan".to_string(), |e| format!("{e:e}"));
    writeln!(out, "max_abs_err {err}").map_err(stdout_err)?;
    writeln!(out, "condition_estimate {:e}", outcome.condition_estimate).map_err(stdout_err)?;
    writeln!(out, "max_interior_residual {:e}", outcome.max_interior_residual).map_err(stdout_err)?;
    writeln!(out, "rows {}", outcome.rows.len()).map_err(stdout_err)?;
    writeln!(out, "output {}", config.output_path.display()).map_err(stdout_err)?;
    Ok(())
}

/// Scientific notation with four significant digits and a two-digit exponent, e.g. `7.596E-07`.
pub fn sci4(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v:.3E}");
    }
    let s = format!("{v:.3e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    format!("{mant}E{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
}

/// Absolute errors at `x = 0.5` for each `t` in [`TABLE_TIMES`] (rows) and each `M` (columns).
pub fn error_table(example: u32, k: u32, ms: &[usize], coefficients: (f64, f64, f64, f64)) -> CliResult<Vec<Vec<f64>>> {
    let (a1, a2, m1, m2) = coefficients;
    let spec = builtin_example_with(example, a1, a2, m1, m2)?;
    let mut columns = Vec::with_capacity(ms.len());
    for &m in ms {
        let sol = solve(&spec, &check_basis(k, m, 2)?)?;
        let rows = error_report(&sol, &spec, &[TABLE_X], &TABLE_TIMES)?;
        columns.push(rows.iter().map(|r| r.abs_err).collect::<Vec<_>>());
    }
    Ok((0..TABLE_TIMES.len())
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect())
}

pub fn cmd_table(flags: Flags, out: &mut dyn Write) -> CliResult<()> {
    let cfg = Merged::new(flags)?;
    let example = check_example(cfg.example().unwrap_or(3))?;
    let k = cfg.k().unwrap_or(0);
    let ms = cfg.m_list().unwrap_or_default();
    if ms.is_empty() {
        return Err(CliError::Config("--M-list must name at least one M".into()));
    }
    for &m in &ms {
        check_basis(k, m, 2)?;
    }
    let table = error_table(example, k, &ms, cfg.coefficients(example)?)?;
    let header: Vec<String> = ms.iter().map(|m| format!("{:>10}", format!("M={m}"))).collect();
    writeln!(out, "t    {}", header.join(" ")).map_err(stdout_err)?;
    for (t, row) in TABLE_TIMES.iter().zip(&table) {
        let cells: Vec<String> = row.iter().map(|v| format!("{:>10}", sci4(*v))).collect();
        writeln!(out, "{t:.1}  {}", cells.join(" ")).map_err(stdout_err)?;
    }
    Ok(())
}

/// The four matrices written by `matrices`, in file order.
pub fn operational_matrices(
    k: u32,
    m: usize,
    vartheta: f64,
    t: f64,
) -> CliResult<Vec<(&'static str, crate::matrix::DenseMatrix)>> {
    let basis = check_basis(k, m, 1)?;
    let upper = (m as f64 - 1.0).max(1.0);
    if !(vartheta > 0.0 && vartheta <= upper) {
        return Err(CliError::Config(format!(
            "--vartheta must lie in (0, {upper}], got {vartheta}"
        )));
    }
    if !(t > 0.0 && t <= 1.0) {
        return Err(CliError::Config(format!("--t must lie in (0, 1], got {t}")));
    }
    let order = OrderFunction::constant(vartheta)?;
    let ops = OperationalMatrices::new(basis)?;
    Ok(vec![
        ("D", ops.derivative().clone()),
        ("P", ops.change_of_basis().clone()),
        ("T", vo_monomial_matrix(&basis, &order, 0.0, t)?),
        ("Q", ops.vo_wavelet_matrix(&order, 0.0, t)?),
    ])
}

pub fn cmd_matrices(flags: Flags, out: &mut dyn Write) -> CliResult<()> {
    let cfg = Merged::new(flags)?;
    let k = cfg.k().unwrap_or(0);
    let m = need(cfg.m(), "M")?;
    let vartheta = need(cfg.vartheta(), "vartheta")?;
    let t = need(cfg.t(), "t")?;
    let mats = operational_matrices(k, m, vartheta, t)?;
    let dir = cfg.out().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    for (name, mat) in mats {
        let path = dir.join(format!("{name}.csv"));
        write_file(&path, &mat.to_csv())?;
        writeln!(out, "{name} {}", path.display()).map_err(stdout_err)?;
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(f) => cmd_solve(f, out),
        Command::Table(f) => cmd_table(f, out),
        Command::Matrices(f) => cmd_matrices(f, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
