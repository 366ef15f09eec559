//! The `steklov` command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 solver failure,
//! 4 a verification gate failed.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};
use steklov_core::cuboid::DEFAULT_CONSISTENCY_TOL;
use steklov_core::rootfind::DEFAULT_TOL;
use steklov_core::{
    box_spectrum_with_tol, rect_spectrum, rect_spectrum_with_tol, BoxDomain, BoxSpectrum,
    BoxSweepRow, Family, RectDomain, RectSpectrum, RectSweepRow, DEFAULT_MULT_TOL,
};

use crate::output::{self, CandidateCheck, Format, Note, OracleCheck, OutputRecord, Table};
use crate::verify::{
    check_box_candidate, check_rect_candidate, convergence_study, fd_dtn_rect, VerifyError,
    DEFAULT_DENSITY_2D, DEFAULT_DENSITY_3D, ORACLE_GATE, RESIDUAL_GATE,
};

/// Shift applied to every eigenvalue by `verify --tamper`.
pub const TAMPER_SHIFT: f64 = 0.1;

#[derive(Debug, Parser)]
#[command(
    name = "steklov",
    version,
    about = "Steklov eigenvalues of rectangles and boxes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Root tolerance on the frequency (rect) or consistency tolerance of
    /// the linear families (box).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Relative distance under which eigenvalues count as equal.
    #[arg(long, global = true, default_value_t = DEFAULT_MULT_TOL)]
    pub mult_tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Write the output here instead of stdout; for sweeps, the CSV table.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum of [-1,1]x[-a,a], or of a width x height rectangle.
    Rect(RectArgs),
    /// Spectrum of the box [-a,a]x[-b,b]x[-c,c].
    Box(BoxArgs),
    /// First eigenvalue and invariant over a grid of shapes.
    Sweep {
        #[command(subcommand)]
        target: SweepTarget,
    },
    /// Residual, Rayleigh and oracle checks of the computed eigenpairs.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = true)]
pub struct RectArgs {
    /// Half-height of [-1,1]x[-a,a], in (0, 1].
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["width", "height"])]
    pub a: Option<f64>,
    /// Full side length along x.
    #[arg(long, allow_negative_numbers = true, requires = "height")]
    pub width: Option<f64>,
    /// Full side length along y.
    #[arg(long, allow_negative_numbers = true, requires = "width")]
    pub height: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct BoxArgs {
    /// Half-lengths a b c.
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"], required = true, allow_negative_numbers = true)]
    pub dims: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum SweepTarget {
    /// Rectangles [-1,1]x[-a,a] over a grid of a.
    Rect(GridArgs),
    /// Boxes [-a,a]x[-b,b]x[-1,1] over a grid of a <= b.
    Box(GridArgs),
}

/// Inclusive evenly spaced grid per axis. One value applies to every axis.
#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Smallest value [default: max/steps].
    #[arg(long, num_args = 1..=2, allow_negative_numbers = true)]
    pub min: Vec<f64>,
    /// Largest value [default: 1].
    #[arg(long, num_args = 1..=2, allow_negative_numbers = true)]
    pub max: Vec<f64>,
    /// Number of grid points.
    #[arg(long, num_args = 1..=2, required = true)]
    pub steps: Vec<usize>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyTarget {
    /// Check every rectangle eigenpair, optionally against the DtN oracle.
    Rect(VerifyRectArgs),
    /// Check every nonconstant box eigenpair.
    Box(VerifyBoxArgs),
}

#[derive(Debug, Clone, Args)]
pub struct VerifyRectArgs {
    #[command(flatten)]
    pub rect: RectArgs,
    /// Also compare with the finite-difference DtN oracle on this grid.
    #[arg(long)]
    pub oracle_grid: Option<usize>,
    #[command(flatten)]
    pub common: VerifyCommon,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyBoxArgs {
    #[command(flatten)]
    pub dims: BoxArgs,
    #[command(flatten)]
    pub common: VerifyCommon,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyCommon {
    /// Shift every eigenvalue by 0.1 before checking (negative control).
    #[arg(long)]
    pub tamper: bool,
    /// Samples per unit length [default: 64 for rect, 16 for box].
    #[arg(long)]
    pub density: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Solver(_) => 3,
        }
    }
}

impl From<steklov_core::Error> for CliError {
    fn from(e: steklov_core::Error) -> Self {
        match e {
            steklov_core::Error::InvalidInput(_) => CliError::Invalid(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::InvalidInput(m) => CliError::Invalid(m),
            VerifyError::Solver(e) => e.into(),
            other => CliError::Solver(other.to_string()),
        }
    }
}

/// What a command produced, before rendering.
pub struct CommandOutput {
    pub record: OutputRecord,
    pub table: Table,
    pub human: String,
    /// False when a verification gate failed.
    pub passed: bool,
}

impl CommandOutput {
    pub fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Human => self.human.clone().into_bytes(),
            Format::Json => self.record.to_json().into_bytes(),
            Format::Csv => self.table.to_csv(),
        }
    }
}

/// Parses `args`, runs the command and writes its output.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Runs the parsed command; returns 0, or 4 when a gate failed.
pub fn run(cli: &Cli) -> Result<u8, CliError> {
    if !(cli.mult_tol >= 0.0) || !cli.mult_tol.is_finite() {
        return Err(CliError::Invalid(
            "--mult-tol must be a non-negative number".into(),
        ));
    }
    if let Some(t) = cli.tol {
        if !(t > 0.0) || !t.is_finite() {
            return Err(CliError::Invalid("--tol must be positive".into()));
        }
    }
    let output = execute(cli)?;
    let rendered = output.render(cli.format);
    match (&cli.command, &cli.out) {
        (Command::Sweep { .. }, Some(path)) => {
            std::fs::write(path, output.table.to_csv())?;
            write_stdout(&rendered)?;
        }
        (_, Some(path)) => std::fs::write(path, rendered)?,
        (_, None) => write_stdout(&rendered)?,
    }
    Ok(if output.passed { 0 } else { 4 })
}

fn write_stdout(bytes: &[u8]) -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(bytes)?;
    out.flush()
}

pub fn execute(cli: &Cli) -> Result<CommandOutput, CliError> {
    match &cli.command {
        Command::Rect(args) => cmd_rect(cli, args),
        Command::Box(args) => cmd_box(cli, args),
        Command::Sweep {
            target: SweepTarget::Rect(grid),
        } => cmd_sweep_rect(cli, grid),
        Command::Sweep {
            target: SweepTarget::Box(grid),
        } => cmd_sweep_box(cli, grid),
        Command::Verify {
            target: VerifyTarget::Rect(args),
        } => cmd_verify_rect(cli, args),
        Command::Verify {
            target: VerifyTarget::Box(args),
        } => cmd_verify_box(cli, args),
    }
}

/// The normalised rectangle and its scale, plus the echoed inputs.
fn rect_domain(args: &RectArgs) -> Result<(RectDomain, f64, Value), CliError> {
    match (args.a, args.width, args.height) {
        (Some(a), None, None) => {
            if !(a > 0.0 && a <= 1.0) {
                return Err(CliError::Invalid(format!(
                    "--a must lie in (0, 1], got {a}; use --width/--height for other shapes"
                )));
            }
            Ok((RectDomain::new(a)?, 1.0, json!({ "a": a })))
        }
        (None, Some(w), Some(h)) => {
            if !(w > 0.0 && h > 0.0) || !w.is_finite() || !h.is_finite() {
                return Err(CliError::Invalid("side lengths must be positive".into()));
            }
            let (d, scale) = RectDomain::from_sides(w, h)?;
            Ok((d, scale, json!({ "width": w, "height": h })))
        }
        _ => Err(CliError::Invalid(
            "give either --a or both --width and --height".into(),
        )),
    }
}

fn box_domain(args: &BoxArgs) -> Result<BoxDomain, CliError> {
    match args.dims[..] {
        [a, b, c] if [a, b, c].iter().all(|h| *h > 0.0 && h.is_finite()) => {
            Ok(BoxDomain::new(a, b, c)?)
        }
        _ => Err(CliError::Invalid(
            "--dims needs three positive half-lengths".into(),
        )),
    }
}

fn solve_rect(cli: &Cli, a: f64) -> steklov_core::Result<RectSpectrum> {
    rect_spectrum_with_tol(a, cli.mult_tol, cli.tol.unwrap_or(DEFAULT_TOL))
}

fn solve_box(cli: &Cli, dims: &BoxDomain) -> steklov_core::Result<BoxSpectrum> {
    box_spectrum_with_tol(
        dims,
        cli.mult_tol,
        cli.tol.unwrap_or(DEFAULT_CONSISTENCY_TOL),
    )
}

fn with_tols(cli: &Cli, mut inputs: Value, default_tol: f64) -> Value {
    inputs["tol"] = json!(cli.tol.unwrap_or(default_tol));
    inputs["mult_tol"] = json!(cli.mult_tol);
    inputs
}

fn cmd_rect(cli: &Cli, args: &RectArgs) -> Result<CommandOutput, CliError> {
    let (domain, scale, inputs) = rect_domain(args)?;
    let s = solve_rect(cli, domain.a())?;
    Ok(CommandOutput {
        record: OutputRecord::new(
            "rect",
            with_tols(cli, inputs, DEFAULT_TOL),
            output::rect_results(&s, scale),
            vec![],
        ),
        table: output::rect_table(&s),
        human: output::rect_human(&s, scale),
        passed: true,
    })
}

fn cmd_box(cli: &Cli, args: &BoxArgs) -> Result<CommandOutput, CliError> {
    let dims = box_domain(args)?;
    let s = solve_box(cli, &dims)?;
    Ok(CommandOutput {
        record: OutputRecord::new(
            "box",
            with_tols(cli, json!({ "dims": args.dims }), DEFAULT_CONSISTENCY_TOL),
            output::box_results(&s),
            output::box_notes(&s),
        ),
        table: output::box_table(&s),
        human: output::box_human(&s),
        passed: true,
    })
}

/// Inclusive evenly spaced grid with exact endpoints.
pub fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => vec![],
        1 => vec![max],
        n => (0..n)
            .map(|i| {
                if i == n - 1 {
                    max
                } else {
                    min + (max - min) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Grids for `axes` axes from the one- or two-valued flags.
fn grids(args: &GridArgs, axes: usize) -> Result<Vec<Vec<f64>>, CliError> {
    let too_many = |v: usize| v > axes;
    if too_many(args.min.len()) || too_many(args.max.len()) || too_many(args.steps.len()) {
        return Err(CliError::Invalid(format!(
            "this sweep takes one value per flag for {axes} axis"
        )));
    }
    let pick = |v: &[f64], k: usize| v.get(k).or(v.first()).copied();
    (0..axes)
        .map(|k| {
            let steps = *args
                .steps
                .get(k)
                .or(args.steps.first())
                .expect("steps is required");
            if steps == 0 {
                return Err(CliError::Invalid("--steps must be at least 1".into()));
            }
            let max = pick(&args.max, k).unwrap_or(1.0);
            let min = pick(&args.min, k).unwrap_or(max / steps as f64);
            if !(min > 0.0 && min <= max && max <= 1.0) {
                return Err(CliError::Invalid(format!(
                    "grid bounds must satisfy 0 < min <= max <= 1, got [{min}, {max}]"
                )));
            }
            Ok(linspace(min, max, steps))
        })
        .collect()
}

fn grid_inputs(cli: &Cli, g: &[Vec<f64>], default_tol: f64) -> Value {
    let axes: Vec<Value> = g
        .iter()
        .map(|v| json!({ "min": v.first(), "max": v.last(), "steps": v.len() }))
        .collect();
    with_tols(cli, json!({ "grid": axes }), default_tol)
}

fn cmd_sweep_rect(cli: &Cli, args: &GridArgs) -> Result<CommandOutput, CliError> {
    let g = grids(args, 1)?;
    let rows: Vec<RectSweepRow> = g[0]
        .par_iter()
        .map(|&a| RectSweepRow {
            a,
            outcome: solve_rect(cli, a),
        })
        .collect();
    let notes = rows
        .iter()
        .filter_map(|r| {
            r.outcome.as_ref().err().map(|e| Note {
                family: format!("a = {}", r.a),
                message: e.to_string(),
            })
        })
        .collect();
    Ok(CommandOutput {
        record: OutputRecord::new(
            "sweep rect",
            grid_inputs(cli, &g, DEFAULT_TOL),
            output::rect_sweep_results(&rows),
            notes,
        ),
        table: output::rect_sweep_table(&rows),
        human: output::rect_sweep_human(&rows),
        passed: true,
    })
}

fn cmd_sweep_box(cli: &Cli, args: &GridArgs) -> Result<CommandOutput, CliError> {
    let g = grids(args, 2)?;
    let cells: Vec<(f64, f64)> = g[0]
        .iter()
        .flat_map(|&a| g[1].iter().filter(move |&&b| b >= a).map(move |&b| (a, b)))
        .collect();
    let rows: Vec<BoxSweepRow> = cells
        .par_iter()
        .map(|&(a, b)| BoxSweepRow {
            a,
            b,
            outcome: BoxDomain::new(a, b, 1.0).and_then(|d| solve_box(cli, &d)),
        })
        .collect();
    let notes = rows
        .iter()
        .filter_map(|r| {
            r.outcome.as_ref().err().map(|e| Note {
                family: format!("a = {}, b = {}", r.a, r.b),
                message: e.to_string(),
            })
        })
        .collect();
    Ok(CommandOutput {
        record: OutputRecord::new(
            "sweep box",
            grid_inputs(cli, &g, DEFAULT_CONSISTENCY_TOL),
            output::box_sweep_results(&rows),
            notes,
        ),
        table: output::box_sweep_table(&rows),
        human: output::box_sweep_human(&rows),
        passed: true,
    })
}

fn density(common: &VerifyCommon, default: usize) -> Result<usize, CliError> {
    match common.density {
        Some(d) if d < 8 => Err(CliError::Invalid("--density must be at least 8".into())),
        Some(d) => Ok(d),
        None => Ok(default),
    }
}

fn shift(common: &VerifyCommon) -> f64 {
    if common.tamper {
        TAMPER_SHIFT
    } else {
        0.0
    }
}

fn check(label: String, sigma: f64, report: crate::verify::ResidualReport) -> CandidateCheck {
    CandidateCheck {
        candidate: label,
        sigma,
        worst: report.worst(),
        pass: report.passes(RESIDUAL_GATE),
        report,
    }
}

fn cmd_verify_rect(cli: &Cli, args: &VerifyRectArgs) -> Result<CommandOutput, CliError> {
    let (domain, scale, mut inputs) = rect_domain(&args.rect)?;
    let density = density(&args.common, DEFAULT_DENSITY_2D)?;
    let delta = shift(&args.common);
    let s = solve_rect(cli, domain.a())?;
    let checks = s
        .candidates
        .par_iter()
        .map(|c| {
            let sigma = c.sigma + delta;
            Ok(check(
                c.class.tag().to_string(),
                sigma,
                check_rect_candidate(c, sigma, density)?,
            ))
        })
        .collect::<Result<Vec<_>, VerifyError>>()?;
    let oracle = match args.oracle_grid {
        Some(n) => {
            let fd = fd_dtn_rect(domain.a(), n, 6)?;
            let exact = rect_spectrum(fd.a, cli.mult_tol)?.sigma1 + delta;
            let grids: Vec<usize> = if n / 2 >= 16 { vec![n / 2, n] } else { vec![n] };
            let convergence = convergence_study(domain.a(), &grids)?;
            Some(OracleCheck::new(fd, exact, ORACLE_GATE, convergence))
        }
        None => None,
    };
    inputs["oracle_grid"] = json!(args.oracle_grid);
    inputs["density"] = json!(density);
    inputs["tamper"] = json!(args.common.tamper);
    let target = json!({ "shape": "rect", "a": s.a, "scale": scale });
    let passed = output::verify_passed(&checks, oracle.as_ref());
    Ok(CommandOutput {
        record: OutputRecord::new(
            "verify rect",
            with_tols(cli, inputs, DEFAULT_TOL),
            output::verify_results(
                target,
                RESIDUAL_GATE,
                density,
                args.common.tamper,
                &checks,
                oracle.as_ref(),
            ),
            vec![],
        ),
        table: output::verify_table(&checks, oracle.as_ref()),
        human: output::verify_human(&checks, oracle.as_ref(), RESIDUAL_GATE),
        passed,
    })
}

fn cmd_verify_box(cli: &Cli, args: &VerifyBoxArgs) -> Result<CommandOutput, CliError> {
    let dims = box_domain(&args.dims)?;
    let density = density(&args.common, DEFAULT_DENSITY_3D)?;
    let delta = shift(&args.common);
    let s = solve_box(cli, &dims)?;
    let half = dims.half_lengths();
    let checks = s
        .candidates
        .par_iter()
        .filter(|c| c.family != Family::Constant)
        .map(|c| {
            let sigma = c.sigma + delta;
            Ok(check(
                c.family.label(),
                sigma,
                check_box_candidate(c, half, sigma, density)?,
            ))
        })
        .collect::<Result<Vec<_>, VerifyError>>()?;
    let mut notes = output::box_notes(&s);
    notes.push(Note {
        family: Family::Constant.label(),
        message: "trivial eigenvalue 0, not checked".into(),
    });
    let inputs = json!({
        "dims": args.dims.dims,
        "density": density,
        "tamper": args.common.tamper,
    });
    let target = json!({ "shape": "box", "dims": half });
    let passed = output::verify_passed(&checks, None);
    Ok(CommandOutput {
        record: OutputRecord::new(
            "verify box",
            with_tols(cli, inputs, DEFAULT_CONSISTENCY_TOL),
            output::verify_results(
                target,
                RESIDUAL_GATE,
                density,
                args.common.tamper,
                &checks,
                None,
            ),
            notes,
        ),
        table: output::verify_table(&checks, None),
        human: output::verify_human(&checks, None, RESIDUAL_GATE),
        passed,
    })
}
