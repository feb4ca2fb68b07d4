//! Command-line front end: figure data as CSV or JSON, optional SVG plots,
//! and a numerical self-check.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::error::Error;
use crate::oracle::{law_schmidt, overlap_oracle};
use crate::plot::{HeatMap, LinePlot, Series, Style};
use crate::quasi2d::{quasi2d_entropy_curve, quasi2d_mapping, A_EFF_PREFACTOR};
use crate::schmidt::{
    coefficient_matrix, power_law_fit, schmidt_decompose, schmidt_orbital, schmidt_spectrum,
    BasisIndex, CoefficientRule, FIT_POINTS,
};
use crate::specfun::{digamma, s2, EULER_GAMMA};
use crate::spectrum::{ln_a_of_nu, linspace, nu_of_ln_a, spectrum_scan};
use crate::wavefn::radial_density;

const UNITS: &str = "lengths in a_ho = sqrt(hbar/(m omega)), energies in hbar omega";

#[derive(Debug, Parser)]
#[command(name = "trap2d", version, about = "Two bosons in a 2D harmonic trap: spectrum, entanglement and Schmidt orbitals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Where and how results are written.
#[derive(Debug, Clone, Args)]
pub struct OutputSpec {
    /// Output format [default: csv, json for `entropy`]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Also write an SVG plot next to the output file
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ν(ln a) on every branch
    #[command(allow_negative_numbers = true)]
    SpectrumScan {
        #[arg(long)]
        ln_a_min: f64,
        #[arg(long)]
        ln_a_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 3)]
        branches: usize,
        #[command(flatten)]
        out: OutputSpec,
    },
    /// Radial density 2πρ|ψ(ρ)|² for one or more couplings
    Density {
        /// Comma-separated list of ln a values
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        ln_a: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        branch: usize,
        #[arg(long, default_value_t = 4.0)]
        rho_max: f64,
        #[arg(long, default_value_t = 400)]
        points: usize,
        #[command(flatten)]
        out: OutputSpec,
    },
    /// Entanglement entropy, truncation deficit and leading Schmidt coefficients
    #[command(allow_negative_numbers = true)]
    Entropy {
        #[arg(long)]
        ln_a: f64,
        #[arg(long, default_value_t = 0)]
        branch: usize,
        #[arg(long, default_value_t = 60)]
        nmax: usize,
        #[arg(long, default_value_t = 10)]
        top: usize,
        /// Rescale Σλ² to one before taking the entropy
        #[arg(long)]
        renormalize: bool,
        #[command(flatten)]
        out: OutputSpec,
    },
    /// Entropy against ln a for one or more branches
    #[command(allow_negative_numbers = true)]
    EntropyScan {
        #[arg(long)]
        ln_a_min: f64,
        #[arg(long)]
        ln_a_max: f64,
        #[arg(long)]
        steps: usize,
        /// Comma-separated list of branches
        #[arg(long, value_delimiter = ',', default_value = "0")]
        branch: Vec<usize>,
        #[arg(long, default_value_t = 60)]
        nmax: usize,
        #[command(flatten)]
        out: OutputSpec,
    },
    /// Leading Schmidt coefficients, optionally with the power-law fit
    #[command(allow_negative_numbers = true)]
    Eigenvalues {
        #[arg(long)]
        ln_a: f64,
        #[arg(long, default_value_t = 0)]
        branch: usize,
        #[arg(long, default_value_t = 60)]
        nmax: usize,
        #[arg(long, default_value_t = 20)]
        top: usize,
        /// Fit λ_n = α n^β over the first 20 coefficients
        #[arg(long)]
        fit: bool,
        #[command(flatten)]
        out: OutputSpec,
    },
    /// Leading Schmidt orbitals on a square grid, one file per orbital
    #[command(allow_negative_numbers = true)]
    Orbitals {
        #[arg(long)]
        ln_a: f64,
        #[arg(long, default_value_t = 0)]
        branch: usize,
        #[arg(long, default_value_t = 60)]
        nmax: usize,
        #[arg(long, default_value_t = 4)]
        top: usize,
        #[arg(long, default_value_t = 4.0)]
        extent: f64,
        #[arg(long, default_value_t = 81)]
        grid: usize,
        #[command(flatten)]
        out: OutputSpec,
    },
    /// Effective 2D coupling of a pancake trap, optionally with entropies
    #[command(allow_negative_numbers = true)]
    Quasi2d {
        /// Aspect ratio ω_z/ω_⊥
        #[arg(long)]
        eta: f64,
        /// Single a_z/a_3D value
        #[arg(long, conflicts_with_all = ["ratio_min", "ratio_max", "steps"])]
        ratio: Option<f64>,
        #[arg(long, requires_all = ["ratio_max", "steps"])]
        ratio_min: Option<f64>,
        #[arg(long, requires_all = ["ratio_min", "steps"])]
        ratio_max: Option<f64>,
        #[arg(long, requires_all = ["ratio_min", "ratio_max"])]
        steps: Option<usize>,
        /// Evaluate the true-2D entropy at each effective coupling
        #[arg(long)]
        entropy: bool,
        /// Comma-separated list of branches used with --entropy
        #[arg(long, value_delimiter = ',', default_value = "0")]
        branch: Vec<usize>,
        #[arg(long, default_value_t = 60)]
        nmax: usize,
        #[command(flatten)]
        out: OutputSpec,
    },
    /// Closed-form anchors and cross-checks against independent oracles
    Verify {
        /// Coarser oracle grids and smaller bases
        #[arg(long)]
        fast: bool,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
    Numeric(Error),
    VerifyFailed,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numeric(e)
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code: 0 on success, 1 when `verify` finds a failing check,
/// 2 for argument, input/output and numerical errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(CliError::VerifyFailed) => 1,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Numeric(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Twelve significant digits, exponent form, locale independent.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        x.to_string()
    }
}

fn json_num(x: f64) -> Value {
    fmt_num(x)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone)]
enum Cell {
    Int(i64),
    Num(f64),
    Opt(Option<f64>),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => fmt_num(*x),
            Cell::Opt(Some(x)) => fmt_num(*x),
            Cell::Opt(None) => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Num(x) | Cell::Opt(Some(x)) => json_num(*x),
            Cell::Opt(None) => Value::Null,
        }
    }
}

#[derive(Debug, Clone)]
enum Meta {
    Text(String),
    Int(i64),
    Num(f64),
    List(Vec<f64>),
}

impl Meta {
    fn csv(&self) -> String {
        match self {
            Meta::Text(s) => s.clone(),
            Meta::Int(i) => i.to_string(),
            Meta::Num(x) => fmt_num(*x),
            Meta::List(v) => v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(" "),
        }
    }

    fn json(&self) -> Value {
        match self {
            Meta::Text(s) => Value::from(s.clone()),
            Meta::Int(i) => Value::from(*i),
            Meta::Num(x) => json_num(*x),
            Meta::List(v) => Value::Array(v.iter().map(|x| json_num(*x)).collect()),
        }
    }
}

enum Plot {
    Line(LinePlot),
    Heat(HeatMap),
}

struct Report {
    command: &'static str,
    meta: Vec<(&'static str, Meta)>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    plot: Option<Plot>,
}

impl Report {
    fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Self {
            command,
            meta: vec![("units", Meta::Text(UNITS.into()))],
            columns,
            rows: Vec::new(),
            plot: None,
        }
    }

    fn meta(&mut self, key: &'static str, value: Meta) -> &mut Self {
        self.meta.push((key, value));
        self
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = String::new();
                let _ = writeln!(s, "# trap2d {} {}", env!("CARGO_PKG_VERSION"), self.command);
                for (k, v) in &self.meta {
                    let _ = writeln!(s, "# {k}: {}", v.csv());
                }
                let _ = writeln!(s, "{}", self.columns.join(","));
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    let _ = writeln!(s, "{}", cells.join(","));
                }
                s
            }
            Format::Json => {
                let mut root = Map::new();
                for (k, v) in &self.meta {
                    root.insert((*k).into(), v.json());
                }
                root.insert("command".into(), Value::from(self.command));
                root.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
                root.insert(
                    "columns".into(),
                    Value::Array(self.columns.iter().map(|c| Value::from(*c)).collect()),
                );
                root.insert(
                    "rows".into(),
                    Value::Array(
                        self.rows
                            .iter()
                            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                            .collect(),
                    ),
                );
                let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(report: &Report, out: &OutputSpec, default: Format) -> Result<(), CliError> {
    let format = out.format.unwrap_or(default);
    if out.plot && out.output.is_none() {
        return Err(CliError::Usage("--plot requires --output".into()));
    }
    let text = report.render(format);
    match &out.output {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    if out.plot {
        let path = out.output.as_ref().expect("checked").with_extension("svg");
        let svg = match &report.plot {
            Some(Plot::Line(p)) => p.to_svg(),
            Some(Plot::Heat(h)) => h.to_svg(),
            None => return Err(CliError::Usage(format!("{} has no plot", report.command))),
        };
        write_file(&path, &svg)?;
    }
    Ok(())
}

fn positive(name: &str, v: usize) -> Result<(), CliError> {
    if v == 0 {
        Err(CliError::Usage(format!("--{name} must be positive")))
    } else {
        Ok(())
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::SpectrumScan {
            ln_a_min,
            ln_a_max,
            steps,
            branches,
            out,
        } => {
            positive("steps", steps)?;
            positive("branches", branches)?;
            let rows = spectrum_scan(ln_a_min, ln_a_max, steps, branches)?;
            let mut r = Report::new("spectrum-scan", vec!["ln_a", "branch", "nu", "energy"]);
            r.meta("energy", Meta::Text("relative-motion energy 2 nu + 1".into()))
                .meta("branches", Meta::Int(branches as i64));
            let mut series = Vec::new();
            for b in 0..branches {
                let pts: Vec<(f64, f64)> =
                    rows.iter().filter(|s| s.branch == b).map(|s| (s.ln_a, s.nu)).collect();
                series.push(Series::new(format!("branch {b}"), pts, Style::Line));
            }
            for k in 0..branches {
                series.push(Series::new(
                    format!("nu = {k}"),
                    vec![(ln_a_min, k as f64), (ln_a_max, k as f64)],
                    Style::Dashed,
                ));
            }
            r.rows = rows
                .iter()
                .map(|s| vec![Cell::Num(s.ln_a), Cell::Int(s.branch as i64), Cell::Num(s.nu), Cell::Num(s.energy)])
                .collect();
            r.plot = Some(Plot::Line(LinePlot {
                title: "Energy spectrum".into(),
                x_label: "ln a".into(),
                y_label: "nu".into(),
                series,
                y_range: Some((-2.0, branches as f64)),
                ..Default::default()
            }));
            emit(&r, &out, Format::Csv)
        }
        Command::Density {
            ln_a,
            branch,
            rho_max,
            points,
            out,
        } => {
            let mut r = Report::new("density", vec!["ln_a", "rho", "density"]);
            r.meta("normalization", Meta::Text("density = 2 pi rho |psi(rho)|^2, integral over rho equals 1".into()))
                .meta("branch", Meta::Int(branch as i64));
            let mut series = Vec::new();
            for &l in &ln_a {
                let nu = nu_of_ln_a(l, branch)?.nu;
                let prof = radial_density(nu, rho_max, points)?;
                for (rho, d) in prof.rho.iter().zip(&prof.density) {
                    r.rows.push(vec![Cell::Num(l), Cell::Num(*rho), Cell::Num(*d)]);
                }
                let pts = prof.rho.iter().copied().zip(prof.density.iter().copied()).collect();
                series.push(Series::new(format!("ln a = {l}"), pts, Style::Line));
            }
            r.plot = Some(Plot::Line(LinePlot {
                title: "Radial density".into(),
                x_label: "rho".into(),
                y_label: "2 pi rho |psi|^2".into(),
                series,
                ..Default::default()
            }));
            emit(&r, &out, Format::Csv)
        }
        Command::Entropy {
            ln_a,
            branch,
            nmax,
            top,
            renormalize,
            out,
        } => {
            let nu = nu_of_ln_a(ln_a, branch)?.nu;
            let sp = schmidt_spectrum(&coefficient_matrix(nu, nmax)?, renormalize)?;
            let head: Vec<f64> = sp.lambdas.iter().copied().take(top).collect();
            let mut r = Report::new("entropy", vec!["k", "lambda"]);
            r.meta("ln_a", Meta::Num(ln_a))
                .meta("branch", Meta::Int(branch as i64))
                .meta("nu", Meta::Num(nu))
                .meta("n_max", Meta::Int(nmax as i64))
                .meta("renormalized", Meta::Text(renormalize.to_string()))
                .meta("entropy", Meta::Num(sp.entropy))
                .meta("deficit", Meta::Num(sp.deficit))
                .meta("lambdas", Meta::List(head.clone()));
            r.rows = head
                .iter()
                .enumerate()
                .map(|(k, l)| vec![Cell::Int(k as i64 + 1), Cell::Num(*l)])
                .collect();
            emit(&r, &out, Format::Json)
        }
        Command::EntropyScan {
            ln_a_min,
            ln_a_max,
            steps,
            branch,
            nmax,
            out,
        } => {
            positive("steps", steps)?;
            if steps >= 2 && !(ln_a_min < ln_a_max) {
                return Err(CliError::Usage("--ln-a-min must be below --ln-a-max".into()));
            }
            let grid = linspace(ln_a_min, ln_a_max, steps);
            let mut r = Report::new("entropy-scan", vec!["ln_a", "branch", "nu", "entropy", "deficit"]);
            r.meta("n_max", Meta::Int(nmax as i64))
                .meta("entropy", Meta::Text("-sum lambda^2 ln lambda^2 over the truncated basis".into()));
            let mut series = Vec::new();
            for &b in &branch {
                let mut pts = Vec::new();
                for &l in &grid {
                    let nu = nu_of_ln_a(l, b)?.nu;
                    let sp = schmidt_spectrum(&coefficient_matrix(nu, nmax)?, false)?;
                    r.rows.push(vec![
                        Cell::Num(l),
                        Cell::Int(b as i64),
                        Cell::Num(nu),
                        Cell::Num(sp.entropy),
                        Cell::Num(sp.deficit),
                    ]);
                    pts.push((l, sp.entropy));
                }
                series.push(Series::new(format!("branch {b}"), pts, Style::Line));
            }
            r.plot = Some(Plot::Line(LinePlot {
                title: "Von Neumann entropy".into(),
                x_label: "ln a".into(),
                y_label: "S".into(),
                series,
                ..Default::default()
            }));
            emit(&r, &out, Format::Csv)
        }
        Command::Eigenvalues {
            ln_a,
            branch,
            nmax,
            top,
            fit,
            out,
        } => {
            positive("top", top)?;
            let nu = nu_of_ln_a(ln_a, branch)?.nu;
            let sp = schmidt_spectrum(&coefficient_matrix(nu, nmax)?, false)?;
            let head: Vec<f64> = sp.lambdas.iter().copied().take(top).collect();
            let mut r = Report::new("eigenvalues", vec!["n", "lambda"]);
            r.meta("ln_a", Meta::Num(ln_a))
                .meta("branch", Meta::Int(branch as i64))
                .meta("nu", Meta::Num(nu))
                .meta("n_max", Meta::Int(nmax as i64));
            let mut series = vec![Series::new(
                "lambda_n",
                head.iter().enumerate().map(|(i, l)| ((i + 1) as f64, *l)).collect(),
                Style::Markers,
            )];
            if fit {
                let f = power_law_fit(&sp.lambdas)?;
                r.meta("fit", Meta::Text(format!("lambda_n = alpha n^beta over n = 1..{FIT_POINTS}")))
                    .meta("alpha", Meta::Num(f.alpha))
                    .meta("beta", Meta::Num(f.beta))
                    .meta("r_squared", Meta::Num(f.r_squared));
                let pts = (1..=head.len().max(FIT_POINTS))
                    .map(|n| (n as f64, f.alpha * (n as f64).powf(f.beta)))
                    .collect();
                series.push(Series::new("fit", pts, Style::Dashed));
            }
            r.rows = head
                .iter()
                .enumerate()
                .map(|(i, l)| vec![Cell::Int(i as i64 + 1), Cell::Num(*l)])
                .collect();
            r.plot = Some(Plot::Line(LinePlot {
                title: format!("Schmidt coefficients, ln a = {ln_a}"),
                x_label: "n".into(),
                y_label: "lambda_n".into(),
                series,
                log_x: true,
                log_y: true,
                ..Default::default()
            }));
            emit(&r, &out, Format::Csv)
        }
        Command::Orbitals {
            ln_a,
            branch,
            nmax,
            top,
            extent,
            grid,
            out,
        } => {
            positive("top", top)?;
            let Some(stem) = out.output.clone() else {
                return Err(CliError::Usage("orbitals writes one file per orbital and needs --output".into()));
            };
            let nu = nu_of_ln_a(ln_a, branch)?.nu;
            let d = schmidt_decompose(&coefficient_matrix(nu, nmax)?, false)?;
            let format = out.format.unwrap_or(Format::Csv);
            let ext = match format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            for k in 0..top.min(d.basis.len()) {
                let field = schmidt_orbital(&d, k, extent, grid)?;
                let mut r = Report::new("orbitals", vec!["x", "y", "value"]);
                r.meta("ln_a", Meta::Num(ln_a))
                    .meta("branch", Meta::Int(branch as i64))
                    .meta("n_max", Meta::Int(nmax as i64))
                    .meta("orbital", Meta::Int(k as i64 + 1))
                    .meta("lambda", Meta::Num(d.eigenvalues[k].abs()))
                    .meta("eigenvalue", Meta::Num(d.eigenvalues[k]))
                    .meta("normalization", Meta::Text("unit L2 norm over the plane".into()));
                for iy in 0..grid {
                    for ix in 0..grid {
                        r.rows.push(vec![
                            Cell::Num(field.coord(ix)),
                            Cell::Num(field.coord(iy)),
                            Cell::Num(field.at(ix, iy)),
                        ]);
                    }
                }
                r.plot = Some(Plot::Heat(HeatMap {
                    title: format!("Orbital {}, lambda = {:.4}", k + 1, d.eigenvalues[k].abs()),
                    extent,
                    n: grid,
                    values: field.values.clone(),
                }));
                let name = format!(
                    "{}_{}.{ext}",
                    stem.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
                    k + 1
                );
                let path = stem.with_file_name(name);
                let sp = OutputSpec {
                    format: Some(format),
                    output: Some(path),
                    plot: out.plot,
                };
                emit(&r, &sp, format)?;
            }
            Ok(())
        }
        Command::Quasi2d {
            eta,
            ratio,
            ratio_min,
            ratio_max,
            steps,
            entropy,
            branch,
            nmax,
            out,
        } => {
            let ratios = match (ratio, ratio_min, ratio_max, steps) {
                (Some(x), None, None, None) => vec![x],
                (None, Some(lo), Some(hi), Some(n)) => {
                    positive("steps", n)?;
                    if n >= 2 && !(lo < hi) {
                        return Err(CliError::Usage("--ratio-min must be below --ratio-max".into()));
                    }
                    linspace(lo, hi, n)
                }
                _ => {
                    return Err(CliError::Usage(
                        "give either --ratio or all of --ratio-min, --ratio-max, --steps".into(),
                    ))
                }
            };
            let mut r = Report::new("quasi2d", vec!["ratio", "ln_a_eff", "branch", "entropy"]);
            r.meta("eta", Meta::Num(eta))
                .meta("eta_convention", Meta::Text("eta = omega_z/omega_perp, a_perp = a_z sqrt(eta)".into()))
                .meta("prefactor", Meta::Text(format!("{A_EFF_PREFACTOR}")))
                .meta("ratio", Meta::Text("a_z/a_3D".into()))
                .meta("ln_a_eff", Meta::Text("ln(a_eff/a_perp)".into()));
            let mut series = Vec::new();
            if entropy {
                r.meta("n_max", Meta::Int(nmax as i64));
                for &b in &branch {
                    let rows = quasi2d_entropy_curve(eta, &ratios, b, nmax)?;
                    for p in &rows {
                        r.rows.push(vec![Cell::Num(p.ratio), Cell::Num(p.ln_a_eff), Cell::Int(b as i64), Cell::Opt(p.entropy)]);
                    }
                    series.push(Series::new(
                        format!("branch {b}"),
                        rows.iter().map(|p| (p.ln_a_eff, p.entropy.unwrap_or(f64::NAN))).collect(),
                        Style::Markers,
                    ));
                }
            } else {
                r.columns = vec!["ratio", "ln_a_eff"];
                let rows = quasi2d_mapping(eta, &ratios)?;
                for p in &rows {
                    r.rows.push(vec![Cell::Num(p.ratio), Cell::Num(p.ln_a_eff)]);
                }
                series.push(Series::new("ln a_eff", rows.iter().map(|p| (p.ratio, p.ln_a_eff)).collect(), Style::Line));
            }
            r.plot = Some(Plot::Line(if entropy {
                LinePlot {
                    title: format!("Quasi-2D overlay, eta = {eta}"),
                    x_label: "ln a_eff".into(),
                    y_label: "S".into(),
                    series,
                    ..Default::default()
                }
            } else {
                LinePlot {
                    title: format!("Effective coupling, eta = {eta}"),
                    x_label: "a_z/a_3D".into(),
                    y_label: "ln(a_eff/a_perp)".into(),
                    series,
                    ..Default::default()
                }
            }));
            emit(&r, &out, Format::Csv)
        }
        Command::Verify { fast } => {
            let checks = verify_checks(fast)?;
            let mut failed = 0;
            println!("{:<6} {:<44} {:>20} {:>20} {:>10} {:>9}", "status", "check", "value", "expected", "tolerance", "seconds");
            for c in &checks {
                let pass = (c.value - c.expected).abs() <= c.tol;
                if !pass {
                    failed += 1;
                }
                println!(
                    "{:<6} {:<44} {:>20} {:>20} {:>10.1e} {:>9.2}",
                    if pass { "PASS" } else { "FAIL" },
                    c.name,
                    fmt_num(c.value),
                    fmt_num(c.expected),
                    c.tol,
                    c.seconds
                );
            }
            println!("{} checks, {failed} failed", checks.len());
            if failed > 0 {
                Err(CliError::VerifyFailed)
            } else {
                Ok(())
            }
        }
    }
}

struct Check {
    name: String,
    value: f64,
    expected: f64,
    tol: f64,
    seconds: f64,
}

fn verify_checks(fast: bool) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    let mut add = |name: &str, start: Instant, value: f64, expected: f64, tol: f64| {
        out.push(Check {
            name: name.into(),
            value,
            expected,
            tol,
            seconds: start.elapsed().as_secs_f64(),
        });
    };
    let ln2 = std::f64::consts::LN_2;

    let t = Instant::now();
    add("digamma(1) = -gamma", t, digamma(1.0)?, -EULER_GAMMA, 1e-13);
    let t = Instant::now();
    add("digamma(1/2) = -gamma - 2 ln 2", t, digamma(0.5)?, -EULER_GAMMA - 2.0 * ln2, 1e-13);
    let t = Instant::now();
    add("digamma(-1/2) = 2 - gamma - 2 ln 2", t, digamma(-0.5)?, 2.0 - EULER_GAMMA - 2.0 * ln2, 1e-13);

    let t = Instant::now();
    let anchor = 1.5 * ln2 - 0.5 * EULER_GAMMA;
    add("nu(3/2 ln 2 - gamma/2, branch 0) = -1/2", t, nu_of_ln_a(anchor, 0)?.nu, -0.5, 1e-10);

    let t = Instant::now();
    let mut worst = 0.0f64;
    for branch in 0..4 {
        for l in linspace(-4.0, 4.0, 17) {
            let nu = nu_of_ln_a(l, branch)?.nu;
            worst = worst.max((ln_a_of_nu(nu)? - l).abs());
        }
    }
    add("spectrum round trip, max |residual|", t, worst, 0.0, 1e-10);

    let t = Instant::now();
    let nu = nu_of_ln_a(-0.5359, 0)?.nu;
    let c00 = 1.0 / (nu * s2(nu)?.sqrt());
    let o = overlap_oracle(nu, BasisIndex::new(0, 0), BasisIndex::new(0, 0))?;
    add("C_00 closed form vs 4D quadrature", t, o, c00, 1e-4);
    if !fast {
        let t = Instant::now();
        let rule = CoefficientRule::new(nu, 4)?;
        let (m, n) = (BasisIndex::new(2, 0), BasisIndex::new(0, 2));
        add("C_(2,0),(0,2) vs 4D quadrature", t, overlap_oracle(nu, m, n)?, rule.entry(m, n), 1e-4);
    }

    let (nodes, n_max) = if fast { (200, 60) } else { (400, 60) };
    for ln_a in [3.0, 5.0] {
        let t = Instant::now();
        let nu = nu_of_ln_a(ln_a, 0)?.nu;
        let law = law_schmidt(nu, 40, nodes, 10.0)?;
        let cart = schmidt_spectrum(&coefficient_matrix(nu, n_max)?, false)?;
        // both sides converge slowly in the basis/grid size; 1e-2 covers
        // the residual truncation at these sizes
        add(&format!("entropy kernel vs cartesian, ln a = {ln_a}"), t, law.entropy, cart.entropy, 1e-2);
        add(&format!("leading lambda kernel vs cartesian, ln a = {ln_a}"), t, law.lambdas()[0], cart.lambdas[0], 1e-3);
    }

    let t = Instant::now();
    let crit = quasi2d_mapping(20.0, &[0.0])?[0].ln_a_eff;
    add("quasi-2D critical ln a_eff, eta = 20", t, crit, -0.7597, 1e-3);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(-0.5), "-5.00000000000e-1");
        assert_eq!(fmt_num(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(json_num(1.0 / 3.0), serde_json::json!(0.333333333333));
        assert_eq!(json_num(f64::NAN), Value::Null);
    }

    #[test]
    fn argument_errors_exit_with_two() {
        assert_eq!(run(["trap2d", "no-such-command"]), 2);
        assert_eq!(run(["trap2d", "entropy", "--ln-a", "abc"]), 2);
        assert_eq!(run(["trap2d", "spectrum-scan", "--ln-a-min", "0"]), 2);
        assert_eq!(run(["trap2d", "quasi2d", "--eta", "20"]), 2);
        assert_eq!(run(["trap2d", "quasi2d", "--eta", "20", "--ratio", "0", "--plot"]), 2);
        assert_eq!(run(["trap2d", "--help"]), 0);
    }
}
