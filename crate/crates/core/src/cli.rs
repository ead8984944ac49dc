//! Command-line front end.
//!
//! Every pipeline subcommand writes into the `--out` directory:
//! `complex.jsonl` (header record, then one record per cell), `summary.json`,
//! and, when the run completed, `diagram.json` (or `diagram.csv`). The
//! summary is also printed on stdout.
//!
//! Exit codes: 0 on success, 2 when the approximation cannot be decided
//! (no diagram is written), 1 on any error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::approximation::{self, ApproxError, BoundKind, DumpHeader, PCApprox, Status, DEFAULT_MAX_DEPTH};
use crate::cwcomplex::CellRecord;
use crate::expression::{FunctionError, VectorFunction};
use crate::interval::IntervalBox;
use crate::metrics::{self, MetricError};
use crate::persistence::{self, PersistenceDiagram, PersistenceError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_CANNOT_DECIDE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid domain: {0}")]
    Domain(String),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Approximation(#[from] ApproxError),
    #[error(transparent)]
    Persistence(#[from] PersistenceError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("cannot configure worker threads: {0}")]
    Threads(String),
}

#[derive(Debug, Parser)]
#[command(name = "rigor-persist", version, about = "Certified piecewise-constant approximation and persistent homology")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Refine the domain until every cell meets the tolerance.
    Approximate(JobArgs),
    /// Approximate, then compute the persistence diagram of the lower-star filtration.
    Persist(JobArgs),
    /// Spend a fixed subdivision budget, then report the certified error bound.
    Greedy(JobArgs),
    /// Distance between two diagram files.
    Distance(DistanceArgs),
    /// Draw a diagram or a one-dimensional approximation as SVG.
    Plot(PlotArgs),
    /// Run a job with the mode given as a flag.
    Run(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Approximate,
    Persist,
    Greedy,
    Distance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Bottleneck,
    Wasserstein,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiagramFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct JobArgs {
    /// Function component; repeat for vector-valued functions.
    #[arg(long = "f", value_name = "EXPR")]
    pub functions: Vec<String>,
    /// Comma-separated variable names (default: x, y, z, or x1, x2, ...).
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
    /// Domain box as "a,b;c,d;...".
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
    /// Certified sup-norm tolerance.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Number of subdivisions for the greedy mode.
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    pub max_depth: usize,
    /// Per-axis periodicity flags, e.g. "0,1".
    #[arg(long, value_delimiter = ',')]
    pub periodic: Option<Vec<u8>>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for range evaluation.
    #[arg(long, env = "RIGOR_PERSIST_THREADS")]
    pub threads: Option<usize>,
    /// Keep diagram points whose persistence is within the error bound.
    #[arg(long)]
    pub keep_short: bool,
    #[arg(long, value_enum, default_value_t = DiagramFormat::Json)]
    pub format: DiagramFormat,
}

#[derive(Debug, Clone, Args)]
pub struct DistanceArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    #[arg(long, value_enum, default_value_t = Metric::Bottleneck)]
    pub metric: Metric,
    /// Wasserstein degree.
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    /// Diagram (JSON or CSV) or approximation dump (JSONL).
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Width of the dashed band above the diagonal (diagrams only).
    #[arg(long)]
    pub eps: Option<f64>,
    /// Function to overlay on a one-dimensional approximation.
    #[arg(long = "f", value_name = "EXPR")]
    pub function: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Diagram files for the distance mode.
    #[arg(long = "diagram", value_name = "PATH")]
    pub diagrams: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Metric::Bottleneck)]
    pub metric: Metric,
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    #[command(flatten)]
    pub job: JobArgs,
}

#[derive(Debug, Serialize)]
struct Summary {
    mode: &'static str,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_bound: Option<f64>,
    ambient_dim: usize,
    value_dim: usize,
    cell_counts: Vec<usize>,
    top_cells: usize,
    unresolved: Vec<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagram_points: Option<usize>,
}

/// Parses arguments, runs, reports errors on stderr, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Approximate(job) => run_job(Mode::Approximate, &job),
        Command::Persist(job) => run_job(Mode::Persist, &job),
        Command::Greedy(job) => run_job(Mode::Greedy, &job),
        Command::Distance(d) => cmd_distance(&d.first, &d.second, d.metric, d.q),
        Command::Plot(p) => cmd_plot(&p),
        Command::Run(r) => match r.mode {
            Mode::Distance => match &r.diagrams[..] {
                [a, b] => cmd_distance(a, b, r.metric, r.q),
                _ => Err(CliError::Usage("distance mode needs exactly two --diagram files".into())),
            },
            mode => run_job(mode, &r.job),
        },
    }
}

fn default_vars(n: usize) -> Vec<String> {
    match n {
        1 => vec!["x".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        _ => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

pub fn parse_domain(text: &str) -> Result<IntervalBox, CliError> {
    let bad = |m: String| CliError::Domain(m);
    let bounds = text
        .split(';')
        .map(|axis| {
            let parts: Vec<&str> = axis.split(',').map(str::trim).collect();
            let [a, b] = parts[..] else {
                return Err(bad(format!("axis `{axis}` is not of the form `a,b`")));
            };
            let a: f64 = a.parse().map_err(|_| bad(format!("`{a}` is not a number")))?;
            let b: f64 = b.parse().map_err(|_| bad(format!("`{b}` is not a number")))?;
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(bad(format!("axis [{a}, {b}] must be finite with a < b")));
            }
            Ok((a, b))
        })
        .collect::<Result<Vec<_>, _>>()?;
    IntervalBox::from_bounds(&bounds).map_err(|e| bad(e.to_string()))
}

fn configure_threads(threads: Option<usize>) -> Result<(), CliError> {
    if let Some(n) = threads {
        // a second configuration in the same process keeps the first pool
        if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() && rayon::current_num_threads() != n {
            return Err(CliError::Threads(format!("worker pool already running with {} threads", rayon::current_num_threads())));
        }
    }
    Ok(())
}

/// Writes to stdout, ignoring a closed pipe.
fn print_line(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn run_job(mode: Mode, job: &JobArgs) -> Result<i32, CliError> {
    if job.functions.is_empty() {
        return Err(CliError::Usage("at least one --f expression is required".into()));
    }
    let domain = parse_domain(
        job.domain
            .as_deref()
            .ok_or_else(|| CliError::Usage("--domain is required".into()))?,
    )?;
    configure_threads(job.threads)?;
    let vars = job.vars.clone().unwrap_or_else(|| default_vars(domain.dim()));
    let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
    let f = VectorFunction::parse(&job.functions, &vars)?;
    let periodic: Vec<bool> = match &job.periodic {
        None => vec![false; domain.dim()],
        Some(flags) if flags.len() == domain.dim() && flags.iter().all(|&b| b <= 1) => {
            flags.iter().map(|&b| b == 1).collect()
        }
        Some(flags) => {
            return Err(CliError::Usage(format!(
                "--periodic needs one 0/1 flag per axis ({} axes), got {flags:?}",
                domain.dim()
            )))
        }
    };

    let approx = match mode {
        Mode::Approximate | Mode::Persist => {
            if job.budget.is_some() {
                return Err(CliError::Usage("--budget applies only to the greedy mode".into()));
            }
            let eps = job.eps.ok_or_else(|| CliError::Usage("--eps is required".into()))?;
            approximation::approximate_complex(&f, &domain, eps, job.max_depth, &periodic)?
        }
        Mode::Greedy => {
            if job.eps.is_some() {
                return Err(CliError::Usage("--eps does not apply to the greedy mode; use --budget".into()));
            }
            let budget = job.budget.ok_or_else(|| CliError::Usage("--budget is required".into()))?;
            approximation::greedy(&f, &domain, budget, &periodic)?.approx
        }
        Mode::Distance => unreachable!("distance jobs are dispatched separately"),
    };

    let diagram = match mode {
        Mode::Approximate | Mode::Distance => None,
        _ if !approx.is_complete() => None,
        _ if f.output_dim() > 1 => None,
        _ => {
            let full = persistence::compute_persistence(&persistence::lower_star(&approx)?)?;
            Some(if job.keep_short {
                full
            } else {
                persistence::filter_short(&full, approx.epsilon())
            })
        }
    };

    let summary = summarize(mode, &approx, diagram.as_ref());
    let summary_json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    if let Some(dir) = &job.out {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.clone(),
            source,
        })?;
        let mut dump = Vec::new();
        approx.write_dump(&mut dump).expect("writing to memory");
        write_file(&dir.join("complex.jsonl"), &dump)?;
        if f.output_dim() > 1 && approx.is_complete() {
            let mut multi = Vec::new();
            persistence::export_multifiltration(&approx, &mut multi)?;
            write_file(&dir.join("multifiltration.jsonl"), &multi)?;
        }
        if let Some(d) = &diagram {
            match job.format {
                DiagramFormat::Json => write_file(&dir.join("diagram.json"), d.to_json().as_bytes())?,
                DiagramFormat::Csv => write_file(&dir.join("diagram.csv"), d.to_csv().as_bytes())?,
            }
        }
        write_file(&dir.join("summary.json"), summary_json.as_bytes())?;
    }
    print_line(&summary_json);
    if let (None, Mode::Persist | Mode::Greedy) = (&diagram, mode) {
        if approx.is_complete() {
            eprintln!("note: vector-valued functions have no diagram; see multifiltration.jsonl");
        }
    }
    Ok(match approx.status() {
        Status::Complete => EXIT_OK,
        Status::CannotDecide => {
            eprintln!(
                "cannot decide: {} cell(s) did not meet the tolerance within depth {}",
                approx.unresolved().len(),
                job.max_depth
            );
            EXIT_CANNOT_DECIDE
        }
    })
}

fn summarize(mode: Mode, approx: &PCApprox, diagram: Option<&PersistenceDiagram>) -> Summary {
    let (epsilon, error_bound) = match approx.bound_kind() {
        BoundKind::Epsilon => (Some(approx.epsilon()), None),
        BoundKind::ErrorBound => (None, Some(approx.epsilon())),
    };
    Summary {
        mode: match mode {
            Mode::Approximate => "approximate",
            Mode::Persist => "persist",
            Mode::Greedy => "greedy",
            Mode::Distance => "distance",
        },
        status: approx.status(),
        epsilon,
        error_bound,
        ambient_dim: approx.domain().dim(),
        value_dim: approx.function().output_dim(),
        cell_counts: approx.complex().map(|c| c.counts_by_dim()).unwrap_or_default(),
        top_cells: approx.top_count(),
        unresolved: approx
            .unresolved()
            .iter()
            .map(|r| r.axes.iter().map(|&(a, b)| [a, b]).collect())
            .collect(),
        diagram_points: diagram.map(PersistenceDiagram::len),
    }
}

pub fn read_diagram(path: &Path) -> Result<PersistenceDiagram, CliError> {
    let text = read_file(path)?;
    let parsed = if path.extension().is_some_and(|e| e == "csv") {
        PersistenceDiagram::from_csv(&text)
    } else {
        PersistenceDiagram::from_json(&text)
    };
    parsed.map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn cmd_distance(a: &Path, b: &Path, metric: Metric, q: f64) -> Result<i32, CliError> {
    let (da, db) = (read_diagram(a)?, read_diagram(b)?);
    let d = match metric {
        Metric::Bottleneck => metrics::bottleneck(&da, &db),
        Metric::Wasserstein => metrics::wasserstein(&da, &db, q)?,
    };
    print_line(&d.to_string());
    Ok(EXIT_OK)
}

fn cmd_plot(args: &PlotArgs) -> Result<i32, CliError> {
    let text = read_file(&args.input)?;
    let input_error = |message: String| CliError::Input {
        path: args.input.clone(),
        message,
    };
    let is_diagram = args.input.extension().is_some_and(|e| e == "csv") || text.trim_start().starts_with('[');
    let svg = if is_diagram {
        diagram_svg(&read_diagram(&args.input)?, args.eps.unwrap_or(0.0))
    } else {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: DumpHeader = lines
            .next()
            .ok_or_else(|| input_error("empty file".into()))
            .and_then(|l| serde_json::from_str(l).map_err(|e| input_error(format!("bad header: {e}"))))?;
        if header.kind != "header" || header.ambient_dim != 1 || header.value_dim != 1 {
            return Err(input_error(
                "only one-dimensional scalar approximations can be plotted".into(),
            ));
        }
        let records: Vec<CellRecord> = lines
            .map(|l| serde_json::from_str(l).map_err(|e| input_error(format!("bad cell record: {e}"))))
            .collect::<Result<_, _>>()?;
        let overlay = match &args.function {
            Some(expr) => {
                let vars = args.vars.clone().unwrap_or_else(|| default_vars(1));
                let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
                Some(VectorFunction::scalar(expr, &vars)?)
            }
            None => None,
        };
        step_svg(&records, overlay.as_ref()).map_err(input_error)?
    };
    write_file(&args.out, svg.as_bytes())?;
    Ok(EXIT_OK)
}

const SIZE: f64 = 400.0;
const MARGIN: f64 = 40.0;

/// Affine map from data coordinates to the plot square.
struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        let pad = |(a, b): (f64, f64)| {
            if b > a {
                (a, b)
            } else {
                (a - 0.5, b + 0.5)
            }
        };
        Frame { x: pad(x), y: pad(y) }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (SIZE - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        SIZE - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (SIZE - 2.0 * MARGIN)
    }

    fn axes(&self, svg: &mut String, xlabel: &str, ylabel: &str) {
        let (lo, hi) = (MARGIN, SIZE - MARGIN);
        let _ = writeln!(svg, r#"<rect x="{lo}" y="{lo}" width="{w}" height="{w}" fill="none" stroke="black"/>"#, w = hi - lo);
        for (v, anchor, x, y) in [
            (self.x.0, "start", lo, hi + 15.0),
            (self.x.1, "end", hi, hi + 15.0),
        ] {
            let _ = writeln!(svg, r#"<text x="{x}" y="{y}" font-size="10" text-anchor="{anchor}">{}</text>"#, fmt_num(v));
        }
        for (v, y) in [(self.y.0, hi), (self.y.1, lo + 10.0)] {
            let _ = writeln!(svg, r#"<text x="{}" y="{y}" font-size="10" text-anchor="end">{}</text>"#, lo - 4.0, fmt_num(v));
        }
        let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{xlabel}</text>"#, SIZE / 2.0, SIZE - 8.0);
        let _ = writeln!(
            svg,
            r#"<text x="12" y="{c}" font-size="12" text-anchor="middle" transform="rotate(-90 12 {c})">{ylabel}</text>"#,
            c = SIZE / 2.0
        );
    }
}

fn fmt_num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn svg_open() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// Birth/death scatter with the diagonal and a dashed line at offset `eps`;
/// essential classes sit on the top border, marked "∞".
pub fn diagram_svg(diagram: &PersistenceDiagram, eps: f64) -> String {
    let mut values: Vec<f64> = diagram.points().iter().map(|p| p.birth).collect();
    values.extend(diagram.points().iter().filter(|p| !p.is_essential()).map(|p| p.death));
    let (lo, hi) = match (values.iter().copied().reduce(f64::min), values.iter().copied().reduce(f64::max)) {
        (Some(a), Some(b)) => (a, b + eps),
        _ => (0.0, 1.0),
    };
    let span = (hi - lo).max(1e-9);
    let range = (lo - 0.05 * span, hi + 0.1 * span);
    let frame = Frame::new(range, range);
    let mut svg = svg_open();
    frame.axes(&mut svg, "birth", "death");
    let (a, b) = frame.x;
    let _ = writeln!(
        svg,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray"/>"#,
        frame.px(a),
        frame.py(a),
        frame.px(b),
        frame.py(b)
    );
    if eps > 0.0 {
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray" stroke-dasharray="4 3"/>"#,
            frame.px(a),
            frame.py(a + eps),
            frame.px(b - eps),
            frame.py(b)
        );
    }
    for p in diagram.points() {
        let x = frame.px(p.birth);
        if p.is_essential() {
            let y = MARGIN;
            let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y}" r="3.5" fill="red"/>"#);
            let _ = writeln!(svg, r#"<text x="{:.2}" y="{}" font-size="11" text-anchor="middle">∞</text>"#, x, y - 6.0);
        } else {
            let color = if p.dim == 0 { "blue" } else { "green" };
            let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, frame.py(p.death));
        }
    }
    svg.push_str("</svg>\n");
    svg
}

/// Step plot of a one-dimensional approximation; dots mark the value at
/// breakpoints (the minimum of the adjacent steps).
pub fn step_svg(records: &[CellRecord], overlay: Option<&VectorFunction>) -> Result<String, String> {
    let mut steps: Vec<(f64, f64, f64)> = Vec::new();
    let mut vertices: Vec<(f64, Option<f64>)> = Vec::new();
    for r in records {
        let [a, b] = *r.axes.first().ok_or("cell without axes")?;
        match r.dim {
            1 => {
                let v = r.value.as_ref().and_then(|v| v.first().copied());
                steps.push((a, b, v.ok_or("the approximation has unvalued cells")?));
            }
            0 => vertices.push((a, None)),
            _ => return Err("unexpected cell dimension".into()),
        }
    }
    if steps.is_empty() {
        return Err("no valued cells".into());
    }
    steps.sort_by(|p, q| p.0.total_cmp(&q.0));
    for v in &mut vertices {
        v.1 = steps
            .iter()
            .filter(|s| s.0 <= v.0 && v.0 <= s.1)
            .map(|s| s.2)
            .reduce(f64::min);
    }
    let x = (steps[0].0, steps.iter().map(|s| s.1).fold(f64::MIN, f64::max));
    let samples: Vec<(f64, f64)> = match overlay {
        Some(f) => (0..=400)
            .filter_map(|i| {
                let t = x.0 + (x.1 - x.0) * i as f64 / 400.0;
                f.eval_point(&[t]).ok().map(|v| (t, v[0]))
            })
            .collect(),
        None => Vec::new(),
    };
    let ys = steps.iter().map(|s| s.2).chain(samples.iter().map(|s| s.1));
    let (ylo, yhi) = ys.fold((f64::MAX, f64::MIN), |(a, b), y| (a.min(y), b.max(y)));
    let span = (yhi - ylo).max(1e-9);
    let frame = Frame::new(x, (ylo - 0.05 * span, yhi + 0.05 * span));
    let mut svg = svg_open();
    frame.axes(&mut svg, "x", "value");
    if !samples.is_empty() {
        let path: Vec<String> = samples
            .iter()
            .map(|&(t, v)| format!("{:.2},{:.2}", frame.px(t), frame.py(v)))
            .collect();
        let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="blue"/>"#, path.join(" "));
    }
    for &(a, b, v) in &steps {
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="red" stroke-width="2"/>"#,
            frame.px(a),
            frame.px(b),
            y = frame.py(v)
        );
    }
    vertices.sort_by(|p, q| p.0.total_cmp(&q.0));
    for (t, v) in vertices {
        if let Some(v) = v {
            let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="red"/>"#, frame.px(t), frame.py(v));
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
