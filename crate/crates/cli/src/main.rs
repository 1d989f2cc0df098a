//! `cassini`: command-line driver for Cassinian metric experiments.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on precondition or range
//! errors, 3 when a computation is not supported for the inputs.

mod parse;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cassini::analysis::{
    check_convexity_2d_with, explore_c_rho_conjecture, explore_convexity_constant,
    explore_starlikeness, verify_inclusion, InclusionTheorem,
};
use cassini::balls::{trace_2d, traces_to_svg, BallSpec, TraceOptions};
use cassini::metrics::distance;
use cassini::moebius::{distortion_experiment, Direction};
use cassini::{Domain, ErrorClass, Execution, MetricKind, Point};
use clap::{Parser, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Distance between --center and --point.
    Dist,
    /// Trace ball boundaries for each radius in --radius.
    Ball,
    /// Convexity report for each radius in --radius.
    Convexity,
    /// Verify an inclusion theorem at --center with parameter --t.
    Inclusion,
    /// Cassinian distortion under the Möbius map sending 0 to --center.
    Distortion,
    /// Conjecture explorers: convexity (default), starlike or c-rho.
    Conjecture,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "cassini",
    version,
    about = "Cassinian metric balls, distortion and inclusion experiments"
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Theorem id for `inclusion`, explorer name for `conjecture`.
    target: Option<String>,
    /// punctured-space[:ax,ay] | unit-ball | punctured-ball:ax,ay | half-space | sampled:<csvfile>
    #[arg(long)]
    domain: Option<String>,
    /// cassinian | j | rho | k | euclid
    #[arg(long, default_value = "cassinian")]
    metric: String,
    #[arg(long)]
    center: Option<String>,
    #[arg(long)]
    point: Option<String>,
    /// One radius or a comma-separated list.
    #[arg(long)]
    radius: Option<String>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    theorem: Option<String>,
    #[arg(long, default_value_t = 720)]
    rays: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap radius for rays that never leave the ball.
    #[arg(long)]
    cap: Option<f64>,
    #[arg(long, value_enum, default_value = "forward")]
    direction: DirectionArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Run every sweep on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Forward,
    Inverse,
}

enum Failure {
    Usage(String),
    Compute(cassini::Error),
    Io(String),
}

impl From<cassini::Error> for Failure {
    fn from(e: cassini::Error) -> Self {
        Failure::Compute(e)
    }
}

type Run<T = ()> = Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Run<T> {
    Err(Failure::Usage(msg.into()))
}

struct Ctx {
    cli: Cli,
    exec: Execution,
}

impl Ctx {
    fn center(&self, default: Option<Point>) -> Run<Point> {
        match (&self.cli.center, default) {
            (Some(s), _) => parse::point(s).map_err(Failure::Usage),
            (None, Some(p)) => Ok(p),
            (None, None) => usage("--center is required"),
        }
    }

    fn domain(&self, default: &str, dim: usize) -> Run<Domain> {
        parse::domain(self.cli.domain.as_deref().unwrap_or(default), dim).map_err(Failure::Usage)
    }

    fn metric(&self) -> Run<MetricKind> {
        MetricKind::parse(&self.cli.metric)
            .ok_or_else(|| Failure::Usage(format!("unknown metric '{}'", self.cli.metric)))
    }

    fn radii(&self) -> Run<Vec<f64>> {
        match &self.cli.radius {
            Some(s) => parse::numbers(s).map_err(Failure::Usage),
            None => usage("--radius is required"),
        }
    }

    fn trace_options(&self) -> TraceOptions {
        TraceOptions {
            rays: self.cli.rays,
            cap: self.cli.cap,
            exec: self.exec,
            ..Default::default()
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.cli.seed)
    }

    /// Write to --out, or to stdout when absent.
    fn emit(&self, text: &str) -> Run {
        match &self.cli.out {
            Some(path) => write_file(path, text),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())
                    .map_err(|e| Failure::Io(e.to_string()))
            }
        }
    }
}

fn write_file(path: &Path, text: &str) -> Run {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Round to 15 significant digits, printed in shortest form.
fn significant(v: f64) -> String {
    let rounded: f64 = format!("{v:.14e}").parse().unwrap_or(v);
    format!("{rounded}")
}

fn dist(ctx: &Ctx) -> Run {
    let x = ctx.center(None)?;
    let Some(y) = &ctx.cli.point else {
        return usage("--point is required");
    };
    let y = parse::point(y).map_err(Failure::Usage)?;
    let domain = ctx.domain("punctured-space", x.dim())?;
    let d = distance(&ctx.metric()?, &domain, &x, &y)?;
    ctx.emit(&format!("{}\n", significant(d)))
}

/// `<stem>-r<radius>.<ext>` next to `path`.
fn per_radius_path(path: &Path, radius: f64) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("ball");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}-r{radius}.{ext}"))
}

fn ball(ctx: &Ctx) -> Run {
    let x = ctx.center(Some(Point::xy(1.0, 0.0)))?;
    let domain = ctx.domain("punctured-space", x.dim())?;
    let metric = ctx.metric()?;
    let radii = ctx.radii()?;
    let opts = ctx.trace_options();
    let mut traces = Vec::with_capacity(radii.len());
    for &r in &radii {
        let spec = BallSpec::new(domain.clone(), metric.clone(), x.clone(), r)?;
        traces.push(trace_2d(&spec, &opts)?);
    }
    match ctx.cli.format.unwrap_or(Format::Csv) {
        Format::Svg => ctx.emit(&traces_to_svg(&traces)),
        Format::Json => ctx.emit(&json(&traces)),
        Format::Csv => match (&ctx.cli.out, traces.len()) {
            (Some(path), n) if n > 1 => {
                for t in &traces {
                    write_file(&per_radius_path(path, t.radius), &t.to_csv())?;
                }
                Ok(())
            }
            _ => {
                let blocks: Vec<String> = traces.iter().map(|t| t.to_csv()).collect();
                ctx.emit(&blocks.join("\n"))
            }
        },
    }
}

fn json_only(ctx: &Ctx) -> Run {
    match ctx.cli.format {
        None | Some(Format::Json) => Ok(()),
        Some(_) => usage("this command only writes JSON"),
    }
}

fn convexity(ctx: &Ctx) -> Run {
    json_only(ctx)?;
    let x = ctx.center(Some(Point::xy(1.0, 0.0)))?;
    let domain = ctx.domain("punctured-space", x.dim())?;
    let metric = ctx.metric()?;
    let opts = ctx.trace_options();
    let mut reports = Vec::new();
    for r in ctx.radii()? {
        let spec = BallSpec::new(domain.clone(), metric.clone(), x.clone(), r)?;
        reports.push(check_convexity_2d_with(&spec, &opts)?);
    }
    if reports.len() == 1 {
        ctx.emit(&json(&reports[0]))
    } else {
        ctx.emit(&json(&reports))
    }
}

fn inclusion(ctx: &Ctx) -> Run {
    json_only(ctx)?;
    let id = match (&ctx.cli.target, &ctx.cli.theorem) {
        (Some(a), Some(b)) if a != b => return usage("conflicting theorem ids"),
        (Some(id), _) | (None, Some(id)) => id,
        (None, None) => return usage("a theorem id is required"),
    };
    let theorem: InclusionTheorem = id.parse().map_err(|_| {
        let ids: Vec<&str> = InclusionTheorem::ALL.iter().map(|t| t.id()).collect();
        Failure::Usage(format!(
            "unknown theorem '{id}', expected one of {}",
            ids.join(", ")
        ))
    })?;
    let default_domain = match theorem {
        InclusionTheorem::CRho | InclusionTheorem::JRho | InclusionTheorem::CRhoRefined => {
            "unit-ball"
        }
        _ => "punctured-space",
    };
    let domain = ctx.domain(default_domain, ctx.center(Some(Point::xy(1.0, 0.0)))?.dim())?;
    let default_center = if default_domain == "unit-ball" {
        Point::origin(domain.dim())
    } else {
        Point::xy(1.0, 0.0)
    };
    let x = ctx.center(Some(default_center))?;
    let Some(t) = ctx.cli.t else {
        return usage("--t is required");
    };
    let mut rng = ctx.rng();
    let report = verify_inclusion(theorem, &domain, &x, t, ctx.cli.samples, &mut rng, ctx.exec)?;
    ctx.emit(&json(&report))
}

fn random_in_punctured_ball(rng: &mut ChaCha8Rng, dim: usize) -> Point {
    loop {
        let c: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let p = Point::new(c).expect("finite coordinates");
        if p.norm() < 1.0 && p.norm() > 0.0 {
            return p;
        }
    }
}

fn distortion(ctx: &Ctx) -> Run {
    json_only(ctx)?;
    let a = ctx.center(Some(Point::xy(0.5, 0.0)))?;
    let direction = match ctx.cli.direction {
        DirectionArg::Forward => Direction::Forward,
        DirectionArg::Inverse => Direction::Inverse,
    };
    let mut rng = ctx.rng();
    let dim = a.dim();
    let mut pairs = Vec::with_capacity(ctx.cli.samples);
    while pairs.len() < ctx.cli.samples {
        let (x, y) = (
            random_in_punctured_ball(&mut rng, dim),
            random_in_punctured_ball(&mut rng, dim),
        );
        // inverse pairs live in B \ {a}
        if direction == Direction::Inverse && (x == a || y == a) {
            continue;
        }
        pairs.push((x, y));
    }
    let report = distortion_experiment(&a, &pairs, direction, ctx.exec)?;
    ctx.emit(&json(&report))
}

fn conjecture(ctx: &Ctx) -> Run {
    json_only(ctx)?;
    match ctx.cli.target.as_deref().unwrap_or("convexity") {
        "convexity" => {
            let centers: Vec<Point> = match &ctx.cli.center {
                Some(_) => vec![ctx.center(None)?],
                None => (0..10)
                    .map(|i| Point::xy(0.7 * i as f64 - 3.0, 0.3 + 0.4 * i as f64))
                    .collect(),
            };
            let est = explore_convexity_constant(&centers, 1e-3, ctx.cli.rays, ctx.exec)?;
            ctx.emit(&json(&est))
        }
        "starlike" => {
            let x = ctx.center(Some(Point::xy(0.0, 1.0)))?;
            let domain = ctx.domain("half-space", x.dim())?;
            let radii = match &ctx.cli.radius {
                Some(_) => ctx.radii()?,
                None => vec![0.25, 0.5, 0.75, 1.0, 1.5, 2.0],
            };
            ctx.emit(&json(&explore_starlikeness(
                &domain,
                &x,
                &radii,
                ctx.cli.rays,
            )?))
        }
        "c-rho" => {
            let x = ctx.center(Some(Point::xy(0.0, 0.0)))?;
            let domain = ctx.domain("unit-ball", x.dim())?;
            let t = ctx.cli.t.unwrap_or(0.1);
            let mut rng = ctx.rng();
            ctx.emit(&json(&explore_c_rho_conjecture(
                &domain,
                &x,
                t,
                ctx.cli.samples,
                &mut rng,
                ctx.exec,
            )?))
        }
        other => usage(format!(
            "unknown explorer '{other}', expected convexity, starlike or c-rho"
        )),
    }
}

fn run(cli: Cli) -> Run {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let ctx = Ctx { cli, exec };
    if ctx.cli.target.is_some()
        && !matches!(ctx.cli.command, Command::Inclusion | Command::Conjecture)
    {
        return usage("unexpected positional argument");
    }
    match ctx.cli.command {
        Command::Dist => dist(&ctx),
        Command::Ball => ball(&ctx),
        Command::Convexity => convexity(&ctx),
        Command::Inclusion => inclusion(&ctx),
        Command::Distortion => distortion(&ctx),
        Command::Conjecture => conjecture(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            match e.class() {
                ErrorClass::Precondition => ExitCode::from(2),
                ErrorClass::Capability => ExitCode::from(3),
            }
        }
    }
}
