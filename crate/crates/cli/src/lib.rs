//! Command-line front end: argument parsing, config files, text records and
//! exit codes. `run` does all the work so tests can drive it in-process.

use clap::{Args, Parser, Subcommand};
use ihp_core::arith::PrimeSet;
use ihp_core::cubic::{classify, rational_flexes, singular_points, PlaneCubic, SingularKind};
use ihp_core::lattice::{cyclic_cover_kernel, hat_divisor, simply_connected, BlowupConfig};
use ihp_core::points::generate::{double_fibration_generate_with, Exec};
use ihp_core::points::{
    is_integral, search_integral_points, single_fibration_generate, Budget, DoubleFibration,
    GenerationReport, IntegralityContext, SearchCurve,
};
use ihp_core::projgeo::{CurvePencil, HomogForm, ProjPoint};
use ihp_core::surface::{
    common_plane, rational_lines, BlowupSurface, ConicFibration, CubicSurface, SurfaceLine,
};
use ihp_core::Error;
use num_bigint::BigInt;
use serde::Deserialize;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_GEOMETRY: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Input(String),
    Geometry(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Geometry(_) => EXIT_GEOMETRY,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) | CliError::Input(m) | CliError::Geometry(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Parse(_) => CliError::Parse(msg),
            Error::AmbientMismatch(_)
            | Error::OnDivisor
            | Error::ComponentOverlap
            | Error::NotOnCurve => CliError::Geometry(msg),
            _ => CliError::Input(msg),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "ihp",
    version,
    about = "Integral points on complements of plane cubics and cubic surfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the record here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Class, singular points and rational flexes of a cubic.
    Classify { cubic: PathBuf },
    /// Rational lines of w³ = F.
    Lines { cubic: PathBuf },
    /// Fibers of the conic fibration through points of a rational line.
    Beukers {
        cubic: PathBuf,
        /// Flex line under the axis (default: the first rational line).
        #[arg(long)]
        axis: Option<String>,
        #[arg(long, default_value_t = 20)]
        height: u64,
        #[arg(long, default_value_t = 20)]
        fibers: usize,
    },
    /// Pell-orbit point generation from a TOML config.
    Generate {
        config: PathBuf,
        #[command(flatten)]
        opts: GenOpts,
    },
    /// Simple connectivity of a blow-up complement and its cyclic covers.
    Topology { config: PathBuf },
    /// Re-check a point file against an integrality context.
    Verify {
        context: PathBuf,
        points: PathBuf,
        #[arg(long)]
        primes: Option<String>,
    },
}

#[derive(Args, Debug, Default)]
pub struct GenOpts {
    /// Comma-separated primes in S.
    #[arg(long)]
    pub primes: Option<String>,
    #[arg(long)]
    pub height: Option<u64>,
    #[arg(long)]
    pub budget_points: Option<usize>,
    #[arg(long)]
    pub budget_fibers: Option<usize>,
    #[arg(long)]
    pub orbit_len: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Process fibers on one thread.
    #[arg(long)]
    pub sequential: bool,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn read_cubic(path: &Path) -> CliResult<PlaneCubic> {
    Ok(PlaneCubic::parse(&read(path)?)?)
}

fn parse_primes(s: &str) -> CliResult<PrimeSet> {
    let primes = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| CliError::Parse(format!("bad prime {t:?}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(PrimeSet::new(primes)?)
}

fn point(v: &[i64]) -> CliResult<ProjPoint> {
    Ok(ProjPoint::from_ints(v)?)
}

fn form(s: &str, nvars: usize) -> CliResult<HomogForm> {
    Ok(HomogForm::parse_expr(s, nvars)?)
}

pub fn load_config<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    toml::from_str(&read(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Classify { cubic } => cmd_classify(&read_cubic(cubic)?),
        Command::Lines { cubic } => cmd_lines(&read_cubic(cubic)?),
        Command::Beukers {
            cubic,
            axis,
            height,
            fibers,
        } => cmd_beukers(&read_cubic(cubic)?, axis.as_deref(), *height, *fibers),
        Command::Generate { config, opts } => {
            Ok(cmd_generate(&load_config(config)?, opts)?.to_text())
        }
        Command::Topology { config } => cmd_topology(&load_config(config)?),
        Command::Verify {
            context,
            points,
            primes,
        } => cmd_verify(&load_config(context)?, &read(points)?, primes.as_deref()),
    }
}

pub fn cmd_classify(d: &PlaneCubic) -> CliResult<String> {
    let class = classify(d)?;
    let sing = singular_points(d)?;
    // flexes are only asked of irreducible cubics
    let flexes = if class.is_irreducible() {
        rational_flexes(d)?
    } else {
        Vec::new()
    };
    let mut s = String::new();
    let _ = writeln!(s, "cubic: {d}");
    let _ = writeln!(s, "class: {class}");
    let _ = writeln!(s, "singular_points: {}", sing.len());
    if class.is_irreducible() {
        let _ = writeln!(s, "flexes: {}", flexes.len());
    } else {
        let fac = d.factorization();
        let _ = writeln!(s, "flexes: n/a");
        s.push_str("[components]\n");
        for l in &fac.lines {
            let _ = writeln!(s, "{l}");
        }
        if fac.rest.degree() > 0 {
            let _ = writeln!(s, "{}", fac.rest);
        }
    }
    s.push_str("[singular]\n");
    for p in &sing {
        let kind = match p.kind {
            SingularKind::Node => "node",
            SingularKind::Cusp => "cusp",
            SingularKind::Triple => "triple",
        };
        let _ = writeln!(s, "{} {kind} {}", p.point, p.multiplicity);
    }
    s.push_str("[flexes]\n");
    for f in &flexes {
        let _ = writeln!(
            s,
            "{} {} {}",
            f.point,
            f.line,
            if f.smooth { "smooth" } else { "singular" }
        );
    }
    Ok(s)
}

pub fn cmd_lines(d: &PlaneCubic) -> CliResult<String> {
    let lines = rational_lines(&CubicSurface::new(d.clone()))?;
    let plane = common_plane(&lines)?;
    let mut s = String::new();
    let _ = writeln!(s, "lines: {}", lines.len());
    let _ = writeln!(s, "coplanar: {}", plane.is_some());
    if let Some(p) = &plane {
        let _ = writeln!(s, "plane: {p}");
    }
    s.push_str("[lines]\n");
    for l in &lines {
        let [a, b] = l.plane_forms()?;
        let _ = writeln!(s, "{a} = {b} = 0");
    }
    Ok(s)
}

fn axis_line(d: &PlaneCubic, axis: Option<&str>) -> CliResult<SurfaceLine> {
    let lines = rational_lines(&CubicSurface::new(d.clone()))?;
    match axis {
        None => lines
            .into_iter()
            .next()
            .ok_or_else(|| CliError::Input("the surface has no rational line".into())),
        Some(a) => {
            let f = form(a, 3)?;
            lines
                .into_iter()
                .find(|l| l.flexline.proportional(&f))
                .ok_or_else(|| CliError::Input(format!("no rational line over the flex line {a}")))
        }
    }
}

pub fn cmd_beukers(
    d: &PlaneCubic,
    axis: Option<&str>,
    height: u64,
    fibers: usize,
) -> CliResult<String> {
    let l = axis_line(d, axis)?;
    let mu = ConicFibration::new(CubicSurface::new(d.clone()), l.clone())?;
    let ctx = IntegralityContext::surface(d, PrimeSet::empty());
    let seeds = search_integral_points(&SearchCurve::Line3(l.param()?), &ctx, height)?;
    let mut seen = BTreeSet::new();
    let mut s = String::new();
    let mut body = String::new();
    for p in seeds {
        if seen.len() == fibers {
            break;
        }
        let c = mu.fiber_through(&p)?;
        if !seen.insert(c.u.clone()) {
            continue;
        }
        let profile = if c.degenerate {
            "degenerate".to_string()
        } else {
            c.tangency_profile(d)?
                .iter()
                .map(|(f, k)| format!("{}x{k}", f.degree()))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(body, "{} {} {} | {profile}", c.u.0, c.u.1, c.plane_conic);
    }
    let _ = writeln!(s, "axis: {}", l.flexline);
    let _ = writeln!(s, "fibers: {}", seen.len());
    s.push_str("[fibers]\n");
    s.push_str(&body);
    Ok(s)
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    pub points: Option<usize>,
    pub fibers: Option<usize>,
    pub orbit: Option<usize>,
    pub rounds: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
pub enum Seeds {
    /// "axis": integral points of the axis line up to the height bound.
    Named(String),
    Points(Vec<Vec<i64>>),
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct GenerateConfig {
    /// "double" (default) or "single".
    pub mode: Option<String>,
    pub cubic: Option<String>,
    /// Centre of the λ line pencil.
    pub blown: Option<Vec<i64>>,
    /// Flex line under the μ axis.
    pub axis: Option<String>,
    /// Single mode: the two generators of a conic pencil and the divisor.
    pub pencil: Option<[String; 2]>,
    pub divisor: Option<String>,
    pub seeds: Seeds,
    #[serde(default)]
    pub primes: Vec<u64>,
    pub height: Option<u64>,
    pub threshold: Option<usize>,
    #[serde(default)]
    pub budget: BudgetConfig,
}

fn budget_of(cfg: &GenerateConfig, opts: &GenOpts) -> Budget {
    let d = Budget::default();
    Budget {
        max_points: opts
            .budget_points
            .or(cfg.budget.points)
            .unwrap_or(d.max_points),
        max_fibers: opts
            .budget_fibers
            .or(cfg.budget.fibers)
            .unwrap_or(d.max_fibers),
        height: opts.height.or(cfg.height).unwrap_or(d.height),
        orbit_len: opts.orbit_len.or(cfg.budget.orbit).unwrap_or(d.orbit_len),
        rounds: cfg.budget.rounds.unwrap_or(d.rounds),
        seed: opts.seed.or(cfg.budget.seed).unwrap_or(d.seed),
    }
}

fn explicit_seeds(seeds: &Seeds) -> CliResult<Vec<ProjPoint>> {
    match seeds {
        Seeds::Points(v) => v.iter().map(|p| point(p)).collect(),
        Seeds::Named(n) => Err(CliError::Input(format!("seed source {n:?} needs an axis"))),
    }
}

pub fn cmd_generate(cfg: &GenerateConfig, opts: &GenOpts) -> CliResult<GenerationReport> {
    let s = match &opts.primes {
        Some(p) => parse_primes(p)?,
        None => PrimeSet::new(cfg.primes.clone())?,
    };
    let budget = budget_of(cfg, opts);
    let k = cfg.threshold.unwrap_or(5);
    let exec = if opts.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    let rep = match cfg.mode.as_deref().unwrap_or("double") {
        "double" => {
            let d = PlaneCubic::parse(
                cfg.cubic
                    .as_deref()
                    .ok_or_else(|| CliError::Input("missing cubic".into()))?,
            )?;
            let p = point(
                cfg.blown
                    .as_deref()
                    .ok_or_else(|| CliError::Input("missing blown point".into()))?,
            )?;
            let l = axis_line(&d, cfg.axis.as_deref())?;
            let mu = ConicFibration::new(CubicSurface::new(d.clone()), l.clone())?;
            let df = DoubleFibration::new(mu, BlowupSurface::new(d.clone(), p)?, s.clone())?;
            let seeds = match &cfg.seeds {
                Seeds::Named(n) if n == "axis" => {
                    let ctx = IntegralityContext::surface(&d, s);
                    search_integral_points(&SearchCurve::Line3(l.param()?), &ctx, budget.height)?
                }
                other => explicit_seeds(other)?,
            };
            double_fibration_generate_with(&df, &seeds, &budget, k, exec)?
        }
        "single" => {
            let [g, h] = cfg
                .pencil
                .as_ref()
                .ok_or_else(|| CliError::Input("single mode needs a pencil".into()))?;
            let pencil = CurvePencil::new(form(g, 3)?, form(h, 3)?)?;
            let div = form(
                cfg.divisor
                    .as_deref()
                    .ok_or_else(|| CliError::Input("missing divisor".into()))?,
                3,
            )?;
            let ctx = IntegralityContext::plane(&div, s)?;
            single_fibration_generate(&pencil, &ctx, &explicit_seeds(&cfg.seeds)?, &budget, k)?
        }
        m => return Err(CliError::Input(format!("unknown mode {m:?}"))),
    };
    Ok(rep)
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct TopologyConfig {
    pub cubic: String,
    #[serde(default)]
    pub points: Vec<Vec<i64>>,
}

pub fn cmd_topology(cfg: &TopologyConfig) -> CliResult<String> {
    let d = PlaneCubic::parse(&cfg.cubic)?;
    let pts = cfg
        .points
        .iter()
        .map(|p| point(p))
        .collect::<CliResult<Vec<_>>>()?;
    let bc = BlowupConfig::new(d.clone(), pts)?;
    let hat = hat_divisor(&bc)?;
    let mut s = String::new();
    let _ = writeln!(s, "cubic: {d}");
    let _ = writeln!(s, "class: {}", bc.class);
    let _ = writeln!(s, "blown_points: {}", bc.n());
    let _ = writeln!(s, "valid: {}", hat.valid);
    if !hat.valid {
        return Err(CliError::Input(format!(
            "{s}a blown point is off D or a triple point of D"
        )));
    }
    let t = simply_connected(&bc)?;
    let _ = writeln!(s, "hat_class: {}", hat.class);
    let _ = writeln!(s, "simply_connected: {}", t.simply_connected);
    let _ = writeln!(s, "reason: {}", t.reason);
    let divs: Vec<String> = t.elementary_divisors.iter().map(i64::to_string).collect();
    let _ = writeln!(s, "elementary_divisors: {}", divs.join(" "));
    let _ = writeln!(s, "smith_route: {}", t.snf_simply_connected);
    s.push_str("[components]\n");
    for c in &hat.components {
        let _ = writeln!(s, "{c}");
    }
    s.push_str("[kernels]\n");
    for n in 2..=12 {
        let k = cyclic_cover_kernel(&hat.components, n)?;
        let gens: Vec<String> = k
            .iter()
            .map(|v| {
                format!(
                    "({})",
                    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
                )
            })
            .collect();
        let _ = writeln!(
            s,
            "{n} {}",
            if gens.is_empty() {
                "none".to_string()
            } else {
                gens.join(" ")
            }
        );
    }
    Ok(s)
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// plane, surface, blowup or blowup-e.
    pub ambient: String,
    /// The cubic, or for the plane any divisor form.
    pub divisor: String,
    pub blown: Option<Vec<i64>>,
    #[serde(default)]
    pub primes: Vec<u64>,
}

/// Integer tuples, one per line; headers, `key: value` lines, section
/// markers and comments are skipped.
pub fn parse_point_lines(text: &str) -> CliResult<Vec<ProjPoint>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with('[') || t.contains(':') {
            continue;
        }
        let v = t
            .split_whitespace()
            .map(|x| {
                x.parse::<BigInt>()
                    .map_err(|_| CliError::Parse(format!("bad point line {t:?}")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        out.push(ProjPoint::from_big(&v)?);
    }
    Ok(out)
}

pub fn cmd_verify(cfg: &VerifyConfig, points: &str, primes: Option<&str>) -> CliResult<String> {
    let s = match primes {
        Some(p) => parse_primes(p)?,
        None => PrimeSet::new(cfg.primes.clone())?,
    };
    let plane_ctx;
    let other_ctx;
    let ctx = match cfg.ambient.as_str() {
        "plane" => {
            plane_ctx = IntegralityContext::plane(&form(&cfg.divisor, 3)?, s)?;
            &plane_ctx
        }
        a @ ("surface" | "blowup" | "blowup-e") => {
            let d = PlaneCubic::parse(&cfg.divisor)?;
            other_ctx = match a {
                "surface" => IntegralityContext::surface(&d, s),
                _ => {
                    let p = point(
                        cfg.blown
                            .as_deref()
                            .ok_or_else(|| CliError::Input("missing blown point".into()))?,
                    )?;
                    IntegralityContext::blowup(&d, &p, s, a == "blowup-e")?
                }
            };
            &other_ctx
        }
        a => return Err(CliError::Input(format!("unknown ambient {a:?}"))),
    };
    let pts = parse_point_lines(points)?;
    let mut failed = Vec::new();
    let mut geometric = false;
    for p in &pts {
        match is_integral(p, ctx) {
            Ok(true) => {}
            Ok(false) => failed.push(format!("{p} not integral")),
            Err(e) => {
                failed.push(format!("{p} {e}"));
                geometric |= matches!(CliError::from(e), CliError::Geometry(_));
            }
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "checked: {}", pts.len());
    let _ = writeln!(out, "integral: {}", pts.len() - failed.len());
    let _ = writeln!(out, "failed: {}", failed.len());
    out.push_str("[failed]\n");
    for f in &failed {
        let _ = writeln!(out, "{f}");
    }
    match (failed.is_empty(), geometric) {
        (true, _) => Ok(out),
        (false, true) => Err(CliError::Geometry(out)),
        (false, false) => Err(CliError::Input(out)),
    }
}
