mod figures;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use esetlab::curve_geometry::{c_intervals, meet_outcome, Branch, CurveFamily};
use esetlab::disc_sets::{gen_cantor_rset, gen_example1, gen_example2, gen_horocycle_lset, gen_random};
use esetlab::experiments::{self as ex, Outcome};
use esetlab::measure::{gauge_integral, projection, projection_integral, IntervalUnion};
use esetlab::{Ambient, ComplexPoint, DiscCollection, Error, Gauge};

#[derive(Parser)]
#[command(name = "esetlab", version, about = "Exceptional sets of disc collections along gauge curves")]
struct Cli {
    /// JSON configuration for the chosen experiment.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed override for randomized experiments.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; `ESETLAB_OUT` is used when absent. Without either, results go to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write an SVG rendering where one applies.
    #[arg(long, global = true)]
    svg: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cantor,
    Example1,
    Example2,
    Horocycle,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Upper,
    Lower,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "2.5")]
    TwoFive,
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
    #[value(name = "stolz")]
    Stolz,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a disc collection.
    Generate {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Validate a collection file against its tail budget.
    Validate { collection: PathBuf },
    /// Test one curve of a family against every disc of a collection.
    Intersect {
        collection: PathBuf,
        #[arg(long)]
        c: f64,
        /// Frame angle (plane) or boundary-point argument (unit disc).
        #[arg(long, default_value_t = 0.0)]
        angle: f64,
        #[arg(long, value_enum, default_value_t = BranchArg::Upper)]
        branch: BranchArg,
    },
    /// Per-disc c-intervals of a collection.
    Cinterval {
        collection: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        angle: f64,
    },
    /// Gauge integral of an interval union, or projection integral of a collection.
    Measure {
        /// Interval `LO,HI`; repeatable.
        #[arg(long = "interval", value_parser = parse_interval)]
        intervals: Vec<(f64, f64)>,
        #[arg(long)]
        collection: Option<PathBuf>,
        /// Gauge spec such as `identity`, `concave:0.5`, `stolz:1`, or a gauge JSON object.
        #[arg(long, default_value = "identity")]
        gauge: String,
    },
    /// Run a full experiment and compare against its bound.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
    },
    /// Cartan construction on seeded point sets.
    Cartan,
    /// Plane logarithmic-derivative experiment.
    Logderiv,
    /// Plane logarithmic-difference experiment.
    Logdiff,
    /// Unit-disc logarithmic-derivative experiment.
    LogderivDisc,
    /// Avoidance instances.
    Avoidance,
    /// Write the SVG figures.
    Figures,
}

#[derive(Debug)]
struct CliError {
    code: u8,
    kind: &'static str,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError { code: 3, kind: "invalid_input", message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Numeric(_) | Error::NoPoint(_) => (4, "numeric_failure"),
            Error::HypothesisFail(_) => (3, "hypothesis_failure"),
            Error::PreconditionFail(_) => (3, "precondition_failure"),
            _ => (3, "invalid_input"),
        };
        CliError { code, kind, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn parse_interval(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo = parse_number(a.trim())?;
    let hi = parse_number(b.trim())?;
    Ok((lo, hi))
}

/// Numbers, plus `e`, `e^k` and `pi` for convenience.
fn parse_number(s: &str) -> std::result::Result<f64, String> {
    match s {
        "e" => Ok(std::f64::consts::E),
        "pi" => Ok(std::f64::consts::PI),
        _ => {
            if let Some(k) = s.strip_prefix("e^") {
                return k.parse::<f64>().map(f64::exp).map_err(|e| e.to_string());
            }
            s.parse().map_err(|e: std::num::ParseFloatError| e.to_string())
        }
    }
}

fn parse_gauge(spec: &str) -> CliResult<Gauge> {
    if spec.trim_start().starts_with('{') {
        return serde_json::from_str(spec).map_err(|e| CliError::input(format!("gauge JSON: {e}")));
    }
    let (name, param) = match spec.split_once(':') {
        Some((n, p)) => (n, Some(p.parse::<f64>().map_err(|e| CliError::input(format!("gauge parameter: {e}")))?)),
        None => (spec, None),
    };
    let need = |p: Option<f64>| p.ok_or_else(|| CliError::input(format!("gauge {name} needs a parameter")));
    Ok(match name {
        "identity" => Gauge::identity(),
        "constant" => Gauge::constant(),
        "log" => Gauge::log(),
        "xlog" => Gauge::rapid_xlog(),
        "exp_inverse" => Gauge::unit_exp_inverse(),
        "concave" => Gauge::concave_power(need(param)?)?,
        "convex" => Gauge::convex_power(need(param)?)?,
        "rapid" => Gauge::rapid_power(need(param)?)?,
        "unit_concave" => Gauge::unit_concave_power(need(param)?)?,
        "unit_convex" => Gauge::unit_convex_power(need(param)?)?,
        "stolz" => Gauge::unit_stolz_power(need(param)?)?,
        _ => return Err(CliError::input(format!("unknown gauge {name}"))),
    })
}

/// Loads a config, rejecting randomized configs without a seed.
fn load_config<T: DeserializeOwned>(cli: &Cli, randomized: bool) -> CliResult<T> {
    let mut value = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            if !v.is_object() {
                return Err(CliError::input("config must be a JSON object"));
            }
            if randomized && v.get("seed").is_none() && cli.seed.is_none() {
                return Err(CliError::input("randomized experiments need a seed"));
            }
            v
        }
        None => json!({}),
    };
    if let (true, Some(seed)) = (randomized, cli.seed) {
        value["seed"] = json!(seed);
    }
    serde_json::from_value(value).map_err(|e| CliError::input(format!("config: {e}")))
}

fn load_collection(path: &Path) -> CliResult<DiscCollection> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn out_dir(cli: &Cli) -> Option<PathBuf> {
    cli.out.clone().or_else(|| std::env::var_os("ESETLAB_OUT").map(PathBuf::from))
}

fn write_file(dir: &Path, name: &str, content: &str) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, content).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

/// Writes `<name>.json` (or `.csv` when CSV is requested and available) to the
/// output directory, or to stdout.
fn emit(cli: &Cli, name: &str, value: &impl Serialize, csv: Option<String>) -> CliResult<()> {
    let (ext, body) = match (cli.format, csv) {
        (Format::Csv, Some(csv)) => ("csv", csv),
        (Format::Csv, None) => return Err(CliError::input(format!("{name} has no CSV form"))),
        (Format::Json, _) => {
            let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::input(e.to_string()))?;
            s.push('\n');
            ("json", s)
        }
    };
    match out_dir(cli) {
        Some(dir) => write_file(&dir, &format!("{name}.{ext}"), &body),
        None => {
            use std::io::Write;
            match std::io::stdout().lock().write_all(body.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(CliError { code: 4, kind: "output", message: e.to_string() })
                }
                _ => Ok(()),
            }
        }
    }
}

fn emit_svg(cli: &Cli, name: &str, svg: String) -> CliResult<()> {
    let dir = out_dir(cli).unwrap_or_else(|| PathBuf::from("."));
    write_file(&dir, &format!("{name}.svg"), &svg)
}

fn to_csv<S: Serialize>(rows: impl IntoIterator<Item = S>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError { code: 4, kind: "output", message: e.to_string() })?;
    }
    let bytes = w.into_inner().map_err(|e| CliError { code: 4, kind: "output", message: e.to_string() })?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn outcome_code(o: &Outcome) -> u8 {
    if o.pass {
        0
    } else {
        2
    }
}

#[derive(Serialize)]
struct DiscRow {
    n: usize,
    re: f64,
    im: f64,
    r: f64,
    ratio: f64,
}

fn collection_csv(col: &DiscCollection) -> CliResult<String> {
    to_csv(col.csv_rows().into_iter().map(|(n, re, im, r, ratio)| DiscRow { n, re, im, r, ratio }))
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct RandomGenConfig {
    ambient: Ambient,
    gauge: Gauge,
    count: usize,
    epsilon: f64,
    #[serde(default = "one")]
    envelope_m: f64,
    seed: u64,
}

fn one() -> f64 {
    1.0
}

fn generate(cli: &Cli, family: Family, levels: Option<usize>, n_max: Option<usize>, k_max: Option<usize>) -> CliResult<u8> {
    let (name, col) = match family {
        Family::Cantor => ("cantor", gen_cantor_rset(levels.unwrap_or(12), cli.seed)?),
        Family::Example1 => ("example1", gen_example1(n_max.unwrap_or(20), k_max.unwrap_or(20))?),
        Family::Example2 => ("example2", gen_example2(n_max.unwrap_or(20), k_max.unwrap_or(20))?),
        Family::Horocycle => ("horocycle", gen_horocycle_lset(n_max.unwrap_or(1000))?),
        Family::Random => {
            if cli.config.is_none() {
                return Err(CliError::input("generate random needs --config"));
            }
            let c: RandomGenConfig = load_config(cli, true)?;
            ("random", gen_random(c.ambient, c.gauge, c.count, c.epsilon, c.envelope_m, c.seed)?)
        }
    };
    let csv = if cli.format == Format::Csv { Some(collection_csv(&col)?) } else { None };
    emit(cli, name, &col, csv)?;
    if cli.svg {
        emit_svg(cli, name, figures::collection(&col, &[]))?;
    }
    Ok(0)
}

fn measure(cli: &Cli, intervals: &[(f64, f64)], collection: Option<&Path>, gauge: &str) -> CliResult<u8> {
    match collection {
        Some(path) => {
            let col = load_collection(path)?;
            let proj = projection(&col);
            let rep = projection_integral(&col)?;
            let code = if rep.within_bound == Some(false) { 2 } else { 0 };
            emit(cli, "measure", &json!({ "projection": proj, "projection_measure": proj.measure(), "integral": rep }), None)?;
            Ok(code)
        }
        None => {
            if intervals.is_empty() {
                return Err(CliError::input("measure needs --interval or --collection"));
            }
            let g = parse_gauge(gauge)?;
            let e = IntervalUnion::from_intervals(intervals.iter().copied())?;
            let rep = gauge_integral(&e, &g)?;
            if !rep.converged {
                return Err(CliError { code: 4, kind: "numeric_failure", message: "quadrature did not converge".into() });
            }
            let csv = format!("measure,integral\n{},{}\n", e.measure(), rep.value);
            emit(cli, "measure", &json!({ "gauge": g, "measure": e.measure(), "integral": rep.value, "report": rep }), Some(csv))?;
            Ok(0)
        }
    }
}

#[derive(Serialize)]
struct HitRow {
    index: usize,
    re: f64,
    im: f64,
    r: f64,
    status: esetlab::curve_geometry::MeetStatus,
    min_distance: Option<f64>,
}

fn intersect(cli: &Cli, path: &Path, c: f64, angle: f64, branch: BranchArg) -> CliResult<u8> {
    let col = load_collection(path)?;
    let branch = match branch {
        BranchArg::Upper => Branch::Upper,
        BranchArg::Lower => Branch::Lower,
        BranchArg::Both => Branch::Both,
    };
    let fam = match col.ambient {
        Ambient::Plane => CurveFamily::plane(col.gauge, angle, c, branch)?,
        Ambient::UnitDisc => CurveFamily::unit(col.gauge, ComplexPoint::from_polar(1.0, angle), c, branch)?,
    };
    let rows: Vec<HitRow> = col
        .discs
        .iter()
        .enumerate()
        .map(|(index, d)| {
            let o = meet_outcome(&fam, d);
            HitRow {
                index,
                re: d.center.re,
                im: d.center.im,
                r: d.radius,
                status: o.status,
                min_distance: o.min_distance.is_finite().then_some(o.min_distance),
            }
        })
        .collect();
    let hits: Vec<usize> = rows.iter().filter(|r| r.status != esetlab::curve_geometry::MeetStatus::Miss).map(|r| r.index).collect();
    let csv = if cli.format == Format::Csv { Some(to_csv(&rows)?) } else { None };
    emit(cli, "intersect", &json!({ "c": c, "angle": angle, "hits": hits, "discs": rows }), csv)?;
    if cli.svg {
        emit_svg(cli, "intersect", figures::collection(&col, &[(fam, hits)]))?;
    }
    Ok(0)
}

fn cinterval(cli: &Cli, path: &Path, angle: f64) -> CliResult<u8> {
    let col = load_collection(path)?;
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for (i, r) in c_intervals(&col, angle).into_iter().enumerate() {
        match r {
            Ok(r) => reports.push(r),
            Err(e) => errors.push(json!({ "index": i, "error": e.to_string() })),
        }
    }
    let violated = reports.iter().any(|r| !r.satisfied);
    let csv = if cli.format == Format::Csv { Some(to_csv(&reports)?) } else { None };
    emit(cli, "cinterval", &json!({ "intervals": reports, "skipped": errors }), csv)?;
    Ok(if violated { 2 } else { 0 })
}

fn verify(cli: &Cli, theorem: Theorem) -> CliResult<u8> {
    let o = match theorem {
        Theorem::One => ex::plane_measure("theorem1", Gauge::concave_power(0.5)?, &load_config(cli, true)?)?,
        Theorem::Two => ex::plane_measure("theorem2", Gauge::convex_power(1.0)?, &load_config(cli, true)?)?,
        Theorem::TwoFive => ex::rapid_trend(&load_config(cli, true)?)?,
        Theorem::Three => ex::horocycle(&load_config(cli, false)?)?,
        Theorem::Four => ex::avoidance()?,
        Theorem::Stolz => ex::stolz(&load_config(cli, true)?)?,
    };
    let name = o.id.clone();
    emit(cli, &name, &o, None)?;
    Ok(outcome_code(&o))
}

fn logderiv_like(cli: &Cli, which: &str) -> CliResult<u8> {
    let (o, value, csv) = match which {
        "logderiv" => {
            let (o, con, rep) = ex::logderiv(&load_config(cli, true)?)?;
            let csv = if cli.format == Format::Csv { Some(to_csv(&rep.samples)?) } else { None };
            (o.clone(), json!({ "outcome": o, "construction": con, "report": rep }), csv)
        }
        "logdiff" => {
            let (o, rep) = ex::logdiff(&load_config(cli, true)?)?;
            let csv = if cli.format == Format::Csv { Some(to_csv(&rep.samples)?) } else { None };
            (o.clone(), json!({ "outcome": o, "report": rep }), csv)
        }
        _ => {
            let (o, rep) = ex::logderiv_disc(&load_config(cli, true)?)?;
            let csv = if cli.format == Format::Csv { Some(to_csv(&rep.samples)?) } else { None };
            (o.clone(), json!({ "outcome": o, "report": rep }), csv)
        }
    };
    emit(cli, which, &value, csv)?;
    Ok(outcome_code(&o))
}

fn run(cli: &Cli) -> CliResult<u8> {
    match &cli.command {
        Command::Generate { family, levels, n_max, k_max } => generate(cli, *family, *levels, *n_max, *k_max),
        Command::Validate { collection } => {
            let col = load_collection(collection)?;
            let rep = col.validate();
            emit(cli, "validate", &rep, None)?;
            Ok(if rep.valid { 0 } else { 2 })
        }
        Command::Intersect { collection, c, angle, branch } => intersect(cli, collection, *c, *angle, *branch),
        Command::Cinterval { collection, angle } => cinterval(cli, collection, *angle),
        Command::Measure { intervals, collection, gauge } => measure(cli, intervals, collection.as_deref(), gauge),
        Command::Verify { theorem } => verify(cli, *theorem),
        Command::Cartan => {
            let o = ex::cartan(&load_config(cli, true)?)?;
            emit(cli, "cartan", &o, None)?;
            Ok(outcome_code(&o))
        }
        Command::Logderiv => logderiv_like(cli, "logderiv"),
        Command::Logdiff => logderiv_like(cli, "logdiff"),
        Command::LogderivDisc => logderiv_like(cli, "logderiv_disc"),
        Command::Avoidance => {
            let o = ex::avoidance()?;
            emit(cli, "avoidance", &o, None)?;
            Ok(outcome_code(&o))
        }
        Command::Figures => {
            for (name, svg) in figures::all()? {
                emit_svg(cli, name, svg)?;
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let body = json!({ "error": { "kind": "usage", "message": e.to_string() }, "exit_code": 3 });
            eprintln!("{body}");
            return ExitCode::from(3);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let body = json!({ "error": { "kind": e.kind, "message": e.message }, "exit_code": e.code });
            eprintln!("{body}");
            ExitCode::from(e.code)
        }
    }
}
