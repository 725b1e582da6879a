//! Batch front end. [`run`] parses arguments, writes JSON lines and returns
//! the process exit code:
//!
//! * 0: every report Holds
//! * 1: some report is Violated
//! * 2: usage or configuration error
//! * 3: some report is Inconclusive and none is Violated

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::calculus::{self, Alpha, Measure, QuadConfig, TsFunction};
use crate::expr::Expr;
use crate::inequalities::{self as ineq, IneqReport, JensenOptions, Setting, Verdict};
use crate::timescale::TimeScale;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

pub const DEFAULT_SEED: u64 = 20_240_611;
pub const DEFAULT_ALPHA: f64 = 0.5;

#[derive(Debug, Parser)]
#[command(name = "tscale", version, about = "Time-scale calculus and inequality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate a configured function over [a, b] of the time scale.
    Integrate {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Name of the function to integrate.
        #[arg(long, default_value = "f")]
        function: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run inequality checks from the config; with NAME, only that check.
    Check {
        name: Option<String>,
        /// Extra check parameter as key=value; the value is read as JSON,
        /// or as a string when that fails.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Reproduce a named worked result with embedded data.
    Repro {
        #[arg(value_enum)]
        which: Repro,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized inequality suites on discrete time scales.
    Suite {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Single alpha in [0, 1]; overrides the config.
    #[arg(long, conflicts_with = "alpha_grid")]
    alpha: Option<f64>,
    /// Alpha grid as FROM:TO:STEPS; overrides the config.
    #[arg(long, value_name = "FROM:TO:STEPS")]
    alpha_grid: Option<String>,
    #[arg(long = "from", allow_hyphen_values = true)]
    from: Option<f64>,
    #[arg(long = "to", allow_hyphen_values = true)]
    to: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    fd_step: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Delta,
    Nabla,
    Diamond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Repro {
    #[value(name = "example-2.1")]
    Example21,
    #[value(name = "remark-counterexample")]
    RemarkCounterexample,
}

/// The JSON run configuration.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub timescale: Option<TimeScale>,
    #[serde(default)]
    pub functions: BTreeMap<String, String>,
    #[serde(default)]
    pub alpha: Option<AlphaChoice>,
    #[serde(default)]
    pub bounds: Option<[f64; 2]>,
    #[serde(default)]
    pub checks: Vec<CheckEntry>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum AlphaChoice {
    Value(f64),
    Grid { from: f64, to: f64, steps: usize },
}

impl AlphaChoice {
    pub fn values(&self) -> Result<Vec<Alpha>> {
        let raw = match *self {
            AlphaChoice::Value(v) => vec![v],
            AlphaChoice::Grid { from, to, steps } => match steps {
                0 => bail!("alpha grid needs at least 1 step"),
                1 => vec![from],
                _ => (0..steps)
                    .map(|i| {
                        if i == steps - 1 {
                            to
                        } else {
                            from + (to - from) * i as f64 / (steps - 1) as f64
                        }
                    })
                    .collect(),
            },
        };
        raw.into_iter()
            .map(|v| Alpha::new(v).map_err(|_| anyhow!("alpha {v} is outside [0, 1]")))
            .collect()
    }

    fn parse_grid(s: &str) -> Result<AlphaChoice> {
        let parts: Vec<&str> = s.split(':').collect();
        let [from, to, steps] = parts[..] else {
            bail!("--alpha-grid wants FROM:TO:STEPS, got {s:?}");
        };
        Ok(AlphaChoice::Grid {
            from: from.trim().parse().with_context(|| format!("bad grid start {from:?}"))?,
            to: to.trim().parse().with_context(|| format!("bad grid end {to:?}"))?,
            steps: steps.trim().parse().with_context(|| format!("bad grid step count {steps:?}"))?,
        })
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_depth: Option<u32>,
    pub fd_base_step: Option<f64>,
}

/// A named check and its parameters, e.g. `{"name": "holder", "p": 3}`.
/// Function parameters `f`, `g`, `h` name entries of `functions`.
#[derive(Debug, Clone, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    #[serde(flatten)]
    pub params: serde_json::Map<String, Value>,
}

pub const CHECK_NAMES: [&str; 10] = [
    "jensen",
    "jensen-weighted",
    "holder",
    "cauchy-schwarz",
    "minkowski",
    "power-sum",
    "power-mean",
    "log-mean",
    "amgm",
    "pow2",
];

/// Runs the command line `args` (program name first), writing report lines
/// to `out` unless `--out` names a file and diagnostics to `err`.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (lines, code, path) = match cli.command {
        Command::Integrate { kind, function, common } => {
            let (lines, code) = integrate_cmd(kind, &function, &common, err)?;
            (lines, code, common.out)
        }
        Command::Check { name, params, common } => {
            let (lines, code) = check_cmd(name.as_deref(), &params, &common)?;
            (lines, code, common.out)
        }
        Command::Repro { which, out: path } => {
            let (lines, code) = match which {
                Repro::Example21 => repro_example()?,
                Repro::RemarkCounterexample => repro_remark()?,
            };
            (lines, code, path)
        }
        Command::Suite { seed, trials, out: path } => {
            let (lines, code) = suite(seed, trials)?;
            (lines, code, path)
        }
    };
    emit(&lines, path, out)?;
    Ok(code)
}

fn emit(lines: &[String], path: Option<PathBuf>, out: &mut dyn Write) -> Result<()> {
    let mut text = String::new();
    for l in lines {
        text.push_str(l);
        text.push('\n');
    }
    match path {
        Some(p) => fs::write(&p, text).with_context(|| format!("cannot write {}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(io::Error::into),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

/// Exit code for a set of verdicts.
pub fn exit_code<'a>(verdicts: impl IntoIterator<Item = &'a Verdict>) -> i32 {
    let mut code = EXIT_OK;
    for v in verdicts {
        match v {
            Verdict::Violated => return EXIT_VIOLATED,
            Verdict::Inconclusive => code = EXIT_INCONCLUSIVE,
            Verdict::Holds => {}
        }
    }
    code
}

/// A loaded config with command-line overrides applied.
struct Loaded {
    cfg: RunConfig,
    alphas: Vec<Alpha>,
    alpha_given: bool,
    quad: QuadConfig,
}

impl Loaded {
    fn new(common: &Common) -> Result<Loaded> {
        let cfg: RunConfig = match &common.config {
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("cannot read config {}", p.display()))?;
                serde_json::from_str(&text).with_context(|| format!("invalid config {}", p.display()))?
            }
            None => RunConfig::default(),
        };
        let choice = match (common.alpha, &common.alpha_grid) {
            (Some(v), _) => Some(AlphaChoice::Value(v)),
            (None, Some(g)) => Some(AlphaChoice::parse_grid(g)?),
            (None, None) => cfg.alpha,
        };
        let alpha_given = choice.is_some();
        let alphas = choice.unwrap_or(AlphaChoice::Value(DEFAULT_ALPHA)).values()?;

        let t = cfg.tolerances;
        let d = QuadConfig::default();
        let quad = QuadConfig {
            abs_tol: common.abs_tol.or(t.abs_tol).unwrap_or(d.abs_tol),
            rel_tol: common.rel_tol.or(t.rel_tol).unwrap_or(d.rel_tol),
            max_depth: t.max_depth.unwrap_or(d.max_depth),
            fd_base_step: common.fd_step.or(t.fd_base_step).unwrap_or(d.fd_base_step),
        };
        quad.validate().context("invalid tolerances")?;

        let mut cfg = cfg;
        if common.from.is_some() || common.to.is_some() {
            let [a, b] = cfg.bounds.unwrap_or([f64::NAN, f64::NAN]);
            cfg.bounds = Some([common.from.unwrap_or(a), common.to.unwrap_or(b)]);
        }
        for (name, src) in &cfg.functions {
            Expr::parse(src).with_context(|| format!("function {name:?} = {src:?}"))?;
        }
        Ok(Loaded {
            cfg,
            alphas,
            alpha_given,
            quad,
        })
    }

    fn scale(&self) -> Result<&TimeScale> {
        self.cfg
            .timescale
            .as_ref()
            .ok_or_else(|| anyhow!("config has no \"timescale\"; add e.g. {{\"components\":[{{\"interval\":[0.0,1.0]}}]}}"))
    }

    fn bounds(&self) -> Result<(f64, f64)> {
        let ts = self.scale()?;
        let (a, b) = match self.cfg.bounds {
            Some([a, b]) => (a, b),
            None => (ts.min(), ts.max()),
        };
        for x in [a, b] {
            if !ts.contains(x) {
                bail!("bound {x} is not a point of the time scale");
            }
        }
        if a > b {
            bail!("bounds out of order: {a} > {b}");
        }
        Ok((a, b))
    }

    fn function(&self, name: &str) -> Result<TsFunction> {
        let src = self
            .cfg
            .functions
            .get(name)
            .ok_or_else(|| anyhow!("function {name:?} is not defined under \"functions\""))?;
        Ok(TsFunction::from_expr(Expr::parse(src)?))
    }
}

#[derive(Serialize)]
struct IntegralLine<'a> {
    kind: &'a str,
    alpha: Option<f64>,
    a: f64,
    b: f64,
    value: f64,
    abs_error: f64,
    point_masses: usize,
    intervals: usize,
    panels: usize,
    evaluations: usize,
    converged: bool,
}

fn integrate_cmd(kind: Kind, function: &str, common: &Common, err: &mut dyn Write) -> Result<(Vec<String>, i32)> {
    let run = Loaded::new(common)?;
    let ts = run.scale()?;
    let (a, b) = run.bounds()?;
    let f = run.function(function)?;
    let mut lines = Vec::new();
    let mut code = EXIT_OK;
    let measures: Vec<Measure> = match kind {
        Kind::Delta | Kind::Nabla => {
            if run.alpha_given {
                writeln!(err, "warning: alpha is ignored for --kind {}", if kind == Kind::Delta { "delta" } else { "nabla" })?;
            }
            vec![if kind == Kind::Delta { Measure::Delta } else { Measure::Nabla }]
        }
        Kind::Diamond => run.alphas.iter().map(|&al| Measure::Diamond(al)).collect(),
    };
    for m in measures {
        let r = calculus::integrate(ts, &f, a, b, m, &run.quad)?;
        if !r.converged {
            code = EXIT_INCONCLUSIVE;
        }
        lines.push(json(&IntegralLine {
            kind: m.name(),
            alpha: match m {
                Measure::Diamond(al) => Some(al.value()),
                _ => None,
            },
            a,
            b,
            value: r.value,
            abs_error: r.abs_error,
            point_masses: r.point_masses,
            intervals: r.intervals,
            panels: r.panels,
            evaluations: r.evaluations,
            converged: r.converged,
        }));
    }
    Ok((lines, code))
}

#[derive(Serialize)]
struct CheckLine<'a> {
    alpha: f64,
    #[serde(flatten)]
    report: &'a IneqReport,
}

/// A check with its parameters resolved.
enum Job {
    Jensen { f: TsFunction, g: TsFunction, h: Option<TsFunction>, opts: JensenOptions },
    Holder { f: TsFunction, g: TsFunction, h: TsFunction, p: f64 },
    CauchySchwarz { f: TsFunction, g: TsFunction },
    Minkowski { f: TsFunction, g: TsFunction, p: f64 },
    PowerSum { f: TsFunction, g: TsFunction, h: TsFunction, p: f64 },
    PowerMean { g: TsFunction, h: TsFunction, beta: f64 },
    LogMean { g: TsFunction, h: TsFunction, exp: bool },
    Amgm { values: Vec<f64> },
    Pow2 { n: u32, values: Vec<f64> },
}

impl Job {
    fn needs_scale(&self) -> bool {
        !matches!(self, Job::Amgm { .. } | Job::Pow2 { .. })
    }
}

struct Params<'a> {
    check: &'a str,
    map: &'a serde_json::Map<String, Value>,
    run: &'a Loaded,
}

impl Params<'_> {
    fn number(&self, key: &str) -> Result<f64> {
        match self.map.get(key) {
            Some(v) => v.as_f64().ok_or_else(|| anyhow!("{}: parameter {key:?} must be a number, got {v}", self.check)),
            None => bail!("{}: missing parameter {key:?}", self.check),
        }
    }

    fn numbers(&self, key: &str) -> Result<Option<Vec<f64>>> {
        let Some(v) = self.map.get(key) else { return Ok(None) };
        let list = v.as_array().ok_or_else(|| anyhow!("{}: {key:?} must be a list of numbers", self.check))?;
        list.iter()
            .map(|x| x.as_f64().ok_or_else(|| anyhow!("{}: {key:?} holds a non-number {x}", self.check)))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    /// The function named by `key`, by default the function called `key`.
    fn function(&self, key: &str) -> Result<TsFunction> {
        let name = match self.map.get(key) {
            Some(Value::String(s)) => s.as_str(),
            Some(v) => bail!("{}: {key:?} must name a function, got {v}", self.check),
            None => key,
        };
        self.run.function(name).with_context(|| format!("check {}", self.check))
    }

    /// Like `function`, but a weight left unnamed and undefined is 1.
    fn weight(&self, key: &str) -> Result<TsFunction> {
        if !self.map.contains_key(key) && !self.run.cfg.functions.contains_key(key) {
            return Ok(TsFunction::constant(1.0));
        }
        self.function(key)
    }

    fn domain(&self) -> Result<JensenOptions> {
        Ok(JensenOptions {
            domain: match self.numbers("domain")? {
                None => None,
                Some(d) if d.len() == 2 => Some((d[0], d[1])),
                Some(_) => bail!("{}: \"domain\" must be [c, d]", self.check),
            },
        })
    }
}

fn build_job(entry: &CheckEntry, run: &Loaded) -> Result<Job> {
    let p = Params {
        check: &entry.name,
        map: &entry.params,
        run,
    };
    Ok(match entry.name.as_str() {
        "jensen" => Job::Jensen {
            f: p.function("f")?,
            g: p.function("g")?,
            h: None,
            opts: p.domain()?,
        },
        "jensen-weighted" => Job::Jensen {
            f: p.function("f")?,
            g: p.function("g")?,
            h: Some(p.function("h")?),
            opts: p.domain()?,
        },
        "holder" => Job::Holder {
            f: p.function("f")?,
            g: p.function("g")?,
            h: p.weight("h")?,
            p: p.number("p")?,
        },
        "cauchy-schwarz" => Job::CauchySchwarz {
            f: p.function("f")?,
            g: p.function("g")?,
        },
        "minkowski" => Job::Minkowski {
            f: p.function("f")?,
            g: p.function("g")?,
            p: p.number("p")?,
        },
        "power-sum" => Job::PowerSum {
            f: p.function("f")?,
            g: p.function("g")?,
            h: p.weight("h")?,
            p: p.number("p")?,
        },
        "power-mean" => Job::PowerMean {
            g: p.function("g")?,
            h: p.weight("h")?,
            beta: p.number("beta")?,
        },
        "log-mean" => Job::LogMean {
            g: p.function("g")?,
            h: p.weight("h")?,
            exp: match entry.params.get("exp") {
                None => false,
                Some(v) => v.as_bool().ok_or_else(|| anyhow!("log-mean: \"exp\" must be true or false"))?,
            },
        },
        "amgm" => Job::Amgm {
            values: p.numbers("values")?.ok_or_else(|| anyhow!("amgm: missing parameter \"values\""))?,
        },
        "pow2" => {
            let n = p.number("n")?;
            if !((1.0..=60.0).contains(&n) && n.fract() == 0.0) {
                bail!("pow2: \"n\" must be an integer in 1..=60, got {n}");
            }
            let n = n as u32;
            let values = match p.numbers("values")? {
                Some(v) => v,
                None => {
                    let g = p.function("g")?;
                    (0..=n)
                        .map(|k| g.eval(2f64.powi(k as i32)))
                        .collect::<Result<Vec<_>, _>>()
                        .context("pow2: evaluating g at 2^k")?
                }
            };
            Job::Pow2 { n, values }
        }
        other => bail!("unknown check {other:?}; known checks: {}", CHECK_NAMES.join(", ")),
    })
}

fn run_job(job: &Job, setting: Option<&Setting>, alpha: Alpha) -> Result<IneqReport, ineq::IneqError> {
    let s = || setting.expect("scale-based checks have a setting").with_alpha(alpha);
    match job {
        Job::Jensen { f, g, h: None, opts } => ineq::jensen(&s(), f, g, *opts),
        Job::Jensen { f, g, h: Some(h), opts } => ineq::jensen_weighted(&s(), f, g, h, *opts),
        Job::Holder { f, g, h, p } => ineq::holder(&s(), f, g, h, *p),
        Job::CauchySchwarz { f, g } => ineq::cauchy_schwarz(&s(), f, g),
        Job::Minkowski { f, g, p } => ineq::minkowski(&s(), *p, f, g),
        Job::PowerSum { f, g, h, p } => ineq::power_sum(&s(), *p, f, g, h),
        Job::PowerMean { g, h, beta } => ineq::power_mean(&s(), *beta, g, h),
        Job::LogMean { g, h, exp: false } => ineq::log_mean(&s(), g, h),
        Job::LogMean { g, h, exp: true } => ineq::log_mean_exp(&s(), g, h),
        Job::Amgm { values } => ineq::weighted_amgm(values, alpha),
        Job::Pow2 { n, values } => ineq::pow2_scale_check(*n, values, alpha).map(|c| c.general),
    }
}

fn parse_param(raw: &str) -> Result<(String, Value)> {
    let (k, v) = raw.split_once('=').ok_or_else(|| anyhow!("--param wants KEY=VALUE, got {raw:?}"))?;
    let value = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
    Ok((k.trim().to_string(), value))
}

fn check_cmd(name: Option<&str>, raw_params: &[String], common: &Common) -> Result<(Vec<String>, i32)> {
    let run = Loaded::new(common)?;
    let extra = raw_params.iter().map(|r| parse_param(r)).collect::<Result<Vec<_>>>()?;
    let mut entries: Vec<CheckEntry> = match name {
        Some(n) => {
            let matching: Vec<CheckEntry> = run.cfg.checks.iter().filter(|c| c.name == n).cloned().collect();
            if matching.is_empty() {
                vec![CheckEntry {
                    name: n.to_string(),
                    params: serde_json::Map::new(),
                }]
            } else {
                matching
            }
        }
        None => run.cfg.checks.clone(),
    };
    if entries.is_empty() {
        bail!("no checks to run: name one or list them under \"checks\"");
    }
    for entry in &mut entries {
        for (k, v) in &extra {
            entry.params.insert(k.clone(), v.clone());
        }
    }
    let jobs = entries.iter().map(|s| build_job(s, &run)).collect::<Result<Vec<_>>>()?;
    let setting = if jobs.iter().any(Job::needs_scale) {
        let (a, b) = run.bounds()?;
        Some(Setting::new(run.scale()?.clone(), a, b, run.alphas[0], run.quad)?)
    } else {
        None
    };

    let mut reports = Vec::new();
    for (job, entry) in jobs.iter().zip(&entries) {
        for &alpha in &run.alphas {
            let r = run_job(job, setting.as_ref(), alpha).with_context(|| format!("check {} at alpha {}", entry.name, alpha.value()))?;
            reports.push((alpha.value(), r));
        }
    }
    let lines = reports.iter().map(|(alpha, report)| json(&CheckLine { alpha: *alpha, report })).collect();
    let code = exit_code(reports.iter().map(|(_, r)| &r.verdict));
    Ok((lines, code))
}

#[derive(Serialize)]
struct ExampleRow {
    alpha: f64,
    computed: f64,
    closed_form: f64,
    deviation_from_h1: f64,
    abs_deviation: f64,
}

/// One row of the running-integral example: on `{0, 1, 2}` with
/// `h(t) = t^2`, the diamond derivative at 1 of `t -> int_0^t h`, against
/// `h(1) + 2 alpha (1 - alpha)`.
pub fn example_row(alpha: Alpha) -> Result<(f64, f64), calculus::CalcError> {
    let ts = TimeScale::from_points([0.0, 1.0, 2.0])?;
    let h = TsFunction::new("t^2", |t| t * t);
    let cfg = QuadConfig::default();
    let big_h = calculus::running_integral(&ts, &h, 0.0, Measure::Diamond(alpha), &cfg);
    let d = calculus::diamond_derivative(&ts, &big_h, 1.0, alpha, &cfg)?;
    let a = alpha.value();
    Ok((d.value, 1.0 + 2.0 * a * (1.0 - a)))
}

fn repro_example() -> Result<(Vec<String>, i32)> {
    let grid = AlphaChoice::Grid {
        from: 0.0,
        to: 1.0,
        steps: 11,
    }
    .values()?;
    let mut lines = Vec::new();
    let mut worst = 0.0f64;
    for alpha in grid {
        let (computed, closed_form) = example_row(alpha)?;
        let abs_deviation = (computed - closed_form).abs();
        worst = worst.max(abs_deviation);
        lines.push(json(&ExampleRow {
            alpha: alpha.value(),
            computed,
            closed_form,
            deviation_from_h1: computed - 1.0,
            abs_deviation,
        }));
    }
    #[derive(Serialize)]
    struct Summary {
        max_abs_deviation: f64,
    }
    lines.push(json(&Summary { max_abs_deviation: worst }));
    Ok((lines, if worst <= 1e-12 { EXIT_OK } else { EXIT_VIOLATED }))
}

fn repro_remark() -> Result<(Vec<String>, i32)> {
    let cx = ineq::signed_weights_counterexample();
    #[derive(Serialize)]
    struct Signed {
        form: &'static str,
        a: f64,
        b: f64,
        c: f64,
        d: f64,
        e: f64,
        verdict: Verdict,
    }
    let signed = Signed {
        form: "signed",
        a: cx.a,
        b: cx.b,
        c: cx.c,
        d: cx.d,
        e: cx.e,
        verdict: if cx.signed_violated { Verdict::Violated } else { Verdict::Holds },
    };
    #[derive(Serialize)]
    struct Absolute<'a> {
        form: &'static str,
        #[serde(flatten)]
        report: &'a IneqReport,
    }
    let lines = vec![
        json(&signed),
        json(&Absolute {
            form: "absolute",
            report: &cx.absolute,
        }),
    ];
    // The signed form is expected to fail; the run succeeds when it does.
    let ok = cx.signed_violated && cx.absolute.holds();
    Ok((lines, if ok { EXIT_OK } else { EXIT_VIOLATED }))
}

/// A function known only on a finite set of points.
fn table(name: &str, points: &[f64], values: Vec<f64>) -> TsFunction {
    let points = points.to_vec();
    let label = format!("{name}{values:?}");
    TsFunction::fallible(label, move |t| match points.binary_search_by(|p| p.total_cmp(&t)) {
        Ok(i) => Ok(values[i]),
        Err(_) => Err(format!("{t} is not a table point")),
    })
}

fn random_points(rng: &mut StdRng) -> Vec<f64> {
    let n = rng.gen_range(2..=20);
    let mut t = rng.gen_range(-5.0..5.0);
    let mut pts = vec![t];
    for _ in 1..n {
        t += rng.gen_range(0.05..2.0);
        pts.push(t);
    }
    pts
}

fn random_values(rng: &mut StdRng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

#[derive(Serialize)]
struct SuiteLine {
    family: &'static str,
    seed: u64,
    trials: usize,
    holds: usize,
    violated: usize,
    inconclusive: usize,
    min_margin: f64,
}

/// Randomized instances of the integral inequalities on discrete scales,
/// one summary line per family.
fn suite(seed: u64, trials: usize) -> Result<(Vec<String>, i32)> {
    const ALPHAS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
    const FAMILIES: [&str; 7] = ["jensen", "jensen-weighted", "holder", "cauchy-schwarz", "minkowski", "power-sum", "amgm"];
    type Outer = (&'static str, fn(f64) -> f64);
    let outers: [Outer; 4] = [("x^2", |x| x * x), ("exp", f64::exp), ("x^4", |x| x.powi(4)), ("-ln", |x| -x.ln())];
    let mut rng = StdRng::seed_from_u64(seed);
    let mut lines = Vec::new();
    let mut verdicts = Vec::new();
    for family in FAMILIES {
        let mut line = SuiteLine {
            family,
            seed,
            trials,
            holds: 0,
            violated: 0,
            inconclusive: 0,
            min_margin: f64::INFINITY,
        };
        for _ in 0..trials {
            let pts = random_points(&mut rng);
            let n = pts.len();
            let alpha = Alpha::new(ALPHAS[rng.gen_range(0..ALPHAS.len())])?;
            let s = Setting::new(TimeScale::from_points(pts.iter().copied())?, pts[0], pts[n - 1], alpha, QuadConfig::default())?;
            let f = table("f", &pts, random_values(&mut rng, n, 0.0, 3.0));
            let g = table("g", &pts, random_values(&mut rng, n, 0.1, 3.0));
            let h = table("h", &pts, random_values(&mut rng, n, 0.01, 2.0));
            let (oname, outer) = outers[rng.gen_range(0..outers.len())];
            let outer = TsFunction::new(oname, outer);
            let p = [1.5, 2.0, 3.0][rng.gen_range(0..3)];
            let r = match family {
                "jensen" => ineq::jensen(&s, &outer, &g, JensenOptions::default())?,
                "jensen-weighted" => ineq::jensen_weighted(&s, &outer, &g, &h, JensenOptions::default())?,
                "holder" => ineq::holder(&s, &f, &g, &h, p)?,
                "cauchy-schwarz" => ineq::cauchy_schwarz(&s, &f, &g)?,
                "minkowski" => ineq::minkowski(&s, p, &f, &g)?,
                "power-sum" => ineq::power_sum(&s, [0.25, 0.5, 2.0, 3.0][rng.gen_range(0..4)], &f, &g, &h)?,
                _ => ineq::weighted_amgm(&random_values(&mut rng, n.max(2), 0.1, 10.0), alpha)?,
            };
            match r.verdict {
                Verdict::Holds => line.holds += 1,
                Verdict::Violated => line.violated += 1,
                Verdict::Inconclusive => line.inconclusive += 1,
            }
            line.min_margin = line.min_margin.min(r.margin);
            verdicts.push(r.verdict);
        }
        lines.push(json(&line));
    }
    Ok((lines, exit_code(&verdicts)))
}
