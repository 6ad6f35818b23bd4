//! The `loopgen` command line.
//!
//! Every subcommand reads its parameters from flags, optionally layered over a
//! JSON config file whose keys mirror the long flag names (`max_runs` or
//! `max-runs`). Flags win. Outputs embed a `provenance` record with the tool
//! version, the effective parameters and the seed.
//!
//! Exit status: 0 success, 2 invalid parameters or input, 3 generation
//! saturated, 4 I/O failure. Failures print one JSON error record on stderr.

use crate::analyze;
use crate::bench::{collect_tts, write_csv_summary, BenchPoint, PointSpec, SchedulePolicy};
use crate::convert::json::{instance_from_json, instance_to_json_with};
use crate::convert::rbm_to_max2sat_with_offset;
use crate::convert::wcnf::{read_wcnf, wcnf_to_instance, write_wcnf, WcnfMeta, DEFAULT_SCALE};
use crate::generate::{generate, GenMode, GenParams};
use crate::rbm::{brute_force_ground_state, RbmInstance, BRUTE_FORCE_MAX};
use crate::solve::{solve_with_restarts, AnnealSchedule, DEFAULT_BETA_MIN, DEFAULT_MAX_RUNS};
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "loopgen", version, about = "Frustrated-loop instance generator and benchmark harness")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate one planted instance.
    Generate(Params),
    /// Convert an instance between JSON and wcnf.
    Convert(Params),
    /// Solve an instance with simulated annealing.
    Solve(Params),
    /// Measure time-to-solution over a grid of (n, f, rho).
    Bench(Params),
    /// Evaluate a closed-form predictor.
    Analyze(AnalyzeArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Convert(_) => "convert",
            Command::Solve(_) => "solve",
            Command::Bench(_) => "bench",
            Command::Analyze(_) => "analyze",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Wcnf,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Random,
    Structured,
    UniformSat,
}

impl From<ModeArg> for GenMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Random => GenMode::Random,
            ModeArg::Structured => GenMode::Structured,
            ModeArg::UniformSat => GenMode::UniformSat,
        }
    }
}

/// Flags shared by generate, convert, solve and bench. List-valued flags
/// take comma-separated values; only `bench` accepts more than one.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    #[arg(long, value_delimiter = ',')]
    #[serde(deserialize_with = "one_or_many")]
    pub n: Vec<usize>,
    /// Hidden-layer size; defaults to `n`.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    #[serde(deserialize_with = "one_or_many")]
    pub f: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(deserialize_with = "one_or_many")]
    pub rho: Vec<f64>,
    /// Block fraction for the structured mode.
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Multiplicative noise on loop weights.
    #[arg(long = "alpha-jitter")]
    #[serde(alias = "alpha-jitter")]
    pub alpha_jitter: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub nsweep: Option<usize>,
    #[arg(long = "max-runs")]
    #[serde(alias = "max-runs")]
    pub max_runs: Option<u64>,
    #[arg(long = "beta-min")]
    #[serde(alias = "beta-min")]
    pub beta_min: Option<f64>,
    /// Integer weight scale for wcnf.
    #[arg(long)]
    pub scale: Option<u64>,
    /// Instances per bench point.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Input instance (JSON or wcnf).
    #[arg(long = "in")]
    #[serde(rename = "in")]
    pub input: Option<PathBuf>,
}

fn one_or_many<'de, D, T>(de: D) -> std::result::Result<Vec<T>, D::Error>
where
    D: serde::Deserializer<'de>,
    T: Deserialize<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany<T> {
        One(T),
        Many(Vec<T>),
    }
    Ok(match OneOrMany::deserialize(de)? {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(v) => v,
    })
}

macro_rules! overlay {
    ($flags:ident, $file:ident; $($opt:ident),*; $($vec:ident),*) => {{
        $( if $flags.$opt.is_none() { $flags.$opt = $file.$opt.take(); } )*
        $( if $flags.$vec.is_empty() { $flags.$vec = std::mem::take(&mut $file.$vec); } )*
    }};
}

impl Params {
    /// Fills unset flags from the `--config` file.
    pub fn resolve(mut self) -> Result<Self> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path)?;
        let mut file: Params = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidParameter(format!("config {}: {e}", path.display())))?;
        overlay!(self, file;
            m, d, mode, alpha_jitter, seed, nsweep, max_runs, beta_min, scale, samples, out, format, input;
            n, f, rho);
        Ok(self)
    }

    fn single<T: Copy>(xs: &[T], name: &str) -> Result<T> {
        match xs {
            [x] => Ok(*x),
            [] => Err(Error::InvalidParameter(format!("--{name} is required"))),
            _ => Err(Error::InvalidParameter(format!("--{name} takes one value here"))),
        }
    }

    fn mode(&self) -> GenMode {
        self.mode.map_or(GenMode::Random, Into::into)
    }

    fn gen_params(&self, seed: u64) -> Result<GenParams> {
        let n = Self::single(&self.n, "n")?;
        let m = self.m.unwrap_or(n);
        let rho = Self::single(&self.rho, "rho")?;
        let mut p = match self.mode() {
            GenMode::Random => GenParams::random(n, m, Self::single(&self.f, "f")?, rho, seed)?,
            GenMode::Structured => {
                let d = self.d.ok_or_else(|| Error::InvalidParameter("--d is required in structured mode".into()))?;
                GenParams::structured(n, m, Self::single(&self.f, "f")?, rho, d, seed)?
            }
            GenMode::UniformSat => GenParams::uniform_sat(n, m, rho, seed)?,
        };
        if let Some(j) = self.alpha_jitter {
            p.jitter = j;
            p.validate()?;
        }
        Ok(p)
    }

    fn policy(&self) -> SchedulePolicy {
        SchedulePolicy {
            n_sweep: self.nsweep,
            max_runs: self.max_runs.unwrap_or(DEFAULT_MAX_RUNS),
            beta_min: self.beta_min.unwrap_or(DEFAULT_BETA_MIN),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Predictor {
    Intersections,
    FrustrationDecay,
    LocalMinima,
    GapVariance,
    Dispersion,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AnalyzeArgs {
    #[arg(value_enum)]
    pub predictor: Predictor,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of loops `N`.
    #[arg(long)]
    pub loops: Option<usize>,
    /// Loop density; sets `N = round(rho·n)` when `--loops` is absent.
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub f: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    /// Exclude the global flip of the ground state (local-minima).
    #[arg(long)]
    pub exclude_flip: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn need<T>(x: Option<T>, name: &str) -> Result<T> {
    x.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required")))
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Saturated { .. } => 3,
        Error::Io(_) | Error::Csv(_) => 4,
        Error::Json(j) if j.is_io() => 4,
        _ => 2,
    }
}

fn error_record(kind: &str, message: &str) -> String {
    json!({ "error": kind, "message": message }).to_string()
}

fn provenance(command: &str, params: &Value, seed: Option<u64>) -> Value {
    json!({
        "tool": "loopgen",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "params": params,
        "seed": seed,
    })
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    let s = seed.unwrap_or_else(rand::random);
    eprintln!("seed: {s}");
    s
}

fn emit(out: Option<&Path>, body: &[u8]) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, body)?,
        None => {
            let mut o = std::io::stdout().lock();
            o.write_all(body)?;
            o.flush()?;
        }
    }
    Ok(())
}

fn wcnf_bytes(inst: &RbmInstance, scale: u64, prov: &Value) -> Result<Vec<u8>> {
    let (sat, offset) = rbm_to_max2sat_with_offset(inst);
    let mut meta = WcnfMeta::from_instance(inst, offset);
    meta.provenance = Some(prov.to_string());
    let mut buf = Vec::new();
    write_wcnf(&sat, scale, &meta, &mut buf)?;
    Ok(buf)
}

fn instance_bytes(inst: &RbmInstance, format: Format, scale: u64, prov: &Value) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut s = instance_to_json_with(inst, Some(prov));
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Wcnf => wcnf_bytes(inst, scale, prov),
        Format::Csv => Err(Error::InvalidParameter("csv output is only available for bench".into())),
    }
}

/// Reads a JSON or wcnf instance, deciding by extension and then by content.
pub fn read_any_instance(path: &Path, scale: u64) -> Result<RbmInstance> {
    let text = std::fs::read_to_string(path)?;
    let is_wcnf = path.extension().is_some_and(|e| e == "wcnf") || !text.trim_start().starts_with('{');
    if is_wcnf {
        let (sat, meta) = read_wcnf(BufReader::new(text.as_bytes()), scale)?;
        wcnf_to_instance(&sat, &meta)
    } else {
        instance_from_json(&text)
    }
}

// where the output went does not affect what it contains
fn without_out(mut v: Value) -> Value {
    if let Some(obj) = v.as_object_mut() {
        obj.remove("out");
    }
    v
}

fn params_value(p: &Params, seed: Option<u64>) -> Value {
    let mut v = without_out(serde_json::to_value(p).expect("serialisable"));
    if let Some(obj) = v.as_object_mut() {
        if let Some(s) = seed {
            obj.insert("seed".into(), json!(s));
        }
    }
    v
}

fn cmd_generate(p: Params) -> Result<()> {
    let seed = resolve_seed(p.seed);
    let gp = p.gen_params(seed)?;
    let inst = generate(&gp)?;
    let prov = provenance("generate", &params_value(&p, Some(seed)), Some(seed));
    let body = instance_bytes(&inst, p.format.unwrap_or(Format::Json), p.scale.unwrap_or(DEFAULT_SCALE), &prov)?;
    emit(p.out.as_deref(), &body)
}

fn cmd_convert(p: Params) -> Result<()> {
    let input = need(p.input.clone(), "in")?;
    let scale = p.scale.unwrap_or(DEFAULT_SCALE);
    let inst = read_any_instance(&input, scale)?;
    let seed = inst.meta.as_ref().map(|m| m.seed);
    let prov = provenance("convert", &params_value(&p, None), seed);
    let format = need(p.format, "format")?;
    let body = instance_bytes(&inst, format, scale, &prov)?;
    emit(p.out.as_deref(), &body)
}

fn cmd_solve(p: Params) -> Result<()> {
    let input = need(p.input.clone(), "in")?;
    let inst = read_any_instance(&input, p.scale.unwrap_or(DEFAULT_SCALE))?;
    let seed = resolve_seed(p.seed);
    let mut sched = AnnealSchedule::for_instance(&inst, seed);
    if let Some(k) = p.nsweep {
        sched.n_sweep = k;
    }
    if let Some(r) = p.max_runs {
        sched.max_runs = r;
    }
    if let Some(b) = p.beta_min {
        sched.beta_min = b;
    }
    let (target, source) = match inst.ground_energy {
        Some(e) => (e, "planted"),
        None if inst.n().min(inst.m()) <= BRUTE_FORCE_MAX => (brute_force_ground_state(&inst)?.1, "brute-force"),
        None => {
            return Err(Error::InvalidParameter(
                "instance has no certified ground energy and is too large to enumerate".into(),
            ))
        }
    };
    let rec = solve_with_restarts(&inst, target, &sched)?;
    let out = json!({
        "target": target,
        "target_source": source,
        "schedule": sched,
        "result": rec,
        "provenance": provenance("solve", &params_value(&p, Some(seed)), Some(seed)),
    });
    emit(p.out.as_deref(), format!("{out}\n").as_bytes())
}

#[derive(Serialize)]
struct BenchLine<'a> {
    #[serde(flatten)]
    point: &'a BenchPoint,
    provenance: &'a Value,
}

fn cmd_bench(p: Params) -> Result<()> {
    let seed = resolve_seed(p.seed);
    if p.n.is_empty() || p.rho.is_empty() {
        return Err(Error::InvalidParameter("--n and --rho are required".into()));
    }
    let mode = p.mode();
    let fs = if mode == GenMode::UniformSat {
        vec![0.0]
    } else if p.f.is_empty() {
        return Err(Error::InvalidParameter("--f is required".into()));
    } else {
        p.f.clone()
    };
    let samples = p.samples.unwrap_or(100);
    let policy = p.policy();
    let mut points = Vec::new();
    for &n in &p.n {
        for &f in &fs {
            for &rho in &p.rho {
                let spec = PointSpec {
                    n,
                    m: p.m.unwrap_or(n),
                    f,
                    rho,
                    mode,
                    d: p.d.unwrap_or(1.0),
                };
                points.push(collect_tts(&spec, samples, seed, &policy)?);
            }
        }
    }
    let prov = provenance("bench", &params_value(&p, Some(seed)), Some(seed));
    let mut buf = Vec::new();
    match p.format.unwrap_or(Format::Json) {
        Format::Json => {
            for pt in &points {
                serde_json::to_writer(&mut buf, &BenchLine { point: pt, provenance: &prov })?;
                buf.push(b'\n');
            }
        }
        Format::Csv => write_csv_summary(&points, &mut buf)?,
        Format::Wcnf => return Err(Error::InvalidParameter("bench writes json or csv".into())),
    }
    emit(p.out.as_deref(), &buf)
}

fn loops_of(a: &AnalyzeArgs, n: usize) -> Result<usize> {
    match (a.loops, a.rho) {
        (Some(l), _) => Ok(l),
        (None, Some(rho)) => Ok((rho * n as f64).round_ties_even() as usize),
        _ => Err(Error::InvalidParameter("--loops or --rho is required".into())),
    }
}

fn alpha_of(a: &AnalyzeArgs) -> Result<f64> {
    match (a.alpha, a.f) {
        (Some(x), _) => Ok(x),
        (None, Some(f)) => crate::generate::alpha_from_f(f),
        _ => Err(Error::InvalidParameter("--alpha or --f is required".into())),
    }
}

/// Evaluates one predictor and returns its JSON result record.
pub fn analyze_value(a: &AnalyzeArgs) -> Result<Value> {
    let v = match a.predictor {
        Predictor::Intersections => {
            let n = need(a.n, "n")?;
            let model = analyze::IntersectionModel::new(n, a.m.unwrap_or(n), loops_of(a, n)?)?;
            json!({
                "predictor": "intersections",
                "value": model.expected_intersections,
                "method": model.method,
                "model": model,
                "flags": [],
            })
        }
        Predictor::FrustrationDecay => {
            let n = need(a.n, "n")?;
            let model = analyze::IntersectionModel::new(n, a.m.unwrap_or(n), loops_of(a, n)?)?;
            if model.n_loops == 0 {
                return Err(Error::InvalidParameter("N must be at least 1".into()));
            }
            json!({
                "predictor": "frustration-decay",
                "value": model.expected_frustration,
                "method": model.method,
                "model": model,
                "flags": [],
            })
        }
        Predictor::LocalMinima => {
            let n = need(a.n, "n")?;
            let alpha = alpha_of(a)?;
            let est = if a.exclude_flip {
                analyze::expected_local_minima_excluding_flip(n, alpha)?
            } else {
                analyze::expected_local_minima(n, alpha)?
            };
            let flags: Vec<&str> = if est.overflow { vec!["overflow"] } else { vec![] };
            json!({
                "predictor": "local-minima",
                "value": est.value,
                "ln_value": est.ln_value,
                "method": "exact-series",
                "flags": flags,
            })
        }
        Predictor::GapVariance => {
            let n = need(a.n, "n")?;
            let value = analyze::gap_variance(
                n,
                a.m.unwrap_or(n),
                need(a.d, "d")?,
                a.mu.unwrap_or(0.0),
                a.sigma.unwrap_or(1.0),
            )?;
            json!({ "predictor": "gap-variance", "value": value, "method": "exact-series", "flags": [] })
        }
        Predictor::Dispersion => {
            let n = need(a.n, "n")?;
            let d = analyze::local_field_dispersion(n, loops_of(a, n)?, need(a.eps, "eps")?, need(a.r, "r")?, need(a.d, "d")?)?;
            let flags: Vec<&str> = if d.c_v.is_none() { vec!["c_v_undefined"] } else { vec![] };
            json!({
                "predictor": "dispersion",
                "value": d.c_v,
                "mean": d.mean,
                "variance": d.variance,
                "method": "exact-series",
                "flags": flags,
            })
        }
    };
    Ok(v)
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<()> {
    let mut v = analyze_value(&a)?;
    v["provenance"] = provenance("analyze", &without_out(serde_json::to_value(&a).expect("serialisable")), None);
    emit(a.out.as_deref(), format!("{v}\n").as_bytes())
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(p) => cmd_generate(p.resolve()?),
        Command::Convert(p) => cmd_convert(p.resolve()?),
        Command::Solve(p) => cmd_solve(p.resolve()?),
        Command::Bench(p) => cmd_bench(p.resolve()?),
        Command::Analyze(a) => cmd_analyze(a),
    }
}

/// Parses `args`, runs, and returns the process exit status. Errors are
/// reported on stderr as `{"error": <kind>, "message": <text>}`.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprintln!("{}", error_record("usage", e.to_string().trim()));
            return 2;
        }
    };
    let name = cli.command.name();
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            log::debug!("{name} failed: {e:?}");
            eprintln!("{}", error_record(e.kind(), &e.to_string()));
            exit_code(&e)
        }
    }
}
