//! Command-line front end: argument parsing, JSON output, exit codes and the JSONL result
//! cache used by `report` and `scan`.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith;
use crate::error::Error;
use crate::family::{self, QuadChoice};
use crate::localdescent::{self, SplitModel};
use crate::points;
use crate::redei;
use crate::selmer;

pub const SCHEMA_VERSION: u32 = 1;
pub const ENGINE_VERSION: &str = concat!("redei-", env!("CARGO_PKG_VERSION"));

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_NOT_DEFINED: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "redei", version, about = "Rédei symbols and 2-Selmer groups for y^2 = x(x^2-p^2)(x^2-4p^2)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate the Rédei symbol [a,b,c] with its certificate.
    Redei {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        b: i64,
        #[arg(allow_negative_numbers = true)]
        c: i64,
    },
    /// 2-Selmer group of J_p over Q, or of J over Q(sqrt(p)) / Q(sqrt(-p)).
    Selmer {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = FieldArg::Q)]
        field: FieldArg,
    },
    /// Full per-prime report.
    Report {
        p: u64,
        #[arg(long, value_enum, default_value_t = ReportField::Auto)]
        field: ReportField,
        /// JSON output (the default).
        #[arg(long, conflicts_with = "text")]
        json: bool,
        /// Short human-readable summary instead of JSON.
        #[arg(long)]
        text: bool,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Reports for every prime in a range, one JSON record per line, ordered by p.
    Scan {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Congruence filter like 23mod48.
        #[arg(long)]
        class: Option<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Rational points of C_p with their certificate.
    Points {
        p: u64,
        /// Also run the pair-conic filter over the whole Selmer group.
        #[arg(long)]
        exhaustive: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FieldArg {
    Q,
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ReportField {
    Auto,
    Plus,
    Minus,
    None,
}

impl ReportField {
    fn choice(self) -> QuadChoice {
        match self {
            ReportField::Auto => QuadChoice::Auto,
            ReportField::Plus => QuadChoice::Sign(1),
            ReportField::Minus => QuadChoice::Sign(-1),
            ReportField::None => QuadChoice::Skip,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ReportField::Auto => "auto",
            ReportField::Plus => "plus",
            ReportField::Minus => "minus",
            ReportField::None => "none",
        }
    }
}

/// One cached or emitted result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub schema_version: u32,
    pub engine_version: String,
    pub timestamp: u64,
    pub command: String,
    pub params: Value,
    pub result: Value,
}

impl ReportRecord {
    fn new(command: &str, params: Value, result: Value) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        ReportRecord {
            schema_version: SCHEMA_VERSION,
            engine_version: ENGINE_VERSION.to_string(),
            timestamp,
            command: command.to_string(),
            params,
            result,
        }
    }

    fn key(&self) -> String {
        cache_key(&self.engine_version, &self.command, &self.params)
    }
}

fn cache_key(engine: &str, command: &str, params: &Value) -> String {
    format!("{engine}|{command}|{params}")
}

/// Append-only JSONL cache. Lines that fail to parse are skipped.
pub struct Cache {
    path: PathBuf,
    records: HashMap<String, ReportRecord>,
    writer: Mutex<Option<File>>,
}

impl Cache {
    pub fn open(path: &Path) -> std::io::Result<Cache> {
        let mut records = HashMap::new();
        if path.exists() {
            for line in BufReader::new(File::open(path)?).lines() {
                if let Ok(r) = serde_json::from_str::<ReportRecord>(&line?) {
                    if r.schema_version == SCHEMA_VERSION {
                        records.entry(r.key()).or_insert(r);
                    }
                }
            }
        }
        Ok(Cache { path: path.to_path_buf(), records, writer: Mutex::new(None) })
    }

    pub fn get(&self, command: &str, params: &Value) -> Option<&ReportRecord> {
        self.records.get(&cache_key(ENGINE_VERSION, command, params))
    }

    pub fn append(&self, record: &ReportRecord) -> std::io::Result<()> {
        let mut w = self.writer.lock().unwrap();
        if w.is_none() {
            *w = Some(OpenOptions::new().create(true).append(true).open(&self.path)?);
        }
        let f = w.as_mut().unwrap();
        writeln!(f, "{}", serde_json::to_string(record).expect("record serializes"))?;
        f.flush()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotDefined(_) => EXIT_NOT_DEFINED,
        Error::BudgetExceeded(_) | Error::SearchBudgetExhausted { .. } => EXIT_BUDGET,
        Error::InvalidInput(_) => EXIT_USAGE,
        _ => EXIT_INTERNAL,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::BudgetExceeded(_) => "BudgetExceeded",
        Error::NotASquare { .. } => "NotASquare",
        Error::ZeroResidue { .. } => "ZeroResidue",
        Error::InvalidInput(_) => "InvalidInput",
        Error::OddClassNumberRequired(_) => "OddClassNumberRequired",
        Error::Unsatisfiable(_) => "Unsatisfiable",
        Error::Unsupported(_) => "Unsupported",
        Error::NotLocallySolvable { .. } => "NotLocallySolvable",
        Error::TwistSearchExhausted { .. } => "TwistSearchExhausted",
        Error::NotDefined(_) => "NotDefined",
        Error::InternalInconsistency(_) => "InternalInconsistency",
        Error::SearchBudgetExhausted { .. } => "SearchBudgetExhausted",
        Error::NotOnCurve(_) => "NotOnCurve",
        Error::InvalidDivisor(_) => "InvalidDivisor",
        Error::BadReduction(_) => "BadReduction",
        Error::Incomplete(_) => "Incomplete",
    }
}

pub fn error_json(e: &Error) -> Value {
    json!({ "error": error_kind(e), "message": e.to_string() })
}

fn parse_class(s: &str) -> Result<(u64, u64), String> {
    let (r, m) = s.split_once("mod").ok_or_else(|| format!("class {s:?} is not of the form RmodM"))?;
    let r: u64 = r.trim().parse().map_err(|_| format!("bad residue in {s:?}"))?;
    let m: u64 = m.trim().parse().map_err(|_| format!("bad modulus in {s:?}"))?;
    if m == 0 {
        return Err("modulus must be positive".into());
    }
    Ok((r % m, m))
}

/// REDEI_BUDGET scales the local-image search budget.
fn apply_budget_env() -> Result<(), String> {
    if let Ok(v) = std::env::var("REDEI_BUDGET") {
        let m: f64 = v.trim().parse().map_err(|_| format!("REDEI_BUDGET={v:?} is not a number"))?;
        if !(m > 0.0) {
            return Err(format!("REDEI_BUDGET={v:?} must be positive"));
        }
        localdescent::set_default_budget((localdescent::DEFAULT_BUDGET as f64 * m).round() as usize);
    }
    Ok(())
}

fn open_cache(flag: Option<PathBuf>) -> std::io::Result<Option<Cache>> {
    let path = flag.or_else(|| std::env::var_os("REDEI_CACHE").map(PathBuf::from));
    path.map(|p| Cache::open(&p)).transpose()
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn is_valid_p(p: u64) -> bool {
    p > 3 && arith::is_prime(p as u128)
}

/// Report for p through the cache: (record, freshly computed).
fn cached_report(p: u64, field: ReportField, cache: Option<&Cache>) -> Result<ReportRecord, Error> {
    let params = json!({ "p": p, "field": field.name() });
    if let Some(r) = cache.and_then(|c| c.get("report", &params)) {
        return Ok(r.clone());
    }
    let report = family::report_with(p, field.choice())?;
    let record = ReportRecord::new("report", params, to_json(&report));
    if let Some(c) = cache {
        if let Err(e) = c.append(&record) {
            return Err(Error::InternalInconsistency(format!("cache write failed: {e}")));
        }
    }
    Ok(record)
}

fn report_text(r: &family::PrimeReport) -> String {
    let mut out = format!(
        "p = {} (mod 8: {}, mod 24: {}, mod 48: {})\n",
        r.p, r.classes.mod8, r.classes.mod24, r.classes.mod48
    );
    out += &format!("dim S2(J_p/Q) = {}\n", r.dim_s2_jp_q);
    if let Some(q) = &r.dim_s2_j_quad {
        out += &format!("dim S2(J/Q(sqrt({}))) = {}\n", q.d, q.dim);
    }
    match r.rank() {
        Some(k) => out += &format!("rank J_p(Q) = {k}\n"),
        None => out += &format!("rank J_p(Q) in [{}, {}]\n", r.rank_lower, r.rank_upper),
    }
    match r.sha2_dim {
        Some(s) => out += &format!("dim Sha[2] = {s}\n"),
        None => out += &format!("dim Sha[2] in [{}, {}]\n", r.sha2_range.0, r.sha2_range.1),
    }
    out += &format!("torsion: {}\n", r.torsion.group);
    for t in r.theorem_applied.iter().chain(&r.conditional) {
        out += &format!("- {t}\n");
    }
    if let Some(n) = r.rational_points {
        out += &format!("#C_p(Q) = {n}\n");
    }
    out
}

/// Runs the CLI with explicit arguments (argv[0] included) and output streams.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    if let Err(m) = apply_budget_env() {
        let _ = writeln!(err, "{m}");
        return EXIT_USAGE;
    }
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            EXIT_INTERNAL
        }
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"))
}

fn fail(out: &mut dyn Write, e: &Error) -> std::io::Result<i32> {
    emit(out, &error_json(e))?;
    Ok(exit_code(e))
}

fn usage(err: &mut dyn Write, msg: &str) -> std::io::Result<i32> {
    writeln!(err, "error: {msg}")?;
    Ok(EXIT_USAGE)
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    match cmd {
        Command::Redei { a, b, c } => match redei::redei_symbol(a, b, c) {
            Ok(cert) => {
                emit(out, &to_json(&cert))?;
                Ok(EXIT_OK)
            }
            Err(e) => fail(out, &e),
        },
        Command::Selmer { p, field } => {
            if !is_valid_p(p) {
                return usage(err, &format!("{p} is not a prime > 3"));
            }
            let result = match field {
                FieldArg::Q => selmer::problem_over_q(&SplitModel::scaled(p as i64))
                    .and_then(|prob| selmer::selmer_group(&prob).map(|g| (prob, g)))
                    .map(|(prob, g)| {
                        let ints = |v: &Vec<String>| -> Vec<i64> { v.iter().map(|s| s.parse().unwrap()).collect() };
                        json!({
                            "field": "Q",
                            "dim": g.dim,
                            "basis": g.basis_labels.iter().map(ints).collect::<Vec<_>>(),
                            "torsion_subbasis": g.torsion_labels.iter().map(ints).collect::<Vec<_>>(),
                            "symbols": {},
                            "local_dims": g.local_dims,
                            "places": prob.places.iter().map(|p| p.label.clone()).collect::<Vec<_>>(),
                        })
                    }),
                FieldArg::Plus | FieldArg::Minus => {
                    let sign = if matches!(field, FieldArg::Plus) { 1 } else { -1 };
                    selmer::selmer_dim_j_over_quad(p, sign).map(|r| {
                        json!({
                            "field": format!("Q(sqrt({}))", r.d),
                            "dim": r.dim,
                            "basis": r.group.basis_labels,
                            "torsion_subbasis": r.group.torsion_labels,
                            "symbols": r.symbols.iter().cloned().collect::<std::collections::BTreeMap<_, _>>(),
                            "local_dims": r.group.local_dims,
                            "relations": r.relations,
                            "notes": r.notes,
                        })
                    })
                }
            };
            match result {
                Ok(v) => {
                    emit(out, &v)?;
                    Ok(EXIT_OK)
                }
                Err(e) => fail(out, &e),
            }
        }
        Command::Report { p, field, json: _, text, cache } => {
            if !is_valid_p(p) {
                return usage(err, &format!("{p} is not a prime > 3"));
            }
            let cache = open_cache(cache)?;
            match cached_report(p, field, cache.as_ref()) {
                Ok(record) => {
                    if text {
                        let r: family::PrimeReport = serde_json::from_value(record.result).expect("cached report parses");
                        write!(out, "{}", report_text(&r))?;
                    } else {
                        emit(out, &record.result)?;
                    }
                    Ok(EXIT_OK)
                }
                Err(e) => fail(out, &e),
            }
        }
        Command::Scan { from, to, class, jobs, cache } => {
            if from > to {
                return usage(err, "--from must not exceed --to");
            }
            let filter = match class.as_deref().map(parse_class).transpose() {
                Ok(f) => f,
                Err(m) => return usage(err, &m),
            };
            let cache = open_cache(cache)?;
            let primes: Vec<u64> = arith::primes_in(from.max(5), to)
                .into_iter()
                .filter(|p| filter.is_none_or(|(r, m)| p % m == r))
                .collect();
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
                Ok(p) => p,
                Err(e) => return usage(err, &e.to_string()),
            };
            let lines: Vec<Value> = pool.install(|| {
                primes
                    .par_iter()
                    .map(|&p| match cached_report(p, ReportField::Auto, cache.as_ref()) {
                        Ok(r) => to_json(&r),
                        Err(e) => {
                            let mut v = error_json(&e);
                            v["p"] = json!(p);
                            v
                        }
                    })
                    .collect()
            });
            for v in lines {
                writeln!(out, "{}", serde_json::to_string(&v).expect("serializable"))?;
            }
            Ok(EXIT_OK)
        }
        Command::Points { p, exhaustive } => {
            if !is_valid_p(p) {
                return usage(err, &format!("{p} is not a prime > 3"));
            }
            let mut v = match points::weierstrass_only(p) {
                Ok(r) => json!({
                    "points": r.points.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                    "complete": r.complete,
                    "certificates": to_json(&r),
                }),
                Err(e) => {
                    let mut v = error_json(&e);
                    v["points"] = json!(null);
                    v
                }
            };
            if exhaustive {
                match points::exhaustive_survey(p) {
                    Ok(s) => {
                        v["survey"] = to_json(&s);
                        v["survey"]["label"] = json!("upper set, not exact: pair-conic local filter only");
                    }
                    Err(e) => v["survey"] = error_json(&e),
                }
            }
            emit(out, &v)?;
            Ok(if v.get("error").is_some() { EXIT_INTERNAL } else { EXIT_OK })
        }
    }
}
