//! Command-line front end. `run` parses arguments, executes one
//! subcommand and returns the process exit code: 0 on success, 2 on a
//! usage or input error, 3 when a resource budget stopped the work, 1 for
//! I/O failures. Errors go to stderr as one line of JSON.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path as FsPath, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bec::bec_leq;
use crate::beta::{feasible_window, feasible_window_pairs, Component, Edge, EdgeReport, Window};
use crate::bounds::{parse_rational, prove_p, prove_z, ProofResult};
use crate::degradation::{deg_leq, Direction};
use crate::error::{Error, Result};
use crate::path::{BitOrder, Convention, Path};
use crate::podb::{self, BuildConfig, Format, PoDb};
use crate::rules::{derive_pair, RelKind, Relation, RuleSet};
use crate::scan::ScanBudget;
use crate::sim::{self, construct, Channel, Decoder, InfoSet, Method, SweepPoint};

/// Directory searched for relative `--db` paths and default outputs.
pub const DB_DIR_ENV: &str = "POLO_DB_DIR";

#[derive(Parser, Debug)]
#[command(name = "polo", version, about = "Partial orders of polar synthetic channels")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// How channel indices map to paths.
    #[arg(long, global = true, default_value = "msb")]
    bit_order: BitOrder,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Decide the order between two paths of equal length.
    Compare(CompareArgs),
    /// Build the relation database for all paths of length n.
    Enumerate(EnumerateArgs),
    /// Pair counts of a database.
    Stats(DbArgs),
    /// Hasse diagram of one relation as DOT.
    Hasse(HasseArgs),
    /// β values whose expansion weights respect a set of pairs.
    Beta(BetaArgs),
    /// Information set by exact BEC parameters, β-expansion or a sequence file.
    Construct(ConstructArgs),
    /// SC decoding error rates over a channel sweep.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum RelationArg {
    Deg,
    Bec,
    Z,
    P,
    Auto,
}

#[derive(Args, Debug)]
struct RuleFlags {
    /// Longest inserted string for the insertion rules.
    #[arg(long, default_value_t = 3)]
    tau_budget: usize,
    /// Rule applications allowed on one branch of the backward search.
    #[arg(long, default_value_t = 3)]
    max_depth: usize,
    /// Longest paths decided by exact polynomial comparison.
    #[arg(long, default_value_t = 10)]
    exact_max_len: usize,
}

impl RuleFlags {
    fn rules(&self) -> RuleSet {
        RuleSet {
            tau_budget: self.tau_budget,
            max_depth: self.max_depth,
            exact_max_len: self.exact_max_len,
            ..RuleSet::default()
        }
    }
}

#[derive(Args, Debug)]
struct CompareArgs {
    a: Path,
    b: Path,
    #[arg(long, value_enum, default_value = "auto")]
    relation: RelationArg,
    #[command(flatten)]
    rule_flags: RuleFlags,
    /// Wall-clock budget in seconds for the rule search.
    #[arg(long, default_value_t = 60.0)]
    time_budget: f64,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    /// Output file; `.json` selects JSON, anything else the binary format.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
    /// Wall-clock budget in seconds.
    #[arg(long, default_value_t = 1800.0)]
    time_budget: f64,
    /// Cap on pairs needing the slow exact fallback.
    #[arg(long)]
    max_pairs: Option<u64>,
    /// Saturate degradation with the suffix-exchange rule.
    #[arg(long)]
    rule3: bool,
    /// Reference degradation count used to pick the configuration.
    #[arg(long)]
    reference: Option<u64>,
    /// Largest n accepted.
    #[arg(long, default_value_t = 10)]
    max_n: usize,
}

#[derive(Args, Debug)]
struct DbArgs {
    #[arg(long)]
    db: PathBuf,
}

#[derive(Args, Debug)]
struct HasseArgs {
    #[arg(long)]
    db: PathBuf,
    #[arg(long, default_value = "z")]
    kind: RelKind,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BetaArgs {
    #[arg(long, conflicts_with = "pairs", required_unless_present = "pairs")]
    db: Option<PathBuf>,
    #[arg(long, default_value = "z")]
    kind: RelKind,
    /// Text file with one `worse better` path pair per line.
    #[arg(long)]
    pairs: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    /// Needed by `--method bec` without an explicit erasure probability.
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// `bec[:eps]`, `beta:B` or `file:PATH`.
    #[arg(long)]
    method: String,
    /// Swap list: `remove add` per line.
    #[arg(long)]
    mods: Option<PathBuf>,
    /// Also write the indices one per line.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    info_set: PathBuf,
    /// `awgn` (swept by `--snr-db`), `bec:EPS`, `bsc:P` or `awgn:SIGMA`.
    #[arg(long, default_value = "awgn")]
    channel: String,
    /// `Eb/N0` in dB as `A:STEP:B` or a single value.
    #[arg(long)]
    snr_db: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    frames: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "exact")]
    decoder: Decoder,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Runs the tool with stdout and stderr as sinks.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let line = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("usage error");
            report(err, "usage", line.trim_start_matches("error: "), 2);
            return 2;
        }
    };
    if let Some(w) = cli.workers {
        if w == 0 {
            report(err, "usage", "--workers must be at least 1", 2);
            return 2;
        }
        // Only the first call in a process takes effect; later runs keep
        // the existing pool, which does not change any output.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let (kind, code) = classify(&e);
            report(err, kind, &e.to_string(), code);
            code
        }
    }
}

fn classify(e: &Error) -> (&'static str, i32) {
    match e {
        Error::Budget(_) | Error::Incomplete(_) => ("budget", 3),
        Error::Io(_) => ("io", 1),
        _ => ("usage", 2),
    }
}

fn report(err: &mut dyn Write, kind: &str, message: &str, code: i32) {
    let v = json!({ "error": kind, "message": message, "code": code });
    let _ = writeln!(err, "{v}");
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let conv = Convention {
        order: cli.bit_order,
        base: 0,
    };
    match &cli.cmd {
        Cmd::Compare(a) => compare(a, out),
        Cmd::Enumerate(a) => enumerate(a, out),
        Cmd::Stats(a) => stats(a, out),
        Cmd::Hasse(a) => hasse(a, out),
        Cmd::Beta(a) => beta(a, out),
        Cmd::Construct(a) => construct_cmd(a, conv, out),
        Cmd::Simulate(a) => simulate(a, conv, out),
    }
}

fn print_json<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<()> {
    serde_json::to_writer(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn check_pair(a: &Path, b: &Path) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::Leq => "LEQ",
        Direction::Geq => "GEQ",
        Direction::Equal => "EQUAL",
        Direction::Incomparable => "INCOMPARABLE",
    }
}

fn compare(args: &CompareArgs, out: &mut dyn Write) -> Result<i32> {
    let (a, b) = (&args.a, &args.b);
    check_pair(a, b)?;
    let v = match args.relation {
        RelationArg::Deg => {
            let v = deg_leq(a, b)?;
            let verdict = match v.direction {
                Direction::Leq => format!("{a} ≼_DEG {b}"),
                Direction::Geq => format!("{b} ≼_DEG {a}"),
                _ => direction_name(v.direction).to_string(),
            };
            json!({
                "relation": "deg",
                "a": a, "b": b,
                "direction": direction_name(v.direction),
                "verdict": verdict,
                "trace": v.trace,
            })
        }
        RelationArg::Bec => {
            let v = bec_leq(a, b)?;
            let verdict = match v.relation {
                Direction::Leq => format!("{a} ≼_BEC {b}"),
                Direction::Geq => format!("{b} ≼_BEC {a}"),
                d => direction_name(d).to_string(),
            };
            let witnesses = v.witnesses().map(|(x, y)| json!([x.to_string(), y.to_string()]));
            json!({
                "relation": "bec",
                "a": a, "b": b,
                "direction": direction_name(v.relation),
                "verdict": verdict,
                "certificate": v.certificate(),
                "witnesses": witnesses,
            })
        }
        RelationArg::Z | RelationArg::P => {
            let kind = if args.relation == RelationArg::Z { RelKind::Z } else { RelKind::P };
            compare_criterion(a, b, kind, args)?
        }
        RelationArg::Auto => compare_auto(a, b, args)?,
    };
    print_json(out, &v)?;
    Ok(0)
}

fn proof_json(worse: &Path, better: &Path, kind: RelKind, proof: &ProofResult) -> Option<Value> {
    let step = proof.first()?;
    let rule = if kind == RelKind::Z { "z-criterion" } else { "p-criterion" };
    let (pw, pb) = &step.premise;
    Some(json!({
        "relation": kind.name(),
        "a": worse, "b": better,
        "direction": "LEQ",
        "verdict": format!("{worse} {} {better}", kind.symbol()),
        "rule": rule,
        "strategy": step.strategy.name(),
        "premise": format!("{pw} ≼_BEC {pb}"),
        "residual_degree": step.residual_degree(),
        "certificate": step.certificate,
        "steps": proof.steps.len(),
    }))
}

/// Direct criterion in both directions, then the rule search.
fn compare_criterion(a: &Path, b: &Path, kind: RelKind, args: &CompareArgs) -> Result<Value> {
    let prove = |w: &Path, g: &Path| if kind == RelKind::Z { prove_z(w, g) } else { prove_p(w, g) };
    if a == b {
        return Ok(json!({ "relation": kind.name(), "a": a, "b": b, "direction": "EQUAL", "verdict": "EQUAL" }));
    }
    for (w, g, dir) in [(a, b, "LEQ"), (b, a, "GEQ")] {
        let p = prove(w, g)?;
        if p.proven {
            let mut v = proof_json(w, g, kind, &p).expect("proven result has a step");
            v["a"] = json!(a);
            v["b"] = json!(b);
            v["direction"] = json!(dir);
            return Ok(v);
        }
    }
    let rules = args.rule_flags.rules();
    let deadline = Instant::now() + Duration::from_secs_f64(args.time_budget.max(0.0));
    for (w, g, dir) in [(a, b, "LEQ"), (b, a, "GEQ")] {
        if let Some(r) = derive_pair(w, g, kind, &rules)? {
            return Ok(relation_json(a, b, dir, &r));
        }
        if Instant::now() > deadline {
            return Err(Error::Budget("compare search exceeded its time budget".into()));
        }
    }
    Ok(json!({ "relation": kind.name(), "a": a, "b": b, "direction": "UNDECIDED", "verdict": "UNDECIDED" }))
}

fn relation_json(a: &Path, b: &Path, dir: &str, r: &Relation) -> Value {
    json!({
        "relation": r.kind.name(),
        "a": a, "b": b,
        "direction": dir,
        "verdict": r.statement(),
        "rule": r.rule.name(),
        "trace": r,
        "proof": r.to_text(),
    })
}

/// Strongest kind derivable in either direction: degradation, then `Z`
/// and `P`, then BEC.
fn compare_auto(a: &Path, b: &Path, args: &CompareArgs) -> Result<Value> {
    if a == b {
        return Ok(json!({ "relation": "auto", "a": a, "b": b, "direction": "EQUAL", "verdict": "EQUAL", "holds": ["deg", "z", "p", "bec"] }));
    }
    let rules = args.rule_flags.rules();
    let deadline = Instant::now() + Duration::from_secs_f64(args.time_budget.max(0.0));
    for (w, g, dir) in [(a, b, "LEQ"), (b, a, "GEQ")] {
        let mut found: Vec<Relation> = Vec::new();
        for kind in [RelKind::Deg, RelKind::Z, RelKind::P, RelKind::Bec] {
            if found.iter().any(|r| r.kind == RelKind::Deg) {
                break;
            }
            if kind == RelKind::Bec && !found.is_empty() {
                break;
            }
            if let Some(r) = derive_pair(w, g, kind, &rules)? {
                found.push(r);
            }
            if Instant::now() > deadline {
                return Err(Error::Budget("compare search exceeded its time budget".into()));
            }
        }
        if let Some(best) = found.first() {
            let mut v = relation_json(a, b, dir, best);
            let mut holds: Vec<&str> = found.iter().map(|r| r.kind.name()).collect();
            // Every order implies BEC; degradation implies all.
            if best.kind == RelKind::Deg {
                holds = vec!["deg", "z", "p", "bec"];
            } else if best.kind != RelKind::Bec {
                holds.push("bec");
            }
            v["relation"] = json!("auto");
            v["strongest"] = json!(best.kind.name());
            v["holds"] = json!(holds);
            v["also"] = json!(found[1..].iter().map(|r| r.statement()).collect::<Vec<_>>());
            return Ok(v);
        }
    }
    Ok(json!({ "relation": "auto", "a": a, "b": b, "direction": "UNDECIDED", "verdict": "UNDECIDED", "holds": [] }))
}

fn db_dir() -> Option<PathBuf> {
    std::env::var_os(DB_DIR_ENV).map(PathBuf::from)
}

/// Relative paths that do not exist here are looked up in `POLO_DB_DIR`.
fn resolve_db(p: &FsPath) -> PathBuf {
    if p.is_relative() && !p.exists() {
        if let Some(dir) = db_dir() {
            return dir.join(p);
        }
    }
    p.to_path_buf()
}

pub fn load_db(p: &FsPath) -> Result<PoDb> {
    let p = resolve_db(p);
    let mut head = [0u8; 4];
    let mut f = File::open(&p)?;
    let got = f.read(&mut head)?;
    let f = BufReader::new(File::open(&p)?);
    if got == 4 && &head == podb::MAGIC {
        podb::read_binary(f)
    } else {
        podb::read_json(f)
    }
}

fn format_for(path: &FsPath, explicit: Option<Format>) -> Format {
    explicit.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        Some("dot") => Format::Dot,
        _ => Format::Binary,
    })
}

fn enumerate(args: &EnumerateArgs, out: &mut dyn Write) -> Result<i32> {
    if args.n == 0 || args.n > args.max_n {
        return Err(Error::InvalidParameter(format!(
            "n = {} outside 1..={} (raise --max-n deliberately)",
            args.n, args.max_n
        )));
    }
    let path = match &args.out {
        Some(p) => p.clone(),
        None => db_dir()
            .map(|d| d.join(format!("n{}.podb", args.n)))
            .ok_or_else(|| Error::InvalidParameter(format!("--out missing and {DB_DIR_ENV} unset")))?,
    };
    let mut config = BuildConfig::for_n(args.n);
    config.deg_rule3 = args.rule3;
    config.max_n = args.max_n;
    if args.reference.is_some() {
        config.reference_deg_pairs = args.reference;
    }
    config.budget = ScanBudget {
        deadline: Some(Instant::now() + Duration::from_secs_f64(args.time_budget.max(0.0))),
        max_slow_pairs: args.max_pairs,
    };
    let (db, report) = podb::build(args.n, &config)?;
    let format = format_for(&path, args.format);
    let w = BufWriter::new(File::create(&path)?);
    podb::export(&db, format, RelKind::Z, w)?;
    let s = podb::stats(&db);
    print_json(
        out,
        &json!({
            "out": path.display().to_string(),
            "n": args.n,
            "complete": db.is_complete(),
            "deg_rule3": db.header.deg_rule3,
            "matched_reference": db.header.matched_reference,
            "deg_pairs_base": db.header.deg_pairs_base,
            "deg_pairs_rule3": db.header.deg_pairs_rule3,
            "deg": s.deg,
            "z_known": s.z_known,
            "z_new": s.z_new,
            "seconds": report.seconds,
        }),
    )?;
    if !db.is_complete() {
        return Err(Error::Budget(format!(
            "enumeration stopped early; partial database written to {}",
            path.display()
        )));
    }
    Ok(0)
}

fn stats(args: &DbArgs, out: &mut dyn Write) -> Result<i32> {
    let db = load_db(&args.db)?;
    let s = podb::stats(&db);
    let conventions = if db.n() == 10 && db.is_complete() {
        Some(podb::pu_conventions(&db)?.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    } else {
        None
    };
    print_json(
        out,
        &json!({
            "stats": s,
            "header": db.header,
            "reference_pair_conventions": conventions,
        }),
    )?;
    Ok(0)
}

fn hasse(args: &HasseArgs, out: &mut dyn Write) -> Result<i32> {
    let db = load_db(&args.db)?;
    match &args.out {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            podb::write_dot(&db, args.kind, &mut w)?;
            w.flush()?;
            print_json(out, &json!({ "out": p.display().to_string(), "kind": args.kind.name() }))?;
        }
        None => podb::write_dot(&db, args.kind, out)?,
    }
    Ok(0)
}

/// `x` to ten significant digits.
fn sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = 9 - x.abs().log10().floor() as i32;
    if digits >= 0 {
        format!("{:.*}", digits as usize, x)
    } else {
        format!("{x:.9e}")
    }
}

fn edge_json(e: &Edge) -> Value {
    let r = EdgeReport::from(e);
    json!({
        "kind": r.kind,
        "value": r.approx.map(sig10),
        "isolating_interval": match (r.lo, r.hi) {
            (Some(lo), Some(hi)) => json!([lo, hi]),
            _ => Value::Null,
        },
    })
}

fn component_json(c: &Component) -> Value {
    json!({ "lo": edge_json(&c.lo), "hi": edge_json(&c.hi), "text": c.to_string() })
}

pub fn read_pairs(text: &str) -> Result<Vec<(Path, Path)>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).collect();
        match f.as_slice() {
            [w, b] => out.push((w.parse()?, b.parse()?)),
            _ => return Err(Error::Format(format!("line {}: expected `worse better`", no + 1))),
        }
    }
    Ok(out)
}

fn beta(args: &BetaArgs, out: &mut dyn Write) -> Result<i32> {
    let window: Window = match (&args.db, &args.pairs) {
        (Some(db), _) => feasible_window(&load_db(db)?, args.kind)?,
        (None, Some(p)) => {
            let pairs = read_pairs(&std::fs::read_to_string(p)?)?;
            feasible_window_pairs(pairs.iter().map(|(w, b)| (w, b)))?
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    print_json(
        out,
        &json!({
            "pairs": window.pairs,
            "distinct_constraints": window.distinct_constraints,
            "window": window.main.as_ref().map(component_json),
            "union": window.union.components.iter().map(component_json).collect::<Vec<_>>(),
        }),
    )?;
    Ok(0)
}

/// `bec[:eps]`, `beta:B`, `file:PATH`.
fn parse_method(spec: &str, channel: Option<&str>, n: usize) -> Result<Method> {
    let (name, value) = match spec.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (spec, None),
    };
    match name {
        "bec" => {
            let eps = match value {
                Some(v) => v.to_string(),
                None => match channel.and_then(|c| c.split_once(':')) {
                    Some(("bec", v)) => v.to_string(),
                    _ => {
                        return Err(Error::InvalidParameter(
                            "method bec needs bec:EPS or --channel bec:EPS".into(),
                        ))
                    }
                },
            };
            Ok(Method::Bec(parse_rational(&eps)?))
        }
        "beta" => {
            let v = value.ok_or_else(|| Error::InvalidParameter("method beta needs beta:B".into()))?;
            let b: f64 = v
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad beta {v:?}")))?;
            Ok(Method::Beta(b))
        }
        "file" => {
            let v = value.ok_or_else(|| Error::InvalidParameter("method file needs file:PATH".into()))?;
            Ok(Method::Sequence(construct::read_sequence(FsPath::new(v), n)?))
        }
        _ => Err(Error::InvalidParameter(format!("unknown method {spec:?}"))),
    }
}

fn construct_cmd(args: &ConstructArgs, conv: Convention, out: &mut dyn Write) -> Result<i32> {
    if let Some(c) = &args.channel {
        c.parse::<Channel>()?;
    }
    let method = parse_method(&args.method, args.channel.as_deref(), args.n)?;
    let swaps = match &args.mods {
        Some(p) => construct::parse_swaps(&std::fs::read_to_string(p)?)?,
        None => Vec::new(),
    };
    let to_code = |l: usize| conv.code_of_label(l as u64, args.n).map(|c| c as usize);
    let swaps = swaps
        .into_iter()
        .map(|(r, a)| Ok((to_code(r)?, to_code(a)?)))
        .collect::<Result<Vec<_>>>()?;
    let set = sim::build_info_set(args.n, args.k, &method, &swaps)?;
    let mut labels: Vec<u64> = set.indices.iter().map(|&i| conv.label_of_code(i as u64, args.n)).collect();
    labels.sort_unstable();
    if let Some(p) = &args.out {
        let text: String = labels.iter().map(|l| format!("{l}\n")).collect();
        std::fs::write(p, text)?;
    }
    print_json(
        out,
        &json!({ "n": set.n, "k": set.k, "method": args.method, "swaps": swaps.len(), "indices": labels }),
    )?;
    Ok(0)
}

fn simulate(args: &SimulateArgs, conv: Convention, out: &mut dyn Write) -> Result<i32> {
    let labels = construct::parse_indices(&std::fs::read_to_string(&args.info_set)?)?;
    let codes = labels
        .into_iter()
        .map(|l| conv.code_of_label(l as u64, args.n).map(|c| c as usize))
        .collect::<Result<Vec<_>>>()?;
    let info = InfoSet::new(args.n, codes)?;
    if info.k != args.k {
        return Err(Error::InvalidParameter(format!(
            "information set has {} indices, --k is {}",
            info.k, args.k
        )));
    }
    let rate = args.k as f64 / info.len() as f64;
    let points: Vec<SweepPoint> = if args.channel.eq_ignore_ascii_case("awgn") {
        let range = args
            .snr_db
            .as_deref()
            .ok_or_else(|| Error::InvalidParameter("channel awgn needs --snr-db".into()))?;
        sim::awgn_sweep(&sim::parse_range(range)?, rate)?
    } else {
        let ch: Channel = args.channel.parse()?;
        let label = match ch {
            Channel::Bec(v) | Channel::Bsc(v) | Channel::Awgn(v) => v,
        };
        vec![SweepPoint { label, channel: ch }]
    };
    let results = sim::simulate(&points, &info, args.frames, args.seed, args.decoder)?;
    match &args.out {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            sim::write_csv(&results, &mut w)?;
            w.flush()?;
        }
        None => sim::write_csv(&results, out)?,
    }
    Ok(0)
}
