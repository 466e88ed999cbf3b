//! Pairwise relation database over all `2^n` paths of one length.
//!
//! Pairs are keyed by MSB-first path codes, worse path first. Each entry
//! carries a kind mask (`DEG`, `Z`, `P`, `BEC`) and the rule that put each
//! kind there.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bitmat::BitMatrix;
use crate::degradation::DegLevels;
use crate::error::{Error, Result};
use crate::path::{Convention, Path};
use crate::rules::{RelKind, RelationStore, Rule};
use crate::scan::{z_criterion_scan, ScanBudget, ScanCounts};

pub const MAGIC: &[u8; 4] = b"POLO";
pub const FORMAT_VERSION: u16 = 1;
pub const HEADER_LEN: usize = 24;
pub const RECORD_LEN: usize = 9;

/// Degradation pair count the n=10 build is checked against.
pub const REFERENCE_DEG_PAIRS_N10: u64 = 328_155;

/// The five n=10 pairs `(better, worse)` in printed labels.
pub const PU_PAIRS: [(u64, u64); 5] = [(719, 250), (840, 372), (907, 466), (909, 690), (921, 482)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Entry {
    pub mask: u8,
    pub rules: [Option<Rule>; 4],
}

impl Entry {
    pub fn has(&self, kind: RelKind) -> bool {
        self.mask & kind.bit() != 0
    }

    pub fn kinds(&self) -> Vec<RelKind> {
        RelKind::from_mask(self.mask)
    }

    fn add(&mut self, kind: RelKind, rule: Rule) {
        self.mask |= kind.bit();
        self.rules[kind.index()].get_or_insert(rule);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DbHeader {
    pub n: usize,
    pub complete: bool,
    /// Whether degradation was saturated with the suffix-exchange rule.
    pub deg_rule3: bool,
    /// Degradation pair counts without and (when computed) with the
    /// suffix-exchange rule.
    pub deg_pairs_base: Option<u64>,
    pub deg_pairs_rule3: Option<u64>,
    /// Configuration that matched the reference count, if any.
    pub matched_reference: Option<String>,
    pub convention: Convention,
}

impl DbHeader {
    fn new(n: usize) -> Self {
        Self {
            n,
            complete: true,
            deg_rule3: false,
            deg_pairs_base: None,
            deg_pairs_rule3: None,
            matched_reference: None,
            convention: Convention::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoDb {
    pub header: DbHeader,
    entries: BTreeMap<(u32, u32), Entry>,
}

#[derive(Debug, Clone)]
pub struct BuildConfig {
    pub deg_rule3: bool,
    /// When set and the base degradation count differs, the
    /// suffix-exchange configuration is computed too and the matching one
    /// is kept.
    pub reference_deg_pairs: Option<u64>,
    pub max_n: usize,
    pub budget: ScanBudget,
}

impl Default for BuildConfig {
    fn default() -> Self {
        Self {
            deg_rule3: false,
            reference_deg_pairs: None,
            max_n: 10,
            budget: ScanBudget::default(),
        }
    }
}

impl BuildConfig {
    /// Default configuration, with the reference count attached at n=10.
    pub fn for_n(n: usize) -> Self {
        Self {
            reference_deg_pairs: (n == 10).then_some(REFERENCE_DEG_PAIRS_N10),
            ..Self::default()
        }
    }
}

/// Everything `build` measured besides the database itself.
#[derive(Debug, Clone)]
pub struct BuildReport {
    pub scan: ScanCounts,
    pub seconds: f64,
}

impl PoDb {
    pub fn new(n: usize) -> Self {
        Self {
            header: DbHeader::new(n),
            entries: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.header.n
    }

    pub fn is_complete(&self) -> bool {
        self.header.complete
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, worse: u32, better: u32) -> Option<&Entry> {
        self.entries.get(&(worse, better))
    }

    pub fn holds(&self, kind: RelKind, worse: &Path, better: &Path) -> bool {
        self.get(worse.code() as u32, better.code() as u32)
            .is_some_and(|e| e.has(kind))
    }

    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), &Entry)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    /// Adds one fact. Self pairs and pairs whose reverse already carries
    /// the same kind are refused.
    pub fn insert(&mut self, kind: RelKind, worse: u32, better: u32, rule: Rule) -> Result<bool> {
        let size = 1u64 << self.n();
        if worse == better || worse as u64 >= size || better as u64 >= size {
            return Err(Error::InvalidParameter(format!("bad pair ({worse}, {better})")));
        }
        if self.get(better, worse).is_some_and(|e| e.has(kind)) {
            return Err(Error::InvalidParameter(format!(
                "pair ({worse}, {better}) already stored reversed for {kind}"
            )));
        }
        let e = self.entries.entry((worse, better)).or_default();
        let fresh = !e.has(kind);
        e.add(kind, rule);
        Ok(fresh)
    }

    pub fn count(&self, kind: RelKind) -> usize {
        self.entries.values().filter(|e| e.has(kind)).count()
    }

    /// Bit matrix of one kind.
    pub fn matrix(&self, kind: RelKind) -> BitMatrix {
        let mut m = BitMatrix::new(1 << self.n());
        for (&(w, b), e) in &self.entries {
            if e.has(kind) {
                m.set(w as usize, b as usize);
            }
        }
        m
    }

    /// Every relation a saturated store holds at its top length.
    pub fn from_store(store: &RelationStore) -> Self {
        let n = store.n();
        let mut db = Self::new(n);
        db.header.complete = store.is_complete();
        for kind in RelKind::ALL {
            for (i, j) in store.matrix(n, kind).iter() {
                let f = crate::rules::FactId::new(kind, n, i as u64, j as u64);
                let rule = store.provenance(&f).map(|p| p.rule).unwrap_or(Rule::Transitive);
                db.entries.entry((i as u32, j as u32)).or_default().add(kind, rule);
            }
        }
        db
    }
}

/// Degradation pairs plus the pairs certified `≼_Z` by the exact
/// criterion scan.
pub fn build(n: usize, config: &BuildConfig) -> Result<(PoDb, BuildReport)> {
    if n == 0 || n > config.max_n {
        return Err(Error::Budget(format!("n = {n} exceeds the configured limit {}", config.max_n)));
    }
    let start = Instant::now();
    let mut db = PoDb::new(n);
    let base = DegLevels::new(n, false);
    let base_count = base.level(n).count();
    db.header.deg_pairs_base = Some(base_count);
    let mut deg = base;
    if config.deg_rule3 {
        deg = DegLevels::new(n, true);
        db.header.deg_pairs_rule3 = Some(deg.level(n).count());
        db.header.deg_rule3 = true;
    }
    if let Some(target) = config.reference_deg_pairs {
        if base_count == target && !config.deg_rule3 {
            db.header.matched_reference = Some("base".into());
        } else {
            let with3 = if config.deg_rule3 { deg.clone() } else { DegLevels::new(n, true) };
            let c3 = with3.level(n).count();
            db.header.deg_pairs_rule3 = Some(c3);
            if base_count == target {
                db.header.matched_reference = Some("base".into());
                deg = DegLevels::new(n, false);
                db.header.deg_rule3 = false;
            } else if c3 == target {
                db.header.matched_reference = Some("suffix-exchange".into());
                deg = with3;
                db.header.deg_rule3 = true;
            }
        }
    }
    for (i, j) in deg.level(n).iter() {
        db.entries
            .entry((i as u32, j as u32))
            .or_default()
            .add(RelKind::Deg, Rule::Degradation);
    }
    let scan = z_criterion_scan(n, config.budget);
    for (i, j) in scan.holds.iter() {
        db.entries
            .entry((i as u32, j as u32))
            .or_default()
            .add(RelKind::Z, Rule::ZCriterion);
    }
    db.header.complete = scan.complete;
    let report = BuildReport {
        scan: scan.counts,
        seconds: start.elapsed().as_secs_f64(),
    };
    Ok((db, report))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub n: usize,
    pub complete: bool,
    pub total_pairs: u64,
    /// `P_k`: degradation pairs.
    pub deg: u64,
    /// `P_b` read as the raw criterion set.
    pub z_criterion: u64,
    /// `P_b` read as everything known `≼_Z`, degradation included.
    pub z_known: u64,
    /// `P_b \ P_k`.
    pub z_new: u64,
    /// `P_k \ P_b` under the raw reading.
    pub deg_not_criterion: u64,
    /// Pairs with no known order in either direction.
    pub unknown: u64,
    pub p: u64,
    pub bec: u64,
}

impl Stats {
    pub fn proportion(&self, count: u64) -> f64 {
        if self.total_pairs == 0 {
            0.0
        } else {
            count as f64 / self.total_pairs as f64
        }
    }
}

pub fn stats(db: &PoDb) -> Stats {
    let size = 1u64 << db.n();
    let total_pairs = size * (size - 1) / 2;
    let (mut deg, mut zc, mut zk, mut znew, mut dnc, mut p, mut bec) = (0, 0, 0, 0, 0, 0, 0);
    let mut ordered = std::collections::HashSet::new();
    for (&(w, b), e) in &db.entries {
        let d = e.has(RelKind::Deg);
        let z = e.has(RelKind::Z);
        deg += d as u64;
        zc += z as u64;
        zk += (d || z) as u64;
        znew += (z && !d) as u64;
        dnc += (d && !z) as u64;
        p += e.has(RelKind::P) as u64;
        bec += e.has(RelKind::Bec) as u64;
        if e.mask != 0 {
            ordered.insert((w.min(b), w.max(b)));
        }
    }
    Stats {
        n: db.n(),
        complete: db.is_complete(),
        total_pairs,
        deg,
        z_criterion: zc,
        z_known: zk,
        z_new: znew,
        deg_not_criterion: dnc,
        unknown: total_pairs - ordered.len() as u64,
        p,
        bec,
    }
}

/// Whether all five reference pairs are new `≼_Z` pairs (certified, not
/// degradation) when labels are read with `convention`.
pub fn contains_pu(db: &PoDb, convention: Convention) -> Result<bool> {
    if !db.is_complete() {
        return Err(Error::Incomplete("database is partial".into()));
    }
    if db.n() != 10 {
        return Err(Error::InvalidParameter(format!("reference pairs need n = 10, got {}", db.n())));
    }
    for (better, worse) in PU_PAIRS {
        let w = convention.code_of_label(worse, 10)? as u32;
        let b = convention.code_of_label(better, 10)? as u32;
        let ok = db
            .get(w, b)
            .is_some_and(|e| e.has(RelKind::Z) && !e.has(RelKind::Deg));
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Conventions under which `contains_pu` holds.
pub fn pu_conventions(db: &PoDb) -> Result<Vec<Convention>> {
    let mut out = Vec::new();
    for c in Convention::ALL {
        if contains_pu(db, c)? {
            out.push(c);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Binary,
    Dot,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "binary" | "bin" => Ok(Format::Binary),
            "dot" => Ok(Format::Dot),
            _ => Err(Error::InvalidParameter(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonPair {
    worse: Path,
    better: Path,
    kinds: Vec<RelKind>,
    rules: Vec<Rule>,
}

#[derive(Serialize, Deserialize)]
struct JsonDb {
    header: DbHeader,
    pairs: Vec<JsonPair>,
}

pub fn write_json<W: Write>(db: &PoDb, out: W) -> Result<()> {
    let n = db.n();
    let pairs = db
        .entries
        .iter()
        .map(|(&(w, b), e)| JsonPair {
            worse: Path::from_code(w as u64, n),
            better: Path::from_code(b as u64, n),
            kinds: e.kinds(),
            rules: e.kinds().iter().filter_map(|k| e.rules[k.index()]).collect(),
        })
        .collect();
    serde_json::to_writer(
        out,
        &JsonDb {
            header: db.header.clone(),
            pairs,
        },
    )?;
    Ok(())
}

pub fn read_json<R: Read>(input: R) -> Result<PoDb> {
    let raw: JsonDb = serde_json::from_reader(input)?;
    let n = raw.header.n;
    let mut db = PoDb {
        header: raw.header,
        entries: BTreeMap::new(),
    };
    for p in raw.pairs {
        if p.worse.len() != n || p.better.len() != n || p.kinds.len() != p.rules.len() {
            return Err(Error::Format(format!("malformed pair {} / {}", p.worse, p.better)));
        }
        for (k, r) in p.kinds.iter().zip(&p.rules) {
            db.insert(*k, p.worse.code() as u32, p.better.code() as u32, *r)?;
        }
    }
    Ok(db)
}

/// Little-endian: magic, version u16, n u8, pair count u64, 9 zero bytes,
/// then sorted `(worse u32, better u32, mask u8)` records, then the header
/// as JSON prefixed by its u32 length.
pub fn write_binary<W: Write>(db: &PoDb, mut out: W) -> Result<()> {
    let mut head = Vec::with_capacity(HEADER_LEN);
    head.extend_from_slice(MAGIC);
    head.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    head.push(db.n() as u8);
    head.extend_from_slice(&(db.entries.len() as u64).to_le_bytes());
    head.resize(HEADER_LEN, 0);
    out.write_all(&head)?;
    let mut buf = Vec::with_capacity(db.entries.len() * RECORD_LEN);
    for (&(w, b), e) in &db.entries {
        buf.extend_from_slice(&w.to_le_bytes());
        buf.extend_from_slice(&b.to_le_bytes());
        buf.push(e.mask);
    }
    out.write_all(&buf)?;
    let header = serde_json::to_vec(&db.header)?;
    out.write_all(&(header.len() as u32).to_le_bytes())?;
    out.write_all(&header)?;
    Ok(())
}

/// Reads the binary format back. Rules are not stored there; each kind
/// gets its generating rule.
pub fn read_binary<R: Read>(mut input: R) -> Result<PoDb> {
    let mut head = [0u8; HEADER_LEN];
    input.read_exact(&mut head)?;
    if &head[..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = u16::from_le_bytes([head[4], head[5]]);
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let n = head[6] as usize;
    let count = u64::from_le_bytes(head[7..15].try_into().unwrap());
    let mut db = PoDb::new(n);
    let mut rec = [0u8; RECORD_LEN];
    for _ in 0..count {
        input.read_exact(&mut rec)?;
        let w = u32::from_le_bytes(rec[0..4].try_into().unwrap());
        let b = u32::from_le_bytes(rec[4..8].try_into().unwrap());
        for k in RelKind::from_mask(rec[8]) {
            let rule = match k {
                RelKind::Deg => Rule::Degradation,
                RelKind::Z => Rule::ZCriterion,
                RelKind::P => Rule::PCriterion,
                RelKind::Bec => Rule::BecExact,
            };
            db.insert(k, w, b, rule)?;
        }
    }
    let mut len = [0u8; 4];
    input.read_exact(&mut len)?;
    let mut header = vec![0u8; u32::from_le_bytes(len) as usize];
    input.read_exact(&mut header)?;
    let header: DbHeader = serde_json::from_slice(&header)?;
    if header.n != n {
        return Err(Error::Format(format!("header says n = {}, records say {n}", header.n)));
    }
    db.header = header;
    Ok(db)
}

/// Hasse diagram of one kind: the transitive reduction of its closure,
/// edges pointing from worse to better.
pub fn write_dot<W: Write>(db: &PoDb, kind: RelKind, mut out: W) -> Result<()> {
    let n = db.n();
    let mut m = db.matrix(kind);
    m.transitive_closure();
    let red = m.transitive_reduction();
    writeln!(out, "digraph {} {{", kind.name())?;
    writeln!(out, "  rankdir=BT;")?;
    for c in 0..1u64 << n {
        writeln!(out, "  \"{}\";", Path::from_code(c, n))?;
    }
    for (i, j) in red.iter() {
        writeln!(
            out,
            "  \"{}\" -> \"{}\";",
            Path::from_code(i as u64, n),
            Path::from_code(j as u64, n)
        )?;
    }
    writeln!(out, "}}")?;
    Ok(())
}

pub fn export<W: Write>(db: &PoDb, format: Format, kind: RelKind, out: W) -> Result<()> {
    match format {
        Format::Json => write_json(db, out),
        Format::Binary => write_binary(db, out),
        Format::Dot => write_dot(db, kind, out),
    }
}
