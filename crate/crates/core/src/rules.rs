//! Derivation closure over the four path orders.
//!
//! Facts come from generators (degradation moves, the exact `Z`/`P`/BEC
//! criteria, staircase and count conditions) and from rules that build
//! longer pairs out of shorter ones:
//!
//! * suffix-ones: `t1 ≼ t2`, `a ≼_Z g` give `t1 a 1^p ≼_Z t2 g 1^p`;
//! * suffix-zeros: the same for `≼_P` with `0^p`;
//! * insert-ones: `0^p a 1^r ≼_Z 1^q g 0^s` gives
//!   `0^p t a 1^k 1^r ≼_Z 1^q t g 1^k 0^s`;
//! * insert-zeros: `0^p a 1^r ≼_P 1^q g 0^s` gives
//!   `0^p t a 0^k 1^r ≼_P 1^q t g 0^k 0^s`.
//!
//! Degradation implies every other order, `≼_Z` and `≼_P` imply `≼_BEC`,
//! and each order is closed transitively. `≼_Z` and `≼_P` facts are never
//! chained with each other, only through degradation.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bec::{bec_holds, staircase_fact};
use crate::bitmat::BitMatrix;
use crate::bounds::{
    count_check, prove_p, prove_z, staircase_z_check, staircase_p_check, z_premise, CountMode, Kind,
    Strategy,
};
use crate::degradation::{deg_leq, DegLevels, Direction, MAX_BFS_LEN};
use crate::error::{Error, Result};
use crate::path::Path;
use crate::poly::{probe_says_below, probe_values};
use crate::scan::{dominance_scan, p_criterion_scans, z_criterion_scan, ScanBudget};

/// Longest path length accepted by `saturate`.
pub const MAX_SATURATE_LEN: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelKind {
    Deg,
    Z,
    P,
    Bec,
}

impl RelKind {
    pub const ALL: [RelKind; 4] = [RelKind::Deg, RelKind::Z, RelKind::P, RelKind::Bec];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Bit in a kind mask.
    pub fn bit(self) -> u8 {
        1 << self.index()
    }

    pub fn symbol(self) -> &'static str {
        match self {
            RelKind::Deg => "≼",
            RelKind::Z => "≼_Z",
            RelKind::P => "≼_P",
            RelKind::Bec => "≼_BEC",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RelKind::Deg => "deg",
            RelKind::Z => "z",
            RelKind::P => "p",
            RelKind::Bec => "bec",
        }
    }

    pub fn from_mask(mask: u8) -> Vec<RelKind> {
        Self::ALL.into_iter().filter(|k| mask & k.bit() != 0).collect()
    }
}

impl FromStr for RelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "deg" | "degradation" => Ok(RelKind::Deg),
            "z" => Ok(RelKind::Z),
            "p" => Ok(RelKind::P),
            "bec" => Ok(RelKind::Bec),
            _ => Err(Error::InvalidParameter(format!("unknown relation kind {s:?}"))),
        }
    }
}

impl std::fmt::Display for RelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Degradation,
    DegImplies,
    Weakening,
    Transitive,
    ZCriterion,
    PCriterion,
    BecExact,
    BecStaircase,
    ZStaircase,
    PStaircase,
    ZCount,
    PCount,
    SuffixOnes,
    SuffixZeros,
    InsertOnes,
    InsertZeros,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Degradation => "degradation",
            Rule::DegImplies => "deg-implies",
            Rule::Weakening => "weakening",
            Rule::Transitive => "transitive",
            Rule::ZCriterion => "z-criterion",
            Rule::PCriterion => "p-criterion",
            Rule::BecExact => "bec-exact",
            Rule::BecStaircase => "bec-staircase",
            Rule::ZStaircase => "z-staircase",
            Rule::PStaircase => "p-staircase",
            Rule::ZCount => "z-count",
            Rule::PCount => "p-count",
            Rule::SuffixOnes => "suffix-ones",
            Rule::SuffixZeros => "suffix-zeros",
            Rule::InsertOnes => "insert-ones",
            Rule::InsertZeros => "insert-zeros",
        }
    }
}

/// Parameters of a rule application, enough to rebuild the conclusion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Detail {
    None,
    Strategy { strategy: Strategy },
    Mode { mode: CountMode },
    Suffix { tau_worse: Path, tau_better: Path, p: usize },
    /// `p` zeros (resp. `q` ones) kept in front, `tau` inserted after them,
    /// `k` copies of the rule's bit inserted before the kept tail of `r`
    /// ones (resp. `s` zeros).
    Insert { p: usize, q: usize, r: usize, s: usize, tau: Path, k: usize },
}

/// A certified relation `worse ≼_kind better` with its derivation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub kind: RelKind,
    pub worse: Path,
    pub better: Path,
    pub rule: Rule,
    pub detail: Detail,
    pub premises: Vec<Relation>,
}

impl Relation {
    fn leaf(kind: RelKind, worse: &Path, better: &Path, rule: Rule, detail: Detail) -> Self {
        Self {
            kind,
            worse: worse.clone(),
            better: better.clone(),
            rule,
            detail,
            premises: Vec::new(),
        }
    }

    pub fn statement(&self) -> String {
        format!("{} {} {}", self.worse, self.kind.symbol(), self.better)
    }

    /// Number of rule applications in the tree.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Relation::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(Relation::depth).max().unwrap_or(0)
    }

    /// Every node of the tree, conclusion first.
    pub fn nodes(&self) -> Vec<&Relation> {
        let mut out = vec![self];
        for p in &self.premises {
            out.extend(p.nodes());
        }
        out
    }

    /// Indented text proof.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        self.write_text(&mut s, 0);
        s
    }

    fn write_text(&self, out: &mut String, indent: usize) {
        let detail = match &self.detail {
            Detail::None => String::new(),
            Detail::Strategy { strategy } => format!(" [{}]", strategy.name()),
            Detail::Mode { mode } => format!(" [{mode:?}]"),
            Detail::Suffix { tau_worse, tau_better, p } => {
                format!(" [tau {tau_worse} / {tau_better}, p={p}]")
            }
            Detail::Insert { p, q, r, s, tau, k } => {
                format!(" [p={p} q={q} r={r} s={s} tau={tau} k={k}]")
            }
        };
        let _ = writeln!(out, "{:indent$}{}  by {}{}", "", self.statement(), self.rule.name(), detail);
        for p in &self.premises {
            p.write_text(out, indent + 2);
        }
    }

    /// Re-checks the whole tree bottom-up: leaves by their exact
    /// certificate, inner nodes by rebuilding the conclusion.
    pub fn verify(&self) -> bool {
        self.premises.iter().all(Relation::verify) && self.verify_step()
    }

    fn premise(&self, i: usize) -> Option<&Relation> {
        self.premises.get(i)
    }

    fn verify_step(&self) -> bool {
        let (w, b) = (&self.worse, &self.better);
        if w.len() != b.len() {
            return false;
        }
        let n = w.len();
        match self.rule {
            Rule::Degradation => {
                self.kind == RelKind::Deg
                    && self.premises.is_empty()
                    && n <= MAX_BFS_LEN
                    && matches!(
                        deg_leq(w, b).map(|v| v.direction),
                        Ok(Direction::Leq | Direction::Equal)
                    )
            }
            Rule::DegImplies => {
                self.kind != RelKind::Deg
                    && self.premises.len() == 1
                    && self.same_pair(&self.premises[0], RelKind::Deg)
            }
            Rule::Weakening => {
                self.kind == RelKind::Bec
                    && self.premises.len() == 1
                    && (self.same_pair(&self.premises[0], RelKind::Z)
                        || self.same_pair(&self.premises[0], RelKind::P))
            }
            Rule::Transitive => match (self.premise(0), self.premise(1)) {
                (Some(a), Some(c)) if self.premises.len() == 2 => {
                    let ok_kind = |k: RelKind| k == self.kind || k == RelKind::Deg;
                    ok_kind(a.kind) && ok_kind(c.kind) && &a.worse == w && a.better == c.worse && &c.better == b
                }
                _ => false,
            },
            Rule::ZCriterion => {
                if self.kind != RelKind::Z {
                    return false;
                }
                match self.premises.as_slice() {
                    [] => prove_z(w, b).is_ok_and(|r| r.proven),
                    [bec] => {
                        let (_, premise) = z_premise(w, b);
                        bec.kind == RelKind::Bec && (bec.worse.clone(), bec.better.clone()) == premise
                    }
                    _ => false,
                }
            }
            Rule::PCriterion => {
                if self.kind != RelKind::P {
                    return false;
                }
                match (self.premises.as_slice(), &self.detail) {
                    ([], _) => prove_p(w, b).is_ok_and(|r| r.proven),
                    ([bec], Detail::Strategy { strategy }) => {
                        bec.kind == RelKind::Bec
                            && p_premise(w, b, *strategy).is_some_and(|(x, y)| x == bec.worse && y == bec.better)
                    }
                    _ => false,
                }
            }
            Rule::BecExact => self.kind == RelKind::Bec && self.premises.is_empty() && bec_holds(w, b),
            Rule::BecStaircase => {
                self.kind == RelKind::Bec
                    && staircase_shape(w, b).is_some_and(|(m, k)| staircase_fact(m as u32, k as u32))
            }
            Rule::ZStaircase | Rule::PStaircase => {
                let Some((m, nn, p, q)) = zero_one_split(w, b) else {
                    return false;
                };
                let z = self.rule == Rule::ZStaircase;
                if self.kind != if z { RelKind::Z } else { RelKind::P } {
                    return false;
                }
                match self.premises.as_slice() {
                    [] => {
                        let check = if z { staircase_z_check } else { staircase_p_check };
                        check(m as i64, nn as i64, p as i64, q as i64).unwrap_or(false)
                    }
                    [bec] => {
                        bec.kind == RelKind::Bec
                            && staircase_premise(z, m, nn, p, q)
                                .is_some_and(|(x, y)| x == bec.worse && y == bec.better)
                    }
                    _ => false,
                }
            }
            Rule::ZCount | Rule::PCount => {
                let (kind, rk) = if self.rule == Rule::ZCount {
                    (Kind::Z, RelKind::Z)
                } else {
                    (Kind::P, RelKind::P)
                };
                let Detail::Mode { mode } = self.detail else {
                    return false;
                };
                self.kind == rk && count_check(b, w, kind, mode).unwrap_or(false)
            }
            Rule::SuffixOnes | Rule::SuffixZeros => {
                let (rk, bit) = if self.rule == Rule::SuffixOnes {
                    (RelKind::Z, 1)
                } else {
                    (RelKind::P, 0)
                };
                let Detail::Suffix { tau_worse, tau_better, p } = &self.detail else {
                    return false;
                };
                let core = match self.premises.as_slice() {
                    [core] => {
                        if tau_worse != tau_better {
                            return false;
                        }
                        core
                    }
                    [deg, core] => {
                        if !(deg.kind == RelKind::Deg && &deg.worse == tau_worse && &deg.better == tau_better) {
                            return false;
                        }
                        core
                    }
                    _ => return false,
                };
                let tail = Path::run(bit, *p);
                self.kind == rk
                    && core.kind == rk
                    && *w == tau_worse.concat(&core.worse).concat(&tail)
                    && *b == tau_better.concat(&core.better).concat(&tail)
            }
            Rule::InsertOnes | Rule::InsertZeros => {
                let ones = self.rule == Rule::InsertOnes;
                let rk = if ones { RelKind::Z } else { RelKind::P };
                let Detail::Insert { p, q, r, s, tau, k } = &self.detail else {
                    return false;
                };
                let [core] = self.premises.as_slice() else {
                    return false;
                };
                if self.kind != rk || core.kind != rk {
                    return false;
                }
                match insert_forward(ones, &core.worse, &core.better, *p, *q, *r, *s, tau, *k) {
                    Some((x, y)) => x == *w && y == *b,
                    None => false,
                }
            }
        }
    }

    fn same_pair(&self, other: &Relation, kind: RelKind) -> bool {
        other.kind == kind && other.worse == self.worse && other.better == self.better
    }
}

/// Conclusion of an insertion rule, or `None` when the premise does not
/// have the required shape.
#[allow(clippy::too_many_arguments)]
pub fn insert_forward(
    ones: bool,
    worse: &Path,
    better: &Path,
    p: usize,
    q: usize,
    r: usize,
    s: usize,
    tau: &Path,
    k: usize,
) -> Option<(Path, Path)> {
    let n = worse.len();
    if better.len() != n || p + r > n || q + s > n {
        return None;
    }
    let shape = worse.leading(0) >= p
        && better.leading(1) >= q
        && worse.trailing(1) >= r
        && better.trailing(0) >= s;
    if !shape {
        return None;
    }
    let bit = if ones { 1 } else { 0 };
    let x = worse
        .slice(0, p)
        .concat(tau)
        .concat(&worse.slice(p, n - r))
        .concat(&Path::run(bit, k))
        .concat(&Path::ones(r));
    let y = better
        .slice(0, q)
        .concat(tau)
        .concat(&better.slice(q, n - s))
        .concat(&Path::run(bit, k))
        .concat(&Path::zeros(s));
    Some((x, y))
}

/// BEC premise used by one strategy of the `≼_P` criterion.
pub fn p_premise(worse: &Path, better: &Path, strategy: Strategy) -> Option<(Path, Path)> {
    let n = worse.len();
    match strategy {
        Strategy::ZDomain => Some(if n >= 1 && worse.ends_with(&[0]) && better.starts_with(&[1]) {
            (worse.slice(0, n - 1), better.slice(1, n))
        } else {
            (worse.with_prefix(1), better.with_suffix(0))
        }),
        Strategy::TDomain => {
            let q = better.leading(0);
            (q < n).then(|| (worse.clone(), Path::zeros(q + 1).concat(&better.slice(q + 1, n))))
        }
        _ => None,
    }
}

/// `(m, k)` when `worse = 1^m 0^k` and `better = 0^m 1^k`.
fn staircase_shape(worse: &Path, better: &Path) -> Option<(usize, usize)> {
    let m = worse.leading(1);
    let k = worse.len() - m;
    (worse.leading(1) + worse.trailing(0) == worse.len().max(m + k)
        && worse.trailing(0) == k
        && better.leading(0) == m
        && better.trailing(1) == k
        && better.len() == m + k)
        .then_some((m, k))
}

/// `(m, n, p, q)` when `worse = 0^m 1^n` and `better = 1^p 0^q`.
fn zero_one_split(worse: &Path, better: &Path) -> Option<(usize, usize, usize, usize)> {
    let m = worse.leading(0);
    let n = worse.len() - m;
    let p = better.leading(1);
    let q = better.len() - p;
    (worse.trailing(1) == n && better.trailing(0) == q).then_some((m, n, p, q))
}

fn staircase_premise(z: bool, m: usize, n: usize, p: usize, q: usize) -> Option<(Path, Path)> {
    if p == 0 || (z && n == 0) {
        return None;
    }
    Some(if z {
        (Path::zeros(m).concat(&Path::ones(n - 1)), Path::ones(p - 1).concat(&Path::zeros(q)))
    } else {
        (Path::zeros(m).concat(&Path::ones(n)), Path::ones(p - 1).concat(&Path::zeros(q + 1)))
    })
}

/// Which generators and rules are active.
#[derive(Debug, Clone, Serialize)]
pub struct RuleSet {
    pub deg: bool,
    /// Exact `Z`/`P`/BEC criteria.
    pub criterion: bool,
    pub staircase: bool,
    pub count: Option<CountMode>,
    pub suffix_ones: bool,
    pub suffix_zeros: bool,
    pub insert_ones: bool,
    pub insert_zeros: bool,
    /// Degradation implies the other orders; `Z` and `P` imply BEC.
    pub implications: bool,
    pub transitive: bool,
    /// Longest inserted string in forward saturation.
    pub tau_budget: usize,
    /// Longest path length checked by an exact polynomial comparison.
    pub exact_max_len: usize,
    /// Rule applications allowed on one branch of a backward search.
    pub max_depth: usize,
}

impl Default for RuleSet {
    fn default() -> Self {
        Self {
            deg: true,
            criterion: true,
            staircase: true,
            count: Some(CountMode::Chain),
            suffix_ones: true,
            suffix_zeros: true,
            insert_ones: true,
            insert_zeros: true,
            implications: true,
            transitive: true,
            tau_budget: 3,
            exact_max_len: 10,
            max_depth: 3,
        }
    }
}

impl RuleSet {
    /// Only degradation and the exact criteria; used as the base that a
    /// single structural rule is layered on.
    pub fn generators_only() -> Self {
        Self {
            staircase: false,
            count: None,
            suffix_ones: false,
            suffix_zeros: false,
            insert_ones: false,
            insert_zeros: false,
            ..Self::default()
        }
    }
}

/// Compact handle of a stored fact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FactId {
    pub kind: RelKind,
    pub len: u8,
    pub worse: u32,
    pub better: u32,
}

impl FactId {
    pub fn new(kind: RelKind, len: usize, worse: u64, better: u64) -> Self {
        Self {
            kind,
            len: len as u8,
            worse: worse as u32,
            better: better as u32,
        }
    }

    pub fn paths(&self) -> (Path, Path) {
        let n = self.len as usize;
        (
            Path::from_code(self.worse as u64, n),
            Path::from_code(self.better as u64, n),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub rule: Rule,
    pub detail: Detail,
    pub premises: Vec<FactId>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SaturateBudget {
    pub deadline: Option<Instant>,
    pub max_facts: Option<usize>,
}

/// Relations of every length up to `n`, one strict bit matrix per kind
/// and length, with the provenance of each stored fact.
#[derive(Debug, Clone)]
pub struct RelationStore {
    n: usize,
    rules: RuleSet,
    levels: Vec<[BitMatrix; 4]>,
    provenance: HashMap<FactId, Provenance>,
    complete: bool,
}

impl PartialEq for RelationStore {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.levels == other.levels
    }
}

impl RelationStore {
    fn empty(n: usize, rules: RuleSet) -> Self {
        let levels = (0..=n)
            .map(|len| {
                let size = 1usize << len;
                [
                    BitMatrix::new(size),
                    BitMatrix::new(size),
                    BitMatrix::new(size),
                    BitMatrix::new(size),
                ]
            })
            .collect();
        Self {
            n,
            rules,
            levels,
            provenance: HashMap::new(),
            complete: true,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn matrix(&self, len: usize, kind: RelKind) -> &BitMatrix {
        &self.levels[len][kind.index()]
    }

    pub fn fact_count(&self) -> usize {
        self.provenance.len()
    }

    pub fn holds(&self, kind: RelKind, worse: &Path, better: &Path) -> bool {
        worse.len() == better.len()
            && worse.len() <= self.n
            && self.levels[worse.len()][kind.index()].get(worse.code() as usize, better.code() as usize)
    }

    pub fn provenance(&self, fact: &FactId) -> Option<&Provenance> {
        self.provenance.get(fact)
    }

    fn insert(&mut self, fact: FactId, prov: Provenance) -> bool {
        if fact.worse == fact.better {
            return false;
        }
        let m = &mut self.levels[fact.len as usize][fact.kind.index()];
        if m.insert(fact.worse as usize, fact.better as usize) {
            self.provenance.insert(fact, prov);
            true
        } else {
            false
        }
    }

    /// Rebuilds the derivation tree of a stored fact.
    pub fn relation(&self, fact: &FactId) -> Option<Relation> {
        let prov = self.provenance.get(fact)?;
        let (worse, better) = fact.paths();
        let premises = prov
            .premises
            .iter()
            .map(|f| self.relation(f))
            .collect::<Option<Vec<_>>>()?;
        Some(Relation {
            kind: fact.kind,
            worse,
            better,
            rule: prov.rule,
            detail: prov.detail.clone(),
            premises,
        })
    }

    fn over_budget(&self, budget: &SaturateBudget) -> bool {
        budget.deadline.is_some_and(|d| Instant::now() > d)
            || budget.max_facts.is_some_and(|m| self.provenance.len() > m)
    }

    fn scan_budget(budget: &SaturateBudget) -> ScanBudget {
        ScanBudget {
            deadline: budget.deadline,
            max_slow_pairs: None,
        }
    }

    fn facts(&self, len: usize, kind: RelKind) -> Vec<(u64, u64)> {
        self.levels[len][kind.index()]
            .iter()
            .map(|(i, j)| (i as u64, j as u64))
            .collect()
    }

    /// Strict facts of `kind` plus every reflexive pair.
    fn nonstrict(&self, len: usize, kind: RelKind) -> Vec<(u64, u64)> {
        let mut v: Vec<(u64, u64)> = (0..1u64 << len).map(|c| (c, c)).collect();
        v.extend(self.facts(len, kind));
        v
    }

    fn level(&mut self, len: usize, deg: Option<&DegLevels>, budget: &SaturateBudget) -> bool {
        let rules = self.rules.clone();
        if let Some(deg) = deg {
            for (i, j) in deg.level(len).iter() {
                self.insert(
                    FactId::new(RelKind::Deg, len, i as u64, j as u64),
                    Provenance {
                        rule: Rule::Degradation,
                        detail: Detail::None,
                        premises: vec![],
                    },
                );
            }
        }
        for kind in [RelKind::Z, RelKind::P] {
            if self.over_budget(budget) {
                return false;
            }
            if rules.implications {
                for (i, j) in self.facts(len, RelKind::Deg) {
                    self.insert(
                        FactId::new(kind, len, i, j),
                        Provenance {
                            rule: Rule::DegImplies,
                            detail: Detail::None,
                            premises: vec![FactId::new(RelKind::Deg, len, i, j)],
                        },
                    );
                }
            }
            if rules.criterion && len <= rules.exact_max_len {
                if !self.criterion_facts(kind, len, budget) {
                    return false;
                }
            }
            if rules.staircase {
                self.staircase_facts(kind, len);
            }
            if let Some(mode) = rules.count {
                if len >= 2 {
                    self.count_facts(kind, len, mode);
                }
            }
            let (suffix, insert) = match kind {
                RelKind::Z => (rules.suffix_ones, rules.insert_ones),
                _ => (rules.suffix_zeros, rules.insert_zeros),
            };
            if suffix {
                self.suffix_rule(kind, len);
            }
            if insert {
                self.insert_rule(kind, len);
            }
            if rules.transitive {
                self.close(kind, len);
            }
        }
        if self.over_budget(budget) {
            return false;
        }
        if rules.implications {
            for kind in [RelKind::Z, RelKind::P] {
                for (i, j) in self.facts(len, kind) {
                    self.insert(
                        FactId::new(RelKind::Bec, len, i, j),
                        Provenance {
                            rule: Rule::Weakening,
                            detail: Detail::None,
                            premises: vec![FactId::new(kind, len, i, j)],
                        },
                    );
                }
            }
        }
        if rules.criterion && len <= rules.exact_max_len {
            let lowers: Vec<Option<Path>> = (0..1u64 << len).map(|b| Some(Path::from_code(b, len))).collect();
            let out = dominance_scan(&Path::empty(), len, &lowers, &|_, _| false, Self::scan_budget(budget));
            for (i, j) in out.holds.iter() {
                self.insert(
                    FactId::new(RelKind::Bec, len, i as u64, j as u64),
                    Provenance {
                        rule: Rule::BecExact,
                        detail: Detail::None,
                        premises: vec![],
                    },
                );
            }
            if !out.complete {
                return false;
            }
        }
        if rules.staircase {
            for m in 1..len {
                let k = len - m;
                if staircase_fact(m as u32, k as u32) {
                    let w = Path::ones(m).concat(&Path::zeros(k)).code();
                    let b = Path::zeros(m).concat(&Path::ones(k)).code();
                    self.insert(
                        FactId::new(RelKind::Bec, len, w, b),
                        Provenance {
                            rule: Rule::BecStaircase,
                            detail: Detail::None,
                            premises: vec![],
                        },
                    );
                }
            }
        }
        if rules.transitive {
            self.close(RelKind::Bec, len);
        }
        true
    }

    fn criterion_facts(&mut self, kind: RelKind, len: usize, budget: &SaturateBudget) -> bool {
        let sb = Self::scan_budget(budget);
        let mut found: Vec<(usize, usize, Rule, Strategy)> = Vec::new();
        let complete = if kind == RelKind::Z {
            let out = z_criterion_scan(len, sb);
            for (i, j) in out.holds.iter() {
                let (w, b) = (Path::from_code(i as u64, len), Path::from_code(j as u64, len));
                found.push((i, j, Rule::ZCriterion, z_premise(&w, &b).0));
            }
            out.complete
        } else {
            let (zd, td) = p_criterion_scans(len, sb);
            for (i, j) in zd.holds.iter() {
                found.push((i, j, Rule::PCriterion, Strategy::ZDomain));
            }
            for (i, j) in td.holds.iter() {
                found.push((i, j, Rule::PCriterion, Strategy::TDomain));
            }
            zd.complete && td.complete
        };
        for (i, j, rule, strategy) in found {
            self.insert(
                FactId::new(kind, len, i as u64, j as u64),
                Provenance {
                    rule,
                    detail: Detail::Strategy { strategy },
                    premises: vec![],
                },
            );
        }
        complete
    }

    fn staircase_facts(&mut self, kind: RelKind, len: usize) {
        let z = kind == RelKind::Z;
        for m in 0..=len {
            let n = len - m;
            for p in 1..=len {
                let q = len - p;
                let check = if z { staircase_z_check } else { staircase_p_check };
                if check(m as i64, n as i64, p as i64, q as i64).unwrap_or(false) {
                    let w = Path::zeros(m).concat(&Path::ones(n)).code();
                    let b = Path::ones(p).concat(&Path::zeros(q)).code();
                    self.insert(
                        FactId::new(kind, len, w, b),
                        Provenance {
                            rule: if z { Rule::ZStaircase } else { Rule::PStaircase },
                            detail: Detail::None,
                            premises: vec![],
                        },
                    );
                }
            }
        }
    }

    fn count_facts(&mut self, kind: RelKind, len: usize, mode: CountMode) {
        let (k, rule) = if kind == RelKind::Z {
            (Kind::Z, Rule::ZCount)
        } else {
            (Kind::P, Rule::PCount)
        };
        let all: Vec<Path> = Path::all(len).collect();
        for alpha in &all {
            // The zero count bound depends on alpha only; skip hopeless ones.
            if !count_check(alpha, &Path::zeros(len), k, mode).unwrap_or(false)
                && !all.iter().any(|g| count_check(alpha, g, k, mode).unwrap_or(false))
            {
                continue;
            }
            for gamma in &all {
                if count_check(alpha, gamma, k, mode).unwrap_or(false) {
                    self.insert(
                        FactId::new(kind, len, gamma.code(), alpha.code()),
                        Provenance {
                            rule,
                            detail: Detail::Mode { mode },
                            premises: vec![],
                        },
                    );
                }
            }
        }
    }

    fn suffix_rule(&mut self, kind: RelKind, len: usize) {
        let (bit, rule) = if kind == RelKind::Z {
            (1u64, Rule::SuffixOnes)
        } else {
            (0u64, Rule::SuffixZeros)
        };
        let mut out = Vec::new();
        for b in 1..len {
            let cores = self.facts(b, kind);
            if cores.is_empty() {
                continue;
            }
            for a in 0..=len - b {
                let p = len - a - b;
                if a == 0 && p == 0 {
                    continue;
                }
                let tail = if bit == 1 { (1u64 << p) - 1 } else { 0 };
                let taus = if a == 0 { vec![(0, 0)] } else { self.nonstrict(a, RelKind::Deg) };
                for &(t1, t2) in &taus {
                    for &(x, y) in &cores {
                        let w = (t1 << (b + p)) | (x << p) | tail;
                        let g = (t2 << (b + p)) | (y << p) | tail;
                        let mut premises = Vec::with_capacity(2);
                        if t1 != t2 {
                            premises.push(FactId::new(RelKind::Deg, a, t1, t2));
                        }
                        premises.push(FactId::new(kind, b, x, y));
                        out.push((
                            FactId::new(kind, len, w, g),
                            Provenance {
                                rule,
                                detail: Detail::Suffix {
                                    tau_worse: Path::from_code(t1, a),
                                    tau_better: Path::from_code(t2, a),
                                    p,
                                },
                                premises,
                            },
                        ));
                    }
                }
            }
        }
        for (f, prov) in out {
            self.insert(f, prov);
        }
    }

    fn insert_rule(&mut self, kind: RelKind, len: usize) {
        let ones = kind == RelKind::Z;
        let rule = if ones { Rule::InsertOnes } else { Rule::InsertZeros };
        let mut out = Vec::new();
        for short in 1..len {
            let d = len - short;
            for (x, y) in self.facts(short, kind) {
                let (xp, yp) = (Path::from_code(x, short), Path::from_code(y, short));
                let (p_max, q_max) = (xp.leading(0), yp.leading(1));
                // The rule's free tail: trailing zeros of the better path for
                // insert-ones, trailing ones of the worse path for insert-zeros.
                let (r_max, s_max) = if ones { (0, yp.trailing(0)) } else { (xp.trailing(1), 0) };
                for p in 0..=p_max {
                    for q in 0..=q_max {
                        for r in 0..=r_max {
                            for s in 0..=s_max {
                                if p + r > short || q + s > short {
                                    continue;
                                }
                                for u in 0..=self.rules.tau_budget.min(d) {
                                    let k = d - u;
                                    for tau in 0..1u64 << u {
                                        let tau = Path::from_code(tau, u);
                                        if let Some((w, g)) = insert_forward(ones, &xp, &yp, p, q, r, s, &tau, k) {
                                            out.push((
                                                FactId::new(kind, len, w.code(), g.code()),
                                                Provenance {
                                                    rule,
                                                    detail: Detail::Insert { p, q, r, s, tau, k },
                                                    premises: vec![FactId::new(kind, short, x, y)],
                                                },
                                            ));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for (f, prov) in out {
            self.insert(f, prov);
        }
    }

    /// Transitive closure of one kind at one length, recording the middle
    /// element of each new fact.
    fn close(&mut self, kind: RelKind, len: usize) -> usize {
        let size = 1usize << len;
        let mut added = 0;
        let mut new_facts = Vec::new();
        {
            let m = &mut self.levels[len][kind.index()];
            for k in 0..size {
                let row_k = m.row(k).to_vec();
                for i in 0..size {
                    if i == k || !m.get(i, k) {
                        continue;
                    }
                    let fresh: Vec<usize> = m
                        .row(i)
                        .iter()
                        .zip(&row_k)
                        .enumerate()
                        .flat_map(|(wi, (&ri, &rk))| {
                            let mut w = rk & !ri;
                            std::iter::from_fn(move || {
                                if w == 0 {
                                    return None;
                                }
                                let b = w.trailing_zeros() as usize;
                                w &= w - 1;
                                Some(wi * 64 + b)
                            })
                        })
                        .filter(|&j| j != i)
                        .collect();
                    for j in fresh {
                        m.set(i, j);
                        new_facts.push((i, k, j));
                    }
                }
            }
        }
        for (i, k, j) in new_facts {
            let f = FactId::new(kind, len, i as u64, j as u64);
            self.provenance.insert(
                f,
                Provenance {
                    rule: Rule::Transitive,
                    detail: Detail::None,
                    premises: vec![
                        FactId::new(kind, len, i as u64, k as u64),
                        FactId::new(kind, len, k as u64, j as u64),
                    ],
                },
            );
            added += 1;
        }
        added
    }

    /// Re-applies every enabled rule once more; returns the number of new
    /// facts. Zero after a completed saturation.
    pub fn resaturate(&mut self) -> usize {
        let before = self.provenance.len();
        let deg = self.rules.deg.then(|| DegLevels::new(self.n, false));
        for len in 1..=self.n {
            self.level(len, deg.as_ref(), &SaturateBudget::default());
        }
        self.provenance.len() - before
    }

    /// Distinct pairs related in both directions, which a sound closure
    /// never produces.
    pub fn conflicts(&self, kind: RelKind) -> Vec<(Path, Path)> {
        let mut out = Vec::new();
        for len in 1..=self.n {
            let m = &self.levels[len][kind.index()];
            for (i, j) in m.iter() {
                if i < j && m.get(j, i) {
                    out.push((Path::from_code(i as u64, len), Path::from_code(j as u64, len)));
                }
            }
        }
        out
    }
}

/// Closes the enabled rules over every length up to `n`.
pub fn saturate(n: usize, rules: &RuleSet, budget: SaturateBudget) -> Result<RelationStore> {
    if n == 0 || n > MAX_SATURATE_LEN {
        return Err(Error::InvalidParameter(format!(
            "saturation length {n} outside 1..={MAX_SATURATE_LEN}"
        )));
    }
    let mut store = RelationStore::empty(n, rules.clone());
    let deg = rules.deg.then(|| DegLevels::new(n, false));
    for len in 1..=n {
        if !store.level(len, deg.as_ref(), &budget) {
            store.complete = false;
            break;
        }
    }
    Ok(store)
}

/// Backward search for a derivation of `worse ≼_kind better`. `None`
/// means undecided by the enabled rules, never a disproof.
pub fn derive_pair(worse: &Path, better: &Path, kind: RelKind, rules: &RuleSet) -> Result<Option<Relation>> {
    if worse.len() != better.len() {
        return Err(Error::LengthMismatch {
            left: worse.len(),
            right: better.len(),
        });
    }
    let mut search = Search {
        rules,
        failed: HashSet::new(),
        probes: HashMap::new(),
    };
    for depth in 0..=rules.max_depth {
        if let Some(r) = search.find(kind, worse, better, depth) {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

struct Search<'a> {
    rules: &'a RuleSet,
    failed: HashSet<(RelKind, Path, Path, usize)>,
    probes: HashMap<Path, std::rc::Rc<Vec<(f64, f64)>>>,
}

fn prefix_dominated(worse: &Path, better: &Path) -> bool {
    let (mut a, mut b) = (0i32, 0i32);
    for (x, y) in worse.bits().iter().zip(better.bits()) {
        a += *x as i32;
        b += *y as i32;
        if b < a {
            return false;
        }
    }
    true
}

impl Search<'_> {
    fn probe(&mut self, p: &Path) -> std::rc::Rc<Vec<(f64, f64)>> {
        self.probes
            .entry(p.clone())
            .or_insert_with(|| std::rc::Rc::new(probe_values(p)))
            .clone()
    }

    /// Float screen for `worse ≼_BEC better`, implied by every order.
    fn plausible(&mut self, worse: &Path, better: &Path) -> bool {
        let (u, l) = (self.probe(worse), self.probe(better));
        !u.iter().zip(l.iter()).any(|(a, b)| probe_says_below(*a, *b))
    }

    fn deg(&self, worse: &Path, better: &Path) -> Option<Relation> {
        if !self.rules.deg || worse.len() > MAX_BFS_LEN || !prefix_dominated(worse, better) {
            return None;
        }
        Some(Relation::leaf(RelKind::Deg, worse, better, Rule::Degradation, Detail::None))
    }

    fn find(&mut self, kind: RelKind, worse: &Path, better: &Path, depth: usize) -> Option<Relation> {
        if kind == RelKind::Deg {
            return self.deg(worse, better);
        }
        let key = (kind, worse.clone(), better.clone(), depth);
        if self.failed.contains(&key) {
            return None;
        }
        if !self.plausible(worse, better) {
            self.failed.insert(key);
            return None;
        }
        let found = self.direct(kind, worse, better, depth).or_else(|| {
            if depth == 0 {
                None
            } else {
                self.structural(kind, worse, better, depth - 1)
            }
        });
        if found.is_none() {
            self.failed.insert(key);
        }
        found
    }

    fn wrap_deg(&self, kind: RelKind, worse: &Path, better: &Path) -> Option<Relation> {
        if !self.rules.implications {
            return None;
        }
        let d = self.deg(worse, better)?;
        Some(Relation {
            kind,
            worse: worse.clone(),
            better: better.clone(),
            rule: Rule::DegImplies,
            detail: Detail::None,
            premises: vec![d],
        })
    }

    /// BEC facts needing no further search: degradation, the staircase
    /// closed form, or an exact comparison on short paths.
    fn bec_premise(&mut self, worse: &Path, better: &Path) -> Option<Relation> {
        if worse == better {
            return None;
        }
        if let Some(r) = self.wrap_deg(RelKind::Bec, worse, better) {
            return Some(r);
        }
        if self.rules.staircase {
            if let Some((m, k)) = staircase_shape(worse, better) {
                if staircase_fact(m as u32, k as u32) {
                    return Some(Relation::leaf(RelKind::Bec, worse, better, Rule::BecStaircase, Detail::None));
                }
            }
        }
        if self.rules.criterion && worse.len() <= self.rules.exact_max_len && self.plausible(worse, better) {
            if bec_holds(worse, better) {
                return Some(Relation::leaf(RelKind::Bec, worse, better, Rule::BecExact, Detail::None));
            }
        }
        None
    }

    fn with_premise(kind: RelKind, worse: &Path, better: &Path, rule: Rule, detail: Detail, p: Relation) -> Relation {
        Relation {
            kind,
            worse: worse.clone(),
            better: better.clone(),
            rule,
            detail,
            premises: vec![p],
        }
    }

    fn direct(&mut self, kind: RelKind, worse: &Path, better: &Path, depth: usize) -> Option<Relation> {
        if let Some(r) = self.wrap_deg(kind, worse, better) {
            return Some(r);
        }
        let n = worse.len();
        match kind {
            RelKind::Z | RelKind::P => {
                let z = kind == RelKind::Z;
                if self.rules.criterion {
                    let mut candidates = if z {
                        vec![z_premise(worse, better)]
                    } else {
                        [Strategy::ZDomain, Strategy::TDomain]
                            .into_iter()
                            .filter_map(|st| p_premise(worse, better, st).map(|pp| (st, pp)))
                            .collect()
                    };
                    // Shorter premises are cheaper to certify.
                    candidates.sort_by_key(|(_, pp)| pp.0.len());
                    for (label, premise) in candidates {
                        if let Some(bec) = self.bec_premise(&premise.0, &premise.1) {
                            let rule = if z { Rule::ZCriterion } else { Rule::PCriterion };
                            return Some(Self::with_premise(
                                kind,
                                worse,
                                better,
                                rule,
                                Detail::Strategy { strategy: label },
                                bec,
                            ));
                        }
                    }
                }
                if self.rules.staircase {
                    if let Some((m, nn, p, q)) = zero_one_split(worse, better) {
                        if let Some((x, y)) = staircase_premise(z, m, nn, p, q) {
                            if let Some(bec) = self.bec_premise(&x, &y) {
                                let rule = if z { Rule::ZStaircase } else { Rule::PStaircase };
                                return Some(Self::with_premise(kind, worse, better, rule, Detail::None, bec));
                            }
                        }
                    }
                }
                if let Some(mode) = self.rules.count {
                    let k = if z { Kind::Z } else { Kind::P };
                    if n >= 2 && count_check(better, worse, k, mode).unwrap_or(false) {
                        let rule = if z { Rule::ZCount } else { Rule::PCount };
                        return Some(Relation::leaf(kind, worse, better, rule, Detail::Mode { mode }));
                    }
                }
                None
            }
            RelKind::Bec => {
                if let Some(r) = self.bec_premise(worse, better) {
                    return Some(r);
                }
                if self.rules.implications && depth > 0 {
                    for k in [RelKind::Z, RelKind::P] {
                        if let Some(r) = self.find(k, worse, better, depth - 1) {
                            return Some(Self::with_premise(
                                RelKind::Bec,
                                worse,
                                better,
                                Rule::Weakening,
                                Detail::None,
                                r,
                            ));
                        }
                    }
                }
                None
            }
            RelKind::Deg => self.deg(worse, better),
        }
    }

    fn structural(&mut self, kind: RelKind, worse: &Path, better: &Path, depth: usize) -> Option<Relation> {
        let z = kind == RelKind::Z;
        match kind {
            RelKind::Z | RelKind::P => {
                let suffix = if z { self.rules.suffix_ones } else { self.rules.suffix_zeros };
                if suffix {
                    if let Some(r) = self.suffix_back(kind, worse, better, depth) {
                        return Some(r);
                    }
                }
                let insert = if z { self.rules.insert_ones } else { self.rules.insert_zeros };
                if insert {
                    if let Some(r) = self.insert_back(kind, worse, better, depth) {
                        return Some(r);
                    }
                }
                None
            }
            _ => None,
        }
    }

    fn suffix_back(&mut self, kind: RelKind, worse: &Path, better: &Path, depth: usize) -> Option<Relation> {
        let n = worse.len();
        let bit = if kind == RelKind::Z { 1 } else { 0 };
        let rule = if bit == 1 { Rule::SuffixOnes } else { Rule::SuffixZeros };
        let p_max = worse.trailing(bit).min(better.trailing(bit));
        for p in (0..=p_max).rev() {
            for a in (0..n - p).rev() {
                if a == 0 && p == 0 {
                    continue;
                }
                let (t1, t2) = (worse.slice(0, a), better.slice(0, a));
                let (x, y) = (worse.slice(a, n - p), better.slice(a, n - p));
                if x == y || !prefix_dominated(&t1, &t2) {
                    continue;
                }
                if t1 != t2 && !self.rules.deg {
                    continue;
                }
                let Some(core) = self.find(kind, &x, &y, depth) else {
                    continue;
                };
                let mut premises = Vec::new();
                if t1 != t2 {
                    premises.push(Relation::leaf(RelKind::Deg, &t1, &t2, Rule::Degradation, Detail::None));
                }
                premises.push(core);
                return Some(Relation {
                    kind,
                    worse: worse.clone(),
                    better: better.clone(),
                    rule,
                    detail: Detail::Suffix {
                        tau_worse: t1,
                        tau_better: t2,
                        p,
                    },
                    premises,
                });
            }
        }
        None
    }

    fn insert_back(&mut self, kind: RelKind, worse: &Path, better: &Path, depth: usize) -> Option<Relation> {
        let ones = kind == RelKind::Z;
        let rule = if ones { Rule::InsertOnes } else { Rule::InsertZeros };
        let n = worse.len();
        let bit = if ones { 1 } else { 0 };
        let (r_max, s_max) = if ones { (0, better.trailing(0)) } else { (worse.trailing(1), 0) };
        let mut cands = Vec::new();
        for p in 0..=worse.leading(0) {
            for q in 0..=better.leading(1) {
                for r in 0..=r_max {
                    for s in 0..=s_max {
                        if p + r > n || q + s > n {
                            continue;
                        }
                        // Middles after removing the kept head and tail.
                        let mx = worse.slice(p, n - r);
                        let my = better.slice(q, n - s);
                        let max_u = mx.len().min(my.len());
                        for u in 0..=max_u {
                            if mx.slice(0, u) != my.slice(0, u) {
                                break;
                            }
                            let tau = mx.slice(0, u);
                            let (rx, ry) = (mx.slice(u, mx.len()), my.slice(u, my.len()));
                            let k_max = rx.trailing(bit).min(ry.trailing(bit));
                            for k in 0..=k_max {
                                if u + k == 0 {
                                    continue;
                                }
                                let x = worse
                                    .slice(0, p)
                                    .concat(&rx.slice(0, rx.len() - k))
                                    .concat(&Path::ones(r));
                                let y = better
                                    .slice(0, q)
                                    .concat(&ry.slice(0, ry.len() - k))
                                    .concat(&Path::zeros(s));
                                if x == y || x.is_empty() {
                                    continue;
                                }
                                cands.push((x, y, Detail::Insert { p, q, r, s, tau: tau.clone(), k }));
                            }
                        }
                    }
                }
            }
        }
        // Shortest premises first.
        cands.sort_by_key(|c| c.0.len());
        for (x, y, detail) in cands {
            if let Some(core) = self.find(kind, &x, &y, depth) {
                return Some(Relation {
                    kind,
                    worse: worse.clone(),
                    better: better.clone(),
                    rule,
                    detail,
                    premises: vec![core],
                });
            }
        }
        None
    }
}
