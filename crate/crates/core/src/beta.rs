//! β-expansion weights `B(a) = sum beta^(n-i) a_i` and the β values
//! consistent with a set of ordered pairs.
//!
//! A pair `worse ≼ better` asks for `B(better) - B(worse) >= 0`, an
//! integer polynomial in β. Its feasible set on `(0, inf)` is found by
//! exact Sturm isolation; endpoints are algebraic numbers kept as
//! isolating rational intervals of their square-free polynomial.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::path::Path;
use crate::podb::PoDb;
use crate::poly::{isolate_roots, refine_root, square_free, IntPoly, SturmChain};
use crate::rules::RelKind;

pub fn beta_weight(alpha: &Path, beta: f64) -> f64 {
    alpha.bits().iter().fold(0.0, |acc, &b| acc * beta + b as f64)
}

pub fn beta_weight_exact(alpha: &Path, beta: &BigRational) -> BigRational {
    alpha
        .bits()
        .iter()
        .fold(BigRational::zero(), |acc, &b| acc * beta + BigRational::from_integer(b.into()))
}

/// `B(better) - B(worse)` as a polynomial in β.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaConstraint {
    pub worse: Path,
    pub better: Path,
    pub poly: IntPoly,
}

impl BetaConstraint {
    pub fn new(worse: &Path, better: &Path) -> Result<Self> {
        if worse.len() != better.len() {
            return Err(Error::LengthMismatch {
                left: worse.len(),
                right: better.len(),
            });
        }
        Ok(Self {
            worse: worse.clone(),
            better: better.clone(),
            poly: coefficient_poly(&coefficients(worse, better)),
        })
    }

    pub fn holds_at(&self, beta: &BigRational) -> bool {
        self.poly.sign_at(beta) >= 0
    }
}

/// Ascending coefficients of `B(better) - B(worse)`.
fn coefficients(worse: &Path, better: &Path) -> Vec<i8> {
    worse
        .bits()
        .iter()
        .zip(better.bits())
        .rev()
        .map(|(&w, &b)| b as i8 - w as i8)
        .collect()
}

fn coefficient_poly(c: &[i8]) -> IntPoly {
    IntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
}

/// A real algebraic number given by a square-free polynomial and an
/// isolating interval `(lo, hi]`.
#[derive(Clone)]
pub struct Root {
    poly: Arc<IntPoly>,
    chain: Arc<SturmChain>,
    lo: BigRational,
    hi: BigRational,
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Root({:.12})", self.approx())
    }
}

impl Root {
    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn approx(&self) -> f64 {
        let r = self.refined(&BigRational::new(BigInt::one(), BigInt::one() << 64));
        let mid = (&r.lo + &r.hi) / BigRational::from_integer(2.into());
        mid.to_f64().unwrap_or(f64::NAN)
    }

    /// Same root with an isolating interval of width at most `width`.
    pub fn refined(&self, width: &BigRational) -> Root {
        let (lo, hi) = refine_root(&self.chain, self.lo.clone(), self.hi.clone(), width);
        Root {
            lo,
            hi,
            ..self.clone()
        }
    }

    fn halve(&mut self) {
        let w = (&self.hi - &self.lo) / BigRational::from_integer(2.into());
        *self = self.refined(&w);
    }

    /// Exact comparison with a rational.
    pub fn cmp_rational(&self, x: &BigRational) -> Ordering {
        if x <= &self.lo {
            return Ordering::Greater;
        }
        if x > &self.hi {
            return Ordering::Less;
        }
        if self.poly.sign_at(x) == 0 {
            return Ordering::Equal;
        }
        // The root lies in (lo, x) or (x, hi].
        if self.chain.count(&self.lo, x) == 1 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Exact comparison: separate by refinement, or detect a common root
    /// through the gcd of the two polynomials.
    pub fn cmp_root(&self, other: &Root) -> Ordering {
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut checked_gcd = false;
        loop {
            if a.hi < b.lo {
                return Ordering::Less;
            }
            if b.hi < a.lo {
                return Ordering::Greater;
            }
            if !checked_gcd {
                checked_gcd = true;
                let g = a.poly.gcd(&b.poly);
                if g.degree().unwrap_or(0) > 0 {
                    let lo = a.lo.clone().max(b.lo.clone());
                    let hi = a.hi.clone().min(b.hi.clone());
                    if lo < hi && SturmChain::new(&g).count(&lo, &hi) == 1 {
                        return Ordering::Equal;
                    }
                    if lo == hi && g.sign_at(&hi) == 0 {
                        return Ordering::Equal;
                    }
                }
            }
            a.halve();
            b.halve();
        }
    }
}

#[derive(Debug, Clone)]
pub enum Edge {
    /// `0`, excluded.
    Zero,
    Root(Root),
    /// Unbounded above.
    Infinity,
}

impl Edge {
    fn rank(&self) -> u8 {
        match self {
            Edge::Zero => 0,
            Edge::Root(_) => 1,
            Edge::Infinity => 2,
        }
    }

    pub fn cmp_edge(&self, other: &Edge) -> Ordering {
        match (self, other) {
            (Edge::Root(a), Edge::Root(b)) => a.cmp_root(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            Edge::Zero => 0.0,
            Edge::Root(r) => r.approx(),
            Edge::Infinity => f64::INFINITY,
        }
    }

    /// Compares with a positive rational.
    pub fn cmp_rational(&self, x: &BigRational) -> Ordering {
        match self {
            Edge::Zero => Ordering::Less,
            Edge::Root(r) => r.cmp_rational(x),
            Edge::Infinity => Ordering::Greater,
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Edge::Zero => f.write_str("0"),
            Edge::Infinity => f.write_str("inf"),
            Edge::Root(r) => {
                let r = r.refined(&BigRational::new(BigInt::one(), BigInt::one() << 40));
                write!(f, "{:.10} in ({}, {}]", r.approx(), r.lo, r.hi)
            }
        }
    }
}

/// One connected piece. Root edges are included, `0` and infinity not.
#[derive(Debug, Clone)]
pub struct Component {
    pub lo: Edge,
    pub hi: Edge,
}

impl Component {
    pub fn contains(&self, x: &BigRational) -> bool {
        x.is_positive() && self.lo.cmp_rational(x) != Ordering::Greater && self.hi.cmp_rational(x) != Ordering::Less
    }

    pub fn approx(&self) -> (f64, f64) {
        (self.lo.approx(), self.hi.approx())
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if matches!(self.lo, Edge::Zero) { "(" } else { "[" };
        let close = if matches!(self.hi, Edge::Infinity) { ")" } else { "]" };
        write!(f, "{open}{}, {}{close}", self.lo, self.hi)
    }
}

/// Sorted disjoint components of a subset of `(0, inf)`.
#[derive(Debug, Clone, Default)]
pub struct BetaSet {
    pub components: Vec<Component>,
}

impl BetaSet {
    pub fn everything() -> Self {
        Self {
            components: vec![Component {
                lo: Edge::Zero,
                hi: Edge::Infinity,
            }],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.components.iter().any(|c| c.contains(x))
    }

    /// The component containing `x`, if any.
    pub fn component_at(&self, x: &BigRational) -> Option<&Component> {
        self.components.iter().find(|c| c.contains(x))
    }

    pub fn intersect(&self, other: &BetaSet) -> BetaSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.components.len() && j < other.components.len() {
            let (a, b) = (&self.components[i], &other.components[j]);
            let lo = if a.lo.cmp_edge(&b.lo) == Ordering::Less { &b.lo } else { &a.lo };
            let hi_cmp = a.hi.cmp_edge(&b.hi);
            let hi = if hi_cmp == Ordering::Greater { &b.hi } else { &a.hi };
            let nonempty = match lo.cmp_edge(hi) {
                Ordering::Less => true,
                // A single point survives only when it is a root on both sides.
                Ordering::Equal => matches!(lo, Edge::Root(_)),
                Ordering::Greater => false,
            };
            if nonempty {
                out.push(Component {
                    lo: lo.clone(),
                    hi: hi.clone(),
                });
            }
            if hi_cmp == Ordering::Greater {
                j += 1;
            } else {
                i += 1;
            }
        }
        BetaSet { components: out }
    }
}

impl fmt::Display for BetaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(" u "))
    }
}

fn cauchy_bound(p: &IntPoly) -> BigRational {
    let lead = p.leading().expect("nonzero polynomial").abs();
    let max = p.coeffs().iter().map(|c| c.abs()).max().unwrap_or_default();
    BigRational::one() + BigRational::new(max, lead)
}

/// `{beta > 0 : p(beta) >= 0}`.
fn nonneg_set(p: &IntPoly) -> BetaSet {
    if p.is_zero() {
        return BetaSet::everything();
    }
    // Powers of beta do not change signs on (0, inf).
    let low = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let p = IntPoly::new(p.coeffs()[low..].to_vec());
    let s = Arc::new(square_free(&p));
    let chain = Arc::new(SturmChain::new(&s));
    let bound = cauchy_bound(&s).max(BigRational::from_integer(4.into()));
    let mut roots: Vec<Root> = isolate_roots(&s, &BigRational::zero(), &bound)
        .into_iter()
        .map(|(lo, hi)| Root {
            poly: s.clone(),
            chain: chain.clone(),
            lo,
            hi,
        })
        .collect();
    // Separate neighbouring intervals so that a rational sits strictly
    // between consecutive roots.
    for i in 1..roots.len() {
        while roots[i - 1].hi >= roots[i].lo {
            roots[i - 1].halve();
            roots[i].halve();
        }
    }
    if let Some(first) = roots.first_mut() {
        while first.lo.is_zero() {
            first.halve();
        }
    }
    let two = BigRational::from_integer(2.into());
    let sample = |i: usize| -> BigRational {
        if roots.is_empty() {
            BigRational::one()
        } else if i == 0 {
            roots[0].lo.clone()
        } else if i == roots.len() {
            &bound + BigRational::one()
        } else {
            (&roots[i - 1].hi + &roots[i].lo) / &two
        }
    };
    let sign_between = |i: usize| p.sign_at(&sample(i));
    let signs: Vec<i32> = (0..=roots.len()).map(sign_between).collect();
    let mut comps = Vec::new();
    let mut open: Option<Edge> = if signs[0] > 0 { Some(Edge::Zero) } else { None };
    for (i, r) in roots.iter().enumerate() {
        let after = signs[i + 1] > 0;
        match (&open, after) {
            (Some(_), true) => {}
            (Some(_), false) => {
                comps.push(Component {
                    lo: open.take().unwrap(),
                    hi: Edge::Root(r.clone()),
                });
            }
            (None, true) => open = Some(Edge::Root(r.clone())),
            (None, false) => comps.push(Component {
                lo: Edge::Root(r.clone()),
                hi: Edge::Root(r.clone()),
            }),
        }
    }
    if let Some(lo) = open {
        comps.push(Component { lo, hi: Edge::Infinity });
    }
    BetaSet { components: comps }
}

/// Feasible β for one pair `worse ≼ better`.
pub fn feasible_interval(worse: &Path, better: &Path) -> Result<BetaSet> {
    let c = BetaConstraint::new(worse, better)?;
    Ok(nonneg_set(&c.poly))
}

#[derive(Debug, Clone)]
pub struct Window {
    /// Intersection over all pairs.
    pub union: BetaSet,
    /// The component containing `1`, if any.
    pub main: Option<Component>,
    pub pairs: usize,
    pub distinct_constraints: usize,
}

/// Intersection of the feasible sets of all `pairs`.
pub fn feasible_window_pairs<'a>(pairs: impl IntoIterator<Item = (&'a Path, &'a Path)>) -> Result<Window> {
    let mut distinct: BTreeSet<Vec<i8>> = BTreeSet::new();
    let mut count = 0;
    for (w, b) in pairs {
        if w.len() != b.len() {
            return Err(Error::LengthMismatch {
                left: w.len(),
                right: b.len(),
            });
        }
        count += 1;
        let mut c = coefficients(w, b);
        // Dividing by a power of beta does not change the set on (0, inf).
        let low = c.iter().take_while(|&&x| x == 0).count();
        c.drain(..low);
        distinct.insert(c);
    }
    window_from(distinct, count)
}

fn window_from(distinct: BTreeSet<Vec<i8>>, pairs: usize) -> Result<Window> {
    if pairs == 0 {
        return Err(Error::InvalidParameter("no pairs to intersect".into()));
    }
    let mut set = BetaSet::everything();
    let n_distinct = distinct.len();
    for c in distinct {
        if c.iter().all(|&x| x >= 0) {
            continue;
        }
        set = set.intersect(&nonneg_set(&coefficient_poly(&c)));
        if set.is_empty() {
            break;
        }
    }
    let one = BigRational::one();
    let main = set.component_at(&one).cloned();
    Ok(Window {
        union: set,
        main,
        pairs,
        distinct_constraints: n_distinct,
    })
}

/// Window over every pair of `kind` in a complete database.
pub fn feasible_window(db: &PoDb, kind: RelKind) -> Result<Window> {
    if !db.is_complete() {
        return Err(Error::Incomplete("database is partial".into()));
    }
    let n = db.n();
    let mut distinct: BTreeSet<Vec<i8>> = BTreeSet::new();
    let mut count = 0;
    for ((w, b), e) in db.entries() {
        if !e.has(kind) {
            continue;
        }
        count += 1;
        let (w, b) = (Path::from_code(w as u64, n), Path::from_code(b as u64, n));
        let mut c = coefficients(&w, &b);
        let low = c.iter().take_while(|&&x| x == 0).count();
        c.drain(..low);
        distinct.insert(c);
    }
    window_from(distinct, count)
}

/// Report form of a window edge.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeReport {
    pub approx: Option<f64>,
    pub lo: Option<String>,
    pub hi: Option<String>,
    pub kind: &'static str,
}

impl From<&Edge> for EdgeReport {
    fn from(e: &Edge) -> Self {
        match e {
            Edge::Zero => Self {
                approx: Some(0.0),
                lo: None,
                hi: None,
                kind: "zero",
            },
            Edge::Infinity => Self {
                approx: None,
                lo: None,
                hi: None,
                kind: "infinity",
            },
            Edge::Root(r) => {
                let r = r.refined(&BigRational::new(BigInt::one(), BigInt::one() << 40));
                Self {
                    approx: Some(r.approx()),
                    lo: Some(r.lo.to_string()),
                    hi: Some(r.hi.to_string()),
                    kind: "root",
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Path {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn weights() {
        assert_eq!(beta_weight(&p("10"), 1.7), 1.7);
        assert_eq!(beta_weight(&p("01"), 1.7), 1.0);
        assert_eq!(beta_weight(&p("1100"), 2.0), 12.0);
        assert_eq!(beta_weight_exact(&p("0000"), &q(3, 2)), BigRational::zero());
    }

    #[test]
    fn single_pairs() {
        let s = feasible_interval(&p("01"), &p("10")).unwrap();
        assert_eq!(s.components.len(), 1);
        let c = &s.components[0];
        assert!(matches!(c.hi, Edge::Infinity));
        assert!((c.lo.approx() - 1.0).abs() < 1e-12);
        assert!(c.contains(&q(1, 1)));
        assert!(!c.contains(&q(99, 100)));

        let s = feasible_interval(&p("1100"), &p("1011")).unwrap();
        assert_eq!(s.components.len(), 1);
        assert!(matches!(s.components[0].lo, Edge::Zero));
        assert!((s.components[0].hi.approx() - 1.618_033_988_7).abs() < 1e-9);

        let s = feasible_interval(&p("1010"), &p("0111")).unwrap();
        assert!((s.components[0].hi.approx() - 1.465_571_231_9).abs() < 1e-9);
    }

    #[test]
    fn window_intersection() {
        let (a, b, c, d) = (p("0100"), p("1000"), p("1100"), p("1011"));
        let w = feasible_window_pairs([(&a, &b), (&c, &d)]).unwrap();
        let m = w.main.unwrap();
        assert!((m.lo.approx() - 1.0).abs() < 1e-12);
        assert!((m.hi.approx() - 1.618_033_988_7).abs() < 1e-9);
        assert!(feasible_window_pairs(std::iter::empty()).is_err());
    }

    #[test]
    fn shared_roots_compare_equal() {
        // Both constraints vanish at beta = 1.
        let s1 = feasible_interval(&p("01"), &p("10")).unwrap();
        let s2 = feasible_interval(&p("011"), &p("100")).unwrap();
        let both = s1.intersect(&s2);
        assert!(both.contains(&q(1, 1)) == s2.contains(&q(1, 1)));
        let r1 = match &s1.components[0].lo {
            Edge::Root(r) => r.clone(),
            _ => unreachable!(),
        };
        assert_eq!(r1.cmp_rational(&q(1, 1)), Ordering::Equal);
    }

    #[test]
    fn infeasible_pair_gives_empty_set() {
        let s = feasible_interval(&p("10"), &p("00")).unwrap();
        assert!(s.is_empty());
    }
}
