//! Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned
//! below. Oracles that decide a criterion live in this file and do not go
//! through the code they check.
//!
//! `cargo test --release --test acceptance -- --nocapture`

use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polo::bec::{bec_leq, bec_holds, staircase_fact};
use polo::beta::{feasible_interval, feasible_window_pairs, BetaSet, Edge};
use polo::bounds::{prove_z, t_interval, z_interval, z_premise, Interval, Strategy};
use polo::degradation::{deg_leq, Direction};
use polo::podb::{self, build, BuildConfig, PoDb};
use polo::rules::{derive_pair, Detail, RelKind, Relation, Rule, RuleSet};
use polo::sim::construct::{parse_swaps, read_sequence};
use polo::sim::{
    awgn_sweep, build_info_set, crossing, genie_estimate, sc_decode, simulate, write_csv, Channel, Decoder, InfoSet,
    Method,
};
use polo::Path;

// Criterion 1.
const TOTAL_PAIRS_N10: u64 = 523_776;
const DEG_PAIRS_N10: u64 = 328_155;
const Z_PAIRS_N10: u64 = 378_796;
const Z_NEW_PAIRS_N10: u64 = 50_641;
// Criterion 5.
const GOLDEN: f64 = 1.618_033_988_7;
const CUBIC_ROOT: f64 = 1.465_571_231_9;
const ENDPOINT_TOL: f64 = 1e-9;
const WINDOW_HI: (i64, i64) = (12_311, 10_000);
// Criterion 7.
const BEC_SAMPLES: usize = 64;
const BEC_MAX_LEN: usize = 8;
const BSC_P: (i64, i64) = (1, 10);
const BSC_MAX_LEN: usize = 4;
const GENIE_TRIALS: u64 = 100_000;
const GENIE_SIGMAS: f64 = 3.0;
/// Rounding allowance for estimates with zero variance.
const FLOAT_SLACK: f64 = 1e-9;
// Criterion 8.
const SIM_N: usize = 10;
const SIM_K: usize = 512;
const SIM_FRAMES: u64 = 200_000;
const TARGET_FER: f64 = 1e-2;
const GAP_DB: f64 = 0.25;
const GAP_TOL_DB: f64 = 0.10;
const LOG2_BETAS: [f64; 3] = [0.0, 0.15, 0.30];
// Reduced run at a rate where the swaps apply.
const SMALL_K: usize = 384;
const SMALL_FRAMES: u64 = 20_000;
const SMALL_SNRS: [f64; 4] = [2.0, 2.25, 2.5, 2.75];
const SEED: u64 = 1;

struct Outcome {
    id: u8,
    pass: bool,
    detail: String,
}

fn p(s: &str) -> Path {
    s.parse().unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn data_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run_lines(bit: char, count: usize) -> String {
    std::iter::repeat(bit).take(count).collect()
}

// ---------------------------------------------------------------------------
// 1, 2: the n = 10 database.

fn build_n10() -> (PoDb, f64) {
    let (db, report) = build(10, &BuildConfig::for_n(10)).expect("n = 10 builds");
    (db, report.seconds)
}

fn criterion_1(db: &PoDb, seconds: f64) -> Outcome {
    let s = podb::stats(db);
    let base = db.header.deg_pairs_base.unwrap_or(s.deg);
    let rule3 = db.header.deg_pairs_rule3;
    let pass = s.total_pairs == TOTAL_PAIRS_N10
        && db.is_complete()
        && s.deg == DEG_PAIRS_N10
        && s.z_known == Z_PAIRS_N10
        && s.z_new == Z_NEW_PAIRS_N10;
    Outcome {
        id: 1,
        pass,
        detail: format!(
            "total {} (want {TOTAL_PAIRS_N10}); deg base {base}, with suffix exchange {}, want {DEG_PAIRS_N10}, \
             matched {:?}; z criterion {}, z incl. deg {} (want {Z_PAIRS_N10}); z not deg {} (want {Z_NEW_PAIRS_N10}); \
             {seconds:.0} s",
            s.total_pairs,
            rule3.map_or("n/a".into(), |v| v.to_string()),
            db.header.matched_reference,
            s.z_criterion,
            s.z_known,
            s.z_new,
        ),
    }
}

fn criterion_2(db: &PoDb) -> Outcome {
    match podb::pu_conventions(db) {
        Ok(c) => Outcome {
            id: 2,
            pass: c.len() == 1,
            detail: format!(
                "conventions holding all five pairs: [{}]",
                c.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("; ")
            ),
        },
        Err(e) => Outcome {
            id: 2,
            pass: false,
            detail: e.to_string(),
        },
    }
}

// ---------------------------------------------------------------------------
// 3.

fn criterion_3() -> Outcome {
    let deg = deg_leq(&p("100"), &p("011")).unwrap();
    let z = prove_z(&p("100"), &p("011")).unwrap();
    // Every other length-3 pair that is Z-ordered is degradation-ordered.
    let mut others = Vec::new();
    for a in Path::all(3) {
        for b in Path::all(3) {
            if a == b || (a == p("100") && b == p("011")) {
                continue;
            }
            if prove_z(&a, &b).unwrap().proven && !matches!(deg_leq(&a, &b).unwrap().direction, Direction::Leq) {
                others.push(format!("{a}/{b}"));
            }
        }
    }
    Outcome {
        id: 3,
        pass: deg.direction == Direction::Incomparable && z.proven && others.is_empty(),
        detail: format!(
            "deg {:?}, z proven {}, other n=3 exceptions {others:?}",
            deg.direction, z.proven
        ),
    }
}

// ---------------------------------------------------------------------------
// 4.

fn criterion_rules() -> RuleSet {
    RuleSet {
        deg: false,
        transitive: false,
        count: None,
        suffix_ones: false,
        suffix_zeros: false,
        insert_ones: false,
        insert_zeros: false,
        ..RuleSet::default()
    }
}

/// The criterion node of a derivation and its BEC premise, if it is one.
fn cited_premise(r: &Relation) -> Option<(Strategy, Path, Path)> {
    let Detail::Strategy { strategy } = r.detail else {
        return None;
    };
    let [bec] = r.premises.as_slice() else {
        return None;
    };
    (bec.kind == RelKind::Bec).then(|| (strategy, bec.worse.clone(), bec.better.clone()))
}

struct CriterionItem {
    label: String,
    kind: RelKind,
    worse: String,
    better: String,
    strategy: Strategy,
    premise: (String, String),
}

fn item(label: &str, kind: RelKind, w: &str, b: &str, st: Strategy, pw: &str, pb: &str) -> CriterionItem {
    CriterionItem {
        label: label.into(),
        kind,
        worse: w.into(),
        better: b.into(),
        strategy: st,
        premise: (pw.into(), pb.into()),
    }
}

fn criterion_items() -> Vec<CriterionItem> {
    use RelKind::{P, Z};
    use Strategy::*;
    let mut v = vec![
        item("1a", Z, "11001", "10111", Shift, "1100", "0111"),
        item("1b", Z, "110001", "101101", Shift, "11000", "01101"),
        item("2a", Z, "100", "011", Wrap, "1100", "0111"),
        item("2b", Z, "1010", "0111", Wrap, "11010", "01111"),
        item("3a", P, "11000", "10111", ZDomain, "1100", "0111"),
        item("3b", P, "110100", "101111", ZDomain, "11010", "01111"),
        item("4a", P, "1000", "0111", TDomain, "1000", "0011"),
        item("4b", P, "10010", "01111", TDomain, "10010", "00111"),
    ];
    for k in 1..=3usize {
        let m = 1usize << k;
        let (ones, zeros) = (|c| run_lines('1', c), |c| run_lines('0', c));
        // Every family rests on 1^k 0^(2^k) ≼_BEC 0^k 1^(2^k).
        let (pw, pb) = (ones(k) + &zeros(m), zeros(k) + &ones(m));
        v.push(item(
            &format!("1c k={k}"),
            Z,
            &(ones(k) + &zeros(m)),
            &("1".to_string() + &zeros(k) + &ones(m - 1)),
            Prepend,
            &pw,
            &pb,
        ));
        v.push(item(
            &format!("2c k={k}"),
            Z,
            &(ones(k - 1) + &zeros(m)),
            &(zeros(k) + &ones(m - 1)),
            Wrap,
            &pw,
            &pb,
        ));
        v.push(item(
            &format!("3c k={k}"),
            P,
            &(ones(k) + &zeros(m + 1)),
            &("1".to_string() + &zeros(k) + &ones(m)),
            ZDomain,
            &pw,
            &pb,
        ));
        v.push(item(
            &format!("4c k={k}"),
            P,
            &(ones(k) + &zeros(m)),
            &(zeros(k - 1) + &ones(m + 1)),
            TDomain,
            &pw,
            &pb,
        ));
    }
    v
}

/// Hand-built derivation of a structural example. The core is whatever
/// `derive_pair` certifies for the cited premise.
struct StructuralItem {
    label: &'static str,
    kind: RelKind,
    worse: &'static str,
    better: &'static str,
    core: (&'static str, &'static str),
    rule: Rule,
    detail: Detail,
    /// Degradation side premise of a suffix step.
    deg: Option<(&'static str, &'static str)>,
    rules: RuleSet,
    /// Rules used to certify the core.
    core_rules: RuleSet,
}

fn structural_items() -> Vec<StructuralItem> {
    let g = RuleSet::generators_only();
    vec![
        StructuralItem {
            label: "5a",
            kind: RelKind::Z,
            worse: "101010011",
            better: "101001111",
            core: ("100", "011"),
            rule: Rule::SuffixOnes,
            detail: Detail::Suffix {
                tau_worse: p("1010"),
                tau_better: p("1010"),
                p: 2,
            },
            deg: None,
            rules: RuleSet {
                suffix_ones: true,
                exact_max_len: 8,
                ..g.clone()
            },
            core_rules: RuleSet {
                suffix_ones: true,
                exact_max_len: 8,
                ..g.clone()
            },
        },
        StructuralItem {
            label: "5b",
            kind: RelKind::P,
            worse: "01100001",
            better: "10011110",
            core: ("100001", "011110"),
            rule: Rule::SuffixZeros,
            detail: Detail::Suffix {
                tau_worse: p("01"),
                tau_better: p("10"),
                p: 0,
            },
            deg: Some(("01", "10")),
            rules: RuleSet {
                suffix_zeros: true,
                exact_max_len: 7,
                ..g.clone()
            },
            core_rules: RuleSet {
                suffix_zeros: true,
                exact_max_len: 7,
                ..g.clone()
            },
        },
        StructuralItem {
            label: "5c",
            kind: RelKind::Z,
            worse: "00111000111",
            better: "10100111110",
            core: ("0110001", "1001110"),
            rule: Rule::InsertOnes,
            detail: Detail::Insert {
                p: 1,
                q: 1,
                r: 0,
                s: 1,
                tau: p("01"),
                k: 2,
            },
            deg: None,
            rules: RuleSet {
                insert_ones: true,
                exact_max_len: 7,
                ..g.clone()
            },
            core_rules: RuleSet {
                insert_ones: true,
                exact_max_len: 7,
                ..g.clone()
            },
        },
        StructuralItem {
            label: "5d",
            kind: RelKind::P,
            worse: "00101110000001",
            better: "10101001111000",
            core: ("01100001", "10011110"),
            rule: Rule::InsertZeros,
            detail: Detail::Insert {
                p: 1,
                q: 1,
                r: 1,
                s: 0,
                tau: p("0101"),
                k: 2,
            },
            deg: None,
            rules: RuleSet {
                insert_zeros: true,
                exact_max_len: 9,
                ..g.clone()
            },
            core_rules: RuleSet {
                suffix_zeros: true,
                exact_max_len: 7,
                ..g
            },
        },
    ]
}

fn criterion_4() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    let rules = criterion_rules();
    let mut other_premise = Vec::new();
    for it in criterion_items() {
        checked += 1;
        let (w, b) = (p(&it.worse), p(&it.better));
        let (pw, pb) = (p(&it.premise.0), p(&it.premise.1));
        let rule = if it.kind == RelKind::Z {
            Rule::ZCriterion
        } else {
            Rule::PCriterion
        };
        // The cited step: the criterion applied to the cited BEC premise,
        // which derive_pair must certify on its own.
        let cited = derive_pair(&pw, &pb, RelKind::Bec, &rules).unwrap().map(|bec| Relation {
            kind: it.kind,
            worse: w.clone(),
            better: b.clone(),
            rule,
            detail: Detail::Strategy { strategy: it.strategy },
            premises: vec![bec],
        });
        // For Z the shape alone fixes the premise.
        let shape_ok = it.kind != RelKind::Z || z_premise(&w, &b) == (it.strategy, (pw.clone(), pb.clone()));
        let cited_ok = shape_ok && cited.as_ref().is_some_and(Relation::verify);
        let derived = derive_pair(&w, &b, it.kind, &rules).unwrap();
        let derived_ok = derived.as_ref().is_some_and(|r| r.rule == rule && r.verify());
        if let Some(r) = derived.as_ref().filter(|_| derived_ok) {
            if cited_premise(r) != Some((it.strategy, pw.clone(), pb.clone())) {
                other_premise.push(it.label.clone());
            }
        }
        if !(derived_ok && cited_ok) {
            failures.push(format!(
                "{}: cited step {cited_ok}, derived {}",
                it.label,
                derived.map_or("nothing".into(), |r| r.to_text().replace('\n', " | "))
            ));
        }
    }
    for it in structural_items() {
        checked += 1;
        let (w, b) = (p(it.worse), p(it.better));
        let core = derive_pair(&p(it.core.0), &p(it.core.1), it.kind, &it.core_rules).unwrap();
        let derived = derive_pair(&w, &b, it.kind, &it.rules).unwrap();
        let cited = core.map(|core| {
            let mut premises = Vec::new();
            if let Some((dw, db)) = it.deg {
                premises.push(Relation {
                    kind: RelKind::Deg,
                    worse: p(dw),
                    better: p(db),
                    rule: Rule::Degradation,
                    detail: Detail::None,
                    premises: Vec::new(),
                });
            }
            premises.push(core);
            Relation {
                kind: it.kind,
                worse: w.clone(),
                better: b.clone(),
                rule: it.rule,
                detail: it.detail.clone(),
                premises,
            }
        });
        let derived_ok = derived.as_ref().is_some_and(|r| r.rule == it.rule && r.verify());
        let cited_ok = cited.as_ref().is_some_and(Relation::verify);
        if !(derived_ok && cited_ok) {
            failures.push(format!(
                "{}: derived {derived_ok}, cited step {cited_ok}",
                it.label
            ));
        }
    }
    Outcome {
        id: 4,
        pass: failures.is_empty(),
        detail: format!(
            "{checked} items, failures {failures:?}; derived with a different valid premise: {other_premise:?}"
        ),
    }
}

// ---------------------------------------------------------------------------
// 5.

fn upper_edge(set: &BetaSet) -> Option<f64> {
    let one = BigRational::one();
    set.component_at(&one).and_then(|c| match &c.hi {
        Edge::Root(r) => Some(r.refined(&q(1, 1 << 50)).approx()),
        _ => None,
    })
}

/// Whether `B(better) - B(worse)` is negative on some `(1, 1 + d)`, from
/// its Taylor coefficients at 1.
fn negative_just_above_one(worse: &Path, better: &Path) -> bool {
    let n = worse.len() as i64;
    let c: Vec<(i64, i64)> = worse
        .bits()
        .iter()
        .zip(better.bits())
        .enumerate()
        .map(|(i, (&w, &b))| (n - 1 - i as i64, b as i64 - w as i64))
        .collect();
    // k-th derivative at 1, up to k!.
    for k in 0..=n {
        let d: i64 = c
            .iter()
            .map(|&(j, x)| x * (0..k).map(|t| j - t).product::<i64>())
            .sum();
        if d != 0 {
            return d < 0;
        }
    }
    false
}

/// Real root of `x^3 - x^2 - 1` by bisection.
fn cubic_root() -> f64 {
    let f = |x: f64| x * x * x - x * x - 1.0;
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn criterion_5(dbs: &[PoDb]) -> Outcome {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let cubic = cubic_root();
    let e1 = upper_edge(&feasible_interval(&p("1100"), &p("1011")).unwrap());
    let e2 = upper_edge(&feasible_interval(&p("1010"), &p("0111")).unwrap());
    let close = |e: Option<f64>, oracle: f64, lit: f64| {
        e.is_some_and(|e| (e - oracle).abs() <= ENDPOINT_TOL && (e - lit).abs() <= ENDPOINT_TOL)
    };

    let pairs: Vec<(Path, Path)> = dbs.iter().flat_map(pb_pairs).collect();
    let window = feasible_window_pairs(pairs.iter().map(|(a, b)| (a, b))).unwrap();
    let hi = q(WINDOW_HI.0, WINDOW_HI.1);
    let contains = window
        .union
        .component_at(&BigRational::one())
        .is_some_and(|c| c.contains(&hi));
    let blocking: Vec<String> = pairs
        .iter()
        .filter(|(w, b)| negative_just_above_one(w, b))
        .map(|(w, b)| format!("{w}/{b}"))
        .collect();
    let union: Vec<(f64, f64)> = window.union.components.iter().map(|c| c.approx()).collect();
    Outcome {
        id: 5,
        pass: close(e1, golden, GOLDEN) && close(e2, cubic, CUBIC_ROOT) && contains,
        detail: format!(
            "1100/1011 edge {e1:?} vs {golden:.12}; 1010/0111 edge {e2:?} vs {cubic:.12}; \
             window over {} pairs ({} distinct) = {union:?}, contains [1, 1.2311]: {contains}; \
             pairs violated just above 1: {blocking:?}",
            window.pairs, window.distinct_constraints
        ),
    }
}

// ---------------------------------------------------------------------------
// 6.

/// Generator matrix `F^{⊗n}` row by row, independent of the transform
/// under test.
fn kron_rows(size: usize) -> Vec<Vec<u8>> {
    let mut g = vec![vec![1u8]];
    while g.len() < size {
        let m = g.len();
        let mut next = vec![vec![0u8; 2 * m]; 2 * m];
        for i in 0..m {
            for j in 0..m {
                next[i][j] = g[i][j];
                next[i + m][j] = g[i][j];
                next[i + m][j + m] = g[i][j];
            }
        }
        g = next;
    }
    g
}

fn encode(g: &[Vec<u8>], u: &[u8]) -> Vec<u8> {
    let n = u.len();
    (0..n)
        .map(|j| (0..n).fold(0u8, |acc, i| acc ^ (u[i] & g[i][j])))
        .collect()
}

/// Log-likelihood of `x` up to a constant, for LLRs `log P(0)/P(1)`.
fn log_lik(x: &[u8], llr: &[f64]) -> f64 {
    x.iter().zip(llr).map(|(&b, &l)| if b == 0 { l / 2.0 } else { -l / 2.0 }).sum()
}

fn sc_ml_cases() -> (usize, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    let mut checks = 0;
    for case in 0..200 {
        let size = 1usize << (1 + case % 3);
        let g = kron_rows(size);
        let llr: Vec<f64> = (0..size).map(|_| rng.gen_range(-4.0..4.0)).collect();
        let words: Vec<Vec<u8>> = (0..1usize << size)
            .map(|m| (0..size).map(|j| ((m >> j) & 1) as u8).collect())
            .collect();

        // Unfrozen: SC is block ML.
        let ml = words
            .iter()
            .max_by(|a, b| log_lik(&encode(&g, a), &llr).total_cmp(&log_lik(&encode(&g, b), &llr)))
            .unwrap();
        checks += 1;
        if sc_decode(&llr, &vec![false; size], Decoder::Exact).unwrap() != *ml {
            failures.push(format!("case {case}: block"));
        }

        // Bits before i frozen: SC decides bit i by the bitwise MAP rule
        // given the frozen prefix.
        for i in 0..size {
            let mut mass = [f64::NEG_INFINITY; 2];
            for u in words.iter().filter(|u| u[..i].iter().all(|&b| b == 0)) {
                let l = log_lik(&encode(&g, u), &llr);
                let m = mass[u[i] as usize];
                mass[u[i] as usize] = if m.is_infinite() { l } else { m.max(l) + (-(m - l).abs()).exp().ln_1p() };
            }
            let map = (mass[1] > mass[0]) as u8;
            let frozen: Vec<bool> = (0..size).map(|j| j < i).collect();
            checks += 1;
            if sc_decode(&llr, &frozen, Decoder::Exact).unwrap()[i] != map {
                failures.push(format!("case {case}: bit {i}"));
            }
        }
    }
    (checks, failures)
}

fn criterion_6() -> Outcome {
    // Staircase closed form against the exact order.
    let mut stair_bad = Vec::new();
    for m in 0..=3usize {
        for n in 0..=8usize {
            let a = p(&(run_lines('1', m) + &run_lines('0', n)));
            let b = p(&(run_lines('0', m) + &run_lines('1', n)));
            let exact = matches!(bec_leq(&a, &b).unwrap().relation, Direction::Leq | Direction::Equal);
            if staircase_fact(m as u32, n as u32) != exact {
                stair_bad.push((m, n));
            }
        }
    }

    // The three shapes of the Z criterion each state an equivalent BEC
    // premise; all must agree with the generic check wherever they apply.
    let mut rule_bad = Vec::new();
    let mut rule_checks = 0usize;
    for n in 1..=6 {
        let paths: Vec<Path> = Path::all(n).collect();
        for w in &paths {
            for b in &paths {
                if w == b {
                    continue;
                }
                let generic = prove_z(w, b).unwrap().proven;
                let mut forms = vec![("wrap", bec_holds(&w.with_prefix(1), &b.with_suffix(1)))];
                if b.starts_with(&[1]) {
                    forms.push(("prepend", bec_holds(w, &b.slice(1, n).with_suffix(1))));
                    if w.ends_with(&[1]) {
                        forms.push(("shift", bec_holds(&w.slice(0, n - 1), &b.slice(1, n))));
                    }
                }
                for (name, v) in forms {
                    rule_checks += 1;
                    if v != generic {
                        rule_bad.push(format!("{w}/{b} {name}"));
                    }
                }
            }
        }
    }

    let (sc_checks, sc_bad) = sc_ml_cases();
    Outcome {
        id: 6,
        pass: stair_bad.is_empty() && rule_bad.is_empty() && sc_bad.is_empty(),
        detail: format!(
            "staircase mismatches {stair_bad:?}; {rule_checks} shape checks, mismatches {}; \
             {sc_checks} SC/ML checks, mismatches {sc_bad:?}",
            rule_bad.len()
        ),
    }
}

// ---------------------------------------------------------------------------
// 7.

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let two = BigRational::from_integer(2.into());
    let mut bec_bad = Vec::new();
    let mut bec_checks = 0;
    for _ in 0..BEC_SAMPLES {
        let eps = q(rng.gen_range(1..(1 << 16)), 1 << 16);
        let x = Interval::point(eps.clone()).unwrap();
        // Exact Z of every path by the erasure recursion, breadth first.
        let mut level = vec![(Path::empty(), eps.clone())];
        for _ in 0..BEC_MAX_LEN {
            let mut next = Vec::with_capacity(level.len() * 2);
            for (a, z) in &level {
                let sq = z * z;
                next.push((a.with_suffix(0), &two * z - &sq));
                next.push((a.with_suffix(1), sq));
            }
            for (a, z) in &next {
                bec_checks += 1;
                if !z_interval(a, &x).contains(z) {
                    bec_bad.push(format!("{a} at {eps}"));
                }
            }
            level = next;
        }
    }

    let bsc = Channel::bsc(BSC_P.0 as f64 / BSC_P.1 as f64).unwrap();
    let pr = q(BSC_P.0, BSC_P.1);
    let z0 = Interval::point(q(3, 5)).unwrap(); // 2 sqrt(p (1 - p))
    let t0 = Interval::point(&pr * &two).unwrap();
    assert_eq!(z0.lo() * z0.lo(), q(4, 1) * &pr * (BigRational::one() - &pr));
    let mut genie_bad = Vec::new();
    let mut genie_checks = 0;
    for len in 0..=BSC_MAX_LEN {
        for a in Path::all(len) {
            let est = genie_estimate(bsc, &a, GENIE_TRIALS, SEED + a.code() + (len as u64) * 1000).unwrap();
            let zi = z_interval(&a, &z0).to_f64();
            let ti = t_interval(&a, &t0, Some(&z0)).unwrap().to_f64();
            let inside = |v: f64, se: f64, (lo, hi): (f64, f64)| {
                let slack = GENIE_SIGMAS * se + FLOAT_SLACK;
                v >= lo - slack && v <= hi + slack
            };
            genie_checks += 2;
            if !inside(est.z, est.z_se, zi) {
                genie_bad.push(format!("Z {a}: {:.5} ± {:.5} vs {zi:?}", est.z, est.z_se));
            }
            if !inside(est.t, est.t_se, ti) {
                genie_bad.push(format!("T {a}: {:.5} ± {:.5} vs {ti:?}", est.t, est.t_se));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        id: 7,
        pass: bec_bad.is_empty() && genie_bad.is_empty() && secs <= 600.0,
        detail: format!(
            "{bec_checks} BEC enclosures, misses {bec_bad:?}; {genie_checks} BSC genie checks at {GENIE_TRIALS} trials, \
             misses {genie_bad:?}; {secs:.0} s"
        ),
    }
}

// ---------------------------------------------------------------------------
// 8, 9.

struct SimArtifacts {
    csv_5g: Vec<u8>,
    csv_a1: Vec<u8>,
}

fn five_g_sets(k: usize) -> polo::Result<(InfoSet, polo::Result<InfoSet>)> {
    let seq = read_sequence(&data_file("polar_5g.csv"), SIM_N)?;
    let swaps = parse_swaps(&std::fs::read_to_string(data_file("a1_swaps.txt"))?)?;
    let method = Method::Sequence(seq);
    let a5g = build_info_set(SIM_N, k, &method, &[])?;
    let a1 = build_info_set(SIM_N, k, &method, &swaps);
    Ok((a5g, a1))
}

fn csv_bytes(results: &[polo::sim::SimResult]) -> Vec<u8> {
    let mut out = Vec::new();
    write_csv(results, &mut out).unwrap();
    out
}

fn run_sims(a5g: &InfoSet, a1: &InfoSet, snrs: &[f64], frames: u64) -> (Vec<polo::sim::SimResult>, Vec<polo::sim::SimResult>) {
    let rate = a5g.k as f64 / a5g.len() as f64;
    let pts = awgn_sweep(snrs, rate).unwrap();
    let r5 = simulate(&pts, a5g, frames, SEED, Decoder::Exact).unwrap();
    let r1 = simulate(&pts, a1, frames, SEED, Decoder::Exact).unwrap();
    (r5, r1)
}

fn pb_pairs(db: &PoDb) -> Vec<(Path, Path)> {
    let n = db.n();
    db.entries()
        .filter(|(_, e)| e.has(RelKind::Z) || e.has(RelKind::Deg))
        .map(|((w, b), _)| (Path::from_code(w as u64, n), Path::from_code(b as u64, n)))
        .collect()
}

/// Violated pairs by direct float evaluation, and whether `beta` lies in
/// the exact feasible set.
fn beta_conflicts(pairs: &[(Path, Path)], window: &BetaSet, log2_beta: f64) -> (usize, bool) {
    let beta = 2f64.powf(log2_beta);
    let weight = |a: &Path| {
        let n = a.len();
        a.bits()
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(i, _)| beta.powi((n - 1 - i) as i32))
            .sum::<f64>()
    };
    let direct = pairs.iter().filter(|(w, b)| weight(w) > weight(b) + 1e-9).count();
    // A rational bracket of beta inside one feasible component.
    let scale = 1i64 << 40;
    let lo = q((beta * scale as f64).floor() as i64, scale);
    let hi = q((beta * scale as f64).ceil() as i64, scale);
    let exact = window.component_at(&lo).is_some_and(|c| c.contains(&hi));
    (direct, exact)
}

fn criterion_8(db: &PoDb) -> (Outcome, Option<SimArtifacts>) {
    let mut notes = Vec::new();
    let mut pass = true;

    match five_g_sets(SIM_K) {
        Ok((a5g, Ok(a1))) => {
            let start = Instant::now();
            let snrs = [1.75, 2.0, 2.25, 2.5];
            let (r5, r1) = run_sims(&a5g, &a1, &snrs, SIM_FRAMES);
            let gap = crossing(&r1, TARGET_FER).zip(crossing(&r5, TARGET_FER)).map(|(a, b)| a - b);
            let ok = gap.is_some_and(|g| (g - GAP_DB).abs() <= GAP_TOL_DB);
            pass &= ok;
            notes.push(format!("K={SIM_K} gap {gap:?} dB, {:.0} s", start.elapsed().as_secs_f64()));
        }
        Ok((_, Err(e))) => {
            pass = false;
            notes.push(format!("K={SIM_K}: A_1 not constructible ({e})"));
        }
        Err(e) => {
            pass = false;
            notes.push(format!("reliability sequence unavailable ({e}); run scripts/fetch_5g_sequence.sh"));
        }
    }

    // Reduced run at a rate where all swaps apply; informational only.
    let mut artifacts = None;
    if let Ok((a5g, Ok(a1))) = five_g_sets(SMALL_K) {
        let (r5, r1) = run_sims(&a5g, &a1, &SMALL_SNRS, SMALL_FRAMES);
        let c5 = crossing(&r5, TARGET_FER);
        let c1 = crossing(&r1, TARGET_FER);
        notes.push(format!(
            "K={SMALL_K}, {SMALL_FRAMES} frames: FER 1e-2 at {c5:.3?} dB (5G) and {c1:.3?} dB (swapped), gap {:.3?} dB",
            c1.zip(c5).map(|(a, b)| a - b)
        ));
        artifacts = Some(SimArtifacts {
            csv_5g: csv_bytes(&r5),
            csv_a1: csv_bytes(&r1),
        });
    }

    let pairs = pb_pairs(db);
    let window = feasible_window_pairs(pairs.iter().map(|(a, b)| (a, b))).unwrap();
    for lb in LOG2_BETAS {
        let (direct, exact) = beta_conflicts(&pairs, &window.union, lb);
        pass &= direct == 0 && exact;
        notes.push(format!("log2 beta {lb}: {direct} violated pairs, inside exact window {exact}"));
    }
    (
        Outcome {
            id: 8,
            pass,
            detail: notes.join("; "),
        },
        artifacts,
    )
}

fn criterion_9(db: &PoDb, sims: Option<&SimArtifacts>) -> Outcome {
    let bytes = |db: &PoDb| {
        let mut out = Vec::new();
        podb::write_binary(db, &mut out).unwrap();
        out
    };
    let first = bytes(db);
    let (again, _) = build_n10();
    let db_same = first == bytes(&again);

    let sim_same = match (sims, five_g_sets(SMALL_K)) {
        (Some(s), Ok((a5g, Ok(a1)))) => {
            let (r5, r1) = run_sims(&a5g, &a1, &SMALL_SNRS, SMALL_FRAMES);
            Some(csv_bytes(&r5) == s.csv_5g && csv_bytes(&r1) == s.csv_a1)
        }
        _ => None,
    };
    Outcome {
        id: 9,
        pass: db_same && sim_same == Some(true),
        detail: format!(
            "n=10 database bytes identical {db_same} ({} bytes); simulation CSV identical {sim_same:?}",
            first.len()
        ),
    }
}

#[test]
fn acceptance() {
    let mut outcomes = Vec::new();
    let report = |o: &Outcome| {
        println!("criterion {}: {} | {}", o.id, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    };

    let (db10, seconds) = build_n10();
    let mut dbs: Vec<PoDb> = (1..10).map(|n| build(n, &BuildConfig::for_n(n)).unwrap().0).collect();

    outcomes.push(criterion_1(&db10, seconds));
    report(outcomes.last().unwrap());
    outcomes.push(criterion_2(&db10));
    report(outcomes.last().unwrap());
    outcomes.push(criterion_3());
    report(outcomes.last().unwrap());
    outcomes.push(criterion_4());
    report(outcomes.last().unwrap());
    dbs.push(db10);
    outcomes.push(criterion_5(&dbs));
    report(outcomes.last().unwrap());
    let db10 = dbs.pop().unwrap();
    outcomes.push(criterion_6());
    report(outcomes.last().unwrap());
    outcomes.push(criterion_7());
    report(outcomes.last().unwrap());
    let (o8, sims) = criterion_8(&db10);
    outcomes.push(o8);
    report(outcomes.last().unwrap());
    outcomes.push(criterion_9(&db10, sims.as_ref()));
    report(outcomes.last().unwrap());

    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    println!("acceptance: {} of {} pass", outcomes.len() - failed.len(), outcomes.len());
    assert!(failed.is_empty(), "failing criteria {failed:?}");
}
