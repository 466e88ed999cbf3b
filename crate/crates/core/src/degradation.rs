//! The known channel-degradation order between equal-length paths.
//!
//! `alpha ≼ gamma` holds when `gamma` is reachable from `alpha` by flipping
//! a single 0 to 1 or by rewriting an adjacent `01` into `10`. Both moves
//! increase the MSB-first path code, which gives a topological order for
//! closure computations.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::bitmat::BitMatrix;
use crate::error::{Error, Result};
use crate::path::Path;

pub const MAX_BFS_LEN: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Leq,
    Geq,
    Equal,
    Incomparable,
}

/// One rewrite on the worse path, by position (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Step {
    /// `0 -> 1` at `pos`.
    Flip { pos: usize },
    /// `01 -> 10` at `pos, pos + 1`.
    Swap { pos: usize },
}

impl Step {
    pub fn apply(&self, p: &Path) -> Path {
        let mut bits = p.bits().to_vec();
        match *self {
            Step::Flip { pos } => {
                debug_assert_eq!(bits[pos], 0);
                bits[pos] = 1;
            }
            Step::Swap { pos } => {
                debug_assert_eq!((bits[pos], bits[pos + 1]), (0, 1));
                bits.swap(pos, pos + 1);
            }
        }
        Path::new(bits).expect("binary")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegVerdict {
    pub direction: Direction,
    /// Rewrites from the worse path to the better one.
    pub trace: Vec<Step>,
}

impl DegVerdict {
    pub fn comparable(&self) -> bool {
        self.direction != Direction::Incomparable
    }

    /// Replays the trace from `start`.
    pub fn replay(&self, start: &Path) -> Path {
        self.trace.iter().fold(start.clone(), |p, s| s.apply(&p))
    }
}

fn successors(code: u64, n: usize) -> impl Iterator<Item = (u64, Step)> {
    (0..n).flat_map(move |pos| {
        let bit = n - 1 - pos;
        let flip = (code >> bit & 1 == 0).then(|| (code | 1 << bit, Step::Flip { pos }));
        let swap = (pos + 1 < n && code >> bit & 1 == 0 && code >> (bit - 1) & 1 == 1)
            .then(|| (code ^ (0b11 << (bit - 1)), Step::Swap { pos }));
        flip.into_iter().chain(swap)
    })
}

fn bfs_trace(from: u64, to: u64, n: usize) -> Option<Vec<Step>> {
    if from == to {
        return Some(Vec::new());
    }
    if to < from {
        return None;
    }
    let mut parent: HashMap<u64, (u64, Step)> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    while let Some(c) = queue.pop_front() {
        for (s, step) in successors(c, n) {
            if s > to || parent.contains_key(&s) {
                continue;
            }
            parent.insert(s, (c, step));
            if s == to {
                let mut trace = Vec::new();
                let mut cur = to;
                while cur != from {
                    let (prev, st) = parent[&cur];
                    trace.push(st);
                    cur = prev;
                }
                trace.reverse();
                return Some(trace);
            }
            queue.push_back(s);
        }
    }
    None
}

pub fn deg_leq(alpha: &Path, gamma: &Path) -> Result<DegVerdict> {
    if alpha.len() != gamma.len() {
        return Err(Error::LengthMismatch {
            left: alpha.len(),
            right: gamma.len(),
        });
    }
    let n = alpha.len();
    if n > MAX_BFS_LEN {
        return Err(Error::InvalidParameter(format!(
            "path length {n} exceeds {MAX_BFS_LEN}"
        )));
    }
    let (a, g) = (alpha.code(), gamma.code());
    if a == g {
        return Ok(DegVerdict {
            direction: Direction::Equal,
            trace: Vec::new(),
        });
    }
    if let Some(trace) = bfs_trace(a, g, n) {
        return Ok(DegVerdict {
            direction: Direction::Leq,
            trace,
        });
    }
    if let Some(trace) = bfs_trace(g, a, n) {
        return Ok(DegVerdict {
            direction: Direction::Geq,
            trace,
        });
    }
    Ok(DegVerdict {
        direction: Direction::Incomparable,
        trace: Vec::new(),
    })
}

/// Strict order over all `2^n` paths: bit `(i, j)` set iff path `i` is
/// strictly worse than path `j` (codes MSB-first).
pub fn deg_matrix(n: usize) -> BitMatrix {
    let size = 1usize << n;
    let mut m = BitMatrix::new(size);
    for c in (0..size as u64).rev() {
        for (s, _) in successors(c, n) {
            m.set(c as usize, s as usize);
            m.or_row(c as usize, s as usize);
        }
    }
    m
}

/// Degradation relations for every length up to `n`, optionally saturated
/// with the suffix-exchange rule.
#[derive(Debug, Clone)]
pub struct DegLevels {
    levels: Vec<BitMatrix>,
    rule3: bool,
}

impl DegLevels {
    pub fn new(n: usize, rule3: bool) -> Self {
        let mut levels: Vec<BitMatrix> = vec![BitMatrix::new(1)];
        for len in 1..=n {
            let mut m = deg_matrix(len);
            if rule3 {
                for (w, b) in rule3_additions(&levels, len) {
                    m.set(w as usize, b as usize);
                }
                m.transitive_closure();
            }
            levels.push(m);
        }
        Self { levels, rule3 }
    }

    pub fn with_rule3(&self) -> bool {
        self.rule3
    }

    pub fn level(&self, len: usize) -> &BitMatrix {
        &self.levels[len]
    }

    pub fn max_len(&self) -> usize {
        self.levels.len() - 1
    }

    /// Non-strict order at the path's length.
    pub fn leq(&self, worse: &Path, better: &Path) -> bool {
        worse == better || self.levels[worse.len()].get(worse.code() as usize, better.code() as usize)
    }
}

/// Pairs of length `len` emitted by the suffix-exchange rule from shorter
/// premises `a ≼ g` and `a t 1^m ≼ g t 0^m`: every `a t e 1^m ≼ g t e 0^m`.
pub fn rule3_additions(levels: &[BitMatrix], len: usize) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for short in 2..len {
        let m_short = &levels[short];
        for (x, y) in m_short.iter() {
            let (x, y) = (x as u64, y as u64);
            // Split x = a t 1^m, y = g t 0^m.
            for m in 1..short {
                let mask = (1u64 << m) - 1;
                if x & mask != mask || y & mask != 0 {
                    break;
                }
                for a_len in 1..=short - m {
                    let k = short - m - a_len;
                    let tmask = ((1u64 << k) - 1) << m;
                    if (x ^ y) & tmask != 0 {
                        continue;
                    }
                    let a = x >> (m + k);
                    let g = y >> (m + k);
                    if a == g || !levels[a_len].get(a as usize, g as usize) {
                        continue;
                    }
                    let eta_len = len - short;
                    let head_x = x >> m;
                    let head_y = y >> m;
                    for eta in 0..(1u64 << eta_len) {
                        let wx = (((head_x << eta_len) | eta) << m) | mask;
                        let wy = ((head_y << eta_len) | eta) << m;
                        out.push((wx, wy));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Path {
        s.parse().unwrap()
    }

    /// Independent characterisation: prefix counts of ones dominate.
    fn prefix_dominated(a: &Path, g: &Path) -> bool {
        let (mut ca, mut cg) = (0, 0);
        for (x, y) in a.bits().iter().zip(g.bits()) {
            ca += *x as i32;
            cg += *y as i32;
            if cg < ca {
                return false;
            }
        }
        true
    }

    #[test]
    fn examples() {
        let v = deg_leq(&p("011"), &p("101")).unwrap();
        assert_eq!(v.direction, Direction::Leq);
        assert_eq!(v.trace, vec![Step::Swap { pos: 0 }]);
        assert_eq!(deg_leq(&p("100"), &p("011")).unwrap().direction, Direction::Incomparable);
        assert_eq!(deg_leq(&p("1100"), &p("1011")).unwrap().direction, Direction::Incomparable);
        assert_eq!(deg_leq(&p("0"), &p("0")).unwrap().direction, Direction::Equal);
        assert!(deg_leq(&p("0"), &p("01")).is_err());
    }

    #[test]
    fn other_listed_incomparable_pairs() {
        for (a, b) in [("1010", "0111"), ("1000", "0110"), ("10010", "01111")] {
            assert!(!deg_leq(&p(a), &p(b)).unwrap().comparable(), "{a} {b}");
        }
    }

    #[test]
    fn traces_replay() {
        for (a, b) in [("0000", "1111"), ("0011", "1100"), ("0101", "1010")] {
            let v = deg_leq(&p(a), &p(b)).unwrap();
            assert_eq!(v.direction, Direction::Leq);
            assert_eq!(v.replay(&p(a)), p(b));
        }
        let v = deg_leq(&p("110"), &p("001")).unwrap();
        assert_eq!(v.direction, Direction::Geq);
        assert_eq!(v.replay(&p("001")), p("110"));
    }

    #[test]
    fn matrix_matches_bfs_and_oracle() {
        for n in 1..=6 {
            let m = deg_matrix(n);
            for a in Path::all(n) {
                for g in Path::all(n) {
                    let want = a != g && prefix_dominated(&a, &g);
                    assert_eq!(m.get(a.code() as usize, g.code() as usize), want, "{a} {g}");
                    if n <= 4 {
                        let v = deg_leq(&a, &g).unwrap();
                        assert_eq!(v.direction == Direction::Leq, want);
                    }
                }
            }
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(deg_matrix(1).count(), 1);
        assert_eq!(deg_matrix(2).count(), 6);
        assert_eq!(deg_matrix(3).count(), 27);
    }

    #[test]
    fn extremes_and_partial_order_laws() {
        for n in 1..=7 {
            let m = deg_matrix(n);
            let top = (1usize << n) - 1;
            for i in 0..=top {
                assert!(!m.get(i, i));
                if i != 0 {
                    assert!(m.get(0, i));
                }
                if i != top {
                    assert!(m.get(i, top));
                }
            }
            let mut closed = m.clone();
            closed.transitive_closure();
            assert_eq!(closed, m);
            for (i, j) in m.iter() {
                assert!(!m.get(j, i));
            }
        }
    }

    #[test]
    fn rule3_emits_documented_instance() {
        let lv = DegLevels::new(2, false);
        let levels: Vec<BitMatrix> = (0..=2).map(|l| lv.level(l).clone()).collect();
        let adds = rule3_additions(&levels, 3);
        // a = 0, g = 1, t empty, m = 1, e = 1: 011 ≼ 110
        assert!(adds.contains(&(0b011, 0b110)));
        assert!(!adds.contains(&(0b011, 0b100)));
        assert!(rule3_additions(&[BitMatrix::new(1)], 1).is_empty());
    }

    #[test]
    fn rule3_adds_nothing_new_up_to_seven() {
        let base = DegLevels::new(7, false);
        let sat = DegLevels::new(7, true);
        for len in 1..=7 {
            assert_eq!(base.level(len), sat.level(len), "length {len}");
        }
    }
}
