//! Certified all-pairs dominance scans: for every upper path `prefix + a`
//! and every lower path `L_b`, decide `Z_{prefix a} >= Z_{L_b}` on [0,1].
//!
//! Stage one evaluates every path at the shared probe points in the log
//! domain. A pair that looks violated at some probe is confirmed by an exact
//! dyadic evaluation there; every other pair goes to stage two, which
//! compares packed Bernstein coefficients slot by slot and falls back to
//! subdivision. Every verdict is exact.

use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::bitmat::BitMatrix;
use crate::path::Path;
use crate::poly::{
    certify_difference, eval_z_dyadic, for_each_z_bernstein, probe_points, probe_says_below,
    probe_values, z_bernstein, PackedBernstein,
};

/// Limits for one scan. Exceeding either one stops the scan early and marks
/// it incomplete.
#[derive(Debug, Clone, Copy, Default)]
pub struct ScanBudget {
    pub deadline: Option<Instant>,
    /// Cap on pairs that need the subdivision fallback.
    pub max_slow_pairs: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScanCounts {
    pub rejected_at_probe: u64,
    pub certified_by_slots: u64,
    pub certified_by_subdivision: u64,
    pub rejected_by_subdivision: u64,
}

#[derive(Debug, Clone)]
pub struct ScanOutcome {
    /// Bit `(a, b)` set iff `Z_{prefix a} >= Z_{L_b}` was certified.
    pub holds: BitMatrix,
    pub counts: ScanCounts,
    pub complete: bool,
}

/// Runs the scan over uppers `prefix + a` for every `a` of length `n`
/// (indexed by code) against `lowers[b]`; `None` columns and pairs with
/// `skip(a, b)` are left unset.
pub fn dominance_scan(
    prefix: &Path,
    n: usize,
    lowers: &[Option<Path>],
    skip: &(dyn Fn(usize, usize) -> bool + Sync),
    budget: ScanBudget,
) -> ScanOutcome {
    let size = 1usize << n;
    let m = prefix.len() + n;
    assert!(lowers.iter().flatten().all(|l| l.len() == m), "lower paths must have length {m}");

    let uppers: Vec<Path> = (0..size as u64)
        .map(|a| prefix.concat(&Path::from_code(a, n)))
        .collect();
    let up_probe: Vec<Vec<(f64, f64)>> = uppers.par_iter().map(probe_values).collect();
    let low_probe: Vec<Option<Vec<(f64, f64)>>> = lowers
        .par_iter()
        .map(|l| l.as_ref().map(probe_values))
        .collect();
    let probe_count = probe_points().len();

    // Order probes by how often they fire on a sample, so that rejected
    // pairs share few exact evaluation points.
    let mut hits = vec![0u64; probe_count];
    for a in (0..size).step_by(7) {
        for (b, lp) in low_probe.iter().enumerate() {
            let Some(lp) = lp else { continue };
            if a == b || skip(a, b) {
                continue;
            }
            for (i, (u, l)) in up_probe[a].iter().zip(lp).enumerate() {
                if probe_says_below(*u, *l) {
                    hits[i] += 1;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..probe_count).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(hits[i]));

    // Stage one: first firing probe per pair, or none.
    let assigned: Vec<Vec<(usize, Option<u16>)>> = (0..size)
        .into_par_iter()
        .map(|a| {
            let mut row = Vec::new();
            for (b, lp) in low_probe.iter().enumerate() {
                let Some(lp) = lp else { continue };
                if a == b || skip(a, b) {
                    continue;
                }
                let up = &up_probe[a];
                let fired = order.iter().find(|&&i| probe_says_below(up[i], lp[i]));
                row.push((b, fired.map(|&i| i as u16)));
            }
            row
        })
        .collect();

    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); probe_count];
    let mut survivors: Vec<Vec<usize>> = vec![Vec::new(); size];
    for (a, row) in assigned.into_iter().enumerate() {
        for (b, fired) in row {
            match fired {
                Some(i) => groups[i as usize].push((a, b)),
                None => survivors[a].push(b),
            }
        }
    }

    // Exact confirmation, one probe at a time.
    let mut counts = ScanCounts::default();
    let confirmations: Vec<Vec<(usize, usize, bool)>> = groups
        .par_iter()
        .enumerate()
        .filter(|(_, g)| !g.is_empty())
        .map(|(i, g)| {
            let (k, bits) = probe_points()[i];
            let x = BigUint::from(k);
            let mut up_cache: std::collections::HashMap<usize, BigUint> = Default::default();
            let mut low_cache: std::collections::HashMap<usize, BigUint> = Default::default();
            g.iter()
                .map(|&(a, b)| {
                    let u = up_cache
                        .entry(a)
                        .or_insert_with(|| eval_z_dyadic(&uppers[a], &x, bits));
                    let l = low_cache
                        .entry(b)
                        .or_insert_with(|| eval_z_dyadic(lowers[b].as_ref().unwrap(), &x, bits));
                    (a, b, *u < *l)
                })
                .collect()
        })
        .collect();
    for (a, b, confirmed) in confirmations.into_iter().flatten() {
        if confirmed {
            counts.rejected_at_probe += 1;
        } else {
            survivors[a].push(b);
        }
    }
    for row in survivors.iter_mut() {
        row.sort_unstable();
    }

    // Stage two over resident lower forms and a trie walk of the uppers.
    let mut holds = BitMatrix::new(size);
    let needed: Vec<bool> = {
        let mut v = vec![false; lowers.len()];
        for row in &survivors {
            for &b in row {
                v[b] = true;
            }
        }
        v
    };
    let low_forms: Vec<Option<std::sync::Arc<PackedBernstein>>> = lowers
        .par_iter()
        .zip(&needed)
        .map(|(l, &need)| if need { l.as_ref().map(z_bernstein) } else { None })
        .collect();

    let split = n.min(4);
    let mut complete = true;
    let slow_used = std::sync::atomic::AtomicU64::new(0);
    let stop = std::sync::atomic::AtomicBool::new(false);
    let parts: Vec<(Vec<(usize, usize)>, ScanCounts)> = (0..1u64 << split)
        .into_par_iter()
        .map(|top| {
            let mut found = Vec::new();
            let mut local = ScanCounts::default();
            let head = prefix.concat(&Path::from_code(top, split));
            for_each_z_bernstein(&head, n - split, |low, form| {
                if stop.load(std::sync::atomic::Ordering::Relaxed) {
                    return;
                }
                let a = ((top << (n - split)) | low) as usize;
                for &b in &survivors[a] {
                    let bl = low_forms[b].as_ref().unwrap();
                    if form.dominates(bl) {
                        local.certified_by_slots += 1;
                        found.push((a, b));
                        continue;
                    }
                    let used = slow_used.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
                    let over_count = budget.max_slow_pairs.is_some_and(|cap| used > cap);
                    let over_time = budget.deadline.is_some_and(|d| Instant::now() > d);
                    if over_count || over_time {
                        stop.store(true, std::sync::atomic::Ordering::Relaxed);
                        return;
                    }
                    let lower = lowers[b].as_ref().unwrap();
                    if certify_difference(&uppers[a], lower, &form, bl).is_nonneg() {
                        local.certified_by_subdivision += 1;
                        found.push((a, b));
                    } else {
                        local.rejected_by_subdivision += 1;
                    }
                }
            });
            (found, local)
        })
        .collect();
    if stop.load(std::sync::atomic::Ordering::Relaxed) {
        complete = false;
    }
    for (found, local) in parts {
        for (a, b) in found {
            holds.set(a, b);
        }
        counts.certified_by_slots += local.certified_by_slots;
        counts.certified_by_subdivision += local.certified_by_subdivision;
        counts.rejected_by_subdivision += local.rejected_by_subdivision;
    }
    ScanOutcome {
        holds,
        counts,
        complete,
    }
}

/// Pairs `(a, b)` of length `n` with `Z_{1a} >= Z_{b1}`: `a ≼_Z b` is then
/// certified, `a` being the worse path.
pub fn z_criterion_scan(n: usize, budget: ScanBudget) -> ScanOutcome {
    let lowers: Vec<Option<Path>> = (0..1u64 << n)
        .map(|b| Some(Path::from_code(b, n).with_suffix(1)))
        .collect();
    dominance_scan(&Path::from_code(1, 1), n, &lowers, &|_, _| false, budget)
}

/// Pairs certified `≼_P` by either the Z-domain or the T-domain criterion.
/// Returns the two scans in that order.
pub fn p_criterion_scans(n: usize, budget: ScanBudget) -> (ScanOutcome, ScanOutcome) {
    let z_lowers: Vec<Option<Path>> = (0..1u64 << n)
        .map(|b| Some(Path::from_code(b, n).with_suffix(0)))
        .collect();
    let zdom = dominance_scan(&Path::from_code(1, 1), n, &z_lowers, &|_, _| false, budget);
    let t_lowers: Vec<Option<Path>> = (0..1u64 << n)
        .map(|b| {
            let better = Path::from_code(b, n);
            let q = better.leading(0);
            (q < n).then(|| Path::zeros(q + 1).concat(&better.slice(q + 1, n)))
        })
        .collect();
    let tdom = dominance_scan(&Path::empty(), n, &t_lowers, &|_, _| false, budget);
    (zdom, tdom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{prove_p, prove_z};

    #[test]
    fn z_scan_matches_single_pair_prover() {
        for n in 1..=5 {
            let out = z_criterion_scan(n, ScanBudget::default());
            assert!(out.complete);
            for a in Path::all(n) {
                for b in Path::all(n) {
                    if a == b {
                        continue;
                    }
                    let want = prove_z(&a, &b).unwrap().proven;
                    assert_eq!(out.holds.get(a.code() as usize, b.code() as usize), want, "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn p_scans_match_single_pair_prover() {
        for n in 1..=4 {
            let (zd, td) = p_criterion_scans(n, ScanBudget::default());
            for a in Path::all(n) {
                for b in Path::all(n) {
                    if a == b {
                        continue;
                    }
                    let (i, j) = (a.code() as usize, b.code() as usize);
                    let want = prove_p(&a, &b).unwrap().proven;
                    assert_eq!(zd.holds.get(i, j) || td.holds.get(i, j), want, "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn exhausted_budget_marks_incomplete() {
        let budget = ScanBudget {
            deadline: Some(Instant::now()),
            max_slow_pairs: Some(0),
        };
        let full = z_criterion_scan(5, ScanBudget::default());
        let out = z_criterion_scan(5, budget);
        let slow = full.counts.certified_by_subdivision + full.counts.rejected_by_subdivision;
        assert_eq!(out.complete, slow == 0);
        assert!(out.holds.is_subset_of(&full.holds));
    }
}
