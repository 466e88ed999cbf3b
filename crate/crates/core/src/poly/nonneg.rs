//! Exact decision of `p(x) >= 0` for all `x` in [0,1].
//!
//! A cheap float pass looks for a negative sample at dyadic points; any hit
//! is confirmed exactly. Otherwise the scaled Bernstein form is subdivided
//! until every piece has nonnegative coefficients, a piece has a negative
//! endpoint, or the depth cap is hit, where Sturm sequences take over.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::bernstein::{de_casteljau, monomial_to_bernstein, subdivide, ScaledBernstein};
use super::sturm::{isolate_roots, square_free, SturmChain};
use super::{IntPoly, RatPoly};

pub const FILTER_POINTS: usize = 257;
pub const FILTER_THRESHOLD: f64 = -1e-9;
pub const MAX_DEPTH: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Zero,
    /// All Bernstein coefficients nonnegative after subdividing to `depth`.
    Bernstein { depth: u32 },
    Sturm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nonneg {
    Nonneg(Certificate),
    /// A point of [0,1] where the value is strictly negative.
    Negative(BigRational),
}

impl Nonneg {
    pub fn is_nonneg(&self) -> bool {
        matches!(self, Nonneg::Nonneg(_))
    }

    pub fn witness(&self) -> Option<&BigRational> {
        match self {
            Nonneg::Negative(w) => Some(w),
            Nonneg::Nonneg(_) => None,
        }
    }
}

/// Chebyshev-spaced filter points on [0,1], rounded to multiples of 2^-16.
pub fn chebyshev_dyadics(count: usize) -> Vec<(u64, u32)> {
    let mut pts: Vec<u64> = (0..count)
        .map(|j| {
            let t = (1.0 - (std::f64::consts::PI * j as f64 / (count - 1) as f64).cos()) / 2.0;
            (t * 65536.0).round() as u64
        })
        .collect();
    pts.dedup();
    pts.into_iter().map(|k| (k, 16)).collect()
}

pub(crate) fn dyadic(num: u64, bits: u32) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::one() << bits as usize)
}

pub fn nonneg_on_unit(p: &RatPoly) -> Nonneg {
    if p.is_zero() {
        return Nonneg::Nonneg(Certificate::Zero);
    }
    let ip = p.to_primitive();
    let d = ip.degree().unwrap();
    let bern = monomial_to_bernstein(&ip, d);
    let b = bern.normalized_f64();
    for (k, bits) in chebyshev_dyadics(FILTER_POINTS) {
        let x = k as f64 / (1u64 << bits) as f64;
        if de_casteljau(&b, x) < FILTER_THRESHOLD {
            let w = dyadic(k, bits);
            if ip.sign_at(&w) < 0 {
                return Nonneg::Negative(w);
            }
        }
    }
    nonneg_scaled(bern, &|| ip.clone())
}

/// Exact stage on a scaled Bernstein form; `monomial` yields the same
/// polynomial (up to a positive factor) for the Sturm fallback.
pub fn nonneg_scaled(b: ScaledBernstein, monomial: &dyn Fn() -> IntPoly) -> Nonneg {
    if b.coeffs().iter().all(|c| c.is_zero()) {
        return Nonneg::Nonneg(Certificate::Zero);
    }
    let mut cert = Certificate::Bernstein { depth: 0 };
    let mut fallback: Option<IntPoly> = None;
    // Each piece covers [num / 2^depth, (num + 1) / 2^depth].
    let mut stack = vec![(b, 0u64, 0u32)];
    while let Some((piece, num, depth)) = stack.pop() {
        if piece.all_nonneg() {
            if let Certificate::Bernstein { depth: d } = &mut cert {
                *d = (*d).max(depth);
            }
            continue;
        }
        let (s0, s1) = piece.endpoint_signs();
        if s0 < 0 {
            return Nonneg::Negative(piece_point(num, depth));
        }
        if s1 < 0 {
            return Nonneg::Negative(piece_point(num + 1, depth));
        }
        if depth >= MAX_DEPTH {
            let p = fallback.get_or_insert_with(monomial);
            let lo = piece_point(num, depth);
            let hi = piece_point(num + 1, depth);
            match sturm_nonneg(p, &lo, &hi) {
                Some(w) => return Nonneg::Negative(w),
                None => {
                    cert = Certificate::Sturm;
                    continue;
                }
            }
        }
        let (l, r) = subdivide(&piece);
        stack.push((r, 2 * num + 1, depth + 1));
        stack.push((l, 2 * num, depth + 1));
    }
    Nonneg::Nonneg(cert)
}

fn piece_point(num: u64, depth: u32) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::one() << depth as usize)
}

/// Decides `p >= 0` on `[lo, hi]` given `p(lo), p(hi) >= 0`, returning a
/// negative witness if one exists. The sign of `p` is constant between
/// consecutive distinct roots, so one test point per gap suffices.
pub(crate) fn sturm_nonneg(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> Option<BigRational> {
    let s = square_free(p);
    let two = BigRational::from_integer(2.into());
    if s.degree().unwrap_or(0) == 0 {
        let mid = (lo + hi) / &two;
        return (p.sign_at(&mid) < 0).then_some(mid);
    }
    let chain = SturmChain::new(&s);
    let mut roots = isolate_roots(&s, lo, hi);
    let bisect = |iv: &mut (BigRational, BigRational)| {
        let mid = (&iv.0 + &iv.1) / &two;
        if chain.count(&iv.0, &mid) == 1 {
            iv.1 = mid;
        } else {
            iv.0 = mid;
        }
    };
    // Separate neighbours strictly and pull the first root away from lo.
    loop {
        let mut changed = false;
        if let Some(first) = roots.first_mut() {
            if &first.0 == lo {
                bisect(first);
                changed = true;
            }
        }
        for i in 1..roots.len() {
            if roots[i - 1].1 >= roots[i].0 {
                let (a, b) = roots.split_at_mut(i);
                bisect(&mut a[i - 1]);
                bisect(&mut b[0]);
                changed = true;
            }
        }
        let last_at_hi = s.sign_at(hi) == 0;
        if let Some(last) = roots.last_mut() {
            if !last_at_hi && &last.1 == hi {
                bisect(last);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut tests = Vec::new();
    match roots.first() {
        None => tests.push((lo + hi) / &two),
        Some(first) => tests.push((lo + &first.0) / &two),
    }
    for w in roots.windows(2) {
        tests.push((&w[0].1 + &w[1].0) / &two);
    }
    if let Some(last) = roots.last() {
        if s.sign_at(hi) != 0 {
            tests.push((&last.1 + hi) / &two);
        }
    }
    tests.into_iter().find(|t| p.sign_at(t) < 0)
}
