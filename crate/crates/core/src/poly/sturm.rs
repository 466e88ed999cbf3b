//! Sturm sequences and exact real-root isolation for integer polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::IntPoly;

/// `p / gcd(p, p')`, primitive with positive leading coefficient.
pub fn square_free(p: &IntPoly) -> IntPoly {
    if p.degree().unwrap_or(0) == 0 {
        return p.primitive();
    }
    let g = p.gcd(&p.derivative());
    let mut s = p.primitive().div_exact(&g).primitive();
    if s.leading().is_some_and(|c| c < &BigInt::zero()) {
        s = s.neg();
    }
    s
}

/// Sturm sequence of a square-free polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    seq: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(p: &IntPoly) -> Self {
        let mut seq = vec![p.primitive()];
        if p.degree().unwrap_or(0) == 0 {
            return Self { seq };
        }
        seq.push(p.derivative().primitive());
        loop {
            let n = seq.len();
            let r = seq[n - 2].signed_prem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.neg().primitive());
        }
        Self { seq }
    }

    fn variations_at(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last = 0;
        for q in &self.seq {
            let s = q.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct roots in the half-open interval `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }
}

/// Disjoint isolating intervals `(lo, hi]` for the distinct real roots of
/// `p` in `(a, b]`, each containing exactly one root, sorted.
pub fn isolate_roots(p: &IntPoly, a: &BigRational, b: &BigRational) -> Vec<(BigRational, BigRational)> {
    let s = square_free(p);
    if s.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let chain = SturmChain::new(&s);
    let mut out = Vec::new();
    let mut stack = vec![(a.clone(), b.clone(), chain.count(a, b))];
    let two = BigRational::from_integer(2.into());
    while let Some((lo, hi, k)) = stack.pop() {
        match k {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / &two;
                let kl = chain.count(&lo, &mid);
                stack.push((mid.clone(), hi, k - kl));
                stack.push((lo, mid, kl));
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Shrinks an isolating interval `(lo, hi]` of a square-free `s` by
/// bisection until its width is at most `width`.
pub fn refine_root(
    chain: &SturmChain,
    mut lo: BigRational,
    mut hi: BigRational,
    width: &BigRational,
) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(2.into());
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        if chain.count(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}
