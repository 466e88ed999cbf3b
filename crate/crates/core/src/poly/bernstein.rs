//! Scaled Bernstein form on [0,1].
//!
//! A degree-`d` polynomial is stored as integers `c_k` with
//! `p(x) = s * sum_k c_k x^k (1-x)^(d-k)` for some positive scale `s`, so
//! `c_k = C(d,k) b_k` where `b_k` are the usual Bernstein coefficients.
//! Products of two such forms are plain convolutions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{taylor_shift_in_place, IntPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledBernstein {
    coeffs: Vec<BigInt>,
}

impl ScaledBernstein {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "Bernstein form needs at least one coefficient");
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn all_nonneg(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Sign of the value at 0 (resp. 1) equals the sign of the first
    /// (resp. last) coefficient.
    pub fn endpoint_signs(&self) -> (i32, i32) {
        (
            super::sign_of(&self.coeffs[0]),
            super::sign_of(self.coeffs.last().unwrap()),
        )
    }

    /// Divides out the (positive) gcd of all coefficients.
    pub fn reduce(&mut self) {
        let g = self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if !g.is_zero() && !g.is_one() {
            for c in self.coeffs.iter_mut() {
                *c /= &g;
            }
        }
    }

    /// Normalized Bernstein coefficients as floats, scaled so the largest
    /// magnitude is at most 1. Only the sign pattern and relative size are
    /// meaningful.
    pub fn normalized_f64(&self) -> Vec<f64> {
        let d = self.degree();
        let mut binom = BigInt::one();
        let mut ratios: Vec<(f64, i64)> = Vec::with_capacity(d + 1);
        for (k, c) in self.coeffs.iter().enumerate() {
            ratios.push(ratio_parts(c, &binom));
            binom = binom * BigInt::from(d - k) / BigInt::from(k + 1);
        }
        let emax = ratios
            .iter()
            .filter(|(m, _)| *m != 0.0)
            .map(|&(_, e)| e)
            .max()
            .unwrap_or(0);
        ratios
            .into_iter()
            .map(|(m, e)| if m == 0.0 { 0.0 } else { m * 2f64.powi((e - emax).max(-1100) as i32) })
            .collect()
    }

    /// Float evaluation by de Casteljau on the normalized coefficients.
    pub fn eval_f64(&self, x: f64) -> f64 {
        de_casteljau(&self.normalized_f64(), x)
    }
}

pub(crate) fn de_casteljau(b: &[f64], x: f64) -> f64 {
    let mut w = b.to_vec();
    let n = w.len();
    for r in 1..n {
        for k in 0..n - r {
            w[k] = w[k] * (1.0 - x) + w[k + 1] * x;
        }
    }
    w.first().copied().unwrap_or(0.0)
}

/// `num / den` as `m * 2^e` with `0.5 <= |m| < 1` (or `m = 0`).
fn ratio_parts(num: &BigInt, den: &BigInt) -> (f64, i64) {
    if num.is_zero() {
        return (0.0, 0);
    }
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // Bring both to about 60 significant bits.
    let shift_n = (nb - 60).max(0);
    let shift_d = (db - 60).max(0);
    let n = (num >> shift_n as usize).to_f64().unwrap();
    let d = (den >> shift_d as usize).to_f64().unwrap();
    let q = n / d;
    let (m, e) = frexp(q);
    (m, e + shift_n - shift_d)
}

fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let e = x.abs().log2().floor() as i64 + 1;
    let m = x / 2f64.powi(e as i32);
    // Guard against log2 rounding at exact powers of two.
    if m.abs() >= 1.0 {
        (m / 2.0, e + 1)
    } else if m.abs() < 0.5 {
        (m * 2.0, e - 1)
    } else {
        (m, e)
    }
}

/// Scaled Bernstein coefficients of `p` at degree `d >= deg p`.
pub fn monomial_to_bernstein(p: &IntPoly, d: usize) -> ScaledBernstein {
    let deg = p.degree().unwrap_or(0);
    assert!(d >= deg, "target degree below polynomial degree");
    // Reverse, shift by one, reverse: the coefficients of
    // sum_i a_i y^i (1+y)^(d-i).
    let mut c: Vec<BigInt> = (0..=d)
        .map(|i| p.coeffs().get(d - i).cloned().unwrap_or_default())
        .collect();
    taylor_shift_in_place(&mut c);
    c.reverse();
    ScaledBernstein { coeffs: c }
}

/// Splits at x = 1/2. Both halves are scaled Bernstein forms of the
/// reparametrized pieces on [0,1], reduced by their content.
pub fn subdivide(b: &ScaledBernstein) -> (ScaledBernstein, ScaledBernstein) {
    let left = left_half(&b.coeffs);
    let mut rev = b.coeffs.clone();
    rev.reverse();
    let mut right = left_half(&rev);
    right.reverse();
    let mut l = ScaledBernstein { coeffs: left };
    let mut r = ScaledBernstein { coeffs: right };
    l.reduce();
    r.reduce();
    (l, r)
}

fn left_half(c: &[BigInt]) -> Vec<BigInt> {
    // On x = u/2 the form becomes, up to a positive factor,
    // sum_m 2^(d-m) e_m u^m (1-u)^(d-m) where e = coeffs of
    // sum_k c_k w^k (1+w)^(d-k).
    let d = c.len() - 1;
    let mut e: Vec<BigInt> = c.iter().rev().cloned().collect();
    taylor_shift_in_place(&mut e);
    e.reverse();
    e.into_iter().enumerate().map(|(m, v)| v << (d - m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn eval_form(b: &ScaledBernstein, x: &BigRational) -> BigRational {
        let d = b.degree();
        let one = BigRational::one();
        b.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let mut t = BigRational::from_integer(c.clone());
                for _ in 0..k {
                    t *= x;
                }
                for _ in k..d {
                    t *= &one - x;
                }
                t
            })
            .fold(BigRational::zero(), |a, t| a + t)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn conversion_matches_values() {
        let p = IntPoly::from_i64(&[3, -7, 0, 5, -2]);
        for d in [4, 6] {
            let b = monomial_to_bernstein(&p, d);
            for x in [q(0, 1), q(1, 3), q(1, 2), q(5, 7), q(1, 1)] {
                assert_eq!(eval_form(&b, &x), p.eval(&x));
            }
        }
    }

    #[test]
    fn squared_distance_form_is_nonneg() {
        // 2x^2 (x-1)^2 = 2x^2 - 4x^3 + 2x^4
        let p = IntPoly::from_i64(&[0, 0, 2, -4, 2]);
        let b = monomial_to_bernstein(&p, 4);
        assert_eq!(b.coeffs(), &[0, 0, 2, 0, 0].map(BigInt::from));
    }

    #[test]
    fn subdivision_halves_agree_up_to_scale() {
        let p = IntPoly::from_i64(&[1, -9, 20, -13]);
        let b = monomial_to_bernstein(&p, 3);
        let (l, r) = subdivide(&b);
        let probes = [q(0, 1), q(1, 4), q(2, 3), q(1, 1)];
        // Ratios of values must be a single positive constant per half.
        let ratio = |half: &ScaledBernstein, map: &dyn Fn(&BigRational) -> BigRational| {
            let mut k: Option<BigRational> = None;
            for u in &probes {
                let v = p.eval(&map(u));
                let w = eval_form(half, u);
                if v.is_zero() {
                    assert!(w.is_zero());
                    continue;
                }
                let t = w / v;
                assert!(t.is_positive());
                if let Some(k0) = &k {
                    assert_eq!(&t, k0);
                }
                k = Some(t);
            }
        };
        let half = q(1, 2);
        ratio(&l, &|u: &BigRational| u * &half);
        ratio(&r, &|u: &BigRational| (u + BigRational::one()) * &half);
    }

    #[test]
    fn float_eval_tracks_sign() {
        let p = IntPoly::from_i64(&[-1, 2]);
        let b = monomial_to_bernstein(&p, 1);
        assert!(b.eval_f64(0.25) < 0.0);
        assert!(b.eval_f64(0.75) > 0.0);
    }
}
