//! Exact univariate polynomials and the Bhattacharyya composition maps.

mod bernstein;
mod nonneg;
mod sturm;
mod zpoly;

pub use bernstein::{monomial_to_bernstein, subdivide, ScaledBernstein};
pub use nonneg::{nonneg_on_unit, nonneg_scaled, Certificate, Nonneg};
pub use sturm::{isolate_roots, refine_root, square_free, SturmChain};
pub use zpoly::{
    certify_difference, confirm_below, eval_z_dyadic, eval_z_f64, eval_z_rational,
    for_each_z_bernstein, log_z, probe_points, probe_says_below, probe_values,
    suspicious_probes, z_bernstein, z_compare, z_poly, PackedBernstein,
};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense polynomial with rational coefficients, lowest degree first. Never
/// stores a trailing zero coefficient; the zero polynomial has no
/// coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    Compose,
}

pub fn poly_arith(a: &RatPoly, b: &RatPoly, op: PolyOp) -> RatPoly {
    match op {
        PolyOp::Add => a + b,
        PolyOp::Sub => a - b,
        PolyOp::Mul => a * b,
        PolyOp::Compose => a.compose(b),
    }
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// `self(inner(x))`, by Horner's scheme over polynomials.
    pub fn compose(&self, inner: &RatPoly) -> RatPoly {
        let mut acc = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &RatPoly::constant(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigRational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Positive multiple with integer coefficients and unit content.
    pub fn to_primitive(&self) -> IntPoly {
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        IntPoly::new(ints).primitive()
    }
}

impl From<&IntPoly> for RatPoly {
    fn from(p: &IntPoly) -> Self {
        RatPoly::new(
            p.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        RatPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        self + &(-rhs)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs.iter().map(|c| (c.is_zero(), c.is_negative(), c.abs().to_string())))
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

fn write_terms(
    f: &mut fmt::Formatter<'_>,
    terms: impl DoubleEndedIterator<Item = (bool, bool, String)> + ExactSizeIterator,
) -> fmt::Result {
    let n = terms.len();
    let mut first = true;
    for (i, (zero, neg, mag)) in terms.enumerate().collect::<Vec<_>>().into_iter().rev() {
        if zero {
            continue;
        }
        let sign = match (first, neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        f.write_str(sign)?;
        let unit = mag == "1";
        match i {
            0 => f.write_str(&mag)?,
            1 if unit => f.write_str("x")?,
            1 => write!(f, "{mag}x")?,
            _ if unit => write!(f, "x^{i}")?,
            _ => write!(f, "{mag}x^{i}")?,
        }
        first = false;
    }
    if n == 0 || first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Dense polynomial with integer coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content, keeping the sign of every coefficient.
    pub fn primitive(&self) -> IntPoly {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigInt::zero();
        IntPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) - rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn mul(&self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Sign of the value at `x`, without forming the full rational value.
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        // p(a/b) * b^d = sum c_i a^i b^(d-i), and b > 0.
        let d = match self.degree() {
            None => return 0,
            Some(d) => d,
        };
        let (a, b) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        // Horner in a with powers of b accumulated from the top.
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if k == d {
                acc = c.clone();
            } else {
                bpow *= b;
                acc = acc * a + c * &bpow;
            }
        }
        sign_of(&acc)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Pseudo-remainder of `self` by `d`, scaled so its sign matches the
    /// true remainder.
    pub fn signed_prem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        let mut steps = 0usize;
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let t = r[top].clone();
            if t.is_zero() {
                r.pop();
                continue;
            }
            for c in r.iter_mut() {
                *c *= &lc;
            }
            let shift = top - dd;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[shift + j] -= &t * dc;
            }
            r.pop();
            steps += 1;
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        let mut out = IntPoly::new(r);
        if lc.is_negative() && steps % 2 == 1 {
            out = out.neg();
        }
        out
    }

    /// Exact quotient, panicking when `d` does not divide `self`.
    pub fn div_exact(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            assert!(self.is_zero(), "inexact polynomial division");
            return IntPoly::default();
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let (qk, rem) = r[k + dd].div_rem(lc);
            assert!(rem.is_zero(), "inexact polynomial division");
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &qk * dc;
            }
            q[k] = qk;
        }
        assert!(r.iter().all(|c| c.is_zero()), "inexact polynomial division");
        IntPoly::new(q)
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.signed_prem(&b).primitive();
            a = b;
            b = r;
        }
        if a.leading().is_some_and(|c| c.is_negative()) {
            a = a.neg();
        }
        a
    }

    /// `self(x + 1)`, by repeated synthetic division (O(d^2) additions).
    pub fn taylor_shift_one(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        taylor_shift_in_place(&mut c);
        IntPoly::new(c)
    }
}

pub(crate) fn taylor_shift_in_place(c: &mut [BigInt]) {
    let n = c.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i..n - 1).rev() {
            let (lo, hi) = c.split_at_mut(j + 1);
            lo[j] += &hi[0];
        }
    }
}

pub(crate) fn sign_of(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs.iter().map(|c| (c.is_zero(), c.is_negative(), c.abs().to_string())))
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}
