//! Enclosures of `Z(W^alpha)` and `T(W^alpha) = 2 P_e(W^alpha)` valid for
//! every binary memoryless symmetric channel, and the sufficient conditions
//! for `≼_Z` and `≼_P` that follow from comparing such enclosures.
//!
//! Provers never evaluate a square root: both sides are squared or composed
//! into a dominance between two `Z` polynomials, decided exactly.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bec::bec_holds;
use crate::error::{Error, Result};
use crate::path::Path;
use crate::poly::{eval_z_rational, z_compare, z_poly, Certificate, Nonneg, RatPoly};

/// Fractional bits kept when an enclosure endpoint needs a square root.
pub const SQRT_BITS: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo.is_negative() || hi > BigRational::one() || lo > hi {
            return Err(Error::InvalidEnclosure {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: BigRational) -> Result<Self> {
        Self::new(x.clone(), x)
    }

    /// Parses `a` or `a,b` with rational or decimal endpoints.
    pub fn parse(s: &str) -> Result<Self> {
        let mut parts = s.split(',').map(parse_rational);
        let lo = parts.next().ok_or_else(|| Error::InvalidParameter("empty interval".into()))??;
        let hi = match parts.next() {
            Some(h) => h?,
            None => lo.clone(),
        };
        Self::new(lo, hi)
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_f64(&self, x: f64, slack: f64) -> bool {
        let lo = ratio_to_f64(&self.lo);
        let hi = ratio_to_f64(&self.hi);
        x >= lo - slack && x <= hi + slack
    }

    pub fn intersect(&self, other: &Interval) -> Result<Interval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        Interval::new(lo, hi)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (ratio_to_f64(&self.lo), ratio_to_f64(&self.hi))
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (lo, hi) = self.to_f64();
        write!(f, "[{lo:.12}, {hi:.12}]")
    }
}

pub(crate) fn ratio_to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Accepts `p/q`, integers and plain decimals such as `0.794`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(num, den);
    Ok(if neg { -r } else { r })
}

fn exact_sqrt(x: &BigRational) -> Option<BigRational> {
    let (n, d) = (x.numer().to_biguint()?, x.denom().to_biguint()?);
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == n && &rd * &rd == d).then(|| BigRational::new(rn.into(), rd.into()))
}

fn scaled_isqrt(x: &BigRational) -> (BigUint, bool) {
    // floor(sqrt(x) * 2^SQRT_BITS) and whether the square root was exact.
    let shifted = (x.numer().to_biguint().unwrap() << (2 * SQRT_BITS)) / x.denom().to_biguint().unwrap();
    let r = shifted.sqrt();
    (r, false)
}

/// A rational at most `sqrt(x)`, equal when `x` is a rational square.
pub fn sqrt_down(x: &BigRational) -> BigRational {
    if let Some(r) = exact_sqrt(x) {
        return r;
    }
    let (r, _) = scaled_isqrt(x);
    BigRational::new(r.into(), BigInt::one() << SQRT_BITS)
}

/// A rational at least `sqrt(x)`, equal when `x` is a rational square.
pub fn sqrt_up(x: &BigRational) -> BigRational {
    if let Some(r) = exact_sqrt(x) {
        return r;
    }
    let (r, _) = scaled_isqrt(x);
    BigRational::new((r + 1u32).into(), BigInt::one() << SQRT_BITS)
}

fn z0(x: &BigRational) -> BigRational {
    x * (BigRational::from_integer(2.into()) - x)
}

fn clamp01(x: BigRational) -> BigRational {
    if x > BigRational::one() {
        BigRational::one()
    } else if x.is_negative() {
        BigRational::zero()
    } else {
        x
    }
}

/// Enclosure of `Z(W^alpha)` given an enclosure of `Z(W)`:
/// `[sqrt(Z_alpha(lo^2)), Z_alpha(hi)]`.
pub fn z_interval(alpha: &Path, x: &Interval) -> Interval {
    let lo = sqrt_down(&eval_z_rational(alpha, &(&x.lo * &x.lo)));
    let hi = eval_z_rational(alpha, &x.hi);
    Interval { lo, hi }
}

/// Which enclosure of `T(W^alpha)` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TBound {
    /// Exact on up-steps, `[Z_1(t), Z_0(t)]` on down-steps, one step at a time.
    Stepwise,
    /// `[Z_alpha(t), Z_alpha(sqrt(Z_0(t)))]`.
    Generic,
    /// For `alpha = 0^p 1 g`: `[Z_alpha(t), Z_{0^(p+1) g}(t)]`.
    Shape,
}

pub fn t_bound(alpha: &Path, t: &Interval, which: TBound) -> Option<Interval> {
    match which {
        TBound::Stepwise => {
            let (mut lo, mut hi) = (t.lo.clone(), t.hi.clone());
            for &b in alpha.bits() {
                hi = z0(&hi);
                lo = if b == 0 { z0(&lo) } else { &lo * &lo };
            }
            Some(Interval { lo, hi })
        }
        TBound::Generic => {
            let lo = eval_z_rational(alpha, &t.lo);
            let top = clamp01(sqrt_up(&z0(&t.hi)));
            let hi = clamp01(eval_z_rational(alpha, &top));
            Some(Interval { lo, hi })
        }
        TBound::Shape => {
            let p = alpha.leading(0);
            if p == alpha.len() {
                return None;
            }
            let lo = eval_z_rational(alpha, &t.lo);
            let upper_path = Path::zeros(p + 1).concat(&alpha.slice(p + 1, alpha.len()));
            Some(Interval {
                lo,
                hi: eval_z_rational(&upper_path, &t.hi),
            })
        }
    }
}

/// Enclosure of `T(W^alpha)` from an enclosure `t` of `T(W)`, intersected
/// with the `Z`-domain bounds when an enclosure of `Z(W)` is supplied.
pub fn t_interval(alpha: &Path, t: &Interval, x_hint: Option<&Interval>) -> Result<Interval> {
    let one = BigRational::one();
    let mut t_in = t.clone();
    if let Some(x) = x_hint {
        // 1 - sqrt(1 - Z^2) <= T <= Z at the input channel.
        let lo = &one - sqrt_up(&(&one - &x.lo * &x.lo));
        t_in = t_in.intersect(&Interval::new(clamp01(lo), x.hi.clone())?)?;
    }
    let mut out = t_bound(alpha, &t_in, TBound::Stepwise).unwrap();
    for which in [TBound::Generic, TBound::Shape] {
        if let Some(b) = t_bound(alpha, &t_in, which) {
            out = out.intersect(&b)?;
        }
    }
    if let Some(x) = x_hint {
        // Z-domain: Z_0^{-1}(Z_alpha(Z_1(x))) <= T(W^alpha) <= Z_alpha(x).
        let y = eval_z_rational(alpha, &(&x.lo * &x.lo));
        let lo = &one - sqrt_up(&(&one - y));
        let zdom = Interval::new(clamp01(lo), eval_z_rational(alpha, &x.hi))?;
        out = out.intersect(&zdom)?;
        // Bridge through the enclosure of Z(W^alpha).
        let z = z_interval(alpha, x);
        let lo = &one - sqrt_up(&(&one - &z.lo * &z.lo));
        out = out.intersect(&Interval::new(clamp01(lo), z.hi)?)?;
    }
    Ok(out)
}

/// How a `≼_Z` or `≼_P` proof was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// `≼_Z` for `g 1` below `1 a` from `g ≼_BEC a`.
    Shift,
    /// `≼_Z` for `g` below `1 a` from `g ≼_BEC a 1`.
    Prepend,
    /// `≼_Z` for `g` below `a` from `1 g ≼_BEC a 1`.
    Wrap,
    /// `≼_P` from the Z-domain enclosure: `Z_{1 worse} >= Z_{better 0}`.
    ZDomain,
    /// `≼_P` from the T-domain shape bound for `better = 0^q 1 t`.
    TDomain,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Shift => "shift",
            Strategy::Prepend => "prepend",
            Strategy::Wrap => "wrap",
            Strategy::ZDomain => "z-domain",
            Strategy::TDomain => "t-domain",
        }
    }
}

/// One certified dominance `Z_upper >= Z_lower` on [0,1] that proves the
/// pair, together with the BEC premise it is equivalent to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofStep {
    pub strategy: Strategy,
    /// `premise.0 ≼_BEC premise.1`.
    pub premise: (Path, Path),
    pub upper: Path,
    pub lower: Path,
    pub certificate: Certificate,
}

impl ProofStep {
    /// Degree of the certified residual `Z_upper - Z_lower`.
    pub fn residual_degree(&self) -> usize {
        1 << self.upper.len()
    }

    pub fn residual(&self) -> RatPoly {
        &z_poly(&self.upper) - &z_poly(&self.lower)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofResult {
    pub proven: bool,
    pub steps: Vec<ProofStep>,
}

impl ProofResult {
    pub fn first(&self) -> Option<&ProofStep> {
        self.steps.first()
    }
}

fn check_lengths(a: &Path, b: &Path) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

/// Shape label and equivalent BEC premise of the `≼_Z` criterion.
pub fn z_premise(worse: &Path, better: &Path) -> (Strategy, (Path, Path)) {
    let n = worse.len();
    if n >= 1 && worse.ends_with(&[1]) && better.starts_with(&[1]) {
        (Strategy::Shift, (worse.slice(0, n - 1), better.slice(1, n)))
    } else if better.starts_with(&[1]) {
        (Strategy::Prepend, (worse.clone(), better.slice(1, n).with_suffix(1)))
    } else {
        (Strategy::Wrap, (worse.with_prefix(1), better.with_suffix(1)))
    }
}

/// Tries to certify `worse ≼_Z better`: `Z(W^worse) >= Z(W^better)` for
/// every channel. The exact check is `Z_{1 worse} >= Z_{better 1}` on [0,1].
/// `proven = false` means undecided, never disproved.
pub fn prove_z(worse: &Path, better: &Path) -> Result<ProofResult> {
    check_lengths(worse, better)?;
    let upper = worse.with_prefix(1);
    let lower = better.with_suffix(1);
    let (strategy, premise) = z_premise(worse, better);
    Ok(match z_compare(&upper, &lower) {
        Nonneg::Nonneg(certificate) => ProofResult {
            proven: true,
            steps: vec![ProofStep {
                strategy,
                premise,
                upper,
                lower,
                certificate,
            }],
        },
        Nonneg::Negative(_) => ProofResult {
            proven: false,
            steps: Vec::new(),
        },
    })
}

/// Tries to certify `worse ≼_P better`. Both strategies are attempted and
/// every successful one is kept, Z-domain first.
pub fn prove_p(worse: &Path, better: &Path) -> Result<ProofResult> {
    check_lengths(worse, better)?;
    let n = worse.len();
    let mut steps = Vec::new();

    let upper = worse.with_prefix(1);
    let lower = better.with_suffix(0);
    if let Nonneg::Nonneg(certificate) = z_compare(&upper, &lower) {
        let premise = if n >= 1 && worse.ends_with(&[0]) && better.starts_with(&[1]) {
            (worse.slice(0, n - 1), better.slice(1, n))
        } else {
            (upper.clone(), lower.clone())
        };
        steps.push(ProofStep {
            strategy: Strategy::ZDomain,
            premise,
            upper,
            lower,
            certificate,
        });
    }

    let q = better.leading(0);
    if q < n {
        let lower = Path::zeros(q + 1).concat(&better.slice(q + 1, n));
        if let Nonneg::Nonneg(certificate) = z_compare(worse, &lower) {
            steps.push(ProofStep {
                strategy: Strategy::TDomain,
                premise: (worse.clone(), lower.clone()),
                upper: worse.clone(),
                lower,
                certificate,
            });
        }
    }
    Ok(ProofResult {
        proven: !steps.is_empty(),
        steps,
    })
}

fn staircase(zeros_first: bool, a: usize, b: usize) -> Path {
    if zeros_first {
        Path::zeros(a).concat(&Path::ones(b))
    } else {
        Path::ones(a).concat(&Path::zeros(b))
    }
}

/// `0^m 1^n ≼_Z 1^p 0^q` holds when `0^m 1^(n-1) ≼_BEC 1^(p-1) 0^q`.
pub fn staircase_z_check(m: i64, n: i64, p: i64, q: i64) -> Result<bool> {
    if p < 1 || n < 1 || q < 0 || m < 0 || m + n != p + q {
        return Err(Error::InvalidParameter(format!(
            "staircase dimensions m={m} n={n} p={p} q={q}"
        )));
    }
    let (m, n, p, q) = (m as usize, n as usize, p as usize, q as usize);
    Ok(bec_holds(&staircase(true, m, n - 1), &staircase(false, p - 1, q)))
}

/// `0^m 1^n ≼_P 1^p 0^q` holds when `0^m 1^n ≼_BEC 1^(p-1) 0^(q+1)`.
pub fn staircase_p_check(m: i64, n: i64, p: i64, q: i64) -> Result<bool> {
    if p < 1 || n < 0 || q < 0 || m < 0 || m + n != p + q {
        return Err(Error::InvalidParameter(format!(
            "staircase dimensions m={m} n={n} p={p} q={q}"
        )));
    }
    let (m, n, p, q) = (m as usize, n as usize, p as usize, q as usize);
    Ok(bec_holds(&staircase(true, m, n), &staircase(false, p - 1, q + 1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Z,
    P,
}

/// How `k <= log2(n - log2 n)` is rendered in integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMode {
    /// `2^k + k <= n`, the chained form.
    #[default]
    Chain,
    /// The real-valued bound, decided exactly: `n <= 2^(n - 2^k)`.
    Real,
}

fn log_bound(k: usize, n: usize, mode: CountMode) -> bool {
    if k >= 63 {
        return false;
    }
    let pow = 1usize << k;
    match mode {
        CountMode::Chain => pow + k <= n,
        CountMode::Real => {
            let Some(e) = n.checked_sub(pow) else {
                return false;
            };
            e >= 63 || n <= 1usize << e
        }
    }
}

/// Count-based sufficient condition: certifies `gamma ≼_Z alpha`
/// (resp. `≼_P`) from the numbers of zeros and ones only.
pub fn count_check(alpha: &Path, gamma: &Path, kind: Kind, mode: CountMode) -> Result<bool> {
    check_lengths(alpha, gamma)?;
    let n = alpha.len();
    if n < 2 {
        return Err(Error::InvalidParameter("count condition needs n >= 2".into()));
    }
    let (a0, a1) = alpha.counts();
    Ok(match kind {
        Kind::Z => {
            let (t0, t1) = gamma.slice(0, n - 1).counts();
            log_bound(a0, n, mode) && t0 >= a1 && a0 >= 1 && t1 < a0
        }
        Kind::P => {
            let (g0, g1) = gamma.counts();
            log_bound(a0 + 1, n, mode) && g0 + 1 >= a1 && g1 <= a0 + 1
        }
    })
}
