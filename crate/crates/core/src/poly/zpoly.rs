//! Bhattacharyya polynomials `Z_alpha` of the binary erasure channel and
//! fast exact comparison between them.
//!
//! Every `Z_alpha` has scaled Bernstein coefficients `0 <= c_k <= C(d,k)`,
//! built by repeated squaring: `Z_1(p) = p^2` is a self-convolution and
//! `Z_0(p) = 1 - (1-p)^2` is the same after complementing `c_k` against the
//! binomial row. Squarings are done with Kronecker substitution on
//! limb-aligned slots, so comparing two forms slot by slot is a plain limb
//! comparison.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::bernstein::ScaledBernstein;
use super::nonneg::{chebyshev_dyadics, dyadic, nonneg_scaled, Certificate, Nonneg};
use super::{IntPoly, RatPoly};
use crate::path::Path;

/// Exact `Z_alpha` in monomial form.
pub fn z_poly(alpha: &Path) -> RatPoly {
    RatPoly::from(&z_int_poly(alpha))
}

pub(crate) fn z_int_poly(alpha: &Path) -> IntPoly {
    let mut p = IntPoly::from_i64(&[0, 1]);
    for &b in alpha.bits() {
        let sq = square_int(&p);
        p = if b == 1 {
            sq
        } else {
            // 2p - p^2
            IntPoly::new(
                p.coeffs()
                    .iter()
                    .map(|c| c * 2)
                    .chain(std::iter::repeat(BigInt::zero()))
                    .zip(sq.coeffs())
                    .map(|(a, s)| a - s)
                    .collect(),
            )
        };
    }
    p
}

fn square_int(p: &IntPoly) -> IntPoly {
    let c = p.coeffs();
    if c.is_empty() {
        return IntPoly::default();
    }
    let mut out = vec![BigInt::zero(); 2 * c.len() - 1];
    for i in 0..c.len() {
        if c[i].is_zero() {
            continue;
        }
        out[2 * i] += &c[i] * &c[i];
        let twice = &c[i] * 2;
        for j in i + 1..c.len() {
            out[i + j] += &twice * &c[j];
        }
    }
    IntPoly::new(out)
}

/// Exact value at a rational point by iterating the one-step maps.
pub fn eval_z_rational(alpha: &Path, x: &BigRational) -> BigRational {
    let two = BigRational::from_integer(2.into());
    let mut z = x.clone();
    for &b in alpha.bits() {
        z = if b == 1 { &z * &z } else { &z * (&two - &z) };
    }
    z
}

/// `Z_alpha(x)` in floating point, tracking the complement so values near 1
/// keep their relative accuracy.
pub fn eval_z_f64(alpha: &Path, x: f64) -> f64 {
    let (mut z, mut c) = (x, 1.0 - x);
    for &b in alpha.bits() {
        if b == 1 {
            (z, c) = (z * z, c * (1.0 + z));
        } else {
            (z, c) = (z * (1.0 + c), c * c);
        }
    }
    z
}

/// `(ln z, ln(1 - z))` after applying `bits` to a point given by the logs of
/// `x` and `1 - x`. Works without underflow across the whole unit interval.
pub fn log_z(bits: &[u8], ln_x: f64, ln_1mx: f64) -> (f64, f64) {
    let (mut lz, mut lc) = (ln_x, ln_1mx);
    for &b in bits {
        if b == 1 {
            lc += lz.exp().ln_1p();
            lz *= 2.0;
        } else {
            lz += lc.exp().ln_1p();
            lc *= 2.0;
        }
    }
    (lz, lc)
}

/// Numerator of `Z_alpha(num / 2^bits)` over the denominator
/// `2^(bits * 2^len)`. Paths of equal length share the denominator.
pub fn eval_z_dyadic(alpha: &Path, num: &BigUint, bits: u32) -> BigUint {
    let mut e = bits as usize;
    let mut z = num.clone();
    let mut c = (BigUint::one() << e) - &z;
    for &b in alpha.bits() {
        e *= 2;
        let full = BigUint::one() << e;
        if b == 1 {
            z = &z * &z;
            c = &full - &z;
        } else {
            c = &c * &c;
            z = &full - &c;
        }
    }
    z
}

/// Dyadic probe points in (0,1): Chebyshev-spaced points, a uniform grid
/// and geometric sequences toward both endpoints, where high-degree `Z`
/// polynomials are flat.
pub fn probe_points() -> &'static [(u64, u32)] {
    static PROBES: OnceLock<Vec<(u64, u32)>> = OnceLock::new();
    PROBES.get_or_init(|| {
        let mut pts: Vec<(u64, u32)> = chebyshev_dyadics(super::nonneg::FILTER_POINTS)
            .into_iter()
            .filter(|&(k, b)| k > 0 && k < (1 << b))
            .collect();
        pts.extend((1..1024u64).map(|k| (k, 10)));
        for k in 11..=63u32 {
            pts.push((1, k));
            pts.push(((1u64 << k) - 1, k));
        }
        pts
    })
}

/// Log-domain values of `Z_alpha` at every probe point.
pub fn probe_values(alpha: &Path) -> Vec<(f64, f64)> {
    probe_points()
        .iter()
        .map(|&(k, b)| {
            let scale = b as f64 * std::f64::consts::LN_2;
            let lx = (k as f64).ln() - scale;
            let lc = (((1u64 << b) - k) as f64).ln() - scale;
            log_z(alpha.bits(), lx, lc)
        })
        .collect()
}

/// Relative tolerance on log values before a float probe counts as a
/// candidate witness.
pub const PROBE_TOLERANCE: f64 = 1e-9;

/// Whether `upper < lower` looks likely at a probe, from log values.
pub fn probe_says_below(upper: (f64, f64), lower: (f64, f64)) -> bool {
    // Compare in the domain where the values are small.
    if lower.0 <= -std::f64::consts::LN_2 {
        upper.0 < lower.0 - PROBE_TOLERANCE * lower.0.abs().max(1.0)
    } else {
        upper.1 > lower.1 + PROBE_TOLERANCE * lower.1.abs().max(1.0)
    }
}

/// Probe indices ordered from most to least suspicious for the pair.
pub fn suspicious_probes(upper: &[(f64, f64)], lower: &[(f64, f64)]) -> Vec<usize> {
    let mut hits: Vec<(f64, usize)> = upper
        .iter()
        .zip(lower)
        .enumerate()
        .filter(|(_, (u, l))| probe_says_below(**u, **l))
        .map(|(i, (u, l))| {
            let gap = if l.0 <= -std::f64::consts::LN_2 { u.0 - l.0 } else { l.1 - u.1 };
            (gap, i)
        })
        .collect();
    hits.sort_by(|a, b| a.0.total_cmp(&b.0));
    hits.into_iter().map(|(_, i)| i).collect()
}

/// Exact check that `Z_upper < Z_lower` at a probe point.
pub fn confirm_below(upper: &Path, lower: &Path, probe: usize) -> Option<BigRational> {
    let (k, b) = probe_points()[probe];
    let x = BigUint::from(k);
    if eval_z_dyadic(upper, &x, b) < eval_z_dyadic(lower, &x, b) {
        Some(dyadic(k, b))
    } else {
        None
    }
}

/// Scaled Bernstein coefficients packed into limb-aligned slots of equal
/// width, little-endian within each slot.
#[derive(Clone, PartialEq, Eq)]
pub struct PackedBernstein {
    degree: usize,
    width: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for PackedBernstein {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PackedBernstein(degree {}, {} limbs/slot)", self.degree, self.width)
    }
}

fn slot_width(degree: usize) -> usize {
    // Coefficients are below 2^degree.
    degree / 64 + 1
}

fn binomial_row(d: usize) -> Arc<Vec<Vec<u64>>> {
    static ROWS: OnceLock<Mutex<HashMap<usize, Arc<Vec<Vec<u64>>>>>> = OnceLock::new();
    let rows = ROWS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = rows.lock().unwrap().get(&d) {
        return r.clone();
    }
    let mut row = Vec::with_capacity(d + 1);
    let mut c = BigUint::one();
    for k in 0..=d {
        row.push(c.to_u64_digits());
        c = c * BigUint::from(d - k) / BigUint::from(k + 1);
    }
    let row = Arc::new(row);
    rows.lock().unwrap().insert(d, row.clone());
    row
}

impl PackedBernstein {
    /// The identity map `x`.
    pub fn identity() -> Self {
        Self {
            degree: 1,
            width: 1,
            data: vec![0, 1],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn slot(&self, k: usize) -> &[u64] {
        &self.data[k * self.width..(k + 1) * self.width]
    }

    pub fn coeff(&self, k: usize) -> BigUint {
        let s = self.slot(k);
        let mut words = Vec::with_capacity(2 * s.len());
        for &w in s {
            words.push(w as u32);
            words.push((w >> 32) as u32);
        }
        BigUint::new(words)
    }

    pub fn coeffs(&self) -> Vec<BigUint> {
        (0..=self.degree).map(|k| self.coeff(k)).collect()
    }

    /// `c_k <- C(d,k) - c_k`, the form of `1 - p`.
    pub fn complement(&mut self) {
        let row = binomial_row(self.degree);
        let w = self.width;
        for (k, binom) in row.iter().enumerate() {
            let slot = &mut self.data[k * w..(k + 1) * w];
            let mut borrow = false;
            for (i, limb) in slot.iter_mut().enumerate() {
                let b = binom.get(i).copied().unwrap_or(0);
                let (r, b1) = b.overflowing_sub(*limb);
                let (r, b2) = r.overflowing_sub(borrow as u64);
                *limb = r;
                borrow = b1 || b2;
            }
            debug_assert!(!borrow, "coefficient exceeds binomial bound");
        }
    }

    /// The form of `p^2`, by one big-integer squaring.
    pub fn square(&self) -> Self {
        let d2 = 2 * self.degree;
        let w2 = slot_width(d2);
        let mut words: Vec<u32> = vec![0; (self.degree + 1) * w2 * 2];
        for k in 0..=self.degree {
            for (i, &limb) in self.slot(k).iter().enumerate() {
                let at = 2 * (k * w2 + i);
                words[at] = limb as u32;
                words[at + 1] = (limb >> 32) as u32;
            }
        }
        let x = BigUint::new(words);
        let sq = &x * &x;
        let mut data = sq.to_u64_digits();
        data.resize((d2 + 1) * w2, 0);
        Self {
            degree: d2,
            width: w2,
            data,
        }
    }

    /// `c_k(self) >= c_k(other)` for every k; both forms must have equal degree.
    pub fn dominates(&self, other: &Self) -> bool {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        assert_eq!(self.width, other.width, "slot width mismatch");
        (0..=self.degree).all(|k| {
            let (a, b) = (self.slot(k), other.slot(k));
            for i in (0..self.width).rev() {
                if a[i] != b[i] {
                    return a[i] > b[i];
                }
            }
            true
        })
    }

    /// Scaled Bernstein form of `self - other`.
    pub fn difference(&self, other: &Self) -> ScaledBernstein {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        ScaledBernstein::new(
            (0..=self.degree)
                .map(|k| BigInt::from(self.coeff(k)) - BigInt::from(other.coeff(k)))
                .collect(),
        )
    }

    /// Applies the path bits in order, starting from `self`.
    pub fn extend(&self, bits: &[u8]) -> Self {
        let mut cur = self.clone();
        let mut flipped = false;
        for &b in bits {
            cur = step(&cur, &mut flipped, b);
        }
        if flipped {
            cur.complement();
        }
        cur
    }
}

/// One composition step on a form that may be stored complemented.
/// Consecutive `Z_0` steps then need only one complement each.
fn step(cur: &PackedBernstein, flipped: &mut bool, bit: u8) -> PackedBernstein {
    if bit == 1 {
        if *flipped {
            let mut c = cur.clone();
            c.complement();
            *flipped = false;
            c.square()
        } else {
            cur.square()
        }
    } else {
        let sq = if *flipped {
            cur.square()
        } else {
            let mut c = cur.clone();
            c.complement();
            c.square()
        };
        *flipped = true;
        sq
    }
}

/// Visits the forms of `prefix + s` for every suffix `s` of length
/// `suffix_len`, in increasing order of the suffix code, sharing work along
/// common prefixes.
pub fn for_each_z_bernstein(
    prefix: &Path,
    suffix_len: usize,
    mut visit: impl FnMut(u64, PackedBernstein),
) {
    let mut flipped = false;
    let mut root = PackedBernstein::identity();
    for &b in prefix.bits() {
        root = step(&root, &mut flipped, b);
    }
    fn walk(
        node: &PackedBernstein,
        flipped: bool,
        depth: usize,
        code: u64,
        visit: &mut dyn FnMut(u64, PackedBernstein),
    ) {
        if depth == 0 {
            let mut leaf = node.clone();
            if flipped {
                leaf.complement();
            }
            visit(code, leaf);
            return;
        }
        for bit in [0u8, 1] {
            let mut f = flipped;
            let child = step(node, &mut f, bit);
            walk(&child, f, depth - 1, (code << 1) | bit as u64, visit);
        }
    }
    walk(&root, flipped, suffix_len, 0, &mut visit);
}

const CACHE_MAX_LEN: usize = 9;

/// Packed Bernstein form of `Z_alpha`; short paths are memoized.
pub fn z_bernstein(alpha: &Path) -> Arc<PackedBernstein> {
    static CACHE: OnceLock<Mutex<HashMap<Path, Arc<PackedBernstein>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if alpha.len() <= CACHE_MAX_LEN {
        if let Some(hit) = cache.lock().unwrap().get(alpha) {
            return hit.clone();
        }
    }
    let form = Arc::new(PackedBernstein::identity().extend(alpha.bits()));
    if alpha.len() <= CACHE_MAX_LEN {
        cache.lock().unwrap().insert(alpha.clone(), form.clone());
    }
    form
}

/// Decides `Z_upper(x) >= Z_lower(x)` on [0,1] for equal-length paths.
pub fn z_compare(upper: &Path, lower: &Path) -> Nonneg {
    assert_eq!(upper.len(), lower.len(), "paths must have equal length");
    if upper == lower {
        return Nonneg::Nonneg(Certificate::Zero);
    }
    let pu = probe_values(upper);
    let pl = probe_values(lower);
    for i in suspicious_probes(&pu, &pl).into_iter().take(8) {
        if let Some(w) = confirm_below(upper, lower, i) {
            return Nonneg::Negative(w);
        }
    }
    let (bu, bl) = (z_bernstein(upper), z_bernstein(lower));
    if bu.dominates(&bl) {
        return Nonneg::Nonneg(Certificate::Bernstein { depth: 0 });
    }
    certify_difference(upper, lower, &bu, &bl)
}

/// Exact fallback once slot-wise domination fails.
pub fn certify_difference(
    upper: &Path,
    lower: &Path,
    bu: &PackedBernstein,
    bl: &PackedBernstein,
) -> Nonneg {
    let diff = bu.difference(bl);
    nonneg_scaled(diff, &|| z_int_poly(upper).sub(&z_int_poly(lower)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{monomial_to_bernstein, nonneg_on_unit};

    fn p(s: &str) -> Path {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn z_poly_examples() {
        assert_eq!(z_poly(&p("01")), RatPoly::from_ints(&[0, 0, 4, -4, 1]));
        assert_eq!(z_poly(&Path::empty()), RatPoly::x());
        assert_eq!(z_poly(&p("10")).eval(&q(1, 2)), q(7, 16));
        assert_eq!(z_poly(&p("01")).eval(&q(1, 2)), q(9, 16));
    }

    #[test]
    fn closed_form_for_staircase() {
        // Z_{0^q 1^p} = (1 - (1-x)^(2^q))^(2^p)
        for (zeros, ones) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1)] {
            let path = Path::run(0, zeros).concat(&Path::run(1, ones));
            let inner = &RatPoly::one() - &pow(&RatPoly::from_ints(&[1, -1]), 1 << zeros);
            assert_eq!(z_poly(&path), pow(&inner, 1 << ones));
        }
    }

    fn pow(b: &RatPoly, e: usize) -> RatPoly {
        (0..e).fold(RatPoly::one(), |acc, _| &acc * b)
    }

    #[test]
    fn packed_matches_monomial() {
        for code in 0..32u64 {
            let path = Path::from_code(code, 5);
            let packed = z_bernstein(&path);
            let mono = monomial_to_bernstein(&z_int_poly(&path), 32);
            let want: Vec<BigUint> = mono.coeffs().iter().map(|c| c.to_biguint().unwrap()).collect();
            assert_eq!(packed.coeffs(), want, "{path}");
        }
    }

    #[test]
    fn trie_walk_matches_direct() {
        let prefix = p("1");
        let mut seen = 0;
        for_each_z_bernstein(&prefix, 4, |code, form| {
            let path = prefix.concat(&Path::from_code(code, 4));
            assert_eq!(form, *z_bernstein(&path));
            seen += 1;
        });
        assert_eq!(seen, 16);
    }

    #[test]
    fn evaluators_agree() {
        for code in 0..64u64 {
            let path = Path::from_code(code, 6);
            let zp = z_poly(&path);
            for (k, b) in [(1u64, 3u32), (5, 4), (300, 10)] {
                let x = dyadic(k, b);
                let exact = zp.eval(&x);
                assert_eq!(eval_z_rational(&path, &x), exact);
                let num = eval_z_dyadic(&path, &BigUint::from(k), b);
                let den = BigUint::one() << (b as usize * 64);
                assert_eq!(
                    BigRational::new(BigInt::from(num), BigInt::from(den)),
                    exact
                );
                let xf = k as f64 / (1u64 << b) as f64;
                let f = eval_z_f64(&path, xf);
                let (lz, _) = log_z(path.bits(), xf.ln(), (1.0 - xf).ln());
                assert!((f - lz.exp()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn compare_agrees_with_generic_decision() {
        for a in 0..16u64 {
            for b in 0..16u64 {
                let (pa, pb) = (Path::from_code(a, 4), Path::from_code(b, 4));
                let fast = z_compare(&pa, &pb);
                let slow = nonneg_on_unit(&(&z_poly(&pa) - &z_poly(&pb)));
                assert_eq!(fast.is_nonneg(), slow.is_nonneg(), "{pa} vs {pb}");
                if let Nonneg::Negative(w) = fast {
                    assert!(eval_z_rational(&pa, &w) < eval_z_rational(&pb, &w));
                }
            }
        }
    }
}
