//! Polar transform `x = u F^{⊗n}` in natural order and successive
//! cancellation decoding.
//!
//! Index `i` carries the path given by its bits MSB first: the top-level
//! split of the decoder is the first transform.

use crate::error::{Error, Result};

fn check_len(n: usize) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("length {n} is not a power of two")));
    }
    Ok(())
}

pub fn polar_encode(u: &[u8]) -> Result<Vec<u8>> {
    check_len(u.len())?;
    let mut x = u.to_vec();
    transform_in_place(&mut x);
    Ok(x)
}

fn transform_in_place(x: &mut [u8]) {
    let n = x.len();
    let mut half = n / 2;
    while half >= 1 {
        for block in x.chunks_mut(2 * half) {
            let (l, r) = block.split_at_mut(half);
            for (a, b) in l.iter_mut().zip(r.iter()) {
                *a ^= *b;
            }
        }
        half /= 2;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Decoder {
    /// `2 atanh(tanh(a/2) tanh(b/2))`.
    #[default]
    Exact,
    MinSum,
}

impl std::str::FromStr for Decoder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Decoder::Exact),
            "minsum" | "min-sum" => Ok(Decoder::MinSum),
            _ => Err(Error::InvalidParameter(format!("unknown decoder {s:?}"))),
        }
    }
}

/// Check-node combination of two LLRs.
#[inline]
pub fn check_node(a: f64, b: f64, decoder: Decoder) -> f64 {
    let s = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    let m = a.abs().min(b.abs());
    match decoder {
        Decoder::MinSum => s * m,
        Decoder::Exact => {
            if a.is_infinite() {
                return a.signum() * b;
            }
            if b.is_infinite() {
                return b.signum() * a;
            }
            // From magnitudes only, so that flipping an input sign flips
            // the output exactly.
            let (x, y) = (a.abs(), b.abs());
            s * (m + (-(x + y)).exp().ln_1p() - (-(x - y).abs()).exp().ln_1p())
        }
    }
}

/// Variable-node combination given the partial sum bit of the left half.
#[inline]
pub fn bit_node(a: f64, b: f64, left_bit: u8) -> f64 {
    if left_bit == 0 {
        b + a
    } else {
        b - a
    }
}

/// Hard decision: nonnegative LLRs decide 0 except an exact 0, which
/// decides 1 so that erasures count as errors under all-zero input.
#[inline]
fn decide(l: f64) -> u8 {
    (l <= 0.0) as u8
}

/// Successive cancellation. `frozen[i]` positions are decoded as 0.
pub fn sc_decode(llr: &[f64], frozen: &[bool], decoder: Decoder) -> Result<Vec<u8>> {
    check_len(llr.len())?;
    if frozen.len() != llr.len() {
        return Err(Error::LengthMismatch {
            left: llr.len(),
            right: frozen.len(),
        });
    }
    let mut u = vec![0u8; llr.len()];
    let mut x = vec![0u8; llr.len()];
    decode_rec(llr, frozen, &mut u, &mut x, &mut Scratch::new(llr.len()), 0, decoder);
    Ok(u)
}

/// `sc_decode` with caller-owned buffers, for tight loops.
pub fn sc_decode_into(llr: &[f64], frozen: &[bool], decoder: Decoder, scratch: &mut Scratch, u: &mut [u8], x: &mut [u8]) {
    decode_rec(llr, frozen, u, x, scratch, 0, decoder);
}

/// Per-depth buffers reused across calls.
pub struct Scratch {
    llr: Vec<Vec<f64>>,
}

impl Scratch {
    pub fn new(n: usize) -> Self {
        let mut llr = Vec::new();
        let mut len = n / 2;
        while len >= 1 {
            llr.push(vec![0.0; len]);
            len /= 2;
        }
        Self { llr }
    }
}

/// Decodes this block into `u` and writes its codeword bits to `x`.
fn decode_rec(llr: &[f64], frozen: &[bool], u: &mut [u8], x: &mut [u8], s: &mut Scratch, depth: usize, dec: Decoder) {
    let n = llr.len();
    if n == 1 {
        u[0] = if frozen[0] { 0 } else { decide(llr[0]) };
        x[0] = u[0];
        return;
    }
    let half = n / 2;
    let (l, r) = llr.split_at(half);
    let mut buf = std::mem::take(&mut s.llr[depth]);
    for j in 0..half {
        buf[j] = check_node(l[j], r[j], dec);
    }
    let (xa, xb) = x.split_at_mut(half);
    decode_rec(&buf[..half], &frozen[..half], &mut u[..half], xa, s, depth + 1, dec);
    for j in 0..half {
        buf[j] = bit_node(l[j], r[j], xa[j]);
    }
    decode_rec(&buf[..half], &frozen[half..], &mut u[half..], xb, s, depth + 1, dec);
    s.llr[depth] = buf;
    for j in 0..half {
        xa[j] ^= xb[j];
    }
}

/// LLR of synthetic channel `index` when every earlier bit is known to be
/// 0, the genie-aided setting for all-zero transmission.
pub fn genie_llr(llr: &[f64], path_bits: &[u8], decoder: Decoder) -> f64 {
    let mut cur = llr.to_vec();
    for &bit in path_bits {
        let half = cur.len() / 2;
        for j in 0..half {
            cur[j] = if bit == 0 {
                check_node(cur[j], cur[j + half], decoder)
            } else {
                cur[j] + cur[j + half]
            };
        }
        cur.truncate(half);
    }
    cur[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn encoding_examples() {
        assert_eq!(polar_encode(&[0, 1]).unwrap(), vec![1, 1]);
        assert_eq!(polar_encode(&[1, 0, 0, 0]).unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(polar_encode(&[0, 0, 0, 1]).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(polar_encode(&[0, 1, 0, 0]).unwrap(), vec![1, 1, 0, 0]);
        assert_eq!(polar_encode(&[0; 8]).unwrap(), vec![0; 8]);
        assert!(polar_encode(&[0; 3]).is_err());
    }

    #[test]
    fn encoding_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let u: Vec<u8> = (0..64).map(|_| rng.gen_range(0..2)).collect();
            assert_eq!(polar_encode(&polar_encode(&u).unwrap()).unwrap(), u);
        }
    }

    #[test]
    fn two_bit_decoding_matches_ml() {
        // u0 frozen: ML picks u1 maximising (1-2u1)(l0 + l1).
        let u = sc_decode(&[-1.0, 3.0], &[true, false], Decoder::Exact).unwrap();
        assert_eq!(u, vec![0, 0]);
        let u = sc_decode(&[-3.0, 1.0], &[true, false], Decoder::Exact).unwrap();
        assert_eq!(u, vec![0, 1]);
    }

    #[test]
    fn noiseless_decoding_recovers_message() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let frozen: Vec<bool> = (0..32).map(|i| i < 12).collect();
        for _ in 0..20 {
            let u: Vec<u8> = (0..32).map(|i| if frozen[i] { 0 } else { rng.gen_range(0..2) }).collect();
            let x = polar_encode(&u).unwrap();
            let llr: Vec<f64> = x.iter().map(|&b| if b == 0 { 50.0 } else { -50.0 }).collect();
            for dec in [Decoder::Exact, Decoder::MinSum] {
                assert_eq!(sc_decode(&llr, &frozen, dec).unwrap(), u);
            }
        }
    }

    #[test]
    fn check_node_handles_infinities() {
        assert_eq!(check_node(f64::INFINITY, -2.0, Decoder::Exact), -2.0);
        assert_eq!(check_node(-f64::INFINITY, -2.0, Decoder::Exact), 2.0);
        let v = check_node(1.0, 2.0, Decoder::Exact);
        let want = 2.0 * ((0.5f64).tanh() * (1.0f64).tanh()).atanh();
        assert!((v - want).abs() < 1e-12);
        for (a, b) in [(1.3, 0.7), (2.2, 2.2), (0.1, 5.0)] {
            assert_eq!(check_node(-a, b, Decoder::Exact), -check_node(a, b, Decoder::Exact));
            assert_eq!(check_node(-a, -b, Decoder::Exact), check_node(a, b, Decoder::Exact));
        }
    }

    /// Brute-force LLR of `u_i` given `y` and `u_0..u_{i-1} = 0`, with the
    /// later bits uniform.
    fn brute_llr(llr: &[f64], i: usize) -> f64 {
        let n = llr.len();
        let mut num = [0.0f64; 2];
        for tail in 0..(1usize << (n - i - 1)) {
            for b in 0..2u8 {
                let mut u = vec![0u8; n];
                u[i] = b;
                for j in 0..n - i - 1 {
                    u[i + 1 + j] = ((tail >> j) & 1) as u8;
                }
                let x = polar_encode(&u).unwrap();
                // log P(y | x) up to a constant: sum of -x_j * llr_j.
                let lp: f64 = x.iter().zip(llr).map(|(&xb, &l)| if xb == 1 { -l } else { 0.0 }).sum();
                num[b as usize] += lp.exp();
            }
        }
        (num[0] / num[1]).ln()
    }

    #[test]
    fn genie_llr_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for case in 0..200 {
            let n = 1usize << (1 + case % 3);
            let llr: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let m = n.trailing_zeros() as usize;
            for i in 0..n {
                let bits: Vec<u8> = (0..m).map(|b| ((i >> (m - 1 - b)) & 1) as u8).collect();
                let got = genie_llr(&llr, &bits, Decoder::Exact);
                let want = brute_llr(&llr, i);
                assert!((got - want).abs() < 1e-9, "n={n} i={i}: {got} vs {want}");
            }
            // SC with all earlier bits frozen decides bit i by the same LLR.
            let frozen: Vec<bool> = (0..n).map(|j| j + 1 < n).collect();
            let u = sc_decode(&llr, &frozen, Decoder::Exact).unwrap();
            assert_eq!(u[n - 1], (brute_llr(&llr, n - 1) <= 0.0) as u8);
        }
    }

    #[test]
    fn unfrozen_sc_matches_block_ml() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for case in 0..200 {
            let n = 1usize << (1 + case % 3);
            let llr: Vec<f64> = (0..n).map(|_| rng.gen_range(-4.0..4.0)).collect();
            let mut best = (f64::NEG_INFINITY, Vec::new());
            for m in 0..(1usize << n) {
                let u: Vec<u8> = (0..n).map(|j| ((m >> j) & 1) as u8).collect();
                let x = polar_encode(&u).unwrap();
                let score: f64 = x.iter().zip(&llr).map(|(&b, &l)| if b == 0 { l / 2.0 } else { -l / 2.0 }).sum();
                if score > best.0 {
                    best = (score, u);
                }
            }
            let u = sc_decode(&llr, &vec![false; n], Decoder::Exact).unwrap();
            assert_eq!(u, best.1, "case {case}");
        }
    }
}
