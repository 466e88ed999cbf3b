//! Polar coding Monte Carlo: SC decoding of the all-zero codeword, genie
//! estimates of synthetic channel parameters, and code construction.
//!
//! Randomness comes from ChaCha8 keyed by `(seed, point, frame)`: the seed
//! picks the key, the sweep point the stream, and the frame a fixed window
//! of the keystream. Results do not depend on the number of workers.
//!
//! Genie estimates condition on `|L|`, the magnitude of the synthetic
//! channel's LLR: given `|L|` a symmetric channel is a BSC with crossover
//! `q = 1 / (1 + e^|L|)`, so `Z` is the mean of `2 sqrt(q (1 - q))` and
//! `T = 2 P_e` the mean of `2 q`. Both are bounded, unlike `exp(-L/2)`,
//! whose mean is dominated by rare large negative `L`. `L = 0` gives
//! `q = 1/2`, a tie counted as half an error.

pub mod channel;
pub mod construct;
pub mod polar;

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use channel::Channel;
pub use construct::{bec_exact_params, bec_params, build_info_set, InfoSet, Method};
pub use polar::{polar_encode, sc_decode, Decoder};

use crate::error::{Error, Result};
use crate::path::Path;
use polar::{genie_llr, sc_decode_into, Scratch};

/// Keystream words reserved per frame.
const FRAME_WORDS_LOG2: u32 = 32;

pub fn frame_rng(seed: u64, point: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(point);
    rng.set_word_pos((frame as u128) << FRAME_WORDS_LOG2);
    rng
}

#[derive(Debug, Clone, Serialize)]
pub struct GenieEstimate {
    pub z: f64,
    pub z_se: f64,
    pub t: f64,
    pub t_se: f64,
    pub trials: u64,
}

fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Estimates `Z(W^alpha)` and `T(W^alpha) = 2 P_e(W^alpha)`.
pub fn genie_estimate(channel: Channel, alpha: &Path, trials: u64, seed: u64) -> Result<GenieEstimate> {
    if trials < 1000 {
        return Err(Error::InvalidParameter(format!("{trials} trials, need at least 1000")));
    }
    let size = 1usize << alpha.len();
    let samples: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = frame_rng(seed, 0, t);
            let llr: Vec<f64> = (0..size).map(|_| channel.sample_llr(&mut rng)).collect();
            let l = genie_llr(&llr, alpha.bits(), Decoder::Exact).abs();
            let e = (-l).exp();
            (2.0 * (-l / 2.0).exp() / (1.0 + e), 2.0 * e / (1.0 + e))
        })
        .collect();
    let (z, t): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();
    let (z, z_se) = mean_se(&z);
    let (t, t_se) = mean_se(&t);
    Ok(GenieEstimate {
        z,
        z_se,
        t,
        t_se,
        trials,
    })
}

/// One point of a sweep; `label` is what the CSV reports in `snr_db`.
#[derive(Debug, Clone, Copy)]
pub struct SweepPoint {
    pub label: f64,
    pub channel: Channel,
}

/// BiAWGN points at the given `Eb/N0` values for rate `k / 2^n`.
pub fn awgn_sweep(snr_db: &[f64], rate: f64) -> Result<Vec<SweepPoint>> {
    snr_db
        .iter()
        .map(|&s| {
            Ok(SweepPoint {
                label: s,
                channel: Channel::awgn_ebn0(s, rate)?,
            })
        })
        .collect()
}

/// `A:STEP:B` inclusive, or a single value.
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidParameter(format!("bad range {s:?}, expected A:STEP:B"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    match parts.as_slice() {
        [v] => Ok(vec![*v]),
        [a, step, b] if *step > 0.0 && b >= a => {
            let count = ((b - a) / step + 1e-9).floor() as usize;
            Ok((0..=count).map(|i| a + step * i as f64).collect())
        }
        _ => Err(bad()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub snr_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub fer_ci95: f64,
    pub ber: f64,
    pub seed: u64,
}

/// Frame and bit error counts of SC decoding over a sweep.
pub fn simulate(points: &[SweepPoint], info: &InfoSet, frames: u64, seed: u64, decoder: Decoder) -> Result<Vec<SimResult>> {
    if frames == 0 {
        return Err(Error::InvalidParameter("need at least one frame".into()));
    }
    let frozen = info.frozen_mask();
    let size = info.len();
    const BLOCK: u64 = 256;
    let blocks = frames.div_ceil(BLOCK);
    let mut out = Vec::with_capacity(points.len());
    for (pi, pt) in points.iter().enumerate() {
        let (fe, be) = (0..blocks)
            .into_par_iter()
            .map(|blk| {
                let mut scratch = Scratch::new(size);
                let mut llr = vec![0.0; size];
                let mut u = vec![0u8; size];
                let mut x = vec![0u8; size];
                let (mut fe, mut be) = (0u64, 0u64);
                for f in blk * BLOCK..((blk + 1) * BLOCK).min(frames) {
                    let mut rng = frame_rng(seed, pi as u64, f);
                    for l in llr.iter_mut() {
                        *l = pt.channel.sample_llr(&mut rng);
                    }
                    sc_decode_into(&llr, &frozen, decoder, &mut scratch, &mut u, &mut x);
                    let errs = info.indices.iter().filter(|&&i| u[i] != 0).count() as u64;
                    fe += (errs > 0) as u64;
                    be += errs;
                }
                (fe, be)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        let fer = fe as f64 / frames as f64;
        out.push(SimResult {
            snr_db: pt.label,
            frames,
            frame_errors: fe,
            bit_errors: be,
            fer,
            fer_ci95: 1.96 * (fer * (1.0 - fer) / frames as f64).sqrt(),
            ber: if info.k == 0 { 0.0 } else { be as f64 / (frames * info.k as u64) as f64 },
            seed,
        });
    }
    Ok(out)
}

pub const CSV_HEADER: &str = "snr_db,frames,frame_errors,fer,fer_ci95,ber,seed";

pub fn write_csv<W: Write>(results: &[SimResult], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in results {
        writeln!(
            out,
            "{},{},{},{:.6e},{:.6e},{:.6e},{}",
            r.snr_db, r.frames, r.frame_errors, r.fer, r.fer_ci95, r.ber, r.seed
        )?;
    }
    Ok(())
}

/// `Eb/N0` where the FER curve crosses `target`, by linear interpolation
/// of `log10(FER)` between the two points around it.
pub fn crossing(results: &[SimResult], target: f64) -> Option<f64> {
    let lt = target.log10();
    results.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        if a.fer >= target && b.fer <= target && a.fer > 0.0 && b.fer > 0.0 {
            let (la, lb) = (a.fer.log10(), b.fer.log10());
            if la == lb {
                return Some(a.snr_db);
            }
            Some(a.snr_db + (la - lt) / (la - lb) * (b.snr_db - a.snr_db))
        } else {
            None
        }
    })
}
