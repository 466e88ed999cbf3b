//! Binary memoryless symmetric channels and their LLRs for the all-zero
//! codeword (BPSK `0 -> +1`).

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", content = "param", rename_all = "lowercase")]
pub enum Channel {
    /// Erasure probability.
    Bec(f64),
    /// Crossover probability in `[0, 1/2]`.
    Bsc(f64),
    /// Noise standard deviation.
    Awgn(f64),
}

impl Channel {
    pub fn bec(eps: f64) -> Result<Self> {
        check((0.0..=1.0).contains(&eps), "erasure probability", eps)?;
        Ok(Channel::Bec(eps))
    }

    pub fn bsc(p: f64) -> Result<Self> {
        check((0.0..=0.5).contains(&p), "crossover probability", p)?;
        Ok(Channel::Bsc(p))
    }

    pub fn awgn(sigma: f64) -> Result<Self> {
        check(sigma > 0.0 && sigma.is_finite(), "noise deviation", sigma)?;
        Ok(Channel::Awgn(sigma))
    }

    /// BiAWGN at `Eb/N0 = snr_db` for code rate `rate`.
    pub fn awgn_ebn0(snr_db: f64, rate: f64) -> Result<Self> {
        check(rate > 0.0 && rate <= 1.0, "code rate", rate)?;
        let var = 1.0 / (2.0 * rate * 10f64.powf(snr_db / 10.0));
        Self::awgn(var.sqrt())
    }

    /// Bhattacharyya parameter.
    pub fn z(&self) -> f64 {
        match *self {
            Channel::Bec(e) => e,
            Channel::Bsc(p) => 2.0 * (p * (1.0 - p)).sqrt(),
            Channel::Awgn(s) => (-1.0 / (2.0 * s * s)).exp(),
        }
    }

    /// Bit error probability of the optimal single-use decision.
    pub fn pe(&self) -> f64 {
        match *self {
            Channel::Bec(e) => e / 2.0,
            Channel::Bsc(p) => p,
            Channel::Awgn(s) => 0.5 * erfc(1.0 / (s * std::f64::consts::SQRT_2)),
        }
    }

    /// LLR of one channel use when `0` was sent. Erasures give `0`, a
    /// noiseless BEC output gives `+inf`.
    pub fn sample_llr<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Channel::Bec(e) => {
                if rng.gen::<f64>() < e {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            Channel::Bsc(p) => {
                let l = if p == 0.0 { f64::INFINITY } else { ((1.0 - p) / p).ln() };
                if rng.gen::<f64>() < p {
                    -l
                } else {
                    l
                }
            }
            Channel::Awgn(s) => {
                let n: f64 = StandardNormal.sample(rng);
                2.0 * (1.0 + s * n) / (s * s)
            }
        }
    }
}

fn check(ok: bool, what: &str, v: f64) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} {v} out of range")))
    }
}

/// Complementary error function, Numerical Recipes' Chebyshev fit
/// (relative error below 1.2e-7).
fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let r = t * (-z * z - 1.265_512_23
        + t * (1.000_023_68
            + t * (0.374_091_96
                + t * (0.096_784_18
                    + t * (-0.186_288_06
                        + t * (0.278_868_07
                            + t * (-1.135_203_98 + t * (1.488_515_87 + t * (-0.822_152_23 + t * 0.170_872_77)))))))))
        .exp();
    if x >= 0.0 {
        r
    } else {
        2.0 - r
    }
}

impl FromStr for Channel {
    type Err = Error;

    /// `bec:0.5`, `bsc:0.1` or `awgn:0.794` (noise deviation).
    fn from_str(s: &str) -> Result<Self> {
        let (model, value) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidParameter(format!("channel {s:?} is not model:value")))?;
        let v: f64 = value
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad channel parameter {value:?}")))?;
        match model.to_ascii_lowercase().as_str() {
            "bec" => Self::bec(v),
            "bsc" => Self::bsc(v),
            "awgn" | "biawgn" => Self::awgn(v),
            _ => Err(Error::InvalidParameter(format!("unknown channel model {model:?}"))),
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Channel::Bec(e) => write!(f, "bec:{e}"),
            Channel::Bsc(p) => write!(f, "bsc:{p}"),
            Channel::Awgn(s) => write!(f, "awgn:{s}"),
        }
    }
}
