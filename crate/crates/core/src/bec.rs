//! The order `≼_BEC`: `alpha ≼_BEC gamma` iff `Z_gamma <= Z_alpha` on [0,1].

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::degradation::Direction;
use crate::error::{Error, Result};
use crate::path::Path;
use crate::poly::{z_compare, Certificate, Nonneg};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BecCertificate {
    Exact(Certificate),
    /// Decided by the staircase closed form.
    ClosedForm,
    /// A point where the claimed dominance fails.
    Witness { x: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BecVerdict {
    pub relation: Direction,
    /// Decision of `Z_alpha - Z_gamma >= 0`.
    pub forward: Nonneg,
    /// Decision of `Z_gamma - Z_alpha >= 0`.
    pub backward: Nonneg,
}

impl BecVerdict {
    /// The certificate backing `relation`.
    pub fn certificate(&self) -> BecCertificate {
        let as_cert = |v: &Nonneg| match v {
            Nonneg::Nonneg(c) => BecCertificate::Exact(*c),
            Nonneg::Negative(w) => BecCertificate::Witness { x: w.to_string() },
        };
        match self.relation {
            Direction::Leq | Direction::Equal => as_cert(&self.forward),
            Direction::Geq => as_cert(&self.backward),
            Direction::Incomparable => as_cert(&self.forward),
        }
    }

    /// Witnesses `(x, y)` with `Z_alpha(x) < Z_gamma(x)` and
    /// `Z_gamma(y) < Z_alpha(y)` when incomparable.
    pub fn witnesses(&self) -> Option<(&BigRational, &BigRational)> {
        Some((self.forward.witness()?, self.backward.witness()?))
    }
}

pub fn bec_leq(alpha: &Path, gamma: &Path) -> Result<BecVerdict> {
    if alpha.len() != gamma.len() {
        return Err(Error::LengthMismatch {
            left: alpha.len(),
            right: gamma.len(),
        });
    }
    let forward = z_compare(alpha, gamma);
    let backward = z_compare(gamma, alpha);
    let relation = match (forward.is_nonneg(), backward.is_nonneg()) {
        (true, true) => Direction::Equal,
        (true, false) => Direction::Leq,
        (false, true) => Direction::Geq,
        (false, false) => Direction::Incomparable,
    };
    Ok(BecVerdict {
        relation,
        forward,
        backward,
    })
}

/// Only the forward half: does `alpha ≼_BEC gamma` hold?
pub fn bec_holds(alpha: &Path, gamma: &Path) -> bool {
    alpha.len() == gamma.len() && z_compare(alpha, gamma).is_nonneg()
}

/// Largest `2^m * 2^n` decided by direct big-integer comparison.
pub const STAIRCASE_EXACT_LIMIT: u64 = 1 << 20;

/// Truth of `(1 - 2^-(2^m))^(2^n) <= 1/2`, the condition for
/// `1^m 0^n ≼_BEC 0^m 1^n`.
pub fn staircase_fact(m: u32, n: u32) -> bool {
    let a_bits = m.checked_add(n);
    if a_bits.is_some_and(|s| s <= 20) {
        // 2 (2^a - 1)^b <= 2^(ab) with a = 2^m, b = 2^n.
        let a = 1usize << m;
        let b = 1u32 << n;
        let base = (BigUint::one() << a) - 1u32;
        let lhs = base.pow(b) << 1;
        return lhs <= BigUint::one() << (a * b as usize);
    }
    // With eps = 2^-a, -ln(1 - eps) lies in [eps, eps / (1 - eps)], so
    // b * eps = 2^(n - a) brackets the exponent against ln 2:
    // a lower bracket >= 1 exceeds ln 2, and for a >= 2 an upper bracket
    // of at most 2^-1 / (1 - 2^-2) = 2/3 stays below it.
    if m == 0 {
        return true;
    }
    let a = if m >= 64 { u64::MAX } else { 1u64 << m };
    (n as u64) >= a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Path {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(bec_leq(&p("01"), &p("10")).unwrap().relation, Direction::Leq);
        assert_eq!(bec_leq(&p("1100"), &p("0111")).unwrap().relation, Direction::Leq);
        assert_eq!(bec_leq(&p("0110"), &p("1001")).unwrap().relation, Direction::Leq);
        assert!(bec_leq(&p("0"), &p("01")).is_err());
    }

    #[test]
    fn staircase_examples() {
        assert!(staircase_fact(1, 2));
        assert!(!staircase_fact(1, 1));
        for k in 1..=3 {
            assert!(staircase_fact(k, 1 << k));
        }
        assert!(staircase_fact(0, 0));
        assert!(staircase_fact(5, 40));
        assert!(!staircase_fact(6, 40));
        assert!(staircase_fact(0, 100));
    }

    #[test]
    fn staircase_closed_form_over_exact_range() {
        for m in 0..=4u32 {
            for n in 0..=(20 - m) {
                let want = m == 0 || n as u64 >= 1u64 << m;
                assert_eq!(staircase_fact(m, n), want, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn incomparable_pair_has_both_witnesses() {
        let v = bec_leq(&p("100"), &p("011")).unwrap();
        assert_eq!(v.relation, Direction::Leq);
        let v = bec_leq(&p("1000"), &p("0111")).unwrap();
        if v.relation == Direction::Incomparable {
            assert!(v.witnesses().is_some());
        }
        let v = bec_leq(&p("10"), &p("01")).unwrap();
        assert_eq!(v.relation, Direction::Geq);
        assert!(matches!(v.certificate(), BecCertificate::Exact(_)));
    }
}
