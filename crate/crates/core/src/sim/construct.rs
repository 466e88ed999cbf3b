//! Information sets: exact BEC parameters, β-expansion, or an external
//! reliability sequence, optionally followed by explicit swaps.

use std::path::Path as FsPath;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::beta::beta_weight;
use crate::error::{Error, Result};
use crate::path::Path;

/// `Z` (equal to `2 P_e`) of every synthetic channel of `BEC(eps)`,
/// indexed MSB-first.
pub fn bec_exact_params(n: usize, eps: &BigRational) -> Result<Vec<BigRational>> {
    if *eps < BigRational::from_integer(0.into()) || *eps > BigRational::one() {
        return Err(Error::InvalidParameter(format!("erasure probability {eps} outside [0, 1]")));
    }
    let two = BigRational::from_integer(2.into());
    let mut z = vec![eps.clone()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(z.len() * 2);
        for v in &z {
            let sq = v * v;
            next.push(&two * v - &sq);
            next.push(sq);
        }
        z = next;
    }
    Ok(z)
}

/// Floating-point version of `bec_exact_params`.
pub fn bec_params(n: usize, eps: f64) -> Vec<f64> {
    let mut z = vec![eps];
    for _ in 0..n {
        z = z.iter().flat_map(|&v| [2.0 * v - v * v, v * v]).collect();
    }
    z
}

#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    /// Smallest `Z` on `BEC(eps)`, exact.
    Bec(BigRational),
    /// Largest β-expansion weight.
    Beta(f64),
    /// Indices in ascending reliability.
    Sequence(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InfoSet {
    pub n: usize,
    pub k: usize,
    pub indices: Vec<usize>,
}

impl InfoSet {
    pub fn new(n: usize, mut indices: Vec<usize>) -> Result<Self> {
        let size = 1usize << n;
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("duplicate index in information set".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= size) {
            return Err(Error::IndexOutOfRange { n: n as u32, index: bad as u64 });
        }
        Ok(Self {
            n,
            k: indices.len(),
            indices,
        })
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn frozen_mask(&self) -> Vec<bool> {
        let mut f = vec![true; self.len()];
        for &i in &self.indices {
            f[i] = false;
        }
        f
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Indices in `self` but not in `other`, and the reverse.
    pub fn difference(&self, other: &InfoSet) -> (Vec<usize>, Vec<usize>) {
        let a = self.indices.iter().copied().filter(|&i| !other.contains(i)).collect();
        let b = other.indices.iter().copied().filter(|&i| !self.contains(i)).collect();
        (a, b)
    }

    /// One index per line.
    pub fn to_text(&self) -> String {
        self.indices.iter().map(|i| format!("{i}\n")).collect()
    }

    pub fn from_text(n: usize, text: &str) -> Result<Self> {
        Self::new(n, parse_indices(text)?)
    }
}

/// Integers one per line; blank lines and `#` comments skipped. A line
/// `a;b` or `a,b` contributes its last field.
pub fn parse_indices(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let field = line.rsplit([';', ',']).next().unwrap_or(line).trim();
        let v = field
            .parse()
            .map_err(|_| Error::Format(format!("line {}: {line:?} is not an index", no + 1)))?;
        out.push(v);
    }
    Ok(out)
}

/// Reliability sequence from a file, ascending reliability. Longer
/// sequences are restricted to indices below `2^n` in order.
pub fn read_sequence(path: &FsPath, n: usize) -> Result<Vec<usize>> {
    let seq = parse_indices(&std::fs::read_to_string(path)?)?;
    restrict_sequence(seq, n)
}

pub fn restrict_sequence(seq: Vec<usize>, n: usize) -> Result<Vec<usize>> {
    let size = 1usize << n;
    let out: Vec<usize> = seq.into_iter().filter(|&i| i < size).collect();
    let mut seen = vec![false; size];
    for &i in &out {
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::Format(format!("index {i} repeated in reliability sequence")));
        }
    }
    if out.len() < size {
        return Err(Error::Format(format!(
            "reliability sequence covers {} of {size} indices",
            out.len()
        )));
    }
    Ok(out)
}

/// `(remove, add)` pairs, one per line.
pub fn parse_swaps(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).collect();
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Format(format!("line {}: {s:?} is not an index", no + 1)))
        };
        match f.as_slice() {
            [a, b] => out.push((parse(a)?, parse(b)?)),
            _ => return Err(Error::Format(format!("line {}: expected two indices", no + 1))),
        }
    }
    Ok(out)
}

/// Top-`k` indices by the method's reliability, then each swap removes
/// its first index and adds its second.
pub fn build_info_set(n: usize, k: usize, method: &Method, swaps: &[(usize, usize)]) -> Result<InfoSet> {
    let size = 1usize << n;
    if k > size {
        return Err(Error::InvalidParameter(format!("K = {k} exceeds N = {size}")));
    }
    // Ascending reliability.
    let order: Vec<usize> = match method {
        Method::Bec(eps) => {
            let z = bec_exact_params(n, eps)?;
            let mut idx: Vec<usize> = (0..size).collect();
            idx.sort_by(|&a, &b| z[b].cmp(&z[a]).then(a.cmp(&b)));
            idx
        }
        Method::Beta(beta) => {
            if !(*beta > 0.0) {
                return Err(Error::InvalidParameter(format!("beta {beta} must be positive")));
            }
            let w: Vec<f64> = (0..size as u64).map(|c| beta_weight(&Path::from_code(c, n), *beta)).collect();
            let mut idx: Vec<usize> = (0..size).collect();
            idx.sort_by(|&a, &b| w[a].total_cmp(&w[b]).then(a.cmp(&b)));
            idx
        }
        Method::Sequence(seq) => restrict_sequence(seq.clone(), n)?,
    };
    let mut set: Vec<usize> = order[size - k..].to_vec();
    for &(remove, add) in swaps {
        let pos = set
            .iter()
            .position(|&i| i == remove)
            .ok_or_else(|| Error::InvalidParameter(format!("swap removes {remove}, which is not in the set")))?;
        if set.contains(&add) {
            return Err(Error::InvalidParameter(format!(
                "swap adds {add}, which is already in the set"
            )));
        }
        if add >= size {
            return Err(Error::IndexOutOfRange { n: n as u32, index: add as u64 });
        }
        set[pos] = add;
    }
    InfoSet::new(n, set)
}

/// Approximate value for display.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn bec_examples() {
        assert_eq!(bec_exact_params(1, &q(1, 2)).unwrap(), vec![q(3, 4), q(1, 4)]);
        assert_eq!(
            bec_exact_params(2, &q(1, 2)).unwrap(),
            vec![q(15, 16), q(9, 16), q(7, 16), q(1, 16)]
        );
        assert!(bec_exact_params(3, &q(0, 1)).unwrap().iter().all(|z| *z == q(0, 1)));
        assert!(bec_exact_params(3, &q(3, 2)).is_err());
    }

    #[test]
    fn construction_examples() {
        let s = build_info_set(2, 2, &Method::Bec(q(1, 2)), &[]).unwrap();
        assert_eq!(s.indices, vec![2, 3]);
        let all = build_info_set(3, 8, &Method::Beta(1.19), &[]).unwrap();
        assert_eq!(all.indices, (0..8).collect::<Vec<_>>());
        let seq: Vec<usize> = vec![0, 1, 2, 4, 3, 5, 6, 7];
        let s = build_info_set(3, 4, &Method::Sequence(seq.clone()), &[]).unwrap();
        assert_eq!(s.indices, vec![3, 5, 6, 7]);
        let t = build_info_set(3, 4, &Method::Sequence(seq.clone()), &[(3, 4)]).unwrap();
        assert_eq!(t.indices, vec![4, 5, 6, 7]);
        assert!(build_info_set(3, 4, &Method::Sequence(seq.clone()), &[(3, 5)]).is_err());
        assert!(build_info_set(3, 4, &Method::Sequence(seq[..5].to_vec()), &[]).is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_indices("0;0\n1;1\n# c\n\n2;4\n").unwrap(), vec![0, 1, 4]);
        assert_eq!(parse_swaps("718 249\n839,371 # x\n").unwrap(), vec![(718, 249), (839, 371)]);
        assert!(parse_swaps("1 2 3").is_err());
    }
}
