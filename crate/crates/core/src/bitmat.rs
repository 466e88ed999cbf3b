//! Dense square bit matrix used as a relation store over `2^n` paths.

#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    size: usize,
    words: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitMatrix({}x{}, {} set)", self.size, self.size, self.count())
    }
}

impl BitMatrix {
    pub fn new(size: usize) -> Self {
        let words = size.div_ceil(64).max(1);
        Self {
            size,
            words,
            data: vec![0; size * words],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.data[i * self.words + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] |= 1 << (j % 64);
    }

    /// Sets the bit and reports whether it was newly set.
    #[inline]
    pub fn insert(&mut self, i: usize, j: usize) -> bool {
        let w = &mut self.data[i * self.words + j / 64];
        let m = 1u64 << (j % 64);
        let fresh = *w & m == 0;
        *w |= m;
        fresh
    }

    pub fn clear(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] &= !(1 << (j % 64));
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    /// `row(dst) |= row(src)`, returning whether anything changed.
    pub fn or_row(&mut self, dst: usize, src: usize) -> bool {
        if dst == src {
            return false;
        }
        let w = self.words;
        let (d, s) = if dst < src {
            let (a, b) = self.data.split_at_mut(src * w);
            (&mut a[dst * w..(dst + 1) * w], &b[..w])
        } else {
            let (a, b) = self.data.split_at_mut(dst * w);
            (&mut b[..w], &a[src * w..(src + 1) * w])
        };
        let mut changed = false;
        for (x, y) in d.iter_mut().zip(s) {
            let nx = *x | *y;
            changed |= nx != *x;
            *x = nx;
        }
        changed
    }

    /// `row(dst) |= bits`.
    pub fn or_into_row(&mut self, dst: usize, bits: &[u64]) {
        let w = self.words;
        for (x, y) in self.data[dst * w..(dst + 1) * w].iter_mut().zip(bits) {
            *x |= *y;
        }
    }

    pub fn union_with(&mut self, other: &BitMatrix) {
        assert_eq!(self.size, other.size);
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x |= *y;
        }
    }

    pub fn difference(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.size, other.size);
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x &= !*y;
        }
        out
    }

    pub fn intersection(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.size, other.size);
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x &= *y;
        }
        out
    }

    pub fn is_subset_of(&self, other: &BitMatrix) -> bool {
        self.data.iter().zip(&other.data).all(|(x, y)| x & !y == 0)
    }

    pub fn count(&self) -> u64 {
        self.data.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// All set `(i, j)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.size).flat_map(move |i| self.row_iter(i).map(move |j| (i, j)))
    }

    pub fn row_iter(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    /// Warshall's algorithm on bit rows.
    pub fn transitive_closure(&mut self) {
        for k in 0..self.size {
            for i in 0..self.size {
                if i != k && self.get(i, k) {
                    self.or_row(i, k);
                }
            }
        }
    }

    /// Drops every edge implied by a path of length two or more; the input
    /// must be transitively closed and acyclic.
    pub fn transitive_reduction(&self) -> BitMatrix {
        let mut out = self.clone();
        for i in 0..self.size {
            for k in self.row_iter(i).collect::<Vec<_>>() {
                if k == i {
                    continue;
                }
                for j in self.row_iter(k) {
                    if j != k {
                        out.clear(i, j);
                    }
                }
            }
        }
        out
    }
}
