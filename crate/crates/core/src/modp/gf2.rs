use super::ModPSeries;

/// Series over GF(2) packed 64 coefficients per word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Series {
    words: Vec<u64>,
    len: usize,
}

impl Gf2Series {
    pub fn zero(len: usize) -> Self {
        Gf2Series { words: vec![0; len.div_ceil(64)], len }
    }

    /// Panics unless `f` is a series over GF(2).
    pub fn from_modp(f: &ModPSeries) -> Self {
        assert!(f.p() == 2 && f.r() == 1, "expected a series over GF(2)");
        let mut out = Self::zero(f.len());
        for i in f.support() {
            out.set(i);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn support(&self) -> Vec<usize> {
        let mut out = vec![];
        for (w, &word) in self.words.iter().enumerate() {
            let mut x = word;
            while x != 0 {
                out.push(w * 64 + x.trailing_zeros() as usize);
                x &= x - 1;
            }
        }
        out
    }

    /// `F(x^q)` with the same length.
    pub fn substitute_power(&self, q: usize) -> Self {
        let mut out = Self::zero(self.len);
        for i in self.support() {
            match i.checked_mul(q) {
                Some(j) if j < self.len => out.set(j),
                _ => break,
            }
        }
        out
    }

    /// `self ^= other * x^shift`, truncated.
    pub fn xor_shifted(&mut self, other: &Self, shift: usize) {
        let (ws, bs) = (shift / 64, shift % 64);
        for i in (ws..self.words.len()).rev() {
            let src = i - ws;
            let mut v = other.words.get(src).copied().unwrap_or(0) << bs;
            if bs > 0 && src > 0 {
                v |= other.words.get(src - 1).copied().unwrap_or(0) >> (64 - bs);
            }
            self.words[i] ^= v;
        }
        self.mask_tail();
    }

    fn mask_tail(&mut self) {
        let extra = self.words.len() * 64 - self.len;
        if extra > 0 {
            let last = self.words.len() - 1;
            self.words[last] &= u64::MAX >> extra;
        }
    }

    /// Product with a polynomial given by its support.
    pub fn mul_sparse(&self, support: &[usize]) -> Self {
        let mut out = Self::zero(self.len);
        for &j in support {
            out.xor_shifted(self, j);
        }
        out
    }

    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let len = self.len.min(other.len);
        self.words.iter().zip(&other.words).enumerate().find_map(|(w, (a, b))| {
            let x = a ^ b;
            (x != 0).then(|| w * 64 + x.trailing_zeros() as usize).filter(|&i| i < len)
        })
    }
}
