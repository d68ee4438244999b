//! Hypergeometric series modulo prime powers and functional equations over
//! `Z/p^r`.

mod gf2;
mod guess;
mod io;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::hypergeom::HypergeomSpec;
use crate::rational::Rational;

pub use gf2::Gf2Series;
pub use guess::{guess_mahler, guess_minpoly_mod, verify_relation, EqKind, FunctionalEq, RelationCheck};
pub use io::{read_binary, read_sparse_text, write_binary, write_sparse_text};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModpError {
    #[error("p^{r} does not fit the 63-bit working precision for p = {p}")]
    PrecisionExhausted { p: u64, r: u32 },
    #[error("coefficient {index} has negative {p}-adic valuation {valuation}")]
    NonIntegralCoefficient { index: usize, p: u64, valuation: i64 },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("parameter {0} is too large for word-sized arithmetic")]
    ParameterTooLarge(Rational),
    #[error("malformed series data: {0}")]
    Format(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for ModpError {
    fn from(e: std::io::Error) -> Self {
        ModpError::Io(e.to_string())
    }
}

/// Largest `k` with `p^k < 2^63`.
pub fn max_precision(p: u64) -> u32 {
    let mut k = 0;
    let mut m: u128 = 1;
    while m * p as u128 <= (1u128 << 63) {
        m *= p as u128;
        k += 1;
    }
    k
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn invmod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m as i128) as u64)
}

/// A `p`-adic number known to precision `p^K`: zero, or `p^valuation * unit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PadicCoeff {
    Zero,
    Unit { valuation: i64, unit: u64 },
}

impl PadicCoeff {
    /// Residue modulo `p^r`; `None` for negative valuation.
    pub fn reduce(&self, p: u64, r: u32) -> Option<u64> {
        match *self {
            PadicCoeff::Zero => Some(0),
            PadicCoeff::Unit { valuation, unit } => {
                if valuation < 0 {
                    None
                } else if valuation >= r as i64 {
                    Some(0)
                } else {
                    let m = p.pow(r);
                    Some(mulmod(unit % m, p.pow(valuation as u32), m))
                }
            }
        }
    }
}

fn split_i128(mut x: i128, p: u64, m: u64) -> (i64, u64) {
    let mut e = 0;
    let pp = p as i128;
    while x % pp == 0 {
        x /= pp;
        e += 1;
    }
    (e, x.rem_euclid(m as i128) as u64)
}

fn split_bigint(x: &BigInt, p: u64, m: u64) -> (i64, u64) {
    let mut x = x.clone();
    let pb = BigInt::from(p);
    let mut e = 0;
    loop {
        let (q, r) = x.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        x = q;
        e += 1;
    }
    (e, x.mod_floor(&BigInt::from(m)).to_u64().unwrap())
}

/// Coefficients of a hypergeometric series as `p`-adic numbers with
/// precision `p^k`, driven by the term ratio in word-sized integers.
pub struct PadicCoeffs {
    p: u64,
    m: u64,
    upper: Vec<(i128, i128)>,
    lower: Vec<(i128, i128)>,
    constant: (i64, u64),
    current: PadicCoeff,
    n: u64,
}

impl PadicCoeffs {
    pub fn new(spec: &HypergeomSpec, p: u64, k: u32) -> Result<Self, ModpError> {
        if !is_prime(p) {
            return Err(ModpError::NotPrime(p));
        }
        if k > max_precision(p) {
            return Err(ModpError::PrecisionExhausted { p, r: k });
        }
        let m = p.pow(k);
        let word = |a: &Rational| -> Result<(i128, i128), ModpError> {
            let too_big = || ModpError::ParameterTooLarge(a.clone());
            let num = a.numer().to_i64().ok_or_else(too_big)?;
            let den = a.denom().to_i64().ok_or_else(too_big)?;
            Ok((num as i128, den as i128))
        };
        let upper = spec.upper.iter().map(word).collect::<Result<Vec<_>, _>>()?;
        let lower = spec.lower.iter().map(word).collect::<Result<Vec<_>, _>>()?;
        let mut c = spec.scale.clone();
        for &(_, q) in &lower {
            c *= Rational::from_integer(q.into());
        }
        for &(_, q) in &upper {
            c /= Rational::from_integer(q.into());
        }
        let current = PadicCoeff::Unit { valuation: 0, unit: 1 % m };
        let constant = if c.is_zero() {
            (0, 0)
        } else {
            let (en, un) = split_bigint(c.numer(), p, m);
            let (ed, ud) = split_bigint(c.denom(), p, m);
            (en - ed, mulmod(un, invmod(ud, m).unwrap(), m))
        };
        Ok(PadicCoeffs { p, m, upper, lower, constant, current, n: 0 })
    }
}

impl Iterator for PadicCoeffs {
    type Item = PadicCoeff;

    fn next(&mut self) -> Option<PadicCoeff> {
        let out = self.current;
        if let PadicCoeff::Unit { valuation, unit } = self.current {
            let n = self.n as i128;
            let (p, m) = (self.p, self.m);
            let (mut e, mut u) = self.constant;
            let mut zero = u == 0;
            let mut den_u = 1 % m;
            for &(a, q) in &self.upper {
                let x = a + q * n;
                if x == 0 {
                    zero = true;
                    break;
                }
                let (ex, ux) = split_i128(x, p, m);
                e += ex;
                u = mulmod(u, ux, m);
            }
            for x in self.lower.iter().map(|&(b, q)| b + q * n).chain(std::iter::once(n + 1)) {
                let (ex, ux) = split_i128(x, p, m);
                e -= ex;
                den_u = mulmod(den_u, ux, m);
            }
            self.current = if zero {
                PadicCoeff::Zero
            } else {
                let u = mulmod(u, invmod(den_u, m).expect("unit"), m);
                PadicCoeff::Unit { valuation: valuation + e, unit: mulmod(unit, u, m) }
            };
        }
        self.n += 1;
        Some(out)
    }
}

/// Truncated power series with coefficients in `Z/p^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPSeries {
    p: u64,
    r: u32,
    coeffs: Vec<u64>,
}

impl ModPSeries {
    /// Reduces `coeffs` modulo `p^r`.
    pub fn new(p: u64, r: u32, coeffs: Vec<u64>) -> Self {
        let m = p.pow(r);
        ModPSeries { p, r, coeffs: coeffs.into_iter().map(|c| c % m).collect() }
    }

    pub fn from_signed(p: u64, r: u32, coeffs: &[i64]) -> Self {
        let m = p.pow(r) as i64;
        Self::new(p, r, coeffs.iter().map(|c| c.rem_euclid(m) as u64).collect())
    }

    pub fn zero(p: u64, r: u32, len: usize) -> Self {
        ModPSeries { p, r, coeffs: vec![0; len] }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.r)
    }

    /// Highest stored degree.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn support(&self) -> Vec<usize> {
        self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, _)| i).collect()
    }

    pub fn truncate(&self, len: usize) -> Self {
        ModPSeries { coeffs: self.coeffs[..len.min(self.coeffs.len())].to_vec(), ..*self }
    }

    /// Reduction to a lower precision `p^s`, `s <= r`.
    pub fn reduce(&self, s: u32) -> Self {
        Self::new(self.p, s, self.coeffs.clone())
    }

    pub fn scale(&self, c: u64) -> Self {
        let m = self.modulus();
        ModPSeries { coeffs: self.coeffs.iter().map(|&a| mulmod(a, c, m)).collect(), ..*self }
    }

    pub fn add(&self, o: &Self) -> Self {
        let m = self.modulus();
        let len = self.len().min(o.len());
        ModPSeries { coeffs: (0..len).map(|i| (self.coeffs[i] + o.coeffs[i]) % m).collect(), ..*self }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let m = self.modulus();
        let len = self.len().min(o.len());
        ModPSeries { coeffs: (0..len).map(|i| (self.coeffs[i] + m - o.coeffs[i]) % m).collect(), ..*self }
    }

    /// Product truncated to `len` coefficients; iterates over the nonzero
    /// terms of the sparser factor.
    pub fn mul_trunc(&self, o: &Self, len: usize) -> Self {
        let m = self.modulus();
        let (a, b) = if self.support_len() <= o.support_len() { (self, o) } else { (o, self) };
        let mut out = vec![0u64; len];
        for (i, &x) in a.coeffs.iter().enumerate().take(len) {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate().take(len - i) {
                if y != 0 {
                    out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % m as u128) as u64;
                }
            }
        }
        ModPSeries { coeffs: out, ..*self }
    }

    fn support_len(&self) -> usize {
        self.coeffs.iter().filter(|c| **c != 0).count()
    }

    pub fn pow_trunc(&self, k: u64, len: usize) -> Self {
        let mut out = Self::zero(self.p, self.r, len);
        if len > 0 {
            out.coeffs[0] = 1 % self.modulus();
        }
        for _ in 0..k {
            out = out.mul_trunc(self, len);
        }
        out
    }

    /// `F(x^q)` truncated to `len` coefficients.
    pub fn substitute_power(&self, q: usize, len: usize) -> Self {
        let mut out = vec![0u64; len];
        for (i, &c) in self.coeffs.iter().enumerate() {
            match i.checked_mul(q) {
                Some(j) if j < len => out[j] = c,
                _ => break,
            }
        }
        ModPSeries { coeffs: out, ..*self }
    }

    /// `(F - F(0)) / p` at precision `p^(r-1)`, when every coefficient of
    /// `F - F(0)` is divisible by `p`.
    pub fn drop_constant_div_p(&self) -> Option<Self> {
        if self.r == 0 {
            return None;
        }
        let mut coeffs = Vec::with_capacity(self.len());
        for (i, &c) in self.coeffs.iter().enumerate() {
            let c = if i == 0 { 0 } else { c };
            if c % self.p != 0 {
                return None;
            }
            coeffs.push(c / self.p);
        }
        Some(ModPSeries { p: self.p, r: self.r - 1, coeffs })
    }

    /// First degree below `len` where `F(x)^p` and `F(x^p)` differ, for
    /// series over `GF(p)`.
    pub fn frobenius_mismatch(&self) -> Option<usize> {
        assert_eq!(self.r, 1, "Frobenius holds over GF(p)");
        let len = self.len();
        let lhs = self.pow_trunc(self.p, len);
        let rhs = self.substitute_power(self.p as usize, len);
        (0..len).find(|&i| lhs.coeffs[i] != rhs.coeffs[i])
    }
}

/// Coefficients `0..=n` of `spec` modulo `p^r`, computed from the term ratio
/// with valuation tracking.
pub fn hyp_series_mod(spec: &HypergeomSpec, p: u64, r: u32, n: usize) -> Result<ModPSeries, ModpError> {
    hyp_series_mod_precision(spec, p, r, r.max(1), n)
}

/// As [`hyp_series_mod`] with units carried modulo `p^k`, `k >= r`.
pub fn hyp_series_mod_precision(
    spec: &HypergeomSpec,
    p: u64,
    r: u32,
    k: u32,
    n: usize,
) -> Result<ModPSeries, ModpError> {
    let iter = PadicCoeffs::new(spec, p, k.max(r))?;
    let mut coeffs = Vec::with_capacity(n + 1);
    for (index, c) in iter.take(n + 1).enumerate() {
        match c.reduce(p, r) {
            Some(v) => coeffs.push(v),
            None => {
                let PadicCoeff::Unit { valuation, .. } = c else { unreachable!("zero always reduces") };
                return Err(ModpError::NonIntegralCoefficient { index, p, valuation });
            }
        }
    }
    Ok(ModPSeries { p, r, coeffs })
}

/// Exact reduction of a rational with `p`-integral value.
pub fn reduce_rational(c: &Rational, p: u64, r: u32) -> Option<u64> {
    let m = BigInt::from(p.pow(r));
    let d = c.denom().mod_floor(&m);
    let inv = invmod(d.to_u64()?, p.pow(r))?;
    let n = c.numer().mod_floor(&m).to_u64()?;
    Some(mulmod(n, inv, p.pow(r)))
}

#[cfg(test)]
mod tests;
