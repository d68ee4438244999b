use std::fmt;

use num_traits::{One, Signed, Zero};

use super::SeriesError;
use crate::rational::Rational;

/// Univariate series `c_0 + c_1 x + ... + c_N x^N + O(x^{N+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniSeries {
    var: String,
    coeffs: Vec<Rational>,
}

impl UniSeries {
    /// Series with the given coefficients; truncation is `coeffs.len() - 1`.
    pub fn new(var: &str, coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series stores at least c_0");
        UniSeries { var: var.to_string(), coeffs }
    }

    pub fn from_fn(var: &str, n: usize, f: impl FnMut(usize) -> Rational) -> Self {
        Self::new(var, (0..=n).map(f).collect())
    }

    pub fn zero(var: &str, n: usize) -> Self {
        Self::new(var, vec![Rational::zero(); n + 1])
    }

    pub fn one(var: &str, n: usize) -> Self {
        let mut s = Self::zero(var, n);
        s.coeffs[0] = Rational::one();
        s
    }

    /// The series `x` truncated at `n` (`n >= 1`).
    pub fn x(var: &str, n: usize) -> Self {
        let mut s = Self::zero(var, n);
        if n >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    /// `1/(1-x)`.
    pub fn geometric(var: &str, n: usize) -> Self {
        Self::new(var, vec![Rational::one(); n + 1])
    }

    /// Truncated polynomial `sum c_i x^i`.
    pub fn from_poly(var: &str, poly: &[Rational], n: usize) -> Self {
        Self::from_fn(var, n, |i| poly.get(i).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn truncate(&self, n: usize) -> UniSeries {
        let n = n.min(self.order());
        UniSeries::new(&self.var, self.coeffs[..=n].to_vec())
    }

    fn common(&self, other: &UniSeries) -> usize {
        self.order().min(other.order())
    }

    pub fn add(&self, other: &UniSeries) -> UniSeries {
        let n = self.common(other);
        UniSeries::from_fn(&self.var, n, |i| &self.coeffs[i] + &other.coeffs[i])
    }

    pub fn sub(&self, other: &UniSeries) -> UniSeries {
        let n = self.common(other);
        UniSeries::from_fn(&self.var, n, |i| &self.coeffs[i] - &other.coeffs[i])
    }

    pub fn scale(&self, k: &Rational) -> UniSeries {
        UniSeries::new(&self.var, self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &UniSeries) -> UniSeries {
        let n = self.common(other);
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        UniSeries::new(&self.var, out)
    }

    /// Coefficientwise product; truncation is the smaller of the two.
    pub fn hadamard(&self, other: &UniSeries) -> UniSeries {
        let n = self.common(other);
        UniSeries::from_fn(&self.var, n, |i| &self.coeffs[i] * &other.coeffs[i])
    }

    pub fn inverse(&self) -> Result<UniSeries, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let inv0 = c0.recip();
        let n = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(UniSeries::new(&self.var, out))
    }

    /// `f(g(x))` for `g` with zero constant term, by Horner's rule.
    pub fn compose(&self, g: &UniSeries) -> Result<UniSeries, SeriesError> {
        if !g.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let n = g.order();
        let mut acc = UniSeries::zero(&g.var, n);
        for k in (0..=self.order().min(n)).rev() {
            acc = acc.mul(g);
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// `(c_0 + u)^alpha` for `c_0 = 1`.
    pub fn pow_rational(&self, alpha: &Rational) -> Result<UniSeries, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::NotInvertible);
        }
        let n = self.order();
        let mut g: Vec<Rational> = vec![Rational::one()];
        for k in 1..=n {
            let mut acc = Rational::zero();
            for d in 1..=k {
                if self.coeffs[d].is_zero() {
                    continue;
                }
                let w = alpha * Rational::from_integer(d.into()) - Rational::from_integer((k - d).into());
                acc += w * &self.coeffs[d] * &g[k - d];
            }
            g.push(acc / Rational::from_integer(k.into()));
        }
        Ok(UniSeries::new(&self.var, g))
    }

    /// `f(c x)`.
    pub fn rescale(&self, c: &Rational) -> UniSeries {
        let mut pw = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw *= c;
        }
        UniSeries::new(&self.var, out)
    }

    /// `d/dx`, one order shorter (order 0 stays a zero constant).
    pub fn derivative(&self) -> UniSeries {
        if self.order() == 0 {
            return UniSeries::zero(&self.var, 0);
        }
        UniSeries::from_fn(&self.var, self.order() - 1, |i| {
            &self.coeffs[i + 1] * Rational::from_integer((i + 1).into())
        })
    }

    /// First index where the two series differ, within the common order.
    pub fn first_difference(&self, other: &UniSeries) -> Option<usize> {
        (0..=self.common(other)).find(|&i| self.coeffs[i] != other.coeffs[i])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl fmt::Display for UniSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "{}", self.var)?,
                1 => write!(f, "{a}*{}", self.var)?,
                _ if a.is_one() => write!(f, "{}^{i}", self.var)?,
                _ => write!(f, "{a}*{}^{i}", self.var)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn hadamard_examples() {
        let g = UniSeries::geometric("x", 8);
        assert_eq!(g.hadamard(&g), g);
        let f = UniSeries::from_fn("x", 8, |i| rat(i as i64 + 1, 3));
        assert_eq!(f.hadamard(&g), f);
        assert_eq!(g.hadamard(&f.truncate(4)).order(), 4);
    }

    #[test]
    fn compose_examples() {
        let f = UniSeries::from_fn("x", 10, |i| int(i as i64 * i as i64 - 3));
        assert_eq!(f.compose(&UniSeries::x("x", 10)).unwrap(), f);
        let g = UniSeries::geometric("x", 10);
        let x2 = UniSeries::from_poly("x", &[int(0), int(0), int(1)], 10);
        let h = g.compose(&x2).unwrap();
        let want: Vec<Rational> = (0..=10).map(|i| int(if i % 2 == 0 { 1 } else { 0 })).collect();
        assert_eq!(h.coeffs(), want.as_slice());
        assert_eq!(g.compose(&g), Err(SeriesError::NonzeroConstantTerm));
    }

    #[test]
    fn inverse_and_power() {
        let one_minus_x = UniSeries::from_poly("x", &[int(1), int(-1)], 6);
        assert_eq!(one_minus_x.inverse().unwrap(), UniSeries::geometric("x", 6));
        let root = UniSeries::geometric("x", 6).pow_rational(&rat(-1, 2)).unwrap();
        assert_eq!(root.mul(&root), one_minus_x);
    }

    #[test]
    fn display() {
        let s = UniSeries::new("x", vec![int(1), rat(-2, 3), int(0), int(1)]);
        assert_eq!(s.to_string(), "1 - 2/3*x + x^3 + O(x^4)");
    }
}
