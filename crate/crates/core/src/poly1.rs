//! Dense univariate polynomials over the rationals and the rational
//! function field built on them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Dense univariate polynomial, `coeffs[i]` is the coefficient of `t^i`.
/// Trailing zeros are always trimmed, so the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// `a*t + b`
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::new(vec![b, a])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> UPoly {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: &Rational) -> UPoly {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: u32) -> UPoly {
        let mut r = UPoly::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        let lc = d.lc();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.lc();
        self.scale(&(Rational::one() / lc))
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `p(a*t + b)`
    pub fn compose_linear(&self, a: &Rational, b: &Rational) -> UPoly {
        let lin = UPoly::linear(a.clone(), b.clone());
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&UPoly::constant(c.clone()));
        }
        acc
    }

    /// `p(t + h)`
    pub fn shift(&self, h: &Rational) -> UPoly {
        self.compose_linear(&Rational::one(), h)
    }

    pub fn derivative(&self) -> UPoly {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(i.into())).collect())
    }

    /// Positive rational `c` and primitive integer polynomial `q` with
    /// `self = c * q` and `lc(q) > 0`.
    pub fn primitive_part(&self) -> (Rational, Vec<BigInt>) {
        if self.is_zero() {
            return (Rational::one(), vec![]);
        }
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> =
            self.coeffs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        let prim = ints.iter().map(|c| c / &g).collect();
        (Rational::new(g, l), prim)
    }

    /// Rational roots, each listed once.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let (_, p) = self.primitive_part();
        if p.len() < 2 {
            return vec![];
        }
        let mut roots = vec![];
        // strip t^m
        let low = p.iter().position(|c| !c.is_zero()).unwrap();
        if low > 0 {
            roots.push(Rational::zero());
        }
        let p = &p[low..];
        if p.len() < 2 {
            return roots;
        }
        let a0 = p[0].abs();
        let an = p.last().unwrap().abs();
        let poly = UPoly::new(p.iter().map(|c| Rational::from_integer(c.clone())).collect());
        for num in divisors(&a0) {
            for den in divisors(&an) {
                for s in [1i32, -1] {
                    let r = Rational::new(&num * BigInt::from(s), den.clone());
                    if !roots.contains(&r) && poly.eval(&r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
        roots
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{a}*{mono}"));
            }
        }
        s
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = vec![];
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let e = n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("t"))
    }
}

/// Element of Q(t), kept reduced with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: UPoly,
    den: UPoly,
}

impl RatFun {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let mut n = num.div_exact(&g).unwrap();
        let mut d = den.div_exact(&g).unwrap();
        let lc = d.lc();
        n = n.scale(&(Rational::one() / &lc));
        d = d.scale(&(Rational::one() / &lc));
        RatFun { num: n, den: d }
    }

    pub fn zero() -> Self {
        RatFun { num: UPoly::zero(), den: UPoly::one() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatFun { num: UPoly::constant(c), den: UPoly::one() }
    }

    pub fn from_poly(p: UPoly) -> Self {
        RatFun { num: p, den: UPoly::one() }
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFun) -> RatFun {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &RatFun) -> RatFun {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFun) -> RatFun {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> RatFun {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFun) -> RatFun {
        self.mul(&o.inv())
    }

    /// Value at `x`; `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn divrem_and_gcd() {
        let a = UPoly::from_ints(&[-1, 0, 1]); // t^2 - 1
        let b = UPoly::from_ints(&[1, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q, UPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        let c = UPoly::from_ints(&[2, 3, 1]); // (t+1)(t+2)
        assert_eq!(a.gcd(&c), b);
        assert_eq!(a.to_string(), "t^2 - 1");
    }

    #[test]
    fn shift_and_roots() {
        let p = UPoly::from_ints(&[0, 0, 1]).shift(&int(1));
        assert_eq!(p, UPoly::from_ints(&[1, 2, 1]));
        let q = UPoly::from_ints(&[-3, 1]).mul(&UPoly::linear(int(2), int(1))).mul(&UPoly::t());
        let mut roots = q.rational_roots();
        roots.sort();
        assert_eq!(roots, vec![rat(-1, 2), int(0), int(3)]);
    }

    #[test]
    fn primitive_part_sign() {
        let p = UPoly::new(vec![rat(1, 2), rat(-3, 4)]);
        let (c, q) = p.primitive_part();
        assert_eq!(q, vec![BigInt::from(-2), BigInt::from(3)]);
        assert_eq!(c, rat(-1, 4));
    }

    #[test]
    fn ratfun_field() {
        let a = RatFun::new(UPoly::from_ints(&[1]), UPoly::from_ints(&[0, 1]));
        let b = RatFun::new(UPoly::from_ints(&[1]), UPoly::from_ints(&[1, 1]));
        let s = a.sub(&b); // 1/t - 1/(t+1) = 1/(t(t+1))
        assert_eq!(s, RatFun::new(UPoly::one(), UPoly::from_ints(&[0, 1, 1])));
        assert_eq!(s.mul(&s.inv()), RatFun::one());
        assert_eq!(s.eval(&int(1)), Some(rat(1, 2)));
        assert_eq!(s.eval(&int(0)), None);
    }
}
