//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Exponent vector, one entry per variable of the owning ring.
pub type Monomial = Vec<u32>;

/// Polynomial over an ordered list of variable names.
///
/// Terms are keyed by exponent vectors in lexicographic order with the
/// first variable most significant; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero(vars: &[String]) -> Self {
        MPoly { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The polynomial consisting of variable `index`.
    pub fn var(vars: &[String], index: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[index] = 1;
        Self::monomial(vars, e, Rational::one())
    }

    pub fn var_named(vars: &[String], name: &str) -> Option<Self> {
        vars.iter().position(|v| v == name).map(|i| Self::var(vars, i))
    }

    pub fn monomial(vars: &[String], exps: Monomial, c: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent length mismatch");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(vars: &[String], it: I) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.vars.len()])
    }

    /// `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, e: Monomial, c: Rational) {
        debug_assert_eq!(e.len(), self.vars.len());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &MPoly) {
        assert_eq!(self.vars, other.vars, "polynomials live in different rings");
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        self.check_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MPoly {
        MPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &Rational) -> MPoly {
        if k.is_zero() {
            return MPoly::zero(&self.vars);
        }
        MPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect() }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        self.check_ring(other);
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MPoly { vars: self.vars.clone(), terms: acc }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one(&self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Degree in variable `index` (zero for the zero polynomial).
    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms.keys().map(|e| e[index]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn derivative(&self, index: usize) -> MPoly {
        let mut out = MPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[index] > 0 {
                let mut e2 = e.clone();
                e2[index] -= 1;
                out.add_term(e2, c * Rational::from_integer(e[index].into()));
            }
        }
        out
    }

    /// Re-embeds the polynomial into a ring whose variables are a superset.
    pub fn with_vars(&self, new_vars: &[String]) -> Option<MPoly> {
        let map: Option<Vec<usize>> = self.vars.iter().map(|v| new_vars.iter().position(|w| w == v)).collect();
        let map = map?;
        let mut out = MPoly::zero(new_vars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; new_vars.len()];
            for (i, &k) in e.iter().enumerate() {
                e2[map[i]] += k;
            }
            out.add_term(e2, c.clone());
        }
        Some(out)
    }

    /// Moves the exponent of variable `from` onto variable `to` (a pure renaming
    /// when `to` does not occur).
    pub fn rename_var(&self, from: usize, to: usize) -> MPoly {
        if from == to {
            return self.clone();
        }
        let mut out = MPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[to] += e2[from];
            e2[from] = 0;
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Simultaneous substitution `x_i -> images[i]`; all images share one ring.
    pub fn substitute(&self, images: &[MPoly]) -> MPoly {
        assert_eq!(images.len(), self.vars.len());
        let target = images.first().map(|p| p.vars.clone()).unwrap_or_default();
        let mut powers: Vec<Vec<MPoly>> = images.iter().map(|p| vec![MPoly::one(&p.vars), p.clone()]).collect();
        let mut out = MPoly::zero(&target);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(&target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                if k > 0 {
                    term = term.mul(&powers[i][k]);
                }
            }
            for (e2, c2) in term.terms {
                out.add_term(e2, c2);
            }
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Drops every term whose exponent exceeds `bounds` in some coordinate.
    pub fn truncate(&self, bounds: &[u32]) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().zip(bounds).all(|(a, b)| a <= b))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        self.check_ring(divisor);
        let (lm, lc) = divisor.leading()?;
        let lm = lm.clone();
        let lc = lc.clone();
        let mut rem = self.terms.clone();
        let mut quot = MPoly::zero(&self.vars);
        while let Some((e, c)) = rem.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(&lm).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Monomial = e.iter().zip(&lm).map(|(a, b)| a - b).collect();
            let qc = &c / &lc;
            for (de, dc) in &divisor.terms {
                let te: Monomial = qe.iter().zip(de).map(|(a, b)| a + b).collect();
                let prod = &qc * dc;
                match rem.entry(te) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(-prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() -= prod;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                }
            }
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Largest power of variable `index` dividing every term.
    pub fn var_content(&self, index: usize) -> u32 {
        self.terms.keys().map(|e| e[index]).min().unwrap_or(0)
    }

    /// Divides by `x_index^k`; every term must be divisible.
    pub fn shift_down(&self, index: usize, k: u32) -> MPoly {
        let mut out = MPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[index] = e2[index].checked_sub(k).expect("term not divisible");
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Terms in graded order: lower total degree first, then variables in
    /// declaration order.
    pub fn graded_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        v
    }
}

fn fmt_monomial(vars: &[String], e: &[u32]) -> String {
    let mut parts = Vec::new();
    for (v, &k) in vars.iter().zip(e) {
        match k {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{k}")),
        }
    }
    parts.join("*")
}

/// Grammar-compatible rendering, e.g. `1 - x - y - z` or `2/3*x^2*y`.
impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.graded_terms().into_iter().enumerate() {
            let mono = fmt_monomial(&self.vars, e);
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                if i == 0 && neg {
                    write!(f, "1*{mono}")?;
                } else {
                    write!(f, "{mono}")?;
                }
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{}]({})", self.vars.join(","), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn arithmetic_and_display() {
        let v = vars(&["x", "y", "z"]);
        let x = MPoly::var(&v, 0);
        let y = MPoly::var(&v, 1);
        let z = MPoly::var(&v, 2);
        let p = MPoly::one(&v).sub(&x).sub(&y).sub(&z);
        assert_eq!(p.to_string(), "1 - x - y - z");
        let sq = x.add(&y).pow(2);
        assert_eq!(sq.to_string(), "x^2 + 2*x*y + y^2");
        assert_eq!(x.neg().to_string(), "-1*x");
        assert_eq!(x.scale(&rat(-2, 3)).to_string(), "-2/3*x");
        assert_eq!(p.derivative(0), MPoly::constant(&v, int(-1)));
    }

    #[test]
    fn exact_division() {
        let v = vars(&["u", "v"]);
        let u = MPoly::var(&v, 0);
        let w = MPoly::var(&v, 1);
        let num = u.pow(5).sub(&w.pow(5));
        let q = num.div_exact(&u.sub(&w)).unwrap();
        assert_eq!(q.mul(&u.sub(&w)), num);
        assert!(u.pow(2).add(&w).div_exact(&u.sub(&w)).is_none());
    }

    #[test]
    fn substitution_and_embedding() {
        let v = vars(&["x"]);
        let p = MPoly::one(&v).sub(&MPoly::var(&v, 0));
        let big = vars(&["x", "y"]);
        let img = MPoly::var(&big, 0).add(&MPoly::var(&big, 1));
        let q = p.substitute(&[img]);
        assert_eq!(q.to_string(), "1 - x - y");
        let e = p.with_vars(&big).unwrap();
        assert_eq!(e.to_string(), "1 - x");
        assert!(p.with_vars(&vars(&["y"])).is_none());
    }
}
