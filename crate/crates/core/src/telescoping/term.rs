use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{binomial, factorial, int, is_integer, pochhammer, pow, rat, to_i64, Rational};

/// `n*N + k*K + c` for the summation variables `N` (recurrence index) and
/// `K` (summation index).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lin {
    pub n: Rational,
    pub k: Rational,
    pub c: Rational,
}

impl Lin {
    pub fn new(n: i64, k: i64, c: Rational) -> Self {
        Lin { n: int(n), k: int(k), c }
    }

    pub fn k() -> Self {
        Self::new(0, 1, int(0))
    }

    pub fn n() -> Self {
        Self::new(1, 0, int(0))
    }

    pub fn eval(&self, n: i64, k: i64) -> Rational {
        &self.n * int(n) + &self.k * int(k) + &self.c
    }

    fn int_eval(&self, n: i64, k: i64) -> Option<i64> {
        to_i64(&self.eval(n, k)).filter(|_| is_integer(&self.eval(n, k)))
    }

    /// `self` with `c` increased by `d`.
    pub fn plus(&self, d: &Rational) -> Lin {
        Lin { c: &self.c + d, ..self.clone() }
    }

    /// Shift of the summation index by `s`.
    pub fn shift_k(&self, s: i64) -> Lin {
        self.plus(&(&self.k * int(s)))
    }

    /// Shift of the recurrence index by `s`.
    pub fn shift_n(&self, s: i64) -> Lin {
        self.plus(&(&self.n * int(s)))
    }

    pub fn is_constant(&self) -> bool {
        self.n.is_zero() && self.k.is_zero()
    }

    /// Scalar `s` and monic `l` with `self = s * l`; the first nonzero of
    /// `(k, n, c)` in `l` is one.
    pub fn monic(&self) -> (Rational, Lin) {
        let lead =
            [&self.k, &self.n, &self.c].into_iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(Rational::one);
        (lead.clone(), Lin { n: &self.n / &lead, k: &self.k / &lead, c: &self.c / &lead })
    }
}

impl fmt::Display for Lin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        for (c, v) in [(&self.n, "n"), (&self.k, "k")] {
            if c.is_zero() {
                continue;
            }
            parts.push(if c.is_one() {
                v.to_string()
            } else if *c == -Rational::one() {
                format!("-{v}")
            } else {
                format!("{c}*{v}")
            });
        }
        if !self.c.is_zero() || parts.is_empty() {
            parts.push(self.c.to_string());
        }
        f.write_str(&parts.join(" + ").replace("+ -", "- "))
    }
}

/// Building blocks of a proper hypergeometric term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    /// `binom(top, bottom)`, zero outside `0 <= bottom <= top`.
    Binom(Lin, Lin),
    /// `arg!`
    Fact(Lin),
    /// `(c)_arg`
    Poch(Rational, Lin),
    /// `base^arg`
    Pow(Rational, Lin),
    /// the linear form itself
    Lin(Lin),
}

/// Ratio of two products of linear forms times a constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinRatio {
    pub constant: Rational,
    pub num: Vec<Lin>,
    pub den: Vec<Lin>,
}

impl LinRatio {
    pub fn one() -> Self {
        LinRatio { constant: Rational::one(), num: vec![], den: vec![] }
    }

    pub fn mul_lin(&mut self, l: Lin, e: i64) {
        let (s, m) = l.monic();
        if e > 0 {
            for _ in 0..e {
                self.constant *= &s;
                self.num.push(m.clone());
            }
        } else {
            for _ in 0..-e {
                self.constant /= &s;
                self.den.push(m.clone());
            }
        }
    }

    pub fn mul(&mut self, o: &LinRatio) {
        self.constant *= &o.constant;
        self.num.extend(o.num.iter().cloned());
        self.den.extend(o.den.iter().cloned());
    }

    /// Cancels equal forms and sorts both lists.
    pub fn reduce(&mut self) {
        self.num.sort();
        self.den.sort();
        let mut num = vec![];
        let mut den = std::mem::take(&mut self.den);
        for l in self.num.drain(..) {
            if let Some(i) = den.iter().position(|d| *d == l) {
                den.remove(i);
            } else {
                num.push(l);
            }
        }
        self.num = num;
        self.den = den;
    }

    pub fn eval(&self, n: i64, k: i64) -> Option<Rational> {
        let mut v = self.constant.clone();
        for l in &self.num {
            v *= l.eval(n, k);
        }
        for l in &self.den {
            let d = l.eval(n, k);
            if d.is_zero() {
                return None;
            }
            v /= d;
        }
        Some(v)
    }
}

/// Ratio contributed by `(arg)!^e` when `arg` moves to `arg + s`.
fn fact_shift(r: &mut LinRatio, arg: &Lin, s: i64, e: i64) {
    if s > 0 {
        for j in 1..=s {
            r.mul_lin(arg.plus(&int(j)), e);
        }
    } else {
        for j in 0..-s {
            r.mul_lin(arg.plus(&int(-j)), -e);
        }
    }
}

impl Factor {
    fn shift(&self, dn: i64, dk: i64) -> LinRatio {
        let mut r = LinRatio::one();
        let delta = |l: &Lin| -> i64 {
            let d = &l.n * int(dn) + &l.k * int(dk);
            to_i64(&d).filter(|_| is_integer(&d)).expect("integer shift")
        };
        match self {
            Factor::Binom(t, b) => {
                let tb = Lin { n: &t.n - &b.n, k: &t.k - &b.k, c: &t.c - &b.c };
                fact_shift(&mut r, t, delta(t), 1);
                fact_shift(&mut r, b, delta(b), -1);
                fact_shift(&mut r, &tb, delta(&tb), -1);
            }
            Factor::Fact(a) => fact_shift(&mut r, a, delta(a), 1),
            Factor::Poch(c, a) => {
                let base = a.plus(c);
                let s = delta(a);
                if s > 0 {
                    for j in 0..s {
                        r.mul_lin(base.plus(&int(j)), 1);
                    }
                } else {
                    for j in 1..=-s {
                        r.mul_lin(base.plus(&int(-j)), -1);
                    }
                }
            }
            Factor::Pow(b, a) => {
                let s = delta(a);
                r.constant = if s >= 0 { pow(b, s as u32) } else { pow(b, (-s) as u32).recip() };
            }
            Factor::Lin(l) => {
                r.mul_lin(Lin { n: l.n.clone(), k: l.k.clone(), c: &l.c + &l.n * int(dn) + &l.k * int(dk) }, 1);
                r.mul_lin(l.clone(), -1);
            }
        }
        r
    }

    /// Exact value, or `None` where the factor is undefined.
    fn eval(&self, n: i64, k: i64, e: i64) -> Option<Rational> {
        let v = match self {
            Factor::Binom(t, b) => Rational::from_integer(binomial(t.int_eval(n, k)?, b.int_eval(n, k)?)),
            Factor::Fact(a) => {
                let m = a.int_eval(n, k)?;
                if m < 0 {
                    // 1/(negative)! = 0
                    return (e < 0).then(Rational::zero);
                }
                Rational::from_integer(factorial(m as u64))
            }
            Factor::Poch(c, a) => {
                let m = a.int_eval(n, k)?;
                if m >= 0 {
                    pochhammer(c, m as u64)
                } else {
                    let mut p = Rational::one();
                    for j in 1..=-m {
                        p *= c - int(j);
                    }
                    if p.is_zero() {
                        return None;
                    }
                    p.recip()
                }
            }
            Factor::Pow(b, a) => {
                let m = a.int_eval(n, k)?;
                if m >= 0 {
                    pow(b, m as u32)
                } else if b.is_zero() {
                    return None;
                } else {
                    pow(b, (-m) as u32).recip()
                }
            }
            Factor::Lin(l) => l.eval(n, k),
        };
        if e >= 0 {
            Some(pow(&v, e as u32))
        } else if v.is_zero() {
            None
        } else {
            Some(pow(&v, (-e) as u32).recip())
        }
    }
}

/// `constant * prod factor_i^{e_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperTerm {
    pub constant: Rational,
    pub factors: Vec<(Factor, i64)>,
}

impl HyperTerm {
    pub fn new(factors: Vec<(Factor, i64)>) -> Self {
        HyperTerm { constant: Rational::one(), factors }
    }

    fn shift_ratio(&self, dn: i64, dk: i64) -> LinRatio {
        let mut r = LinRatio::one();
        for (f, e) in &self.factors {
            let s = f.shift(dn, dk);
            for _ in 0..e.unsigned_abs() {
                if *e > 0 {
                    r.mul(&s);
                } else {
                    r.mul(&LinRatio { constant: s.constant.recip(), num: s.den.clone(), den: s.num.clone() });
                }
            }
        }
        r.reduce();
        r
    }

    /// `t(n, k+1) / t(n, k)`
    pub fn k_ratio(&self) -> LinRatio {
        self.shift_ratio(0, 1)
    }

    /// `t(n+1, k) / t(n, k)`
    pub fn n_ratio(&self) -> LinRatio {
        self.shift_ratio(1, 0)
    }

    /// Exact value; zero where a binomial or reciprocal factorial vanishes.
    pub fn eval(&self, n: i64, k: i64) -> Option<Rational> {
        let mut v = self.constant.clone();
        for (f, e) in &self.factors {
            let x = f.eval(n, k, *e);
            match x {
                Some(x) if x.is_zero() => return Some(Rational::zero()),
                Some(x) => v *= x,
                None => {
                    // a zero elsewhere still makes the product vanish
                    if self.factors.iter().any(|(g, e2)| g.eval(n, k, *e2).is_some_and(|y| y.is_zero())) {
                        return Some(Rational::zero());
                    }
                    return None;
                }
            }
        }
        Some(v)
    }

    /// `sum_{k=lo}^{hi} t(n, k)`.
    pub fn sum(&self, n: i64, lo: i64, hi: i64) -> Option<Rational> {
        (lo..=hi).map(|k| self.eval(n, k)).sum()
    }
}

/// `((-a/b)_k / k!) * binom(3n-k, 2n-k)`, times `binom(2n, n)` when
/// `with_prefactor` is set.
pub fn family_summand(a: i64, b: i64, with_prefactor: bool) -> HyperTerm {
    let mut f = vec![
        (Factor::Poch(rat(-a, b), Lin::k()), 1),
        (Factor::Fact(Lin::k()), -1),
        (Factor::Binom(Lin::new(3, -1, int(0)), Lin::new(2, -1, int(0))), 1),
    ];
    if with_prefactor {
        f.push((Factor::Binom(Lin::new(2, 0, int(0)), Lin::n()), 1));
    }
    HyperTerm::new(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios_match_values() {
        let t = family_summand(1, 3, true);
        let kr = t.k_ratio();
        let nr = t.n_ratio();
        for n in 0..5 {
            for k in 0..2 * n {
                let v0 = t.eval(n, k).unwrap();
                if v0.is_zero() {
                    continue;
                }
                if let Some(r) = kr.eval(n, k) {
                    assert_eq!(t.eval(n, k + 1).unwrap(), &v0 * r, "k ratio at {n},{k}");
                }
                if let Some(r) = nr.eval(n, k) {
                    assert_eq!(t.eval(n + 1, k).unwrap(), v0 * r, "n ratio at {n},{k}");
                }
            }
        }
    }

    #[test]
    fn natural_boundaries() {
        let t = HyperTerm::new(vec![(Factor::Binom(Lin::n(), Lin::k()), 1)]);
        assert_eq!(t.eval(3, -1), Some(int(0)));
        assert_eq!(t.eval(3, 4), Some(int(0)));
        assert_eq!(t.sum(5, -3, 9), Some(int(32)));
        let f = family_summand(1, 3, false);
        assert_eq!(f.sum(1, 0, 2), Some(rat(20, 9)));
        assert_eq!(f.eval(2, 5), Some(int(0)));
    }

    #[test]
    fn lin_normal_form() {
        let (s, m) = Lin::new(3, -1, int(2)).monic();
        assert_eq!(s, int(-1));
        assert_eq!(m, Lin::new(-3, 1, int(-2)));
        assert_eq!(Lin::new(3, -1, int(2)).to_string(), "3*n - k + 2");
    }
}
