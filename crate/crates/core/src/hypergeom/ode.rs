use std::fmt;

use num_traits::Zero;

use super::HypergeomError;
use crate::expr::MPoly;
use crate::poly1::UPoly;
use crate::rational::{int, Rational};
use crate::series::UniSeries;

/// Linear differential operator `sum_k P_k(x) D^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ode {
    coeffs: Vec<UPoly>,
}

impl Ode {
    pub fn new(coeffs: Vec<UPoly>) -> Self {
        assert!(coeffs.last().is_some_and(|p| !p.is_zero()), "leading coefficient must be nonzero");
        Ode { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `P_0 .. P_r`.
    pub fn coeffs(&self) -> &[UPoly] {
        &self.coeffs
    }
}

impl fmt::Display for Ode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, p)| match k {
                0 => format!("({})", p.display_in("x")),
                1 => format!("({})*D", p.display_in("x")),
                _ => format!("({})*D^{k}", p.display_in("x")),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// The order-three operator annihilating the `(a, b)` family series:
/// `b^3 x^2 (1-27x) D^3 + b^2 x ((27a-135b)x - a + 3b) D^2
///  - b ((9a^2-63ab+114b^2)x + ab - b^2) D + (a-3b)(a-2b)(a-b)`.
pub fn ode_family(a: i64, b: i64) -> Result<Ode, HypergeomError> {
    super::family_spec(a, b)?;
    let p = |c: &[i64]| UPoly::from_ints(c);
    let p3 = p(&[0, 0, b.pow(3), -27 * b.pow(3)]);
    let p2 = p(&[0, b * b * (3 * b - a), b * b * (27 * a - 135 * b)]);
    let p1 = p(&[-b * (a * b - b * b), -b * (9 * a * a - 63 * a * b + 114 * b * b)]);
    let p0 = p(&[(a - 3 * b) * (a - 2 * b) * (a - b)]);
    Ok(Ode::new(vec![p0, p1, p2, p3]))
}

/// `sum_k P_k f^{(k)}`, truncated where every term is still exact.
pub fn ode_apply(ode: &Ode, f: &UniSeries) -> Result<UniSeries, HypergeomError> {
    let r = ode.order();
    if f.order() < r {
        return Err(HypergeomError::InsufficientTruncation { have: f.order(), need: r });
    }
    let out_order = f.order() - r;
    let mut acc = UniSeries::zero(f.var(), out_order);
    let mut d = f.clone();
    for (k, p) in ode.coeffs.iter().enumerate() {
        if k > 0 {
            d = d.derivative();
        }
        let pk = UniSeries::from_poly(f.var(), p.coeffs(), out_order);
        acc = acc.add(&pk.mul(&d.truncate(out_order)));
    }
    Ok(acc)
}

/// Linear recurrence `sum_j Q_j S(n+j) = 0` with polynomial coefficients,
/// possibly in symbolic parameters besides the index variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    vars: Vec<String>,
    coeffs: Vec<MPoly>,
}

impl Recurrence {
    pub fn new(vars: Vec<String>, coeffs: Vec<MPoly>) -> Self {
        assert!(coeffs.last().is_some_and(|q| !q.is_zero()), "leading coefficient must be nonzero");
        Recurrence { vars, coeffs }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[MPoly] {
        &self.coeffs
    }

    fn point(&self, assign: &[(&str, Rational)]) -> Vec<Option<Rational>> {
        self.vars.iter().map(|v| assign.iter().find(|(n, _)| n == v).map(|(_, c)| c.clone())).collect()
    }

    /// Numeric coefficients at a full assignment of the variables.
    pub fn specialize(&self, assign: &[(&str, Rational)]) -> Vec<Rational> {
        let pt: Vec<Rational> = self.point(assign).into_iter().map(|c| c.expect("every variable assigned")).collect();
        self.coeffs.iter().map(|q| q.eval(&pt)).collect()
    }

    /// Coefficients as polynomials in `index` after fixing the other variables.
    pub fn in_index(&self, index: &str, assign: &[(&str, Rational)]) -> Vec<UPoly> {
        let pt = self.point(assign);
        let pos = self.vars.iter().position(|v| v == index).expect("index variable");
        self.coeffs
            .iter()
            .map(|q| {
                let mut out: Vec<Rational> = vec![];
                for (e, c) in q.terms() {
                    let mut c = c.clone();
                    for (i, &k) in e.iter().enumerate() {
                        if i != pos {
                            let v = pt[i].as_ref().expect("parameter assigned");
                            c *= crate::rational::pow(v, k);
                        }
                    }
                    let d = e[pos] as usize;
                    if out.len() <= d {
                        out.resize(d + 1, Rational::zero());
                    }
                    out[d] += c;
                }
                UPoly::new(out)
            })
            .collect()
    }

    /// Residuals `sum_j Q_j(n) s[n+j]` for every `n` with `n + order < s.len()`.
    pub fn residuals(&self, index: &str, assign: &[(&str, Rational)], s: &[Rational]) -> Vec<Rational> {
        let q = self.in_index(index, assign);
        let r = self.order();
        (0..s.len().saturating_sub(r))
            .map(|n| {
                let x = int(n as i64);
                (0..=r).map(|j| q[j].eval(&x) * &s[n + j]).sum()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeom::{family_recurrence, family_spec, hyp_series};
    use crate::rational::rat;

    #[test]
    fn family_operator_by_substitution() {
        let ode = ode_family(1, 3).unwrap();
        let c = ode.coeffs();
        assert_eq!(c[3], UPoly::from_ints(&[0, 0, 27, -729]));
        assert_eq!(c[2], UPoly::from_ints(&[0, 72, -3402]));
        assert_eq!(c[1], UPoly::from_ints(&[18, -2538]));
        assert_eq!(c[0], UPoly::from_ints(&[-80]));
        assert!(ode_family(1, 1).is_err());
    }

    #[test]
    fn annihilates_family_series() {
        for (a, b) in [(1, 3), (2, 3), (1, 7)] {
            let f = hyp_series(&family_spec(a, b).unwrap(), 40).unwrap();
            let r = ode_apply(&ode_family(a, b).unwrap(), &f).unwrap();
            assert!(r.order() >= 35 && r.is_zero(), "({a},{b})");
        }
    }

    #[test]
    fn simple_operators() {
        let mut fact = rat(1, 1);
        let e = UniSeries::from_fn("x", 10, |n| {
            if n > 0 {
                fact /= int(n as i64);
            }
            fact.clone()
        });
        let d_minus_1 = Ode::new(vec![UPoly::from_ints(&[-1]), UPoly::from_ints(&[1])]);
        assert!(ode_apply(&d_minus_1, &e).unwrap().is_zero());
        let d = Ode::new(vec![UPoly::zero(), UPoly::one()]);
        assert!(ode_apply(&d, &UniSeries::one("x", 5)).unwrap().is_zero());
        assert!(ode_apply(&ode_family(1, 3).unwrap(), &UniSeries::one("x", 2)).is_err());
    }

    #[test]
    fn recurrence_residuals() {
        let f = hyp_series(&family_spec(2, 3).unwrap(), 10).unwrap();
        let res = family_recurrence().residuals("n", &[("a", int(2)), ("b", int(3))], f.coeffs());
        assert_eq!(res.len(), 10);
        assert!(res.iter().all(|r| r.is_zero()));
    }
}
