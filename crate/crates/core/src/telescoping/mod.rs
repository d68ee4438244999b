//! Gosper's algorithm and Zeilberger's creative telescoping for proper
//! hypergeometric terms built from linear factors.

mod kpoly;
mod term;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::expr::{var_names, MPoly, RationalFunction};
use crate::hypergeom::Recurrence;
use crate::poly1::{RatFun, UPoly};
use crate::rational::{int, is_integer, Rational};

use kpoly::{kernel_vector, normalize, KPoly};
pub use term::{family_summand, Factor, HyperTerm, Lin, LinRatio};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZeilbergerError {
    #[error("no telescoping recurrence of order at most {0}")]
    OrderExceeded(usize),
    #[error("certificate has a pole at (n, k) = ({0}, {1})")]
    PoleOnGrid(i64, i64),
    #[error("term undefined at (n, k) = ({0}, {1})")]
    Undefined(i64, i64),
}

/// `sum_j sigma_j(n) F(n+j, k) = G(n, k+1) - G(n, k)` with `G = R F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Telescoper {
    pub sigma: Vec<UPoly>,
    /// `R(n, k)` over the variables `n, k`.
    pub certificate: RationalFunction,
}

impl Telescoper {
    pub fn order(&self) -> usize {
        self.sigma.len() - 1
    }

    /// `sum_j sigma_j(n) S(n+j) = 0` as a recurrence over `n`.
    pub fn recurrence(&self) -> Recurrence {
        let v = var_names(&["n"]);
        Recurrence::new(v.clone(), self.sigma.iter().map(|p| upoly_to_mpoly(p, &v, 0)).collect())
    }

    /// Coefficients as expression-grammar strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.sigma.iter().map(|p| p.display_in("n")).collect()
    }

    pub fn certificate_at(&self, n: i64, k: i64) -> Option<Rational> {
        let pt = [int(n), int(k)];
        let d = self.certificate.den_product().eval(&pt);
        (!d.is_zero()).then(|| self.certificate.num().eval(&pt) / d)
    }
}

/// Result of [`gosper`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GosperResult {
    /// `G = R t` satisfies `G(k+1) - G(k) = t(k)`.
    Summable(RationalFunction),
    NoHypergeometricAntidifference,
}

fn upoly_to_mpoly(p: &UPoly, vars: &[String], idx: usize) -> MPoly {
    let mut out = MPoly::zero(vars);
    for (i, c) in p.coeffs().iter().enumerate() {
        let mut e = vec![0; vars.len()];
        e[idx] = i as u32;
        out.add_term(e, c.clone());
    }
    out
}

/// `p(n, k)` with the coefficients' common denominator `D(n)` split off.
fn kpoly_to_mpoly(p: &KPoly, vars: &[String]) -> (MPoly, MPoly) {
    let mut d = UPoly::one();
    for c in p.coeffs() {
        d = d.mul(&c.den().div_exact(&d.gcd(c.den())).unwrap());
    }
    let mut out = MPoly::zero(vars);
    for (i, c) in p.coeffs().iter().enumerate() {
        let q = c.num().mul(&d.div_exact(c.den()).unwrap());
        for (j, a) in q.coeffs().iter().enumerate() {
            out.add_term(vec![j as u32, i as u32], a.clone());
        }
    }
    (out, upoly_to_mpoly(&d, vars, 0))
}

fn lin_ratfun(l: &Lin) -> RatFun {
    RatFun::from_poly(UPoly::linear(l.n.clone(), l.c.clone()))
}

/// Multiset union with maximal multiplicities.
fn lcm_lists(lists: &[Vec<Lin>]) -> Vec<Lin> {
    let mut out: Vec<Lin> = vec![];
    for l in lists {
        let mut pool = out.clone();
        for f in l {
            if let Some(i) = pool.iter().position(|g| g == f) {
                pool.remove(i);
            } else {
                out.push(f.clone());
            }
        }
    }
    out
}

fn list_minus(a: &[Lin], b: &[Lin]) -> Vec<Lin> {
    let mut out = a.to_vec();
    for f in b {
        let i = out.iter().position(|g| g == f).expect("sub-multiset");
        out.remove(i);
    }
    out
}

struct GosperForm {
    a: KPoly,
    b: KPoly,
    c: KPoly,
}

/// Gosper–Petkovšek form `r(k) = a(k)/b(k) * c(k+1)/c(k)` of a ratio of
/// linear forms, with `gcd(a(k), b(k+h)) = 1` for all `h >= 0`.
fn gosper_form(r: &LinRatio) -> GosperForm {
    let mut z = RatFun::constant(r.constant.clone());
    let mut num = vec![];
    let mut den = vec![];
    for l in &r.num {
        if l.k.is_zero() {
            z = z.mul(&lin_ratfun(l));
        } else {
            num.push(l.clone());
        }
    }
    for l in &r.den {
        if l.k.is_zero() {
            z = z.div(&lin_ratfun(l));
        } else {
            den.push(l.clone());
        }
    }
    let mut c = vec![];
    'outer: loop {
        for i in 0..num.len() {
            for j in 0..den.len() {
                let (f, g) = (&num[i], &den[j]);
                if f.n != g.n {
                    continue;
                }
                let h = &f.c - &g.c;
                if is_integer(&h) && h >= Rational::zero() {
                    let h = h.to_integer().to_i64().expect("small dispersion");
                    for s in 0..h {
                        c.push(g.shift_k(s));
                    }
                    num.remove(i);
                    den.remove(j);
                    continue 'outer;
                }
            }
        }
        break;
    }
    GosperForm { a: KPoly::product(&num).scale(&z), b: KPoly::product(&den), c: KPoly::product(&c) }
}

/// Candidate degree for `x` in `a(k) x(k+1) - b(k-1) x(k) = p(k)`.
fn degree_bound(a: &KPoly, b1: &KPoly, deg_p: usize) -> Option<usize> {
    let minus = a.sub(b1);
    let plus = a.add(b1);
    let dp = deg_p as i64;
    match (minus.degree(), plus.degree()) {
        (Some(dm), Some(dpl)) if dm >= dpl => usize::try_from(dp - dm as i64).ok(),
        (_, Some(l)) => {
            let mut d = dp - l as i64 + 1;
            if l > 0 {
                let big_l = plus.coeff(l);
                let l1 = minus.coeff(l - 1);
                let q = l1.mul(&RatFun::constant(int(-2))).div(&big_l);
                if q.den().degree() == Some(0) {
                    if let Some(c) = q.num().as_constant() {
                        let c = c / q.den().lc();
                        if is_integer(&c) {
                            d = d.max(c.to_integer().to_i64().unwrap_or(i64::MIN));
                        }
                    }
                }
            }
            usize::try_from(d).ok()
        }
        (Some(dm), None) => usize::try_from(dp - dm as i64).ok(),
        (None, None) => None,
    }
}

struct Solution {
    sigma: Vec<RatFun>,
    x: KPoly,
    b1: KPoly,
    c: KPoly,
    big_b: KPoly,
}

/// Tries `sum_{j<=order} sigma_j F(n+j, k)` for a hypergeometric
/// antidifference in `k`.
fn try_order(term: &HyperTerm, order: usize) -> Option<Solution> {
    let kr = term.k_ratio();
    let nr = term.n_ratio();
    let mut shifts: Vec<LinRatio> = vec![LinRatio::one()];
    for j in 1..=order {
        let mut r = shifts[j - 1].clone();
        let step = LinRatio {
            constant: nr.constant.clone(),
            num: nr.num.iter().map(|l| l.shift_n(j as i64 - 1)).collect(),
            den: nr.den.iter().map(|l| l.shift_n(j as i64 - 1)).collect(),
        };
        r.mul(&step);
        r.reduce();
        shifts.push(r);
    }
    let big_b_list = lcm_lists(&shifts.iter().map(|s| s.den.clone()).collect::<Vec<_>>());
    let terms: Vec<KPoly> = shifts
        .iter()
        .map(|s| {
            let mut lins = s.num.clone();
            lins.extend(list_minus(&big_b_list, &s.den));
            KPoly::product(&lins).scale(&RatFun::constant(s.constant.clone()))
        })
        .collect();
    let mut ratio = kr.clone();
    ratio.num.extend(big_b_list.iter().cloned());
    ratio.den.extend(big_b_list.iter().map(|l| l.shift_k(1)));
    ratio.reduce();
    let gf = gosper_form(&ratio);
    let b1 = gf.b.shift(-1);
    let deg_p = gf.c.degree().unwrap_or(0) + terms.iter().filter_map(|t| t.degree()).max().unwrap_or(0);
    let d = degree_bound(&gf.a, &b1, deg_p)?;
    let mut cols: Vec<KPoly> =
        (0..=d).map(|i| gf.a.mul(&KPoly::monomial(i).shift(1)).sub(&b1.mul(&KPoly::monomial(i)))).collect();
    cols.extend(terms.iter().map(|t| gf.c.mul(t).scale(&RatFun::constant(int(-1)))));
    let nrows = cols.iter().filter_map(|c| c.degree()).max().unwrap_or(0) + 1;
    let m: Vec<Vec<RatFun>> = (0..nrows).map(|r| cols.iter().map(|c| c.coeff(r)).collect()).collect();
    let ncols = cols.len();
    let required: Vec<usize> = (d + 1..ncols).collect();
    let v = kernel_vector(&m, ncols, &required)?;
    let v = normalize(&v, &required);
    Some(Solution {
        sigma: v[d + 1..].to_vec(),
        x: KPoly::new(v[..=d].to_vec()),
        b1,
        c: gf.c,
        big_b: KPoly::product(&big_b_list),
    })
}

fn certificate_of(sol: &Solution) -> RationalFunction {
    let vars = var_names(&["n", "k"]);
    let (num, dx) = kpoly_to_mpoly(&sol.b1.mul(&sol.x), &vars);
    let (cb, dcb) = kpoly_to_mpoly(&sol.c.mul(&sol.big_b), &vars);
    RationalFunction::new(num.mul(&dcb), vec![cb, dx])
}

/// Gosper's algorithm for a term in `k` alone.
pub fn gosper(term: &HyperTerm) -> GosperResult {
    match try_order(term, 0) {
        Some(sol) => {
            let mut r = certificate_of(&sol);
            let s0 = &sol.sigma[0];
            r = RationalFunction::new(
                r.num().mul(&upoly_to_mpoly(s0.den(), r.vars(), 0)),
                r.den_factors().iter().cloned().chain(std::iter::once(upoly_to_mpoly(s0.num(), r.vars(), 0))).collect(),
            );
            GosperResult::Summable(r)
        }
        None => GosperResult::NoHypergeometricAntidifference,
    }
}

/// Creative telescoping: the first order `1..=max_order` that admits a
/// certificate.
pub fn zeilberger(term: &HyperTerm, max_order: usize) -> Result<Telescoper, ZeilbergerError> {
    for order in 1..=max_order {
        if let Some(sol) = try_order(term, order) {
            let sigma = sol.sigma.iter().map(|s| s.num().clone()).collect();
            return Ok(Telescoper { sigma, certificate: certificate_of(&sol) });
        }
    }
    Err(ZeilbergerError::OrderExceeded(max_order))
}

/// Grid points of `[0, n_max] x [k_lo, k_hi]` where the certificate is finite.
pub fn pole_free_grid(tel: &Telescoper, n_max: i64, k_lo: i64, k_hi: i64) -> Vec<(i64, i64)> {
    (0..=n_max)
        .flat_map(|n| (k_lo..=k_hi).map(move |k| (n, k)))
        .filter(|&(n, k)| tel.certificate_at(n, k).is_some() && tel.certificate_at(n, k + 1).is_some())
        .collect()
}

/// Checks the telescoping identity at every grid point and the recurrence
/// on brute-force sums `S(n) = sum_{k in bounds(n)} F(n, k)` for `n <= n_max`.
pub fn certificate_verify(
    term: &HyperTerm,
    tel: &Telescoper,
    grid: &[(i64, i64)],
    n_max: i64,
    bounds: impl Fn(i64) -> (i64, i64),
) -> Result<bool, ZeilbergerError> {
    let ev = |n: i64, k: i64| term.eval(n, k).ok_or(ZeilbergerError::Undefined(n, k));
    for &(n, k) in grid {
        let nn = int(n);
        let mut lhs = Rational::zero();
        for (j, s) in tel.sigma.iter().enumerate() {
            lhs += s.eval(&nn) * ev(n + j as i64, k)?;
        }
        let r0 = tel.certificate_at(n, k).ok_or(ZeilbergerError::PoleOnGrid(n, k))?;
        let r1 = tel.certificate_at(n, k + 1).ok_or(ZeilbergerError::PoleOnGrid(n, k + 1))?;
        if lhs != r1 * ev(n, k + 1)? - r0 * ev(n, k)? {
            return Ok(false);
        }
    }
    let r = tel.order() as i64;
    let sums: Vec<Rational> = (0..=n_max + r)
        .map(|n| {
            let (lo, hi) = bounds(n);
            term.sum(n, lo, hi).ok_or(ZeilbergerError::Undefined(n, lo))
        })
        .collect::<Result<_, _>>()?;
    for n in 0..=n_max {
        let nn = int(n);
        let v: Rational = tel.sigma.iter().enumerate().map(|(j, s)| s.eval(&nn) * &sums[(n + j as i64) as usize]).sum();
        if !v.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `sigma` and `q` describe the same recurrence up to a factor in Q(n).
pub fn same_recurrence(sigma: &[UPoly], q: &[UPoly]) -> bool {
    if sigma.len() != q.len() {
        return false;
    }
    (0..sigma.len()).all(|i| (0..sigma.len()).all(|j| sigma[i].mul(&q[j]) == sigma[j].mul(&q[i])))
}

#[cfg(test)]
mod tests;
