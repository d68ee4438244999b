//! Denef–Lipshitz construction: from an algebraic series in `n` variables to
//! a rational function in `2n` variables with the same diagonal.

mod fixture;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::expr::{AlgExpr, ExprError, MPoly, RationalFunction, ValidatedExpr};
use crate::rational::{is_integer, to_i64, Rational};
use crate::series::{expand, MultiSeries, SeriesError, UniSeries};

pub use fixture::{compare_fixture, six_var_fixture, FixtureComparison};

#[derive(Debug, Error)]
pub enum DlError {
    #[error("unsupported expression shape: {0}")]
    UnsupportedShape(String),
    #[error("the f-derivative of the shifted polynomial vanishes at the origin")]
    EtaleFailure,
    #[error("numerator is not divisible by {0}")]
    DivisionNotExact(String),
    #[error("variable name clash on `{0}`")]
    NameClash(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Polynomial `p(x_1..x_n, f)` vanishing at the target series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinPoly {
    base: Vec<String>,
    fvar: String,
    poly: MPoly,
}

impl MinPoly {
    pub fn new(base: Vec<String>, fvar: &str, poly: MPoly) -> Self {
        let mut ring = base.clone();
        ring.push(fvar.to_string());
        assert_eq!(poly.vars(), ring.as_slice());
        MinPoly { base, fvar: fvar.to_string(), poly }
    }

    pub fn base_vars(&self) -> &[String] {
        &self.base
    }

    pub fn fvar(&self) -> &str {
        &self.fvar
    }

    pub fn poly(&self) -> &MPoly {
        &self.poly
    }

    fn f_index(&self) -> usize {
        self.base.len()
    }

    /// `dp/df` at the origin.
    pub fn derivative_at_origin(&self) -> Rational {
        self.poly.derivative(self.f_index()).constant_term()
    }

    /// `p(x, s(x))` for a series `s` in the base variables.
    pub fn evaluate_at(&self, s: &MultiSeries) -> Result<MultiSeries, SeriesError> {
        let fi = self.f_index();
        let deg = self.poly.degree_in(fi);
        let mut acc = MultiSeries::zero(s.vars(), s.trunc())?;
        for k in (0..=deg).rev() {
            let mut ck = MPoly::zero(&self.base);
            for (e, c) in self.poly.terms() {
                if e[fi] == k {
                    ck.add_term(e[..fi].to_vec(), c.clone());
                }
            }
            acc = acc.mul(s)?.add(&MultiSeries::from_poly(&ck, s.trunc())?)?;
        }
        Ok(acc)
    }
}

/// Factors of an expression `P^(a/b) * R / Q`.
struct Shape {
    base: Option<MPoly>,
    alpha: Rational,
    num: MPoly,
    den: MPoly,
}

fn collect(e: &AlgExpr, vars: &[String], upstairs: bool, sh: &mut Shape) -> Result<(), DlError> {
    let unsupported = || DlError::UnsupportedShape(format!("{e}"));
    if let Some(p) = e.as_poly(vars) {
        let p = p.with_vars(vars).ok_or_else(unsupported)?;
        if upstairs {
            sh.num = sh.num.mul(&p);
        } else {
            sh.den = sh.den.mul(&p);
        }
        return Ok(());
    }
    match e {
        AlgExpr::Mul(children) => children.iter().try_for_each(|c| collect(c, vars, upstairs, sh)),
        AlgExpr::Div(a, b) => {
            collect(a, vars, upstairs, sh)?;
            collect(b, vars, !upstairs, sh)
        }
        AlgExpr::PowRat(b, k) => {
            let p = b.as_poly(vars).and_then(|p| p.with_vars(vars)).ok_or_else(unsupported)?;
            let k = if upstairs { k.clone() } else { -k.clone() };
            if is_integer(&k) {
                let n = to_i64(&k).ok_or_else(unsupported)?;
                let pk = p.pow(n.unsigned_abs() as u32);
                if n >= 0 {
                    sh.num = sh.num.mul(&pk);
                } else {
                    sh.den = sh.den.mul(&pk);
                }
                return Ok(());
            }
            match &sh.base {
                Some(q) if *q != p => return Err(unsupported()),
                _ => sh.base = Some(p),
            }
            sh.alpha += k;
            Ok(())
        }
        _ => Err(unsupported()),
    }
}

fn fresh_name(taken: &[String], preferred: &str) -> String {
    let mut name = preferred.to_string();
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

/// `(Q f)^b - R^b P^a` for `f = P^(a/b) R / Q` (with `P^|a|` moved to the
/// other side when `a < 0`). For `b > 1` the factor `Q` is written with a
/// positive leading coefficient.
pub fn build_minpoly(expr: &ValidatedExpr) -> Result<MinPoly, DlError> {
    let vars = expr.vars();
    let mut sh = Shape { base: None, alpha: Rational::zero(), num: MPoly::one(vars), den: MPoly::one(vars) };
    collect(expr.expr(), vars, true, &mut sh)?;
    let fvar = fresh_name(vars, "f");
    let mut ring = vars.to_vec();
    ring.push(fvar.clone());
    let emb = |p: &MPoly| p.with_vars(&ring).expect("superset ring");
    let f = MPoly::var(&ring, vars.len());
    let (a, b) = match (&sh.base, is_integer(&sh.alpha)) {
        (Some(_), false) => (sh.alpha.numer().clone(), sh.alpha.denom().clone()),
        _ => (num_bigint::BigInt::zero(), num_bigint::BigInt::one()),
    };
    let b_u32: u32 = b.try_into().map_err(|_| DlError::UnsupportedShape("exponent denominator too large".into()))?;
    let a_abs: u32 =
        a.abs().try_into().map_err(|_| DlError::UnsupportedShape("exponent numerator too large".into()))?;
    let pa = sh.base.as_ref().map(|p| emb(p).pow(a_abs)).unwrap_or_else(|| MPoly::one(&ring));
    let mut q = emb(&sh.den);
    let mut sign = Rational::one();
    if b_u32 > 1 && q.terms().last().is_some_and(|(_, c)| c.is_negative()) {
        q = q.neg();
        if b_u32.is_odd() {
            sign = -sign;
        }
    }
    let lhs = q.mul(&f).pow(b_u32);
    let rhs = emb(&sh.num).pow(b_u32).scale(&sign);
    let poly = if a.is_negative() { lhs.mul(&pa).sub(&rhs) } else { lhs.sub(&rhs.mul(&pa)) };
    Ok(MinPoly::new(vars.to_vec(), &fvar, poly))
}

/// `p(x, f + f0)`; fails unless the result is étale at the origin.
pub fn etale_shift(mp: &MinPoly, f0: &Rational) -> Result<MinPoly, DlError> {
    let ring = mp.poly.vars().to_vec();
    let fi = mp.f_index();
    let images: Vec<MPoly> = (0..ring.len())
        .map(|i| {
            let v = MPoly::var(&ring, i);
            if i == fi {
                v.add(&MPoly::constant(&ring, f0.clone()))
            } else {
                v
            }
        })
        .collect();
    let shifted = MinPoly { poly: mp.poly.substitute(&images), ..mp.clone() };
    if !shifted.poly.constant_term().is_zero() {
        return Err(DlError::UnsupportedShape(format!("{f0} is not a root of the polynomial at the origin")));
    }
    if shifted.derivative_at_origin().is_zero() {
        return Err(DlError::EtaleFailure);
    }
    Ok(shifted)
}

/// `r = f^2 p~_f(xf, f) / p~(xf, f) + f0`, with the common factor `f`
/// cancelled so the denominator is a unit at the origin.
pub fn dl_rational(shifted: &MinPoly, f0: &Rational) -> Result<RationalFunction, DlError> {
    let ring = shifted.poly.vars().to_vec();
    let fi = shifted.f_index();
    let f = MPoly::var(&ring, fi);
    let images: Vec<MPoly> =
        (0..ring.len()).map(|i| if i == fi { f.clone() } else { MPoly::var(&ring, i).mul(&f) }).collect();
    let p_sub = shifted.poly.substitute(&images);
    if p_sub.var_content(fi) == 0 {
        return Err(DlError::DivisionNotExact(shifted.fvar.clone()));
    }
    let q = p_sub.shift_down(fi, 1);
    if q.constant_term().is_zero() {
        return Err(DlError::EtaleFailure);
    }
    let dp = shifted.poly.derivative(fi).substitute(&images);
    let num = f.mul(&dp).add(&q.scale(f0));
    Ok(RationalFunction::new(num, vec![q]))
}

/// `(u r(.., u) - v r(.., v)) / (u - v)` where `r` is a function of `t`;
/// the result lives over the other variables followed by `u`, `v`.
pub fn dl_double(r: &RationalFunction, t: &str, u: &str, v: &str) -> Result<RationalFunction, DlError> {
    let old = r.vars();
    let ti = old.iter().position(|w| w == t).ok_or_else(|| DlError::Series(SeriesError::UnknownVariable(t.into())))?;
    let mut ring: Vec<String> = old.iter().filter(|w| *w != t).cloned().collect();
    for n in [u, v] {
        if ring.iter().any(|w| w == n) || u == v {
            return Err(DlError::NameClash(n.to_string()));
        }
    }
    ring.push(u.to_string());
    ring.push(v.to_string());
    let images = |target: &str| -> Vec<MPoly> {
        old.iter()
            .enumerate()
            .map(|(i, w)| MPoly::var_named(&ring, if i == ti { target } else { w }).unwrap())
            .collect()
    };
    let (iu, iv) = (images(u), images(v));
    let nu = r.num().substitute(&iu);
    let nv = r.num().substitute(&iv);
    let du: Vec<MPoly> = r.den_factors().iter().map(|d| d.substitute(&iu)).collect();
    let dv: Vec<MPoly> = r.den_factors().iter().map(|d| d.substitute(&iv)).collect();
    // lcm of the factor lists by structural equality
    let mut matched = vec![false; du.len()];
    let mut v_only = vec![];
    for d in &dv {
        match (0..du.len()).find(|&i| !matched[i] && du[i] == *d) {
            Some(i) => matched[i] = true,
            None => v_only.push(d.clone()),
        }
    }
    let u_only: Vec<MPoly> = du.iter().zip(&matched).filter(|(_, m)| !**m).map(|(d, _)| d.clone()).collect();
    let prod = |fs: &[MPoly]| fs.iter().fold(MPoly::one(&ring), |acc, d| acc.mul(d));
    let uu = MPoly::var_named(&ring, u).unwrap();
    let vv = MPoly::var_named(&ring, v).unwrap();
    let numer = uu.mul(&nu).mul(&prod(&v_only)).sub(&vv.mul(&nv).mul(&prod(&u_only)));
    let diff = uu.sub(&vv);
    let q = numer.div_exact(&diff).ok_or_else(|| DlError::DivisionNotExact(format!("{u} - {v}")))?;
    let mut den = du;
    den.extend(v_only);
    Ok(RationalFunction::new(q, den))
}

/// Everything produced by [`dl_full`].
#[derive(Clone, Debug)]
pub struct DlResult {
    pub minpoly: MinPoly,
    pub shifted: MinPoly,
    pub shift: Rational,
    /// Rational function in `n + 1` variables whose `D`-operator image is the series.
    pub r: RationalFunction,
    /// Rational function in `2n` variables.
    pub function: RationalFunction,
    pub pairs: Vec<(String, String)>,
}

#[derive(Serialize)]
struct Header<'a> {
    pairs: Vec<[&'a str; 2]>,
    shift: String,
}

impl DlResult {
    /// `{"pairs": [["x","u"], ...], "shift": "1"}`
    pub fn header_json(&self) -> String {
        let h = Header {
            pairs: self.pairs.iter().map(|(a, b)| [a.as_str(), b.as_str()]).collect(),
            shift: self.shift.to_string(),
        };
        serde_json::to_string(&h).expect("serialisable")
    }

    /// Diagonal of the `2n`-variable function through `n_max`.
    pub fn full_diagonal(&self, n_max: u32) -> Result<UniSeries, SeriesError> {
        let trunc = vec![n_max; self.function.vars().len()];
        Ok(self.function.expand(&trunc)?.diagonal("x"))
    }

    /// Partial diagonal over the pairs; equals the original series on `trunc`.
    pub fn reconstruct(&self, trunc: &[u32]) -> Result<MultiSeries, SeriesError> {
        let vars = self.function.vars();
        let full: Vec<u32> = vars
            .iter()
            .map(|v| {
                let i = self.pairs.iter().position(|(a, b)| a == v || b == v).expect("paired variable");
                trunc[i]
            })
            .collect();
        self.function.expand(&full)?.partial_diagonal(&self.pairs)
    }
}

fn doubled_names(base: &[String], extra: &[String]) -> Vec<String> {
    let n = base.len();
    let mut taken: Vec<String> = base.iter().chain(extra).cloned().collect();
    let preferred: Vec<String> = if n <= 3 {
        ["u", "v", "w"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("u{i}")).collect()
    };
    preferred
        .into_iter()
        .map(|p| {
            let name = fresh_name(&taken, &p);
            taken.push(name.clone());
            name
        })
        .collect()
}

/// Full pipeline: minimal polynomial, étale shift, `r`, then `n - 1`
/// doubling steps; the `i`-th base variable pairs with the `i`-th new one.
pub fn dl_full(expr: &ValidatedExpr) -> Result<DlResult, DlError> {
    let base = expr.vars().to_vec();
    if base.is_empty() {
        return Err(DlError::UnsupportedShape("no variables".into()));
    }
    let minpoly = build_minpoly(expr)?;
    let f0 = expand(expr, &vec![0; base.len()])?.constant_term().clone();
    let shifted = etale_shift(&minpoly, &f0)?;
    let r = dl_rational(&shifted, &f0)?;
    let names = doubled_names(&base, &[minpoly.fvar.clone()]);
    let mut cur = r.clone();
    if base.len() == 1 {
        cur = dl_rename(&cur, &minpoly.fvar, &names[0]);
    } else {
        cur = dl_double(&cur, &minpoly.fvar, &names[0], &names[1])?;
        for k in 1..base.len() - 1 {
            cur = dl_double(&cur, &names[k], &names[k], &names[k + 1])?;
        }
    }
    let pairs = base.iter().cloned().zip(names).collect();
    Ok(DlResult { minpoly, shifted, shift: f0, r, function: cur, pairs })
}

fn dl_rename(r: &RationalFunction, from: &str, to: &str) -> RationalFunction {
    let ring: Vec<String> = r.vars().iter().map(|w| if w == from { to.to_string() } else { w.clone() }).collect();
    let images: Vec<MPoly> = (0..ring.len()).map(|i| MPoly::var(&ring, i)).collect();
    RationalFunction::new(r.num().substitute(&images), r.den_factors().iter().map(|d| d.substitute(&images)).collect())
}
