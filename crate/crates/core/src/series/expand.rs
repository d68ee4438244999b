use num_traits::{One, Zero};

use super::{MultiSeries, SeriesError};
use crate::expr::{AlgExpr, ValidatedExpr};
use crate::rational::{is_integer, to_i64, Rational};

/// Taylor expansion of a validated expression on the box `trunc`.
pub fn expand(expr: &ValidatedExpr, trunc: &[u32]) -> Result<MultiSeries, SeriesError> {
    let vars = expr.vars();
    if trunc.len() != vars.len() {
        return Err(SeriesError::Mismatch);
    }
    go(expr.expr(), vars, trunc, PowerMethod::Recurrence)
}

/// Same as [`expand`] but rational powers are summed as the generalized
/// binomial series `sum_k binom(alpha, k) u^k`; slower, kept as an
/// independent route for cross-checking.
pub fn expand_binomial_reference(expr: &ValidatedExpr, trunc: &[u32]) -> Result<MultiSeries, SeriesError> {
    go(expr.expr(), expr.vars(), trunc, PowerMethod::Binomial)
}

#[derive(Clone, Copy)]
enum PowerMethod {
    Recurrence,
    Binomial,
}

fn go(e: &AlgExpr, vars: &[String], trunc: &[u32], method: PowerMethod) -> Result<MultiSeries, SeriesError> {
    match e {
        AlgExpr::Const(c) => MultiSeries::constant(vars, trunc, c.clone()),
        AlgExpr::Poly(p) => MultiSeries::from_poly(p, trunc),
        AlgExpr::Add(children) => {
            let mut acc = MultiSeries::zero(vars, trunc)?;
            for c in children {
                acc = acc.add(&go(c, vars, trunc, method)?)?;
            }
            Ok(acc)
        }
        AlgExpr::Mul(children) => {
            let mut acc = MultiSeries::constant(vars, trunc, Rational::one())?;
            for c in children {
                acc = acc.mul(&go(c, vars, trunc, method)?)?;
            }
            Ok(acc)
        }
        AlgExpr::Div(a, b) => {
            let num = go(a, vars, trunc, method)?;
            let den = go(b, vars, trunc, method)?;
            den.divide_into(&num)
        }
        AlgExpr::PowRat(b, alpha) => {
            let base = go(b, vars, trunc, method)?;
            if is_integer(alpha) {
                let k = to_i64(alpha).ok_or(SeriesError::TooLarge(usize::MAX))?;
                let p = base.pow(k.unsigned_abs() as u32)?;
                return if k < 0 { p.inverse() } else { Ok(p) };
            }
            match method {
                PowerMethod::Recurrence => base.pow_rational(alpha),
                PowerMethod::Binomial => binomial_series(&base, alpha),
            }
        }
    }
}

fn binomial_series(base: &MultiSeries, alpha: &Rational) -> Result<MultiSeries, SeriesError> {
    if !base.constant_term().is_one() {
        return Err(SeriesError::NotInvertible);
    }
    let mut u = base.clone();
    u.set(&vec![0; base.trunc().len()], Rational::zero());
    let max_deg: u32 = base.trunc().iter().sum();
    let mut acc = MultiSeries::constant(base.vars(), base.trunc(), Rational::one())?;
    let mut upow = acc.clone();
    // binom(alpha, k) = binom(alpha, k-1) * (alpha - k + 1) / k
    let mut coef = Rational::one();
    for k in 1..=max_deg {
        upow = upow.mul(&u)?;
        if upow.count_nonzero() == 0 {
            break;
        }
        coef = coef * (alpha - Rational::from_integer((k - 1).into())) / Rational::from_integer(k.into());
        acc = acc.add(&upow.scale(&coef))?;
    }
    Ok(acc)
}
