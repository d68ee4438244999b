use std::fmt;

use num_traits::{One, Zero};

use super::{AlgExpr, ExprError, MPoly};
use crate::rational::{is_integer, to_i64, Rational};
use crate::series::{MultiSeries, SeriesError};

/// `num / (den[0] * den[1] * ...)` with the denominator kept factored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    vars: Vec<String>,
    num: MPoly,
    den: Vec<MPoly>,
}

impl RationalFunction {
    pub fn new(num: MPoly, den: Vec<MPoly>) -> Self {
        let vars = num.vars().to_vec();
        assert!(den.iter().all(|d| d.vars() == vars.as_slice() && !d.is_zero()));
        let den = den.into_iter().filter(|d| d.as_constant() != Some(Rational::one())).collect();
        RationalFunction { vars, num, den }
    }

    pub fn polynomial(p: MPoly) -> Self {
        Self::new(p, vec![])
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den_factors(&self) -> &[MPoly] {
        &self.den
    }

    pub fn den_product(&self) -> MPoly {
        self.den.iter().fold(MPoly::one(&self.vars), |acc, d| acc.mul(d))
    }

    /// Converts an expression without fractional powers.
    pub fn from_expr(e: &AlgExpr, vars: &[String]) -> Result<Self, ExprError> {
        Ok(match e {
            AlgExpr::Const(c) => Self::polynomial(MPoly::constant(vars, c.clone())),
            AlgExpr::Poly(p) => {
                Self::polynomial(p.with_vars(vars).ok_or_else(|| ExprError::NotRational("variables".into()))?)
            }
            AlgExpr::Add(children) => {
                let mut acc = Self::polynomial(MPoly::zero(vars));
                for c in children {
                    acc = acc.add(&Self::from_expr(c, vars)?);
                }
                acc
            }
            AlgExpr::Mul(children) => {
                let mut acc = Self::polynomial(MPoly::one(vars));
                for c in children {
                    acc = acc.mul(&Self::from_expr(c, vars)?);
                }
                acc
            }
            AlgExpr::Div(a, b) => Self::from_expr(a, vars)?.div(&Self::from_expr(b, vars)?)?,
            AlgExpr::PowRat(b, k) if is_integer(k) => {
                let base = Self::from_expr(b, vars)?;
                let k = to_i64(k).ok_or_else(|| ExprError::NotRational("exponent too large".into()))?;
                let mut acc = Self::polynomial(MPoly::one(vars));
                for _ in 0..k.unsigned_abs() {
                    acc = acc.mul(&base);
                }
                if k < 0 {
                    acc = Self::polynomial(MPoly::one(vars)).div(&acc)?;
                }
                acc
            }
            AlgExpr::PowRat(..) => {
                return Err(ExprError::NotRational("fractional power in a rational function".into()))
            }
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        let num = self.num.mul(&o.den_product()).add(&o.num.mul(&self.den_product()));
        let mut den = self.den.clone();
        den.extend(o.den.iter().cloned());
        Self::new(num, den)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut den = self.den.clone();
        den.extend(o.den.iter().cloned());
        Self::new(self.num.mul(&o.num), den)
    }

    pub fn div(&self, o: &Self) -> Result<Self, ExprError> {
        if o.num.is_zero() {
            return Err(ExprError::NotRational("division by zero".into()));
        }
        let mut den = self.den.clone();
        den.push(o.num.clone());
        Ok(Self::new(self.num.mul(&o.den_product()), den))
    }

    /// Equality as elements of the fraction field.
    pub fn same_function(&self, o: &Self) -> bool {
        let Some(onum) = o.num.with_vars(&self.vars) else { return false };
        let Some(oden) = o.den_product().with_vars(&self.vars) else { return false };
        self.num.mul(&oden) == onum.mul(&self.den_product())
    }

    /// Taylor expansion, dividing by one denominator factor at a time.
    pub fn expand(&self, trunc: &[u32]) -> Result<MultiSeries, SeriesError> {
        let mut s = MultiSeries::from_poly(&self.num, trunc)?;
        for d in &self.den {
            s = MultiSeries::from_poly(d, trunc)?.divide_into(&s)?;
        }
        Ok(s)
    }

    /// Value at the origin.
    pub fn constant_term(&self) -> Option<Rational> {
        let d = self.den_product().constant_term();
        (!d.is_zero()).then(|| self.num.constant_term() / d)
    }

    pub fn to_expr(&self) -> AlgExpr {
        let num = AlgExpr::poly(self.num.clone());
        if self.den.is_empty() {
            return num;
        }
        AlgExpr::div(num, AlgExpr::mul(self.den.iter().map(|d| AlgExpr::poly(d.clone())).collect()))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let den: Vec<String> = self.den.iter().map(|d| format!("({d})")).collect();
        write!(f, "({})/({})", self.num, den.join("*"))
    }
}
