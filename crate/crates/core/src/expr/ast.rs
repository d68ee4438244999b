use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use super::mpoly::MPoly;
use super::ExprError;
use crate::rational::{is_integer, to_i64, Rational};

/// Algebraic-function expression tree.
///
/// Values built through the constructor functions ([`AlgExpr::add`],
/// [`AlgExpr::mul`], ...) are kept in a normal form: polynomial parts are
/// folded into a single `Poly` node, constants never appear as `Poly`,
/// and negative integer powers become divisions.
#[derive(Clone, Debug, PartialEq)]
pub enum AlgExpr {
    Const(Rational),
    Poly(MPoly),
    Add(Vec<AlgExpr>),
    Mul(Vec<AlgExpr>),
    Div(Box<AlgExpr>, Box<AlgExpr>),
    /// `base^exponent`; the exponent is stored in lowest terms.
    PowRat(Box<AlgExpr>, Rational),
}

impl AlgExpr {
    pub fn constant(c: Rational) -> AlgExpr {
        AlgExpr::Const(c)
    }

    /// Wraps a polynomial, demoting constants to `Const`.
    pub fn poly(p: MPoly) -> AlgExpr {
        match p.as_constant() {
            Some(c) => AlgExpr::Const(c),
            None => AlgExpr::Poly(p),
        }
    }

    /// Polynomial view of a `Const` or `Poly` node.
    pub fn as_poly(&self, vars: &[String]) -> Option<MPoly> {
        match self {
            AlgExpr::Const(c) => Some(MPoly::constant(vars, c.clone())),
            AlgExpr::Poly(p) => Some(p.clone()),
            _ => None,
        }
    }

    fn ring_of(children: &[AlgExpr]) -> Option<Vec<String>> {
        fn find(e: &AlgExpr) -> Option<Vec<String>> {
            match e {
                AlgExpr::Const(_) => None,
                AlgExpr::Poly(p) => Some(p.vars().to_vec()),
                AlgExpr::Add(c) | AlgExpr::Mul(c) => c.iter().find_map(find),
                AlgExpr::Div(a, b) => find(a).or_else(|| find(b)),
                AlgExpr::PowRat(b, _) => find(b),
            }
        }
        children.iter().find_map(find)
    }

    pub fn add(children: Vec<AlgExpr>) -> AlgExpr {
        let mut flat = Vec::new();
        for c in children {
            match c {
                AlgExpr::Add(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        let vars = Self::ring_of(&flat).unwrap_or_default();
        let mut out: Vec<AlgExpr> = Vec::new();
        let mut poly_slot: Option<usize> = None;
        let mut acc = MPoly::zero(&vars);
        for c in flat {
            if let Some(p) = c.as_poly(&vars) {
                acc = acc.add(&p);
                if poly_slot.is_none() {
                    poly_slot = Some(out.len());
                    out.push(AlgExpr::Const(Rational::zero()));
                }
            } else {
                out.push(c);
            }
        }
        if let Some(i) = poly_slot {
            if acc.is_zero() && out.len() > 1 {
                out.remove(i);
            } else {
                out[i] = AlgExpr::poly(acc);
            }
        }
        match out.len() {
            0 => AlgExpr::Const(Rational::zero()),
            1 => out.pop().unwrap(),
            _ => AlgExpr::Add(out),
        }
    }

    pub fn mul(children: Vec<AlgExpr>) -> AlgExpr {
        let mut flat = Vec::new();
        for c in children {
            match c {
                AlgExpr::Mul(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        let vars = Self::ring_of(&flat).unwrap_or_default();
        let mut out: Vec<AlgExpr> = Vec::new();
        let mut poly_slot: Option<usize> = None;
        let mut acc = MPoly::one(&vars);
        for c in flat {
            if let Some(p) = c.as_poly(&vars) {
                acc = acc.mul(&p);
                if poly_slot.is_none() {
                    poly_slot = Some(out.len());
                    out.push(AlgExpr::Const(Rational::one()));
                }
            } else {
                out.push(c);
            }
        }
        if acc.is_zero() {
            return AlgExpr::Const(Rational::zero());
        }
        if let Some(i) = poly_slot {
            if acc.as_constant().is_some_and(|c| c.is_one()) && out.len() > 1 {
                out.remove(i);
            } else {
                out[i] = AlgExpr::poly(acc);
            }
        }
        match out.len() {
            0 => AlgExpr::Const(Rational::one()),
            1 => out.pop().unwrap(),
            _ => AlgExpr::Mul(out),
        }
    }

    pub fn sub(a: AlgExpr, b: AlgExpr) -> AlgExpr {
        AlgExpr::add(vec![a, AlgExpr::neg(b)])
    }

    pub fn neg(a: AlgExpr) -> AlgExpr {
        AlgExpr::mul(vec![a, AlgExpr::Const(-Rational::one())])
    }

    pub fn div(num: AlgExpr, den: AlgExpr) -> AlgExpr {
        if let AlgExpr::Const(c) = &den {
            if !c.is_zero() {
                return AlgExpr::mul(vec![num, AlgExpr::Const(c.recip())]);
            }
        }
        AlgExpr::Div(Box::new(num), Box::new(den))
    }

    /// `base^exponent` with the normal-form rewrites applied.
    pub fn pow(base: AlgExpr, exponent: Rational) -> AlgExpr {
        if is_integer(&exponent) {
            let k = to_i64(&exponent).expect("integer exponent out of range");
            if k == 0 {
                return AlgExpr::Const(Rational::one());
            }
            if k < 0 {
                let pos = AlgExpr::pow(base, Rational::from_integer((-k).into()));
                return AlgExpr::div(AlgExpr::Const(Rational::one()), pos);
            }
            if let AlgExpr::Const(c) = &base {
                return AlgExpr::Const(crate::rational::pow(c, k as u32));
            }
            if let AlgExpr::Poly(p) = &base {
                return AlgExpr::poly(p.pow(k as u32));
            }
            if k == 1 {
                return base;
            }
        }
        AlgExpr::PowRat(Box::new(base), exponent)
    }

    /// Re-embeds every polynomial node into the ring over `vars`.
    pub fn with_vars(&self, vars: &[String]) -> Result<AlgExpr, ExprError> {
        Ok(match self {
            AlgExpr::Const(c) => AlgExpr::Const(c.clone()),
            AlgExpr::Poly(p) => AlgExpr::Poly(
                p.with_vars(vars).ok_or_else(|| ExprError::UnknownVariable { name: p.vars().join(","), offset: 0 })?,
            ),
            AlgExpr::Add(c) => AlgExpr::Add(c.iter().map(|e| e.with_vars(vars)).collect::<Result<_, _>>()?),
            AlgExpr::Mul(c) => AlgExpr::Mul(c.iter().map(|e| e.with_vars(vars)).collect::<Result<_, _>>()?),
            AlgExpr::Div(a, b) => AlgExpr::Div(Box::new(a.with_vars(vars)?), Box::new(b.with_vars(vars)?)),
            AlgExpr::PowRat(b, q) => AlgExpr::PowRat(Box::new(b.with_vars(vars)?), q.clone()),
        })
    }

    /// Value at the origin, or the first validation failure met on the way.
    pub fn constant_term(&self) -> Result<Rational, ExprError> {
        match self {
            AlgExpr::Const(c) => Ok(c.clone()),
            AlgExpr::Poly(p) => Ok(p.constant_term()),
            AlgExpr::Add(c) => c.iter().try_fold(Rational::zero(), |acc, e| Ok(acc + e.constant_term()?)),
            AlgExpr::Mul(c) => c.iter().try_fold(Rational::one(), |acc, e| Ok(acc * e.constant_term()?)),
            AlgExpr::Div(a, b) => {
                let d = b.constant_term()?;
                if d.is_zero() {
                    return Err(ExprError::DenominatorVanishesAtOrigin { denominator: b.to_string() });
                }
                Ok(a.constant_term()? / d)
            }
            AlgExpr::PowRat(b, q) => {
                let c = b.constant_term()?;
                if is_integer(q) {
                    let k = to_i64(q).expect("integer exponent out of range");
                    if k < 0 && c.is_zero() {
                        return Err(ExprError::DenominatorVanishesAtOrigin { denominator: b.to_string() });
                    }
                    let base = if k < 0 { c.recip() } else { c };
                    Ok(crate::rational::pow(&base, k.unsigned_abs() as u32))
                } else if c.is_one() {
                    Ok(Rational::one())
                } else {
                    Err(ExprError::PowBaseConstantTermNotOne { constant: c })
                }
            }
        }
    }

    /// Simultaneous substitution of variables by expressions over the same ring.
    ///
    /// Polynomial nodes stay polynomial when every binding they touch is
    /// polynomial; otherwise they are rebuilt as sums of products.
    pub fn substitute(&self, vars: &[String], bindings: &HashMap<String, AlgExpr>) -> Result<AlgExpr, ExprError> {
        for name in bindings.keys() {
            if !vars.contains(name) {
                return Err(ExprError::UnknownBinding(name.clone()));
            }
        }
        self.subst_inner(vars, bindings)
    }

    fn subst_inner(&self, vars: &[String], bindings: &HashMap<String, AlgExpr>) -> Result<AlgExpr, ExprError> {
        Ok(match self {
            AlgExpr::Const(c) => AlgExpr::Const(c.clone()),
            AlgExpr::Poly(p) => {
                let images: Vec<AlgExpr> = p
                    .vars()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| bindings.get(v).cloned().unwrap_or_else(|| AlgExpr::Poly(MPoly::var(p.vars(), i))))
                    .collect();
                let polys: Option<Vec<MPoly>> = images.iter().map(|e| e.as_poly(p.vars())).collect();
                match polys {
                    Some(polys) => AlgExpr::poly(p.substitute(&polys)),
                    None => {
                        let mut terms = Vec::new();
                        for (e, c) in p.terms() {
                            let mut factors = vec![AlgExpr::Const(c.clone())];
                            for (img, &k) in images.iter().zip(e) {
                                if k > 0 {
                                    factors.push(AlgExpr::pow(img.clone(), Rational::from_integer(k.into())));
                                }
                            }
                            terms.push(AlgExpr::mul(factors));
                        }
                        AlgExpr::add(terms)
                    }
                }
            }
            AlgExpr::Add(c) => AlgExpr::add(c.iter().map(|e| e.subst_inner(vars, bindings)).collect::<Result<_, _>>()?),
            AlgExpr::Mul(c) => AlgExpr::mul(c.iter().map(|e| e.subst_inner(vars, bindings)).collect::<Result<_, _>>()?),
            AlgExpr::Div(a, b) => AlgExpr::div(a.subst_inner(vars, bindings)?, b.subst_inner(vars, bindings)?),
            AlgExpr::PowRat(b, q) => AlgExpr::pow(b.subst_inner(vars, bindings)?, q.clone()),
        })
    }

    pub fn depth(&self) -> usize {
        match self {
            AlgExpr::Const(_) | AlgExpr::Poly(_) => 1,
            AlgExpr::Add(c) | AlgExpr::Mul(c) => 1 + c.iter().map(|e| e.depth()).max().unwrap_or(0),
            AlgExpr::Div(a, b) => 1 + a.depth().max(b.depth()),
            AlgExpr::PowRat(b, _) => 1 + b.depth(),
        }
    }
}

/// Fully parenthesised rendering that the parser maps back to the same tree.
impl fmt::Display for AlgExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgExpr::Const(c) => write!(f, "({c})"),
            AlgExpr::Poly(p) => write!(f, "({p})"),
            AlgExpr::Add(c) => {
                for (i, e) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "({e})")?;
                }
                Ok(())
            }
            AlgExpr::Mul(c) => {
                for (i, e) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "({e})")?;
                }
                Ok(())
            }
            AlgExpr::Div(a, b) => write!(f, "({a})/({b})"),
            AlgExpr::PowRat(b, q) => write!(f, "({b})^({q})"),
        }
    }
}

/// An expression whose Taylor expansion at the origin is well defined.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidatedExpr {
    vars: Vec<String>,
    expr: AlgExpr,
}

impl ValidatedExpr {
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn expr(&self) -> &AlgExpr {
        &self.expr
    }

    pub fn into_parts(self) -> (Vec<String>, AlgExpr) {
        (self.vars, self.expr)
    }
}

/// Checks that every denominator is nonzero at the origin and every
/// non-integer power has a base with constant term exactly one.
pub fn validate(vars: &[String], expr: &AlgExpr) -> Result<ValidatedExpr, ExprError> {
    check_node(expr)?;
    Ok(ValidatedExpr { vars: vars.to_vec(), expr: expr.with_vars(vars)? })
}

fn check_node(e: &AlgExpr) -> Result<(), ExprError> {
    match e {
        AlgExpr::Const(_) | AlgExpr::Poly(_) => Ok(()),
        AlgExpr::Add(c) | AlgExpr::Mul(c) => c.iter().try_for_each(check_node),
        AlgExpr::Div(a, b) => {
            check_node(a)?;
            check_node(b)?;
            if b.constant_term()?.is_zero() {
                return Err(ExprError::DenominatorVanishesAtOrigin { denominator: b.to_string() });
            }
            Ok(())
        }
        AlgExpr::PowRat(b, q) => {
            check_node(b)?;
            let c = b.constant_term()?;
            if !is_integer(q) && !c.is_one() {
                return Err(ExprError::PowBaseConstantTermNotOne { constant: c });
            }
            if is_integer(q) && q < &Rational::zero() && c.is_zero() {
                return Err(ExprError::DenominatorVanishesAtOrigin { denominator: b.to_string() });
            }
            Ok(())
        }
    }
}
