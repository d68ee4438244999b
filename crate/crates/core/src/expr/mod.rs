//! Algebraic-function expressions: sums, products and quotients of
//! polynomials and rational powers of sub-expressions.

mod ast;
mod mpoly;
mod parser;
mod ratfun;

pub use ast::{validate, AlgExpr, ValidatedExpr};
pub use mpoly::{MPoly, Monomial};
pub use parser::parse_expr;
pub use ratfun::RationalFunction;

use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("malformed exponent at byte {offset}: {message}")]
    MalformedExponent { offset: usize, message: String },
    #[error("denominator {denominator} vanishes at the origin")]
    DenominatorVanishesAtOrigin { denominator: String },
    #[error("base of a fractional power has constant term {constant}, expected 1")]
    PowBaseConstantTermNotOne { constant: Rational },
    #[error("binding for undeclared variable `{0}`")]
    UnknownBinding(String),
    #[error("not a rational function: {0}")]
    NotRational(String),
}

/// Convenience: owned variable names from string slices.
pub fn var_names(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Parses and validates in one step.
pub fn parse_validated(text: &str, vars: &[String]) -> Result<ValidatedExpr, ExprError> {
    let e = parse_expr(text, vars)?;
    validate(vars, &e)
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::rational::{int, rat};

    fn xyz() -> Vec<String> {
        var_names(&["x", "y", "z"])
    }

    fn poly(text: &str, vars: &[String]) -> MPoly {
        parse_expr(text, vars).unwrap().as_poly(vars).unwrap()
    }

    #[test]
    fn parses_running_example() {
        let v = xyz();
        let e = parse_expr("(1-x-y)^(1/3)/(1-x-y-z)", &v).unwrap();
        let expected = AlgExpr::Div(
            Box::new(AlgExpr::PowRat(Box::new(AlgExpr::Poly(poly("1-x-y", &v))), rat(1, 3))),
            Box::new(AlgExpr::Poly(poly("1-x-y-z", &v))),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn parses_constants_and_negative_exponents() {
        let v = var_names(&["w"]);
        assert_eq!(parse_expr("1", &v).unwrap(), AlgExpr::Const(int(1)));
        let e = parse_expr("(1-w)^(-5/9)", &v).unwrap();
        assert_eq!(e, AlgExpr::PowRat(Box::new(AlgExpr::Poly(poly("1-w", &v))), rat(-5, 9)));
        let e = parse_expr("(1-w)^-2", &v).unwrap();
        assert_eq!(e, AlgExpr::Div(Box::new(AlgExpr::Const(int(1))), Box::new(AlgExpr::Poly(poly("1-2*w+w^2", &v)))));
        assert_eq!(parse_expr("(1-w)^(4/2)", &v).unwrap(), AlgExpr::Poly(poly("1-2*w+w^2", &v)));
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let v = xyz();
        assert!(matches!(parse_expr("1 + q", &v), Err(ExprError::UnknownVariable { offset: 4, .. })));
        assert!(matches!(parse_expr("(1-x", &v), Err(ExprError::Syntax { offset: 4, .. })));
        assert!(matches!(parse_expr("x^(a)", &v), Err(ExprError::MalformedExponent { .. })));
        assert!(matches!(parse_expr("x^(1/0)", &v), Err(ExprError::MalformedExponent { .. })));
        assert!(matches!(parse_expr("x y", &v), Err(ExprError::Syntax { offset: 2, .. })));
    }

    #[test]
    fn validation_cases() {
        let v = xyz();
        assert!(parse_validated("(1-x-y)^(1/3)/(1-x-y-z)", &v).is_ok());
        assert!(matches!(parse_validated("1/(x+y)", &v), Err(ExprError::DenominatorVanishesAtOrigin { .. })));
        assert!(matches!(parse_validated("(2-x)^(1/3)", &v), Err(ExprError::PowBaseConstantTermNotOne { .. })));
        assert!(parse_validated("(2-x)^3/(3+y)", &v).is_ok());
    }

    #[test]
    fn substitution_examples() {
        let v = var_names(&["x", "y", "z", "f"]);
        let e = parse_expr("1-x-y-z", &v).unwrap();
        let b: HashMap<String, AlgExpr> =
            ["x", "y", "z"].iter().map(|n| (n.to_string(), parse_expr(&format!("{n}*f"), &v).unwrap())).collect();
        let s = e.substitute(&v, &b).unwrap();
        assert_eq!(s, parse_expr("1-x*f-y*f-z*f", &v).unwrap());

        let v2 = var_names(&["x", "y"]);
        let e = parse_expr("1-x", &v2).unwrap();
        let b = HashMap::from([("x".to_string(), parse_expr("x+y", &v2).unwrap())]);
        assert_eq!(e.substitute(&v2, &b).unwrap(), parse_expr("1-x-y", &v2).unwrap());

        let e = parse_expr("(1-x-y)^(1/3)/(1-x-y-z)", &xyz()).unwrap();
        let id: HashMap<String, AlgExpr> = xyz().iter().map(|n| (n.clone(), parse_expr(n, &xyz()).unwrap())).collect();
        assert_eq!(e.substitute(&xyz(), &id).unwrap(), e);

        let bad = HashMap::from([("q".to_string(), AlgExpr::Const(int(1)))]);
        assert!(matches!(e.substitute(&xyz(), &bad), Err(ExprError::UnknownBinding(_))));
    }

    #[test]
    fn non_polynomial_binding() {
        let v = var_names(&["x", "y"]);
        let e = parse_expr("1-x^2", &v).unwrap();
        let b = HashMap::from([("x".to_string(), parse_expr("(1-y)^(1/2)", &v).unwrap())]);
        let s = e.substitute(&v, &b).unwrap();
        let printed = s.to_string();
        assert_eq!(parse_expr(&printed, &v).unwrap(), s);
    }

    #[test]
    fn display_round_trip() {
        let v = xyz();
        for t in [
            "(1-x-y)^(1/3)/(1-x-y-z)",
            "1",
            "-x + 2/3*y^2",
            "(1-x)^(-1/3)*(1-y)^(-1/3)*(1-z)^(-1/3)",
            "x/(1-x) + (1+y)^(1/2)*3 - 7/(2-z)",
            "((1-x)^(1/2))^3",
        ] {
            let e = parse_expr(t, &v).unwrap();
            let again = parse_expr(&e.to_string(), &v).unwrap();
            assert_eq!(again, e, "round trip of {t} via {e}");
        }
    }
}
