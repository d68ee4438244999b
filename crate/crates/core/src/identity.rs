//! Declarative checks of series identities.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{parse_validated, var_names, ExprError};
use crate::hypergeom::{hyp_series, HypergeomError, HypergeomSpec};
use crate::rational::{parse_rational, Rational};
use crate::series::{expand, SeriesError, UniSeries};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IdentityError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Hypergeom(#[from] HypergeomError),
    #[error("bad rational `{0}`")]
    BadRational(String),
    #[error("case `{0}` needs at least two sides")]
    TooFewSides(String),
}

/// How to build one side of an identity as a series in `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Recipe {
    /// A univariate expression in `x`.
    Expr(String),
    /// Diagonal of an expression in the listed variables.
    Diag {
        expr: String,
        vars: Vec<String>,
    },
    /// A hypergeometric spec such as `3F2([1/9,4/9,7/9],[1/3,1];27)`.
    Hyp(String),
    Hadamard(Vec<Recipe>),
    Product(Vec<Recipe>),
    /// `outer(inner(x))`; `inner` must vanish at 0.
    Compose {
        outer: Box<Recipe>,
        inner: Box<Recipe>,
    },
    /// `f(c x)`.
    Rescale {
        inner: Box<Recipe>,
        by: String,
    },
}

impl Recipe {
    pub fn expr(s: &str) -> Self {
        Recipe::Expr(s.into())
    }

    pub fn diag(s: &str, vars: &[&str]) -> Self {
        Recipe::Diag { expr: s.into(), vars: vars.iter().map(|v| v.to_string()).collect() }
    }

    pub fn hyp(s: &str) -> Self {
        Recipe::Hyp(s.into())
    }

    pub fn compose(outer: Recipe, inner: Recipe) -> Self {
        Recipe::Compose { outer: Box::new(outer), inner: Box::new(inner) }
    }

    pub fn rescale(inner: Recipe, by: &Rational) -> Self {
        Recipe::Rescale { inner: Box::new(inner), by: by.to_string() }
    }

    /// Coefficients `0..=n`.
    pub fn series(&self, n: usize) -> Result<UniSeries, IdentityError> {
        Ok(match self {
            Recipe::Expr(s) => {
                let e = parse_validated(s, &var_names(&["x"]))?;
                expand(&e, &[n as u32])?.to_uni().expect("univariate")
            }
            Recipe::Diag { expr, vars } => {
                let e = parse_validated(expr, vars)?;
                expand(&e, &vec![n as u32; vars.len()])?.diagonal("x")
            }
            Recipe::Hyp(s) => hyp_series(&HypergeomSpec::parse(s)?, n)?,
            Recipe::Hadamard(parts) => fold(parts, n, |a, b| a.hadamard(b))?,
            Recipe::Product(parts) => fold(parts, n, |a, b| a.mul(b))?,
            Recipe::Compose { outer, inner } => outer.series(n)?.compose(&inner.series(n)?)?,
            Recipe::Rescale { inner, by } => {
                let c = parse_rational(by).ok_or_else(|| IdentityError::BadRational(by.clone()))?;
                inner.series(n)?.rescale(&c)
            }
        })
    }
}

fn fold(
    parts: &[Recipe],
    n: usize,
    op: impl Fn(&UniSeries, &UniSeries) -> UniSeries,
) -> Result<UniSeries, IdentityError> {
    let mut it = parts.iter();
    let mut acc = match it.next() {
        Some(r) => r.series(n)?,
        None => return Err(IdentityError::TooFewSides("empty combination".into())),
    };
    for r in it {
        acc = op(&acc, &r.series(n)?);
    }
    Ok(acc)
}

/// Every side must agree with the first through coefficient `order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCase {
    pub name: String,
    pub sides: Vec<Recipe>,
    pub order: usize,
    /// Whether the identity is expected to hold.
    #[serde(default = "yes")]
    pub proven: bool,
}

fn yes() -> bool {
    true
}

impl IdentityCase {
    pub fn new(name: &str, order: usize, sides: Vec<Recipe>) -> Self {
        IdentityCase { name: name.into(), sides, order, proven: true }
    }

    fn unproven(mut self) -> Self {
        self.proven = false;
        self
    }

    /// Same case with every side evaluated at `c x`.
    pub fn rescaled(&self, c: &Rational) -> Self {
        IdentityCase { sides: self.sides.iter().map(|s| Recipe::rescale(s.clone(), c)).collect(), ..self.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Match,
    Mismatch,
    Error,
}

/// One JSON line per case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<usize>,
    /// Index of the side that disagrees with the first.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub order: usize,
    pub proven: bool,
}

impl Report {
    pub fn is_match(&self) -> bool {
        self.status == Status::Match
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Compares all sides coefficientwise through `case.order`.
pub fn check(case: &IdentityCase) -> Result<Report, IdentityError> {
    if case.sides.len() < 2 {
        return Err(IdentityError::TooFewSides(case.name.clone()));
    }
    let series = case.sides.iter().map(|s| s.series(case.order)).collect::<Result<Vec<_>, _>>()?;
    let mut report = Report {
        name: case.name.clone(),
        status: Status::Match,
        first_mismatch: None,
        side: None,
        lhs: None,
        rhs: None,
        error: None,
        order: case.order,
        proven: case.proven,
    };
    let mut best: Option<(usize, usize)> = None;
    for (j, s) in series.iter().enumerate().skip(1) {
        if let Some(i) = (0..=case.order).find(|&i| series[0].coeff(i) != s.coeff(i)) {
            if best.is_none_or(|(b, _)| i < b) {
                best = Some((i, j));
            }
        }
    }
    if let Some((i, j)) = best {
        report.status = Status::Mismatch;
        report.first_mismatch = Some(i);
        report.side = Some(j);
        report.lhs = Some(series[0].coeff(i).to_string());
        report.rhs = Some(series[j].coeff(i).to_string());
    }
    Ok(report)
}

/// Runs cases in parallel; errors become reports with status `error`.
pub fn run_suite(cases: &[IdentityCase]) -> Vec<Report> {
    cases
        .par_iter()
        .map(|c| {
            check(c).unwrap_or_else(|e| Report {
                name: c.name.clone(),
                status: Status::Error,
                first_mismatch: None,
                side: None,
                lhs: None,
                rhs: None,
                error: Some(e.to_string()),
                order: c.order,
                proven: c.proven,
            })
        })
        .collect()
}

const NINTHS_27: &str = "3F2([2/9,5/9,8/9],[2/3,1];27)";

/// The catalogue of diagonal, Hadamard, pullback and triple identities.
pub fn builtin_suite() -> Vec<IdentityCase> {
    let xyz = ["x", "y", "z"];
    let pullback_arg = "-1728*x^3*(1-27*x)/(1-36*x+216*x^2)^2";
    let prefactor = Recipe::expr("(1-27*x)^(-1/9)*(1-36*x+216*x^2)^(-1/18)");
    let shimura = Recipe::hyp("2F1([1/36,19/36],[8/9];1)");
    let shimura_twin = Recipe::Product(vec![
        Recipe::expr("(1-x)^(-1/36)"),
        Recipe::compose(Recipe::hyp("2F1([1/36,13/36],[8/9];1)"), Recipe::expr("-x/(1-x)")),
    ]);
    vec![
        IdentityCase::new(
            "third_powers_diagonal",
            12,
            vec![
                Recipe::hyp("3F2([1/3,1/3,1/3],[1,1];1)"),
                Recipe::Hadamard(vec![Recipe::expr("(1-x)^(-1/3)"); 3]),
                Recipe::diag("(1-x)^(-1/3)*(1-y)^(-1/3)*(1-z)^(-1/3)", &xyz),
            ],
        ),
        IdentityCase::new(
            "diag_one_third",
            10,
            vec![Recipe::diag("(1-x-y)^(1/3)/(1-x-y-z)", &xyz), Recipe::hyp(NINTHS_27)],
        ),
        IdentityCase::new(
            "diag_two_thirds",
            10,
            vec![Recipe::diag("(1-x-y)^(2/3)/(1-x-y-z)", &xyz), Recipe::hyp("3F2([1/9,4/9,7/9],[1/3,1];27)")],
        ),
        IdentityCase::new(
            "close_two_thirds_2y",
            10,
            vec![Recipe::diag("(1-x-2*y)^(2/3)/(1-x-y-z)", &xyz), Recipe::hyp("3F2([1/9,4/9,7/9],[2/3,1];27)")],
        )
        .unproven(),
        IdentityCase::new(
            "close_one_third_2y",
            10,
            vec![Recipe::diag("(1-x-2*y)^(1/3)/(1-x-y-z)", &xyz), Recipe::hyp("3F2([2/9,5/9,8/9],[5/6,1];27)")],
        )
        .unproven(),
        IdentityCase::new(
            "close_one_third_x",
            10,
            vec![Recipe::diag("(1-x)^(1/3)/(1-x-y-z)", &xyz), Recipe::hyp("4F3([2/9,5/9,8/9,1/2],[1/3,5/6,1];27)")],
        )
        .unproven(),
        IdentityCase::new(
            "close_one_third_xz",
            10,
            vec![Recipe::diag("(1-x-y)^(1/3)/(1-x-z)", &xyz), Recipe::hyp("4F3([2/9,5/9,8/9,-1/3],[1/3,5/6,1];27)")],
        )
        .unproven(),
        IdentityCase::new(
            "hadamard_four_thirds",
            15,
            vec![
                Recipe::hyp("3F2([1/9,4/9,7/9],[4/3,1];3^6)"),
                Recipe::Hadamard(vec![Recipe::expr("(1-x)^(-1/9)"), Recipe::hyp("2F1([4/9,7/9],[4/3];3^6)")]),
            ],
        ),
        IdentityCase::new(
            "hadamard_seven_ninths",
            15,
            vec![
                Recipe::hyp("3F2([2/9,5/9,7/9],[2/3,1];3^6)"),
                Recipe::Hadamard(vec![Recipe::expr("(1-x)^(-7/9)"), Recipe::hyp("2F1([2/9,5/9],[2/3];3^6)")]),
                Recipe::Hadamard(vec![Recipe::expr("(1-729*x)^(-7/9)"), Recipe::hyp("2F1([2/9,5/9],[2/3];1)")]),
            ],
        ),
        IdentityCase::new(
            "hadamard_eight_ninths",
            15,
            vec![
                Recipe::hyp("3F2([4/9,5/9,8/9],[2/3,1];3^3)"),
                Recipe::Hadamard(vec![Recipe::expr("(1-x)^(-8/9)"), Recipe::hyp("2F1([4/9,5/9],[2/3];3^3)")]),
            ],
        ),
        IdentityCase::new(
            "hadamard_sevenths",
            15,
            vec![
                Recipe::hyp("3F2([1/7,2/7,4/7],[1/2,1];7^4)"),
                Recipe::Hadamard(vec![Recipe::expr("(1-x)^(-4/7)"), Recipe::hyp("2F1([1/7,2/7],[1/2];7^4)")]),
            ],
        ),
        IdentityCase::new(
            "shimura_pullback_chain",
            25,
            vec![
                Recipe::hyp("2F1([2/9,5/9],[2/3];27)"),
                Recipe::Product(vec![prefactor.clone(), Recipe::compose(shimura, Recipe::expr(pullback_arg))]),
                Recipe::Product(vec![prefactor, Recipe::compose(shimura_twin, Recipe::expr(pullback_arg))]),
            ],
        ),
        IdentityCase::new(
            "four_f_three_triple",
            20,
            vec![
                Recipe::hyp("4F3([1/9,4/9,5/9,7/9],[1/3,1,1];27)"),
                Recipe::Hadamard(vec![Recipe::expr("(1-x)^(-5/9)"), Recipe::hyp("3F2([1/9,4/9,7/9],[1/3,1];27)")]),
                Recipe::Hadamard(vec![Recipe::expr("(1-x)^(-7/9)"), Recipe::hyp("3F2([1/9,4/9,5/9],[1/3,1];27)")]),
            ],
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn suite_shape() {
        let s = builtin_suite();
        assert_eq!(s.len(), 13);
        let mut names: Vec<&str> = s.iter().map(|c| c.name.as_str()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 13);
    }

    #[test]
    fn negative_control() {
        let case = IdentityCase::new("control", 2, vec![Recipe::expr("x"), Recipe::expr("x+x^2")]);
        let r = check(&case).unwrap();
        assert_eq!(r.status, Status::Mismatch);
        assert_eq!(r.first_mismatch, Some(2));
        assert_eq!((r.lhs.as_deref(), r.rhs.as_deref()), (Some("0"), Some("1")));
        assert!(r.to_json_line().contains("\"first_mismatch\":2"));
    }

    #[test]
    fn diagonal_matches_hypergeometric() {
        let case = &builtin_suite()[1];
        let c = IdentityCase { order: 6, ..case.clone() };
        assert!(check(&c).unwrap().is_match());
    }

    #[test]
    fn hadamard_case_and_rescaling() {
        let case = builtin_suite().into_iter().find(|c| c.name == "hadamard_sevenths").unwrap();
        assert!(check(&case).unwrap().is_match());
        assert!(check(&case.rescaled(&int(-3))).unwrap().is_match());
    }

    #[test]
    fn errors_are_reported() {
        let bad = IdentityCase::new("bad", 3, vec![Recipe::hyp("2F1([1],[0];1)"), Recipe::expr("1")]);
        let r = run_suite(&[bad]);
        assert_eq!(r[0].status, Status::Error);
        let json = serde_json::to_string(&builtin_suite()[0]).unwrap();
        let back: IdentityCase = serde_json::from_str(&json).unwrap();
        assert_eq!(back, builtin_suite()[0]);
    }
}
