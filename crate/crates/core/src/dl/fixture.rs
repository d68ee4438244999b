use serde::Serialize;

use super::DlError;
use crate::expr::{parse_validated, var_names, ValidatedExpr};
use crate::hypergeom::{closed_form_s, HypergeomError};
use crate::rational::Rational;
use crate::series::expand;

/// The published four-term six-variable rational function for the `(a, b)`
/// family, transcribed as printed, over `x, y, z, u, v, w`.
pub fn six_var_fixture(a: u32, b: u32) -> Result<ValidatedExpr, DlError> {
    let am = a.saturating_sub(1);
    let term = |lead: &str, s: &str, d1: &str, d2: &str, split: bool| {
        let lin = format!("(1-{s}*x-{s}*y-{s}*z)");
        let powers = if split { format!("(1+{s})^({am})*{lin}^({am})") } else { format!("((1+{s})*{lin})^({am})") };
        format!("{a}*{lead}*{lin}*{powers}/((1+{s})^({a})*{lin}^({a})-(1-{s}*x-{s}*y)^({b})*{d1}*{d2})")
    };
    let text = format!(
        "{} - {} - {} - {} + 1",
        term("u^3*v", "u", "(u-v)", "(v-w)", true),
        term("v^4", "v", "(u-v)", "(v-w)", false),
        term("u^3*w", "u", "(u-w)", "(v-w)", false),
        term("w^4", "w", "(u-w)", "(v-w)", true),
    );
    Ok(parse_validated(&text, &var_names(&["x", "y", "z", "u", "v", "w"]))?)
}

/// Coefficientwise comparison of a diagonal against the family values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixtureComparison {
    pub a: u32,
    pub b: u32,
    pub expected: Vec<String>,
    pub got: Vec<String>,
    pub first_mismatch: Option<usize>,
}

impl FixtureComparison {
    pub fn matches(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Diagonal of `six_var_fixture(a, b)` through `n_max` against `S(n)`.
pub fn compare_fixture(a: u32, b: u32, n_max: u32) -> Result<FixtureComparison, DlError> {
    let e = six_var_fixture(a, b)?;
    let diag = expand(&e, &[n_max; 6])?.diagonal("x");
    let expected: Vec<Rational> = (0..=n_max as u64)
        .map(|n| closed_form_s(a as i64, b as i64, n))
        .collect::<Result<_, HypergeomError>>()
        .map_err(|err| DlError::UnsupportedShape(err.to_string()))?;
    let got = diag.coeffs().to_vec();
    let first_mismatch = (0..expected.len()).find(|&i| expected[i] != got[i]);
    Ok(FixtureComparison {
        a,
        b,
        expected: expected.iter().map(|r| r.to_string()).collect(),
        got: got.iter().map(|r| r.to_string()).collect(),
        first_mismatch,
    })
}
