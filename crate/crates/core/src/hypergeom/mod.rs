//! Generalized hypergeometric series and the `(a, b)` family of 3F2 series.

mod family;
mod gb;
mod ode;

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{is_integer, parse_rational, Rational};
use crate::series::UniSeries;

pub use family::{
    chu_vandermonde_check, closed_form_s, coefficient_sum_oracle, family_recurrence, family_spec,
    recurrence_verify_symbolic,
};
pub use gb::{
    gb_heuristic, globally_bounded_witness, hadamard_factorizations, FactorizationCase, FactorizationReport, GbVerdict,
    GbWitness,
};
pub use ode::{ode_apply, ode_family, Ode, Recurrence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergeomError {
    #[error("lower parameter {0} is a non-positive integer")]
    NonPositiveLower(Rational),
    #[error("cannot parse hypergeometric spec: {0}")]
    Parse(String),
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("series truncated at {have} but the operator needs at least {need}")]
    InsufficientTruncation { have: usize, need: usize },
}

/// `pFq(upper; lower; scale*x)`; the `n!` of the series is implicit and not
/// part of `lower`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypergeomSpec {
    pub upper: Vec<Rational>,
    pub lower: Vec<Rational>,
    pub scale: Rational,
}

impl HypergeomSpec {
    pub fn new(upper: Vec<Rational>, lower: Vec<Rational>, scale: Rational) -> Result<Self, HypergeomError> {
        if let Some(b) = lower.iter().find(|b| is_integer(b) && !b.is_positive()) {
            return Err(HypergeomError::NonPositiveLower(b.clone()));
        }
        Ok(HypergeomSpec { upper, lower, scale })
    }

    /// Parses `3F2([2/9,5/9,8/9],[2/3,1];27)`. The scale may be a rational
    /// or a power such as `3^6`; it defaults to 1.
    pub fn parse(text: &str) -> Result<Self, HypergeomError> {
        let err = |m: &str| HypergeomError::Parse(format!("{m} in `{text}`"));
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let open = s.find('(').ok_or_else(|| err("missing `(`"))?;
        let head = &s[..open];
        let (p, q) = head.split_once('F').ok_or_else(|| err("expected pFq"))?;
        let p: usize = p.parse().map_err(|_| err("bad p"))?;
        let q: usize = q.parse().map_err(|_| err("bad q"))?;
        let body = s[open + 1..].strip_suffix(')').ok_or_else(|| err("missing `)`"))?;
        let (lists, scale) = match body.split_once(';') {
            Some((l, sc)) => (l, parse_scale(sc).ok_or_else(|| err("bad scale"))?),
            None => (body, Rational::one()),
        };
        let close = lists.find(']').ok_or_else(|| err("missing `]`"))?;
        let upper = parse_list(&lists[..=close]).ok_or_else(|| err("bad upper list"))?;
        let rest = lists[close + 1..].strip_prefix(',').ok_or_else(|| err("expected `,` between lists"))?;
        let lower = parse_list(rest).ok_or_else(|| err("bad lower list"))?;
        if upper.len() != p || lower.len() != q {
            return Err(err("parameter counts do not match pFq"));
        }
        Self::new(upper, lower, scale)
    }

    /// Same parameters with the argument multiplied by `c`.
    pub fn rescaled(&self, c: &Rational) -> Self {
        HypergeomSpec { scale: &self.scale * c, ..self.clone() }
    }

    /// Ratio `c_{n+1}/c_n`.
    pub fn ratio(&self, n: u64) -> Rational {
        let n = Rational::from_integer(n.into());
        let mut r = self.scale.clone();
        for a in &self.upper {
            r *= a + &n;
        }
        for b in &self.lower {
            r /= b + &n;
        }
        r / (n + Rational::one())
    }
}

fn parse_list(s: &str) -> Option<Vec<Rational>> {
    let inner = s.strip_prefix('[')?.strip_suffix(']')?;
    if inner.is_empty() {
        return Some(vec![]);
    }
    inner.split(',').map(parse_rational).collect()
}

fn parse_scale(s: &str) -> Option<Rational> {
    match s.split_once('^') {
        Some((b, e)) => {
            let b = parse_rational(b)?;
            let e: u32 = e.parse().ok()?;
            Some(crate::rational::pow(&b, e))
        }
        None => parse_rational(s),
    }
}

impl fmt::Display for HypergeomSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Rational]| v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",");
        write!(
            f,
            "{}F{}([{}],[{}];{})",
            self.upper.len(),
            self.lower.len(),
            join(&self.upper),
            join(&self.lower),
            self.scale
        )
    }
}

/// Coefficients `c_0..c_N` from the running Pochhammer ratio.
pub fn hyp_series(spec: &HypergeomSpec, n: usize) -> Result<UniSeries, HypergeomError> {
    if let Some(b) = spec.lower.iter().find(|b| is_integer(b) && !b.is_positive()) {
        return Err(HypergeomError::NonPositiveLower((*b).clone()));
    }
    let mut out = Vec::with_capacity(n + 1);
    let mut c = Rational::one();
    for k in 0..=n {
        out.push(c.clone());
        if k < n && !c.is_zero() {
            c *= spec.ratio(k as u64);
        }
    }
    Ok(UniSeries::new("x", out))
}

/// Number of integer lower parameters, counting the implicit `1` from `n!`,
/// minus the number of integer upper parameters.
pub fn height(spec: &HypergeomSpec) -> i64 {
    let lower = spec.lower.iter().filter(|b| is_integer(b)).count() as i64 + 1;
    let upper = spec.upper.iter().filter(|a| is_integer(a)).count() as i64;
    lower - upper
}

/// Merges parameters of two series whose Hadamard product is hypergeometric:
/// the result has the concatenated lists, one extra lower `1` for the second
/// `n!`, and the product of the scales.
pub fn hadamard_spec(a: &HypergeomSpec, b: &HypergeomSpec) -> HypergeomSpec {
    let mut upper = a.upper.clone();
    upper.extend(b.upper.iter().cloned());
    let mut lower = a.lower.clone();
    lower.extend(b.lower.iter().cloned());
    lower.push(Rational::one());
    HypergeomSpec { upper, lower, scale: &a.scale * &b.scale }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn spec(t: &str) -> HypergeomSpec {
        HypergeomSpec::parse(t).unwrap()
    }

    fn ints(s: &UniSeries) -> Vec<Rational> {
        s.coeffs().to_vec()
    }

    #[test]
    fn integer_series_examples() {
        let s = hyp_series(&spec("3F2([2/9,5/9,8/9],[2/3,1];3^6)"), 3).unwrap();
        assert_eq!(ints(&s), vec![int(1), int(120), int(47124), int(23483460)]);
        let s = hyp_series(&spec("3F2([1/9,4/9,7/9],[1/3,1];729)"), 2).unwrap();
        assert_eq!(ints(&s), vec![int(1), int(84), int(32760)]);
        let s = hyp_series(&spec("3F2([1/9,4/9,5/9],[1/3,1];27^2)"), 6).unwrap();
        let want = [1i64, 60, 20475, 9373650, 4881796920, 2734407111744, 1605040007778900];
        assert_eq!(ints(&s), want.iter().map(|&v| int(v)).collect::<Vec<_>>());
    }

    #[test]
    fn parse_and_display() {
        let s = spec("3F2([2/9, 5/9, 8/9], [2/3, 1]; 27)");
        assert_eq!(s.upper, vec![rat(2, 9), rat(5, 9), rat(8, 9)]);
        assert_eq!(s.scale, int(27));
        assert_eq!(s.to_string(), "3F2([2/9,5/9,8/9],[2/3,1];27)");
        assert_eq!(spec("1F0([8/9],[])").lower, vec![]);
        assert!(HypergeomSpec::parse("3F2([1,2],[3];1)").is_err());
        assert!(matches!(HypergeomSpec::parse("2F1([1,2],[-3];1)"), Err(HypergeomError::NonPositiveLower(_))));
    }

    #[test]
    fn heights() {
        assert_eq!(height(&spec("3F2([1/3,1/3,1/3],[1,1])")), 3);
        assert_eq!(height(&spec("3F2([2/9,5/9,8/9],[2/3,1])")), 2);
        assert_eq!(height(&spec("2F1([1,2],[1])")), 0);
        assert_eq!(height(&spec("2F2([1,2],[1,1])")), 1);
    }

    #[test]
    fn merged_hadamard_product() {
        let a = spec("2F1([1/3,2/3],[1/2];4)");
        let b = spec("1F0([1/3],[];9)");
        let lhs = hyp_series(&a, 12).unwrap().hadamard(&hyp_series(&b, 12).unwrap());
        assert_eq!(lhs, hyp_series(&hadamard_spec(&a, &b), 12).unwrap());
    }
}
