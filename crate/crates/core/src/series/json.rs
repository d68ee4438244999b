use serde::{Deserialize, Serialize};

use super::{MultiSeries, SeriesError};
use crate::rational::Rational;

/// Interchange format: `{"vars": [...], "trunc": [...], "coeffs": [{"e": [...], "n": "..", "d": ".."}]}`.
/// Omitted coefficients are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub vars: Vec<String>,
    pub trunc: Vec<u32>,
    pub coeffs: Vec<CoeffJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub e: Vec<u32>,
    pub n: String,
    pub d: String,
}

impl From<&MultiSeries> for SeriesJson {
    fn from(s: &MultiSeries) -> Self {
        SeriesJson {
            vars: s.vars().to_vec(),
            trunc: s.trunc().to_vec(),
            coeffs: s
                .nonzero_terms()
                .into_iter()
                .map(|(e, c)| CoeffJson { e, n: c.numer().to_string(), d: c.denom().to_string() })
                .collect(),
        }
    }
}

impl SeriesJson {
    pub fn to_series(&self) -> Result<MultiSeries, SeriesError> {
        if self.vars.len() != self.trunc.len() {
            return Err(SeriesError::Format("vars and trunc lengths differ".into()));
        }
        let mut s = MultiSeries::zero(&self.vars, &self.trunc)?;
        for c in &self.coeffs {
            if c.e.len() != self.vars.len() || !s.in_box(&c.e) {
                return Err(SeriesError::Format(format!("exponent {:?} outside the truncation box", c.e)));
            }
            let n = c.n.parse().map_err(|_| SeriesError::Format(format!("bad numerator {}", c.n)))?;
            let d: num_bigint::BigInt =
                c.d.parse().map_err(|_| SeriesError::Format(format!("bad denominator {}", c.d)))?;
            if d.sign() != num_bigint::Sign::Plus {
                return Err(SeriesError::Format(format!("denominator must be positive, got {d}")));
            }
            s.set(&c.e, Rational::new(n, d));
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }

    pub fn from_json(text: &str) -> Result<Self, SeriesError> {
        serde_json::from_str(text).map_err(|e| SeriesError::Format(e.to_string()))
    }
}
