use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::HypergeomSpec;
use crate::rational::{int, prime_factors_u64, valuation, Rational};
use crate::series::UniSeries;

/// Outcome of a finite-data search for `d f(c x)` with integer coefficients.
/// A witness only shows that the checked coefficients are integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GbWitness {
    Found { c: BigInt, d: BigInt },
    NotFoundUpToBounds,
}

const TRIAL_LIMIT: u64 = 1 << 16;

/// Prime divisors up to `TRIAL_LIMIT`, or `None` if a larger one remains.
fn small_prime_factors(n: &BigInt) -> Option<Vec<u64>> {
    let mut n = n.abs();
    let mut out = vec![];
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && !n.is_one() {
        let bp = BigInt::from(p);
        if (&n % &bp).is_zero() {
            out.push(p);
            while (&n % &bp).is_zero() {
                n /= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    n.is_one().then_some(out)
}

/// Smallest `c` (then `d`) with `d f(c x)` integral through the truncation.
/// Each prime of the denominators gets the least exponent `e` for which the
/// remaining excess `max_n (-v_p(c_n) - n e)` fits within `d_max`.
pub fn globally_bounded_witness(f: &UniSeries, c_max: &BigInt, d_max: &BigInt) -> GbWitness {
    let mut primes = BTreeSet::new();
    for c in f.coeffs() {
        if c.is_zero() || c.denom().is_one() {
            continue;
        }
        match small_prime_factors(c.denom()) {
            Some(ps) => primes.extend(ps),
            None => return GbWitness::NotFoundUpToBounds,
        }
    }
    let mut c = BigInt::one();
    let mut d = BigInt::one();
    for p in primes {
        let vals: Vec<i64> = f.coeffs().iter().map(|c| if c.is_zero() { i64::MAX } else { valuation(c, p) }).collect();
        let excess = |e: i64| -> i64 {
            vals.iter()
                .enumerate()
                .filter(|(_, v)| **v != i64::MAX)
                .map(|(n, v)| -v - n as i64 * e)
                .max()
                .unwrap_or(0)
                .max(0)
        };
        let mut e = 0i64;
        loop {
            let dp = BigInt::from(p).pow(excess(e) as u32);
            if &d * &dp <= *d_max {
                d *= dp;
                break;
            }
            e += 1;
        }
        c *= BigInt::from(p).pow(e as u32);
        if c > *c_max {
            return GbWitness::NotFoundUpToBounds;
        }
    }
    GbWitness::Found { c, d }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GbVerdict {
    LikelyBounded,
    /// Primes above the bound found in denominators of `c_n`, `N/2 < n <= N`.
    LikelyUnbounded {
        primes: Vec<u64>,
        first_index: usize,
    },
}

impl GbVerdict {
    pub fn is_bounded(&self) -> bool {
        matches!(self, GbVerdict::LikelyBounded)
    }
}

fn add_factor(vals: &mut BTreeMap<u64, i64>, r: &Rational, sign: i64) {
    for (n, s) in [(r.numer(), sign), (r.denom(), -sign)] {
        let n = n.abs().to_u64().expect("parameter factor fits in u64");
        for p in prime_factors_u64(n) {
            *vals.entry(p).or_insert(0) += s;
        }
    }
}

/// Largest prime dividing a denominator of a parameter or the scale.
pub fn default_prime_bound(spec: &HypergeomSpec) -> u64 {
    spec.upper
        .iter()
        .chain(&spec.lower)
        .chain(std::iter::once(&spec.scale))
        .filter_map(|r| r.denom().to_u64())
        .flat_map(prime_factors_u64)
        .max()
        .unwrap_or(1)
}

/// Tracks `v_p(c_n)` for every prime through the factored term ratio and
/// reports whether primes above `prime_bound` keep entering denominators
/// in the upper half of the range.
pub fn gb_heuristic(spec: &HypergeomSpec, n_max: usize, prime_bound: Option<u64>) -> GbVerdict {
    let bound = prime_bound.unwrap_or_else(|| default_prime_bound(spec));
    let mut vals: BTreeMap<u64, i64> = BTreeMap::new();
    let mut hits = BTreeSet::new();
    let mut first = None;
    for n in 0..n_max {
        let nn = int(n as i64);
        let mut zero = false;
        for a in &spec.upper {
            let f = a + &nn;
            zero |= f.is_zero();
            if !zero {
                add_factor(&mut vals, &f, 1);
            }
        }
        if zero {
            // terminating series: a polynomial is always bounded
            return GbVerdict::LikelyBounded;
        }
        for b in &spec.lower {
            add_factor(&mut vals, &(b + &nn), -1);
        }
        add_factor(&mut vals, &spec.scale, 1);
        add_factor(&mut vals, &int(n as i64 + 1), -1);
        let idx = n + 1;
        if 2 * idx > n_max {
            for (&p, &v) in &vals {
                if p > bound && v < 0 {
                    hits.insert(p);
                    first.get_or_insert(idx);
                }
            }
        }
    }
    match first {
        Some(first_index) => GbVerdict::LikelyUnbounded { primes: hits.into_iter().collect(), first_index },
        None => GbVerdict::LikelyBounded,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationCase {
    /// Human-readable decomposition, e.g. `2F1([a,b],[e]) * 1F0([c])`.
    pub decomposition: String,
    /// The factor whose boundedness decides the route.
    pub factor: HypergeomSpec,
    pub verdict: GbVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationReport {
    pub cases: Vec<FactorizationCase>,
}

impl FactorizationReport {
    /// Some decomposition has a factor that looks globally bounded.
    pub fn route_found(&self) -> bool {
        self.cases.iter().any(|c| c.verdict.is_bounded())
    }
}

/// The six ways to split `3F2([a,b,c],[1,e])` into a Hadamard product of
/// two hypergeometric series, with the verdict on the non-trivial factor.
pub fn hadamard_factorizations(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    e: &Rational,
    n_max: usize,
) -> FactorizationReport {
    let one = Rational::one();
    let spec = |u: Vec<Rational>, l: Vec<Rational>| HypergeomSpec { upper: u, lower: l, scale: one.clone() };
    let trio = [(a, b, c), (a, c, b), (b, c, a)];
    let mut cases = vec![];
    for (x, y, z) in trio {
        let f = spec(vec![x.clone(), y.clone()], vec![e.clone()]);
        let verdict = gb_heuristic(&f, n_max, None);
        cases.push(FactorizationCase {
            decomposition: format!("2F1([{x},{y}],[{e}]) * 1F0([{z}])"),
            factor: f,
            verdict,
        });
    }
    for (x, y, z) in trio {
        let f = spec(vec![z.clone(), one.clone()], vec![e.clone()]);
        let verdict = gb_heuristic(&f, n_max, None);
        cases.push(FactorizationCase {
            decomposition: format!("2F1([{x},{y}],[1]) * 2F1([{z},1],[{e}])"),
            factor: f,
            verdict,
        });
    }
    FactorizationReport { cases }
}
