use std::collections::BTreeMap;

use diagonals::dl::dl_double;
use diagonals::expr::{var_names, MPoly, RationalFunction};
use diagonals::modp::ModPSeries;
use diagonals::rational::{int, rat};
use diagonals::series::{expand, expand_binomial_reference, MultiSeries, UniSeries};
use diagonals::Rational;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub const CASES: u32 = 128;

fn runner() -> TestRunner {
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn small_rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn multi(trunc: Vec<u32>) -> impl Strategy<Value = MultiSeries> {
    let vars = var_names(&["x", "y", "z"][..trunc.len()]);
    let len: usize = trunc.iter().map(|&t| t as usize + 1).product();
    prop::collection::vec(prop_oneof![3 => Just(int(0)), 2 => small_rat()], len).prop_map(move |cs| {
        let mut s = MultiSeries::zero(&vars, &trunc).unwrap();
        for (i, c) in cs.into_iter().enumerate() {
            let e = s.exponent(i);
            s.set(&e, c);
        }
        s
    })
}

fn uni(n: usize) -> impl Strategy<Value = UniSeries> {
    prop::collection::vec(small_rat(), n).prop_map(|c| UniSeries::new("x", c))
}

fn sparse_mul(a: &MultiSeries, b: &MultiSeries) -> BTreeMap<Vec<u32>, Rational> {
    let mut out = BTreeMap::new();
    for (ea, ca) in a.nonzero_terms() {
        for (eb, cb) in b.nonzero_terms() {
            let e: Vec<u32> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
            if e.iter().zip(a.trunc()).all(|(x, t)| x <= t) {
                *out.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

type PropResult = Result<(), String>;

pub fn ring_laws() -> PropResult {
    let s = (multi(vec![2, 3, 1]), multi(vec![2, 3, 1]), multi(vec![2, 3, 1]));
    runner()
        .run(&s, |(a, b, c)| {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.add(&b).unwrap().sub(&b).unwrap(), a);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn dense_product_matches_sparse() -> PropResult {
    runner()
        .run(&(multi(vec![3, 2, 2]), multi(vec![3, 2, 2])), |(a, b)| {
            prop_assert_eq!(a.mul(&b).unwrap().to_map(), sparse_mul(&a, &b));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn inverse_is_inverse() -> PropResult {
    runner()
        .run(&(multi(vec![3, 3]), 1i64..5), |(mut a, c0)| {
            a.set(&[0, 0], int(c0));
            let one = MultiSeries::constant(a.vars(), a.trunc(), int(1)).unwrap();
            prop_assert_eq!(a.mul(&a.inverse().unwrap()).unwrap(), one);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn rational_power_cubed() -> PropResult {
    runner()
        .run(&(multi(vec![2, 2, 2]), -5i64..=5), |(mut a, n)| {
            a.set(&[0, 0, 0], int(1));
            let lhs = a.pow_rational(&rat(n, 3)).unwrap().pow(3).unwrap();
            let rhs = if n >= 0 { a.pow(n as u32).unwrap() } else { a.pow((-n) as u32).unwrap().inverse().unwrap() };
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn hadamard_bilinear_and_associative() -> PropResult {
    runner()
        .run(&(uni(8), uni(8), uni(8), small_rat()), |(a, b, c, k)| {
            prop_assert_eq!(a.hadamard(&b.add(&c)), a.hadamard(&b).add(&a.hadamard(&c)));
            prop_assert_eq!(a.scale(&k).hadamard(&b), a.hadamard(&b).scale(&k));
            prop_assert_eq!(a.hadamard(&b).hadamard(&c), a.hadamard(&b.hadamard(&c)));
            prop_assert_eq!(a.hadamard(&b), b.hadamard(&a));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn compose_matches_brute_force() -> PropResult {
    runner()
        .run(&(uni(7), prop::collection::vec(small_rat(), 6)), |(f, g_tail)| {
            let mut gc = vec![int(0)];
            gc.extend(g_tail);
            let g = UniSeries::new("x", gc);
            let mut brute = UniSeries::zero("x", 7);
            let mut gp = UniSeries::one("x", 7);
            for c in f.coeffs() {
                brute = brute.add(&gp.scale(c));
                gp = gp.mul(&g);
            }
            prop_assert_eq!(f.compose(&g).unwrap(), brute);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn expand_matches_binomial_reference() -> PropResult {
    runner()
        .run(&(1i64..7, 2i64..5, 1i64..4), |(p, q, c)| {
            let vars = var_names(&["x", "y", "z"]);
            let text = format!("(1-{c}*x-y*z)^({p}/{q})/(1-x-y-z)");
            let e = diagonals::expr::parse_validated(&text, &vars).unwrap();
            prop_assert_eq!(expand(&e, &[3, 3, 2]).unwrap(), expand_binomial_reference(&e, &[3, 3, 2]).unwrap());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `F(x)^p = F(x^p)` over GF(p).
pub fn frobenius_mod_p() -> PropResult {
    let s = prop_oneof![Just(2u64), Just(3), Just(5), Just(7), Just(11)]
        .prop_flat_map(|p| (Just(p), prop::collection::vec(0..p, 1..120)));
    runner()
        .run(&s, |(p, c)| {
            let f = ModPSeries::new(p, 1, c);
            prop_assert_eq!(f.frobenius_mismatch(), None);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn upoly(vars: &[String], coeffs: &[i64]) -> MPoly {
    MPoly::from_terms(vars, coeffs.iter().enumerate().map(|(i, &c)| (vec![i as u32], int(c))))
}

/// Doubling `t -> (u, v)` divides exactly and spreads `a_n` over `u^i v^j`, `i + j = n`.
pub fn dl_double_exact_division() -> PropResult {
    let num = prop::collection::vec(-4i64..=4, 1..4);
    let den = prop::collection::vec(prop::collection::vec(-3i64..=3, 1..3), 0..3);
    runner()
        .run(&(num, den), |(num, den)| {
            let t = var_names(&["t"]);
            let dens: Vec<MPoly> = den
                .iter()
                .map(|d| {
                    let mut c = vec![1];
                    c.extend(d);
                    upoly(&t, &c)
                })
                .collect();
            let r = RationalFunction::new(upoly(&t, &num), dens);
            let d = dl_double(&r, "t", "u", "v").map_err(|e| TestCaseError::fail(e.to_string()))?;
            let a = r.expand(&[8]).unwrap();
            let uv = d.expand(&[4, 4]).unwrap();
            for i in 0..=4u32 {
                for j in 0..=4u32 {
                    prop_assert_eq!(uv.coeff(&[i, j]), a.coeff(&[i + j]));
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Every suite by name.
pub fn all() -> Vec<(&'static str, fn() -> PropResult)> {
    vec![
        ("ring_laws", ring_laws),
        ("dense_product_matches_sparse", dense_product_matches_sparse),
        ("inverse_is_inverse", inverse_is_inverse),
        ("rational_power_cubed", rational_power_cubed),
        ("hadamard_bilinear_and_associative", hadamard_bilinear_and_associative),
        ("compose_matches_brute_force", compose_matches_brute_force),
        ("expand_matches_binomial_reference", expand_matches_binomial_reference),
        ("frobenius_mod_p", frobenius_mod_p),
        ("dl_double_exact_division", dl_double_exact_division),
    ]
}
