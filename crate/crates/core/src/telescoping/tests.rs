use super::*;
use crate::hypergeom::{closed_form_s, family_recurrence};

fn binom_nk() -> HyperTerm {
    HyperTerm::new(vec![(Factor::Binom(Lin::n(), Lin::k()), 1)])
}

fn check_gosper(t: &HyperTerm, r: &RationalFunction) {
    let g = |k: i64| -> Rational {
        let pt = [int(0), int(k)];
        r.num().eval(&pt) / r.den_product().eval(&pt) * t.eval(0, k).unwrap()
    };
    for k in 1..30 {
        assert_eq!(g(k + 1) - g(k), t.eval(0, k).unwrap(), "k = {k}");
    }
}

#[test]
fn gosper_examples() {
    // k * k!
    let t = HyperTerm::new(vec![(Factor::Lin(Lin::k()), 1), (Factor::Fact(Lin::k()), 1)]);
    match gosper(&t) {
        GosperResult::Summable(r) => {
            check_gosper(&t, &r);
            let want = RationalFunction::new(MPoly::one(r.vars()), vec![MPoly::var(r.vars(), 1)]);
            assert!(r.same_function(&want));
        }
        GosperResult::NoHypergeometricAntidifference => panic!("k*k! is summable"),
    }
    let harmonic = HyperTerm::new(vec![(Factor::Lin(Lin::k()), -1)]);
    assert_eq!(gosper(&harmonic), GosperResult::NoHypergeometricAntidifference);
    let geo = HyperTerm::new(vec![(Factor::Pow(int(2), Lin::k()), 1)]);
    match gosper(&geo) {
        GosperResult::Summable(r) => {
            check_gosper(&geo, &r);
            assert!(r.same_function(&RationalFunction::polynomial(MPoly::one(r.vars()))));
        }
        _ => panic!("2^k is summable"),
    }
}

#[test]
fn binomial_row_sum() {
    let t = binom_nk();
    let tel = zeilberger(&t, 3).unwrap();
    assert_eq!(tel.sigma, vec![UPoly::from_ints(&[-2]), UPoly::from_ints(&[1])]);
    let grid = pole_free_grid(&tel, 10, 0, 10);
    assert!(!grid.is_empty());
    assert!(certificate_verify(&t, &tel, &grid, 15, |n| (0, n)).unwrap());
}

#[test]
fn central_binomial() {
    let t = HyperTerm::new(vec![(Factor::Binom(Lin::n(), Lin::k()), 2)]);
    let tel = zeilberger(&t, 3).unwrap();
    assert_eq!(tel.sigma, vec![UPoly::from_ints(&[-2, -4]), UPoly::from_ints(&[1, 1])]);
    assert_eq!(tel.to_strings(), vec!["-4*n - 2".to_string(), "n + 1".to_string()]);
    let grid = pole_free_grid(&tel, 8, 0, 8);
    assert!(certificate_verify(&t, &tel, &grid, 15, |n| (0, n)).unwrap());
}

#[test]
fn family_recurrence_from_telescoping() {
    for (a, b) in [(1, 3), (2, 3), (1, 7), (3, 4)] {
        let t = family_summand(a, b, true);
        let tel = zeilberger(&t, 2).unwrap();
        assert_eq!(tel.order(), 1);
        let q = family_recurrence().in_index("n", &[("a", int(a)), ("b", int(b))]);
        assert!(same_recurrence(&tel.sigma, &q), "({a},{b}): {:?}", tel.to_strings());
        let grid = pole_free_grid(&tel, 6, 0, 12);
        assert!(certificate_verify(&t, &tel, &grid, 15, |n| (0, 2 * n)).unwrap());
        assert_eq!(t.sum(1, 0, 2).unwrap(), closed_form_s(a, b, 1).unwrap());
    }
}

#[test]
fn perturbed_certificate_fails() {
    let t = binom_nk();
    let mut tel = zeilberger(&t, 1).unwrap();
    let c = &tel.certificate;
    tel.certificate = RationalFunction::new(c.num().add(&c.den_product()), c.den_factors().to_vec());
    let grid = pole_free_grid(&tel, 6, 0, 6);
    assert!(!certificate_verify(&t, &tel, &grid, 6, |n| (0, n)).unwrap());
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        // k^m c^k always has a hypergeometric antidifference.
        #[test]
        fn gosper_certificate_holds(c in 2i64..6, m in 0i64..3, ks in prop::collection::vec(-20i64..40, 50)) {
            let t = HyperTerm::new(vec![(Factor::Lin(Lin::k()), m), (Factor::Pow(int(c), Lin::k()), 1)]);
            let GosperResult::Summable(r) = gosper(&t) else { panic!("k^{m} {c}^k is summable") };
            let eval = |k: i64| -> Option<Rational> {
                let pt = [int(0), int(k)];
                let d = r.den_product().eval(&pt);
                (!d.is_zero()).then(|| r.num().eval(&pt) / d * t.eval(0, k).unwrap())
            };
            for k in ks.into_iter().filter(|&k| k > 0) {
                if let (Some(g0), Some(g1)) = (eval(k), eval(k + 1)) {
                    prop_assert_eq!(g1 - g0, t.eval(0, k).unwrap());
                }
            }
        }
    }
}
