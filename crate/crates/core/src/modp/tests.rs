use super::*;
use crate::hypergeom::hyp_series;
use crate::rational::{int, rat};

fn mod2_spec() -> HypergeomSpec {
    HypergeomSpec::parse("3F2([1/9,4/9,5/9],[1/3,1];27^2)").unwrap()
}

fn geometric() -> HypergeomSpec {
    HypergeomSpec::new(vec![int(1)], vec![], int(1)).unwrap()
}

#[test]
fn modular_helpers() {
    assert_eq!(invmod(3, 7), Some(5));
    assert_eq!(invmod(2, 4), None);
    assert_eq!(max_precision(2), 63);
    assert!(3u128.pow(max_precision(3) + 1) > 1 << 63);
    assert_eq!(reduce_rational(&rat(-1, 3), 5, 1), Some(3));
}

#[test]
fn padic_coefficients() {
    // c_n of 2F1([1/2,1],[1];4x) is binomial(2n, n).
    let spec = HypergeomSpec::new(vec![rat(1, 2), int(1)], vec![int(1)], int(4)).unwrap();
    let got: Vec<PadicCoeff> = PadicCoeffs::new(&spec, 2, 10).unwrap().take(5).collect();
    let want = [(0, 1), (1, 1), (1, 3), (2, 5), (1, 35)];
    for (g, (e, u)) in got.iter().zip(want) {
        assert_eq!(*g, PadicCoeff::Unit { valuation: e, unit: u });
    }
    let term = HypergeomSpec::new(vec![int(-2)], vec![], int(1)).unwrap();
    let got: Vec<u64> = hyp_series_mod(&term, 7, 1, 5).unwrap().coeffs().to_vec();
    assert_eq!(got, vec![1, 5, 1, 0, 0, 0]);
}

#[test]
fn geometric_all_ones() {
    let f = hyp_series_mod(&geometric(), 5, 1, 10).unwrap();
    assert_eq!(f.coeffs(), &[1; 11]);
}

#[test]
fn refuses_non_integral() {
    let spec = HypergeomSpec::parse("3F2([1/9,4/9,5/9],[1/3,1];1)").unwrap();
    assert!(matches!(hyp_series_mod(&spec, 3, 1, 10), Err(ModpError::NonIntegralCoefficient { index: 1, .. })));
    assert!(matches!(hyp_series_mod(&geometric(), 4, 1, 3), Err(ModpError::NotPrime(4))));
    assert!(matches!(hyp_series_mod(&geometric(), 2, 64, 3), Err(ModpError::PrecisionExhausted { .. })));
}

#[test]
fn agrees_with_exact_reduction() {
    for (spec, p, r) in [(mod2_spec(), 2, 3), (mod2_spec(), 3, 2), (mod2_spec(), 5, 2), (mod2_spec(), 7, 1)] {
        let exact = hyp_series(&spec, 400).unwrap();
        let f = hyp_series_mod(&spec, p, r, 400).unwrap();
        for (i, c) in exact.coeffs().iter().enumerate() {
            assert_eq!(Some(f.coeff(i)), reduce_rational(c, p, r), "p = {p}, i = {i}");
        }
    }
}

#[test]
fn geometric_mahler_mod2() {
    let f = hyp_series_mod(&geometric(), 2, 1, 200).unwrap();
    let eq = guess_mahler(&f, 5, 4).unwrap();
    assert_eq!(eq.kind, EqKind::Multiplicative { s: 2, a: vec![1, 1] });
    assert_eq!(eq.to_string(), "F(x) = (1 + x)*F(x^2) mod 2");
}

#[test]
fn mod2_product_on_short_window() {
    let f = hyp_series_mod(&mod2_spec(), 2, 1, 20000).unwrap();
    assert_eq!(f.support(), vec![0, 2, 128, 130, 8192, 8194, 8320, 8322]);
    let eq = guess_mahler(&f, 8, 4).unwrap();
    assert_eq!(eq.kind, EqKind::Multiplicative { s: 64, a: vec![1, 0, 1] });
    let wrong = FunctionalEq { p: 2, r: 1, kind: EqKind::Multiplicative { s: 64, a: vec![1, 1] } };
    assert_eq!(verify_relation(&f, &wrong, 20000), RelationCheck::FailsAt(1));
}

#[test]
fn packed_and_reference_paths_agree() {
    let f = hyp_series_mod(&mod2_spec(), 2, 1, 9000).unwrap();
    for s in [2, 4, 64, 128] {
        for a in [vec![1], vec![1, 1], vec![1, 0, 1], vec![0, 1, 1, 1]] {
            let eq = FunctionalEq { p: 2, r: 1, kind: EqKind::Multiplicative { s, a } };
            for n in [0, 1, 15, 200, 8999] {
                assert_eq!(verify_relation(&f, &eq, n), guess::verify_reference(&f, &eq, n));
            }
        }
    }
}

#[test]
fn mod3_affine_and_cubic() {
    let f = hyp_series_mod(&mod2_spec(), 3, 2, 3usize.pow(9)).unwrap();
    assert!(f.reduce(1).coeffs().iter().enumerate().all(|(i, &c)| c == (i == 0) as u64));
    let g = f.drop_constant_div_p().unwrap().scale(2);
    assert_eq!(g.support(), (0..=9).map(|k| 3usize.pow(k)).collect::<Vec<_>>());
    let eq = guess_mahler(&g, 4, 3).unwrap();
    assert_eq!(eq.kind, EqKind::Affine { s: 3, a: vec![0, 1] });
    let g = g.truncate(400);
    let mp = guess_minpoly_mod(&g, 3, 1).unwrap();
    assert_eq!(mp.kind, EqKind::MinPoly { c: vec![vec![0, 1], vec![2], vec![], vec![1]] });
}

#[test]
fn sqrt_one_plus_x_mod7() {
    // (1 + x)^(1/2) as 1F0([-1/2];-x).
    let n = 60;
    let spec = HypergeomSpec::new(vec![rat(-1, 2)], vec![], int(-1)).unwrap();
    let f = hyp_series_mod(&spec, 7, 1, n).unwrap();
    let sq = f.mul_trunc(&f, n + 1);
    assert_eq!(&sq.coeffs()[..3], &[1, 1, 0]);
    assert!(sq.coeffs()[2..].iter().all(|&c| c == 0));
    let eq = guess_minpoly_mod(&f, 3, 2).unwrap();
    assert_eq!(eq.kind, EqKind::MinPoly { c: vec![vec![6, 6], vec![], vec![1]] });
}

#[test]
fn frobenius_on_samples() {
    let f = hyp_series_mod(&mod2_spec(), 5, 1, 300).unwrap();
    assert_eq!(f.frobenius_mismatch(), None);
    let broken = ModPSeries::new(5, 2, vec![1, 1]).reduce(1);
    assert_eq!(broken.frobenius_mismatch(), None);
}

#[test]
fn formats_round_trip() {
    let f = hyp_series_mod(&mod2_spec(), 3, 2, 100).unwrap();
    let mut bin = vec![];
    write_binary(&f, &mut bin).unwrap();
    assert_eq!(bin.len(), 8 * (3 + 101));
    assert_eq!(read_binary(&bin[..]).unwrap(), f);
    let mut txt = vec![];
    write_sparse_text(&f, &mut txt).unwrap();
    assert!(String::from_utf8(txt.clone()).unwrap().starts_with("# p=3 r=2 N=100\n0:1\n"));
    assert_eq!(read_sparse_text(&txt[..]).unwrap(), f);
    assert!(read_sparse_text(&b"# p=3 r=1 N=2\n5:1\n"[..]).is_err());
}

#[test]
fn mod2_algebraic_relation() {
    let f = hyp_series_mod(&mod2_spec(), 2, 1, 20000).unwrap();
    let eq = guess_minpoly_mod(&f, 64, 2).unwrap();
    let EqKind::MinPoly { c } = &eq.kind else { panic!() };
    assert_eq!(c.len(), 64);
    assert_eq!(c[0], vec![1]);
    assert_eq!(c[63], vec![1, 0, 1]);
    assert!(c[1..63].iter().all(|ci| ci.is_empty()));
    let frob = FunctionalEq {
        p: 2,
        r: 1,
        kind: EqKind::MinPoly {
            c: {
                let mut c = vec![vec![]; 65];
                c[1] = vec![1];
                c[64] = vec![1, 0, 1];
                c
            },
        },
    };
    assert!(verify_relation(&f, &frob, 20000).holds());
}
