use num_integer::Integer;
use num_traits::{One, Zero};

use super::ode::Recurrence;
use super::{HypergeomError, HypergeomSpec};
use crate::expr::{var_names, MPoly};
use crate::rational::{binomial, factorial, int, pochhammer, rat, Rational};

fn check_family(a: i64, b: i64) -> Result<(), HypergeomError> {
    if a <= 0 || b <= 0 {
        return Err(HypergeomError::DegenerateParameters(format!("need a, b > 0, got ({a}, {b})")));
    }
    if a.gcd(&b) != 1 {
        return Err(HypergeomError::DegenerateParameters(format!("{a} and {b} are not coprime")));
    }
    if a % b == 0 {
        return Err(HypergeomError::DegenerateParameters(format!("a/b = {} is an integer", a / b)));
    }
    Ok(())
}

/// `3F2([(b-a)/3b, (2b-a)/3b, (3b-a)/3b], [(b-a)/b, 1]; 27)`.
pub fn family_spec(a: i64, b: i64) -> Result<HypergeomSpec, HypergeomError> {
    check_family(a, b)?;
    HypergeomSpec::new(
        vec![rat(b - a, 3 * b), rat(2 * b - a, 3 * b), rat(3 * b - a, 3 * b)],
        vec![rat(b - a, b), int(1)],
        int(27),
    )
}

/// `27^n ((b-a)/3b)_n ((2b-a)/3b)_n ((3b-a)/3b)_n / (((b-a)/b)_n (n!)^2)`.
pub fn closed_form_s(a: i64, b: i64, n: u64) -> Result<Rational, HypergeomError> {
    check_family(a, b)?;
    let mut num = crate::rational::pow(&int(27), n as u32);
    for k in 1..=3 {
        num *= pochhammer(&rat(k * b - a, 3 * b), n);
    }
    let f = Rational::from_integer(factorial(n));
    Ok(num / (pochhammer(&rat(b - a, b), n) * &f * &f))
}

/// `binom(2n, n) * sum_{k=0}^{2n} ((-a/b)_k / k!) binom(3n-k, 2n-k)`.
pub fn coefficient_sum_oracle(a: i64, b: i64, n: u64) -> Rational {
    let n = n as i64;
    let alpha = rat(-a, b);
    let mut term = Rational::one(); // (alpha)_k / k!
    let mut sum = Rational::zero();
    for k in 0..=2 * n {
        if k > 0 {
            term = term * (&alpha + int(k - 1)) / int(k);
        }
        sum += &term * Rational::from_integer(binomial(3 * n - k, 2 * n - k));
    }
    sum * Rational::from_integer(binomial(2 * n, n))
}

/// Both sides of `sum_j binom(k, j) binom(2n-k, n-j) = binom(2n, n)`.
pub fn chu_vandermonde_check(n: i64, k: i64) -> bool {
    let lhs: num_bigint::BigInt = (0..=k).map(|j| binomial(k, j) * binomial(2 * n - k, n - j)).sum();
    lhs == binomial(2 * n, n)
}

fn lin(vars: &[String], c: i64, terms: &[(&str, i64)]) -> MPoly {
    let mut p = MPoly::constant(vars, int(c));
    for (v, k) in terms {
        p = p.add(&MPoly::var_named(vars, v).unwrap().scale(&int(*k)));
    }
    p
}

/// `Q_0 S(n) + Q_1 S(n+1) = 0` over `Q[a, b, n]` with
/// `Q_0 = (a-3b-3bn)(a-2b-3bn)(a-b-3bn)` and `Q_1 = -b^2 (n+1)^2 (a-b-bn)`.
pub fn family_recurrence() -> Recurrence {
    let v = var_names(&["a", "b", "n"]);
    let b = MPoly::var_named(&v, "b").unwrap();
    let n = MPoly::var_named(&v, "n").unwrap();
    let three_bn = b.mul(&n).scale(&int(3));
    let mut q0 = MPoly::one(&v);
    for k in 1..=3 {
        q0 = q0.mul(&lin(&v, 0, &[("a", 1), ("b", -k)]).sub(&three_bn));
    }
    let inner = lin(&v, 0, &[("a", 1), ("b", -1)]).sub(&b.mul(&n));
    let q1 = b.pow(2).mul(&lin(&v, 1, &[("n", 1)]).pow(2)).mul(&inner).neg();
    Recurrence::new(v, vec![q0, q1])
}

/// Checks the first-order family recurrence as an identity in `Q[a, b, n]`
/// against the Pochhammer ratio of `family_spec`, built symbolically and
/// with denominators cleared.
pub fn recurrence_verify_symbolic() -> bool {
    let rec = family_recurrence();
    let v = rec.vars().to_vec();
    let a = MPoly::var_named(&v, "a").unwrap();
    let b = MPoly::var_named(&v, "b").unwrap();
    let n = MPoly::var_named(&v, "n").unwrap();
    let one = MPoly::one(&v);
    // parameter p/q contributes (p + q n)/q to the ratio
    let upper: Vec<(MPoly, MPoly)> = (1..=3).map(|k| (b.scale(&int(k)).sub(&a), b.scale(&int(3)))).collect();
    let lower = vec![(b.sub(&a), b.clone()), (one.clone(), one.clone()), (one.clone(), one.clone())];
    let mut num = MPoly::constant(&v, int(27));
    let mut den = MPoly::one(&v);
    for (p, q) in &upper {
        num = num.mul(&p.add(&q.mul(&n)));
        den = den.mul(q);
    }
    for (p, q) in &lower {
        den = den.mul(&p.add(&q.mul(&n)));
        num = num.mul(q);
    }
    // Q_0 + Q_1 * num/den == 0
    let q = rec.coeffs();
    q[0].mul(&den).add(&q[1].mul(&num)).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeom::hyp_series;

    #[test]
    fn family_parameters() {
        let s = family_spec(1, 3).unwrap();
        assert_eq!(s.upper, vec![rat(2, 9), rat(5, 9), rat(8, 9)]);
        assert_eq!(s.lower, vec![rat(2, 3), int(1)]);
        assert_eq!(family_spec(2, 3).unwrap().upper, vec![rat(1, 9), rat(4, 9), rat(7, 9)]);
        let s = family_spec(1, 7).unwrap();
        assert_eq!(s.upper, vec![rat(2, 7), rat(13, 21), rat(20, 21)]);
        assert_eq!(s.lower, vec![rat(6, 7), int(1)]);
        assert!(family_spec(1, 1).is_err());
        assert!(family_spec(2, 4).is_err());
        assert!(family_spec(0, 3).is_err());
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(closed_form_s(1, 3, 0).unwrap(), int(1));
        assert_eq!(closed_form_s(1, 3, 1).unwrap(), rat(40, 9));
        assert_eq!(closed_form_s(3, 4, 1).unwrap(), rat(45, 16));
        assert_eq!(closed_form_s(3, 4, 2).unwrap(), rat(41769, 1024));
        assert_eq!(closed_form_s(1, 7, 1).unwrap(), rat(260, 49));
        assert_eq!(closed_form_s(1, 7, 2).unwrap(), rat(188190, 2401));
        assert_eq!(closed_form_s(2, 3, 2).unwrap(), rat(32760, 729));
    }

    #[test]
    fn oracle_agrees() {
        assert_eq!(coefficient_sum_oracle(1, 3, 1), rat(40, 9));
        assert_eq!(coefficient_sum_oracle(5, 2, 0), int(1));
        for (a, b) in [(1, 3), (2, 3), (1, 7), (3, 4), (5, 2)] {
            let h = hyp_series(&family_spec(a, b).unwrap(), 8).unwrap();
            for n in 0..=8u64 {
                let s = closed_form_s(a, b, n).unwrap();
                assert_eq!(coefficient_sum_oracle(a, b, n), s, "({a},{b}) n={n}");
                assert_eq!(h.coeff(n as usize), s);
            }
        }
    }

    #[test]
    fn chu_vandermonde() {
        assert!(chu_vandermonde_check(1, 0));
        assert!(chu_vandermonde_check(0, 0));
        assert!(chu_vandermonde_check(5, 3));
    }

    #[test]
    fn symbolic_recurrence() {
        assert!(recurrence_verify_symbolic());
        let rec = family_recurrence();
        // (a,b,n) = (1,3,0): -80 * 1 + (-18) * 40/9 ... with Q_1 = -RHS
        let q = rec.specialize(&[("a", int(1)), ("b", int(3)), ("n", int(0))]);
        assert_eq!(q, vec![int(-80), int(18)]);
        assert_eq!(&q[0] + &q[1] * rat(40, 9), int(0));
        let s1 = closed_form_s(2, 3, 1).unwrap();
        let s2 = closed_form_s(2, 3, 2).unwrap();
        let q = rec.specialize(&[("a", int(2)), ("b", int(3)), ("n", int(1))]);
        assert_eq!(&q[0] * s1 + &q[1] * s2, int(0));
    }
}
