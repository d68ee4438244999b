//! Polynomials in the summation index with coefficients in Q(n), and
//! linear algebra over Q(n).

use num_integer::Integer;
use num_traits::{One, Signed};

use super::term::Lin;
use crate::poly1::{RatFun, UPoly};
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPoly {
    coeffs: Vec<RatFun>,
}

impl KPoly {
    pub fn new(mut coeffs: Vec<RatFun>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        KPoly { coeffs }
    }

    pub fn zero() -> Self {
        KPoly { coeffs: vec![] }
    }

    pub fn constant(c: RatFun) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(RatFun::one())
    }

    /// `k^i`
    pub fn monomial(i: usize) -> Self {
        let mut c = vec![RatFun::zero(); i + 1];
        c[i] = RatFun::one();
        Self::new(c)
    }

    pub fn from_lin(l: &Lin) -> Self {
        Self::new(vec![RatFun::from_poly(UPoly::linear(l.n.clone(), l.c.clone())), RatFun::constant(l.k.clone())])
    }

    pub fn product(lins: &[Lin]) -> Self {
        lins.iter().fold(Self::one(), |acc, l| acc.mul(&Self::from_lin(l)))
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatFun {
        self.coeffs.get(i).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &KPoly) -> KPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &KPoly) -> KPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn scale(&self, c: &RatFun) -> KPoly {
        Self::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul(&self, o: &KPoly) -> KPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![RatFun::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    /// `p(k + s)`
    pub fn shift(&self, s: i64) -> KPoly {
        let lin = KPoly::new(vec![RatFun::constant(int(s)), RatFun::one()]);
        let mut acc = KPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&KPoly::constant(c.clone()));
        }
        acc
    }

    #[cfg(test)]
    pub fn eval(&self, n: &Rational, k: &Rational) -> Option<Rational> {
        let mut acc = <Rational as num_traits::Zero>::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c.eval(n)? * crate::rational::pow(k, i as u32);
        }
        Some(acc)
    }
}

/// A nonzero vector in the kernel of `m` (rows of equal length), chosen so
/// that at least one coordinate in `required` is nonzero; `None` otherwise.
pub fn kernel_vector(m: &[Vec<RatFun>], ncols: usize, required: &[usize]) -> Option<Vec<RatFun>> {
    let mut rows: Vec<Vec<RatFun>> = m.to_vec();
    let mut pivots: Vec<usize> = vec![];
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].inv();
        for c in col..ncols {
            rows[r][c] = rows[r][c].mul(&inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for c in col..ncols {
                    let d = rows[r][c].mul(&f);
                    rows[i][c] = rows[i][c].sub(&d);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    for &fcol in &free {
        let mut v = vec![RatFun::zero(); ncols];
        v[fcol] = RatFun::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = rows[i][fcol].neg();
        }
        if required.iter().any(|&j| !v[j].is_zero()) {
            return Some(v);
        }
    }
    None
}

/// Rescales `v` by one element of Q(n) so that the `primary` entries become
/// polynomials in `n` with trivial common gcd and integer content, the last
/// nonzero primary entry having a positive leading coefficient.
pub fn normalize(v: &[RatFun], primary: &[usize]) -> Vec<RatFun> {
    let mut l = UPoly::one();
    for &i in primary {
        let d = v[i].den();
        l = l.mul(&d.div_exact(&l.gcd(d)).unwrap());
    }
    let lf = RatFun::from_poly(l);
    let v: Vec<RatFun> = v.iter().map(|c| c.mul(&lf)).collect();
    let mut g = UPoly::zero();
    for &i in primary {
        g = g.gcd(v[i].num());
    }
    if g.is_zero() {
        return v;
    }
    let gf = RatFun::from_poly(g).inv();
    let v: Vec<RatFun> = v.iter().map(|c| c.mul(&gf)).collect();
    let mut content: Option<Rational> = None;
    for &i in primary {
        if v[i].is_zero() {
            continue;
        }
        let c = v[i].num().primitive_part().0.abs();
        content = Some(match content {
            None => c,
            Some(x) => rat_gcd(&x, &c),
        });
    }
    let mut scale = content.map(|c| c.recip()).unwrap_or_else(Rational::one);
    if let Some(&last) = primary.iter().rev().find(|&&i| !v[i].is_zero()) {
        if (v[last].num().lc() * &scale).is_negative() {
            scale = -scale;
        }
    }
    let sf = RatFun::constant(scale);
    v.iter().map(|c| c.mul(&sf)).collect()
}

fn rat_gcd(a: &Rational, b: &Rational) -> Rational {
    Rational::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_and_product() {
        let p = KPoly::product(&[Lin::k(), Lin::new(1, 1, int(2))]); // k (k + n + 2)
        let q = p.shift(1);
        assert_eq!(q.eval(&int(3), &int(4)), p.eval(&int(3), &int(5)));
    }

    #[test]
    fn kernel_over_qn() {
        // [n, 1; n^2, n] has kernel (1, -n)
        let n = RatFun::from_poly(UPoly::t());
        let m = vec![vec![n.clone(), RatFun::one()], vec![n.mul(&n), n.clone()]];
        let v = kernel_vector(&m, 2, &[0]).unwrap();
        assert_eq!(v[1].div(&v[0]), n.neg());
        assert!(kernel_vector(&m, 2, &[]).is_none());
    }

    #[test]
    fn normalization() {
        let n = UPoly::t();
        let v = vec![
            RatFun::new(n.scale(&int(-4)).add(&UPoly::constant(int(-2))), UPoly::constant(int(3))),
            RatFun::new(n.add(&UPoly::one()), UPoly::constant(int(3))),
        ];
        let p = normalize(&v, &[0, 1]);
        assert_eq!(p[0], RatFun::from_poly(UPoly::from_ints(&[-2, -4])));
        assert_eq!(p[1], RatFun::from_poly(UPoly::from_ints(&[1, 1])));
    }
}
