use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{SeriesError, UniSeries, MAX_BOX_VOLUME};
use crate::expr::MPoly;
use crate::rational::Rational;

/// Multivariate power series truncated to the box `e_i <= trunc[i]`.
///
/// Coefficients are stored densely in row-major order (last variable
/// fastest), so a multi-index maps to a flat position by mixed radix.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiSeries {
    vars: Vec<String>,
    trunc: Vec<u32>,
    strides: Vec<usize>,
    coeffs: Vec<Rational>,
}

fn strides_for(trunc: &[u32]) -> Result<(Vec<usize>, usize), SeriesError> {
    let mut strides = vec![0; trunc.len()];
    let mut vol: usize = 1;
    for i in (0..trunc.len()).rev() {
        strides[i] = vol;
        vol = vol
            .checked_mul(trunc[i] as usize + 1)
            .filter(|&v| v <= MAX_BOX_VOLUME)
            .ok_or(SeriesError::TooLarge(usize::MAX))?;
    }
    Ok((strides, vol))
}

impl MultiSeries {
    pub fn zero(vars: &[String], trunc: &[u32]) -> Result<Self, SeriesError> {
        assert_eq!(vars.len(), trunc.len());
        let (strides, vol) = strides_for(trunc)?;
        Ok(MultiSeries { vars: vars.to_vec(), trunc: trunc.to_vec(), strides, coeffs: vec![Rational::zero(); vol] })
    }

    pub fn constant(vars: &[String], trunc: &[u32], c: Rational) -> Result<Self, SeriesError> {
        let mut s = Self::zero(vars, trunc)?;
        s.coeffs[0] = c;
        Ok(s)
    }

    /// Truncation of a polynomial to the box.
    pub fn from_poly(p: &MPoly, trunc: &[u32]) -> Result<Self, SeriesError> {
        let mut s = Self::zero(p.vars(), trunc)?;
        for (e, c) in p.terms() {
            if s.in_box(e) {
                let i = s.index(e);
                s.coeffs[i] = c.clone();
            }
        }
        Ok(s)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn trunc(&self) -> &[u32] {
        &self.trunc
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn in_box(&self, e: &[u32]) -> bool {
        e.iter().zip(&self.trunc).all(|(a, b)| a <= b)
    }

    pub fn index(&self, e: &[u32]) -> usize {
        e.iter().zip(&self.strides).map(|(&k, &s)| k as usize * s).sum()
    }

    /// Multi-index of a flat position.
    pub fn exponent(&self, mut idx: usize) -> Vec<u32> {
        let mut e = vec![0; self.trunc.len()];
        for (i, &s) in self.strides.iter().enumerate() {
            e[i] = (idx / s) as u32;
            idx %= s;
        }
        e
    }

    /// Coefficient at `e`; zero outside the box.
    pub fn coeff(&self, e: &[u32]) -> Rational {
        if self.in_box(e) {
            self.coeffs[self.index(e)].clone()
        } else {
            Rational::zero()
        }
    }

    pub fn coeff_ref(&self, e: &[u32]) -> &Rational {
        &self.coeffs[self.index(e)]
    }

    pub fn set(&mut self, e: &[u32], c: Rational) {
        let i = self.index(e);
        self.coeffs[i] = c;
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Nonzero coefficients with their multi-indices, in storage order.
    pub fn nonzero_terms(&self) -> Vec<(Vec<u32>, &Rational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (self.exponent(i), c)).collect()
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    fn same_shape(&self, other: &MultiSeries) -> Result<(), SeriesError> {
        if self.vars != other.vars || self.trunc != other.trunc {
            return Err(SeriesError::Mismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiSeries) -> Result<MultiSeries, SeriesError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiSeries) -> Result<MultiSeries, SeriesError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Rational) -> MultiSeries {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c *= k;
        }
        out
    }

    /// Nonzero entries as (flat index, exponent, coefficient).
    fn sparse_entries(&self) -> Vec<(Vec<u32>, Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.exponent(i), c.clone()))
            .collect()
    }

    /// Truncated product. Each output coefficient is gathered independently,
    /// so the result does not depend on the thread count.
    pub fn mul(&self, other: &MultiSeries) -> Result<MultiSeries, SeriesError> {
        self.same_shape(other)?;
        let (sparse, dense) = if self.count_nonzero() <= other.count_nonzero() { (self, other) } else { (other, self) };
        let entries = sparse.sparse_entries();
        let mut out = MultiSeries::zero(&self.vars, &self.trunc)?;
        let coeffs: Vec<Rational> = (0..out.coeffs.len())
            .into_par_iter()
            .map(|idx| {
                let e = dense.exponent(idx);
                let mut acc = Rational::zero();
                for (d, c) in &entries {
                    if d.iter().zip(&e).all(|(a, b)| a <= b) {
                        let j = idx - dense.index(d);
                        let b = &dense.coeffs[j];
                        if !b.is_zero() {
                            acc += c * b;
                        }
                    }
                }
                acc
            })
            .collect();
        out.coeffs = coeffs;
        Ok(out)
    }

    pub fn count_nonzero(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn pow(&self, k: u32) -> Result<MultiSeries, SeriesError> {
        let mut acc = MultiSeries::constant(&self.vars, &self.trunc, Rational::one())?;
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `num / self` by solving `self * q = num` coefficient by coefficient.
    pub fn divide_into(&self, num: &MultiSeries) -> Result<MultiSeries, SeriesError> {
        self.same_shape(num)?;
        let c0 = self.coeffs[0].clone();
        if c0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let inv0 = c0.recip();
        let entries: Vec<(Vec<u32>, usize, Rational)> = self
            .sparse_entries()
            .into_iter()
            .filter(|(d, _)| d.iter().any(|&k| k > 0))
            .map(|(d, c)| {
                let i = self.index(&d);
                (d, i, c)
            })
            .collect();
        let mut q = MultiSeries::zero(&self.vars, &self.trunc)?;
        for idx in 0..q.coeffs.len() {
            let e = q.exponent(idx);
            let mut acc = num.coeffs[idx].clone();
            for (d, di, c) in &entries {
                if d.iter().zip(&e).all(|(a, b)| a <= b) {
                    let prev = &q.coeffs[idx - di];
                    if !prev.is_zero() {
                        acc -= c * prev;
                    }
                }
            }
            q.coeffs[idx] = acc * &inv0;
        }
        Ok(q)
    }

    pub fn inverse(&self) -> Result<MultiSeries, SeriesError> {
        let one = MultiSeries::constant(&self.vars, &self.trunc, Rational::one())?;
        self.divide_into(&one)
    }

    /// `(c0 + u)^alpha` for constant term `c0 = 1`, via the first-order
    /// relation `(1+u) E(g) = alpha g E(u)` with `E` the total-degree operator.
    pub fn pow_rational(&self, alpha: &Rational) -> Result<MultiSeries, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::NotInvertible);
        }
        let entries: Vec<(Vec<u32>, usize, u32, Rational)> = self
            .sparse_entries()
            .into_iter()
            .filter(|(d, _)| d.iter().any(|&k| k > 0))
            .map(|(d, c)| {
                let i = self.index(&d);
                let deg = d.iter().sum();
                (d, i, deg, c)
            })
            .collect();
        let mut g = MultiSeries::constant(&self.vars, &self.trunc, Rational::one())?;
        for idx in 1..g.coeffs.len() {
            let e = g.exponent(idx);
            let total: u32 = e.iter().sum();
            let mut acc = Rational::zero();
            for (d, di, deg, c) in &entries {
                if d.iter().zip(&e).all(|(a, b)| a <= b) {
                    let prev = &g.coeffs[idx - di];
                    if prev.is_zero() {
                        continue;
                    }
                    let w =
                        alpha * Rational::from_integer((*deg).into()) - Rational::from_integer((total - deg).into());
                    acc += w * c * prev;
                }
            }
            g.coeffs[idx] = acc / Rational::from_integer(total.into());
        }
        Ok(g)
    }

    /// Coefficients `c_m` of `x1^m ... xn^m` for `m <= min(trunc)`.
    pub fn diagonal(&self, var: &str) -> UniSeries {
        let m = self.trunc.iter().copied().min().unwrap_or(0);
        let coeffs = (0..=m).map(|k| self.coeff(&vec![k; self.trunc.len()])).collect();
        UniSeries::new(var, coeffs)
    }

    /// Collapses each pair `(u, v)` onto `u`, keeping only terms whose `u` and
    /// `v` exponents agree; the collapsed variable carries that common exponent.
    pub fn partial_diagonal(&self, pairs: &[(String, String)]) -> Result<MultiSeries, SeriesError> {
        let pos = |name: &str| {
            self.vars.iter().position(|v| v == name).ok_or_else(|| SeriesError::UnknownVariable(name.to_string()))
        };
        let mut partner: Vec<Option<usize>> = vec![None; self.vars.len()];
        let mut dropped = vec![false; self.vars.len()];
        let mut used = vec![false; self.vars.len()];
        for (a, b) in pairs {
            let (i, j) = (pos(a)?, pos(b)?);
            for k in [i, j] {
                if used[k] {
                    return Err(SeriesError::OverlappingPairs(self.vars[k].clone()));
                }
                used[k] = true;
            }
            if i == j {
                return Err(SeriesError::OverlappingPairs(self.vars[i].clone()));
            }
            partner[i] = Some(j);
            dropped[j] = true;
        }
        let kept: Vec<usize> = (0..self.vars.len()).filter(|&i| !dropped[i]).collect();
        let vars: Vec<String> = kept.iter().map(|&i| self.vars[i].clone()).collect();
        let trunc: Vec<u32> = kept
            .iter()
            .map(|&i| match partner[i] {
                Some(j) => self.trunc[i].min(self.trunc[j]),
                None => self.trunc[i],
            })
            .collect();
        let mut out = MultiSeries::zero(&vars, &trunc)?;
        for idx in 0..out.coeffs.len() {
            let e = out.exponent(idx);
            let mut full = vec![0u32; self.vars.len()];
            for (k, &i) in kept.iter().enumerate() {
                full[i] = e[k];
                if let Some(j) = partner[i] {
                    full[j] = e[k];
                }
            }
            out.coeffs[idx] = self.coeffs[self.index(&full)].clone();
        }
        Ok(out)
    }

    /// Keeps terms whose exponent in `y` equals the sum of the other
    /// exponents, and drops `y`.
    pub fn d_operator(&self, y: &str) -> Result<MultiSeries, SeriesError> {
        let yi = self.vars.iter().position(|v| v == y).ok_or_else(|| SeriesError::UnknownVariable(y.to_string()))?;
        let others: Vec<usize> = (0..self.vars.len()).filter(|&i| i != yi).collect();
        let need: u32 = others.iter().map(|&i| self.trunc[i]).sum();
        if self.trunc[yi] < need {
            return Err(SeriesError::InsufficientTruncation { var: y.to_string(), have: self.trunc[yi], need });
        }
        let vars: Vec<String> = others.iter().map(|&i| self.vars[i].clone()).collect();
        let trunc: Vec<u32> = others.iter().map(|&i| self.trunc[i]).collect();
        let mut out = MultiSeries::zero(&vars, &trunc)?;
        for idx in 0..out.coeffs.len() {
            let e = out.exponent(idx);
            let mut full = vec![0u32; self.vars.len()];
            for (k, &i) in others.iter().enumerate() {
                full[i] = e[k];
            }
            full[yi] = e.iter().sum();
            out.coeffs[idx] = self.coeffs[self.index(&full)].clone();
        }
        Ok(out)
    }

    /// Restriction to a smaller box.
    pub fn restrict(&self, trunc: &[u32]) -> Result<MultiSeries, SeriesError> {
        if trunc.len() != self.trunc.len() || trunc.iter().zip(&self.trunc).any(|(a, b)| a > b) {
            return Err(SeriesError::Mismatch);
        }
        let mut out = MultiSeries::zero(&self.vars, trunc)?;
        for idx in 0..out.coeffs.len() {
            let e = out.exponent(idx);
            out.coeffs[idx] = self.coeffs[self.index(&e)].clone();
        }
        Ok(out)
    }

    /// One-variable view.
    pub fn to_uni(&self) -> Option<UniSeries> {
        (self.vars.len() == 1).then(|| UniSeries::new(&self.vars[0], self.coeffs.clone()))
    }

    /// Sparse map view, used for comparisons and serialisation.
    pub fn to_map(&self) -> BTreeMap<Vec<u32>, Rational> {
        self.nonzero_terms().into_iter().map(|(e, c)| (e, c.clone())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expr, var_names};
    use crate::rational::{int, rat};

    fn poly(t: &str, v: &[String]) -> MPoly {
        parse_expr(t, v).unwrap().as_poly(v).unwrap()
    }

    #[test]
    fn product_and_inverse() {
        let v = var_names(&["x", "y"]);
        let a = MultiSeries::from_poly(&poly("1-x-y", &v), &[3, 3]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(inv.coeff(&[1, 2]), int(3));
        assert_eq!(inv.coeff(&[2, 2]), int(6));
        let one = a.mul(&inv).unwrap();
        assert_eq!(one.count_nonzero(), 1);
        assert_eq!(one.coeff(&[0, 0]), int(1));
    }

    #[test]
    fn rational_power_matches_square() {
        let v = var_names(&["x", "y"]);
        let a = MultiSeries::from_poly(&poly("1+x-2*y+x*y", &v), &[4, 4]).unwrap();
        let r = a.pow_rational(&rat(1, 2)).unwrap();
        assert_eq!(r.mul(&r).unwrap(), a);
        let c = a.pow_rational(&rat(1, 3)).unwrap();
        assert_eq!(c.pow(3).unwrap(), a);
    }

    #[test]
    fn partial_diagonal_examples() {
        let v = var_names(&["x", "y"]);
        let s = MultiSeries::from_poly(&poly("x+y+x*y", &v), &[2, 2]).unwrap();
        let pd = s.partial_diagonal(&[("x".into(), "y".into())]).unwrap();
        assert_eq!(pd.vars(), &["x".to_string()]);
        assert_eq!(pd.to_uni().unwrap().coeffs(), &[int(0), int(1), int(0)]);
        assert_eq!(pd.to_uni().unwrap(), s.diagonal("x"));
        let err = s.partial_diagonal(&[("x".into(), "y".into()), ("y".into(), "x".into())]);
        assert!(matches!(err, Err(SeriesError::OverlappingPairs(_))));
    }

    #[test]
    fn d_operator_examples() {
        let v = var_names(&["x", "y"]);
        let s = MultiSeries::from_poly(&poly("x*y", &v), &[3, 3]).unwrap();
        let d = s.d_operator("y").unwrap();
        assert_eq!(d.to_uni().unwrap().coeffs(), &[int(0), int(1), int(0), int(0)]);
        let s = MultiSeries::from_poly(&poly("2+x+x^2", &v), &[3, 3]).unwrap();
        let d = s.d_operator("y").unwrap();
        assert_eq!(d.to_uni().unwrap().coeffs(), &[int(2), int(0), int(0), int(0)]);
        let s = MultiSeries::from_poly(&poly("x*y", &v), &[3, 2]).unwrap();
        assert!(matches!(s.d_operator("y"), Err(SeriesError::InsufficientTruncation { need: 3, .. })));
    }

    #[test]
    fn oversized_box_is_an_error() {
        let v = var_names(&["a", "b", "c", "d", "e"]);
        assert!(matches!(MultiSeries::zero(&v, &[60; 5]), Err(SeriesError::TooLarge(_))));
    }
}
