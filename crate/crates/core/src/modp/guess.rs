use std::fmt;

use super::{invmod, mulmod, Gf2Series, ModPSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EqKind {
    /// `F(x) = A(x) F(x^s)`.
    Multiplicative { s: usize, a: Vec<u64> },
    /// `F(x) = A(x) + F(x^s)`.
    Affine { s: usize, a: Vec<u64> },
    /// `sum_i c_i(x) F^i = 0`.
    MinPoly { c: Vec<Vec<u64>> },
}

/// A functional equation over `Z/p^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalEq {
    pub p: u64,
    pub r: u32,
    pub kind: EqKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationCheck {
    Holds,
    FailsAt(usize),
}

impl RelationCheck {
    pub fn holds(&self) -> bool {
        *self == RelationCheck::Holds
    }
}

fn fmt_poly(c: &[u64]) -> String {
    let terms: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, a)| **a != 0)
        .map(|(i, &a)| match (i, a) {
            (0, a) => a.to_string(),
            (1, 1) => "x".into(),
            (1, a) => format!("{a}*x"),
            (i, 1) => format!("x^{i}"),
            (i, a) => format!("{a}*x^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

impl FunctionalEq {
    /// `Multiplicative(64, 1 + x^2)`, `Affine(3, x)` or `MinPoly(d)`.
    pub fn summary(&self) -> String {
        match &self.kind {
            EqKind::Multiplicative { s, a } => format!("Multiplicative({s}, {})", fmt_poly(a)),
            EqKind::Affine { s, a } => format!("Affine({s}, {})", fmt_poly(a)),
            EqKind::MinPoly { c } => format!("MinPoly({})", c.len() - 1),
        }
    }
}

impl fmt::Display for FunctionalEq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            EqKind::Multiplicative { s, a } => write!(f, "F(x) = ({})*F(x^{s})", fmt_poly(a))?,
            EqKind::Affine { s, a } => write!(f, "F(x) = {} + F(x^{s})", fmt_poly(a))?,
            EqKind::MinPoly { c } => {
                let terms: Vec<String> = c
                    .iter()
                    .enumerate()
                    .filter(|(_, ci)| ci.iter().any(|a| *a != 0))
                    .map(|(i, ci)| match i {
                        0 => format!("({})", fmt_poly(ci)),
                        1 => format!("({})*F", fmt_poly(ci)),
                        _ => format!("({})*F^{i}", fmt_poly(ci)),
                    })
                    .collect();
                write!(f, "{} = 0", terms.join(" + "))?
            }
        }
        if self.r == 1 {
            write!(f, " mod {}", self.p)
        } else {
            write!(f, " mod {}^{}", self.p, self.r)
        }
    }
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Smallest `s = p^e`, `e <= s_max`, with `F = A F(x^s)` (when `F(0)` is a
/// unit) or `F = A + F(x^s)` (when `F(0) = 0`) and `deg A <= deg_a_max`.
/// Guessed on the first half of the coefficients, verified on all of them.
pub fn guess_mahler(f: &ModPSeries, s_max: u32, deg_a_max: usize) -> Option<FunctionalEq> {
    let (p, m) = (f.p(), f.modulus());
    let w = f.len() / 2;
    let f0 = f.coeff(0);
    for e in 1..=s_max {
        let s = p.checked_pow(e)? as usize;
        if s >= w {
            break;
        }
        let c = f.coeffs();
        let kind = if f0 % p != 0 {
            let inv = invmod(f0, m)?;
            let d = deg_a_max.min(w - 1);
            let mut a = vec![0u64; d + 1];
            for i in 0..=d {
                let mut acc = c[i];
                for j in 0..i {
                    if (i - j) % s == 0 {
                        acc = (acc + m - mulmod(a[j], c[(i - j) / s], m)) % m;
                    }
                }
                a[i] = mulmod(acc, inv, m);
            }
            let ok = (0..w).all(|i| {
                let mut acc = 0u64;
                for j in (i % s..=i.min(d)).step_by(s) {
                    acc = (acc + mulmod(a[j], c[(i - j) / s], m)) % m;
                }
                acc == c[i]
            });
            if !ok {
                continue;
            }
            EqKind::Multiplicative { s, a: trim(a) }
        } else if f0 == 0 {
            let diff = |i: usize| (c[i] + m - if i % s == 0 { c[i / s] } else { 0 }) % m;
            if (deg_a_max + 1..w).any(|i| diff(i) != 0) {
                continue;
            }
            EqKind::Affine { s, a: trim((0..=deg_a_max.min(w - 1)).map(diff).collect()) }
        } else {
            return None;
        };
        let eq = FunctionalEq { p, r: f.r(), kind };
        if verify_relation(f, &eq, f.degree()).holds() {
            return Some(eq);
        }
    }
    None
}

/// Checks the relation through degree `n`. Multiplicative relations over
/// GF(2) use the packed path.
pub fn verify_relation(f: &ModPSeries, eq: &FunctionalEq, n: usize) -> RelationCheck {
    assert!(n <= f.degree(), "relation checked beyond the series length");
    match &eq.kind {
        EqKind::Multiplicative { s, a } if f.p() == 2 && f.r() == 1 => {
            let g = Gf2Series::from_modp(&f.truncate(n + 1));
            let support: Vec<usize> = a.iter().enumerate().filter(|(_, c)| **c % 2 == 1).map(|(i, _)| i).collect();
            let rhs = g.substitute_power(*s).mul_sparse(&support);
            g.first_difference(&rhs).map_or(RelationCheck::Holds, RelationCheck::FailsAt)
        }
        _ => verify_reference(f, eq, n),
    }
}

/// Coefficientwise check without packing.
pub(crate) fn verify_reference(f: &ModPSeries, eq: &FunctionalEq, n: usize) -> RelationCheck {
    let m = f.modulus();
    let c = f.coeffs();
    let fail = |i: Option<usize>| i.map_or(RelationCheck::Holds, RelationCheck::FailsAt);
    match &eq.kind {
        EqKind::Multiplicative { s, a } => fail((0..=n).find(|&i| {
            let mut acc = 0u64;
            for (j, &aj) in a.iter().enumerate().take(i + 1) {
                if (i - j) % s == 0 {
                    acc = (acc + mulmod(aj, c[(i - j) / s], m)) % m;
                }
            }
            acc != c[i]
        })),
        EqKind::Affine { s, a } => fail((0..=n).find(|&i| {
            let rhs = a.get(i).copied().unwrap_or(0) + if i % s == 0 { c[i / s] } else { 0 };
            rhs % m != c[i]
        })),
        EqKind::MinPoly { c: cs } => {
            let len = n + 1;
            let f = f.truncate(len);
            let mut acc = ModPSeries::zero(f.p(), f.r(), len);
            let mut one = vec![0; len];
            one[0] = 1;
            let mut pw = ModPSeries::new(f.p(), f.r(), one);
            for (i, ci) in cs.iter().enumerate() {
                if i > 0 {
                    pw = pw.mul_trunc(&f, len);
                }
                let cpoly = ModPSeries::new(f.p(), f.r(), ci.clone());
                acc = acc.add(&pw.mul_trunc(&cpoly, len));
            }
            fail(acc.coeffs().iter().position(|&x| x != 0))
        }
    }
}

/// Row-echelon accumulator over GF(p); later rows vanish at earlier pivots.
struct Echelon {
    p: u64,
    ncols: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    fn push(&mut self, mut row: Vec<u64>) {
        let p = self.p;
        for (pc, b) in &self.rows {
            let f = row[*pc];
            if f != 0 {
                for (x, y) in row.iter_mut().zip(b) {
                    *x = (*x + p - mulmod(f, *y, p)) % p;
                }
            }
        }
        if let Some(pc) = row.iter().position(|&x| x != 0) {
            let inv = invmod(row[pc], p).unwrap();
            for x in row.iter_mut() {
                *x = mulmod(*x, inv, p);
            }
            self.rows.push((pc, row));
        }
    }

    /// A kernel vector using the last free column.
    fn kernel_vector(mut self) -> Option<Vec<u64>> {
        let p = self.p;
        self.rows.sort_by_key(|(pc, _)| *pc);
        for i in (0..self.rows.len()).rev() {
            let (pc, pivot_row) = self.rows[i].clone();
            for j in 0..i {
                let f = self.rows[j].1[pc];
                if f != 0 {
                    for (x, y) in self.rows[j].1.iter_mut().zip(&pivot_row) {
                        *x = (*x + p - mulmod(f, *y, p)) % p;
                    }
                }
            }
        }
        let pivots: Vec<usize> = self.rows.iter().map(|(pc, _)| *pc).collect();
        let free = (0..self.ncols).rev().find(|c| !pivots.contains(c))?;
        let mut v = vec![0u64; self.ncols];
        v[free] = 1;
        for (pc, row) in &self.rows {
            v[*pc] = (p - row[free]) % p;
        }
        Some(v)
    }
}

/// Relation `sum_{i<=d} c_i(x) F^i = 0` over GF(p) of least degree
/// `d <= d_max` with `deg c_i <= deg_max`, from the nullspace of the
/// coefficient-matching system on the first half of the series.
pub fn guess_minpoly_mod(f: &ModPSeries, d_max: usize, deg_max: usize) -> Option<FunctionalEq> {
    if f.r() != 1 {
        return None;
    }
    let p = f.p();
    let w = f.len() / 2;
    if w == 0 {
        return None;
    }
    let mut one = vec![0; w];
    one[0] = 1;
    let mut powers = vec![ModPSeries::new(p, 1, one)];
    let fw = f.truncate(w);
    for _ in 0..d_max {
        let next = powers.last().unwrap().mul_trunc(&fw, w);
        powers.push(next);
    }
    for d in 1..=d_max {
        for deg in 0..=deg_max {
            if let Some(eq) = minpoly_attempt(f, &powers, d, deg) {
                return Some(eq);
            }
        }
    }
    None
}

fn minpoly_attempt(f: &ModPSeries, powers: &[ModPSeries], d: usize, deg: usize) -> Option<FunctionalEq> {
    let p = f.p();
    let ncols = (d + 1) * (deg + 1);
    let mut ech = Echelon { p, ncols, rows: vec![] };
    for row in 0..powers[0].len() {
        let entries: Vec<u64> = (0..=d)
            .flat_map(|i| (0..=deg).map(move |j| (i, j)))
            .map(|(i, j)| if row >= j { powers[i].coeff(row - j) } else { 0 })
            .collect();
        if entries.iter().any(|&x| x != 0) {
            ech.push(entries);
            if ech.rows.len() == ncols {
                return None;
            }
        }
    }
    let v = ech.kernel_vector()?;
    let c: Vec<Vec<u64>> = v.chunks(deg + 1).map(|ch| trim(ch.to_vec())).collect();
    let eq = FunctionalEq { p, r: 1, kind: EqKind::MinPoly { c } };
    verify_relation(f, &eq, f.degree()).holds().then_some(eq)
}
