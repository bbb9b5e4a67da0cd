//! Univariate polynomials `K[q]` and Smith normal form over them.
//!
//! `q` carries an internal degree (for the Koszul dual of `A_d` it is `1 - d`),
//! so a monomial `q^e` is homogeneous of degree `e * generator_degree`.

use std::fmt;

use crate::field::Field;

/// Sparse polynomial: `(exponent, coefficient)` pairs with strictly increasing
/// exponents and no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F> {
    terms: Vec<(u32, F)>,
    generator_degree: i64,
}

impl<F: fmt::Debug> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.terms)
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| match (*e, c.is_one()) {
                (0, _) => c.to_string(),
                (1, true) => "q".to_string(),
                (1, false) => format!("{c}q"),
                (e, true) => format!("q^{e}"),
                (e, false) => format!("{c}q^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<F: Field> Poly<F> {
    pub fn zero(generator_degree: i64) -> Self {
        Poly {
            terms: Vec::new(),
            generator_degree,
        }
    }

    pub fn constant(c: F, generator_degree: i64) -> Self {
        Self::monomial(c, 0, generator_degree)
    }

    pub fn one(generator_degree: i64) -> Self {
        Self::constant(F::one(), generator_degree)
    }

    pub fn monomial(c: F, exp: u32, generator_degree: i64) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(exp, c)] };
        Poly {
            terms,
            generator_degree,
        }
    }

    /// Build from arbitrary `(exponent, coeff)` pairs.
    pub fn from_terms(mut raw: Vec<(u32, F)>, generator_degree: i64) -> Self {
        raw.sort_by_key(|(e, _)| *e);
        let mut terms: Vec<(u32, F)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match terms.last_mut() {
                Some((le, lc)) if *le == e => *lc = lc.clone() + c,
                _ => terms.push((e, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        Poly {
            terms,
            generator_degree,
        }
    }

    pub fn terms(&self) -> &[(u32, F)] {
        &self.terms
    }

    pub fn generator_degree(&self) -> i64 {
        self.generator_degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0
    }

    /// Polynomial degree in `q`; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.last().map(|(e, _)| *e)
    }

    pub fn leading_coeff(&self) -> Option<&F> {
        self.terms.last().map(|(_, c)| c)
    }

    /// `Some((c, e))` if the polynomial is the single monomial `c q^e`.
    pub fn as_monomial(&self) -> Option<(&F, u32)> {
        match self.terms.as_slice() {
            [(e, c)] => Some((c, *e)),
            _ => None,
        }
    }

    /// Internal degree when homogeneous (all monomials of the same degree).
    pub fn internal_degree(&self) -> Option<i64> {
        let mut degs = self
            .terms
            .iter()
            .map(|(e, _)| *e as i64 * self.generator_degree);
        let first = degs.next()?;
        degs.all(|x| x == first).then_some(first)
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (*e, c.clone() * s.clone()))
                .collect(),
            self.generator_degree,
        )
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.terms.clone();
        t.extend(other.terms.iter().cloned());
        Self::from_terms(t, self.generator_degree)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut t = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                t.push((e1 + e2, c1.clone() * c2.clone()));
            }
        }
        Self::from_terms(t, self.generator_degree)
    }

    /// Euclidean division: `self = quot * divisor + rem`, `deg rem < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lc_inv = divisor.leading_coeff().unwrap().inv().unwrap();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading_coeff().unwrap().clone() * lc_inv.clone();
            let m = Self::monomial(c.clone(), rd - dd, self.generator_degree);
            quot.push((rd - dd, c));
            rem = rem.sub(&m.mul(divisor));
        }
        (Self::from_terms(quot, self.generator_degree), rem)
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }
}

/// Dense matrix of polynomials, row-major as nested vectors.
pub type PolyMatrix<F> = Vec<Vec<Poly<F>>>;

pub fn poly_identity<F: Field>(n: usize, generator_degree: i64) -> PolyMatrix<F> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Poly::one(generator_degree)
                    } else {
                        Poly::zero(generator_degree)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn poly_matmul<F: Field>(a: &PolyMatrix<F>, b: &PolyMatrix<F>, gen: i64) -> PolyMatrix<F> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![Poly::zero(gen); m]; n];
    for i in 0..n {
        assert_eq!(a[i].len(), k);
        for (l, brow) in b.iter().enumerate() {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !brow[j].is_zero() {
                    out[i][j] = out[i][j].add(&a[i][l].mul(&brow[j]));
                }
            }
        }
    }
    out
}

/// `u * m * v = diag(diag)` with `u`, `v` invertible over `K[q]`.
#[derive(Clone, Debug)]
pub struct SmithForm<F> {
    pub u: PolyMatrix<F>,
    /// Length `min(rows, cols)`; monic, each dividing the next, zeros last.
    pub diag: Vec<Poly<F>>,
    pub v: PolyMatrix<F>,
}

/// Smith normal form over `K[q]` by the Euclidean algorithm.
///
/// Pivots are chosen by minimal `q`-degree, ties broken by leftmost column
/// and then topmost row.
pub fn smith_normal_form<F: Field>(m: &PolyMatrix<F>, generator_degree: i64) -> SmithForm<F> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let gen = generator_degree;
    let mut a = m.clone();
    let mut u = poly_identity::<F>(rows, gen);
    let mut v = poly_identity::<F>(cols, gen);

    let row_axpy = |a: &mut PolyMatrix<F>, dst: usize, f: &Poly<F>, src: usize| {
        let srow = a[src].clone();
        for (x, s) in a[dst].iter_mut().zip(&srow) {
            if !s.is_zero() {
                *x = x.sub(&f.mul(s));
            }
        }
    };
    let col_axpy = |a: &mut PolyMatrix<F>, dst: usize, f: &Poly<F>, src: usize| {
        for row in a.iter_mut() {
            if !row[src].is_zero() {
                let s = row[src].clone();
                row[dst] = row[dst].sub(&f.mul(&s));
            }
        }
    };

    let n = rows.min(cols);
    for t in 0..n {
        loop {
            let mut best: Option<(u32, usize, usize)> = None;
            for j in t..cols {
                for (i, row) in a.iter().enumerate().skip(t) {
                    if let Some(d) = row[j].degree() {
                        if best.is_none_or(|(bd, _, _)| d < bd) {
                            best = Some((d, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                break;
            };
            a.swap(t, pi);
            u.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }

            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let (q, r) = a[i][t].div_rem(&a[t][t]);
                row_axpy(&mut a, i, &q, t);
                row_axpy(&mut u, i, &q, t);
                dirty |= !r.is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let (q, r) = a[t][j].div_rem(&a[t][t]);
                col_axpy(&mut a, j, &q, t);
                col_axpy(&mut v, j, &q, t);
                dirty |= !r.is_zero();
            }
            if dirty {
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[t][t].divides(&a[i][j])));
            match offender {
                Some(i) => {
                    let minus_one = Poly::constant(-F::one(), gen);
                    row_axpy(&mut a, t, &minus_one, i);
                    row_axpy(&mut u, t, &minus_one, i);
                }
                None => break,
            }
        }
        if let Some(lc) = a[t][t].leading_coeff().cloned() {
            let inv = lc.inv().unwrap();
            for x in a[t].iter_mut() {
                *x = x.scale(&inv);
            }
            for x in u[t].iter_mut() {
                *x = x.scale(&inv);
            }
        }
    }
    let diag = (0..n).map(|i| a[i][i].clone()).collect();
    SmithForm { u, diag, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Gf, Rational};

    type F = Gf<32003>;

    fn q(c: i64, e: u32) -> Poly<F> {
        Poly::monomial(F::from_i64(c), e, -1)
    }

    #[test]
    fn division() {
        let a = q(1, 3).add(&q(2, 1)).add(&q(5, 0));
        let b = q(1, 1).add(&q(1, 0));
        let (qu, r) = a.div_rem(&b);
        assert_eq!(qu.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 1);
        assert!(q(1, 1).divides(&q(3, 4)));
        assert!(!q(1, 2).divides(&q(3, 1)));
    }

    #[test]
    fn homogeneity() {
        assert_eq!(q(3, 2).internal_degree(), Some(-2));
        assert_eq!(q(1, 2).add(&q(1, 0)).internal_degree(), None);
    }

    #[test]
    fn diag_input_is_reordered_by_divisibility() {
        let z = Poly::zero(-1);
        let m = vec![vec![q(1, 2), z.clone()], vec![z, q(1, 1)]];
        let s = smith_normal_form(&m, -1);
        assert_eq!(s.diag, vec![q(1, 1), q(1, 2)]);
        let prod = poly_matmul(&poly_matmul(&s.u, &m, -1), &s.v, -1);
        assert_eq!(prod[0][0], q(1, 1));
        assert_eq!(prod[1][1], q(1, 2));
        assert!(prod[0][1].is_zero() && prod[1][0].is_zero());
    }

    #[test]
    fn zero_matrix() {
        let m: PolyMatrix<F> = vec![vec![Poly::zero(-1); 3]; 2];
        let s = smith_normal_form(&m, -1);
        assert!(s.diag.iter().all(|p| p.is_zero()));
        assert_eq!(s.diag.len(), 2);
    }

    #[test]
    fn monic_normalization_over_q() {
        let m = vec![vec![Poly::monomial(Rational::from_i64(3), 3, -1)]];
        let s = smith_normal_form(&m, -1);
        assert_eq!(s.diag, vec![Poly::monomial(Rational::from_i64(1), 3, -1)]);
    }
}
