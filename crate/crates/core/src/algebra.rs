//! Finite-dimensional graded algebras with a complete set of orthogonal
//! idempotents, given by structure constants.
//!
//! Every basis element `x` is required to satisfy `x = e_t x e_s` for a unique
//! pair of idempotents; left multiplication by `x` is then a module map
//! `e_s A -> e_t A` of degree `|x|`. Differentials are zero.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;

/// A sparse linear combination of basis elements, sorted by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgElem<F> {
    terms: Vec<(usize, F)>,
}

impl<F: Field> AlgElem<F> {
    pub fn zero() -> Self {
        AlgElem { terms: Vec::new() }
    }

    pub fn basis(i: usize) -> Self {
        AlgElem {
            terms: vec![(i, F::one())],
        }
    }

    pub fn scaled_basis(i: usize, c: F) -> Self {
        Self::from_terms(vec![(i, c)])
    }

    pub fn from_terms(mut raw: Vec<(usize, F)>) -> Self {
        raw.sort_by_key(|(i, _)| *i);
        let mut terms: Vec<(usize, F)> = Vec::with_capacity(raw.len());
        for (i, c) in raw {
            match terms.last_mut() {
                Some((li, lc)) if *li == i => *lc = lc.clone() + c,
                _ => terms.push((i, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        AlgElem { terms }
    }

    pub fn terms(&self) -> &[(usize, F)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: usize) -> F {
        self.terms
            .iter()
            .find(|(j, _)| *j == i)
            .map_or_else(F::zero, |(_, c)| c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.terms.clone();
        t.extend(other.terms.iter().cloned());
        Self::from_terms(t)
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        AlgElem {
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (*i, c.clone() * s.clone()))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    /// Nonzero scalar multiple of a single basis element.
    pub fn as_scaled_basis(&self) -> Option<(usize, &F)> {
        match self.terms.as_slice() {
            [(i, c)] => Some((*i, c)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub label: String,
    pub degree: i64,
}

/// Nondegenerate pairing of degree `-dimension`, invariant under products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusForm<F> {
    pub pairing: Matrix<F>,
    pub dimension: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra<F> {
    basis: Vec<BasisElement>,
    /// `products[i][j]` is `b_i * b_j`.
    products: Vec<Vec<AlgElem<F>>>,
    /// Basis indices of the idempotents, in vertex order.
    idempotents: Vec<usize>,
    /// Vertex positions (into `idempotents`) with `b = e_target b e_source`.
    source: Vec<usize>,
    target: Vec<usize>,
    frobenius: Option<FrobeniusForm<F>>,
    /// `(source, target, degree)` -> basis indices of `e_t A e_s` in that degree.
    paths: HashMap<(usize, usize, i64), Vec<usize>>,
    /// Position of each basis element inside its `paths` list.
    path_pos: Vec<usize>,
}

impl<F: Field> GradedAlgebra<F> {
    /// Validates associativity, unitality, homogeneity and the Frobenius data.
    pub fn new(
        basis: Vec<BasisElement>,
        products: Vec<Vec<AlgElem<F>>>,
        idempotents: Vec<usize>,
        frobenius: Option<FrobeniusForm<F>>,
    ) -> Result<Self> {
        let n = basis.len();
        let schema = |s: String| Err(Error::Schema(s));
        if products.len() != n || products.iter().any(|r| r.len() != n) {
            return schema(format!("structure constants must be {n}x{n}"));
        }
        if idempotents.is_empty() || idempotents.iter().any(|&i| i >= n) {
            return schema("idempotent list empty or out of range".into());
        }
        let mut alg = GradedAlgebra {
            basis,
            products,
            idempotents,
            source: vec![usize::MAX; n],
            target: vec![usize::MAX; n],
            frobenius,
            paths: HashMap::new(),
            path_pos: vec![0; n],
        };
        alg.validate()?;
        for b in 0..n {
            let list = alg
                .paths
                .entry((alg.source[b], alg.target[b], alg.basis[b].degree))
                .or_default();
            alg.path_pos[b] = list.len();
            list.push(b);
        }
        Ok(alg)
    }

    fn validate(&mut self) -> Result<()> {
        let n = self.basis.len();
        let fail = |what: &str| Err(Error::Invariant {
            what: what.to_string(),
            degree: 0,
        });
        for i in 0..n {
            for j in 0..n {
                let deg = self.basis[i].degree + self.basis[j].degree;
                if self.products[i][j]
                    .terms()
                    .iter()
                    .any(|(k, _)| *k >= n || self.basis[*k].degree != deg)
                {
                    return fail("product is not homogeneous");
                }
            }
        }
        // Idempotents: orthogonal, sum acts as the identity.
        for (a, &ea) in self.idempotents.iter().enumerate() {
            if self.basis[ea].degree != 0 {
                return fail("idempotent of nonzero degree");
            }
            for (b, &eb) in self.idempotents.iter().enumerate() {
                let expect = if a == b { AlgElem::basis(ea) } else { AlgElem::zero() };
                if self.products[ea][eb] != expect {
                    return fail("idempotents are not orthogonal");
                }
            }
        }
        for x in 0..n {
            let left: Vec<usize> = (0..self.idempotents.len())
                .filter(|&v| !self.products[self.idempotents[v]][x].is_zero())
                .collect();
            let right: Vec<usize> = (0..self.idempotents.len())
                .filter(|&v| !self.products[x][self.idempotents[v]].is_zero())
                .collect();
            if left.len() != 1 || right.len() != 1 {
                return fail("basis element is not of the form e_t x e_s");
            }
            let (t, s) = (left[0], right[0]);
            if self.products[self.idempotents[t]][x] != AlgElem::basis(x)
                || self.products[x][self.idempotents[s]] != AlgElem::basis(x)
            {
                return fail("idempotents do not act as a unit");
            }
            self.target[x] = t;
            self.source[x] = s;
        }
        for i in 0..n {
            for j in 0..n {
                if self.source[i] != self.target[j] && !self.products[i][j].is_zero() {
                    return fail("product of non-composable elements is nonzero");
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.mul(&self.mul(&AlgElem::basis(i), &AlgElem::basis(j)), &AlgElem::basis(k));
                    let rhs = self.mul(&AlgElem::basis(i), &self.mul(&AlgElem::basis(j), &AlgElem::basis(k)));
                    if lhs != rhs {
                        return fail("multiplication is not associative");
                    }
                }
            }
        }
        if let Some(fr) = &self.frobenius {
            if fr.pairing.rows() != n || fr.pairing.cols() != n {
                return fail("Frobenius pairing has the wrong shape");
            }
            if !fr.pairing.is_invertible() {
                return fail("Frobenius pairing is degenerate");
            }
            for i in 0..n {
                for j in 0..n {
                    if !fr.pairing[(i, j)].is_zero()
                        && self.basis[i].degree + self.basis[j].degree != fr.dimension
                    {
                        return fail("Frobenius pairing is not of degree -d");
                    }
                }
            }
            let pair = |x: &AlgElem<F>, y: &AlgElem<F>| -> F {
                let mut acc = F::zero();
                for (a, ca) in x.terms() {
                    for (b, cb) in y.terms() {
                        acc = acc + ca.clone() * cb.clone() * fr.pairing[(*a, *b)].clone();
                    }
                }
                acc
            };
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let (bi, bj, bk) = (AlgElem::basis(i), AlgElem::basis(j), AlgElem::basis(k));
                        if pair(&self.mul(&bi, &bj), &bk) != pair(&bi, &self.mul(&bj, &bk)) {
                            return fail("Frobenius pairing is not invariant");
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degree(&self, b: usize) -> i64 {
        self.basis[b].degree
    }

    pub fn label(&self, b: usize) -> &str {
        &self.basis[b].label
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    pub fn num_vertices(&self) -> usize {
        self.idempotents.len()
    }

    pub fn idempotent(&self, vertex: usize) -> usize {
        self.idempotents[vertex]
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    /// Vertex position of an idempotent label.
    pub fn vertex_of_label(&self, label: &str) -> Option<usize> {
        self.idempotents.iter().position(|&e| self.basis[e].label == label)
    }

    pub fn vertex_label(&self, vertex: usize) -> &str {
        &self.basis[self.idempotents[vertex]].label
    }

    pub fn source(&self, b: usize) -> usize {
        self.source[b]
    }

    pub fn target(&self, b: usize) -> usize {
        self.target[b]
    }

    pub fn frobenius(&self) -> Option<&FrobeniusForm<F>> {
        self.frobenius.as_ref()
    }

    pub fn cy_dimension(&self) -> Option<i64> {
        self.frobenius.as_ref().map(|f| f.dimension)
    }

    pub fn products(&self) -> &[Vec<AlgElem<F>>] {
        &self.products
    }

    /// Basis of `e_target A e_source` in the given degree.
    pub fn paths(&self, source: usize, target: usize, degree: i64) -> &[usize] {
        self.paths
            .get(&(source, target, degree))
            .map_or(&[], |v| v.as_slice())
    }

    /// Index of `b` within `paths(source(b), target(b), degree(b))`.
    pub fn path_position(&self, b: usize) -> usize {
        self.path_pos[b]
    }

    /// Distinct degrees occurring in the basis.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.basis.iter().map(|b| b.degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn mul(&self, a: &AlgElem<F>, b: &AlgElem<F>) -> AlgElem<F> {
        let mut out = Vec::new();
        for (i, ci) in a.terms() {
            for (j, cj) in b.terms() {
                if self.source[*i] != self.target[*j] {
                    continue;
                }
                let c = ci.clone() * cj.clone();
                for (k, ck) in self.products[*i][*j].terms() {
                    out.push((*k, c.clone() * ck.clone()));
                }
            }
        }
        AlgElem::from_terms(out)
    }

    /// Degree of a homogeneous element, `None` for zero or mixed degrees.
    pub fn elem_degree(&self, a: &AlgElem<F>) -> Option<i64> {
        let mut it = a.terms().iter().map(|(i, _)| self.basis[*i].degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Whether `a` lies in `e_t A e_s`.
    pub fn elem_in(&self, a: &AlgElem<F>, source: usize, target: usize) -> bool {
        a.terms()
            .iter()
            .all(|(i, _)| self.source[*i] == source && self.target[*i] == target)
    }

    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;

    type F = Gf<32003>;

    fn dual_numbers_with_two_idempotents_fails() -> Result<GradedAlgebra<F>> {
        // e_0, e_1 both claiming to be the unit of a single element algebra.
        let basis = vec![
            BasisElement { label: "e0".into(), degree: 0 },
            BasisElement { label: "e1".into(), degree: 0 },
        ];
        let products = vec![
            vec![AlgElem::basis(0), AlgElem::basis(0)],
            vec![AlgElem::basis(0), AlgElem::basis(1)],
        ];
        GradedAlgebra::new(basis, products, vec![0, 1], None)
    }

    #[test]
    fn rejects_non_orthogonal_idempotents() {
        assert!(dual_numbers_with_two_idempotents_fails().is_err());
    }

    #[test]
    fn graded_dual_numbers_as_algebra() {
        let basis = vec![
            BasisElement { label: "1".into(), degree: 0 },
            BasisElement { label: "eps".into(), degree: 3 },
        ];
        let products = vec![
            vec![AlgElem::basis(0), AlgElem::basis(1)],
            vec![AlgElem::basis(1), AlgElem::zero()],
        ];
        let pairing = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        let alg = GradedAlgebra::<F>::new(
            basis,
            products,
            vec![0],
            Some(FrobeniusForm { pairing, dimension: 3 }),
        )
        .unwrap();
        assert_eq!(alg.paths(0, 0, 3), &[1]);
        assert!(alg.mul(&AlgElem::basis(1), &AlgElem::basis(1)).is_zero());
    }

    #[test]
    fn rejects_wrong_frobenius_degree() {
        let basis = vec![
            BasisElement { label: "1".into(), degree: 0 },
            BasisElement { label: "eps".into(), degree: 3 },
        ];
        let products = vec![
            vec![AlgElem::basis(0), AlgElem::basis(1)],
            vec![AlgElem::basis(1), AlgElem::zero()],
        ];
        let pairing = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        let r = GradedAlgebra::<F>::new(basis, products, vec![0], Some(FrobeniusForm { pairing, dimension: 2 }));
        assert!(r.is_err());
    }
}
