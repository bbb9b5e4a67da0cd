//! One-sided twisted complexes over shifted indecomposable projectives,
//! stored in convolved form.
//!
//! An object is a finite list of summands `P_v[a]` together with a matrix `D`
//! of algebra elements, `D[j][i] ∈ e_{v_j} A e_{v_i}` of degree
//! `1 + a_j - a_i`, with `D^2 = 0`. Since the algebra has zero differential,
//! this is exactly the convolution of a twisted complex whose Maurer-Cartan
//! equation reads `Σ_k α_kj α_ik = 0`.
//!
//! A map `P_v[a] -> P_w[b]` of degree `n` is left multiplication by an element
//! of `(e_w A e_v)_{n + b - a}`; composition is the algebra product.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgElem, GradedAlgebra};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{CochainComplex, GradedVectorSpace};
use crate::linalg::{Matrix, SparseMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Summand {
    pub vertex: usize,
    pub shift: i64,
}

#[derive(Clone)]
pub struct TwistedComplex<F> {
    alg: Arc<GradedAlgebra<F>>,
    summands: Vec<Summand>,
    /// `out[i][j]` is the entry of `D` from summand `i` to summand `j`.
    out: Vec<BTreeMap<usize, AlgElem<F>>>,
}

impl<F: Field> fmt::Debug for TwistedComplex<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

/// A homogeneous map between the underlying graded modules of two objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism<F> {
    pub degree: i64,
    pub sources: usize,
    pub targets: usize,
    /// `(target, source) -> entry`, zero entries omitted.
    pub entries: BTreeMap<(usize, usize), AlgElem<F>>,
}

impl<F: Field> Morphism<F> {
    pub fn zero(degree: i64, sources: usize, targets: usize) -> Self {
        Morphism { degree, sources, targets, entries: BTreeMap::new() }
    }

    pub fn identity(x: &TwistedComplex<F>) -> Self {
        let mut m = Self::zero(0, x.len(), x.len());
        for (i, s) in x.summands.iter().enumerate() {
            m.entries.insert((i, i), AlgElem::basis(x.alg.idempotent(s.vertex)));
        }
        m
    }

    pub fn insert(&mut self, target: usize, source: usize, e: AlgElem<F>) {
        let slot = self.entries.entry((target, source)).or_insert_with(AlgElem::zero);
        *slot = slot.add(&e);
        if slot.is_zero() {
            self.entries.remove(&(target, source));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut m = Self::zero(self.degree, self.sources, self.targets);
        for (k, e) in &self.entries {
            m.insert(k.0, k.1, e.scale(c));
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = self.clone();
        for (k, e) in &other.entries {
            m.insert(k.0, k.1, e.clone());
        }
        m
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Self, alg: &GradedAlgebra<F>) -> Self {
        let mut by_target: HashMap<usize, Vec<(usize, &AlgElem<F>)>> = HashMap::new();
        for ((t, s), e) in &first.entries {
            by_target.entry(*t).or_default().push((*s, e));
        }
        let mut m = Self::zero(self.degree + first.degree, first.sources, self.targets);
        for ((k, j), g) in &self.entries {
            if let Some(list) = by_target.get(j) {
                for (i, f) in list {
                    m.insert(*k, *i, alg.mul(g, f));
                }
            }
        }
        m
    }
}

impl<F: Field> TwistedComplex<F> {
    /// Builds an object from entries `(source, target, element)`, checking
    /// degrees and `D^2 = 0`.
    pub fn new(
        alg: Arc<GradedAlgebra<F>>,
        summands: Vec<Summand>,
        entries: Vec<(usize, usize, AlgElem<F>)>,
    ) -> Result<Self> {
        if summands.iter().any(|s| s.vertex >= alg.num_vertices()) {
            return Err(Error::UnknownVertex("summand vertex out of range".into()));
        }
        let mut out = vec![BTreeMap::new(); summands.len()];
        for (i, j, e) in entries {
            if i >= summands.len() || j >= summands.len() {
                return Err(Error::Schema("differential entry out of range".into()));
            }
            if e.is_zero() {
                continue;
            }
            let (si, sj) = (summands[i], summands[j]);
            let want = 1 + sj.shift - si.shift;
            if !alg.elem_in(&e, si.vertex, sj.vertex)
                || e.terms().iter().any(|(b, _)| alg.degree(*b) != want)
            {
                return Err(Error::Invariant {
                    what: format!("entry {i}->{j} is not in e_t A e_s of degree {want}"),
                    degree: want,
                });
            }
            let slot: &mut AlgElem<F> = out[i].entry(j).or_insert_with(AlgElem::zero);
            *slot = slot.add(&e);
        }
        for row in &mut out {
            row.retain(|_, e: &mut AlgElem<F>| !e.is_zero());
        }
        let x = TwistedComplex { alg, summands, out };
        x.check_square_zero()?;
        Ok(x)
    }

    pub fn zero(alg: Arc<GradedAlgebra<F>>) -> Self {
        TwistedComplex { alg, summands: Vec::new(), out: Vec::new() }
    }

    pub fn projective(alg: Arc<GradedAlgebra<F>>, vertex: usize) -> Self {
        TwistedComplex {
            alg,
            summands: vec![Summand { vertex, shift: 0 }],
            out: vec![BTreeMap::new()],
        }
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra<F>> {
        &self.alg
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Nonzero entries of `D` as `(source, target, element)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &AlgElem<F>)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(j, e)| (i, *j, e)))
    }

    pub fn entry(&self, source: usize, target: usize) -> Option<&AlgElem<F>> {
        self.out[source].get(&target)
    }

    pub fn differential(&self) -> Morphism<F> {
        let mut m = Morphism::zero(1, self.len(), self.len());
        for (i, j, e) in self.entries() {
            m.entries.insert((j, i), e.clone());
        }
        m
    }

    /// Verifies `D^2 = 0`.
    pub fn check_square_zero(&self) -> Result<()> {
        let d = self.differential();
        let sq = d.compose(&d, &self.alg);
        match sq.entries.keys().next() {
            None => Ok(()),
            Some((j, i)) => Err(Error::MaurerCartanViolation(format!(
                "D^2 has a nonzero entry from summand {i} to summand {j}"
            ))),
        }
    }

    fn same_algebra(&self, other: &Self) -> Result<()> {
        if self.alg.same_as(&other.alg) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// `X[n]`: every summand shift grows by `n`, `D` picks up `(-1)^n`.
    pub fn shift(&self, n: i64) -> Self {
        let sign = F::sign(n);
        TwistedComplex {
            alg: self.alg.clone(),
            summands: self
                .summands
                .iter()
                .map(|s| Summand { vertex: s.vertex, shift: s.shift + n })
                .collect(),
            out: self
                .out
                .iter()
                .map(|row| row.iter().map(|(j, e)| (*j, e.scale(&sign))).collect())
                .collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let off = self.len();
        let mut summands = self.summands.clone();
        summands.extend(other.summands.iter().copied());
        let mut out = self.out.clone();
        out.extend(
            other
                .out
                .iter()
                .map(|row| row.iter().map(|(j, e)| (j + off, e.clone())).collect()),
        );
        Ok(TwistedComplex { alg: self.alg.clone(), summands, out })
    }

    /// `dF = D_Y F - (-1)^{|F|} F D_X` for `F: self -> y`.
    pub fn morphism_differential(&self, y: &Self, f: &Morphism<F>) -> Morphism<F> {
        let left = y.differential().compose(f, &self.alg);
        let right = f.compose(&self.differential(), &self.alg);
        left.add(&right.scale(&-F::sign(f.degree)))
    }

    /// Checks that `f` is a well-formed map `self -> y` of its stated degree.
    pub fn check_morphism(&self, y: &Self, f: &Morphism<F>) -> Result<()> {
        if f.sources != self.len() || f.targets != y.len() {
            return Err(Error::Schema("morphism shape does not match objects".into()));
        }
        for ((j, i), e) in &f.entries {
            let (si, sj) = (self.summands[*i], y.summands[*j]);
            let want = f.degree + sj.shift - si.shift;
            if !self.alg.elem_in(e, si.vertex, sj.vertex)
                || e.terms().iter().any(|(b, _)| self.alg.degree(*b) != want)
            {
                return Err(Error::Invariant {
                    what: format!("morphism entry {i}->{j} has the wrong degree or idempotents"),
                    degree: f.degree,
                });
            }
        }
        Ok(())
    }

    /// `cone(f) = X[1] ⊕ Y` with `D = [[-D_X, 0], [f, D_Y]]`.
    pub fn cone(&self, y: &Self, f: &Morphism<F>) -> Result<Self> {
        self.same_algebra(y)?;
        if f.degree != 0 {
            return Err(Error::WrongDegree { expected: 0, found: f.degree });
        }
        self.check_morphism(y, f)?;
        if !self.morphism_differential(y, f).is_zero() {
            return Err(Error::NotClosed);
        }
        let mut c = self.shift(1).direct_sum(y)?;
        let off = self.len();
        for ((j, i), e) in &f.entries {
            c.out[*i].insert(j + off, e.clone());
        }
        debug_assert!(c.check_square_zero().is_ok());
        Ok(c)
    }

    /// Cancels every invertible degree-0 entry by Gaussian elimination.
    /// Pivots are taken in order of source index, then target index.
    pub fn minimize(&self) -> Self {
        let n = self.len();
        let mut out = self.out.clone();
        let mut inc: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (i, row) in out.iter().enumerate() {
            for j in row.keys() {
                inc[*j].insert(i);
            }
        }
        let is_pivot = |s: &[Summand], i: usize, j: usize| {
            s[i].vertex == s[j].vertex && s[j].shift == s[i].shift - 1
        };
        let mut cand: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (i, row) in out.iter().enumerate() {
            for j in row.keys() {
                if is_pivot(&self.summands, i, *j) {
                    cand.insert((i, *j));
                }
            }
        }
        let mut alive = vec![true; n];
        while let Some((i, j)) = cand.pop_first() {
            if !alive[i] || !alive[j] {
                continue;
            }
            let Some(c) = out[i].get(&j).map(|e| e.coeff(self.alg.idempotent(self.summands[i].vertex)))
            else {
                continue;
            };
            let cinv = -c.inv().expect("nonzero pivot");
            let sources: Vec<usize> = inc[j].iter().copied().filter(|&k| k != i).collect();
            let targets: Vec<(usize, AlgElem<F>)> = out[i]
                .iter()
                .filter(|(l, _)| **l != j)
                .map(|(l, e)| (*l, e.scale(&cinv)))
                .collect();
            for &k in &sources {
                let djk = out[k][&j].clone();
                for (l, dli) in &targets {
                    let upd = self.alg.mul(dli, &djk);
                    if upd.is_zero() {
                        continue;
                    }
                    let slot = out[k].entry(*l).or_insert_with(AlgElem::zero);
                    *slot = slot.add(&upd);
                    if slot.is_zero() {
                        out[k].remove(l);
                        inc[*l].remove(&k);
                    } else {
                        inc[*l].insert(k);
                        if is_pivot(&self.summands, k, *l) {
                            cand.insert((k, *l));
                        }
                    }
                }
            }
            for r in [i, j] {
                alive[r] = false;
                for l in std::mem::take(&mut out[r]).into_keys() {
                    inc[l].remove(&r);
                }
                for k in std::mem::take(&mut inc[r]) {
                    out[k].remove(&r);
                }
            }
        }
        let mut new_index = vec![usize::MAX; n];
        let mut summands = Vec::new();
        for i in 0..n {
            if alive[i] {
                new_index[i] = summands.len();
                summands.push(self.summands[i]);
            }
        }
        let out = (0..n)
            .filter(|&i| alive[i])
            .map(|i| {
                std::mem::take(&mut out[i])
                    .into_iter()
                    .map(|(j, e)| (new_index[j], e))
                    .collect()
            })
            .collect();
        TwistedComplex { alg: self.alg.clone(), summands, out }
    }

    pub fn is_minimal(&self) -> bool {
        self.entries().all(|(i, j, _)| {
            let (si, sj) = (self.summands[i], self.summands[j]);
            !(si.vertex == sj.vertex && sj.shift == si.shift - 1)
        })
    }

    /// Underlying graded vector space of the convolution.
    pub fn underlying_space(&self) -> GradedVectorSpace {
        let alg = &self.alg;
        GradedVectorSpace::new(self.summands.iter().flat_map(|s| {
            (0..alg.dim())
                .filter(move |&b| alg.target(b) == s.vertex)
                .map(move |b| (alg.degree(b) - s.shift, 1))
        }))
    }

    /// Sorted multiset of summands.
    pub fn summand_multiset(&self) -> Vec<Summand> {
        let mut v = self.summands.clone();
        v.sort();
        v
    }

    /// Positions for a one-sided presentation: the longest chain of nonzero
    /// entries ending at each summand. `None` if the entries form a cycle.
    pub fn levels(&self) -> Option<Vec<i64>> {
        let n = self.len();
        let mut indeg = vec![0usize; n];
        for (_, j, _) in self.entries() {
            indeg[j] += 1;
        }
        let mut level = vec![0i64; n];
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(i) = stack.pop() {
            seen += 1;
            for j in self.out[i].keys() {
                level[*j] = level[*j].max(level[i] + 1);
                indeg[*j] -= 1;
                if indeg[*j] == 0 {
                    stack.push(*j);
                }
            }
        }
        (seen == n).then_some(level)
    }

    /// Human-readable summary like `P1[0] ⊕ P2[-1], 1 entries`.
    pub fn describe(&self) -> String {
        if self.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .summand_multiset()
            .iter()
            .map(|s| format!("P{}[{}]", self.alg.vertex_label(s.vertex), s.shift))
            .collect();
        format!("{} ({} differential entries)", parts.join(" + "), self.entries().count())
    }
}

/// The hom complex between two objects, with coordinates.
pub struct HomComplex<F> {
    complex: CochainComplex<F>,
    /// Per degree, the coordinates `(source summand, target summand, basis)`.
    index: BTreeMap<i64, Vec<(usize, usize, usize)>>,
    lookup: HashMap<(usize, usize, usize), (i64, usize)>,
    sources: usize,
    targets: usize,
}

impl<F: Field> HomComplex<F> {
    pub fn complex(&self) -> &CochainComplex<F> {
        &self.complex
    }

    pub fn cohomology_dims(&self) -> GradedVectorSpace {
        self.complex.cohomology_dims()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.index.keys().copied()
    }

    pub fn dim(&self, n: i64) -> usize {
        self.index.get(&n).map_or(0, Vec::len)
    }

    pub fn to_morphism(&self, n: i64, v: &[F]) -> Morphism<F> {
        let mut m = Morphism::zero(n, self.sources, self.targets);
        if let Some(coords) = self.index.get(&n) {
            for (c, &(i, j, b)) in v.iter().zip(coords) {
                if !c.is_zero() {
                    m.insert(j, i, AlgElem::scaled_basis(b, c.clone()));
                }
            }
        }
        m
    }

    pub fn from_morphism(&self, f: &Morphism<F>) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim(f.degree)];
        for ((j, i), e) in &f.entries {
            for (b, c) in e.terms() {
                let (n, pos) = self.lookup[&(*i, *j, *b)];
                debug_assert_eq!(n, f.degree);
                v[pos] = v[pos].clone() + c.clone();
            }
        }
        v
    }

    /// Cocycles whose classes form a basis of `H^n`, as morphisms.
    pub fn cocycle_basis(&self, n: i64) -> Vec<Morphism<F>> {
        let reps = self.complex.cocycle_basis(n);
        (0..reps.cols()).map(|c| self.to_morphism(n, &reps.column(c))).collect()
    }

    /// Cocycle representatives of a basis of the whole cohomology, by degree.
    pub fn full_cocycle_basis(&self) -> Vec<Morphism<F>> {
        self.cohomology_dims()
            .dims()
            .keys()
            .flat_map(|&n| self.cocycle_basis(n))
            .collect()
    }
}

pub fn hom_complex<F: Field>(x: &TwistedComplex<F>, y: &TwistedComplex<F>) -> Result<HomComplex<F>> {
    x.same_algebra(y)?;
    let alg = &x.alg;
    let mut index: BTreeMap<i64, Vec<(usize, usize, usize)>> = BTreeMap::new();
    let mut lookup = HashMap::new();
    let degrees = alg.degrees();
    for (i, si) in x.summands.iter().enumerate() {
        for (j, sj) in y.summands.iter().enumerate() {
            for &e in &degrees {
                for &b in alg.paths(si.vertex, sj.vertex, e) {
                    let n = e - sj.shift + si.shift;
                    let list = index.entry(n).or_default();
                    lookup.insert((i, j, b), (n, list.len()));
                    list.push((i, j, b));
                }
            }
        }
    }
    let mut inc_x: Vec<Vec<(usize, &AlgElem<F>)>> = vec![Vec::new(); x.len()];
    for (k, i, e) in x.entries() {
        inc_x[i].push((k, e));
    }
    let mut diffs = BTreeMap::new();
    for (&n, coords) in &index {
        let Some(next) = index.get(&(n + 1)) else { continue };
        let mut d = SparseMatrix::new(next.len(), coords.len());
        let sign = -F::sign(n);
        for (col, &(i, j, b)) in coords.iter().enumerate() {
            let fb = AlgElem::basis(b);
            for (jj, ye) in &y.out[j] {
                for (bb, c) in alg.mul(ye, &fb).terms() {
                    let (_, row) = lookup[&(i, *jj, *bb)];
                    d.push(row, col, c.clone());
                }
            }
            for (k, xe) in &inc_x[i] {
                for (bb, c) in alg.mul(&fb, xe).terms() {
                    let (_, row) = lookup[&(*k, j, *bb)];
                    d.push(row, col, c.clone() * sign.clone());
                }
            }
        }
        d.normalize();
        diffs.insert(n, d);
    }
    let dims = index.iter().map(|(n, v)| (*n, v.len())).collect();
    Ok(HomComplex {
        complex: CochainComplex::new_unchecked(dims, diffs),
        index,
        lookup,
        sources: x.len(),
        targets: y.len(),
    })
}

/// Per-degree dimensions of `Hom(x, y)` in the derived category.
pub fn hom_dims<F: Field>(x: &TwistedComplex<F>, y: &TwistedComplex<F>) -> Result<GradedVectorSpace> {
    Ok(hom_complex(x, y)?.cohomology_dims())
}

const ISO_ATTEMPTS: usize = 6;

/// Decides whether `y ≅ x[l]` for some `l`. On success returns `l` and a
/// closed invertible degree-0 map `x[l] -> y`.
///
/// Both objects are minimized first. Over a basic algebra (degree-0 part
/// spanned by the idempotents) a map of minimal objects is invertible iff its
/// scalar blocks between equal summands are; a random closed map is tried a
/// few times, so a `None` over a very small field is only probable.
pub fn iso_up_to_shift<F: Field>(
    x: &TwistedComplex<F>,
    y: &TwistedComplex<F>,
) -> Result<Option<(i64, Morphism<F>)>> {
    x.same_algebra(y)?;
    let (x, y) = (x.minimize(), y.minimize());
    let (mx, my) = (x.summand_multiset(), y.summand_multiset());
    if mx.len() != my.len() {
        return Ok(None);
    }
    if mx.is_empty() {
        return Ok(Some((0, Morphism::zero(0, 0, 0))));
    }
    let l = my.iter().map(|s| s.shift).min().unwrap() - mx.iter().map(|s| s.shift).min().unwrap();
    let xs = x.shift(l);
    if xs.summand_multiset() != my {
        return Ok(None);
    }
    let hom = hom_complex(&xs, &y)?;
    let kernel = hom.complex.differential(0).rank_kernel_image().kernel;
    if kernel.cols() == 0 {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    for _ in 0..ISO_ATTEMPTS {
        let coeffs = Matrix::<F>::random(kernel.cols(), 1, &mut rng).column(0);
        let v = kernel.mul_vec(&coeffs);
        let f = hom.to_morphism(0, &v);
        if blocks_invertible(&xs, &y, &f) {
            debug_assert!(xs.morphism_differential(&y, &f).is_zero());
            return Ok(Some((l, f)));
        }
    }
    Ok(None)
}

fn blocks_invertible<F: Field>(x: &TwistedComplex<F>, y: &TwistedComplex<F>, f: &Morphism<F>) -> bool {
    let mut groups: BTreeMap<Summand, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, s) in x.summands.iter().enumerate() {
        groups.entry(*s).or_default().0.push(i);
    }
    for (j, s) in y.summands.iter().enumerate() {
        groups.entry(*s).or_default().1.push(j);
    }
    groups.iter().all(|(s, (src, tgt))| {
        if src.len() != tgt.len() {
            return false;
        }
        let e = x.alg.idempotent(s.vertex);
        let mut m = Matrix::<F>::zeros(tgt.len(), src.len());
        for (r, &j) in tgt.iter().enumerate() {
            for (c, &i) in src.iter().enumerate() {
                if let Some(el) = f.entries.get(&(j, i)) {
                    m[(r, c)] = el.coeff(e);
                }
            }
        }
        m.is_invertible()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;
    use crate::zigzag::{build_zigzag, MultiGraph};

    type F = Gf<32003>;

    fn a2() -> Arc<GradedAlgebra<F>> {
        Arc::new(build_zigzag(&MultiGraph::a2()).unwrap())
    }

    #[test]
    fn projective_endomorphisms() {
        let alg = a2();
        let p = TwistedComplex::projective(alg, 0);
        assert_eq!(hom_dims(&p, &p).unwrap(), GradedVectorSpace::new([(0, 1), (2, 1)]));
    }

    #[test]
    fn adjacent_projectives() {
        let alg = a2();
        let p1 = TwistedComplex::projective(alg.clone(), 0);
        let p2 = TwistedComplex::projective(alg, 1);
        assert_eq!(hom_dims(&p1, &p2).unwrap().total(), 1);
        assert_eq!(hom_dims(&p1, &TwistedComplex::zero(p2.algebra().clone())).unwrap().total(), 0);
    }

    #[test]
    fn cone_of_identity_minimizes_to_zero() {
        let alg = a2();
        let p = TwistedComplex::projective(alg, 1).shift(3);
        let id = Morphism::identity(&p);
        let c = p.cone(&p, &id).unwrap();
        assert_eq!(c.len(), 2);
        assert!(hom_dims(&c, &c).unwrap().is_zero());
        assert!(c.minimize().is_empty());
    }

    #[test]
    fn cone_rejects_non_closed_and_wrong_degree() {
        let alg = a2();
        let p = TwistedComplex::projective(alg.clone(), 0);
        let mut f = Morphism::zero(2, 1, 1);
        f.insert(0, 0, AlgElem::basis(alg.paths(0, 0, 2)[0]));
        assert_eq!(p.cone(&p, &f).unwrap_err(), Error::WrongDegree { expected: 0, found: 2 });
    }

    #[test]
    fn rejects_nonzero_square() {
        let alg = a2();
        let a = alg.paths(0, 1, 1)[0];
        let b = alg.paths(1, 0, 1)[0];
        let s = vec![
            Summand { vertex: 0, shift: 0 },
            Summand { vertex: 1, shift: 0 },
            Summand { vertex: 0, shift: 0 },
        ];
        let r = TwistedComplex::new(alg, s, vec![(0, 1, AlgElem::basis(a)), (1, 2, AlgElem::basis(b))]);
        assert!(matches!(r, Err(Error::MaurerCartanViolation(_))));
    }

    #[test]
    fn iso_up_to_shift_basic() {
        let alg = a2();
        let p1 = TwistedComplex::projective(alg.clone(), 0);
        let p2 = TwistedComplex::projective(alg, 1);
        assert_eq!(iso_up_to_shift(&p1, &p1.shift(3)).unwrap().map(|r| r.0), Some(3));
        assert_eq!(iso_up_to_shift(&p1.shift(3), &p1).unwrap().map(|r| r.0), Some(-3));
        assert!(iso_up_to_shift(&p1, &p2).unwrap().is_none());
    }

    #[test]
    fn shift_roundtrip() {
        let alg = a2();
        let p = TwistedComplex::projective(alg, 0);
        let q = p.shift(2).shift(-5);
        assert_eq!(q.summands(), p.shift(-3).summands());
        assert_eq!(p.shift(0).summands(), p.summands());
    }
}
