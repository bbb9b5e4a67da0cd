//! Finite-dimensional dg-modules over the graded dual numbers
//! `A_d = K[ε]/ε²`, `|ε| = d`, and their classification.
//!
//! A module stores its differential `D` (degree 1) and an operator `ε`
//! (degree d) acting from the left, with `D ε = (-1)^d ε D`. A right module
//! is stored through the same operator; its right action is
//! `m·ε = (-1)^{d|m|} ε(m)`.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{CochainComplex, GradedVectorSpace};
use crate::linalg::{Matrix, SparseMatrix};
use crate::poly::{smith_normal_form, Poly, PolyMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// Module over `A_d` (the `B_n` side).
    Right,
    /// Module over `A_d^op` (the `C_n` side).
    Left,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ADModule<F> {
    d: i64,
    side: Side,
    dims: BTreeMap<i64, usize>,
    /// `degree n -> (dims[n+1] x dims[n])`.
    differential: BTreeMap<i64, Matrix<F>>,
    /// `degree n -> (dims[n+d] x dims[n])`.
    epsilon: BTreeMap<i64, Matrix<F>>,
}

impl<F: Field> ADModule<F> {
    /// Validates shapes, `D² = 0`, `ε² = 0` and `D ε = (-1)^d ε D`.
    pub fn new(
        d: i64,
        side: Side,
        dims: BTreeMap<i64, usize>,
        differential: BTreeMap<i64, Matrix<F>>,
        epsilon: BTreeMap<i64, Matrix<F>>,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("the degree of ε must be nonzero".into()));
        }
        let mut dims = dims;
        dims.retain(|_, v| *v > 0);
        let m = ADModule { d, side, dims, differential, epsilon };
        m.validate()?;
        Ok(m.prune())
    }

    fn prune(mut self) -> Self {
        self.differential.retain(|_, x| !x.is_zero());
        self.epsilon.retain(|_, x| !x.is_zero());
        self
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str, degree: i64| Err(Error::Invariant { what: what.into(), degree });
        for (n, m) in &self.differential {
            if m.cols() != self.dim(*n) || m.rows() != self.dim(n + 1) {
                return bad("differential has the wrong shape", *n);
            }
        }
        for (n, m) in &self.epsilon {
            if m.cols() != self.dim(*n) || m.rows() != self.dim(n + self.d) {
                return bad("ε has the wrong shape", *n);
            }
        }
        let d = self.d;
        for &n in self.dims.keys() {
            if !(&self.diff(n + 1) * &self.diff(n)).is_zero() {
                return bad("D^2 != 0", n);
            }
            if !(&self.eps(n + d) * &self.eps(n)).is_zero() {
                return bad("ε^2 != 0", n);
            }
            let lhs = &self.diff(n + d) * &self.eps(n);
            let rhs = (&self.eps(n + 1) * &self.diff(n)).scale(&F::sign(d));
            if lhs != rhs {
                return bad("ε is not closed", n);
            }
        }
        Ok(())
    }

    pub fn zero(d: i64, side: Side) -> Self {
        ADModule { d, side, dims: BTreeMap::new(), differential: BTreeMap::new(), epsilon: BTreeMap::new() }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    pub fn dim(&self, n: i64) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn space(&self) -> GradedVectorSpace {
        GradedVectorSpace::new(self.dims.iter().map(|(k, v)| (*k, *v)))
    }

    /// `D` out of degree `n` (zero matrix if absent).
    pub fn diff(&self, n: i64) -> Matrix<F> {
        self.differential
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(n + 1), self.dim(n)))
    }

    /// `ε` out of degree `n` (zero matrix if absent).
    pub fn eps(&self, n: i64) -> Matrix<F> {
        self.epsilon
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(n + self.d), self.dim(n)))
    }

    pub fn cochain_complex(&self) -> CochainComplex<F> {
        let diffs = self
            .differential
            .iter()
            .map(|(n, m)| (*n, SparseMatrix::from_dense(m)))
            .collect();
        CochainComplex::new_unchecked(self.dims.clone(), diffs)
    }

    pub fn cohomology_dims(&self) -> GradedVectorSpace {
        self.cochain_complex().cohomology_dims()
    }

    /// `M[s]`: degree `k` of the result is degree `k + s` of `M`; `D` picks
    /// up `(-1)^s`.
    pub fn shift(&self, s: i64) -> Self {
        let sign = F::sign(s);
        ADModule {
            d: self.d,
            side: self.side,
            dims: self.dims.iter().map(|(k, v)| (k - s, *v)).collect(),
            differential: self.differential.iter().map(|(k, m)| (k - s, m.scale(&sign))).collect(),
            epsilon: self.epsilon.iter().map(|(k, m)| (k - s, m.clone())).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::InvalidParameter("direct sum of modules with different d".into()));
        }
        if self.side != other.side {
            return Err(Error::SideMismatch("direct sum of a left and a right module".into()));
        }
        let mut dims = self.dims.clone();
        for (k, v) in &other.dims {
            *dims.entry(*k).or_insert(0) += v;
        }
        let block = |a: Matrix<F>, b: Matrix<F>| {
            let mut m = Matrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    m[(r, c)] = a[(r, c)].clone();
                }
            }
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    m[(a.rows() + r, a.cols() + c)] = b[(r, c)].clone();
                }
            }
            m
        };
        let mut differential = BTreeMap::new();
        let mut epsilon = BTreeMap::new();
        for &n in dims.keys() {
            differential.insert(n, block(self.diff(n), other.diff(n)));
            epsilon.insert(n, block(self.eps(n), other.eps(n)));
        }
        Ok(ADModule { d: self.d, side: self.side, dims, differential, epsilon }.prune())
    }

    /// Transport of structure along an invertible degree-preserving linear
    /// map `P`: `D' = P D P^-1`, `ε' = P ε P^-1`.
    pub fn conjugate(&self, p: &BTreeMap<i64, Matrix<F>>) -> Result<Self> {
        let mut inv = BTreeMap::new();
        for (&n, &k) in &self.dims {
            let pn = p.get(&n).ok_or_else(|| Error::InvalidParameter("missing base change".into()))?;
            if pn.rows() != k || pn.cols() != k {
                return Err(Error::InvalidParameter("base change has the wrong size".into()));
            }
            inv.insert(n, pn.inverse().ok_or_else(|| Error::InvalidParameter("base change not invertible".into()))?);
        }
        let conj = |target: i64, m: &Matrix<F>, source: i64| -> Matrix<F> {
            match (p.get(&target), inv.get(&source)) {
                (Some(pt), Some(is)) => &(pt * m) * is,
                _ => m.clone(),
            }
        };
        Ok(ADModule {
            d: self.d,
            side: self.side,
            dims: self.dims.clone(),
            differential: self.differential.iter().map(|(n, m)| (*n, conj(n + 1, m, *n))).collect(),
            epsilon: self.epsilon.iter().map(|(n, m)| (*n, conj(n + self.d, m, *n))).collect(),
        })
    }

    pub fn random_conjugate<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        let p = self
            .dims
            .iter()
            .map(|(n, k)| (*n, Matrix::random_invertible(*k, rng)))
            .collect();
        self.conjugate(&p).expect("random base change is invertible")
    }

    /// `Ind` along `ε ↦ λε`.
    pub fn ind_phi_lambda(&self, lambda: &F) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::ZeroLambda);
        }
        let mut m = self.clone();
        for e in m.epsilon.values_mut() {
            *e = e.scale(lambda);
        }
        Ok(m)
    }

    pub fn transpose_side(&self) -> Self {
        let side = match self.side {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        };
        self.clone().with_side(side)
    }
}

/// `A_d` as a module over itself.
pub fn make_a<F: Field>(d: i64) -> Result<ADModule<F>> {
    make_b(d, 1, 0)
}

/// `B_n[shift]`: for `n ≥ 1` the convolution of
/// `A_d[(1-n)d] → … → A_d[-d] → A_d` (each map multiplication by ε); `B_0 = K`.
///
/// Basis `1_i, ε_i` for `i = -(n-1)..=0`, `|1_i| = i(1-d)`, `|ε_i| = |1_i| + d`,
/// `D 1_i = ε_{i+1}` for `i < 0`, `ε 1_i = ε_i`.
pub fn make_b<F: Field>(d: i64, n: u32, shift: i64) -> Result<ADModule<F>> {
    if d == 0 {
        return Err(Error::InvalidParameter("the degree of ε must be nonzero".into()));
    }
    if n == 0 {
        return Ok(ADModule {
            d,
            side: Side::Right,
            dims: BTreeMap::from([(0, 1)]),
            differential: BTreeMap::new(),
            epsilon: BTreeMap::new(),
        }
        .shift(shift));
    }
    let basis = b_basis(d, n);
    let mut pos: HashMap<(bool, i64), (i64, usize)> = HashMap::new();
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    for &(is_eps, i, deg) in &basis {
        let k = dims.entry(deg).or_insert(0);
        pos.insert((is_eps, i), (deg, *k));
        *k += 1;
    }
    let mut differential: BTreeMap<i64, Matrix<F>> = BTreeMap::new();
    let mut epsilon: BTreeMap<i64, Matrix<F>> = BTreeMap::new();
    let dim = |k: i64| dims.get(&k).copied().unwrap_or(0);
    let lo = -(n as i64 - 1);
    for i in lo..=0 {
        let (deg, c) = pos[&(false, i)];
        let (edeg, ec) = pos[&(true, i)];
        epsilon
            .entry(deg)
            .or_insert_with(|| Matrix::zeros(dim(deg + d), dim(deg)))[(ec, c)] = F::one();
        debug_assert_eq!(edeg, deg + d);
        if i < 0 {
            let (tdeg, tc) = pos[&(true, i + 1)];
            debug_assert_eq!(tdeg, deg + 1);
            differential
                .entry(deg)
                .or_insert_with(|| Matrix::zeros(dim(deg + 1), dim(deg)))[(tc, c)] = F::one();
        }
    }
    let m = ADModule::new(d, Side::Right, dims, differential, epsilon)?;
    Ok(m.shift(shift))
}

/// `(is_ε, i, degree)` in the basis order used by [`make_b`].
pub fn b_basis(d: i64, n: u32) -> Vec<(bool, i64, i64)> {
    let lo = -(n as i64 - 1);
    (lo..=0)
        .flat_map(|i| [(false, i, i * (1 - d)), (true, i, i * (1 - d) + d)])
        .collect()
}

/// Coordinates of `1_i` (or `ε_i`) in the unshifted `make_b(d, n, 0)`.
pub fn b_coordinate(d: i64, n: u32, is_eps: bool, i: i64) -> (i64, usize) {
    let mut count: BTreeMap<i64, usize> = BTreeMap::new();
    for (e, j, deg) in b_basis(d, n) {
        let k = count.entry(deg).or_insert(0);
        if e == is_eps && j == i {
            return (deg, *k);
        }
        *k += 1;
    }
    panic!("no such basis element");
}

/// `C_n[shift]`, the left-module counterpart of `B_n`.
pub fn make_c<F: Field>(d: i64, n: u32, shift: i64) -> Result<ADModule<F>> {
    Ok(make_b(d, n, shift)?.with_side(Side::Left))
}

/// A contractible two-dimensional module `K[-deg] → K[-deg-1]` with `ε = 0`.
pub fn contractible_pair<F: Field>(d: i64, deg: i64) -> ADModule<F> {
    ADModule::new(
        d,
        Side::Right,
        BTreeMap::from([(deg, 1), (deg + 1, 1)]),
        BTreeMap::from([(deg, Matrix::identity(1))]),
        BTreeMap::new(),
    )
    .expect("contractible pair is valid")
}

/// Free `K[q]`-module with a homogeneous differential; `|q| = 1 - d`.
#[derive(Clone, Debug)]
pub struct KoszulComplex<F> {
    pub generator_degree: i64,
    /// Degree of each free generator.
    pub degrees: Vec<i64>,
    /// `matrix[j][i]`: component of the differential from generator `i` to `j`.
    pub matrix: PolyMatrix<F>,
}

/// Graded `K[q]`-module `⊕ K[q]·g ⊕ ⊕ K[q]/q^n·g`, generators by degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KoszulCohomology {
    pub free: Vec<i64>,
    /// `(n, generator degree)`.
    pub torsion: Vec<(u32, i64)>,
}

/// `M ⊗ K[q]` with `Δ(m q^a) = D(m) q^a + (-1)^{(d+1)|m|} ε(m) q^{a+1}`.
pub fn koszul_dual<F: Field>(m: &ADModule<F>) -> KoszulComplex<F> {
    let gen = 1 - m.d;
    let mut degrees = Vec::new();
    let mut offset = BTreeMap::new();
    for (&n, &k) in &m.dims {
        offset.insert(n, degrees.len());
        degrees.extend(std::iter::repeat_n(n, k));
    }
    let size = degrees.len();
    let mut matrix = vec![vec![Poly::zero(gen); size]; size];
    for (&n, &k) in &m.dims {
        let src = offset[&n];
        let dm = m.diff(n);
        if let Some(&tgt) = offset.get(&(n + 1)) {
            for c in 0..k {
                for r in 0..dm.rows() {
                    if !dm[(r, c)].is_zero() {
                        matrix[tgt + r][src + c] = Poly::constant(dm[(r, c)].clone(), gen);
                    }
                }
            }
        }
        let em = m.eps(n);
        let sign = F::sign((m.d + 1) * n);
        if let Some(&tgt) = offset.get(&(n + m.d)) {
            for c in 0..k {
                for r in 0..em.rows() {
                    if !em[(r, c)].is_zero() {
                        let e = Poly::monomial(em[(r, c)].clone() * sign.clone(), 1, gen);
                        matrix[tgt + r][src + c] = matrix[tgt + r][src + c].add(&e);
                    }
                }
            }
        }
    }
    KoszulComplex { generator_degree: gen, degrees, matrix }
}

impl<F: Field> KoszulComplex<F> {
    /// Verifies `Δ² = 0` over `K[q]`.
    pub fn check(&self) -> Result<()> {
        let sq = crate::poly::poly_matmul(&self.matrix, &self.matrix, self.generator_degree);
        for (j, row) in sq.iter().enumerate() {
            if row.iter().any(|p| !p.is_zero()) {
                return Err(Error::Invariant {
                    what: "Koszul differential does not square to zero".into(),
                    degree: self.degrees[j],
                });
            }
        }
        Ok(())
    }

    /// Cohomology by homogeneous elimination: repeatedly take a nonzero entry
    /// of least `q`-degree, clear its row and column by base changes, and
    /// split off the pair. Requires every entry to be a monomial.
    pub fn cohomology(&self) -> Result<KoszulCohomology> {
        let size = self.degrees.len();
        let mut a: Vec<Vec<Option<(F, u32)>>> = vec![vec![None; size]; size];
        for (j, row) in self.matrix.iter().enumerate() {
            for (i, p) in row.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                let (c, e) = p.as_monomial().ok_or_else(|| Error::InvalidParameter(
                    "differential entries are not monomials (d = 1 is not supported)".into(),
                ))?;
                a[j][i] = Some((c.clone(), e));
            }
        }
        let mut alive = vec![true; size];
        let mut out = KoszulCohomology::default();
        loop {
            let mut best: Option<(u32, usize, usize)> = None;
            for (j, row) in a.iter().enumerate() {
                for (i, x) in row.iter().enumerate() {
                    if let Some((_, e)) = x {
                        if best.is_none_or(|(be, bi, bj)| (*e, i, j) < (be, bi, bj)) {
                            best = Some((*e, i, j));
                        }
                    }
                }
            }
            let Some((e, i, j)) = best else { break };
            let (c, _) = a[j][i].clone().unwrap();
            let cinv = c.inv().unwrap();
            // Clear column i with row operations, then row j with column
            // operations. The companion halves of these conjugations only touch
            // column j and row i, which vanish afterwards because Δ² = 0.
            for jj in 0..size {
                if jj == j {
                    continue;
                }
                if let Some((c2, e2)) = a[jj][i].clone() {
                    let f = c2 * cinv.clone();
                    let de = e2 - e;
                    for col in 0..size {
                        if let Some((cj, ej)) = a[j][col].clone() {
                            sub_monomial(&mut a[jj][col], f.clone() * cj, ej + de);
                        }
                    }
                }
            }
            for ii in 0..size {
                if ii == i {
                    continue;
                }
                if let Some((c2, e2)) = a[j][ii].clone() {
                    let f = c2 * cinv.clone();
                    let de = e2 - e;
                    for row in a.iter_mut() {
                        if let Some((ci, ei)) = row[i].clone() {
                            sub_monomial(&mut row[ii], f.clone() * ci, ei + de);
                        }
                    }
                }
            }
            for k in 0..size {
                a[j][k] = None;
                a[k][i] = None;
                a[k][j] = None;
                a[i][k] = None;
            }
            alive[i] = false;
            alive[j] = false;
            if e > 0 {
                out.torsion.push((e, self.degrees[j]));
            }
        }
        for (k, &al) in alive.iter().enumerate() {
            if al {
                out.free.push(self.degrees[k]);
            }
        }
        out.free.sort_unstable();
        out.torsion.sort_unstable();
        Ok(out)
    }

    /// Exponents `n ≥ 1` of the non-unit invariant factors `q^n`.
    pub fn torsion_exponents_snf(&self) -> Vec<u32> {
        let snf = smith_normal_form(&self.matrix, self.generator_degree);
        let mut v: Vec<u32> = snf
            .diag
            .iter()
            .filter_map(|p| p.degree().filter(|&e| e > 0))
            .collect();
        v.sort_unstable();
        v
    }
}

fn sub_monomial<F: Field>(slot: &mut Option<(F, u32)>, c: F, e: u32) {
    match slot.take() {
        None => *slot = Some((-c, e)),
        Some((c0, e0)) => {
            assert_eq!(e0, e, "inhomogeneous update");
            let v = c0 - c;
            if !v.is_zero() {
                *slot = Some((v, e));
            }
        }
    }
}

/// Multiset of `(n, shift)` with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub summands: BTreeMap<(u32, i64), usize>,
    pub compact: bool,
}

impl DecompositionReport {
    pub fn from_list(list: &[(u32, i64)]) -> Self {
        let mut summands = BTreeMap::new();
        for &s in list {
            *summands.entry(s).or_insert(0) += 1;
        }
        let compact = list.iter().all(|(n, _)| *n > 0);
        DecompositionReport { summands, compact }
    }

    pub fn to_list(&self) -> Vec<(u32, i64)> {
        self.summands
            .iter()
            .flat_map(|(s, k)| std::iter::repeat_n(*s, *k))
            .collect()
    }

    /// `"(2,0)×1, (0,-1)×1; compact: false"`, sorted by `n` descending then shift.
    pub fn render(&self) -> String {
        let mut items: Vec<_> = self.summands.iter().collect();
        items.sort_by(|a, b| b.0 .0.cmp(&a.0 .0).then(a.0 .1.cmp(&b.0 .1)));
        let body: Vec<String> = items
            .iter()
            .map(|((n, s), k)| format!("({n},{s})×{k}"))
            .collect();
        let body = if body.is_empty() { "(empty)".to_string() } else { body.join(", ") };
        format!("{body}; compact: {}", self.compact)
    }
}

/// Decomposes `m` into shifts of `B_n`: `K[q]/q^n` generated in degree `g`
/// gives `B_n[-g - n(1-d) + 1]`, a free generator in degree `g` gives `B_0[-g]`.
pub fn decompose<F: Field>(m: &ADModule<F>) -> Result<DecompositionReport> {
    if m.d == 1 {
        return Err(Error::InvalidParameter("decomposition needs d != 1".into()));
    }
    let k = koszul_dual(m);
    let h = k.cohomology()?;
    let mut snf: Vec<u32> = h.torsion.iter().map(|(n, _)| *n).collect();
    snf.sort_unstable();
    if snf != k.torsion_exponents_snf() {
        return Err(Error::Invariant {
            what: "elimination and Smith normal form disagree".into(),
            degree: 0,
        });
    }
    let mut list: Vec<(u32, i64)> = h.free.iter().map(|g| (0, -g)).collect();
    list.extend(h.torsion.iter().map(|&(n, g)| (n, -g - n as i64 * (1 - m.d) + 1)));
    Ok(DecompositionReport::from_list(&list))
}

pub fn is_compact<F: Field>(m: &ADModule<F>) -> Result<bool> {
    Ok(decompose(m)?.compact)
}

/// Builds `⊕ B_n[s]` from a list.
pub fn sum_of_b<F: Field>(d: i64, list: &[(u32, i64)]) -> Result<ADModule<F>> {
    let mut acc = ADModule::zero(d, Side::Right);
    for &(n, s) in list {
        acc = acc.direct_sum(&make_b(d, n, s)?)?;
    }
    Ok(acc)
}

/// Convolution of `(M⊗N)[(levels-1)(1-d)] → … → (M⊗N)[1-d] → M⊗N`, where
/// the map out of position `j+1` is `ε_M⊗1 + σ_{j+1} (-1)^{d|m|} 1⊗ε_N` with
/// `σ_2 = -1`, `σ_{j+1} = (-1)^{d+1} σ_j`. Position 1 is the plain tensor
/// product over `K`.
pub struct TruncatedTensor<F> {
    pub complex: CochainComplex<F>,
    d: i64,
    mdims: BTreeMap<i64, usize>,
    ndims: BTreeMap<i64, usize>,
    /// `(position, |m|, |n|) -> (total degree, offset)`.
    blocks: HashMap<(usize, i64, i64), (i64, usize)>,
}

/// Sign `σ_j` of the ε-coupling in the tower of tensor (or twist) positions.
pub fn sigma<F: Field>(d: i64, j: usize) -> F {
    let mut s = -F::one();
    for _ in 2..j {
        s = s * F::sign(d + 1);
    }
    s
}

/// `(position, m, n, coeff)`, with `m`, `n` as `(degree, index)` coordinates.
pub type TensorTerm<F> = (usize, (i64, usize), (i64, usize), F);

pub fn truncated_tensor<F: Field>(m: &ADModule<F>, n: &ADModule<F>, levels: usize) -> Result<TruncatedTensor<F>> {
    if m.side != Side::Right || n.side != Side::Left {
        return Err(Error::SideMismatch("expected a right module tensored with a left module".into()));
    }
    if m.d != n.d {
        return Err(Error::InvalidParameter("modules over different A_d".into()));
    }
    if levels == 0 {
        return Err(Error::InvalidParameter("levels must be at least 1".into()));
    }
    let d = m.d;
    let mut blocks = HashMap::new();
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    for j in 1..=levels {
        let s = (j as i64 - 1) * (1 - d);
        for (&p, &a) in &m.dims {
            for (&q, &b) in &n.dims {
                let t = p + q - s;
                let off = dims.entry(t).or_insert(0);
                blocks.insert((j, p, q), (t, *off));
                *off += a * b;
            }
        }
    }
    let mut entries: BTreeMap<i64, Vec<(usize, usize, F)>> = BTreeMap::new();
    let nb = |q: i64| n.dim(q);
    let push = |entries: &mut BTreeMap<i64, Vec<(usize, usize, F)>>,
                    src: (i64, usize),
                    tgt: (i64, usize),
                    v: F| {
        debug_assert_eq!(tgt.0, src.0 + 1);
        if !v.is_zero() {
            entries.entry(src.0).or_default().push((tgt.1, src.1, v));
        }
    };
    for j in 1..=levels {
        let sj: F = F::sign((j as i64 - 1) * (1 - d));
        let sig: F = sigma(d, j);
        for (&p, &a) in &m.dims {
            for (&q, &b) in &n.dims {
                let (t, off) = blocks[&(j, p, q)];
                let dm = m.diff(p);
                let dn = n.diff(q);
                let em = m.eps(p);
                let en = n.eps(q);
                for x in 0..a {
                    for y in 0..b {
                        let src = (t, off + x * b + y);
                        // D(m ⊗ n) = Dm ⊗ n + (-1)^{|m|} m ⊗ Dn
                        if let Some(&(tt, o2)) = blocks.get(&(j, p + 1, q)) {
                            for r in 0..dm.rows() {
                                let v = dm[(r, x)].clone() * sj.clone();
                                push(&mut entries, src, (tt, o2 + r * b + y), v);
                            }
                        }
                        if let Some(&(tt, o2)) = blocks.get(&(j, p, q + 1)) {
                            let bb = nb(q + 1);
                            for r in 0..dn.rows() {
                                let v = dn[(r, y)].clone() * sj.clone() * F::sign(p);
                                push(&mut entries, src, (tt, o2 + x * bb + r), v);
                            }
                        }
                        if j == 1 {
                            continue;
                        }
                        let jj = j - 1;
                        if let Some(&(tt, o2)) = blocks.get(&(jj, p + d, q)) {
                            for r in 0..em.rows() {
                                push(&mut entries, src, (tt, o2 + r * b + y), em[(r, x)].clone());
                            }
                        }
                        if let Some(&(tt, o2)) = blocks.get(&(jj, p, q + d)) {
                            let bb = nb(q + d);
                            let c = sig.clone() * F::sign(d * p);
                            for r in 0..en.rows() {
                                push(&mut entries, src, (tt, o2 + x * bb + r), en[(r, y)].clone() * c.clone());
                            }
                        }
                    }
                }
            }
        }
    }
    let mut diffs = BTreeMap::new();
    for (t, list) in entries {
        let mut sm = SparseMatrix::new(dims.get(&(t + 1)).copied().unwrap_or(0), dims[&t]);
        for (r, c, v) in list {
            sm.push(r, c, v);
        }
        sm.normalize();
        diffs.insert(t, sm);
    }
    let complex = CochainComplex::new(dims, diffs)?;
    Ok(TruncatedTensor { complex, d, mdims: m.dims.clone(), ndims: n.dims.clone(), blocks })
}

impl<F: Field> TruncatedTensor<F> {
    pub fn d(&self) -> i64 {
        self.d
    }

    /// The element `Σ c · (m ⊗ n)` placed at `position`, as `(degree, vector)`.
    /// `m`, `n` are `(degree, index)` coordinates in the two modules.
    pub fn element(&self, terms: &[TensorTerm<F>]) -> Option<(i64, Vec<F>)> {
        let mut deg = None;
        let mut v: Vec<F> = Vec::new();
        for (pos, (p, x), (q, y), c) in terms {
            let &(t, off) = self.blocks.get(&(*pos, *p, *q))?;
            if deg.is_none() {
                deg = Some(t);
                v = vec![F::zero(); self.complex.dim(t)];
            }
            if deg != Some(t) {
                return None;
            }
            let b = self.ndims[q];
            debug_assert!(*x < self.mdims[p]);
            v[off + x * b + y] = v[off + x * b + y].clone() + c.clone();
        }
        deg.map(|t| (t, v))
    }

    pub fn total_cohomology(&self) -> usize {
        self.complex.cohomology_dims().total()
    }
}

/// A semi-free `K[q]` module: generator degrees and differential entries
/// `(target, source, c, a)` meaning `D(source) ∋ c · target · q^a`.
#[derive(Clone, Debug)]
struct SemiFree {
    degrees: Vec<i64>,
    diff: Vec<(usize, usize, i64, u32)>,
}

/// Koszul-dual resolution of `⊕ B_n[s]`: `B_0[s] ↔ K[q][s]`,
/// `B_n[s] ↔ cone(q^n)` on a generator of degree `-(s + n(1-d) - 1)`.
fn resolution(d: i64, list: &[(u32, i64)]) -> SemiFree {
    let g = 1 - d;
    let mut r = SemiFree { degrees: Vec::new(), diff: Vec::new() };
    for &(n, s) in list {
        if n == 0 {
            r.degrees.push(-s);
        } else {
            let m = s + n as i64 * g - 1;
            let y = r.degrees.len();
            r.degrees.push(-m);
            r.degrees.push(-m + n as i64 * g - 1);
            r.diff.push((y, y + 1, 1, n));
        }
    }
    r
}

/// `dim Hom^t` in `D(K[q])` between two semi-free modules, for each `t`.
fn semifree_hom_dims<F: Field>(x: &SemiFree, y: &SemiFree, g: i64, window: (i64, i64)) -> BTreeMap<i64, usize> {
    // basis of Hom^t: (source gen, target gen, a) with |y| + a g = |x| + t
    let basis = |t: i64| -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for (i, &dx) in x.degrees.iter().enumerate() {
            for (j, &dy) in y.degrees.iter().enumerate() {
                let num = dx + t - dy;
                if num % g == 0 && num / g >= 0 {
                    out.push((i, j, (num / g) as u32));
                }
            }
        }
        out
    };
    let mut result = BTreeMap::new();
    let (lo, hi) = (window.0.min(window.1), window.0.max(window.1));
    let mut cache: HashMap<i64, Vec<(usize, usize, u32)>> = HashMap::new();
    let mut get = |t: i64| cache.entry(t).or_insert_with(|| basis(t)).clone();
    let dmat = |t: i64, src: &[(usize, usize, u32)], tgt: &[(usize, usize, u32)]| -> Matrix<F> {
        let index: HashMap<(usize, usize, u32), usize> =
            tgt.iter().enumerate().map(|(k, b)| (*b, k)).collect();
        let mut m = Matrix::<F>::zeros(tgt.len(), src.len());
        let sign = -F::sign(t);
        for (col, &(i, j, a)) in src.iter().enumerate() {
            // D_Y ∘ F
            for &(jt, js, c, e) in &y.diff {
                if js == j {
                    if let Some(&row) = index.get(&(i, jt, a + e)) {
                        m[(row, col)] = m[(row, col)].clone() + F::from_i64(c);
                    }
                }
            }
            // -(-1)^t F ∘ D_X
            for &(it, is, c, e) in &x.diff {
                if it == i {
                    if let Some(&row) = index.get(&(is, j, a + e)) {
                        m[(row, col)] = m[(row, col)].clone() + sign.clone() * F::from_i64(c);
                    }
                }
            }
        }
        m
    };
    for t in lo..=hi {
        let (prev, cur, next) = (get(t - 1), get(t), get(t + 1));
        let out_rank = dmat(t, &cur, &next).rank();
        let in_rank = dmat(t - 1, &prev, &cur).rank();
        let h = cur.len() - out_rank - in_rank;
        if h > 0 {
            result.insert(t, h);
        }
    }
    result
}

/// Default window: support spread of the shifts plus `3|1-d|` on each side.
pub fn default_window(d: i64, list: &[(u32, i64)]) -> (i64, i64) {
    let g = (1 - d).abs();
    let mut degs = vec![0i64, d];
    for &(n, s) in list {
        degs.push(-s);
        degs.push(d - s - (n as i64 - 1).max(0) * (1 - d));
    }
    let lo = *degs.iter().min().unwrap();
    let hi = *degs.iter().max().unwrap();
    let spread = hi - lo;
    (-spread - 3 * g, spread + 3 * g)
}

/// `dim Hom^t(X, X)` in `D(A_d)` for `t` in `window` (inclusive, either
/// orientation), computed on Koszul-dual resolutions.
pub fn endo_algebra_dims(d: i64, list: &[(u32, i64)], window: Option<(i64, i64)>) -> Result<GradedVectorSpace> {
    hom_dims_between::<crate::field::Gf<32003>>(d, list, list, window)
}

/// `dim Hom^t(X, Y)` in `D(A_d)` for sums of `B_n` shifts.
pub fn hom_dims_between<F: Field>(
    d: i64,
    x: &[(u32, i64)],
    y: &[(u32, i64)],
    window: Option<(i64, i64)>,
) -> Result<GradedVectorSpace> {
    if d == 0 || d == 1 {
        return Err(Error::InvalidParameter("need d ∉ {0, 1}".into()));
    }
    let mut both = x.to_vec();
    both.extend_from_slice(y);
    let w = window.unwrap_or_else(|| default_window(d, &both));
    let dims = semifree_hom_dims::<F>(&resolution(d, x), &resolution(d, y), 1 - d, w);
    Ok(GradedVectorSpace::new(dims))
}

/// Whether the window dims are exactly those of `A_d`: `{0: 1, d: 1}`.
pub fn looks_like_ad(d: i64, dims: &GradedVectorSpace) -> bool {
    *dims == GradedVectorSpace::new([(0, 1), (d, 1)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Gf, Rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type F = Gf<32003>;

    #[test]
    fn b_modules_have_two_dimensional_cohomology() {
        for d in [2, 3, -1, -2] {
            for n in 1..5 {
                let b = make_b::<F>(d, n, 0).unwrap();
                assert_eq!(b.cohomology_dims().total(), 2, "d={d} n={n}");
            }
            assert_eq!(make_b::<F>(d, 0, 0).unwrap().cohomology_dims().total(), 1);
        }
    }

    #[test]
    fn b1_is_free_rank_one() {
        let a = make_a::<F>(3).unwrap();
        assert_eq!(a.space(), GradedVectorSpace::new([(0, 1), (3, 1)]));
        assert_eq!(decompose(&a).unwrap().to_list(), vec![(1, 0)]);
    }

    #[test]
    fn zero_module() {
        let z = ADModule::<F>::zero(2, Side::Right);
        let r = decompose(&z).unwrap();
        assert!(r.summands.is_empty());
        assert!(r.compact);
    }

    #[test]
    fn rejects_d_zero_and_bad_epsilon() {
        assert!(matches!(make_b::<F>(0, 1, 0), Err(Error::InvalidParameter(_))));
        let r = ADModule::<F>::new(
            1,
            Side::Right,
            BTreeMap::from([(0, 1), (1, 1), (2, 1)]),
            BTreeMap::new(),
            BTreeMap::from([(0, Matrix::identity(1)), (1, Matrix::identity(1))]),
        );
        assert!(matches!(r, Err(Error::Invariant { degree: 0, .. })));
    }

    #[test]
    fn koszul_duals_of_b_modules() {
        for d in [2, 3, -1] {
            let h0 = koszul_dual(&make_b::<F>(d, 0, 0).unwrap()).cohomology().unwrap();
            assert_eq!(h0.free.len(), 1);
            assert!(h0.torsion.is_empty());
            for n in 1..5 {
                let h = koszul_dual(&make_b::<F>(d, n, 0).unwrap()).cohomology().unwrap();
                assert!(h.free.is_empty());
                assert_eq!(h.torsion.iter().map(|t| t.0).collect::<Vec<_>>(), vec![n]);
            }
        }
    }

    #[test]
    fn decompose_shifted_b_modules() {
        for d in [2, 3, -1] {
            for n in 0..5 {
                for s in -4..=4 {
                    let r = decompose(&make_b::<F>(d, n, s).unwrap()).unwrap();
                    assert_eq!(r.to_list(), vec![(n, s)], "d={d} n={n} s={s}");
                }
            }
        }
    }

    #[test]
    fn scrambled_sum_with_padding() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = sum_of_b::<Rational>(2, &[(2, 3), (0, -1)]).unwrap();
        let m = m
            .direct_sum(&contractible_pair(2, 0))
            .unwrap()
            .direct_sum(&contractible_pair(2, -3))
            .unwrap()
            .random_conjugate(&mut rng);
        let r = decompose(&m).unwrap();
        assert_eq!(r.to_list(), vec![(0, -1), (2, 3)]);
        assert!(!r.compact);
    }

    #[test]
    fn compactness() {
        assert!(!is_compact(&make_b::<F>(2, 0, 0).unwrap()).unwrap());
        assert!(is_compact(&make_b::<F>(2, 3, 7).unwrap()).unwrap());
        assert!(is_compact(&ADModule::<F>::zero(2, Side::Right)).unwrap());
    }

    #[test]
    fn ind_phi_lambda_preserves_decomposition() {
        let m = sum_of_b::<F>(3, &[(2, 0), (0, 1)]).unwrap();
        assert_eq!(m.ind_phi_lambda(&F::new(1)).unwrap(), m);
        let r = decompose(&m.ind_phi_lambda(&F::new(7)).unwrap()).unwrap();
        assert_eq!(r.to_list(), vec![(0, 1), (2, 0)]);
        assert_eq!(m.ind_phi_lambda(&F::new(0)).unwrap_err(), Error::ZeroLambda);
    }

    #[test]
    fn tensor_level_one_is_plain_tensor() {
        let b = make_b::<F>(2, 2, 0).unwrap();
        let c = make_c::<F>(2, 1, 0).unwrap();
        let t = truncated_tensor(&b, &c, 1).unwrap();
        assert_eq!(t.complex.terms().total(), b.total_dim() * c.total_dim());
        assert!(matches!(truncated_tensor(&c, &b, 2), Err(Error::SideMismatch(_))));
    }

    #[test]
    fn endo_of_b1_is_ad() {
        for d in [2, 3, -1] {
            let dims = endo_algebra_dims(d, &[(1, 0)], None).unwrap();
            assert!(looks_like_ad(d, &dims), "d={d}: {dims:?}");
        }
    }

    #[test]
    fn endo_of_b0_is_infinite() {
        let dims = endo_algebra_dims(-1, &[(0, 0)], Some((0, 10))).unwrap();
        assert!(dims.dims().len() >= 6);
    }
}
