//! Spherical objects, twists along them, and intersection numbers.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::algebra::AlgElem;
use crate::dual::{sigma, ADModule, Side};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::GradedVectorSpace;
use crate::linalg::Matrix;
use crate::twisted::{hom_complex, hom_dims, iso_up_to_shift, HomComplex, Morphism, Summand, TwistedComplex};

/// An object with endomorphisms `k ⊕ k[-d]` and a strict square-zero
/// representative `ε` of the degree-`d` class.
#[derive(Clone, Debug)]
pub struct SphericalObject<F: Field> {
    object: TwistedComplex<F>,
    d: i64,
    epsilon: Morphism<F>,
}

impl<F: Field> SphericalObject<F> {
    /// Validates the endomorphism dims, the Frobenius certificate, and that
    /// `epsilon` is a closed, square-zero, non-exact endomorphism of degree `d`.
    pub fn new(object: TwistedComplex<F>, d: i64, epsilon: Morphism<F>) -> Result<Self> {
        require_frobenius(&object, d)?;
        let hom = hom_complex(&object, &object)?;
        let dims = hom.cohomology_dims();
        if !is_spherical_dims(d, &dims) {
            return Err(Error::NotSpherical { d, dims: format!("{:?}", dims.dims()) });
        }
        if epsilon.degree != d {
            return Err(Error::WrongDegree { expected: d, found: epsilon.degree });
        }
        object.check_morphism(&object, &epsilon)?;
        if !object.morphism_differential(&object, &epsilon).is_zero() {
            return Err(Error::NotClosed);
        }
        if !epsilon.compose(&epsilon, object.algebra()).is_zero() {
            return Err(Error::NoStrictRepresentative(d));
        }
        if hom.complex().class_rank(d, &[hom.from_morphism(&epsilon)]) != 1 {
            return Err(Error::Invariant { what: "ε represents the zero class".into(), degree: d });
        }
        Ok(SphericalObject { object, d, epsilon })
    }

    pub fn object(&self) -> &TwistedComplex<F> {
        &self.object
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn epsilon(&self) -> &Morphism<F> {
        &self.epsilon
    }

    /// `E[n]` with the same `ε` entries.
    pub fn shift(&self, n: i64) -> Self {
        SphericalObject { object: self.object.shift(n), d: self.d, epsilon: self.epsilon.clone() }
    }
}

fn require_frobenius<F: Field>(x: &TwistedComplex<F>, d: i64) -> Result<()> {
    match x.algebra().cy_dimension() {
        Some(k) if k == d => Ok(()),
        _ => Err(Error::MissingFrobenius(d)),
    }
}

fn is_spherical_dims(d: i64, dims: &GradedVectorSpace) -> bool {
    d != 0 && *dims == GradedVectorSpace::new([(0, 1), (d, 1)])
}

const CORRECTION_ROUNDS: usize = 4;

/// Returns the spherical structure on `x` if its endomorphisms are
/// `k ⊕ k[-d]`. A cocycle of the degree-`d` class is corrected by
/// coboundaries until it squares to zero; failure is reported.
pub fn check_spherical<F: Field>(x: &TwistedComplex<F>, d: i64) -> Result<Option<SphericalObject<F>>> {
    require_frobenius(x, d)?;
    let hom = hom_complex(x, x)?;
    if !is_spherical_dims(d, &hom.cohomology_dims()) {
        return Ok(None);
    }
    let alg = x.algebra();
    let mut eps = hom.cocycle_basis(d).remove(0);
    for _ in 0..=CORRECTION_ROUNDS {
        let sq = eps.compose(&eps, alg);
        if sq.is_zero() {
            return SphericalObject::new(x.clone(), d, eps).map(Some);
        }
        // Solve ε∘dη + dη∘ε = -ε² for η of degree d-1.
        let dprev = hom.complex().differential(d - 1);
        let cols: Vec<Vec<F>> = (0..hom.dim(d - 1))
            .map(|c| {
                let eta = hom.to_morphism(d, &dprev.column(c));
                let v = eps.compose(&eta, alg).add(&eta.compose(&eps, alg));
                square_coords(&hom, &v)
            })
            .collect();
        let target: Vec<F> = square_coords(&hom, &sq).into_iter().map(|c| -c).collect();
        let a = Matrix::from_columns(target.len(), &cols);
        let Some(sol) = a.solve(&target) else { break };
        let correction = dprev.mul_vec(&sol);
        let delta = hom.to_morphism(d, &correction);
        eps = eps.add(&delta);
    }
    Err(Error::NoStrictRepresentative(d))
}

// Coordinates of an endomorphism of degree 2d (or any degree) in the hom complex.
fn square_coords<F: Field>(hom: &HomComplex<F>, m: &Morphism<F>) -> Vec<F> {
    if hom.dim(m.degree) == 0 {
        return Vec::new();
    }
    hom.from_morphism(m)
}

/// `i(M, N) = Σ_p dim Hom^p(M, N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionProfile {
    pub per_degree: Vec<(i64, usize)>,
    pub total: usize,
}

impl IntersectionProfile {
    pub fn from_dims(dims: &GradedVectorSpace) -> Self {
        IntersectionProfile {
            per_degree: dims.dims().iter().map(|(k, v)| (*k, *v)).collect(),
            total: dims.total(),
        }
    }

    pub fn dims(&self) -> GradedVectorSpace {
        GradedVectorSpace::new(self.per_degree.iter().copied())
    }
}

pub fn intersection_number<F: Field>(m: &TwistedComplex<F>, n: &TwistedComplex<F>) -> Result<IntersectionProfile> {
    Ok(IntersectionProfile::from_dims(&hom_dims(m, n)?))
}

/// `T_E(M) = cone(⊕_k E[-n_k] → M)` over a cocycle basis of `Hom(E, M)`,
/// minimized.
pub fn twist<F: Field>(e: &SphericalObject<F>, m: &TwistedComplex<F>) -> Result<TwistedComplex<F>> {
    let hom = hom_complex(&e.object, m)?;
    let basis = hom.full_cocycle_basis();
    let mut source = TwistedComplex::zero(m.algebra().clone());
    let mut offsets = Vec::new();
    for f in &basis {
        offsets.push(source.len());
        source = source.direct_sum(&e.object.shift(-f.degree))?;
    }
    let mut ev = Morphism::zero(0, source.len(), m.len());
    for (f, off) in basis.iter().zip(offsets) {
        for ((t, s), x) in &f.entries {
            ev.insert(*t, s + off, x.clone());
        }
    }
    Ok(source.cone(m, &ev)?.minimize())
}

/// `T_E^{-1}(M) = cone(M → ⊕_k E[n_k])[-1]` over a cocycle basis of
/// `Hom(M, E)`, minimized.
pub fn inverse_twist<F: Field>(e: &SphericalObject<F>, m: &TwistedComplex<F>) -> Result<TwistedComplex<F>> {
    let hom = hom_complex(m, &e.object)?;
    let basis = hom.full_cocycle_basis();
    let mut target = TwistedComplex::zero(m.algebra().clone());
    let mut offsets = Vec::new();
    for g in &basis {
        offsets.push(target.len());
        target = target.direct_sum(&e.object.shift(g.degree))?;
    }
    let mut coev = Morphism::zero(0, m.len(), target.len());
    for (g, off) in basis.iter().zip(offsets) {
        for ((t, s), x) in &g.entries {
            coev.insert(t + off, *s, x.clone());
        }
    }
    Ok(m.cone(&target, &coev)?.shift(-1).minimize())
}

/// `T_E^k(N)` by iterating single twists (or inverse twists for `k < 0`).
pub fn twist_power_iterated<F: Field>(
    e: &SphericalObject<F>,
    k: i64,
    n: &TwistedComplex<F>,
) -> Result<TwistedComplex<F>> {
    if k == 0 {
        return Err(Error::ZeroPower);
    }
    let mut x = n.clone();
    for _ in 0..k.unsigned_abs() {
        x = if k > 0 { twist(e, &x)? } else { inverse_twist(e, &x)? };
    }
    Ok(x)
}

/// `T_E^k(N)`. For `k > 0` this is the convolution of
/// `(V⊗E)[1+(k-1)(1-d)] → … → (V⊗E)[1] → N` with `V = Hom(E, N)`, the
/// last map the evaluation and the others `f⊗e ↦ ε_V f⊗e + σ (-1)^{d|f|} f⊗εe`
/// where `ε_V f = (-1)^{d|f|} f∘ε`. For `k < 0` inverse twists are iterated.
pub fn twist_power<F: Field>(e: &SphericalObject<F>, k: i64, n: &TwistedComplex<F>) -> Result<TwistedComplex<F>> {
    if k == 0 {
        return Err(Error::ZeroPower);
    }
    if k < 0 {
        return twist_power_iterated(e, k, n);
    }
    let k = k as usize;
    let alg = n.algebra().clone();
    let d = e.d;
    let eo = &e.object;
    let hom = hom_complex(eo, n)?;
    let vbasis: Vec<(i64, usize)> = hom
        .degrees()
        .flat_map(|deg| (0..hom.dim(deg)).map(move |p| (deg, p)))
        .collect();
    let vindex: HashMap<(i64, usize), usize> = vbasis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    let (nv, me) = (vbasis.len(), eo.len());
    let idx = |j: usize, f: usize, s: usize| (j - 1) * nv * me + f * me + s;
    let nidx = |t: usize| k * nv * me + t;

    let mut summands = Vec::with_capacity(k * nv * me + n.len());
    for j in 1..=k {
        let extra = 1 + (j as i64 - 1) * (1 - d);
        for &(deg, _) in &vbasis {
            for s in eo.summands() {
                summands.push(Summand { vertex: s.vertex, shift: s.shift - deg + extra });
            }
        }
    }
    summands.extend(n.summands().iter().copied());

    let unit = |f: usize| -> Morphism<F> {
        let (deg, p) = vbasis[f];
        let mut v = vec![F::zero(); hom.dim(deg)];
        v[p] = F::one();
        hom.to_morphism(deg, &v)
    };
    let units: Vec<Morphism<F>> = (0..nv).map(unit).collect();
    let deltas: BTreeMap<i64, Matrix<F>> = hom.degrees().map(|deg| (deg, hom.complex().differential(deg))).collect();
    // ε_V on each basis vector, as coordinates in degree |f| + d
    let eps_v: Vec<Vec<F>> = units
        .iter()
        .map(|f| {
            let comp = f.compose(&e.epsilon, &alg);
            let sign = F::sign(d * f.degree);
            if hom.dim(comp.degree) == 0 {
                Vec::new()
            } else {
                hom.from_morphism(&comp).into_iter().map(|c| c * sign.clone()).collect()
            }
        })
        .collect();
    let idem = |s: usize| AlgElem::basis(alg.idempotent(eo.summands()[s].vertex));

    let mut entries: Vec<(usize, usize, AlgElem<F>)> = Vec::new();
    for j in 1..=k {
        let sj = F::sign(1 + (j as i64 - 1) * (1 - d));
        for (f, &(deg, p)) in vbasis.iter().enumerate() {
            let delta = &deltas[&deg];
            for row in 0..delta.rows() {
                let c = delta[(row, p)].clone();
                if c.is_zero() {
                    continue;
                }
                let g = vindex[&(deg + 1, row)];
                for s in 0..me {
                    entries.push((idx(j, f, s), idx(j, g, s), idem(s).scale(&(c.clone() * sj.clone()))));
                }
            }
            let sign = sj.clone() * F::sign(deg);
            for (s, s2, x) in eo.entries() {
                entries.push((idx(j, f, s), idx(j, f, s2), x.scale(&sign)));
            }
        }
    }
    for (s, t, x) in n.entries() {
        entries.push((nidx(s), nidx(t), x.clone()));
    }
    for (f, u) in units.iter().enumerate() {
        for ((t, s), x) in &u.entries {
            entries.push((idx(1, f, *s), nidx(*t), x.clone()));
        }
    }
    for j in 1..k {
        let sig: F = sigma(d, j + 1);
        for (f, &(deg, _)) in vbasis.iter().enumerate() {
            for (pos, c) in eps_v[f].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let g = vindex[&(deg + d, pos)];
                for s in 0..me {
                    entries.push((idx(j + 1, f, s), idx(j, g, s), idem(s).scale(c)));
                }
            }
            let sign = sig.clone() * F::sign(d * deg);
            for ((s2, s), x) in &e.epsilon.entries {
                entries.push((idx(j + 1, f, *s), idx(j, f, *s2), x.scale(&sign)));
            }
        }
    }
    let total = TwistedComplex::new(alg, summands, entries)?;
    Ok(total.minimize())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
}

/// `i(E,M)·i(E,N) ≤ i(T_E^k M, N) + i(M, N)`.
pub fn check_fundamental_inequality<F: Field>(
    e: &SphericalObject<F>,
    m: &TwistedComplex<F>,
    n: &TwistedComplex<F>,
    k: i64,
) -> Result<InequalityCheck> {
    let tm = twist_power(e, k, m)?;
    inequality_from_parts(e, m, n, &tm)
}

/// The same check with `T_E^k M` supplied by the caller.
pub fn inequality_from_parts<F: Field>(
    e: &SphericalObject<F>,
    m: &TwistedComplex<F>,
    n: &TwistedComplex<F>,
    tm: &TwistedComplex<F>,
) -> Result<InequalityCheck> {
    let lhs = hom_dims(&e.object, m)?.total() * hom_dims(&e.object, n)?.total();
    let rhs = hom_dims(tm, n)?.total() + hom_dims(m, n)?.total();
    Ok(InequalityCheck { lhs, rhs, holds: lhs <= rhs })
}

fn ad_module_from_hom<F: Field>(
    hom: &HomComplex<F>,
    d: i64,
    side: Side,
    act: impl Fn(&Morphism<F>) -> Morphism<F>,
) -> Result<ADModule<F>> {
    let dims: BTreeMap<i64, usize> = hom.degrees().map(|n| (n, hom.dim(n))).collect();
    let differential = hom.degrees().map(|n| (n, hom.complex().differential(n))).collect();
    let mut epsilon = BTreeMap::new();
    for &n in dims.keys() {
        let rows = dims.get(&(n + d)).copied().unwrap_or(0);
        let mut m = Matrix::zeros(rows, dims[&n]);
        if rows > 0 {
            for c in 0..dims[&n] {
                let mut v = vec![F::zero(); dims[&n]];
                v[c] = F::one();
                let image = act(&hom.to_morphism(n, &v));
                for (r, x) in hom.from_morphism(&image).into_iter().enumerate() {
                    m[(r, c)] = x;
                }
            }
        }
        epsilon.insert(n, m);
    }
    ADModule::new(d, side, dims, differential, epsilon)
}

/// `RHom(E, N)` as a right `A_d`-module, `f·ε = f∘ε`.
pub fn rhom_as_ad_module<F: Field>(e: &SphericalObject<F>, n: &TwistedComplex<F>) -> Result<ADModule<F>> {
    let hom = hom_complex(&e.object, n)?;
    let alg = n.algebra().clone();
    let d = e.d;
    ad_module_from_hom(&hom, d, Side::Right, |f| {
        f.compose(&e.epsilon, &alg).scale(&F::sign(d * f.degree))
    })
}

/// `RHom(M, E)` as a left `A_d`-module, `ε·g = ε∘g`.
pub fn rhom_into_as_ad_module<F: Field>(m: &TwistedComplex<F>, e: &SphericalObject<F>) -> Result<ADModule<F>> {
    let hom = hom_complex(m, &e.object)?;
    let alg = m.algebra().clone();
    ad_module_from_hom(&hom, e.d, Side::Left, |g| e.epsilon.compose(g, &alg))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeparatingBranch {
    /// `i(E_1, E_2) ≤ 1`: `S = E_1`.
    First,
    /// `i(E_1, E_2) ≥ 3`: `S = E_2`.
    Second,
    /// `i(E_1, E_2) = 2`: `S` is the cone of `Z → E_1`.
    Cone,
}

#[derive(Clone, Debug)]
pub struct SeparatingObject<F: Field> {
    pub object: TwistedComplex<F>,
    pub branch: SeparatingBranch,
    /// `i(E_1, S)`.
    pub profile1: IntersectionProfile,
    /// `i(E_2, S)`.
    pub profile2: IntersectionProfile,
    /// For the cone branch: `(hom(E_1, Z), hom(E_2', Z))` with `E_2'` the
    /// shift of `E_2` whose homs from `E_1` start in degree 0.
    pub z_tables: Option<(IntersectionProfile, IntersectionProfile)>,
}

/// An object `S` with `i(E_1, S) > i(E_2, S)`.
pub fn build_separating_object<F: Field>(
    e1: &SphericalObject<F>,
    e2: &SphericalObject<F>,
) -> Result<SeparatingObject<F>> {
    if let Some((l, _)) = iso_up_to_shift(&e1.object, &e2.object)? {
        return Err(Error::NotDistinct(l));
    }
    let i12 = hom_dims(&e1.object, &e2.object)?;
    let (object, branch, z_tables) = match i12.total() {
        0 | 1 => (e1.object.clone(), SeparatingBranch::First, None),
        2 => {
            let p0 = *i12.dims().keys().next().unwrap();
            let e2n = e2.object.shift(p0);
            let alg = e1.object.algebra().clone();
            let hom11 = hom_complex(&e1.object, &e1.object)?;
            let hom21 = hom_complex(&e2n, &e1.object)?;
            let mut maps = hom11.cocycle_basis(e1.d);
            let n_eps = maps.len();
            maps.extend(hom21.full_cocycle_basis());
            let mut z = TwistedComplex::zero(alg);
            let mut offsets = Vec::new();
            for (k, f) in maps.iter().enumerate() {
                offsets.push(z.len());
                let base = if k < n_eps { &e1.object } else { &e2n };
                z = z.direct_sum(&base.shift(-f.degree))?;
            }
            let mut ev = Morphism::zero(0, z.len(), e1.object.len());
            for (f, off) in maps.iter().zip(offsets) {
                for ((t, s), x) in &f.entries {
                    ev.insert(*t, s + off, x.clone());
                }
            }
            let tables = (intersection_number(&e1.object, &z)?, intersection_number(&e2n, &z)?);
            let cone = z.cone(&e1.object, &ev)?.minimize();
            (cone, SeparatingBranch::Cone, Some(tables))
        }
        _ => (e2.object.clone(), SeparatingBranch::Second, None),
    };
    let profile1 = intersection_number(&e1.object, &object)?;
    let profile2 = intersection_number(&e2.object, &object)?;
    if profile1.total <= profile2.total {
        return Err(Error::Invariant {
            what: format!("separating object fails: {} <= {}", profile1.total, profile2.total),
            degree: 0,
        });
    }
    Ok(SeparatingObject { object, branch, profile1, profile2, z_tables })
}

/// The three equivalent conditions for two spherical objects to be distinct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinctnessReport {
    /// No `l` with `E_1 ≅ E_2[l]`; `iso_shift` holds the `l` otherwise.
    pub condition_i: bool,
    pub iso_shift: Option<i64>,
    /// Compositions `Hom(E_i,E_j) ⊗ Hom(E_j,E_i) → Hom(E_i,E_i)` miss `id`.
    pub condition_ii: bool,
    /// Compositions with the degree-`d` classes vanish in cohomology.
    pub condition_iii: bool,
}

impl DistinctnessReport {
    pub fn consistent(&self) -> bool {
        self.condition_i == self.condition_ii && self.condition_ii == self.condition_iii
    }
}

pub fn distinctness_criteria<F: Field>(
    e1: &SphericalObject<F>,
    e2: &SphericalObject<F>,
) -> Result<DistinctnessReport> {
    let iso_shift = iso_up_to_shift(&e2.object, &e1.object)?.map(|r| r.0);
    let pair = [e1, e2];
    let mut misses_identity = true;
    let mut eps_vanishes = true;
    for (a, b) in [(0, 1), (1, 0)] {
        let (ei, ej) = (pair[a], pair[b]);
        let alg = ei.object.algebra();
        let hij = hom_complex(&ei.object, &ej.object)?;
        let hji = hom_complex(&ej.object, &ei.object)?;
        let hii = hom_complex(&ei.object, &ei.object)?;
        let fs = hij.full_cocycle_basis();
        let gs = hji.full_cocycle_basis();
        let comps: Vec<Vec<F>> = fs
            .iter()
            .flat_map(|f| gs.iter().filter(|g| g.degree + f.degree == 0).map(move |g| (f, g)))
            .map(|(f, g)| hii.from_morphism(&g.compose(f, alg)))
            .collect();
        if hii.complex().class_rank(0, &comps) > 0 {
            misses_identity = false;
        }
        let mut by_degree: BTreeMap<i64, Vec<Vec<F>>> = BTreeMap::new();
        for f in &fs {
            for comp in [f.compose(&ei.epsilon, alg), ej.epsilon.compose(f, alg)] {
                if hij.dim(comp.degree) > 0 {
                    by_degree.entry(comp.degree).or_default().push(hij.from_morphism(&comp));
                }
            }
        }
        if by_degree.iter().any(|(n, v)| hij.complex().class_rank(*n, v) > 0) {
            eps_vanishes = false;
        }
    }
    Ok(DistinctnessReport {
        condition_i: iso_shift.is_none(),
        iso_shift,
        condition_ii: misses_identity,
        condition_iii: eps_vanishes,
    })
}

/// The projective at `vertex` of a zig-zag algebra, with `ε` the loop.
pub fn projective_spherical<F: Field>(
    alg: &std::sync::Arc<crate::algebra::GradedAlgebra<F>>,
    vertex: usize,
) -> Result<SphericalObject<F>> {
    let object = TwistedComplex::projective(alg.clone(), vertex);
    let d = alg.cy_dimension().ok_or(Error::MissingFrobenius(2))?;
    let loops = alg.paths(vertex, vertex, d);
    let &[l] = loops else {
        return Err(Error::NotSpherical { d, dims: format!("{} loops at vertex {vertex}", loops.len()) });
    };
    let mut eps = Morphism::zero(d, 1, 1);
    eps.insert(0, 0, AlgElem::basis(l));
    SphericalObject::new(object, d, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;
    use crate::zigzag::{build_zigzag, MultiGraph};
    use std::sync::Arc;

    type F = Gf<32003>;

    fn setup(g: &MultiGraph) -> (Arc<crate::algebra::GradedAlgebra<F>>, Vec<SphericalObject<F>>) {
        let alg = Arc::new(build_zigzag::<F>(g).unwrap());
        let objs = (0..g.vertices.len()).map(|v| projective_spherical(&alg, v).unwrap()).collect();
        (alg, objs)
    }

    #[test]
    fn twist_of_itself_is_a_shift() {
        let (_, es) = setup(&MultiGraph::a2());
        let t = twist(&es[0], es[0].object()).unwrap();
        let (l, _) = iso_up_to_shift(es[0].object(), &t).unwrap().unwrap();
        assert_eq!(l, 1 - 2);
        let t = inverse_twist(&es[0], es[0].object()).unwrap();
        let (l, _) = iso_up_to_shift(es[0].object(), &t).unwrap().unwrap();
        assert_eq!(l, 2 - 1);
    }

    #[test]
    fn inverse_undoes_twist() {
        let (_, es) = setup(&MultiGraph::double_edge());
        let m = es[1].object().shift(2);
        let back = inverse_twist(&es[0], &twist(&es[0], &m).unwrap()).unwrap();
        assert_eq!(iso_up_to_shift(&m, &back).unwrap().map(|r| r.0), Some(0));
    }

    #[test]
    fn power_matches_iteration() {
        for g in [MultiGraph::a2(), MultiGraph::double_edge()] {
            let (_, es) = setup(&g);
            for k in [1, 2, 3, -2] {
                let direct = twist_power(&es[0], k, es[1].object()).unwrap();
                let iter = twist_power_iterated(&es[0], k, es[1].object()).unwrap();
                assert_eq!(iso_up_to_shift(&iter, &direct).unwrap().map(|r| r.0), Some(0), "k = {k}");
            }
            // a target with its own differential
            let n = twist(&es[1], es[0].object()).unwrap();
            for k in [1, 2, 3] {
                let direct = twist_power(&es[0], k, &n).unwrap();
                let iter = twist_power_iterated(&es[0], k, &n).unwrap();
                assert_eq!(iso_up_to_shift(&iter, &direct).unwrap().map(|r| r.0), Some(0), "k = {k}");
            }
        }
    }

    #[test]
    fn zero_power_rejected() {
        let (_, es) = setup(&MultiGraph::a2());
        assert!(matches!(twist_power(&es[0], 0, es[1].object()), Err(Error::ZeroPower)));
    }

    #[test]
    fn twisted_projective_is_spherical() {
        let (_, es) = setup(&MultiGraph::double_edge());
        let t = twist(&es[0], es[1].object()).unwrap();
        let s = check_spherical(&t, 2).unwrap().expect("spherical");
        assert_eq!(s.d(), 2);
    }

    #[test]
    fn separating_object_on_double_edge() {
        let (_, es) = setup(&MultiGraph::double_edge());
        let sep = build_separating_object(&es[0], &es[1]).unwrap();
        assert_eq!(sep.branch, SeparatingBranch::Cone);
        let (z1, z2) = sep.z_tables.clone().unwrap();
        assert_eq!(z1.per_degree, vec![(2, 5), (4, 1)]);
        assert_eq!(z2.per_degree, vec![(2, 2), (4, 4)]);
        assert_eq!(sep.profile1.total, 6);
        assert!(sep.profile2.total < 6);
    }

    #[test]
    fn distinctness_on_projectives() {
        let (_, es) = setup(&MultiGraph::a2());
        let r = distinctness_criteria(&es[0], &es[1]).unwrap();
        assert!(r.condition_i && r.consistent());
        let r = distinctness_criteria(&es[0], &es[0].shift(3)).unwrap();
        assert_eq!(r.iso_shift, Some(-3));
        assert!(!r.condition_i && r.consistent());
    }

    #[test]
    fn rhom_module_is_valid() {
        let (_, es) = setup(&MultiGraph::double_edge());
        let n = twist(&es[1], es[0].object()).unwrap();
        let m = rhom_as_ad_module(&es[0], &n).unwrap();
        assert_eq!(m.cohomology_dims(), hom_dims(es[0].object(), &n).unwrap());
        rhom_into_as_ad_module(&n, &es[0]).unwrap();
    }
}
