//! Zig-zag algebras of finite loopless multigraphs.
//!
//! Basis: idempotents `e_v` (degree 0), one arrow per direction per edge
//! (degree 1), and a loop `l_v` per vertex (degree 2). For an edge `k` with
//! endpoints `u < w` (vertex order) the arrows are `a: u -> w` and
//! `a*: w -> u`, with `a* a = l_u` and `a a* = -l_w`. Every other product of
//! two arrows vanishes, as does a loop times anything of positive degree.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgElem, BasisElement, FrobeniusForm, GradedAlgebra};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl MultiGraph {
    /// Vertices labelled `1..=n`, edges given by vertex positions.
    pub fn from_indices(n: usize, edges: &[(usize, usize)]) -> Self {
        let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let edges = edges
            .iter()
            .map(|&(a, b)| (vertices[a].clone(), vertices[b].clone()))
            .collect();
        MultiGraph { vertices, edges }
    }

    /// A single edge between two vertices.
    pub fn a2() -> Self {
        Self::from_indices(2, &[(0, 1)])
    }

    pub fn double_edge() -> Self {
        Self::from_indices(2, &[(0, 1), (0, 1)])
    }

    pub fn disjoint_pair() -> Self {
        Self::from_indices(2, &[])
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    /// Edges as ordered index pairs `(u, w)` with `u < w`.
    pub fn indexed_edges(&self) -> Result<Vec<(usize, usize)>> {
        let mut out = Vec::with_capacity(self.edges.len());
        for (a, b) in &self.edges {
            let (u, w) = (self.vertex_index(a)?, self.vertex_index(b)?);
            if u == w {
                return Err(Error::LoopEdge(a.clone()));
            }
            out.push((u.min(w), u.max(w)));
        }
        Ok(out)
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> usize {
        let (u, w) = (a.min(b), a.max(b));
        self.indexed_edges()
            .map(|e| e.iter().filter(|&&p| p == (u, w)).count())
            .unwrap_or(0)
    }

    fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::InvalidParameter("graph has no vertices".into()));
        }
        let distinct: BTreeSet<&String> = self.vertices.iter().collect();
        if distinct.len() != self.vertices.len() {
            return Err(Error::Schema("duplicate vertex label".into()));
        }
        self.indexed_edges().map(|_| ())
    }
}

pub fn build_zigzag<F: Field>(g: &MultiGraph) -> Result<GradedAlgebra<F>> {
    g.validate()?;
    let edges = g.indexed_edges()?;
    let nv = g.vertices.len();
    let ne = edges.len();
    let mut basis: Vec<BasisElement> = g
        .vertices
        .iter()
        .map(|v| BasisElement { label: v.clone(), degree: 0 })
        .collect();
    // forward arrow of edge k is nv + 2k, backward is nv + 2k + 1
    let mut src = (0..nv).collect::<Vec<_>>();
    let mut tgt = (0..nv).collect::<Vec<_>>();
    for (k, &(u, w)) in edges.iter().enumerate() {
        let (lu, lw) = (&g.vertices[u], &g.vertices[w]);
        basis.push(BasisElement { label: format!("{lu}>{lw}#{k}"), degree: 1 });
        basis.push(BasisElement { label: format!("{lw}>{lu}#{k}"), degree: 1 });
        src.extend([u, w]);
        tgt.extend([w, u]);
    }
    let loop_at = |v: usize| nv + 2 * ne + v;
    for v in 0..nv {
        basis.push(BasisElement { label: format!("loop:{}", g.vertices[v]), degree: 2 });
        src.push(v);
        tgt.push(v);
    }
    let n = basis.len();
    let mut products = vec![vec![AlgElem::<F>::zero(); n]; n];
    for x in 0..n {
        products[tgt[x]][x] = AlgElem::basis(x);
        products[x][src[x]] = AlgElem::basis(x);
    }
    for (k, &(u, w)) in edges.iter().enumerate() {
        let (fwd, bwd) = (nv + 2 * k, nv + 2 * k + 1);
        products[bwd][fwd] = AlgElem::basis(loop_at(u));
        products[fwd][bwd] = AlgElem::scaled_basis(loop_at(w), -F::one());
    }
    let mut pairing = Matrix::<F>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut c = F::zero();
            for v in 0..nv {
                c = c + products[i][j].coeff(loop_at(v));
            }
            pairing[(i, j)] = c;
        }
    }
    GradedAlgebra::new(
        basis,
        products,
        (0..nv).collect(),
        Some(FrobeniusForm { pairing, dimension: 2 }),
    )
}

/// Basis index of the loop at a vertex.
pub fn loop_index<F: Field>(alg: &GradedAlgebra<F>, vertex: usize) -> usize {
    alg.paths(vertex, vertex, 2)[0]
}

/// All loopless multigraphs with `1..=max_vertices` vertices and at most
/// `max_edges` edges, one per isomorphism class, in a fixed order.
pub fn enumerate_multigraphs(max_vertices: usize, max_edges: usize) -> Vec<MultiGraph> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        let perms = permutations(n);
        let mut seen = BTreeSet::new();
        let mut mult = vec![0usize; pairs.len()];
        loop {
            let canon = perms
                .iter()
                .map(|p| {
                    let mut m = vec![0usize; pairs.len()];
                    for (idx, &(a, b)) in pairs.iter().enumerate() {
                        let (x, y) = (p[a].min(p[b]), p[a].max(p[b]));
                        let j = pairs.iter().position(|&q| q == (x, y)).unwrap();
                        m[j] = mult[idx];
                    }
                    m
                })
                .max()
                .unwrap_or_default();
            if seen.insert(canon.clone()) {
                let edges: Vec<(usize, usize)> = pairs
                    .iter()
                    .zip(&canon)
                    .flat_map(|(&e, &k)| std::iter::repeat_n(e, k))
                    .collect();
                out.push(MultiGraph::from_indices(n, &edges));
            }
            if !next_composition(&mut mult, max_edges) {
                break;
            }
        }
    }
    out
}

// Odometer over vectors with entry sum at most `cap`.
fn next_composition(m: &mut [usize], cap: usize) -> bool {
    for i in 0..m.len() {
        m[i] += 1;
        if m.iter().sum::<usize>() <= cap {
            return true;
        }
        m[i] = 0;
    }
    false
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// An object of the zig-zag model described symbolically: the projective at
/// `vertex` shifted by `shift`, optionally hit by `twist = (by_vertex, power)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectSpec {
    pub vertex: usize,
    pub shift: i64,
    pub twist: Option<(usize, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub graph: MultiGraph,
    pub objects: Vec<ObjectSpec>,
}

/// Deterministic pseudo-random corpus. The single edge, the double edge and
/// the disjoint pair always come first.
pub fn corpus(seed: u64, max_vertices: usize, max_edges: usize, count: usize) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graphs = vec![MultiGraph::a2(), MultiGraph::double_edge(), MultiGraph::disjoint_pair()];
    let pool = enumerate_multigraphs(max_vertices.max(1), max_edges);
    while graphs.len() < count.max(3) && !pool.is_empty() {
        graphs.push(pool[rng.gen_range(0..pool.len())].clone());
    }
    graphs.truncate(count.max(3));
    graphs
        .into_iter()
        .map(|graph| {
            let n = graph.vertices.len();
            let mut objects: Vec<ObjectSpec> = (0..n)
                .map(|v| ObjectSpec { vertex: v, shift: 0, twist: None })
                .collect();
            for _ in 0..n {
                objects.push(ObjectSpec {
                    vertex: rng.gen_range(0..n),
                    shift: rng.gen_range(-2..=2),
                    twist: Some((rng.gen_range(0..n), if rng.gen_bool(0.5) { 1 } else { -1 })),
                });
            }
            CorpusEntry { graph, objects }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Gf, Rational};

    type F = Gf<32003>;

    #[test]
    fn a2_basis() {
        let alg = build_zigzag::<F>(&MultiGraph::a2()).unwrap();
        assert_eq!(alg.dim(), 6);
        assert_eq!(alg.cy_dimension(), Some(2));
    }

    #[test]
    fn double_edge_arrows() {
        let alg = build_zigzag::<Rational>(&MultiGraph::double_edge()).unwrap();
        assert_eq!(alg.paths(0, 1, 1).len(), 2);
        assert_eq!(alg.paths(1, 0, 1).len(), 2);
        assert_eq!(alg.paths(0, 0, 2).len(), 1);
    }

    #[test]
    fn loops_rejected() {
        let g = MultiGraph::from_indices(2, &[(0, 0)]);
        assert!(matches!(build_zigzag::<F>(&g), Err(Error::LoopEdge(_))));
    }

    #[test]
    fn single_vertex() {
        let alg = build_zigzag::<F>(&MultiGraph::from_indices(1, &[])).unwrap();
        assert_eq!(alg.dim(), 2);
    }

    #[test]
    fn enumeration_counts() {
        // Loopless multigraphs on two vertices with at most 3 edges: 4.
        let two: Vec<_> = enumerate_multigraphs(2, 3)
            .into_iter()
            .filter(|g| g.vertices.len() == 2)
            .collect();
        assert_eq!(two.len(), 4);
        // Three vertices, at most 2 edges: empty, one edge, a double edge,
        // a path.
        let three = enumerate_multigraphs(3, 2)
            .into_iter()
            .filter(|g| g.vertices.len() == 3)
            .count();
        assert_eq!(three, 4);
    }

    #[test]
    fn corpus_is_deterministic_and_pinned() {
        let a = corpus(0, 4, 5, 10);
        assert_eq!(a, corpus(0, 4, 5, 10));
        assert_eq!(a[0].graph, MultiGraph::a2());
        for e in &a {
            build_zigzag::<F>(&e.graph).unwrap();
        }
    }
}
