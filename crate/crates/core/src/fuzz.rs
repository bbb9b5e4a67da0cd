//! Corpus sweeps of the fundamental inequality over zig-zag models.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::GradedAlgebra;
use crate::error::Result;
use crate::field::Field;
use crate::spherical::{projective_spherical, twist_power, SphericalObject};
use crate::twisted::{hom_dims, TwistedComplex};
use crate::zigzag::{build_zigzag, MultiGraph, ObjectSpec};

pub const DEFAULT_POWERS: [i64; 6] = [1, -1, 2, -2, 3, -3];

/// Builds `T_{P_u}^k(P_v[shift])` (or the shifted projective alone).
pub fn build_spec<F: Field>(alg: &Arc<GradedAlgebra<F>>, spec: &ObjectSpec) -> Result<TwistedComplex<F>> {
    let base = TwistedComplex::projective(alg.clone(), spec.vertex).shift(spec.shift);
    match spec.twist {
        None => Ok(base),
        Some((u, k)) => twist_power(&projective_spherical(alg, u)?, k, &base),
    }
}

/// Vertex projectives followed by every `T_{P_u}(P_v)` with `u ≠ v`.
pub fn projectives_and_single_twists(n: usize) -> Vec<ObjectSpec> {
    let mut out: Vec<ObjectSpec> = (0..n).map(|v| ObjectSpec { vertex: v, shift: 0, twist: None }).collect();
    for v in 0..n {
        for u in (0..n).filter(|&u| u != v) {
            out.push(ObjectSpec { vertex: v, shift: 0, twist: Some((u, 1)) });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub graph: MultiGraph,
    pub e: usize,
    pub m: usize,
    pub n: usize,
    pub k: i64,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl SweepSummary {
    pub fn merge(mut self, other: SweepSummary) -> Self {
        self.checks += other.checks;
        self.violations.extend(other.violations);
        self
    }
}

/// Checks `i(E,M)·i(E,N) ≤ i(T_E^k M, N) + i(M, N)` for every vertex
/// projective `E`, every `M`, `N` among `objects` and every `k` in `powers`.
pub fn sweep_graph<F: Field>(graph: &MultiGraph, objects: &[ObjectSpec], powers: &[i64]) -> Result<SweepSummary> {
    let alg = Arc::new(build_zigzag::<F>(graph)?);
    let nv = graph.vertices.len();
    let es: Vec<SphericalObject<F>> = (0..nv).map(|v| projective_spherical(&alg, v)).collect::<Result<_>>()?;
    let objs: Vec<TwistedComplex<F>> = objects.iter().map(|s| build_spec(&alg, s)).collect::<Result<_>>()?;
    let mut i_cache: HashMap<(usize, usize), usize> = HashMap::new();
    let mut i_of = |a: usize, b: usize, x: &TwistedComplex<F>, y: &TwistedComplex<F>| -> Result<usize> {
        if let Some(v) = i_cache.get(&(a, b)) {
            return Ok(*v);
        }
        let v = hom_dims(x, y)?.total();
        i_cache.insert((a, b), v);
        Ok(v)
    };
    // index space: objects 0..len, projectives len..len+nv
    let m_count = objs.len();
    let mut summary = SweepSummary::default();
    for (ei, e) in es.iter().enumerate() {
        for (mi, m) in objs.iter().enumerate() {
            let iem = i_of(m_count + ei, mi, e.object(), m)?;
            for &k in powers {
                let tm = twist_power(e, k, m)?;
                for (ni, n) in objs.iter().enumerate() {
                    let ien = i_of(m_count + ei, ni, e.object(), n)?;
                    let imn = i_of(mi, ni, m, n)?;
                    let lhs = iem * ien;
                    let rhs = hom_dims(&tm, n)?.total() + imn;
                    summary.checks += 1;
                    if lhs > rhs {
                        summary.violations.push(Violation { graph: graph.clone(), e: ei, m: mi, n: ni, k, lhs, rhs });
                    }
                }
            }
        }
    }
    Ok(summary)
}

/// Runs [`sweep_graph`] over several graphs in parallel; results are merged
/// in input order.
pub fn sweep_corpus<F: Field>(entries: &[(MultiGraph, Vec<ObjectSpec>)], powers: &[i64]) -> Result<SweepSummary> {
    let parts: Vec<Result<SweepSummary>> =
        entries.par_iter().map(|(g, objs)| sweep_graph::<F>(g, objs, powers)).collect();
    parts.into_iter().try_fold(SweepSummary::default(), |acc, p| Ok(acc.merge(p?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;

    #[test]
    fn small_sweep_has_no_violations() {
        let g = MultiGraph::a2();
        let objs = projectives_and_single_twists(2);
        let s = sweep_graph::<Gf<32003>>(&g, &objs, &DEFAULT_POWERS).unwrap();
        assert_eq!(s.checks, 2 * 4 * 4 * 6);
        assert!(s.violations.is_empty());
    }

    #[test]
    fn disjoint_objects_have_zero_lhs() {
        // E = P_1 meets nothing built from P_2 alone
        let g = MultiGraph::disjoint_pair();
        let objs = vec![ObjectSpec { vertex: 1, shift: 0, twist: None }];
        let s = sweep_graph::<Gf<32003>>(&g, &objs, &[1]).unwrap();
        assert_eq!(s.checks, 2);
        assert!(s.violations.is_empty());
    }
}
