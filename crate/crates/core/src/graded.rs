//! Graded vector spaces and cochain complexes of them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, SparseMatrix};

/// Dimensions per degree; zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedVectorSpace {
    dims: BTreeMap<i64, usize>,
}

impl GradedVectorSpace {
    pub fn new(dims: impl IntoIterator<Item = (i64, usize)>) -> Self {
        let mut out = BTreeMap::new();
        for (k, v) in dims {
            *out.entry(k).or_insert(0) += v;
        }
        out.retain(|_, v| *v > 0);
        GradedVectorSpace { dims: out }
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// `V[n]`, i.e. degree `k` of the result is degree `k + n` of `self`.
    pub fn shift(&self, n: i64) -> Self {
        GradedVectorSpace::new(self.dims.iter().map(|(k, v)| (k - n, *v)))
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        GradedVectorSpace::new(self.dims.iter().chain(other.dims.iter()).map(|(k, v)| (*k, *v)))
    }
}

/// A bounded cochain complex of finite-dimensional spaces.
///
/// `diffs[n]` is `d_n : C^n -> C^{n+1}` with `dim C^{n+1}` rows.
#[derive(Clone, Debug)]
pub struct CochainComplex<F> {
    dims: BTreeMap<i64, usize>,
    diffs: BTreeMap<i64, SparseMatrix<F>>,
}

impl<F: Field> CochainComplex<F> {
    /// Builds the complex and checks shapes and `d^2 = 0`.
    pub fn new(dims: BTreeMap<i64, usize>, diffs: BTreeMap<i64, SparseMatrix<F>>) -> Result<Self> {
        let c = Self::new_unchecked(dims, diffs);
        c.check()?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(
        mut dims: BTreeMap<i64, usize>,
        mut diffs: BTreeMap<i64, SparseMatrix<F>>,
    ) -> Self {
        dims.retain(|_, v| *v > 0);
        diffs.retain(|n, m| {
            dims.contains_key(n) && dims.contains_key(&(n + 1)) && m.rows.iter().any(|r| !r.is_empty())
        });
        CochainComplex { dims, diffs }
    }

    pub fn zero() -> Self {
        CochainComplex {
            dims: BTreeMap::new(),
            diffs: BTreeMap::new(),
        }
    }

    pub fn check(&self) -> Result<()> {
        for (n, d) in &self.diffs {
            if d.cols != self.dim(*n) || d.rows.len() != self.dim(n + 1) {
                return Err(Error::Invariant {
                    what: "differential shape does not match term dimensions".into(),
                    degree: *n,
                });
            }
        }
        for (n, d) in &self.diffs {
            if let Some(next) = self.diffs.get(&(n + 1)) {
                if !(&next.to_dense() * &d.to_dense()).is_zero() {
                    return Err(Error::Invariant {
                        what: "d^2 != 0".into(),
                        degree: *n,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self, n: i64) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> GradedVectorSpace {
        GradedVectorSpace::new(self.dims.iter().map(|(k, v)| (*k, *v)))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.dims.keys().copied()
    }

    /// `d_n` as a dense matrix (zero if absent).
    pub fn differential(&self, n: i64) -> Matrix<F> {
        match self.diffs.get(&n) {
            Some(d) => d.to_dense(),
            None => Matrix::zeros(self.dim(n + 1), self.dim(n)),
        }
    }

    fn rank_of(&self, n: i64) -> usize {
        self.diffs.get(&n).map_or(0, |d| d.rank())
    }

    /// `dim H^n = dim ker d_n - rank d_{n-1}` for every degree with nonzero cohomology.
    pub fn cohomology_dims(&self) -> GradedVectorSpace {
        let ranks: BTreeMap<i64, usize> = self.diffs.keys().map(|&n| (n, self.rank_of(n))).collect();
        GradedVectorSpace::new(self.dims.iter().map(|(&n, &dim)| {
            let out = ranks.get(&n).copied().unwrap_or(0);
            let inc = ranks.get(&(n - 1)).copied().unwrap_or(0);
            (n, dim - out - inc)
        }))
    }

    /// Columns of a matrix whose classes form a basis of `H^n`, chosen
    /// deterministically (pivot order of `[im d_{n-1} | ker d_n]`).
    pub fn cocycle_basis(&self, n: i64) -> Matrix<F> {
        let dim = self.dim(n);
        if dim == 0 {
            return Matrix::zeros(0, 0);
        }
        let kernel = self.differential(n).rank_kernel_image().kernel;
        let image = self.differential(n - 1).rank_kernel_image().image;
        let joint = image.hstack(&kernel);
        let pivots = joint.rref().pivots;
        let reps: Vec<usize> = pivots
            .into_iter()
            .filter(|&p| p >= image.cols())
            .collect();
        joint.select_columns(&reps)
    }

    pub fn is_cocycle(&self, n: i64, v: &[F]) -> bool {
        self.diffs
            .get(&n)
            .is_none_or(|d| d.to_dense().mul_vec(v).iter().all(|x| x.is_zero()))
    }

    pub fn is_coboundary(&self, n: i64, v: &[F]) -> bool {
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        match self.diffs.get(&(n - 1)) {
            Some(d) => d.to_dense().solve(v).is_some(),
            None => false,
        }
    }

    /// Dimension of the span of the classes of the given cocycles in `H^n`.
    pub fn class_rank(&self, n: i64, cocycles: &[Vec<F>]) -> usize {
        if cocycles.is_empty() {
            return 0;
        }
        let image = self.differential(n - 1);
        let given = Matrix::from_columns(self.dim(n), cocycles);
        image.hstack(&given).rank() - image.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type F = Gf<32003>;

    fn sparse(m: &Matrix<F>) -> SparseMatrix<F> {
        SparseMatrix::from_dense(m)
    }

    #[test]
    fn zero_differential() {
        let c = CochainComplex::<F>::new(BTreeMap::from([(0, 2), (3, 1)]), BTreeMap::new()).unwrap();
        assert_eq!(c.cohomology_dims(), GradedVectorSpace::new([(0, 2), (3, 1)]));
    }

    #[test]
    fn identity_differential_is_acyclic() {
        let c = CochainComplex::<F>::new(
            BTreeMap::from([(0, 3), (1, 3)]),
            BTreeMap::from([(0, sparse(&Matrix::identity(3)))]),
        )
        .unwrap();
        assert!(c.cohomology_dims().is_zero());
    }

    #[test]
    fn rejects_nonzero_square() {
        let d0 = Matrix::<F>::identity(1);
        let d1 = Matrix::<F>::identity(1);
        let err = CochainComplex::new(
            BTreeMap::from([(0, 1), (1, 1), (2, 1)]),
            BTreeMap::from([(0, sparse(&d0)), (1, sparse(&d1))]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Invariant { degree: 0, .. }));
    }

    /// Planted cohomology: contractible pairs conjugated by random base changes.
    #[test]
    fn recovers_planted_cohomology() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..25 {
            let planted: BTreeMap<i64, usize> = (-2..=2).map(|n| (n, rng.gen_range(0..3))).collect();
            let pairs: BTreeMap<i64, usize> = (-2..2).map(|n| (n, rng.gen_range(0..3))).collect();
            // C^n = planted_n + pairs_n (sources) + pairs_{n-1} (targets)
            let dim = |n: i64| {
                planted.get(&n).copied().unwrap_or(0)
                    + pairs.get(&n).copied().unwrap_or(0)
                    + pairs.get(&(n - 1)).copied().unwrap_or(0)
            };
            let dims: BTreeMap<i64, usize> = (-2..=3).map(|n| (n, dim(n))).collect();
            let bases: BTreeMap<i64, Matrix<F>> = dims
                .iter()
                .map(|(&n, &k)| (n, Matrix::random_invertible(k, &mut rng)))
                .collect();
            let mut diffs = BTreeMap::new();
            for n in -2..3 {
                let (s, t) = (dim(n), dim(n + 1));
                let mut d = Matrix::<F>::zeros(t, s);
                let p = planted.get(&n).copied().unwrap_or(0);
                let k = pairs.get(&n).copied().unwrap_or(0);
                let tp = planted.get(&(n + 1)).copied().unwrap_or(0);
                let tk = pairs.get(&(n + 1)).copied().unwrap_or(0);
                for i in 0..k {
                    d[(tp + tk + i, p + i)] = F::from_i64(1);
                }
                let conj = &(&bases[&(n + 1)] * &d) * &bases[&n].inverse().unwrap();
                diffs.insert(n, sparse(&conj));
            }
            let c = CochainComplex::new(dims, diffs).unwrap();
            assert_eq!(c.cohomology_dims(), GradedVectorSpace::new(planted.clone()));
            for (&n, &p) in &planted {
                let reps = c.cocycle_basis(n);
                assert_eq!(reps.cols(), p);
                let cols: Vec<Vec<F>> = (0..reps.cols()).map(|j| reps.column(j)).collect();
                assert!(cols.iter().all(|v| c.is_cocycle(n, v)));
                assert_eq!(c.class_rank(n, &cols), p);
            }
        }
    }
}
