//! JSON interchange for algebras, objects, graphs and A_d-modules.
//!
//! Field elements are written as strings (`"3/7"`, `"12"`); integers are
//! accepted on input.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgElem, BasisElement, FrobeniusForm, GradedAlgebra};
use crate::dual::{ADModule, DecompositionReport, Side};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::twisted::{Summand, TwistedComplex};
use crate::zigzag::MultiGraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Str(String),
    Int(i64),
}

impl Literal {
    pub fn parse<F: Field>(&self) -> Result<F> {
        match self {
            Literal::Str(s) => F::parse_literal(s),
            Literal::Int(n) => Ok(F::from_i64(*n)),
        }
    }

    pub fn of<F: Field>(x: &F) -> Self {
        Literal::Str(x.to_literal())
    }
}

/// Parses JSON, separating syntax errors from shape errors.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        if e.is_data() {
            Error::Schema(e.to_string())
        } else {
            Error::Parse(e.to_string())
        }
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable value")
}

fn parse_matrix<F: Field>(rows: &[Vec<Literal>], shape: (usize, usize), what: &str) -> Result<Matrix<F>> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(Error::Schema(format!("{what}: expected a {}x{} matrix", shape.0, shape.1)));
    }
    let mut m = Matrix::zeros(shape.0, shape.1);
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            m[(i, j)] = x.parse()?;
        }
    }
    Ok(m)
}

fn write_matrix<F: Field>(m: &Matrix<F>) -> Vec<Vec<Literal>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| Literal::of(&m[(i, j)])).collect()).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisJson {
    pub label: String,
    pub degree: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrobeniusJson {
    pub pairing: Vec<Vec<Literal>>,
    pub d: i64,
}

/// `products` lists the nonzero products `b_i · b_j` as dense coefficient
/// vectors over the basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub basis: Vec<BasisJson>,
    pub products: Vec<(usize, usize, Vec<Literal>)>,
    pub idempotents: Vec<String>,
    #[serde(default)]
    pub frobenius: Option<FrobeniusJson>,
}

impl AlgebraJson {
    pub fn build<F: Field>(&self) -> Result<GradedAlgebra<F>> {
        let n = self.basis.len();
        let basis: Vec<BasisElement> =
            self.basis.iter().map(|b| BasisElement { label: b.label.clone(), degree: b.degree }).collect();
        let mut products = vec![vec![AlgElem::<F>::zero(); n]; n];
        for (i, j, coeffs) in &self.products {
            if *i >= n || *j >= n || coeffs.len() != n {
                return Err(Error::Schema(format!("product ({i},{j}) is out of range or has the wrong length")));
            }
            let terms = coeffs.iter().enumerate().map(|(k, c)| Ok((k, c.parse()?))).collect::<Result<Vec<_>>>()?;
            products[*i][*j] = AlgElem::from_terms(terms);
        }
        let idempotents = self
            .idempotents
            .iter()
            .map(|l| {
                basis.iter().position(|b| &b.label == l).ok_or_else(|| Error::Schema(format!("unknown idempotent {l}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let frobenius = match &self.frobenius {
            None => None,
            Some(f) => Some(FrobeniusForm { pairing: parse_matrix(&f.pairing, (n, n), "pairing")?, dimension: f.d }),
        };
        GradedAlgebra::new(basis, products, idempotents, frobenius)
    }

    pub fn from_algebra<F: Field>(alg: &GradedAlgebra<F>) -> Self {
        let n = alg.dim();
        let mut products = Vec::new();
        for (i, row) in alg.products().iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    products.push((i, j, (0..n).map(|k| Literal::of(&x.coeff(k))).collect()));
                }
            }
        }
        AlgebraJson {
            basis: alg.basis().iter().map(|b| BasisJson { label: b.label.clone(), degree: b.degree }).collect(),
            products,
            idempotents: alg.idempotents().iter().map(|&i| alg.label(i).to_string()).collect(),
            frobenius: alg.frobenius().map(|f| FrobeniusJson { pairing: write_matrix(&f.pairing), d: f.dimension }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandJson {
    pub idem: String,
    pub shift: i64,
}

/// A one-sided twisted complex. Position `i` contributes `P[shift - i]` to
/// the convolution; `alphas["i,j"][r][c]` maps summand `c` of position `i`
/// to summand `r` of position `j`, as a map from basis labels to
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectJson {
    pub positions: BTreeMap<i64, Vec<SummandJson>>,
    #[serde(default)]
    pub alphas: BTreeMap<String, Vec<Vec<BTreeMap<String, Literal>>>>,
}

impl ObjectJson {
    pub fn build<F: Field>(&self, alg: &Arc<GradedAlgebra<F>>) -> Result<TwistedComplex<F>> {
        let mut summands = Vec::new();
        let mut index: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (&pos, list) in &self.positions {
            for s in list {
                let vertex =
                    alg.vertex_of_label(&s.idem).ok_or_else(|| Error::Schema(format!("unknown idempotent {}", s.idem)))?;
                index.entry(pos).or_default().push(summands.len());
                summands.push(Summand { vertex, shift: s.shift - pos });
            }
        }
        let mut entries = Vec::new();
        for (key, matrix) in &self.alphas {
            let (i, j) = key
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse::<i64>().ok()?, b.trim().parse::<i64>().ok()?)))
                .ok_or_else(|| Error::Schema(format!("bad alpha key {key:?}")))?;
            if i >= j {
                return Err(Error::Schema(format!("alpha {key} must go from a lower to a higher position")));
            }
            let empty = Vec::new();
            let (src, tgt) = (index.get(&i).unwrap_or(&empty), index.get(&j).unwrap_or(&empty));
            if matrix.len() != tgt.len() || matrix.iter().any(|r| r.len() != src.len()) {
                return Err(Error::Schema(format!("alpha {key} has the wrong shape")));
            }
            for (r, row) in matrix.iter().enumerate() {
                for (c, cell) in row.iter().enumerate() {
                    let mut terms = Vec::new();
                    for (label, coeff) in cell {
                        let b = alg.index_of(label).ok_or_else(|| Error::Schema(format!("unknown basis label {label}")))?;
                        terms.push((b, coeff.parse()?));
                    }
                    let x = AlgElem::from_terms(terms);
                    if !x.is_zero() {
                        entries.push((src[c], tgt[r], x));
                    }
                }
            }
        }
        TwistedComplex::new(alg.clone(), summands, entries)
    }

    pub fn from_object<F: Field>(x: &TwistedComplex<F>) -> Result<Self> {
        let alg = x.algebra();
        let levels = x
            .levels()
            .ok_or_else(|| Error::Invariant { what: "differential entries form a cycle".into(), degree: 0 })?;
        let mut positions: BTreeMap<i64, Vec<SummandJson>> = BTreeMap::new();
        let mut local = vec![0usize; x.len()];
        for (k, s) in x.summands().iter().enumerate() {
            let list = positions.entry(levels[k]).or_default();
            local[k] = list.len();
            list.push(SummandJson { idem: alg.vertex_label(s.vertex).to_string(), shift: s.shift + levels[k] });
        }
        let mut alphas: BTreeMap<String, Vec<Vec<BTreeMap<String, Literal>>>> = BTreeMap::new();
        for (i, j, e) in x.entries() {
            let (pi, pj) = (levels[i], levels[j]);
            let m = alphas
                .entry(format!("{pi},{pj}"))
                .or_insert_with(|| vec![vec![BTreeMap::new(); positions[&pi].len()]; positions[&pj].len()]);
            m[local[j]][local[i]] =
                e.terms().iter().map(|(b, c)| (alg.label(*b).to_string(), Literal::of(c))).collect();
        }
        Ok(ObjectJson { positions, alphas })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideJson {
    Right,
    Left,
}

/// `differential[n]` maps degree `n` to `n+1`, `epsilon[n]` maps degree `n`
/// to `n+d`; rows index the target basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ADModuleJson {
    pub d: i64,
    #[serde(default)]
    pub side: Option<SideJson>,
    pub dims: BTreeMap<i64, usize>,
    #[serde(default)]
    pub differential: BTreeMap<i64, Vec<Vec<Literal>>>,
    #[serde(default)]
    pub epsilon: BTreeMap<i64, Vec<Vec<Literal>>>,
}

impl ADModuleJson {
    pub fn build<F: Field>(&self) -> Result<ADModule<F>> {
        let dim = |n: i64| self.dims.get(&n).copied().unwrap_or(0);
        let mut differential = BTreeMap::new();
        for (&n, rows) in &self.differential {
            differential.insert(n, parse_matrix(rows, (dim(n + 1), dim(n)), &format!("differential[{n}]"))?);
        }
        let mut epsilon = BTreeMap::new();
        for (&n, rows) in &self.epsilon {
            epsilon.insert(n, parse_matrix(rows, (dim(n + self.d), dim(n)), &format!("epsilon[{n}]"))?);
        }
        let side = match self.side {
            Some(SideJson::Left) => Side::Left,
            _ => Side::Right,
        };
        ADModule::new(self.d, side, self.dims.clone(), differential, epsilon)
    }

    pub fn from_module<F: Field>(m: &ADModule<F>) -> Self {
        let keep = |x: Matrix<F>| (!x.is_zero()).then(|| write_matrix(&x));
        ADModuleJson {
            d: m.d(),
            side: Some(match m.side() {
                Side::Right => SideJson::Right,
                Side::Left => SideJson::Left,
            }),
            dims: m.dims().clone(),
            differential: m.dims().keys().filter_map(|&n| keep(m.diff(n)).map(|x| (n, x))).collect(),
            epsilon: m.dims().keys().filter_map(|&n| keep(m.eps(n)).map(|x| (n, x))).collect(),
        }
    }
}

/// `summands` is the sorted list of `(n, shift, multiplicity)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub summands: Vec<(u32, i64, usize)>,
    pub compact: bool,
}

impl From<&DecompositionReport> for DecompositionJson {
    fn from(r: &DecompositionReport) -> Self {
        let mut summands: Vec<(u32, i64, usize)> = r.summands.iter().map(|(&(n, s), &m)| (n, s, m)).collect();
        summands.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        DecompositionJson { summands, compact: r.compact }
    }
}

pub fn parse_graph(text: &str) -> Result<MultiGraph> {
    from_json(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::{make_b, sum_of_b};
    use crate::field::{Gf, Rational};
    use crate::spherical::{projective_spherical, twist};
    use crate::twisted::iso_up_to_shift;
    use crate::zigzag::build_zigzag;

    type F = Gf<32003>;

    #[test]
    fn algebra_round_trip() {
        let alg = build_zigzag::<Rational>(&MultiGraph::double_edge()).unwrap();
        let json = to_json(&AlgebraJson::from_algebra(&alg));
        let back: AlgebraJson = from_json(&json).unwrap();
        assert_eq!(back.build::<Rational>().unwrap(), alg);
    }

    #[test]
    fn object_round_trip() {
        let alg = Arc::new(build_zigzag::<F>(&MultiGraph::a2()).unwrap());
        let e = projective_spherical(&alg, 0).unwrap();
        let x = twist(&e, &TwistedComplex::projective(alg.clone(), 1)).unwrap().shift(2);
        let json = to_json(&ObjectJson::from_object(&x).unwrap());
        let y = from_json::<ObjectJson>(&json).unwrap().build(&alg).unwrap();
        assert_eq!(iso_up_to_shift(&x, &y).unwrap().map(|r| r.0), Some(0));
    }

    #[test]
    fn module_round_trip() {
        let m = sum_of_b::<F>(3, &[(2, 0), (0, -1)]).unwrap().direct_sum(&make_b(3, 1, 4).unwrap()).unwrap();
        let json = to_json(&ADModuleJson::from_module(&m));
        let back = from_json::<ADModuleJson>(&json).unwrap().build::<F>().unwrap();
        assert_eq!(back.dims(), m.dims());
        assert_eq!(back.cohomology_dims(), m.cohomology_dims());
    }

    #[test]
    fn error_classes() {
        assert!(matches!(from_json::<ADModuleJson>("{"), Err(Error::Parse(_))));
        assert!(matches!(from_json::<ADModuleJson>("{\"d\": \"x\"}"), Err(Error::Schema(_))));
        let bad = r#"{"d": 2, "dims": {"0": 1, "1": 1, "2": 1}, "differential": {"0": [["1"]], "1": [["1"]]}}"#;
        let m = from_json::<ADModuleJson>(bad).unwrap();
        assert!(matches!(m.build::<F>(), Err(Error::Invariant { .. })));
    }
}
