//! The group generated by two spherical twists: classification by
//! intersection number, commutation and braid tests, and ping-pong
//! certificates of freeness at bounded word length.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::spherical::{build_separating_object, twist, twist_power, SphericalObject};
use crate::twisted::{hom_dims, iso_up_to_shift, TwistedComplex};

pub const DEFAULT_MAX_WORD_LENGTH: usize = 6;
pub const DEFAULT_SIZE_CAP: usize = 10_000;

/// A word in `T_{E_1}`, `T_{E_2}`, written left to right as composition:
/// `(1,1)(2,1)` is `T_{E_1} ∘ T_{E_2}`, so the rightmost letter acts first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TwistWord {
    letters: Vec<(u8, i64)>,
}

impl TwistWord {
    pub fn new(letters: Vec<(u8, i64)>) -> Result<Self> {
        for (i, &(g, k)) in letters.iter().enumerate() {
            if g != 1 && g != 2 {
                return Err(Error::InvalidParameter(format!("generator index {g} is not 1 or 2")));
            }
            if k == 0 {
                return Err(Error::ZeroPower);
            }
            if i > 0 && letters[i - 1].0 == g {
                return Err(Error::InvalidParameter("adjacent letters share a generator".into()));
            }
        }
        Ok(TwistWord { letters })
    }

    pub fn empty() -> Self {
        TwistWord { letters: Vec::new() }
    }

    /// Merges runs of the same generator, dropping cancelled syllables.
    pub fn reduce(letters: &[(u8, i64)]) -> Self {
        let mut out: Vec<(u8, i64)> = Vec::new();
        for &(g, k) in letters {
            match out.last_mut() {
                Some(last) if last.0 == g => {
                    last.1 += k;
                    if last.1 == 0 {
                        out.pop();
                    }
                }
                _ if k != 0 => out.push((g, k)),
                _ => {}
            }
        }
        TwistWord { letters: out }
    }

    pub fn letters(&self) -> &[(u8, i64)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        TwistWord { letters: self.letters.iter().rev().map(|&(g, k)| (g, -k)).collect() }
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "()");
        }
        for (g, k) in &self.letters {
            write!(f, "({g},{k})")?;
        }
        Ok(())
    }
}

fn require_d<F: Field>(e: &SphericalObject<F>) -> Result<()> {
    if e.d() > 1 {
        Ok(())
    } else {
        Err(Error::DNotGreaterThanOne(e.d()))
    }
}

/// Applies `w` to `m`, rightmost letter first, minimizing after each letter.
pub fn apply_word<F: Field>(
    gens: [&SphericalObject<F>; 2],
    w: &TwistWord,
    m: &TwistedComplex<F>,
    size_cap: usize,
) -> Result<TwistedComplex<F>> {
    let mut x = m.clone();
    for &(g, k) in w.letters.iter().rev() {
        x = twist_power(gens[g as usize - 1], k, &x)?;
        if x.len() > size_cap {
            return Err(Error::SizeCap { word: w.to_string(), size: x.len(), cap: size_cap });
        }
    }
    Ok(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairKind {
    /// `i = 0`: the twists generate `ℤ²`.
    Commuting,
    /// `i = 1`: the twists satisfy the braid relation.
    Braid,
    /// `i ≥ 2`: the twists generate a free group.
    Free,
}

impl PairKind {
    pub fn group(self) -> &'static str {
        match self {
            PairKind::Commuting => "ZxZ",
            PairKind::Braid => "B3",
            PairKind::Free => "F2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    /// `T_{E_1}(E_2) ≅ E_2[l]`.
    TwistFixes { l: i64 },
    /// `T_{E_1} T_{E_2}(E_1) ≅ E_2[l]`.
    BraidMove { l: i64 },
    Certificate(PingPongCertificate),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairClassification {
    pub kind: PairKind,
    pub intersection_number: usize,
    pub witness: Witness,
}

impl fmt::Display for PairClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = format!("{:?}({})", self.kind, self.kind.group());
        match &self.witness {
            Witness::TwistFixes { l } | Witness::BraidMove { l } => write!(f, "{name}, l={l}"),
            Witness::Certificate(c) => write!(
                f,
                "{name}, certificate: {}@len{}",
                if c.certified { "OK" } else { "FAILED" },
                c.max_word_length
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PingPongOptions {
    pub max_word_length: usize,
    pub size_cap: usize,
}

impl Default for PingPongOptions {
    fn default() -> Self {
        PingPongOptions { max_word_length: DEFAULT_MAX_WORD_LENGTH, size_cap: DEFAULT_SIZE_CAP }
    }
}

fn check_distinct<F: Field>(e1: &SphericalObject<F>, e2: &SphericalObject<F>) -> Result<()> {
    match iso_up_to_shift(e2.object(), e1.object())? {
        Some((l, _)) => Err(Error::NotDistinct(l)),
        None => Ok(()),
    }
}

pub fn classify_pair<F: Field>(
    e1: &SphericalObject<F>,
    e2: &SphericalObject<F>,
    opts: &PingPongOptions,
) -> Result<PairClassification> {
    require_d(e1)?;
    require_d(e2)?;
    check_distinct(e1, e2)?;
    let i = hom_dims(e1.object(), e2.object())?.total();
    let failure = |what: &str| Error::CertificateFailure { word: String::new(), reason: what.to_string() };
    let (kind, witness) = match i {
        0 => {
            let t = twist(e1, e2.object())?;
            let (l, _) = iso_up_to_shift(e2.object(), &t)?.ok_or_else(|| failure("T_1(E_2) is not a shift of E_2"))?;
            (PairKind::Commuting, Witness::TwistFixes { l })
        }
        1 => {
            let w = TwistWord::new(vec![(1, 1), (2, 1)])?;
            let t = apply_word([e1, e2], &w, e1.object(), opts.size_cap)?;
            let (l, _) = iso_up_to_shift(e2.object(), &t)?.ok_or_else(|| failure("T_1 T_2(E_1) is not a shift of E_2"))?;
            (PairKind::Braid, Witness::BraidMove { l })
        }
        _ => (PairKind::Free, Witness::Certificate(pingpong_verify(e1, 1, e2, 1, opts)?)),
    };
    Ok(PairClassification { kind, intersection_number: i, witness })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommuteVerdict {
    pub commute: bool,
    pub reason: String,
}

/// Decides `T_{E_1}^{k_1} = T_{E_2}^{k_2}`: true iff `E_1 ≅ E_2[l]` and
/// `k_1 = k_2`.
pub fn commute_test<F: Field>(
    e1: &SphericalObject<F>,
    k1: i64,
    e2: &SphericalObject<F>,
    k2: i64,
) -> Result<CommuteVerdict> {
    if k1 == 0 || k2 == 0 {
        return Err(Error::ZeroPower);
    }
    require_d(e1)?;
    require_d(e2)?;
    let verdict = |commute, reason: String| Ok(CommuteVerdict { commute, reason });
    match iso_up_to_shift(e2.object(), e1.object())? {
        None => verdict(false, "objects are not isomorphic up to shift".into()),
        Some((l, _)) if k1 != k2 => verdict(false, format!("E_1 = E_2[{l}] but exponents {k1} != {k2}")),
        Some((l, _)) => verdict(true, format!("E_1 = E_2[{l}], equal exponents")),
    }
}

/// True iff `T_{E_1} T_{E_2}(E_1) ≅ E_2[l]` for some `l`.
pub fn braid_relation_check<F: Field>(e1: &SphericalObject<F>, e2: &SphericalObject<F>) -> Result<bool> {
    require_d(e1)?;
    let w = TwistWord::new(vec![(1, 1), (2, 1)])?;
    let t = apply_word([e1, e2], &w, e1.object(), DEFAULT_SIZE_CAP)?;
    Ok(iso_up_to_shift(e2.object(), &t)?.is_some())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    /// 1 if `i(S, E_2) > i(S, E_1)`, 2 if the reverse.
    pub w_set: u8,
    pub i_e1: usize,
    pub i_e2: usize,
    pub summands: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordRecord {
    pub word: TwistWord,
    /// Which seed the word was applied to.
    pub seed: u8,
    /// Per letter, rightmost first: `(i(S', E_other), i(S', E_g))` where `g`
    /// is the letter's generator; each step needs `lhs > rhs`.
    pub trace: Vec<(usize, usize)>,
    pub w_set: u8,
    pub summands: usize,
    pub nontrivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PingPongCertificate {
    pub max_word_length: usize,
    pub k1: i64,
    pub k2: i64,
    pub seeds: Vec<SeedRecord>,
    pub words: Vec<WordRecord>,
    pub certified: bool,
}

struct PingPong<'a, F: Field> {
    gens: [&'a SphericalObject<F>; 2],
    ks: [i64; 2],
    seeds: [TwistedComplex<F>; 2],
    opts: PingPongOptions,
}

impl<F: Field> PingPong<'_, F> {
    fn profile(&self, x: &TwistedComplex<F>) -> Result<[usize; 2]> {
        Ok([hom_dims(self.gens[0].object(), x)?.total(), hom_dims(self.gens[1].object(), x)?.total()])
    }

    // `letters` is the free-group word so far, leftmost first, each letter
    // `(g, ±1)`; `letter` is prepended, i.e. applied to `x`.
    fn extend(
        &self,
        x: &TwistedComplex<F>,
        letters: &[(u8, i64)],
        trace: &[(usize, usize)],
        letter: (u8, i64),
        out: &mut Vec<WordRecord>,
    ) -> Result<()> {
        let (g, s) = letter;
        let gi = g as usize - 1;
        let mut word = vec![letter];
        word.extend_from_slice(letters);
        let scaled: Vec<(u8, i64)> = word.iter().map(|&(h, t)| (h, t * self.ks[h as usize - 1])).collect();
        let syllables = TwistWord::reduce(&scaled);
        let fail = |reason: String| Error::CertificateFailure { word: syllables.to_string(), reason };
        let y = twist_power(self.gens[gi], s * self.ks[gi], x)?;
        if y.len() > self.opts.size_cap {
            return Err(Error::SizeCap { word: syllables.to_string(), size: y.len(), cap: self.opts.size_cap });
        }
        let p = self.profile(&y)?;
        let step = (p[1 - gi], p[gi]);
        if step.0 <= step.1 {
            return Err(fail(format!("W-set transition fails: {} <= {}", step.0, step.1)));
        }
        let first = word.last().unwrap().0;
        if let Some((l, _)) = iso_up_to_shift(&self.seeds[first as usize - 1], &y)? {
            return Err(fail(format!("acts on the seed as the shift [{l}]")));
        }
        let mut tr = trace.to_vec();
        tr.push(step);
        out.push(WordRecord {
            word: syllables,
            seed: 3 - first,
            trace: tr.clone(),
            w_set: g,
            summands: y.len(),
            nontrivial: true,
        });
        if word.len() < self.opts.max_word_length {
            for next in LETTERS {
                if next != (g, -s) {
                    self.extend(&y, &word, &tr, next, out)?;
                }
            }
        }
        Ok(())
    }
}

const LETTERS: [(u8, i64); 4] = [(1, 1), (1, -1), (2, 1), (2, -1)];

/// Certifies the ping-pong dynamics of `T_{E_1}^{k_1}`, `T_{E_2}^{k_2}` on
/// every reduced word of length at most `max_word_length`.
///
/// `W_1 = {S | i(S,E_2) > i(S,E_1)}` and `W_2` symmetrically. A word whose
/// rightmost letter is a power of `T_{E_g}` is applied to the seed in the
/// other W-set; after every letter the object must lie in `W_g` and must
/// not be a shift of the seed.
pub fn pingpong_verify<F: Field>(
    e1: &SphericalObject<F>,
    k1: i64,
    e2: &SphericalObject<F>,
    k2: i64,
    opts: &PingPongOptions,
) -> Result<PingPongCertificate> {
    if k1 == 0 || k2 == 0 {
        return Err(Error::ZeroPower);
    }
    if opts.max_word_length == 0 {
        return Err(Error::InvalidParameter("maximum word length must be at least 1".into()));
    }
    require_d(e1)?;
    require_d(e2)?;
    check_distinct(e1, e2)?;
    let i = hom_dims(e1.object(), e2.object())?.total();
    if i < 2 {
        let case = if i == 0 { "commuting" } else { "braid" };
        return Err(Error::Precondition(format!("i={i}: {case} case")));
    }
    // seeds[0] lies in W_2 (i(S,E_1) > i(S,E_2)); seeds[1] in W_1.
    let s_w2 = build_separating_object(e1, e2)?.object;
    let s_w1 = build_separating_object(e2, e1)?.object;
    let pp = PingPong { gens: [e1, e2], ks: [k1, k2], seeds: [s_w2, s_w1], opts: *opts };
    let mut seeds = Vec::new();
    for (idx, s) in pp.seeds.iter().enumerate() {
        let p = pp.profile(s)?;
        let w_set = if p[1] > p[0] { 1 } else { 2 };
        if w_set != 2 - idx as u8 {
            return Err(Error::CertificateFailure { word: "()".into(), reason: "seed lies in the wrong W-set".into() });
        }
        seeds.push(SeedRecord { w_set, i_e1: p[0], i_e2: p[1], summands: s.len() });
    }
    seeds.sort_by_key(|s| s.w_set);
    // A first letter T_{E_g}^{±} acts on the seed outside W_g.
    let branches: Vec<Result<Vec<WordRecord>>> = LETTERS
        .par_iter()
        .map(|&letter| {
            let mut out = Vec::new();
            pp.extend(&pp.seeds[letter.0 as usize - 1], &[], &[], letter, &mut out)?;
            Ok(out)
        })
        .collect();
    let mut words = Vec::new();
    for b in branches {
        words.extend(b?);
    }
    words.sort_by(|a, b| (a.word.letters.len(), &a.word).cmp(&(b.word.letters.len(), &b.word)));
    Ok(PingPongCertificate { max_word_length: opts.max_word_length, k1, k2, seeds, words, certified: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;
    use crate::spherical::projective_spherical;
    use crate::zigzag::{build_zigzag, MultiGraph};
    use std::sync::Arc;

    type F = Gf<32003>;

    fn pair(g: &MultiGraph) -> (SphericalObject<F>, SphericalObject<F>) {
        let alg = Arc::new(build_zigzag::<F>(g).unwrap());
        (projective_spherical(&alg, 0).unwrap(), projective_spherical(&alg, 1).unwrap())
    }

    #[test]
    fn word_validation() {
        assert!(TwistWord::new(vec![(1, 1), (1, 2)]).is_err());
        assert!(matches!(TwistWord::new(vec![(2, 0)]), Err(Error::ZeroPower)));
        assert_eq!(TwistWord::reduce(&[(1, 1), (1, -1), (2, 1)]).letters(), &[(2, 1)]);
        assert_eq!(TwistWord::new(vec![(1, 2), (2, -1)]).unwrap().to_string(), "(1,2)(2,-1)");
    }

    #[test]
    fn cancellation() {
        let (e1, e2) = pair(&MultiGraph::a2());
        let w = TwistWord::new(vec![(1, 1)]).unwrap();
        let m = e2.object().shift(1);
        let y = apply_word([&e1, &e2], &w.inverse(), &apply_word([&e1, &e2], &w, &m, 100).unwrap(), 100).unwrap();
        assert_eq!(iso_up_to_shift(&m, &y).unwrap().map(|r| r.0), Some(0));
        assert_eq!(apply_word([&e1, &e2], &TwistWord::empty(), &m, 100).unwrap().summands(), m.summands());
    }

    #[test]
    fn trichotomy() {
        let opts = PingPongOptions { max_word_length: 2, ..Default::default() };
        let (a, b) = pair(&MultiGraph::disjoint_pair());
        assert_eq!(classify_pair(&a, &b, &opts).unwrap().kind, PairKind::Commuting);
        let (a, b) = pair(&MultiGraph::a2());
        let c = classify_pair(&a, &b, &opts).unwrap();
        assert_eq!(c.kind, PairKind::Braid);
        assert!(braid_relation_check(&a, &b).unwrap());
        let (a, b) = pair(&MultiGraph::double_edge());
        let c = classify_pair(&a, &b, &opts).unwrap();
        assert_eq!(c.kind, PairKind::Free);
        assert!(!braid_relation_check(&a, &b).unwrap());
        assert!(c.to_string().starts_with("Free(F2), certificate: OK@len2"));
    }

    #[test]
    fn not_distinct_rejected() {
        let (a, _) = pair(&MultiGraph::a2());
        let opts = PingPongOptions::default();
        assert!(matches!(classify_pair(&a, &a.shift(2), &opts), Err(Error::NotDistinct(_))));
    }

    #[test]
    fn commute_criterion() {
        let (a, b) = pair(&MultiGraph::a2());
        assert!(commute_test(&a, 2, &a.shift(5), 2).unwrap().commute);
        assert!(!commute_test(&a, 2, &a, 3).unwrap().commute);
        assert!(!commute_test(&a, 1, &b, 1).unwrap().commute);
    }

    #[test]
    fn pingpong_preconditions() {
        let (a, b) = pair(&MultiGraph::a2());
        let err = pingpong_verify(&a, 1, &b, 1, &PingPongOptions::default()).unwrap_err();
        assert_eq!(err, Error::Precondition("i=1: braid case".into()));
        let (a, b) = pair(&MultiGraph::double_edge());
        let opts = PingPongOptions { max_word_length: 0, ..Default::default() };
        assert!(pingpong_verify(&a, 1, &b, 1, &opts).is_err());
    }

    #[test]
    fn pingpong_length_three() {
        let (a, b) = pair(&MultiGraph::double_edge());
        let opts = PingPongOptions { max_word_length: 3, ..Default::default() };
        let cert = pingpong_verify(&a, 1, &b, 1, &opts).unwrap();
        assert_eq!(cert.words.len(), 4 + 12 + 36);
        assert!(cert.words.iter().all(|w| w.trace.iter().all(|(l, r)| l > r)));
    }
}
