use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sphertwist_core::algebra::GradedAlgebra;
use sphertwist_core::dual::{decompose, make_b, make_c, sum_of_b, truncated_tensor, ADModule};
use sphertwist_core::group::{apply_word, classify_pair, commute_test, PingPongOptions, TwistWord, DEFAULT_SIZE_CAP};
use sphertwist_core::spherical::{
    intersection_number, inverse_twist, projective_spherical, rhom_as_ad_module, twist, twist_power,
    twist_power_iterated, SphericalObject,
};
use sphertwist_core::twisted::{hom_dims, iso_up_to_shift, TwistedComplex};
use sphertwist_core::zigzag::{build_zigzag, MultiGraph};
use sphertwist_core::Gf32003;

type F = Gf32003;

fn graph() -> impl Strategy<Value = MultiGraph> {
    (2usize..=3).prop_flat_map(|n| {
        let edge = (0..n, 0..n).prop_filter("no loops", |(a, b)| a != b);
        prop::collection::vec(edge, 0..=3).prop_map(move |edges| MultiGraph::from_indices(n, &edges))
    })
}

fn model(g: &MultiGraph) -> (Arc<GradedAlgebra<F>>, Vec<SphericalObject<F>>) {
    let alg = Arc::new(build_zigzag::<F>(g).unwrap());
    let es = (0..g.vertices.len()).map(|v| projective_spherical(&alg, v).unwrap()).collect();
    (alg, es)
}

fn word() -> impl Strategy<Value = TwistWord> {
    prop::collection::vec((1u8..=2, prop_oneof![Just(-1i64), Just(1)]), 0..=3).prop_map(|l| TwistWord::reduce(&l))
}

fn multiset() -> impl Strategy<Value = Vec<(u32, i64)>> {
    prop::collection::vec((0u32..=3, -4i64..=4), 1..=3).prop_map(|mut l| {
        l.sort_unstable();
        l
    })
}

fn d_value() -> impl Strategy<Value = i64> {
    prop_oneof![Just(2i64), Just(3), Just(-1)]
}

fn scrambled(d: i64, list: &[(u32, i64)], seed: u64) -> ADModule<F> {
    sum_of_b::<F>(d, list).unwrap().random_conjugate(&mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn projective_intersections_match_adjacency(g in graph()) {
        let (alg, _) = model(&g);
        let n = g.vertices.len();
        for v in 0..n {
            for w in 0..n {
                let i = intersection_number(
                    &TwistedComplex::projective(alg.clone(), v),
                    &TwistedComplex::projective(alg.clone(), w),
                ).unwrap().total;
                let expected = if v == w { 2 } else { g.multiplicity(v, w) };
                prop_assert_eq!(i, expected);
            }
        }
    }

    #[test]
    fn intersection_is_symmetric(g in graph(), w in word(), a in 0usize..3, b in 0usize..3) {
        let (alg, es) = model(&g);
        let n = g.vertices.len();
        let m = apply_word([&es[0], &es[1]], &w, &TwistedComplex::projective(alg.clone(), a % n), DEFAULT_SIZE_CAP).unwrap();
        let e = &es[b % n];
        prop_assert_eq!(
            intersection_number(e.object(), &m).unwrap().total,
            intersection_number(&m, e.object()).unwrap().total
        );
    }

    #[test]
    fn twist_then_inverse_is_identity(g in graph(), v in 0usize..3, t in 0usize..3, shift in -2i64..=2) {
        let (alg, es) = model(&g);
        let n = g.vertices.len();
        let m = TwistedComplex::projective(alg, t % n).shift(shift);
        let e = &es[v % n];
        let back = inverse_twist(e, &twist(e, &m).unwrap()).unwrap();
        prop_assert_eq!(iso_up_to_shift(&m, &back).unwrap().map(|r| r.0), Some(0));
        let back = twist(e, &inverse_twist(e, &m).unwrap()).unwrap();
        prop_assert_eq!(iso_up_to_shift(&m, &back).unwrap().map(|r| r.0), Some(0));
    }

    #[test]
    fn words_preserve_intersection_numbers(g in graph(), w in word(), a in 0usize..3, b in 0usize..3) {
        let (alg, es) = model(&g);
        let n = g.vertices.len();
        let gens = [&es[0], &es[1]];
        let (x, y) = (TwistedComplex::projective(alg.clone(), a % n), TwistedComplex::projective(alg, b % n));
        let (wx, wy) = (
            apply_word(gens, &w, &x, DEFAULT_SIZE_CAP).unwrap(),
            apply_word(gens, &w, &y, DEFAULT_SIZE_CAP).unwrap(),
        );
        prop_assert_eq!(intersection_number(&x, &y).unwrap().total, intersection_number(&wx, &wy).unwrap().total);
    }

    #[test]
    fn twist_power_matches_iteration(g in graph(), v in 0usize..3, t in 0usize..3, k in prop_oneof![-2i64..=-1, 1i64..=2]) {
        let (alg, es) = model(&g);
        let n = g.vertices.len();
        let e = &es[v % n];
        let m = twist(&es[t % n], &TwistedComplex::projective(alg, (t + 1) % n)).unwrap();
        let direct = twist_power(e, k, &m).unwrap();
        let iterated = twist_power_iterated(e, k, &m).unwrap();
        prop_assert_eq!(iso_up_to_shift(&direct, &iterated).unwrap().map(|r| r.0), Some(0));
    }

    #[test]
    fn iso_is_symmetric(g in graph(), w in word(), a in 0usize..3, s in -3i64..=3) {
        let (alg, es) = model(&g);
        let n = g.vertices.len();
        let x = apply_word([&es[0], &es[1]], &w, &TwistedComplex::projective(alg, a % n), DEFAULT_SIZE_CAP).unwrap();
        let y = x.shift(s);
        prop_assert_eq!(iso_up_to_shift(&x, &y).unwrap().map(|r| r.0), Some(s));
        prop_assert_eq!(iso_up_to_shift(&y, &x).unwrap().map(|r| r.0), Some(-s));
    }

    #[test]
    fn minimize_preserves_hom_dims(g in graph(), v in 0usize..3, t in 0usize..3) {
        let (alg, es) = model(&g);
        let n = g.vertices.len();
        let e = &es[v % n];
        let x = twist(e, &TwistedComplex::projective(alg.clone(), t % n)).unwrap();
        let raw = twist(e, &x).unwrap();
        let probe = TwistedComplex::projective(alg, (t + 1) % n);
        prop_assert_eq!(hom_dims(&probe, &raw).unwrap(), hom_dims(&probe, &raw.minimize()).unwrap());
        prop_assert_eq!(hom_dims(&raw, &probe).unwrap(), hom_dims(&raw.minimize(), &probe).unwrap());
    }

    #[test]
    fn classification_is_symmetric(g in graph()) {
        let (_, es) = model(&g);
        let opts = PingPongOptions { max_word_length: 2, ..Default::default() };
        let ab = classify_pair(&es[0], &es[1], &opts).unwrap();
        let ba = classify_pair(&es[1], &es[0], &opts).unwrap();
        prop_assert_eq!(ab.kind, ba.kind);
        prop_assert_eq!(ab.intersection_number, ba.intersection_number);
    }

    #[test]
    fn commute_test_is_reflexive(g in graph(), v in 0usize..3, k in prop_oneof![-2i64..=-1, 1i64..=2]) {
        let (_, es) = model(&g);
        let e = &es[v % g.vertices.len()];
        prop_assert!(commute_test(e, k, e, k).unwrap().commute);
        prop_assert!(commute_test(e, k, &e.shift(2), k).unwrap().commute);
        prop_assert!(!commute_test(e, k, e, -k).unwrap().commute);
    }

    #[test]
    fn decompose_round_trip(d in d_value(), list in multiset(), seed in any::<u64>()) {
        prop_assert_eq!(decompose(&scrambled(d, &list, seed)).unwrap().to_list(), list);
    }

    #[test]
    fn ind_phi_lambda_is_an_action(d in d_value(), list in multiset(), seed in any::<u64>(), a in 1u64..50, b in 1u64..50) {
        let m = scrambled(d, &list, seed);
        let (la, lb) = (F::new(a as i64), F::new(b as i64));
        let two_step = m.ind_phi_lambda(&la).unwrap().ind_phi_lambda(&lb).unwrap();
        let one_step = m.ind_phi_lambda(&(la * lb)).unwrap();
        for deg in m.dims().keys() {
            prop_assert_eq!(two_step.eps(*deg), one_step.eps(*deg));
            prop_assert_eq!(two_step.diff(*deg), one_step.diff(*deg));
        }
        prop_assert_eq!(m.ind_phi_lambda(&F::new(1)).unwrap().eps(0), m.eps(0));
        prop_assert_eq!(decompose(&one_step).unwrap().to_list(), list);
    }

    #[test]
    fn single_level_tensor_obeys_kunneth(d in d_value(), r in 0u32..=3, p in 0u32..=3) {
        let (m, n) = (make_b::<F>(d, r, 0).unwrap(), make_c::<F>(d, p, 0).unwrap());
        let t = truncated_tensor(&m, &n, 1).unwrap();
        prop_assert_eq!(t.complex.terms().total(), m.total_dim() * n.total_dim());
        prop_assert_eq!(t.total_cohomology(), m.cohomology_dims().total() * n.cohomology_dims().total());
    }

    #[test]
    fn truncated_tensor_dimension_bound(d in d_value(), r in 0u32..=3, p in 0u32..=3, levels in 2usize..=6) {
        let (m, n) = (make_b::<F>(d, r, 0).unwrap(), make_c::<F>(d, p, 0).unwrap());
        let t = truncated_tensor(&m, &n, levels).unwrap();
        prop_assert!(t.total_cohomology() >= m.cohomology_dims().total() * n.cohomology_dims().total());
    }

    #[test]
    fn self_hom_is_free_of_rank_one(g in graph(), v in 0usize..3, w in word()) {
        let (alg, es) = model(&g);
        let n = g.vertices.len();
        let x = apply_word([&es[0], &es[1]], &w, &TwistedComplex::projective(alg, v % n), DEFAULT_SIZE_CAP).unwrap();
        let Some(e) = sphertwist_core::spherical::check_spherical(&x, 2).unwrap() else {
            return Err(TestCaseError::fail("image of a spherical object is not spherical"));
        };
        let list = decompose(&rhom_as_ad_module(&e, e.object()).unwrap()).unwrap().to_list();
        prop_assert_eq!(list.len(), 1);
        prop_assert_eq!(list[0].0, 1);
    }
}
