use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nullity_core::bipartite::{from_bipartite, to_bipartite, BipartiteMultigraph};
use nullity_core::classify::classify;
use nullity_core::enumerate::digraph_from_mask;
use nullity_core::kelly::{kelly_width_exact, ordering_width};
use nullity_core::matrix::{
    asap_check, check_matrix, in_q0, lift_sp_witness, random_q0_matrix, rat, reduce_contract, reduce_delete,
    reduce_semicontract, schur_complement, seeded_q0_matrix, sp_check, MatrixVerdict, Reduced, RationalMatrix,
    ReductionKind, SpVerdict,
};
use nullity_core::minors::forbidden_scan;
use nullity_core::{Digraph, Error};

fn digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(|n| {
        let m = n * (n - 1);
        (Just(n), 0..(1u64 << m)).prop_map(|(n, mask)| digraph_from_mask(n, mask))
    })
}

/// A digraph with a `Q0` matrix, singular about half the time.
fn instance(max_n: usize) -> impl Strategy<Value = (Digraph, RationalMatrix)> {
    (digraph(max_n), any::<u64>()).prop_map(|(d, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = if rng.gen_bool(0.5) {
            let k = rng.gen_range(1..=2);
            (0..20)
                .find_map(|_| seeded_q0_matrix(&d, k, &mut rng))
                .unwrap_or_else(|| random_q0_matrix(&d, &mut rng))
        } else {
            random_q0_matrix(&d, &mut rng)
        };
        (d, a)
    })
}

/// Restricts every vertex to at most one out-arc so that each reduction
/// has somewhere to apply.
fn thin(d: &Digraph) -> Digraph {
    let arcs: Vec<_> = (0..d.n())
        .filter_map(|u| d.out_neighbors(u).first().map(|&w| (u, w)))
        .collect();
    Digraph::from_arcs(d.n(), arcs).unwrap()
}

fn try_reduce(d: &Digraph, a: &RationalMatrix, u: usize) -> Option<Reduced> {
    [reduce_contract, reduce_delete, reduce_semicontract]
        .into_iter()
        .find_map(|f| f(d, a, u).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_nullity_and_transpose((_, a) in instance(6)) {
        prop_assert_eq!(a.rank() + a.nullity(), a.n());
        prop_assert_eq!(a.nullity(), a.transpose().nullity());
        prop_assert_eq!(a.right_nullspace().len(), a.nullity());
        prop_assert_eq!(a.left_nullspace().len(), a.nullity());
        for y in a.right_nullspace() {
            prop_assert!(a.apply(&y).iter().all(|e| *e == rat(0)));
        }
    }

    #[test]
    fn properties_are_transpose_invariant((d, a) in instance(5)) {
        let at = a.transpose();
        prop_assert!(in_q0(&d.reverse(), &at).unwrap());
        prop_assert_eq!(asap_check(&a).holds, asap_check(&at).holds);
        prop_assert_eq!(asap_check(&a).dimension, asap_check(&at).dimension);
        let forward = sp_check(&a, &d).unwrap();
        let backward = sp_check(&at, &d.reverse()).unwrap();
        prop_assert_eq!(forward.holds(), backward.holds());
        if let SpVerdict::Violated(w) = forward {
            prop_assert!(w.validate(&d, &a).is_ok());
            prop_assert!(w.transposed().validate(&d.reverse(), &at).is_ok());
        }
    }

    #[test]
    fn asap_violations_are_sp_violations_on_q((d, seed) in (digraph(5), any::<u64>())) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = nullity_core::matrix::random_q_matrix(&d, &mut rng);
        if asap_check(&b).holds {
            prop_assert!(sp_check(&b, &d).unwrap().holds());
        }
    }

    #[test]
    fn schur_complement_keeps_nullity((_, a) in instance(6), pick in any::<prop::sample::Index>()) {
        let nonzero: Vec<usize> = (0..a.n()).filter(|&i| !a.is_zero_at(i, i)).collect();
        prop_assume!(!nonzero.is_empty());
        let u = nonzero[pick.index(nonzero.len())];
        let s = schur_complement(&a, &[u]).unwrap();
        prop_assert_eq!(s.n() + 1, a.n());
        prop_assert_eq!(s.nullity(), a.nullity());
    }

    #[test]
    fn reductions_keep_pattern_and_nullity((d, seed) in (digraph(6), any::<u64>()), pick in any::<prop::sample::Index>()) {
        let d = thin(&d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = (0..10).find_map(|_| seeded_q0_matrix(&d, 1, &mut rng)).unwrap_or_else(|| random_q0_matrix(&d, &mut rng));
        let u = pick.index(d.n());
        if let Some(r) = try_reduce(&d, &a, u) {
            prop_assert!(in_q0(&r.digraph, &r.matrix).unwrap());
            prop_assert_eq!(r.matrix.nullity(), a.nullity());
            prop_assert_eq!(r.digraph.n() + 1, d.n());
        }
    }

    #[test]
    fn contract_lifts_are_sound((d, seed) in (digraph(6), any::<u64>()), pick in any::<prop::sample::Index>()) {
        let d = thin(&d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = (0..10).find_map(|_| seeded_q0_matrix(&d, 2, &mut rng)).unwrap_or_else(|| random_q0_matrix(&d, &mut rng));
        let u = pick.index(d.n());
        let Some(r) = try_reduce(&d, &a, u) else { return Ok(()) };
        let SpVerdict::Violated(w) = sp_check(&r.matrix, &r.digraph).unwrap() else { return Ok(()) };
        match lift_sp_witness(&d, &a, &r.context, &w) {
            Ok(lifted) => prop_assert!(lifted.validate(&d, &a).is_ok()),
            Err(e) => {
                prop_assert!(r.context.kind != ReductionKind::Contract, "contract lift failed: {}", e);
                prop_assert!(matches!(e, Error::Internal(_)));
            }
        }
    }

    #[test]
    fn engine_agrees_with_exhaustive_check((d, a) in instance(6)) {
        prop_assume!(forbidden_scan(&d).unwrap().is_clean());
        let exhaustive = sp_check(&a, &d).unwrap();
        match check_matrix(&d, &a) {
            Ok(report) => match report.verdict {
                MatrixVerdict::NullityAtMostOne => prop_assert!(a.nullity() <= 1),
                MatrixVerdict::SpViolation(w) => {
                    prop_assert!(w.validate(&d, &a).is_ok());
                    prop_assert!(!exhaustive.holds());
                }
            },
            Err(Error::Internal(_)) => {
                prop_assert!(a.nullity() >= 2);
                prop_assert!(exhaustive.holds());
            }
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }

    #[test]
    fn classification_is_reversal_invariant(d in digraph(5)) {
        let forward = classify(&d).unwrap();
        let backward = classify(&d.reverse()).unwrap();
        prop_assert_eq!(forward.verdict, backward.verdict);
        prop_assert!(forward.validate(&d).is_ok());
        prop_assert_eq!(forward.to_json().to_string(), classify(&d).unwrap().to_json().to_string());
    }

    #[test]
    fn exact_width_is_attained_and_minimal((d, order_seed) in (digraph(6), any::<u64>())) {
        let report = kelly_width_exact(&d).unwrap();
        prop_assert!(report.revalidate(&d).is_ok());
        let mut rng = ChaCha8Rng::seed_from_u64(order_seed);
        let mut order: Vec<usize> = (0..d.n()).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        prop_assert!(ordering_width(&d, &order).unwrap() + 1 >= report.kelly_width);
    }

    #[test]
    fn text_formats_round_trip((d, a) in instance(6)) {
        prop_assert_eq!(Digraph::parse_text(&d.to_text()).unwrap(), d.clone());
        prop_assert_eq!(Digraph::parse_json(&d.to_json()).unwrap(), d.clone());
        prop_assert_eq!(RationalMatrix::parse_text(&a.to_text()).unwrap(), a.clone());
        prop_assert_eq!(RationalMatrix::parse_json(&a.to_json().to_string()).unwrap(), a);
        let (g, m) = to_bipartite(&d);
        let (g2, m2) = BipartiteMultigraph::parse_text(&g.to_text(Some(&m))).unwrap();
        prop_assert_eq!(from_bipartite(&g2, m2.as_ref().unwrap()).unwrap(), d);
    }
}
