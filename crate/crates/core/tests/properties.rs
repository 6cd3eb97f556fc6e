use proptest::prelude::*;

use swapreach::oracle::{bfs_reachable, OracleStatus};
use swapreach::reduction::PmrStatus;
use swapreach::stable_sets::{is_stable, min_stable_containing_with};
use swapreach::witness::DEFAULT_CAP;
use swapreach::{
    apply_swap, brute_min_stable, build_witness, gen_instance, gen_pmr, legal_swap,
    map_sequence_backward, map_sequence_forward, matching_bfs, min_proper_stable, parse_instance,
    reduce_pmr, replay, serialize, solve_tree, Decision, GenSpec, NoCertificate, PMRInstance,
    Shape, SwapMove,
};

const BUDGET: usize = 1_000_000;

fn shape() -> impl Strategy<Value = Shape> {
    prop::sample::select(Shape::ALL.to_vec())
}

fn tree_shape() -> impl Strategy<Value = Shape> {
    prop::sample::select(vec![Shape::Tree, Shape::Path, Shape::Star])
}

fn density() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![0.0, 0.3, 0.5, 0.8, 1.0])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn serialization_round_trips(shape in shape(), n in 1usize..12, d in density(), seed: u64) {
        let inst = gen_instance(&GenSpec::new(shape, n, d, seed)).unwrap();
        let text = serialize(&inst);
        let again = parse_instance(&text).unwrap();
        prop_assert_eq!(serialize(&again), text);
        prop_assert_eq!(again, inst);
    }

    #[test]
    fn generation_is_deterministic(shape in shape(), n in 1usize..20, d in density(), seed: u64) {
        let spec = GenSpec::new(shape, n, d, seed);
        prop_assert_eq!(
            serialize(&gen_instance(&spec).unwrap()),
            serialize(&gen_instance(&spec).unwrap())
        );
    }

    #[test]
    fn swaps_are_involutions(n in 2usize..10, d in density(), seed: u64, pick: usize) {
        let inst = gen_instance(&GenSpec::new(Shape::Tree, n, d, seed)).unwrap();
        let edges: Vec<_> = inst.edges().collect();
        let (u, v) = edges[pick % edges.len()];
        let m = SwapMove::new(u, v);
        if legal_swap(&inst, inst.source(), m) {
            let next = apply_swap(&inst, inst.source(), m).unwrap();
            inst.check_assignment("next", &next).unwrap();
            prop_assert_eq!(&apply_swap(&inst, &next, m).unwrap(), inst.source());
        } else {
            prop_assert!(apply_swap(&inst, inst.source(), m).is_err());
        }
    }

    #[test]
    fn solver_matches_oracle(shape in tree_shape(), n in 1usize..8, d in density(), seed: u64) {
        let inst = gen_instance(&GenSpec::new(shape, n, d, seed)).unwrap();
        let oracle = bfs_reachable(&inst, BUDGET);
        let decision = solve_tree(&inst).unwrap();
        prop_assert_eq!(decision.is_yes(), oracle.is_reachable());
        match decision {
            Decision::Yes(cert) => {
                prop_assert!(cert.verify(&inst));
                let seq = build_witness(&inst, DEFAULT_CAP).unwrap();
                prop_assert_eq!(&replay(&inst, inst.source(), &seq.moves).unwrap(), inst.target());
                prop_assert!(oracle.distance().unwrap() <= seq.len());
            }
            Decision::No(NoCertificate::Crossing(c)) => prop_assert!(c.verify(&inst)),
            Decision::No(NoCertificate::Disconnected(d)) => prop_assert!(d.verify(&inst)),
        }
    }

    #[test]
    fn stable_sets_match_enumeration(shape in shape(), n in 1usize..9, d in density(), seed: u64) {
        let inst = gen_instance(&GenSpec::new(shape, n, d, seed)).unwrap();
        let fast = min_proper_stable(&inst);
        prop_assert_eq!(&fast, &brute_min_stable(&inst).unwrap());
        if let Some(x) = fast {
            prop_assert!(is_stable(&inst, x.items()).unwrap());
        }
        for j in 0..n {
            let from_a = min_stable_containing_with(&inst, j, inst.source());
            let from_b = min_stable_containing_with(&inst, j, inst.target());
            prop_assert_eq!(from_a, from_b);
        }
    }

    #[test]
    fn reduction_preserves_answers(n in 1usize..6, d in density(), seed: u64) {
        let p = gen_pmr(&GenSpec::new(Shape::PmrCycle, n, d, seed)).unwrap();
        prop_assert_eq!(&PMRInstance::parse(&p.serialize()).unwrap(), &p);
        let inst = reduce_pmr(&p).unwrap();
        let left = matching_bfs(&p, BUDGET);
        let right = bfs_reachable(&inst, BUDGET);
        match (&left.status, &right.status) {
            (PmrStatus::Reachable { distance: l, exchanges }, OracleStatus::Reachable { distance: r, moves }) => {
                prop_assert_eq!(l, r);
                let back = map_sequence_backward(&p, moves).unwrap();
                prop_assert_eq!(&map_sequence_forward(&p, &back).unwrap(), moves);
                let forward = map_sequence_forward(&p, exchanges).unwrap();
                prop_assert_eq!(&map_sequence_backward(&p, &forward).unwrap(), exchanges);
            }
            (PmrStatus::Unreachable, OracleStatus::Unreachable) => {}
            other => prop_assert!(false, "disagreement {:?}", other),
        }
    }
}
