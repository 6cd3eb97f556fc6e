use swapreach::generator::{gen_instance, GenSpec, Shape};
use swapreach::instance::replay;
use swapreach::oracle::{bfs_reachable, OracleStatus, DEFAULT_BUDGET};
use swapreach::tree_solver::{solve_tree, Decision};
use swapreach::witness::{build_witness, DEFAULT_CAP};

#[test]
fn solver_and_witness_agree_with_oracle() {
    let mut yes = 0;
    let mut no = 0;
    for seed in 0..600u64 {
        let shape = [Shape::Tree, Shape::Path, Shape::Star][seed as usize % 3];
        let n = 2 + (seed as usize / 3) % 6;
        let density = [0.3, 0.5, 0.8, 1.0][(seed as usize / 18) % 4];
        let inst = gen_instance(&GenSpec::new(shape, n, density, seed)).unwrap();
        let decision = solve_tree(&inst).unwrap();
        let oracle = bfs_reachable(&inst, DEFAULT_BUDGET);
        assert!(!matches!(oracle.status, OracleStatus::Exhausted { .. }));
        assert_eq!(decision.is_yes(), oracle.is_reachable(), "seed {seed} {shape} n={n}");
        match decision {
            Decision::Yes(cert) => {
                yes += 1;
                assert!(cert.verify(&inst));
                let seq = build_witness(&inst, DEFAULT_CAP)
                    .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
                assert_eq!(&replay(&inst, inst.source(), &seq.moves).unwrap(), inst.target());
                assert!(oracle.distance().unwrap() <= seq.len());
            }
            Decision::No(_) => no += 1,
        }
    }
    assert!(yes > 50 && no > 0, "yes {yes} no {no}");
}
