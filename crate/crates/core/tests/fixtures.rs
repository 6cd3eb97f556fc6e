use swapreach::oracle::{bfs_reachable, DEFAULT_BUDGET};
use swapreach::stable_sets::min_stable_containing;
use swapreach::witness::DEFAULT_CAP;
use swapreach::{
    apply_swap, brute_min_stable, build_witness, enumerate_assignments, legal_swap,
    min_proper_stable, normalize, parse_instance, serialize, solve_tree, split_check, Decision,
    Error, Instance, NoCertificate, Normalization, OracleStatus, SplitOutcome, SwapMove,
};

fn load(name: &str) -> Instance {
    let text = match name {
        "e1" => include_str!("fixtures/e1.txt"),
        "e2" => include_str!("fixtures/e2.txt"),
        "e3" => include_str!("fixtures/e3.txt"),
        "e4" => include_str!("fixtures/e4.txt"),
        _ => unreachable!(),
    };
    parse_instance(text).unwrap()
}

fn item(inst: &Instance, name: &str) -> usize {
    inst.item_by_name(name).unwrap()
}

fn item_names(inst: &Instance, items: &[usize]) -> Vec<String> {
    items.iter().map(|&j| inst.item_name(j).to_string()).collect()
}

#[test]
fn answers_and_distances() {
    let expected = [("e1", Some(1)), ("e2", Some(2)), ("e3", None), ("e4", Some(0))];
    for (name, distance) in expected {
        let inst = load(name);
        assert_eq!(solve_tree(&inst).unwrap().is_yes(), distance.is_some(), "{name}");
        assert_eq!(bfs_reachable(&inst, DEFAULT_BUDGET).distance(), distance, "{name}");
    }
}

#[test]
fn oracle_sequences() {
    let e1 = load("e1");
    match bfs_reachable(&e1, DEFAULT_BUDGET).status {
        OracleStatus::Reachable { distance, moves } => {
            assert_eq!(distance, 1);
            assert_eq!(moves, [SwapMove::new(0, 1)]);
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(bfs_reachable(&load("e3"), DEFAULT_BUDGET).status, OracleStatus::Unreachable);
    let e4 = bfs_reachable(&load("e4"), DEFAULT_BUDGET);
    assert_eq!(e4.status, OracleStatus::Reachable { distance: 0, moves: vec![] });
}

#[test]
fn canonical_round_trip() {
    for name in ["e1", "e2", "e3", "e4"] {
        let inst = load(name);
        let text = serialize(&inst);
        let again = parse_instance(&text).unwrap();
        assert_eq!(again, inst);
        assert_eq!(serialize(&again), text);
    }
}

#[test]
fn validation_errors() {
    let text = include_str!("fixtures/e1.txt").replace(
        "assign a 1 x\nassign a 2 y\nassign a 3 z",
        "assign a 1 z\nassign a 2 y\nassign a 3 x",
    );
    assert!(matches!(parse_instance(&text), Err(Error::UnacceptableItem { .. })));
    let text = include_str!("fixtures/e1.txt").replace("agents 3", "agents 4");
    assert!(matches!(parse_instance(&text), Err(Error::SizeMismatch { .. })));
    let text = include_str!("fixtures/e1.txt").replace("edge 2 3", "edge 1 2");
    assert!(matches!(parse_instance(&text), Err(Error::DuplicateEdge { .. })));
    let text = include_str!("fixtures/e1.txt").replace("edge 2 3", "edge 3 3");
    assert!(matches!(parse_instance(&text), Err(Error::BadEdge { .. })));
    let text = include_str!("fixtures/e1.txt").replace("assign b 3 z", "assign b 3 y");
    assert!(matches!(parse_instance(&text), Err(Error::NotBijection { .. })));
}

#[test]
fn swap_relation() {
    let e1 = load("e1");
    assert!(legal_swap(&e1, e1.source(), SwapMove::new(0, 1)));
    assert!(!legal_swap(&e1, e1.source(), SwapMove::new(0, 2)));
    assert_eq!(&apply_swap(&e1, e1.source(), SwapMove::new(0, 1)).unwrap(), e1.target());
    let e3 = load("e3");
    assert!(!legal_swap(&e3, e3.source(), SwapMove::new(0, 1)));
    let e2 = load("e2");
    let next = apply_swap(&e2, e2.source(), SwapMove::new(2, 3)).unwrap();
    assert_eq!(item_names(&e2, next.items()), ["w", "x", "z", "y"]);
}

#[test]
fn stable_sets() {
    let e1 = load("e1");
    assert_eq!(min_proper_stable(&e1), None);
    assert_eq!(brute_min_stable(&e1).unwrap(), None);
    let x = min_stable_containing(&e1, item(&e1, "x"));
    assert_eq!(item_names(&e1, x.items()), ["x", "y", "z"]);

    let e2 = load("e2");
    let m = min_proper_stable(&e2).unwrap();
    assert_eq!(item_names(&e2, m.items()), ["w", "x"]);
    assert_eq!(brute_min_stable(&e2).unwrap(), Some(m));

    let e3 = load("e3");
    let m = min_proper_stable(&e3).unwrap();
    assert_eq!(item_names(&e3, m.items()), ["w"]);
    assert_eq!(m.agents(), [1]);
}

#[test]
fn enumeration_counts() {
    assert_eq!(enumerate_assignments(&load("e3"), 100).unwrap().len(), 2);
    assert_eq!(enumerate_assignments(&load("e4"), 100).unwrap().len(), 1);
    assert_eq!(enumerate_assignments(&load("e2"), 100).unwrap().len(), 4);
    assert_eq!(enumerate_assignments(&load("e2"), 3), Err(Error::LimitExceeded(3)));
}

#[test]
fn normalization_keeps_paths() {
    for name in ["e1", "e2", "e3", "e4"] {
        let inst = load(name);
        match normalize(&inst) {
            Normalization::Normalized(n) => assert_eq!(n, inst),
            Normalization::ImmediateNo(no) => panic!("{name}: {no:?}"),
        }
    }
}

#[test]
fn certificates() {
    let e3 = load("e3");
    match solve_tree(&e3).unwrap() {
        Decision::No(NoCertificate::Crossing(c)) => {
            assert_eq!(e3.item_name(c.item), "x");
            assert_eq!(c.component.agents, [0]);
            assert!(c.verify(&e3));
        }
        other => panic!("{other:?}"),
    }
    let e2 = load("e2");
    let x = min_proper_stable(&e2).unwrap();
    match split_check(&e2, &x).unwrap() {
        SplitOutcome::Partition(parts) => {
            assert_eq!(parts.len(), 1);
            assert_eq!(parts[0].agents, [2, 3]);
            assert_eq!(item_names(&e2, &parts[0].items), ["y", "z"]);
        }
        other => panic!("{other:?}"),
    }
    match solve_tree(&e2).unwrap() {
        Decision::Yes(cert) => assert!(cert.verify(&e2)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn witnesses() {
    for name in ["e1", "e2", "e4"] {
        let inst = load(name);
        let seq = build_witness(&inst, DEFAULT_CAP).unwrap();
        seq.verify(&inst).unwrap();
        let shortest = bfs_reachable(&inst, DEFAULT_BUDGET).distance().unwrap();
        assert!(shortest <= seq.len());
    }
    assert_eq!(build_witness(&load("e1"), DEFAULT_CAP).unwrap().moves, [SwapMove::new(0, 1)]);
    assert!(build_witness(&load("e4"), DEFAULT_CAP).unwrap().is_empty());
    assert_eq!(build_witness(&load("e3"), DEFAULT_CAP), Err(Error::NotYesInstance));
}
