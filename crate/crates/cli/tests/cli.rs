use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(format!("{name}.txt"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swapreach"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_exit_codes() {
    let yes = run(&["solve", path(&fixture("e2"))]);
    assert_eq!(yes.status.code(), Some(0));
    assert!(stdout(&yes).starts_with("YES\n"));
    let no = run(&["solve", path(&fixture("e3"))]);
    assert_eq!(no.status.code(), Some(1));
    let text = stdout(&no);
    assert!(text.starts_with("NO\n"));
    assert!(text.contains("item x\n"));
    assert!(text.contains("component 1\n"));
}

#[test]
fn witness_lines() {
    let out = run(&["witness", "--check", path(&fixture("e1"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "swap 1 2\n");
    let out = run(&["--format", "csv", "witness", path(&fixture("e2"))]);
    assert_eq!(stdout(&out), "step,first,second\n0,1,2\n1,3,4\n");
    let out = run(&["witness", path(&fixture("e3"))]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["--cap", "1", "witness", path(&fixture("e2"))]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn oracle_output() {
    let out = run(&["oracle", path(&fixture("e2"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "status reachable\ndistance 2\nexplored 4\nswap 1 2\nswap 3 4\n"
    );
    assert_eq!(run(&["oracle", path(&fixture("e3"))]).status.code(), Some(1));
    assert_eq!(
        run(&["--budget", "1", "oracle", path(&fixture("e2"))]).status.code(),
        Some(3)
    );
}

#[test]
fn stable_sets() {
    assert_eq!(stdout(&run(&["stable", path(&fixture("e1"))])), "none\n");
    assert_eq!(stdout(&run(&["stable", path(&fixture("e2"))])), "w x\n");
    assert_eq!(
        stdout(&run(&["stable", "--item", "x", path(&fixture("e1"))])),
        "x y z\n"
    );
    assert_eq!(
        run(&["stable", "--item", "nope", path(&fixture("e1"))]).status.code(),
        Some(2)
    );
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "agents 2\nitems 1\n").unwrap();
    assert_eq!(run(&["validate", path(&bad)]).status.code(), Some(2));
    assert_eq!(run(&["solve", "/definitely/missing"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let cycle = dir.path().join("cycle.txt");
    std::fs::write(
        &cycle,
        "agents 3\nitems 3\naccept x 1\naccept y 2\naccept z 3\n\
         edge 1 2\nedge 2 3\nedge 1 3\n\
         assign a 1 x\nassign a 2 y\nassign a 3 z\nassign b 1 x\nassign b 2 y\nassign b 3 z\n",
    )
    .unwrap();
    assert_eq!(run(&["solve", path(&cycle)]).status.code(), Some(2));
    assert_eq!(run(&["oracle", path(&cycle)]).status.code(), Some(0));
}

#[test]
fn gen_validate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    let gen = run(&["--seed", "42", "gen", "--agents", "6", "-o", path(&file)]);
    assert_eq!(gen.status.code(), Some(0));
    let first = std::fs::read_to_string(&file).unwrap();
    let again = run(&["--seed", "42", "gen", "--agents", "6"]);
    assert_eq!(stdout(&again), first);
    assert_eq!(stdout(&run(&["validate", path(&file)])), first);
}

#[test]
fn reduce_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let pmr = dir.path().join("c4.pmr");
    std::fs::write(
        &pmr,
        "left 2\nright 2\nmedge 1 x\nmedge 1 y\nmedge 2 x\nmedge 2 y\n\
         m1 1 x\nm1 2 y\nm2 1 y\nm2 2 x\n",
    )
    .unwrap();
    let inst = dir.path().join("c4.txt");
    let out = run(&["reduce", path(&pmr), "-o", path(&inst)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&inst).unwrap();
    assert!(text.contains("edge 1 2\n"));
    assert_eq!(stdout(&run(&["witness", path(&inst)])), "swap 1 2\n");
    let out = run(&["reduce", "--verify", path(&pmr)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("agree\n"));
}

#[test]
fn bench_suite() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("s.suite");
    std::fs::write(&suite, "tree 10 0.5 1 solve,witness,oracle\ncomplete 4 0.5 2 solve\n").unwrap();
    let csv = dir.path().join("out.csv");
    let out = run(&["bench", path(&suite), "--jobs", "2", "-o", path(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 5);
    assert!(rows.lines().last().unwrap().contains(",solve,NotATree,"));
    assert_eq!(stdout(&out).lines().count(), 4);
}
