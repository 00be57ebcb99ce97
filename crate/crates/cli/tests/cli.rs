use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SUM_GAME: &str = "bimatrix v1\nrows 2 cols 2\n1 5\n5 3\n\n2 -5\n-5 4\n";
const PENNIES: &str = "bimatrix v1\nrows 2 cols 2\n1 -1\n-1 1\n\n-1 1\n1 -1\n";

fn bimatrix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bimatrix"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn put(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn solve_prints_sum_equilibrium() {
    let dir = tempfile::tempdir().unwrap();
    let game = put(dir.path(), "sum.game", SUM_GAME);
    let o = bimatrix(&["solve", &game]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    // column player indifferent: both columns pay -17/16
    assert!(out.starts_with("x=(9/16,7/16)\ny=(1/3,2/3)\n"), "{out}");
    assert!(out.contains("lambda=1\n"));
    assert!(out.contains("tree=sum(K=5)[leaf 1x1, leaf 1x1]\n"));
    assert!(out.contains("elapsed_ms="));
}

#[test]
fn solve_out_feeds_verify() {
    let dir = tempfile::tempdir().unwrap();
    let game = put(dir.path(), "sum.game", SUM_GAME);
    let prof = dir.path().join("sum.prof");
    let o = bimatrix(&["solve", &game, "--out", prof.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = bimatrix(&["verify", &game, prof.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_uniform_pennies() {
    let dir = tempfile::tempdir().unwrap();
    let game = put(dir.path(), "mp.game", PENNIES);
    let good = put(dir.path(), "good.prof", "x=(1/2,1/2)\ny=(1/2,1/2)\n");
    let bad = put(dir.path(), "bad.prof", "x=(1,0)\ny=(1/2,1/2)\n");
    assert_eq!(bimatrix(&["verify", &game, &good]).status.code(), Some(0));
    assert_eq!(bimatrix(&["verify", &game, &bad]).status.code(), Some(2));
}

#[test]
fn parse_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let game = put(dir.path(), "bad.game", "bimatrix v1\nrows 1 cols 1\n1/0\n\n1\n");
    let o = bimatrix(&["solve", &game]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
    assert_eq!(bimatrix(&["solve", "/nonexistent.game"]).status.code(), Some(1));
    assert_eq!(bimatrix(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(bimatrix(&["--help"]).status.code(), Some(0));
}

#[test]
fn decompose_prints_tree() {
    let dir = tempfile::tempdir().unwrap();
    let game = put(dir.path(), "sum.game", SUM_GAME);
    let o = bimatrix(&["decompose", &game]);
    assert_eq!(stdout(&o), "sum 2x2 K=5\n  leaf 1x1\n  leaf 1x1\nlambda=1\n");
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.game");
    let tree = dir.path().join("a.tree");
    let o = bimatrix(&[
        "generate",
        "--seed",
        "1",
        "--out",
        a.to_str().unwrap(),
        "--tree",
        tree.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let b = bimatrix(&["generate", "--seed", "1"]);
    assert_eq!(fs::read(&a).unwrap(), b.stdout);
    assert!(!fs::read_to_string(&tree).unwrap().is_empty());
    let c = bimatrix(&["generate", "--seed", "2"]);
    assert_ne!(b.stdout, c.stdout);
}

#[test]
fn generate_rejects_bad_probabilities() {
    let o = bimatrix(&["generate", "--seed", "1", "--p-sum", "0.9"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bench_rows_in_corpus_order() {
    let dir = tempfile::tempdir().unwrap();
    let mut paths = Vec::new();
    for i in 0..6 {
        paths.push(put(
            dir.path(),
            &format!("one{i}.game"),
            &format!("bimatrix v1\nrows 1 cols 1\n{i}\n\n{i}\n"),
        ));
    }
    paths.push(dir.path().join("missing.game").to_str().unwrap().to_string());
    let mut args = vec!["bench", "--timeout-ms", "1000", "--jobs", "3", "--mode", "decomp"];
    args.extend(paths.iter().map(String::as_str));
    let o = bimatrix(&args);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "game_id,n,m,S,lambda,t_decomp_ms,t_direct_ms,verified,timeout_ms"
    );
    for (i, line) in lines[1..7].iter().enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[0], format!("one{i}"));
        assert_eq!(&f[1..5], ["1", "1", "1", "1"]);
        assert_eq!(f[6], "NA");
        assert_eq!(&f[7..], ["true", "1000"]);
    }
    assert_eq!(lines[7], "missing,NA,NA,NA,NA,NA,NA,false,1000");
}

#[test]
fn bench_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let game = put(dir.path(), "mp.game", PENNIES);
    let out = dir.path().join("r.csv");
    let o = bimatrix(&["bench", &game, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(out).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("mp,2,2,4,4,"));
}
