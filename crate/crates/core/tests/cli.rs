mod common;

use std::path::Path;
use std::process::{Command, Output};

fn alps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alps")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_tight_example() {
    let dir = common::data_dir();
    let (inst, pred) = (dir.join("tight.stp"), dir.join("tight.pred"));
    let base = ["solve", "steiner", "--instance", path(&inst), "--pred", path(&pred)];

    let out = alps(&[&base[..], &["--alpha", "2"]].concat());
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("cost=6.6"));

    let out = alps(&[&base[..], &["--alpha", "1"]].concat());
    assert!(stdout(&out).contains("cost=10"));
    let plain = alps(&["solve", "steiner", "--instance", path(&inst)]);
    assert!(stdout(&plain).contains("cost=10"));

    let out = alps(&[&base[..], &["--alpha", "inf"]].concat());
    assert!(out.status.success());
    assert!(stdout(&out).contains("cost=11.5"));

    let out = alps(&[&base[..], &["--alpha", "inf", "--robust"]].concat());
    assert!(stdout(&out).contains("cost=10"));

    let out = alps(&[&base[..], &["--epsilon", "0.1"]].concat());
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("cost=6.6") && text.contains("alpha="), "{text}");
}

#[test]
fn usage_and_input_errors() {
    let dir = common::data_dir();
    let inst = dir.join("tight.stp");

    let out = alps(&["solve", "steiner", "--instance", "/no/such/file.stp"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/no/such/file.stp"));

    let out = alps(&["solve", "steiner", "--instance", path(&inst), "--alpha", "2", "--epsilon", "0.1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = alps(&["solve", "steiner", "--instance", path(&inst), "--alpha", "0.5"]);
    assert_eq!(out.status.code(), Some(2));

    let out = alps(&["experiment", "learned", "--instance", path(&dir.join("learned-base.stp")), "--p", "0.5", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("at least 2"));
}

#[test]
fn solver_errors_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let dis = tmp.path().join("dis.stp");
    std::fs::write(
        &dis,
        "SECTION Graph\nNodes 3\nEdges 1\nE 1 2 1\nEND\nSECTION Terminals\nTerminals 2\nT 1\nT 3\nEND\nEOF\n",
    )
    .unwrap();
    let out = alps(&["solve", "steiner", "--instance", path(&dis)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("disconnected"));

    let big = tmp.path().join("big.stp");
    let gen = alps(&["gen", "random", "--n", "30", "--extra-edges", "10", "--k", "25", "--seed", "1", "--out", path(&big)]);
    assert!(gen.status.success());
    let out = alps(&["oracle", "steiner", "--instance", path(&big)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("too large"));
}

#[test]
fn oracle_and_predictions() {
    let dir = common::data_dir();
    let inst = dir.join("tight.stp");
    let tmp = tempfile::tempdir().unwrap();
    let opt = tmp.path().join("opt.sol");

    let out = alps(&["oracle", "steiner", "--instance", path(&inst), "--out", path(&opt)]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("cost=6.6"));
    assert_eq!(std::fs::read_to_string(&opt).unwrap().lines().count(), 6);

    // p = 0 reproduces the reference.
    let same = alps(&["predict", "synth", "--instance", path(&inst), "--reference", path(&opt), "--p", "0"]);
    assert_eq!(stdout(&same), std::fs::read_to_string(&opt).unwrap());

    let a = alps(&["predict", "synth", "--instance", path(&inst), "--reference", path(&opt), "--p", "0.5", "--seed", "3"]);
    let b = alps(&["predict", "synth", "--instance", path(&inst), "--reference", path(&opt), "--p", "0.5", "--seed", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    // Two of three votes for the optimum.
    let pred = dir.join("tight.pred");
    let out = alps(&["predict", "erm", "--instance", path(&inst), path(&opt), path(&pred), path(&opt)]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), std::fs::read_to_string(&opt).unwrap());

    let out = alps(&["solve", "vc", "--instance", path(&inst)]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("cost=6"));
}

#[test]
fn generators_write_loadable_files() {
    let tmp = tempfile::tempdir().unwrap();
    let (stp, pred) = (tmp.path().join("t.stp"), tmp.path().join("t.pred"));
    let out = alps(&["gen", "tight-example", "--out", path(&stp), "--pred-out", path(&pred)]);
    assert!(out.status.success());
    let dir = common::data_dir();
    assert_eq!(std::fs::read(&stp).unwrap(), std::fs::read(dir.join("tight.stp")).unwrap());
    assert_eq!(std::fs::read(&pred).unwrap(), std::fs::read(dir.join("tight.pred")).unwrap());

    let r = tmp.path().join("r.stp");
    let out = alps(&["gen", "random", "--n", "12", "--extra-edges", "12", "--k", "4", "--max-weight", "10", "--seed", "1", "--out", path(&r)]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&r).unwrap(), std::fs::read(dir.join("instances/rand-n12-k4-s1.stp")).unwrap());
    let inst = alps_core::io::load_stp(&r).unwrap();
    assert_eq!(inst.graph.vertex_count(), 12);
    assert_eq!(inst.graph.edge_count(), 23);
    assert_eq!(inst.terminals.len(), 4);
}

#[test]
fn synthetic_experiment_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let empty = tmp.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    let out = alps(&["experiment", "synthetic", "--instances", path(&empty)]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 1);
    assert!(stdout(&out).starts_with("instance,problem,algorithm,p,alpha,seed,"));

    let src = common::data_dir().join("instances");
    let dir = tmp.path().join("two");
    std::fs::create_dir(&dir).unwrap();
    for name in ["rand-n12-k4-s1.stp", "rand-n16-k5-s2.stp"] {
        std::fs::copy(src.join(name), dir.join(name)).unwrap();
    }
    let csv = tmp.path().join("out.csv");
    let out = alps(&[
        "experiment", "synthetic", "--instances", path(&dir), "--p", "0,0.5,1", "--alpha", "1.4,inf", "--seeds", "1,2",
        "--out", path(&csv),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&csv).unwrap();
    // Per instance, p and seed: one mehlhorn row, one per alpha, one alpha-search.
    assert_eq!(text.lines().count(), 1 + 2 * 3 * 2 * (1 + 2 + 1));
    assert!(!text.contains("error"));
}
