use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use spikes_cli::format::{MatroidFile, Props};
use spikes_core::matroid::GroundSet;
use spikes_core::spike::phi_family;
use tempfile::TempDir;

fn spikes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spikes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn run_ok(args: &[&str]) -> String {
    let o = spikes(args);
    assert_eq!(
        code(&o),
        0,
        "{args:?} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &TempDir, rank: usize, mode: &str) -> PathBuf {
    let p = dir.path().join(format!("{mode}{rank}.json"));
    run_ok(&[
        "gen-spike",
        "--rank",
        &rank.to_string(),
        &format!("--{mode}"),
        "--out",
        path_str(&p),
    ]);
    p
}

fn read(p: &Path) -> MatroidFile {
    MatroidFile::parse(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn props(p: &Path) -> Props {
    serde_json::from_str(&run_ok(&["props", path_str(p), "--json"])).unwrap()
}

fn joined(labels: Vec<spikes_core::Label>) -> String {
    labels
        .iter()
        .map(|l| l.as_str())
        .collect::<Vec<_>>()
        .join(",")
}

#[test]
fn gen_spike_writes_z3_and_rejects_small_rank() {
    let dir = TempDir::new().unwrap();
    let f = read(&gen(&dir, 3, "binary"));
    assert_eq!(f.ground, ["x1", "x2", "x3", "y1", "y2", "y3", "t"]);
    let p = props(&gen(&dir, 3, "binary"));
    assert_eq!((p.rank, p.circuits, p.binary), (3, 14, true));
    assert_eq!(p.circuit_sizes.get(&3), Some(&7));

    assert_eq!(code(&spikes(&["gen-spike", "--rank", "2", "--binary"])), 2);
    assert_eq!(code(&spikes(&["gen-spike", "--rank", "4"])), 2);
}

#[test]
fn free_spike_has_no_transversal_circuits() {
    let dir = TempDir::new().unwrap();
    let p = props(&gen(&dir, 4, "free"));
    assert_eq!(p.rank, 4);
    assert!(!p.binary);
    assert!(p.spike);
    // 4 legs, 6 leg pairs, then all 5-sets avoiding both
    assert_eq!(p.circuit_sizes.get(&3), Some(&4));
    assert_eq!(p.circuit_sizes.get(&4), Some(&6));
    assert!(p.circuit_sizes.contains_key(&5));
}

#[test]
fn z5_props() {
    let dir = TempDir::new().unwrap();
    let p = props(&gen(&dir, 5, "binary"));
    assert_eq!(p.rank, 5);
    assert_eq!(p.elements, 11);
    assert_eq!(p.circuits, 47);
    assert_eq!(p.circuit_sizes.get(&4), Some(&10));
    assert!(p.binary);
    assert_eq!(p.three_connected, Some(true));
    assert_eq!(p.spike_tips, ["t"]);

    let text = run_ok(&["props", path_str(&gen(&dir, 5, "binary"))]);
    assert!(text.contains("47"));
}

#[test]
fn good_split_of_z4_is_z5_label_for_label() {
    let dir = TempDir::new().unwrap();
    let z4 = gen(&dir, 4, "binary");
    let z5 = read(&gen(&dir, 5, "binary"));
    let g = GroundSet::spike(4);
    for c in phi_family(4, 4).unwrap().iter() {
        let out = dir.path().join("split.json");
        run_ok(&[
            "essplit",
            path_str(&z4),
            "--x",
            &joined(g.labels_of(c)),
            "--e",
            "t",
            "--relabel",
            "auto",
            "--out",
            path_str(&out),
        ]);
        let f = read(&out);
        assert_eq!(f.ground, z5.ground);
        assert_eq!(f.rep, z5.rep);
        let replayed = f.replay().unwrap().unwrap();
        assert_eq!(replayed.circuits(), f.to_matroid().unwrap().circuits());
    }
}

#[test]
fn tip_only_split_is_not_three_connected() {
    let dir = TempDir::new().unwrap();
    let z4 = gen(&dir, 4, "binary");
    let out = dir.path().join("tip.json");
    run_ok(&[
        "essplit",
        path_str(&z4),
        "--x",
        "t",
        "--e",
        "t",
        "--out",
        path_str(&out),
    ]);
    let p = props(&out);
    assert_eq!((p.rank, p.elements), (5, 11));
    assert_eq!(p.three_connected, Some(false));
    assert!(!p.spike);
}

#[test]
fn essplit_usage_errors() {
    let dir = TempDir::new().unwrap();
    let z4 = gen(&dir, 4, "binary");
    let z = path_str(&z4);
    assert_eq!(
        code(&spikes(&["essplit", z, "--x", "x1,y1", "--e", "t"])),
        2
    );
    assert_eq!(code(&spikes(&["essplit", z, "--x", "x9", "--e", "x9"])), 2);
    assert_eq!(
        code(&spikes(&["essplit", z, "--x", "alpha", "--e", "alpha"])),
        2
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(
        code(&spikes(&[
            "essplit",
            path_str(&missing),
            "--x",
            "t",
            "--e",
            "t"
        ])),
        2
    );
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{\"name\": 3}").unwrap();
    assert_eq!(code(&spikes(&["props", path_str(&junk)])), 2);
}

#[test]
fn relaxing_a_line_of_the_fano_plane() {
    let dir = TempDir::new().unwrap();
    let f7 = gen(&dir, 3, "binary");
    let out = dir.path().join("relaxed.json");
    let line = phi_family(3, 3).unwrap().as_slice()[0];
    run_ok(&[
        "relax",
        path_str(&f7),
        "--circuit",
        &joined(GroundSet::spike(3).labels_of(line)),
        "--out",
        path_str(&out),
    ]);
    let p = props(&out);
    assert!(!p.binary);
    assert!(p.spike);
    assert_eq!(p.circuit_sizes.get(&3), Some(&6));
    assert!(matches!(
        read(&out).rep,
        spikes_cli::format::Rep::Circuits { .. }
    ));

    // splitting needs a binary input
    let o = spikes(&["essplit", path_str(&out), "--x", "t", "--e", "t"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));

    // a 4-circuit of F_7 is not a hyperplane
    let o = spikes(&["relax", path_str(&f7), "--circuit", "x1,y1,x2,y2"]);
    assert_eq!(code(&o), 2);
    let o = spikes(&["relax", path_str(&f7), "--circuit", "x1,x2,x3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn relaxing_every_transversal_line_gives_the_free_spike() {
    for r in [3, 4] {
        let dir = TempDir::new().unwrap();
        let mut cur = gen(&dir, r, "binary");
        let g = GroundSet::spike(r);
        for (i, c) in phi_family(r, 3).unwrap().iter().enumerate() {
            let next = dir.path().join(format!("step{i}.json"));
            run_ok(&[
                "relax",
                path_str(&cur),
                "--circuit",
                &joined(g.labels_of(c)),
                "--out",
                path_str(&next),
            ]);
            assert!(props(&next).spike);
            cur = next;
        }
        let end = read(&cur);
        let free = read(&gen(&dir, r, "free"));
        assert_eq!(end.ground, free.ground);
        assert_eq!(end.rep, free.rep);
        let meta = end.metadata.as_ref().unwrap();
        assert_eq!(meta.steps.len(), 1 + (1 << (r - 1)));
    }
}

#[test]
fn files_round_trip() {
    let dir = TempDir::new().unwrap();
    for (r, mode) in [(3, "binary"), (4, "free"), (5, "binary")] {
        let p = gen(&dir, r, mode);
        let text = std::fs::read_to_string(&p).unwrap();
        let f = MatroidFile::parse(&text).unwrap();
        assert_eq!(f.emit(), text);
        assert_eq!(f.canonical().unwrap(), f);
        let m = f.replay().unwrap().unwrap();
        assert_eq!(m.circuits(), f.to_matroid().unwrap().circuits());
    }
}

#[test]
fn c3_mode_reads_a_circuit_list() {
    let dir = TempDir::new().unwrap();
    let c3 = dir.path().join("c3.json");
    std::fs::write(&c3, r#"[["x1","x2","x3"],["x1","y2","y3"]]"#).unwrap();
    let out = run_ok(&["gen-spike", "--rank", "3", "--c3", path_str(&c3)]);
    let f = MatroidFile::parse(&out).unwrap();
    let m = f.to_matroid().unwrap();
    assert_eq!(m.circuits().iter().filter(|c| c.len() == 3).count(), 5);

    // two transversals sharing two elements break circuit elimination
    std::fs::write(&c3, r#"[["x1","x2","x3"],["x1","x2","y3"]]"#).unwrap();
    assert_eq!(
        code(&spikes(&[
            "gen-spike",
            "--rank",
            "3",
            "--c3",
            path_str(&c3)
        ])),
        2
    );
}

fn verify(dir: &TempDir, suites: &str, jobs: &str) -> (i32, String, String) {
    let report = dir.path().join(format!("{suites}-{jobs}.jsonl"));
    let o = spikes(&[
        "verify",
        "--suites",
        suites,
        "--max-rank",
        "4",
        "--jobs",
        jobs,
        "--report",
        path_str(&report),
    ]);
    (
        code(&o),
        String::from_utf8(o.stdout).unwrap(),
        std::fs::read_to_string(report).unwrap(),
    )
}

#[test]
fn verify_exit_codes_and_reports() {
    let dir = TempDir::new().unwrap();
    let (c, out, report) = verify(&dir, "spike-circuits,phi-parity", "2");
    assert_eq!(c, 0);
    assert_eq!(out.lines().count(), 4);
    assert!(out.lines().all(|l| l.starts_with("PASS")));
    for line in report.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["verdict"], "pass");
        assert!(v.get("elapsed_ms").is_none());
    }

    let (c, out, report) = verify(&dir, "fano-splits", "2");
    assert_eq!(c, 1);
    assert!(out.starts_with("FAIL fano-splits"));
    let v: Value = serde_json::from_str(report.lines().next().unwrap()).unwrap();
    assert_eq!(v["counts"]["predicted_pairs"], 35);
    assert_eq!(v["counts"]["predicted_distinct_x"], 29);

    assert_eq!(code(&spikes(&["verify", "--suites", "nope"])), 2);
    assert_eq!(code(&spikes(&["verify", "--max-rank", "9"])), 2);
}

#[test]
fn verify_reports_do_not_depend_on_jobs() {
    let dir = TempDir::new().unwrap();
    let (c1, _, one) = verify(&dir, "all", "1");
    let (c8, _, eight) = verify(&dir, "all", "8");
    assert_eq!(c1, c8);
    assert_eq!(one, eight);
}
