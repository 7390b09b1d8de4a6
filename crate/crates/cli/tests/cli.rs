use std::path::Path;
use std::process::{Command, Output};

fn matchgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matchgame"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn gen(dir: &Path, class: &str, seed: &str) -> std::path::PathBuf {
    let out = dir.join(format!("{class}-{seed}.json"));
    let o = matchgame(&["gen", "--class", class, "--men", "3", "--women", "3", "--seed", seed, "--out", path(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn example_command_matches() {
    let o = matchgame(&["example"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("ok\t")), "{text}");
    assert!(text.contains("propose-dispose partners\texpected=[2, 0, 1]"));
}

#[test]
fn gen_is_byte_identical_for_a_seed() {
    let a = matchgame(&["gen", "--class", "repeated", "--seed", "11"]);
    let b = matchgame(&["gen", "--class", "repeated", "--seed", "11"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("\"generator\": \"matchgame-gen/1\""));
    assert_ne!(matchgame(&["gen", "--class", "repeated", "--seed", "12"]).stdout, text.as_bytes());
}

#[test]
fn solve_verify_replay_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for class in ["zero_sum", "strictly_competitive", "repeated", "linear_transfer"] {
        let inst = gen(dir.path(), class, "3");
        let prof = dir.path().join(format!("{class}-profile.json"));
        let trace = dir.path().join(format!("{class}-trace.json"));
        let o = matchgame(&["solve", path(&inst), "--order", "2,1,0", "--out", path(&prof), "--trace", path(&trace)]);
        assert_eq!(code(&o), 0, "{class}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(code(&matchgame(&["verify", path(&inst), path(&prof)])), 0, "{class}");
        let r = matchgame(&["replay", path(&inst), path(&trace), "--expect", path(&prof)]);
        assert_eq!(code(&r), 0, "{class}: {}", String::from_utf8_lossy(&r.stderr));
    }
}

#[test]
fn unstable_profile_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("t.json");
    std::fs::write(
        &inst,
        r#"{"format": "matchgame-instance/1", "class": "linear_transfer", "men": 1, "women": 1,
            "epsilon": 1, "irp_men": [0], "irp_women": [0], "couples": [[{"a": 5, "b": 5}]]}"#,
    )
    .unwrap();
    let prof = dir.path().join("p.json");
    std::fs::write(&prof, r#"{"format": "matchgame-profile/1", "couples": []}"#).unwrap();
    let o = matchgame(&["verify", path(&inst), path(&prof)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("\"externally_stable\": false"));
}

#[test]
fn malformed_input_exits_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("bad.json");
    std::fs::write(
        &inst,
        "{\n  \"format\": \"matchgame-instance/1\",\n  \"class\": \"repeated\",\n  \"men\": 1, \"women\": 1, \"epsilon\": 1,\n  \"irp_men\": [0], \"irp_women\": [0],\n  \"couples\": [[{\"a\": [[0.5]], \"b\": [[1]]}]]\n}\n",
    )
    .unwrap();
    let o = matchgame(&["solve", path(&inst)]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 6 column"), "{err}");

    let missing = dir.path().join("absent.json");
    assert_eq!(code(&matchgame(&["solve", path(&missing)])), 2);
}

#[test]
fn contract_violation_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen(dir.path(), "zero_sum", "5");
    let o = matchgame(&["solve", path(&inst), "--order", "0,0,1"]);
    assert_eq!(code(&o), 3);

    let sc = dir.path().join("sc.json");
    std::fs::write(
        &sc,
        r#"{"format": "matchgame-instance/1", "class": "strictly_competitive", "men": 1, "women": 1,
            "epsilon": 1, "irp_men": [0], "irp_women": [0],
            "couples": [[{"a": [[1, 0]], "b": [[1, 0]]}]]}"#,
    )
    .unwrap();
    assert_eq!(code(&matchgame(&["solve", path(&sc)])), 3);
}

#[test]
fn bench_reports_caps() {
    let o = matchgame(&["bench", "--class", "zero_sum", "--eps-list", "0.25", "--seeds", "50"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split('\t').collect();
    let row: Vec<&str> = lines.next().unwrap().split('\t').collect();
    let col = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    assert_eq!(col("class"), "zero_sum");
    assert_eq!(col("seeds"), "50");
    assert_eq!(col("over_total_cap"), "0");
    assert_eq!(col("over_sweep_cap"), "0");
    // Seed 19 has four women and needs more than ⌈V^max/ε⌉ proposals.
    assert_eq!(col("over_iter_cap"), "1");
}
