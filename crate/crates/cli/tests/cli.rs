use std::path::Path;
use std::process::{Command, Output};

fn varinc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varinc"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn entails_reports_countermodel() {
    let dir = tempfile::tempdir().unwrap();
    let o = varinc(
        &[
            "entails",
            "--matrix",
            "wk_pwk.mat",
            "--premises",
            "x,not(x)",
            "--conclusion",
            "y",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "NO\ncountermodel in wk_pwk: x=n, y=0\n");
}

#[test]
fn entails_in_derived_logics() {
    let dir = tempfile::tempdir().unwrap();
    let o = varinc(
        &[
            "entails",
            "--base",
            "b2.mat",
            "--seq",
            "r",
            "--premises",
            "and(x,or(x,y))",
            "--conclusion",
            "x",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "YES\n");

    let o = varinc(
        &[
            "entails",
            "--base",
            "b2.mat",
            "--seq",
            "lr",
            "--premises",
            "x,not(x)",
            "--conclusion",
            "and(x,or(x,y))",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "NO\n");
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["entails", "--matrix", "missing.mat", "--conclusion", "x"][..],
        &["entails", "--matrix", "b2", "--conclusion", "and(x"],
        &[
            "entails",
            "--matrix",
            "b2",
            "--seq",
            "lx",
            "--conclusion",
            "x",
        ],
        &["reproduce", "--figure", "4"],
        &["compare", "--base", "b2", "l", "r", "--fragment", "depth"],
    ] {
        let o = varinc(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn decompose_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = varinc(
        &["decompose", "--matrix", "wk.mat", "--pi", "and(x,or(x,y))"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("is isomorphic to the input"));
    for file in ["wk.dsys", "wk.i0.mat", "wk.i1.mat"] {
        assert!(dir.path().join(file).exists(), "{file}");
    }
    let system = std::fs::read_to_string(dir.path().join("wk.dsys")).unwrap();
    assert!(system.contains("hom i0 i1: 0->n  1->n"));

    let o = varinc(&["validate-system", "--system", "wk.dsys"], dir.path());
    assert_eq!(o.status.code(), Some(0));

    let o = varinc(
        &["sum", "--system", "wk.dsys", "--out", "sum.mat"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let o = varinc(
        &["decompose", "--matrix", "sum.mat", "--out", "again"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("again.dsys").exists());
}

#[test]
fn broken_system_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    varinc(&["decompose", "--matrix", "wk.mat"], dir.path());
    let path = dir.path().join("wk.dsys");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replace("1->n", "1->n\nhom i1 i0: n->0")).unwrap();
    let o = varinc(&["validate-system", "--system", "wk.dsys"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stdout(&o).contains("f_ij only for i <= j"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn partition_check_fails_for_disjunction() {
    let dir = tempfile::tempdir().unwrap();
    let o = varinc(
        &["check-partition", "--matrix", "b2.mat", "--pi", "or(x,y)"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("P5[and]    FAIL"));

    let o = varinc(
        &["check-partition", "--matrix", "wk_pwk", "--mode", "l"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn derive_info_gives_the_normal_form() {
    let dir = tempfile::tempdir().unwrap();
    let o = varinc(
        &["derive-info", "--base", "b2", "--seq", "rlrl"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("canonical: lrl"), "{out}");
    assert!(out.contains("antitheorems: witness {x, not(x)}"), "{out}");

    let o = varinc(
        &["derive-info", "--base", "b2_andor", "--seq", "rlr"],
        dir.path(),
    );
    assert!(stdout(&o).contains("canonical: rl"));
}

#[test]
fn compare_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = varinc(
        &[
            "compare",
            "--base",
            "b2",
            "l",
            "@wk_pwk.mat",
            "--fragment",
            "depth=1;premises=2",
            "--json",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["relation"], "equal");
    assert_eq!(v["a"], "l");

    let o = varinc(
        &[
            "compare",
            "--base",
            "b2",
            "lr",
            "l&r",
            "--fragment",
            "depth=1;premises=2",
        ],
        dir.path(),
    );
    assert!(
        stdout(&o).starts_with("lr vs l&r: strictly below"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn reproduce_exit_status_follows_the_claims() {
    let dir = tempfile::tempdir().unwrap();
    let small = "depth=1;premises=2";
    let o = varinc(
        &["reproduce", "--figure", "1", "--fragment", small],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = varinc(
        &["reproduce", "--figure", "2", "--fragment", small, "--json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let failed: Vec<&str> = v["claims"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["holds"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["rlr strictly below lr&rl"]);
}

#[test]
fn export_bundled_writes_loadable_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = varinc(&["export-bundled", "--dir", "out"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let b2 = dir.path().join("out/b2.mat");
    let o = varinc(
        &[
            "entails",
            "--matrix",
            b2.to_str().unwrap(),
            "--premises",
            "x",
            "--conclusion",
            "or(x,y)",
        ],
        dir.path(),
    );
    assert_eq!(stdout(&o), "YES\n");
    assert!(dir.path().join("out/wk.mat").exists());
    assert!(dir.path().join("out/chain_rlr.mat").exists());
}
