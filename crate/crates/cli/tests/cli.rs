use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_setmodal"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Writes `text` to a per-test file in the temporary directory.
fn temp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("setmodal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const GRID_2X2: &str = "structure\ndomain 4\nrel R1/2 = {(0,2),(1,3)}\nrel R2/2 = {(0,1),(2,3)}\n";

#[test]
fn classify_reports_levels() {
    let o = run(&["classify", "EX P. !(P)", "--kernel", "H"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "Sigma level 1\nPi level 2\n");
    let o = run(&["classify", "<R>(EX P. P)", "--kernel", "H"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("Sigma level none"));
}

#[test]
fn check_exit_codes() {
    let g = temp("grid.struct", GRID_2X2);
    let g = g.to_str().unwrap();
    let gf = run(&["gridformula"]);
    let f = temp("grid.formula", &stdout(&gf));
    let o = run(&["check", g, f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "true");
    let o = run(&["check", g, "[*]<R1>true"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["check", g, "<R1>("]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["check", "/nonexistent/file", "true"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gridformula_lists_six_properties() {
    let o = run(&["gridformula", "--list"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("# (")).count(), 6);
}

#[test]
fn encode_prints_structure_and_correspondence() {
    let s = temp("edge.struct", "structure\ndomain 2\nrel R/2 = {(0,1)}\n");
    let o = run(&["encode", "mu3", s.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("structure\ndomain 2\n"), "{out}");
    assert!(out.contains("# correspondence\n# 0 = copy 1 of 0"), "{out}");
}

#[test]
fn image_of_mu5_is_an_error() {
    assert!(run(&["image", "mu3"]).status.success());
    assert_eq!(run(&["image", "mu5"]).status.code(), Some(2));
}

#[test]
fn translate_round() {
    let o = run(&["translate", "std", "<R>P"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("E "), "{}", stdout(&o));
    let o = run(&["translate", "forward", "--encoding", "mu3", "<*><~R>true"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn tiling_run_and_compile() {
    let ts = temp(
        "all.ts",
        "ts t=0\nstates s\ntile # # / # :s\ntile # # / :s :s\ntile # # / :s #\ntile # :s / # :s\n\
         tile :s :s / :s :s\ntile :s # / :s #\ntile # :s / # #\ntile :s :s / # #\ntile :s # / # #\n",
    );
    let g = temp("grid-ts.struct", GRID_2X2);
    let o = run(&["ts", "run", ts.to_str().unwrap(), g.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "accepted\nrun s s s s\n");
    let o = run(&["ts", "compile", ts.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("(EX X1. (EX YT. (EX YL."));
}

#[test]
fn enumerate_counts() {
    let o = run(&["enum", "DIGRAPH[0,1]", "2", "--dedup"]);
    assert!(o.status.success());
    // One element: loop or not; two elements: 10 classes.
    assert!(stdout(&o).ends_with("# 12 structures\n"), "{}", stdout(&o));
}

#[test]
fn verify_kit_small() {
    let o = run(&["verify", "kit", "mu3", "--max", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).trim_end().ends_with("PASS"));
}

#[test]
fn figurative_commands() {
    let l = temp("l.fam", "family\nuniverse 0 1\nmember 0\n");
    let m = temp("m.fam", "family\nuniverse 10 11 12\nmember 10 12\n");
    let mu = temp("mu.inj", "injection\n0 -> 10\n1 -> 11\n");
    let args = |cmd: &str| run(&["fig", cmd, l.to_str().unwrap(), m.to_str().unwrap(), mu.to_str().unwrap()]);
    assert!(args("forward").status.success());
    assert!(args("equal").status.success());
    let l2 = temp("l2.fam", "family\nuniverse 0 1\nmember 1\n");
    let o = run(&["fig", "forward", l2.to_str().unwrap(), m.to_str().unwrap(), mu.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&[
        "fig",
        "lemma5",
        l.to_str().unwrap(),
        l.to_str().unwrap(),
        m.to_str().unwrap(),
        m.to_str().unwrap(),
        mu.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("inapplicable"), "{}", stdout(&o));
}
