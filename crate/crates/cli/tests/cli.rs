use std::path::PathBuf;
use std::process::{Command, Output};

use dgc_core::format::{export, load, BuildOptions};

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn dgc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgc"))
        .args(args)
        .env_remove("DGC_TRUNCATION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn shipped_examples_are_canonical() {
    for f in ["circle.dgc", "sphere2.dgc", "sphere3.dgc", "torus.dgc", "hopf.dgc", "maps.dgc", "broken_mc.dgc"] {
        let text = std::fs::read_to_string(example(f)).unwrap();
        let ws = load(&text, &BuildOptions::default()).unwrap();
        assert_eq!(export(&ws).to_text(), text, "{f}");
    }
}

#[test]
fn sphere_homology_table() {
    let o = dgc(&["homology", example("sphere2.dgc").to_str().unwrap(), "--complex", "S2", "--degrees", "0..8"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "complex  degree  group");
    assert_eq!(lines[1], "S2       0       Z");
    assert_eq!(lines.len(), 10);
    assert!(lines[2..].iter().all(|l| l.ends_with(" 0")));
}

#[test]
fn hopf_second_page() {
    let f = example("hopf.dgc");
    let o = dgc(&["--format", "jsonl", "ss", f.to_str().unwrap(), "--complex", "HOPF", "--page", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let entries: Vec<&str> = out.lines().filter(|l| l.contains("\"record\":\"entry\"")).collect();
    assert_eq!(entries.len(), 4);
    assert!(entries.iter().all(|l| l.contains("\"group\":\"Z\"")));
    assert!(out.contains(r#"{"complex":"HOPF","from":"(2, 0)","matrix":"[[1]]","page":2,"record":"arrow","status":"iso","to":"(0, 1)"}"#));
}

#[test]
fn broken_cocycle_fails_validation_with_the_pair() {
    let o = dgc(&["validate", example("broken_mc.dgc").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.contains("maurer-cartan") && l.contains("(W, m)")), "{out}");
}

#[test]
fn usage_errors_exit_two() {
    let f = example("sphere2.dgc");
    let f = f.to_str().unwrap();
    assert_eq!(dgc(&["homology", f, "--complex", "S2"]).status.code(), Some(2));
    assert_eq!(dgc(&["homology", f, "--complex", "S9", "--degrees", "0..1"]).status.code(), Some(2));
    assert_eq!(dgc(&["homology", f, "--complex", "S2", "--degrees", "3..1"]).status.code(), Some(2));
    assert_eq!(dgc(&["validate", "/nonexistent.dgc"]).status.code(), Some(2));
    let bad = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("bad_rational.dgc");
    std::fs::write(&bad, "[local_system]\nname = L\nover = A\nrho = t:3/\n").unwrap();
    let o = dgc(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":3:"));
}

#[test]
fn maps_homotopies_and_criterion() {
    let f = example("maps.dgc");
    let f = f.to_str().unwrap();
    let o = dgc(&["map", f, "--name", "nu1", "--apply", "1@M"]);
    assert!(stdout(&o).contains("-3*x*x@m + 1@M"));
    let o = dgc(&["map", f, "--name", "nu1", "--check"]);
    assert!(o.status.success());
    let o = dgc(&["homotopy", f, "--name", "H", "--check"]);
    assert!(o.status.success());
    let o = dgc(&["--format", "jsonl", "criterion", f, "--a", "zero", "--b", "id", "--degrees", "0..0"]);
    assert_eq!(
        stdout(&o),
        "{\"a\":\"zero\",\"b\":\"id\",\"degree\":0,\"holds\":true,\"record\":\"criterion\",\"witness\":\"[1]\"}\n"
    );
    let o = dgc(&["--format", "jsonl", "criterion", f, "--a", "id", "--b", "zero", "--degrees", "0..0", "--mode", "q"]);
    assert!(stdout(&o).contains("\"holds\":false"));
}

#[test]
fn spectral_invariant_of_the_sphere_class() {
    let f = example("sphere2.dgc");
    let o = dgc(&["spectral-invariant", f.to_str().unwrap(), "--complex", "S2", "--class", "x@m", "--level", "1/2"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with(" 1"));
}

#[test]
fn truncation_comes_from_the_environment() {
    let f = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("untruncated.dgc");
    std::fs::write(
        &f,
        "[dga]\nname = P\nkind = free\ngenerators = x:1\n\n[module]\nname = F\nover = P\nkind = regular\n\n[complex]\nname = S2\nmodule = F\ngenerators = m:0@0, M:2@1\ncocycle = M,m:x\n",
    )
    .unwrap();
    let f = f.to_str().unwrap();
    let run = |t: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_dgc"));
        c.args(["homology", f, "--complex", "S2", "--degrees", "0..8"]);
        match t {
            Some(t) => c.env("DGC_TRUNCATION", t),
            None => c.env_remove("DGC_TRUNCATION"),
        };
        c.output().unwrap()
    };
    assert!(run(None).status.success());
    assert_eq!(run(Some("4")).status.code(), Some(1));
    assert_eq!(run(Some("often")).status.code(), Some(2));
}

#[test]
fn jsonl_is_byte_stable() {
    let f = example("torus.dgc");
    let args = ["--format", "jsonl", "homology", f.to_str().unwrap(), "--complex", "T2", "--degrees", "0..3"];
    let first = dgc(&args).stdout;
    for _ in 0..3 {
        assert_eq!(dgc(&args).stdout, first);
    }
}
