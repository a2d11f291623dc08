use std::path::Path;
use std::process::Command;

fn rkmor(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rkmor")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const DIAGONAL: &str = r#"
[system]
source = "generate"
kind = "diagonal"
n = 2

[grid]
alpha_e = -2.0
beta_e = 2.0
k_e = 25

[[algorithm]]
name = "arksm"
l_max = 2
"#;

fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn minimal_run_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), DIAGONAL);
    let out = dir.path().join("out");
    let o = rkmor(&["run", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&out.join("curve_arksm.csv"));
    assert_eq!(rows.len(), 51);
    for r in &rows {
        assert!(r[3] <= 1e-8 && r[4] <= 1e-8, "{r:?}");
    }
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.starts_with("algorithm,order,max_error,solves,seconds\narksm,1,"));
    assert!(summary.lines().last().unwrap().starts_with("arksm,2,"));
    assert!(out.join("manifest.toml").exists());
}

#[test]
fn unknown_algorithm_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &DIAGONAL.replace("\"arksm\"", "\"aaa\""));
    let o = rkmor(&["run", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown algorithm"));
}

#[test]
fn missing_config_and_bad_flags_are_config_errors() {
    assert_eq!(rkmor(&["run", "/nonexistent/run.toml"]).status.code(), Some(2));
    assert_eq!(rkmor(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn singular_pencil_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let mm = |name: &str, body: &str| std::fs::write(dir.path().join(name), body).unwrap();
    mm("A.mtx", "%%MatrixMarket matrix array real general\n2 2\n0\n0\n0\n-1\n");
    mm("b.mtx", "%%MatrixMarket matrix array real general\n2 1\n1\n1\n");
    mm("c.mtx", "%%MatrixMarket matrix array real general\n2 1\n1\n1\n");
    let body = DIAGONAL.replace(
        "source = \"generate\"\nkind = \"diagonal\"\nn = 2",
        "source = \"files\"\na = \"A.mtx\"\nb = \"b.mtx\"\nc = \"c.mtx\"",
    );
    let cfg = write_config(dir.path(), &body);
    let o = rkmor(&["run", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("arksm"));
}

#[test]
fn curve_rows_match_grid_size() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"
seed = 3
[system]
source = "generate"
kind = "random_stable"
n = 30

[grid]
alpha_e = -1.0
beta_e = 3.0
k_e = 40

[[algorithm]]
name = "two_sided"
option = 3
l_max = 6

[[algorithm]]
name = "irka"
l_max = 4
"#;
    let cfg = write_config(dir.path(), body);
    let out = dir.path().join("o");
    let o = rkmor(&["run", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["two_sided_o3", "irka"] {
        let rows = csv_rows(&out.join(format!("curve_{name}.csv")));
        // a stable system has no pole on the imaginary axis
        assert_eq!(rows.len(), 81);
        for r in rows {
            assert!((r[3] - r[4]).abs() <= 1e-7 * (1.0 + r[1]), "{name}: {r:?}");
        }
    }
}

#[test]
fn identical_config_and_seed_give_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"
[system]
source = "generate"
kind = "random_descriptor"
n = 40

[grid]
alpha_e = -1.0
beta_e = 3.0
k_e = 30

[[algorithm]]
name = "arksm"
l_max = 5

[[algorithm]]
name = "two_sided_o2"
l_max = 5
"#;
    let cfg = write_config(dir.path(), body);
    let run = |tag: &str, seed: &str| {
        let out = dir.path().join(tag);
        let o = rkmor(&["run", &cfg, "--seed", seed, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let read = |f: &str| std::fs::read(out.join(f)).unwrap();
        (read("summary.csv"), read("shifts.csv"))
    };
    let a = run("a", "11");
    let b = run("b", "11");
    let c = run("c", "12");
    assert_eq!(a, b);
    assert_ne!(a.1, c.1);
}

#[test]
fn verify_passes_and_mutation_fails() {
    let o = rkmor(&["verify", "--n", "16", "--seeds", "0,1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("PASS central-equivalence n=16 seed=1 mode=descriptor/two_sided"));
    let o = rkmor(&["verify", "--n", "16", "--seeds", "0", "--mutate"]);
    assert_eq!(o.status.code(), Some(1));
}
