use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rarelogit::cli::{read_dataset, write_dataset};
use rarelogit::rng::stream;
use rarelogit::simulation::{generate_marginal, CovariateLaw};
use rarelogit::Coefficients;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rarelogit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn ok(args: &[&str]) -> PathBuf {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 1);
    PathBuf::from(stdout.trim_end())
}

fn table(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# seed="));
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

fn lookup(rows: &[Vec<String>], key: &str, name: &str) -> f64 {
    rows.iter().find(|r| r[0] == key && r[1] == name).unwrap_or_else(|| panic!("{key}/{name}"))[2].parse().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn sample_data(dir: &TempDir) -> String {
    let data = generate_marginal(5_000, &Coefficients::new(-3.0, vec![1.0, -0.5]), &CovariateLaw::standard_normal(2), &mut stream(1, &[]))
        .unwrap();
    let p = dir.path().join("data.csv");
    write_dataset(&p, &data).unwrap();
    p.to_str().unwrap().to_string()
}

fn out(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn dataset_round_trip_is_exact() {
    let dir = TempDir::new().unwrap();
    let data = generate_marginal(500, &Coefficients::new(-1.0, vec![0.3, 2.0]), &CovariateLaw::standard_normal(2), &mut stream(2, &[]))
        .unwrap();
    let p = dir.path().join("d.csv");
    write_dataset(&p, &data).unwrap();
    assert_eq!(read_dataset(&p).unwrap(), data);
}

#[test]
fn fit_balanced_constant_covariate() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("y,x1\n");
    for i in 0..30 {
        text.push_str(if i < 10 { "1,0\n" } else { "0,0\n" });
    }
    let data = write(&dir, "c.csv", &text);
    let o = out(&dir, "fit.csv");
    let path = ok(&["fit", "--data", &data, "--estimator", "full", "--out", &o]);
    let (header, rows) = table(&path);
    assert_eq!(header, ["section", "name", "value"]);
    assert!((lookup(&rows, "coef", "alpha") - 0.5f64.ln()).abs() < 1e-10);
    assert_eq!(lookup(&rows, "coef", "beta1"), 0.0);
    assert_eq!(lookup(&rows, "diag", "converged"), 1.0);
}

#[test]
fn fit_degenerate_rate_matches_full_bytes() {
    let dir = TempDir::new().unwrap();
    let data = sample_data(&dir);
    let a = ok(&["fit", "--data", &data, "--estimator", "full", "--seed", "5", "--out", &out(&dir, "a.csv")]);
    let b = ok(&["fit", "--data", &data, "--estimator", "under-bc", "--pi0", "1.0", "--seed", "5", "--out", &out(&dir, "b.csv")]);
    let c = ok(&["fit", "--data", &data, "--estimator", "over-bc", "--lambda", "0", "--seed", "5", "--out", &out(&dir, "c.csv")]);
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert_eq!(bytes, std::fs::read(&c).unwrap());
}

#[test]
fn fit_is_deterministic_and_seed_sensitive() {
    let dir = TempDir::new().unwrap();
    let data = sample_data(&dir);
    let args = |o: &str, seed: &str| {
        ok(&["fit", "--data", &data, "--estimator", "under-w", "--pi0", "0.1", "--seed", seed, "--out", &out(&dir, o)])
    };
    let a = std::fs::read(args("a.csv", "7")).unwrap();
    assert_eq!(a, std::fs::read(args("b.csv", "7")).unwrap());
    assert_ne!(a, std::fs::read(args("c.csv", "8")).unwrap());
}

#[test]
fn fit_variance_report_uses_supplied_constants() {
    let dir = TempDir::new().unwrap();
    let data = sample_data(&dir);
    let p = ok(&[
        "fit", "--data", &data, "--estimator", "under-bc", "--pi0", "0.2", "--alpha-t", "-3", "--out", &out(&dir, "v.csv"),
    ]);
    let (_, rows) = table(&p);
    assert!((lookup(&rows, "variance", "c") - (-3.0f64).exp() / 0.2).abs() < 1e-15);
    assert!(lookup(&rows, "variance", "v_0_0") > 0.0);
    let p = ok(&["fit", "--data", &data, "--estimator", "over-w", "--lambda", "1", "--c", "0", "--out", &out(&dir, "w.csv")]);
    let (_, rows) = table(&p);
    assert_eq!(lookup(&rows, "variance", "factor"), 1.25);
}

#[test]
fn exit_codes_separate_input_and_numeric_failures() {
    let dir = TempDir::new().unwrap();
    let o = out(&dir, "o.csv");
    let missing = run(&["fit", "--data", "/nonexistent/x.csv", "--out", &o]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(missing.stdout.is_empty());
    let bad_header = write(&dir, "h.csv", "label,x1\n1,0\n0,1\n");
    assert_eq!(run(&["fit", "--data", &bad_header, "--out", &o]).status.code(), Some(2));
    let bad_label = write(&dir, "l.csv", "y,x1\n2,0\n0,1\n");
    assert_eq!(run(&["fit", "--data", &bad_label, "--out", &o]).status.code(), Some(2));
    let bad_number = write(&dir, "n.csv", "y,x1\n1,abc\n0,1\n");
    assert_eq!(run(&["fit", "--data", &bad_number, "--out", &o]).status.code(), Some(2));
    let data = write(&dir, "ok.csv", "y,x1\n1,0.3\n0,1.2\n1,-0.4\n0,0.1\n");
    assert_eq!(run(&["fit", "--data", &data, "--estimator", "under-w", "--out", &o]).status.code(), Some(2));
    assert_eq!(run(&["fit", "--data", &data, "--estimator", "under-w", "--pi0", "1.5", "--out", &o]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));

    let one_class = write(&dir, "one.csv", "y,x1\n1,0.3\n1,1.2\n");
    let r = run(&["fit", "--data", &one_class, "--out", &o]);
    assert_eq!(r.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&r.stderr).contains("AllOneClass"));
    let separated = write(&dir, "sep.csv", "y,x1\n1,1\n1,2\n1,3\n0,-1\n0,-2\n0,-3\n");
    let r = run(&["fit", "--data", &separated, "--out", &o]);
    assert_eq!(r.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&r.stderr).contains("Separation"));
}

#[test]
fn table1_expected_case_count_and_shape() {
    let dir = TempDir::new().unwrap();
    let p = ok(&["table1", "--n", "1000", "--rate", "0.02", "--replications", "1", "--seed", "3", "--out", &out(&dir, "t.csv")]);
    let (header, rows) = table(&p);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].len(), header.len());
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(rows[0][col("expected_n1")].parse::<f64>().unwrap(), 20.0);
    let e_a: f64 = rows[0][col("n1_emse_alpha")].parse().unwrap();
    let n_a: f64 = rows[0][col("n_emse_alpha")].parse().unwrap();
    assert!((n_a / e_a - 50.0).abs() < 1e-9);
    assert_eq!(run(&["table1", "--n", "1000,2000", "--rate", "0.02", "--out", &out(&dir, "x.csv")]).status.code(), Some(2));
}

#[test]
fn sweep_degenerate_rates_equal_the_baseline() {
    let dir = TempDir::new().unwrap();
    let p = ok(&[
        "sweep", "--n", "5000", "--alpha", "-3", "--pi0", "0.1,1.0", "--lambda", "0,2", "--replications", "4", "--seed", "9",
        "--out", &out(&dir, "s.csv"),
    ]);
    let (header, rows) = table(&p);
    assert_eq!(rows.len(), 1 + 4 + 4);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let base = &rows[0];
    assert_eq!(base[col("estimator")], "full");
    for r in &rows {
        let rate: Option<f64> = r[col("rate")].parse().ok();
        if rate == Some(1.0) && r[col("scheme")] == "under" || rate == Some(0.0) && r[col("scheme")] == "over" {
            for c in ["emse_x1e3", "emse_alpha_x1e3", "emse_beta_x1e3"] {
                assert_eq!(r[col(c)], base[col(c)], "{r:?}");
            }
        }
    }
}

#[test]
fn variance_command_values() {
    let dir = TempDir::new().unwrap();
    let p = ok(&["variance", "--kind", "ow", "--beta", "1", "--lambda", "1", "--m", "1000", "--out", &out(&dir, "ow.csv")]);
    let (_, rows) = table(&p);
    assert_eq!(lookup(&rows, "over-w", "factor"), 1.25);

    let p = ok(&["variance", "--kind", "full", "--beta", "1", "--out", &out(&dir, "f.csv")]);
    let (_, rows) = table(&p);
    let want = [[2.0, -1.0], [-1.0, 1.0]];
    for i in 0..2 {
        for j in 0..2 {
            let v = lookup(&rows, "full", &format!("v_{i}_{j}"));
            assert!((v - want[i][j]).abs() <= 0.01 * want[i][j].abs(), "v_{i}_{j} = {v}");
        }
    }

    let q = ok(&["variance", "--kind", "under-w", "--c", "0", "--beta", "1", "--out", &out(&dir, "w.csv")]);
    let (_, wrows) = table(&q);
    for name in ["v_0_0", "v_0_1", "v_1_0", "v_1_1"] {
        assert_eq!(lookup(&wrows, "under-w", name), lookup(&rows, "full", name));
    }

    let p = ok(&[
        "variance", "--beta", "1", "--alpha-t", "-6", "--pi0", "0.01", "--lambda", "53.6", "--m", "20000", "--out",
        &out(&dir, "all.csv"),
    ]);
    let (_, rows) = table(&p);
    assert!((lookup(&rows, "under-w", "c") - 0.247_875_217_666_635_84).abs() < 1e-15);
    assert!((lookup(&rows, "over-bc", "c_o") - 0.132_861_116_669_316_8).abs() < 1e-15);

    assert_eq!(run(&["variance", "--kind", "under-bc", "--beta", "1", "--out", &out(&dir, "x.csv")]).status.code(), Some(2));
}

#[test]
fn singular_covariates_exit_numeric_with_condition() {
    let dir = TempDir::new().unwrap();
    let xs = write(&dir, "xs.csv", "x1\n1\n1\n1\n1\n");
    let r = run(&["variance", "--kind", "full", "--beta", "1", "--covariates", &xs, "--out", &out(&dir, "o.csv")]);
    assert_eq!(r.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&r.stderr).contains("condition"));
}

#[test]
fn simulation_commands_are_thread_count_invariant() {
    let dir = TempDir::new().unwrap();
    let sweep = |o: &str, threads: &str| {
        std::fs::read(ok(&[
            "sweep", "--n", "3000", "--alpha", "-3", "--pi0", "0.2", "--lambda", "1.5", "--replications", "6", "--seed", "4",
            "--threads", threads, "--out", &out(&dir, o),
        ]))
        .unwrap()
    };
    let a = sweep("a.csv", "1");
    assert_eq!(a, sweep("b.csv", "3"));
    assert_eq!(a, sweep("c.csv", "3"));
}
