use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcenter")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

/// Data rows of a CSV document as numbers (header skipped, blank cells as NaN).
fn table(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap_or(f64::NAN)).collect())
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn eigen_iris_shows_interlacing() {
    let out = ok(&["eigen", "--dataset", "iris", "--kernel", "linear"]);
    assert_eq!(out.lines().next(), Some("index,lambda,lambda_c"));
    let rows = table(&out);
    assert_eq!(rows.len(), 150);
    let l1 = rows[0][1];
    for j in 0..149 {
        assert!(rows[j + 1][1] <= rows[j][2] + 1e-8 * l1);
        assert!(rows[j][2] <= rows[j][1] + 1e-8 * l1);
    }
}

#[test]
fn eigen_banana_json_leading_values() {
    let out = ok(&["eigen", "--dataset", "banana", "--kernel", "gaussian:0.5", "--seed", "7", "-m", "5", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["kernel"], "gaussian:0.5");
    assert_eq!(v["n"], 200);
    let raw = v["raw"].as_array().unwrap();
    let cen = v["centered"].as_array().unwrap();
    assert_eq!(raw.len(), 5);
    let (l1, l2, lc1) = (raw[0].as_f64().unwrap(), raw[1].as_f64().unwrap(), cen[0].as_f64().unwrap());
    assert!(l2 <= lc1 && lc1 <= l1);
}

#[test]
fn verify_iris_passes() {
    let o = run(&["verify", "--dataset", "iris"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 24);
    assert!(checks.iter().all(|c| c["passed"] == true));
    assert!(v["proportions"]["gamma"].is_number());
}

#[test]
fn verify_forced_failure_exits_one() {
    let o = run(&["verify", "--dataset", "iris", "--tol", "interlacing=-1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("interlacing"));
    let failing: Vec<String> = stdout(&o).lines().filter(|l| l.ends_with(",false")).map(String::from).collect();
    assert_eq!(failing.len(), 1);
    assert!(failing[0].starts_with("interlacing,fail,"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "x.csv", "1,2\n3,4\n");
    let bad_sum = write(dir.path(), "w.csv", "0.5\n0.4\n");
    let short = write(dir.path(), "w3.csv", "1\n");
    let ragged = write(dir.path(), "r.csv", "1,2\n3\n");
    let text = write(dir.path(), "t.csv", "1,2\n3,abc\n");
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["verify", "--input", &data, "--centering", "weighted", "--weights", &bad_sum], "sum"),
        (vec!["verify", "--input", &data, "--centering", "weighted", "--weights", &short], "weights"),
        (vec!["verify", "--input", &data, "--centering", "weighted"], "--weights"),
        (vec!["verify", "--dataset", "iris", "--tol", "nonsense=1"], "nonsense"),
        (vec!["eigen", "--input", "/definitely/missing.csv"], "missing.csv"),
        (vec!["eigen", "--input", &ragged], "row 2"),
        (vec!["eigen", "--input", &text], "abc"),
        (vec!["eigen"], "no input"),
        (vec!["eigen", "--dataset", "iris", "--input", &data], "not both"),
        (vec!["eigen", "--dataset", "iris", "--kernel", "gaussian:-1"], "bandwidth"),
        (vec!["bounds", "--dataset", "iris", "--centering", "none"], "centered"),
        (vec!["kpca", "--dataset", "iris", "-m", "2", "--grid", "10"], "2-D"),
        (vec!["kpca", "--dataset", "iris", "-m", "5"], "rank"),
    ];
    for (args, needle) in cases {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(needle), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn bounds_iris_closes_at_n() {
    let rows = table(&ok(&["bounds", "--dataset", "iris"]));
    assert_eq!(rows.len(), 150);
    let first = &rows[0];
    assert!(first[1] <= first[2]);
    let last = &rows[149];
    assert!((last[1] - last[2]).abs() <= 1e-8 * last[2]);
}

#[test]
fn bounds_toy_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "toy.csv", "a,b\n0,1\n2,0\n1,3\n");
    let out = ok(&["bounds", "--input", &data]);
    assert!(out.starts_with("t,cum_dprime,cum_lambda_c"));
    let rows = table(&out);
    assert_eq!(rows.len(), 3);
    for (t, r) in rows.iter().enumerate() {
        assert_eq!(r[0], (t + 1) as f64);
        assert!(r[1] <= r[2] + 1e-9);
    }
    assert!(rows.windows(2).all(|w| w[1][2] >= w[0][2] - 1e-12));
}

#[test]
fn mds_from_distance_file() {
    let dir = tempfile::tempdir().unwrap();
    let pts = [(0.0, 0.0), (3.0, 0.0), (0.0, 4.0), (1.0, 1.0), (-2.0, 0.5)];
    let mut text = String::new();
    for a in &pts {
        let row: Vec<String> = pts
            .iter()
            .map(|b: &(f64, f64)| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt().to_string())
            .collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    let d = write(dir.path(), "d.csv", &text);
    let o = run(&["mds", "--distances", &d, "-m", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("round-trip error"));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("sample,x1,x2"));
    let emb = table(&out);
    assert_eq!(emb.len(), 5);
    for i in 0..5 {
        for j in 0..5 {
            let e = ((emb[i][1] - emb[j][1]).powi(2) + (emb[i][2] - emb[j][2]).powi(2)).sqrt();
            let t = ((pts[i].0 - pts[j].0).powi(2) + (pts[i].1 - pts[j].1).powi(2)).sqrt();
            assert!((e - t).abs() <= 1e-7 * 5.0);
        }
    }
}

#[test]
fn mds_non_euclidean_reports_discarded_mass() {
    let dir = tempfile::tempdir().unwrap();
    // d(0,3) far exceeds the two-step path through 1 and 2.
    let d = write(dir.path(), "d.csv", "0,1,2,5\n1,0,1,2\n2,1,0,1\n5,2,1,0\n");
    let v: Value = serde_json::from_str(&ok(&["mds", "--distances", &d, "-m", "3", "--format", "json"])).unwrap();
    assert!(v["discarded_negative_mass"].as_f64().unwrap() > 0.0);
    let bad = write(dir.path(), "bad.csv", "0,1\n2,0\n");
    assert_eq!(run(&["mds", "--distances", &bad]).status.code(), Some(2));
}

#[test]
fn keca_banana_selection() {
    let out = ok(&["keca", "--dataset", "banana", "--kernel", "gaussian:0.5", "-m", "3"]);
    assert_eq!(out.lines().next(), Some("index,lambda,ones_overlap,term,selected_rank"));
    let lines: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(lines.len(), 200);
    let mut selected: Vec<(usize, f64)> = lines
        .iter()
        .filter_map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (!f[4].is_empty()).then(|| (f[4].parse().unwrap(), f[3].parse().unwrap()))
        })
        .collect();
    selected.sort_by_key(|s| s.0);
    assert_eq!(selected.iter().map(|s| s.0).collect::<Vec<_>>(), vec![1, 2, 3]);
    assert!(selected.windows(2).all(|w| w[0].1 >= w[1].1));
    let v: Value = serde_json::from_str(&ok(&["keca", "--dataset", "banana", "--kernel", "gaussian:0.5", "--format", "json"])).unwrap();
    assert_eq!(v["null_density"], false);
}

#[test]
fn keca_on_centered_matrix_warns() {
    let o = run(&["keca", "--dataset", "iris", "--centering", "mean", "-m", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["null_density"], true);
}

#[test]
fn kpca_grid_has_both_variants() {
    let out = ok(&["kpca", "--dataset", "banana", "--kernel", "gaussian:0.5", "-m", "5", "--grid", "12"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "variant,component,ix,iy,x,y,value");
    assert_eq!(lines.len(), 1 + 2 * 5 * 144);
    assert!(lines[1].starts_with("centered,1,0,0,"));
    assert!(lines.iter().any(|l| l.starts_with("noncentered,5,11,11,")));
}

#[test]
fn kpca_training_scores() {
    let out = ok(&["kpca", "--dataset", "iris", "-m", "2"]);
    assert_eq!(out.lines().next(), Some("sample,variant,c1,c2"));
    assert_eq!(out.lines().count(), 1 + 2 * 150);
    let v: Value = serde_json::from_str(&ok(&["kpca", "--dataset", "iris", "-m", "2", "--format", "json"])).unwrap();
    assert_eq!(v[0]["variant"], "centered");
    assert_eq!(v[1]["variant"], "noncentered");
    assert_eq!(v[0]["scores"].as_array().unwrap().len(), 150);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["banana-gen", "--n", "50", "--seed", "3"],
        vec!["verify", "--dataset", "banana", "--n", "60", "--kernel", "gaussian:0.5"],
        vec!["kpca", "--dataset", "banana", "--n", "40", "--kernel", "gaussian:0.5", "--grid", "5", "--format", "json"],
    ] {
        let a = dir.path().join("a.out");
        let b = dir.path().join("b.out");
        for p in [&a, &b] {
            let mut full = args.clone();
            full.extend(["--output", p.to_str().unwrap()]);
            assert_eq!(run(&full).status.code(), Some(0), "{full:?}");
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap(), "{args:?}");
        assert_eq!(fs::read(&a).unwrap(), run(&args).stdout, "{args:?}");
    }
}

#[test]
fn banana_gen_round_trips_through_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.csv");
    let p = path.to_str().unwrap();
    ok(&["banana-gen", "--n", "30", "--seed", "9", "--output", p]);
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("x1,x2"));
    let rows = table(&text);
    assert_eq!(rows.len(), 30);
    assert!(rows.iter().all(|r| (-1.0..=1.0).contains(&r[0])));
    let from_file = ok(&["eigen", "--input", p, "--kernel", "gaussian:0.5"]);
    let builtin = ok(&["eigen", "--dataset", "banana", "--n", "30", "--seed", "9", "--kernel", "gaussian:0.5"]);
    assert_eq!(from_file, builtin);
}

#[test]
fn weighted_centering_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "x.csv", "0,1\n2,0\n1,3\n4,4\n");
    let w = write(dir.path(), "w.csv", "0.1,0.2,0.3,0.4\n");
    let o = run(&["verify", "--input", &data, "--centering", "weighted", "--weights", &w]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["centering"], "weighted");
}

#[test]
fn help_documents_kernel_grammar() {
    let out = ok(&["eigen", "--help"]);
    assert!(out.contains("gaussian:SIGMA"));
    assert!(out.contains("poly:C:P"));
}
