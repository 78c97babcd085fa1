use std::fs;
use std::process::{Command, Output};

fn blendkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blendkit"))
        .args(args)
        .env_remove("BLENDKIT_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn order_golden() {
    let o = blendkit(&["order", "--m", "3,6,12", "--n", "2,4,8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "p=9\n");
}

#[test]
fn dim_golden() {
    let o = blendkit(&["dim", "--m", "1,3,6", "--n", "1,3,4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "dim=24\nlower_set=24\n");
}

#[test]
fn serendipity_table() {
    let o = blendkit(&["serendipity"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "m=[1,2] n=[1,2] dim=8 p=3\n\
         m=[1,3] n=[1,3] dim=12 p=4\n\
         m=[1,2,4] n=[1,2,4] dim=17 p=5\n\
         m=[2,4] n=[2,4] dim=21 p=5\n"
    );
}

#[test]
fn grid_csv_and_json_agree() {
    let csv = blendkit(&["grid", "--m", "2,4", "--n", "2,4"]);
    assert_eq!(csv.status.code(), Some(0));
    let text = stdout(&csv);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("i,j,alpha_level,beta_level"));
    let rows: Vec<(usize, usize)> = lines
        .map(|l| {
            let f: Vec<usize> = l.split(',').map(|t| t.parse().unwrap()).collect();
            (f[0], f[1])
        })
        .collect();
    assert_eq!(rows.len(), 21);

    let json = blendkit(&["grid", "--m", "2,4", "--n", "2,4", "--format", "json"]);
    assert_eq!(json.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(doc["dimension"], 21);
    let points: Vec<(usize, usize)> = serde_json::from_value(doc["points"].clone()).unwrap();
    assert_eq!(points, rows);
    assert_eq!(doc["alpha"], serde_json::json!([[0, 2, 4], [0, 1, 2, 3, 4]]));
    assert_eq!(doc["alpha_inverse"][0], serde_json::json!([0, null, 1, null, 2]));
}

#[test]
fn fit_save_eval_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let saved = dir.path().join("surface.json");
    let net = dir.path().join("net.csv");
    let o = blendkit(&[
        "fit",
        "--m",
        "2,4",
        "--n",
        "2,4",
        "--domain",
        "-1,1,0,2",
        "--fn",
        "x^2*y^3 - 4*x*y + 1",
        "--out",
        net.to_str().unwrap(),
        "--save",
        saved.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());

    let csv = fs::read_to_string(&net).unwrap();
    assert!(csv.starts_with("i,j,x,y,b\n"));
    assert_eq!(csv.lines().count(), 22);

    // x^2 y^3 lies in the [2,4]^2 space, so evaluation is exact
    for (u, v) in [(0.3, 1.7), (-0.9, 0.1), (1.0, 2.0)] {
        let at = format!("{u},{v}");
        let o = blendkit(&["eval", "--surface", saved.to_str().unwrap(), "--at", &at]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let got: f64 = stdout(&o).trim().parse().unwrap();
        let want = u * u * v * v * v - 4.0 * u * v + 1.0;
        assert!((got - want).abs() < 1e-12, "{at}: {got} vs {want}");
    }
}

#[test]
fn eval_prints_seventeen_digits() {
    let dir = tempfile::tempdir().unwrap();
    let saved = dir.path().join("s.json");
    let o = blendkit(&["fit", "--m", "1,2", "--n", "1,2", "--fn", "sin(2*x*y)", "--save", saved.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = blendkit(&["eval", "--surface", saved.to_str().unwrap(), "--at", "0.25,0.75"]);
    let text = stdout(&o);
    let mantissa = text.trim().split('e').next().unwrap().trim_start_matches('-');
    assert_eq!(mantissa.replace('.', "").len(), 17, "{text}");
}

#[test]
fn fit_from_sample_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("samples.csv");
    // x * y at the degree-2 nodes of [0,1]^2
    let nodes = [0.0, 0.5, 1.0];
    let body: String = nodes
        .iter()
        .map(|x| nodes.iter().map(|y| (x * y).to_string()).collect::<Vec<_>>().join(",") + "\n")
        .collect();
    fs::write(&table, body).unwrap();
    let saved = dir.path().join("s.json");
    let o = blendkit(&[
        "fit", "--m", "1,2", "--n", "1,2", "--samples", table.to_str().unwrap(), "--save", saved.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = blendkit(&["eval", "--surface", saved.to_str().unwrap(), "--at", "0.3,0.6"]);
    let got: f64 = stdout(&o).trim().parse().unwrap();
    assert!((got - 0.18).abs() < 1e-14);

    fs::write(&table, "1,2\n3,4\n").unwrap();
    let o = blendkit(&["fit", "--m", "1,2", "--n", "1,2", "--samples", table.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn converge_table_and_order() {
    let o = blendkit(&[
        "converge", "--m", "2,4", "--n", "2,4", "--domain", "0,2,0,2", "--fn", "sin(2*x*y)", "--ks", "4,8,16",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,h,error");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("4,5.0000000000000000e-1,"));
    let order: f64 = lines[4].strip_prefix("order=").unwrap().parse().unwrap();
    assert!((4.3..=5.7).contains(&order), "{order}");
}

#[test]
fn converge_range_tail_and_exact() {
    let o = blendkit(&["converge", "--m", "2", "--n", "2", "--fn", "x*y", "--ks", "1..3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert!(text.ends_with("order=exact\n"));

    let o = blendkit(&[
        "converge", "--m", "1", "--n", "1", "--fn", "exp(x+y)", "--ks", "2..8", "--tail", "3", "--fit", "endpoints",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let order: f64 = text.lines().last().unwrap().strip_prefix("order=").unwrap().parse().unwrap();
    assert!((order - 2.0).abs() < 0.2, "{order}");
}

#[test]
fn divisibility_repair_and_strict() {
    let o = blendkit(&["grid", "--m", "2,3", "--n", "2,4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
    let repaired = blendkit(&["grid", "--m", "2,4", "--n", "2,4"]);
    assert_eq!(o.stdout, repaired.stdout);

    let o = blendkit(&["--strict", "grid", "--m", "2,3", "--n", "2,4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn argument_errors_exit_2() {
    for args in [
        &["order", "--m", "2,1", "--n", "1,2"][..],
        &["dim", "--m", "1,2", "--n", "1"],
        &["dim", "--m", "a", "--n", "1"],
        &["fit", "--m", "2", "--n", "2", "--fn", "2xy"],
        &["fit", "--m", "2", "--n", "2"],
        &["fit", "--m", "2", "--n", "2", "--fn", "x", "--domain", "1,0,0,1"],
        &["eval", "--surface", "s.json", "--at", "1"],
        &["converge", "--m", "2", "--n", "2", "--fn", "x", "--ks", "3,1"],
        &["converge", "--m", "2", "--n", "2", "--fn", "x", "--ks", "0..4"],
        &["converge", "--m", "2", "--n", "2", "--fn", "x", "--ks", "1..4", "--samples-per-cell", "1"],
        &["frobnicate"],
    ] {
        let o = blendkit(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn computation_errors_exit_1() {
    let o = blendkit(&["fit", "--m", "2", "--n", "2", "--fn", "log(x)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("non-finite"));

    let o = blendkit(&["eval", "--surface", "/nonexistent/surface.json", "--at", "0,0"]);
    assert_eq!(o.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"spec":{"m":[1,2],"n":[1,2]},"domain":[0,1,0,1],"coeffs":[[1,1,0.5]]}"#).unwrap();
    let o = blendkit(&["eval", "--surface", bad.to_str().unwrap(), "--at", "0,0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn deterministic_output() {
    let args = [
        "converge", "--m", "1,2,4", "--n", "1,2,4", "--domain", "0,1,0,1", "--fn", "exp(x)*cos(3*y)", "--ks", "1..6",
    ];
    let a = blendkit(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_blendkit"))
        .args(args)
        .env("BLENDKIT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, blendkit(&args).stdout);
}

#[test]
fn bad_thread_count_is_an_argument_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_blendkit"))
        .args(["serendipity"])
        .env("BLENDKIT_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
