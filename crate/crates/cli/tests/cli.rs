use std::process::{Command, Output};

fn dihedral(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dihedral")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV report, header first, comment lines dropped.
fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    stdout(out)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(rows: &[Vec<String>], name: &str) -> usize {
    rows[0].iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn classgroup_level_23() {
    let out = dihedral(&["classgroup", "--q", "23"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 4);
    assert!(stdout(&out).contains("# structure: C3"));
    assert_eq!(csv_rows(&dihedral(&["classgroup", "--q", "3"])).len(), 2);
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        &["classgroup", "--q", "21"][..],
        &["theta", "--q", "23", "--psi", "0", "--n", "10"],
        &["theta", "--q", "7", "--psi", "1", "--n", "10"],
        &["theta", "--q", "7", "--psi", "all", "--n", "10"],
        &["relations", "--kind", "custom", "--s", "1,-1", "--a", "0"],
        &["dimension", "--qmax", "x"],
        &["frobnicate"],
    ] {
        assert_eq!(dihedral(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn theta_csv_for_level_23() {
    let out = dihedral(&["theta", "--q", "23", "--psi", "1", "--n", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let config = text.lines().next().unwrap();
    assert!(config.starts_with("# config: {"));
    assert!(config.contains("\"N\":100"));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 101);
    let (n, re) = (column(&rows, "n"), column(&rows, "re"));
    let two = rows.iter().find(|r| r[n] == "2").unwrap();
    assert_eq!(two[re].parse::<f64>().unwrap(), -1.0);
}

#[test]
fn verify_passes_and_detects_corruption() {
    for q in ["23", "47"] {
        let out = dihedral(&["verify", "--q", q, "--n", "10000"]);
        assert_eq!(out.status.code(), Some(0), "q={q}");
        assert!(stdout(&out).contains("# status: PASS"));
    }
    let out = dihedral(&["verify", "--q", "23", "--n", "10000", "--corrupt", "9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("(p, k) = (3, 2)"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
}

#[test]
fn relations_icosahedral_table() {
    let out = dihedral(&["relations", "--kind", "icosahedral"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("# identity: "));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 13);
    let holds = column(&rows, "holds");
    let true_orders: Vec<usize> = rows[1..].iter().enumerate().filter(|(_, r)| r[holds] == "true").map(|(i, _)| i + 1).collect();
    assert_eq!(true_orders, vec![1, 2, 3, 5, 6]);
}

#[test]
fn dimension_ends_at_largest_level_below_qmax() {
    let rows = csv_rows(&dihedral(&["dimension", "--qmax", "1000"]));
    assert_eq!(rows.last().unwrap()[0], "991");
    assert_eq!(rows[1][0], "3");
}

#[test]
fn satotate_second_moment() {
    let out = dihedral(&["satotate", "--qmax", "10000", "--n", "100000", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["config"]["qmax"], 10000);
    let rows = doc["results"]["rows"].as_array().unwrap();
    let empirical = rows.iter().find(|r| r[0] == "empirical").unwrap();
    assert!((empirical[3].as_f64().unwrap() - 1.0).abs() < 0.05);
}

#[test]
fn output_is_independent_of_thread_count() {
    for args in [
        &["dimension", "--qmax", "2000"][..],
        &["satotate", "--qmax", "1000", "--n", "20000"],
        &["verify", "--q", "3299", "--n", "2000"],
        &["density", "--q", "199", "--n", "50000", "--format", "json"],
        &["relations", "--kind", "octahedral", "--seed", "7"],
    ] {
        let one = dihedral(&[args, &["--threads", "1"]].concat());
        let four = dihedral(&[args, &["--threads", "4"]].concat());
        assert_eq!(one.status.code(), Some(0), "{args:?}");
        assert_eq!(one.stdout, four.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("dihedral-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let out = dihedral(&["wirsing", "--q", "23", "--n", "65536", "--format", "json", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(doc["config"]["out"], p);
    assert_eq!(doc["results"]["rows"].as_array().unwrap().len(), 17);
}
