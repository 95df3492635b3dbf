use std::process::{Command, Output};

use serde_json::Value;

fn gapscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gapscope")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn spectrum_exact_closed_gap() {
    let out = gapscope(&["spectrum", "--model", "dso", "--v", "0,5,0,-5", "--exact"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["g"], 1);
    assert_eq!(r["closed_gaps"][0]["exact"]["value"], "0");
    assert_eq!(r["backend"], "exact");
}

#[test]
fn spectrum_float_open_gap_and_single_band() {
    let r = json(&gapscope(&["spectrum", "--model", "dso", "--v", "0,2"]));
    let s5 = 5f64.sqrt();
    let want = [[1.0 - s5, 0.0], [2.0, 1.0 + s5]];
    for (b, w) in r["bands"].as_array().unwrap().iter().zip(want) {
        assert!((b["lo"].as_f64().unwrap() - w[0]).abs() < 1e-12);
        assert!((b["hi"].as_f64().unwrap() - w[1]).abs() < 1e-12);
    }
    assert_eq!(r["g"], 0);

    let r = json(&gapscope(&["spectrum", "--model", "dso", "--v", "0"]));
    assert_eq!(r["bands"].as_array().unwrap().len(), 1);
    assert_eq!(r["bands"][0]["lo"], -2.0);
    assert_eq!(r["bands"][0]["hi"], 2.0);
}

#[test]
fn family_commands() {
    let r = json(&gapscope(&["family", "--name", "dso-p8", "--params", "lambda=1", "--analyze"]));
    assert_eq!(r["certified"]["certified_count"], 3);
    assert_eq!(r["report"]["g"], 3);

    let r = json(&gapscope(&["family", "--name", "odjm-p6", "--params", "alpha=1,beta=2", "--analyze"]));
    assert_eq!(r["certified"]["certified_count"], 3);

    let out = gapscope(&["family", "--name", "dso-p5-plus", "--params", "lambda=1,eta=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of domain"));

    assert_eq!(gapscope(&["family", "--name", "no-such-family"]).status.code(), Some(2));
    assert_eq!(gapscope(&["family", "--name", "odjm-p5", "--exact"]).status.code(), Some(2));
    let list = String::from_utf8(gapscope(&["family", "--list"]).stdout).unwrap();
    assert_eq!(list.lines().count(), 13);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["spectrum", "--v", "0.5,1", "--exact"],
        vec!["spectrum", "--v", "1,x"],
        vec!["spectrum"],
        vec!["spectrum", "--model", "odjm", "--a", "1,-2"],
        vec!["census", "--model", "dso", "--p", "0"],
        vec!["verify", "--suite", "other"],
        vec!["frobnicate"],
    ] {
        let out = gapscope(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn vector_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (family, params) in [("dso-p4", "lambda=3/2"), ("odjm-p5", "")] {
        let fam = gapscope(&["family", "--name", family, "--params", params]);
        let path = dir.path().join(format!("{family}.json"));
        std::fs::write(&path, &fam.stdout).unwrap();
        let first = gapscope(&["spectrum", "--input", path.to_str().unwrap()]);
        assert_eq!(first.status.code(), Some(0));

        // re-feed the bare vector
        let vector = json(&fam)["vector"].clone();
        let path2 = dir.path().join("vector.json");
        std::fs::write(&path2, serde_json::to_string(&vector).unwrap()).unwrap();
        let second = gapscope(&["spectrum", "--input", path2.to_str().unwrap()]);
        assert_eq!(first.stdout, second.stdout);
    }
    let a = gapscope(&["spectrum", "--v", "0,5,0,-5", "--exact"]);
    let fam = gapscope(&["family", "--name", "dso-p4", "--params", "lambda=5"]);
    let path = dir.path().join("p4.json");
    std::fs::write(&path, &fam.stdout).unwrap();
    assert_eq!(a.stdout, gapscope(&["spectrum", "--input", path.to_str().unwrap()]).stdout);
}

#[test]
fn csv_matches_json_fields() {
    for args in [&["--v", "0,0,0,1,0,0,0,-1", "--exact"][..], &["--v", "0.3,-1.2,2.5", "--tol", "1e-8"][..]] {
        let j = gapscope(&[&["spectrum"][..], args].concat());
        let c = gapscope(&[&["spectrum", "--format", "csv"][..], args].concat());
        let from_json = gapscope::report::from_json(&String::from_utf8(j.stdout).unwrap()).unwrap();
        let from_csv = gapscope::report::from_csv(&String::from_utf8(c.stdout).unwrap()).unwrap();
        assert_eq!(from_json, from_csv);
    }
}

#[test]
fn svg_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    for p in [&p1, &p2] {
        let out = gapscope(&["spectrum", "--v", "1,0,0,-1,0,0", "--exact", "--svg", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (a, b) = (std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("class=\"band\"").count(), 6);
    assert_eq!(text.matches("class=\"closed-gap\"").count(), 2);
}

#[test]
fn closed_gaps_and_double() {
    let r = json(&gapscope(&["closed-gaps", "--model", "odjm", "--a", "1,2,2,1", "--exact"]));
    assert_eq!(r["g"], 1);
    assert_eq!(r["closed_gaps"][0]["exact"]["value"], "0");

    let r = json(&gapscope(&["double", "--v", "0,2", "--exact", "--k", "2", "--analyze"]));
    assert_eq!(r["certified"]["all_certified"], true);
    assert_eq!(r["vector"]["v"].as_array().unwrap().len(), 8);
    assert_eq!(gapscope(&["double", "--v", "1,1", "--k", "2"]).status.code(), Some(2));
}

#[test]
fn census_is_thread_independent() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_gapscope"))
            .args(["census", "--model", "jac", "--p", "4", "--n", "300", "--seed", "11"])
            .env("GAPSCOPE_THREADS", threads)
            .output()
            .unwrap()
    };
    let (a, b) = (run("1"), run("3"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let r = json(&gapscope(&["census", "--model", "odjm", "--p", "5", "--n", "100", "--inject"]));
    assert_eq!(r["max_found"], 2);
    assert_eq!(r["max_sampled"], 0);
    assert_eq!(r["bound_check"]["passed"], true);
}

#[test]
fn verify_suite_determinism_and_negative_control() {
    let a = gapscope(&["verify", "--suite", "paper", "--seed", "7"]);
    let b = gapscope(&["verify", "--suite", "paper", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);

    let table = json(&gapscope(&["verify", "--print-table"]));
    let mut bad = table.clone();
    bad["entries"]["dso"]["6"] = Value::from(1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    std::fs::write(&path, serde_json::to_string(&bad).unwrap()).unwrap();
    let out = gapscope(&["verify", "--suite", "paper", "--table", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}
