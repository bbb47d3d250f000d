use std::process::{Command, Output};

fn syra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syra"))
        .args(args)
        .env_remove("SYRA_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_thirteen() {
    let o = syra(&["classify", "--m", "13", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["m"], 13);
    assert_eq!(v["pattern"], "3,2,1");
    assert_eq!(v["rule"], "Lemma1");
    assert_eq!(v["k"], 1);
}

#[test]
fn classify_quad_default_n_is_three() {
    let o = syra(&["classify", "--m", "7"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rule"], "Triple-7mod8");
    assert_eq!(v["pattern"], "1,2,3");
}

#[test]
fn feasibility_quadruples() {
    let o = syra(&["feasibility", "--n", "4", "--max", "1000000"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let proved: Vec<&str> = v["proved_impossible"].as_array().unwrap().iter().map(|p| p.as_str().unwrap()).collect();
    assert_eq!(proved, ["1,3,4,2", "1,4,2,3", "1,4,3,2", "2,1,4,3"]);
    let observed = v["observed"].as_array().unwrap();
    for p in &proved {
        assert!(!observed.iter().any(|o| o == p), "{p} observed");
    }
    assert_eq!(v["consistent"], true);
}

#[test]
fn verify_suites_exit_zero() {
    for args in [
        &["verify", "--suite", "classifier", "--max", "100000"][..],
        &["verify", "--suite", "lemmas"],
        &["verify", "--suite", "partitions", "--max", "100000"],
        &["verify", "--suite", "goldens", "--workers", "3"],
    ] {
        let o = syra(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).contains(", 0 failed"), "{args:?}");
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["census", "--max", "10"][..],
        &["census", "--max", "10", "--n", "9"],
        &["census", "--max", "0", "--n", "3"],
        &["classify", "--m", "12"],
        &["classify", "--m", "abc"],
        &["density", "--max", "10", "--n", "3", "--pattern", "1,1,2"],
        &["dropping", "--max", "100", "--k", "20", "--cap", "10"],
        &["census", "--max", "10", "--n", "3", "--workers", "0"],
        &["bogus"],
    ] {
        let o = syra(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn overflow_exits_three_and_names_m() {
    let m = ((1u128 << 126) + 3).to_string();
    let o = syra(&["classify", "--m", &m, "--n", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains(&m));
}

#[test]
fn output_is_identical_across_workers() {
    for base in [
        &["census", "--max", "300001", "--n", "4"][..],
        &["census", "--max", "300001", "--n", "3", "--format", "json"],
        &["dropping", "--max", "300001", "--k", "12"],
        &["feasibility", "--max", "300001", "--n", "4"],
    ] {
        let outs: Vec<String> = ["1", "2", "5"]
            .iter()
            .map(|w| {
                let mut args = base.to_vec();
                args.extend(["--workers", w]);
                stdout(&syra(&args))
            })
            .collect();
        assert!(!outs[0].is_empty());
        assert!(outs.iter().all(|o| *o == outs[0]), "{base:?}");
    }
}

#[test]
fn census_json_matches_golden() {
    let o = syra(&["census", "--max", "10000", "--n", "4", "--format", "json"]);
    let golden = syracuse_core::golden::GOLDENS.iter().find(|g| g.max == 10000 && g.n == 4).unwrap();
    assert_eq!(stdout(&o), golden.json);
}

#[test]
fn out_writes_file_and_leaves_stdout_empty() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("census.csv");
    let o = syra(&["census", "--max", "100", "--n", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let body = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        body,
        "pattern,count,ratio\n\
         \"1,2,3\",12,0.240000000000\n\
         \"1,3,2\",6,0.120000000000\n\
         \"2,1,3\",6,0.120000000000\n\
         \"2,3,1\",7,0.140000000000\n\
         \"3,1,2\",4,0.0800000000000\n\
         \"3,2,1\",11,0.220000000000\n"
    );
}

#[test]
fn workers_env_fallback() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_syra"));
        c.args(args);
        match env {
            Some(v) => c.env("SYRA_WORKERS", v),
            None => c.env_remove("SYRA_WORKERS"),
        };
        c.output().unwrap()
    };
    let args = ["census", "--max", "1000", "--n", "3"];
    let o = run(Some("2"), &args);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2 worker(s)"));
    assert_eq!(o.stdout, run(None, &args).stdout);
    assert_eq!(run(Some("0"), &args).status.code(), Some(2));
    let o = run(Some("2"), &["census", "--max", "1000", "--n", "3", "--workers", "3"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("3 worker(s)"));
}

#[test]
fn density_and_incdec() {
    let o = syra(&["density", "--max", "100", "--n", "3", "--pattern", "(1,2,3)"]);
    assert_eq!(stdout(&o), "pattern,count,ratio\n\"1,2,3\",12,0.240000000000\n");
    let o = syra(&["incdec", "--pattern", "3,2,1", "--max", "10000"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["witness"], 47);
    let o = syra(&["incdec", "--pattern", "10", "--max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["witness"].is_null());
}
