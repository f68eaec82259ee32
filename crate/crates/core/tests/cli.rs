use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bethe-verify")).args(args).output().expect("launch")
}

#[test]
fn passing_run_exits_zero() {
    let out = cli(&["run", "--n", "2", "--factors", "1", "--checks", "rll,main-theorem", "--trials", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!out.stdout.is_empty());
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &["run", "--checks", "nonsense"][..],
        &["run", "--n", "2", "--pattern", "1,x"],
        &["run", "--n", "2", "--pattern", "2"],
        &["run", "--n", "1"],
        &["compute", "--kind", "bethe", "--n", "2", "--pattern", "3"],
    ] {
        let out = cli(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    }
}

#[test]
fn machine_report_is_reproducible_json() {
    let args: Vec<&str> =
        "run --n 3 --factors 1 --pattern 1,2 --checks main-theorem,coproduct --seed 9 --trials 2 --emit machine"
            .split(' ')
            .collect();
    let a = cli(&args);
    let b = cli(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["pass"], true);
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 4);
    assert!(records.iter().all(|r| r["millis"].is_null()));
}

#[test]
fn timings_are_opt_in() {
    let out =
        cli(&"run --n 2 --factors 1 --checks rll --trials 1 --emit machine --timings".split(' ').collect::<Vec<_>>());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["records"][0]["millis"].is_u64());
}

#[test]
fn compute_sides_match() {
    for (n, factors, pattern) in [(2, 1, "1"), (3, 2, "2,1"), (3, 3, "1,2,1"), (2, 2, "")] {
        let f = factors.to_string();
        let n = n.to_string();
        let bethe =
            cli(&["compute", "--kind", "bethe", "--n", &n, "--factors", &f, "--pattern", pattern, "--seed", "3"]);
        let proj =
            cli(&["compute", "--kind", "projection", "--n", &n, "--factors", &f, "--pattern", pattern, "--seed", "3"]);
        assert!(bethe.status.success());
        assert_eq!(bethe.stdout, proj.stdout, "N={n} factors={f} pattern={pattern}");
    }
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("bethe-verify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("v.json");
    let args = ["compute", "--kind", "bethe", "--n", "3", "--factors", "2", "--pattern", "1,2"];
    let stdout = cli(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert!(cli(&with_out).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
