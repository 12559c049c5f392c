use std::fs;
use std::process::{Command, Output};

fn dsbp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsbp"))
        .args(args)
        .env("DSBP_WORKERS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Everything after the leading `#` comment line.
fn body(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn build_code_reports_parameters_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = dsbp(&[
        "build-code",
        "--code",
        "hp-129-28",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("N = 129, K = 28, M = 101"));
    assert!(out.contains("min column weight: h_x 2, h_z 2"));
    for f in ["hx.txt", "hz.txt", "code.txt", "ds.txt", "tanner.dot"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let ds = fs::read_to_string(dir.path().join("ds.txt")).unwrap();
    assert_eq!(ds.lines().count(), 101);

    // the written matrices load back as the same code
    let hx = dir.path().join("hx.txt");
    let hz = dir.path().join("hz.txt");
    let o = dsbp(&[
        "build-code",
        "--hx",
        hx.to_str().unwrap(),
        "--hz",
        hz.to_str().unwrap(),
    ]);
    assert!(stdout(&o).contains("N = 129, K = 28, M = 101"));
    let code = dir.path().join("code.txt");
    let o = dsbp(&[
        "validate",
        "--stabilizers",
        code.to_str().unwrap(),
        "--wmax",
        "1",
    ]);
    assert!(o.status.success());
}

#[test]
fn validate_weight_two() {
    let o = dsbp(&["validate", "--code", "hp-129-28", "--wmax", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("preconditions: ok"));
    assert!(out.contains("no element of C̃∖S̃ at weight ≤ 2"));
}

#[test]
fn campaign_is_reproducible() {
    let args = [
        "campaign",
        "--code",
        "hp-129-28",
        "--schedule",
        "serial",
        "--eps-d",
        "1e-2",
        "--eps-s",
        "equal",
        "--stop-errors",
        "100",
        "--seed",
        "7",
    ];
    let a = dsbp(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = Command::new(env!("CARGO_BIN_EXE_dsbp"))
        .args(args)
        .env("DSBP_WORKERS", "1")
        .output()
        .unwrap();
    assert_eq!(body(&stdout(&a)), body(&stdout(&b)));
    let text = stdout(&a);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 1);
    // fixed-seed regression value
    assert!(
        rows[0]
            .starts_with("hp-129-28,serial,ds-bp4,0.01,0.01,1,1085,1017,100,0.09216589861751152,"),
        "{}",
        rows[0]
    );
    assert!(rows[0].ends_with(",7"));
}

#[test]
fn config_file_mirrors_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("out.csv");
    fs::write(
        &cfg,
        "code = \"hp-129-28\"\nschedule = \"serial\"\neps_d = [0.01]\neps_s = \"equal\"\nstop_errors = 100\nseed = 7\n",
    )
    .unwrap();
    let o = dsbp(&[
        "campaign",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let from_file = fs::read_to_string(&out).unwrap();
    assert!(body(&from_file).contains(",1085,1017,100,"));
}

#[test]
fn bdd_rows() {
    let o = dsbp(&[
        "bdd",
        "--n",
        "129",
        "--t",
        "2",
        "--gamma",
        "1,1,0.9873",
        "--eps",
        "1e-2,1e-3",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 2);
    let rate = |r: &str| r.split(',').nth(9).unwrap().parse::<f64>().unwrap();
    let expect = |eps: f64| {
        let b = |j: i32, c: f64| c * eps.powi(j) * (1.0 - eps).powi(129 - j);
        1.0 - (b(0, 1.0) + b(1, 129.0) + 0.9873 * b(2, 8256.0))
    };
    assert!((rate(rows[0]) / expect(1e-2) - 1.0).abs() < 1e-9);
    assert!((rate(rows[1]) / expect(1e-3) - 1.0).abs() < 1e-9);
    assert!(rows[0].contains(",bdd,0.01,"));
}

#[test]
fn rescale_adds_lambda() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    let o = dsbp(&[
        "bdd",
        "--n",
        "129",
        "--t",
        "2",
        "--eps",
        "0.01",
        "--out",
        input.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let one = stdout(&dsbp(&["rescale", "--input", input.to_str().unwrap()]));
    let three = stdout(&dsbp(&[
        "rescale",
        "--input",
        input.to_str().unwrap(),
        "--r",
        "3",
    ]));
    let lambda = |t: &str| {
        t.lines()
            .nth(2)
            .unwrap()
            .rsplit(',')
            .next()
            .unwrap()
            .parse::<f64>()
            .unwrap()
    };
    assert!(one.lines().nth(1).unwrap().ends_with("lambda_per_ns"));
    assert!((lambda(&one) / lambda(&three) - 3.0).abs() < 1e-12);
}

#[test]
fn decode_with_trace() {
    let o = dsbp(&["decode", "--error", "5:Y,17:X", "--flips", "3", "--trace"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("iteration,data_est,synd_est,mismatches"));
    assert!(out.contains("converged true"));
    assert!(out.contains("logical error false"));
    assert!(out.contains("data estimate 5:Y,17:X"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        dsbp(&["campaign", "--eps-d", "0.1", "--r", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(dsbp(&["campaign", "--eps-d", "1.5"]).status.code(), Some(2));
    assert_eq!(
        dsbp(&["campaign", "--eps-d", "0.1", "--eps-s", "half"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(dsbp(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        dsbp(&["bdd", "--n", "5", "--t", "1", "--gamma", "1", "--eps", "0.1"])
            .status
            .code(),
        Some(2)
    );
    let o = dsbp(&[
        "validate",
        "--hx",
        "/nonexistent/hx",
        "--hz",
        "/nonexistent/hz",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    let o = Command::new(env!("CARGO_BIN_EXE_dsbp"))
        .args(["build-code"])
        .env("DSBP_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
