use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use reslat::lattice::RunSummary;
use reslat::sweep::{InvasionResult, RegimeMap};
use reslat::RegimeReport;

fn reslat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reslat"))
        .args(args)
        .env_remove("RESLAT_THREADS")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = reslat(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

#[test]
fn simulate_is_byte_identical_across_invocations() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let dir = tmp.path().join(name);
        ok(&[
            "simulate",
            "--matrix",
            "voter2",
            "--dims",
            "30x30",
            "--t-end",
            "40",
            "--seed",
            "1",
            "--snapshot-times",
            "10,20",
            "--quiet",
            "--out",
            dir.to_str().unwrap(),
        ]);
        dir
    };
    let (a, b) = (run("a"), run("b"));
    assert_eq!(
        files(&a),
        [
            "densities.csv",
            "final.ppm",
            "run.json",
            "snapshot_t000010.ppm",
            "snapshot_t000020.ppm"
        ]
    );
    for f in files(&a) {
        assert_eq!(
            fs::read(a.join(&f)).unwrap(),
            fs::read(b.join(&f)).unwrap(),
            "{f}"
        );
    }
    let csv = fs::read_to_string(a.join("densities.csv")).unwrap();
    assert!(csv.starts_with("t,u1,u2,clustering\n"));
    let summary: RunSummary =
        serde_json::from_slice(&fs::read(a.join("run.json")).unwrap()).unwrap();
    assert_eq!(summary.total_updates, 36_000);
    assert_eq!(summary.seed, 1);
    // Nothing lands outside the output directory.
    assert_eq!(files(tmp.path()), ["a", "b"]);
}

#[test]
fn odesolve_reaches_the_closed_form_equilibrium() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    ok(&[
        "odesolve",
        "--matrix",
        "M6",
        "--initial",
        "0.9,0.1",
        "--t-end",
        "100",
        "--quiet",
        "--out",
        out,
    ]);
    let csv = fs::read_to_string(tmp.path().join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("t,u1,u2\n"));
    let last: Vec<f64> = csv
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(last[0], 100.0);
    assert!(
        (last[1] - 0.5).abs() < 1e-6 && (last[2] - 0.5).abs() < 1e-6,
        "{last:?}"
    );
}

#[test]
fn classify_prints_the_report() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    let stdout = ok(&["classify", "--matrix", "M0", "--out", out]).stdout;
    let text = String::from_utf8(stdout).unwrap();
    assert!(
        text.replace([' ', '\n'], "")
            .contains(r#""PERMANENT_CASE":0"#),
        "{text}"
    );
    let report: RegimeReport = serde_json::from_str(&text).unwrap();
    let file: RegimeReport =
        serde_json::from_slice(&fs::read(tmp.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report, file);

    let text = String::from_utf8(
        ok(&[
            "classify",
            "--family",
            "M9",
            "--theta",
            "0.6,0.7,0.8",
            "--out",
            out,
        ])
        .stdout,
    )
    .unwrap();
    assert!(text.contains("HETEROCLINIC_STABLE"));
}

#[test]
fn config_file_with_flag_overrides() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("job.json");
    let out = tmp.path().join("out");
    fs::write(
        &cfg,
        format!(
            r#"{{"cmd": "sweep", "family": "two", "grid_count": 3, "out": {:?}}}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    ok(&[
        "--config",
        cfg.to_str().unwrap(),
        "--grid-count",
        "5",
        "--quiet",
    ]);
    assert_eq!(
        files(&out),
        ["regime_map.csv", "regime_map.json", "regime_map.ppm"]
    );
    let map: RegimeMap =
        serde_json::from_slice(&fs::read(out.join("regime_map.json")).unwrap()).unwrap();
    assert_eq!(map.cells.len(), 25);
    let ppm = fs::read(out.join("regime_map.ppm")).unwrap();
    assert!(ppm.starts_with(b"P6\n5 5\n255\n"));
}

#[test]
fn invade_and_interface_write_their_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    ok(&[
        "invade",
        "--matrix",
        "M4",
        "--epsilon",
        "0.1",
        "--invader",
        "2",
        "--dims",
        "20x20",
        "--replicates",
        "3",
        "--t-end",
        "500",
        "--threads",
        "2",
        "--quiet",
        "--out",
        out,
    ]);
    let inv: InvasionResult =
        serde_json::from_slice(&fs::read(tmp.path().join("invasion.json")).unwrap()).unwrap();
    assert_eq!((inv.invader, inv.replicates, inv.wins), (2, 3, 3));

    ok(&[
        "interface1d",
        "--theta",
        "0.9,0.1",
        "--length",
        "100",
        "--t-end",
        "20",
        "--quiet",
        "--out",
        out,
    ]);
    let csv = fs::read_to_string(tmp.path().join("interface.csv")).unwrap();
    assert!(csv.starts_with("t,displacement\n0,0\n"));
    assert_eq!(csv.lines().count(), 22);
}

fn error_of(out: &Output) -> serde_json::Value {
    assert!(!out.status.success());
    serde_json::from_slice(&out.stderr)
        .unwrap_or_else(|_| panic!("{}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn errors_are_reported_as_json() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    let e = error_of(&reslat(&[
        "simulate",
        "--matrix",
        "[[1,-1],[0,1]]",
        "--dims",
        "2x2",
        "--out",
        out,
    ]));
    assert_eq!(e["error"], "VALIDATION_ERROR");
    assert_eq!(e["violations"].as_array().unwrap().len(), 2);

    let e = error_of(&reslat(&[
        "classify",
        "--matrix",
        "M0",
        "--family",
        "M8",
        "--theta",
        "0.1,0.2,0.3",
    ]));
    assert_eq!(e["error"], "VALIDATION_ERROR");

    let e = error_of(&reslat(&[
        "simulate",
        "--matrix",
        "M6",
        "--snapshot-times",
        "5,1",
        "--out",
        out,
    ]));
    assert_eq!(e["error"], "VALIDATION_ERROR");

    let e = error_of(&reslat(&["classify", "--matrix", "M7", "--out", out]));
    assert_eq!(e["error"], "DEGENERATE");

    let bad = tmp.path().join("bad.json");
    fs::write(&bad, "{\"cmd\": \"classify\",\n  \"matrix\": [[1, 2], }").unwrap();
    let e = error_of(&reslat(&["--config", bad.to_str().unwrap()]));
    assert_eq!(e["error"], "PARSE_ERROR");
    assert!(e["message"].as_str().unwrap().contains("line 2"));

    let e = error_of(&reslat(&["frobnicate"]));
    assert_eq!(e["error"], "PARSE_ERROR");

    let e = error_of(
        &Command::new(env!("CARGO_BIN_EXE_reslat"))
            .args(["sweep", "--family", "M8"])
            .env("RESLAT_THREADS", "0")
            .output()
            .unwrap(),
    );
    assert!(e["message"].as_str().unwrap().contains("threads"));
}
