use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use specsemi_core::fourier::bessel_kernel;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_specsemi"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str], config: &Path, out: &Path) -> Output {
    bin()
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn read_csv(path: &Path) -> (String, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    (
        header,
        lines
            .map(|l| l.split(',').map(str::to_string).collect())
            .collect(),
    )
}

fn is_sci17(s: &str) -> bool {
    // d.dddddddddddddddde[-]x
    let body = s.strip_prefix('-').unwrap_or(s);
    let Some((mant, exp)) = body.split_once('e') else {
        return false;
    };
    mant.len() == 18
        && mant.as_bytes()[1] == b'.'
        && exp.trim_start_matches('-').parse::<u32>().is_ok()
}

#[test]
fn kernel_at_zero_is_the_identity() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"system": "jacobi", "N": 12, "t_grid": {"min": 0.0, "max": 1.0, "points": 2, "scale": "linear"}}"#,
    );
    let out = run(&["kernel"], &cfg, &dir.path().join("o"));
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (header, rows) = read_csv(&dir.path().join("o/kernel_t0.csv"));
    assert_eq!(header, "n,m,K");
    assert_eq!(rows.len(), 13 * 13);
    for r in &rows {
        let (n, m): (i64, i64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        assert!(is_sci17(&r[2]), "{}", r[2]);
        let k: f64 = r[2].parse().unwrap();
        assert!((k - if n == m { 1.0 } else { 0.0 }).abs() <= 1e-12);
    }
    assert!(dir.path().join("o/kernel_t1.csv").exists());
}

#[test]
fn fourier_kernel_files_match_bessel() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["kernel"], &configs().join("fourier.json"), dir.path());
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = read_csv(&dir.path().join("kernel_t10.csv"));
    assert_eq!(rows.len(), 129 * 129);
    for r in rows {
        let (n, m): (i64, i64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        if (n - m).abs() <= 32 {
            let k: f64 = r[2].parse().unwrap();
            assert!((k - bessel_kernel(n, m, 10.0)).abs() <= 1e-10, "({n},{m})");
        }
    }
}

#[test]
fn evolve_delta_and_bessel_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["evolve"], &configs().join("fourier.json"), dir.path());
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = read_csv(&dir.path().join("u.csv"));
    assert_eq!(header, "n,t,u,u_kernel,u_band,disagreement");
    for r in rows {
        let n: i64 = r[0].parse().unwrap();
        let v: Vec<f64> = r[1..].iter().map(|s| s.parse().unwrap()).collect();
        let (t, u, band, d) = (v[0], v[1], v[3], v[4]);
        assert!(r[1..].iter().all(|s| is_sci17(s)));
        if t == 0.0 {
            assert!((u - if n == 0 { 1.0 } else { 0.0 }).abs() <= 1e-12);
        }
        if n.abs() <= 32 {
            assert!((u - bessel_kernel(n, 0, t)).abs() <= 1e-10, "n={n} t={t}");
            assert!(d <= 1e-7 && (band - u).abs() == d);
        }
    }
}

#[test]
fn worked_example_evolves_consistently() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["evolve"], &configs().join("xjacobi.json"), dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn method_disagreement_exits_2_and_still_writes() {
    let dir = tempfile::tempdir().unwrap();
    // the band truncated at N = 8 cannot follow the kernel up to t = 200
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"system": "jacobi", "N": 8, "t_grid": {"min": 1, "max": 200, "points": 2}}"#,
    );
    let out = run(&["evolve"], &cfg, &dir.path().join("o"));
    assert_eq!(out.status.code(), Some(2));
    assert!(dir.path().join("o/u.csv").exists());
}

#[test]
fn config_errors_exit_64() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("unknown.json", r#"{"system": "jacobi", "colour": "red"}"#),
        ("syntax.json", r#"{"system": "jacobi""#),
        ("params.json", r#"{"system": "dunkl", "alpha": -2.0}"#),
        (
            "riccati.json",
            r#"{"system": "exceptional", "b_coeffs": [1.0, -1.5, 0.5], "bw_coeffs": [-0.5, -0.25]}"#,
        ),
        (
            "support.json",
            r#"{"system": "jacobi", "N": 8, "f": {"delta": 9}}"#,
        ),
    ];
    for (name, text) in cases {
        let cfg = write_config(dir.path(), name, text);
        let out = run(&["evolve"], &cfg, &dir.path().join("o"));
        assert_eq!(out.status.code(), Some(64), "{name}");
        assert!(!out.stderr.is_empty());
    }
    let missing = run(&["kernel"], &dir.path().join("absent.json"), dir.path());
    assert_eq!(missing.status.code(), Some(64));
    // suite restricted to another system, or missing
    let jac = configs().join("jacobi.json");
    assert_eq!(
        run(&["verify", "--suite", "lemma2"], &jac, dir.path())
            .status
            .code(),
        Some(64)
    );
    assert_eq!(run(&["verify"], &jac, dir.path()).status.code(), Some(64));
    let threads = bin()
        .env("SPECSEMI_THREADS", "many")
        .args(["kernel", "--config"])
        .arg(&jac)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(64));
}

#[test]
fn csv_initial_data() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("f.csv"), "n,f\n-1,0.5\n2,1.0\n").unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"system": "dunkl", "N": 16, "t_grid": {"min": 0.5, "max": 1, "points": 2}, "f": {"csv": "f.csv"}}"#,
    );
    let out = run(&["evolve"], &cfg, &dir.path().join("o"));
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = read_csv(&dir.path().join("o/u.csv"));
    let at0: Vec<&Vec<String>> = rows
        .iter()
        .filter(|r| r[1].parse::<f64>().unwrap() == 0.0)
        .collect();
    let u = |n: i64| -> f64 {
        at0.iter().find(|r| r[0] == n.to_string()).unwrap()[2]
            .parse()
            .unwrap()
    };
    assert!((u(-1) - 0.5).abs() < 1e-12 && (u(2) - 1.0).abs() < 1e-12 && u(1).abs() < 1e-12);
}

#[test]
fn stencil_report_passes_on_the_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["verify", "--suite", "stencil"],
        &configs().join("xjacobi.json"),
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(json["suite"], "stencil");
    assert_eq!(json["summary"]["pass"], true);
    let rows = json["rows"].as_array().unwrap();
    let targets: Vec<f64> = rows
        .iter()
        .filter(|r| r["experiment"] == "stencil.coefficient")
        .map(|r| r["parameters"]["target"].as_f64().unwrap())
        .collect();
    let expect = [1.0, -9.0, 27.0, -38.0, 27.0, -9.0, 1.0];
    assert_eq!(targets.len(), 7);
    for (t, e) in targets.iter().zip(expect) {
        assert!((t - e).abs() < 1e-12);
    }
    let (header, csv) = read_csv(&dir.path().join("report.csv"));
    assert_eq!(
        header,
        "experiment,system,parameters,metric,measured,relation,tolerance,pass,scope"
    );
    assert_eq!(csv.len(), rows.len());
}

#[test]
fn out_of_scope_rows_are_tagged() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["verify", "--suite", "lemma1"],
        &configs().join("xjacobi_alpha125.json"),
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = read_csv(&dir.path().join("report.csv"));
    let slopes: Vec<_> = rows.iter().filter(|r| r[0].contains("slope")).collect();
    assert!(!slopes.is_empty());
    assert!(slopes.iter().all(|r| r[8] == "out-of-scope-params"));
}

#[test]
fn failing_rows_exit_1() {
    // gamma = p - 1 is outside A_p but grows only logarithmically, so window
    // doubling cannot tell it from a member
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"system": "jacobi", "N": 16, "weight": {"kind": "power", "gamma": 0.5, "p": 1.5}}"#,
    );
    let out = run(
        &["verify", "--suite", "maximal"],
        &cfg,
        &dir.path().join("o"),
    );
    assert_eq!(out.status.code(), Some(1));
    let (_, rows) = read_csv(&dir.path().join("o/report.csv"));
    let failed: Vec<_> = rows.iter().filter(|r| r[7] == "false").collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0][0], "maximal.ap_class");
    assert_eq!(failed[0][8], "boundary");
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("dunkl.json");
    let mut snapshots = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(threads);
        for args in [
            &["kernel"][..],
            &["evolve"],
            &["maximal"],
            &["verify", "--suite", "lemma2"],
        ] {
            let o = bin()
                .env("SPECSEMI_THREADS", threads)
                .args(args)
                .arg("--config")
                .arg(&cfg)
                .arg("--out")
                .arg(&out)
                .output()
                .unwrap();
            assert_eq!(o.status.code(), Some(0), "{args:?}");
        }
        let mut files: Vec<_> = std::fs::read_dir(&out)
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        files.sort();
        snapshots.push(
            files
                .iter()
                .map(|f| (f.file_name().unwrap().to_owned(), std::fs::read(f).unwrap()))
                .collect::<Vec<_>>(),
        );
    }
    assert_eq!(snapshots[0].len(), 9);
    assert!(snapshots[0] == snapshots[1]);
}
