use std::path::Path;
use std::process::{Command, Output};

fn smooth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smooth"))
        .args(args)
        .output()
        .expect("spawn smooth")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn synthetic_run_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let (curves, table, plot) = (p("curves.csv"), p("table.csv"), p("plot.svg"));
    let out = smooth(&[
        "run",
        "--synthetic",
        "400",
        "--seed",
        "3",
        "--method",
        "lowess:d=1,k=40",
        "--method",
        "rbf-local:poly=none,k=40",
        "--method",
        "rbf-global:m=10,d=1,overlap=2",
        "--out-curves",
        &curves,
        "--out-table",
        &table,
        "--out-plot",
        &plot,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("lowess:d=1,k=40"));

    let table = std::fs::read_to_string(&table).unwrap();
    assert_eq!(table.lines().count(), 4);
    assert!(table.starts_with("method,param,E_c,E_d,ms\n"));
    let curves = std::fs::read_to_string(&curves).unwrap();
    assert_eq!(curves.lines().count(), 1 + 5 * 400);
    assert!(std::fs::read_to_string(&plot).unwrap().starts_with("<svg"));
}

#[test]
fn csv_input_and_grid_queries() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    let mut text = String::from("x,value\n");
    for i in 0..50 {
        let x = i as f64 / 49.0;
        text.push_str(&format!("{x},{}\n", 2.0 * x + 1.0));
    }
    std::fs::write(&input, text).unwrap();
    let curves = dir.path().join("curves.csv");
    let out = smooth(&[
        "run",
        "--input",
        input.to_str().unwrap(),
        "--method",
        "lowess:d=1,k=8",
        "--queries",
        "grid:11",
        "--out-curves",
        curves.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&curves).unwrap();
    let fitted: Vec<(f64, f64)> = text
        .lines()
        .filter(|l| l.starts_with("\"lowess"))
        .map(|l| {
            let f: Vec<&str> = l.rsplitn(3, ',').collect();
            (f[1].parse().unwrap(), f[0].parse().unwrap())
        })
        .collect();
    assert_eq!(fitted.len(), 11);
    for (x, v) in fitted {
        assert!((v - (2.0 * x + 1.0)).abs() < 1e-9);
    }
}

#[test]
fn config_errors_exit_1() {
    assert_eq!(
        code(&smooth(&["run", "--synthetic", "100", "--method", "lowess:k=0"])),
        1
    );
    assert_eq!(
        code(&smooth(&["run", "--synthetic", "100", "--method", "splines:k=3"])),
        1
    );
    assert_eq!(
        code(&smooth(&["run", "--synthetic", "10", "--method", "lowess:k=50"])),
        1
    );
    assert_eq!(code(&smooth(&["run", "--method", "lowess:k=5"])), 1);
    assert_eq!(
        code(&smooth(&[
            "run",
            "--synthetic",
            "100",
            "--method",
            "lowess:k=5",
            "--queries",
            "grid"
        ])),
        1
    );
    assert_eq!(
        code(&smooth(&[
            "run",
            "--input",
            "/nonexistent/x.csv",
            "--method",
            "lowess:k=5"
        ])),
        1
    );
    assert_eq!(code(&smooth(&["--help"])), 0);
}

#[test]
fn all_methods_failing_exits_2() {
    // Cubic LOWESS needs at least four neighbors.
    let out = smooth(&["run", "--synthetic", "100", "--method", "lowess:d=3,k=2"]);
    assert_eq!(code(&out), 2);
    // One success is enough.
    let out = smooth(&[
        "run",
        "--synthetic",
        "100",
        "--method",
        "lowess:d=3,k=2",
        "--method",
        "lowess:d=1,k=10",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn bench_prints_timings() {
    let out = smooth(&[
        "run",
        "--synthetic",
        "200",
        "--method",
        "lowess:d=1,k=20",
        "--bench",
        "--repeats",
        "3",
    ]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("median ms"));
    let out = smooth(&[
        "run",
        "--synthetic",
        "200",
        "--method",
        "lowess:d=1,k=20",
        "--bench",
        "--repeats",
        "2",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn reproduce_table1_shape() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tab1.csv");
    let out = smooth(&["reproduce", "table1", "--seed", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(Path::new(&path)).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0].split(',').count(), 5);
    let params: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(params, ["100", "200", "500", "1000"]);
}
