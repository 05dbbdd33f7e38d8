use std::process::{Command, Output};

use serde_json::Value;

fn charlier(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charlier"))
        .env_remove("CHARLIER_PREC_BITS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn csv_and_json_carry_identical_digits() {
    let common = ["--prec-bits", "128", "recurrence", "--beta", "1.5", "--nmax", "4"];
    let csv = charlier(&[&common[..], &["--format", "csv"]].concat());
    let json = charlier(&[&common[..], &["--format", "json"]].concat());
    assert!(csv.status.success() && json.status.success());
    let doc: Value = serde_json::from_str(&stdout(&json)).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    let lines: Vec<String> = stdout(&csv).lines().map(str::to_owned).collect();
    assert_eq!(lines[0], "n,a2,b,source");
    assert_eq!(lines.len(), rows.len() + 1);
    for (line, row) in lines[1..].iter().zip(rows) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[0], row["n"].to_string());
        assert_eq!(f[1], row["a2"].as_str().unwrap());
        assert_eq!(f[2], row["b"].as_str().unwrap());
        assert_eq!(f[3], "hankel");
    }
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let args = ["--prec-bits", "96", "recurrence", "--lattice", "shifted", "--beta", "0.5", "--nmax", "3"];
    let direct = charlier(&args);
    let to_file = charlier(&[&args[..], &["--output", path.to_str().unwrap()]].concat());
    assert!(to_file.status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&direct));
}

#[test]
fn sources_agree_through_the_cli() {
    let run = |source| {
        let out = charlier(&["--prec-bits", "256", "recurrence", "--beta", "1.5", "--nmax", "6", "--source", source]);
        assert!(out.status.success(), "{source}");
        stdout(&out)
            .lines()
            .skip(1)
            .map(|l| l.split(',').skip(1).take(2).map(|v| v.parse::<f64>().unwrap()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    };
    let hankel = run("hankel");
    for source in ["stieltjes", "forward", "p5chain"] {
        for (x, y) in run(source).iter().zip(&hankel) {
            assert!((x[0] - y[0]).abs() < 1e-14 && (x[1] - y[1]).abs() < 1e-14, "{source}");
        }
    }
}

#[test]
fn scan_has_one_row_per_point_and_index() {
    let out = charlier(&["--prec-bits", "128", "scan", "--beta", "1.5", "--a-from", "0.5", "--a-to", "2", "--steps", "4", "--nmax", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,n,a2,b"));
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(str::to_owned).collect()).collect();
    assert_eq!(rows.len(), 4 * 6);
    // b_0 increases with a
    let b0: Vec<f64> = rows.iter().filter(|r| r[1] == "0").map(|r| r[3].parse().unwrap()).collect();
    assert_eq!(b0.len(), 4);
    assert!(b0.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn precision_from_the_environment() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_charlier"))
        .env("CHARLIER_PREC_BITS", "64")
        .args(["recurrence", "--nmax", "2", "--beta", "2"])
        .output()
        .unwrap();
    let explicit = charlier(&["--prec-bits", "64", "recurrence", "--nmax", "2", "--beta", "2"]);
    assert_eq!(stdout(&with_env), stdout(&explicit));
    assert_ne!(stdout(&explicit), stdout(&charlier(&["recurrence", "--nmax", "2", "--beta", "2"])));
}

#[test]
fn exit_codes() {
    assert_eq!(charlier(&["recurrence", "--beta", "nonsense"]).status.code(), Some(2));
    assert_eq!(charlier(&["recurrence", "--lattice", "shifted", "--beta", "1"]).status.code(), Some(2));
    assert_eq!(charlier(&["--prec-bits", "8", "recurrence"]).status.code(), Some(2));
    let pole = ["recurrence", "--source", "forward", "--lattice", "bilattice", "--beta", "0.5", "--tau", "1", "--nmax", "4"];
    assert_eq!(charlier(&pole).status.code(), Some(4));
}

fn verify(args: &[&str]) -> (Option<i32>, Value, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = charlier(&[args, &["--output", path.to_str().unwrap()]].concat());
    let report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    (out.status.code(), report, String::from_utf8(out.stderr).unwrap())
}

#[test]
fn verify_riccati_report() {
    let (code, report, stderr) = verify(&["verify", "--suite", "riccati", "--prec-bits", "256"]);
    assert_eq!(code, Some(0));
    assert_eq!(report["suite"], "riccati");
    assert_eq!(report["prec_bits"], 256);
    assert_eq!(report["pass"], true);
    let cells = report["cells"].as_array().unwrap();
    assert!(!cells.is_empty() && cells.iter().all(|c| c["pass"] == true));
    assert!(stderr.contains("riccati PASS"));
}

#[test]
fn verify_chain_on_one_measure() {
    let (code, report, _) = verify(&["verify", "--suite", "p5chain", "--a", "1", "--beta", "1.5", "--lattice", "n", "--nmax", "10"]);
    assert_eq!(code, Some(0));
    assert_eq!(report["pass"], true);
    let cells = report["cells"].as_array().unwrap();
    assert!(cells.iter().any(|c| c["n"] == 10));
}
