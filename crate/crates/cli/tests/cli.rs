use std::path::PathBuf;
use std::process::{Command, Output};

use hurwitz_tau_cli::{emit_table, Format};
use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hurwitz-tau"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name]
        .iter()
        .collect();
    std::fs::read_to_string(path).unwrap()
}

fn error_code(o: &Output) -> String {
    let v: Value = serde_json::from_slice(&o.stderr).expect("stderr is JSON");
    v["error"]["code"].as_str().unwrap().to_string()
}

#[test]
fn hurwitz_two_sheets() {
    let o = run(&["hurwitz", "--n", "2", "--profiles", "[2],[2]"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v,
        json!({"N": 2, "profiles": [[2], [2]], "H": "1/2", "d": 2, "chi": 2})
    );
}

#[test]
fn pinned_hurwitz_values() {
    for (n, profiles, h) in [
        ("2", "[1,1]", "1/2"),
        ("2", "[2],[2],[2]", "0"),
        ("3", "[3],[3]", "1/3"),
    ] {
        let o = run(&["hurwitz", "--n", n, "--profiles", profiles]);
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["H"], h, "{profiles}");
    }
}

#[test]
fn trivial_tau_has_no_positive_degree() {
    let o = run(&[
        "tau-coeffs",
        "--gen",
        "trivial",
        "--order",
        "2",
        "--nmax",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut positive = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        if rec[2].parse::<u32>().unwrap() >= 1 {
            assert_eq!(&rec[3], "0");
            positive += 1;
        }
    }
    assert_eq!(positive, 12);
}

#[test]
fn golden_outputs() {
    let cases: [(&str, &[&str]); 4] = [
        ("chartable_4.csv", &["chartable", "--n", "4"]),
        (
            "tau_rational_3_2.csv",
            &[
                "tau-coeffs",
                "--gen",
                "rational",
                "--c",
                "1",
                "--d",
                "1/3",
                "--order",
                "2",
                "--nmax",
                "3",
            ],
        ),
        (
            "tau_single_quantum.json",
            &[
                "tau-coeffs",
                "--gen",
                "quantum",
                "--q",
                "1/2",
                "--order",
                "2",
                "--nmax",
                "2",
                "--single",
                "--out",
                "json",
            ],
        ),
        (
            "phi_rational_k3.json",
            &[
                "phi", "--gen", "rational", "--c", "1", "--d", "1/3", "--beta", "1/5", "--k", "3",
                "--order", "6",
            ],
        ),
    ];
    for (file, args) in cases {
        let first = stdout(&run(args));
        assert_eq!(first, golden(file), "{file}");
        assert_eq!(stdout(&run(args)), first, "{file} repeat");
    }
}

#[test]
fn json_round_trips() {
    let args = [
        "tau-coeffs",
        "--gen",
        "rational",
        "--c",
        "1",
        "--d",
        "1/3",
        "--order",
        "2",
        "--nmax",
        "3",
        "--out",
        "json",
    ];
    let text = stdout(&run(&args));
    let parsed: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&parsed).unwrap(), text.trim_end());

    // Same rows in both formats.
    let csv_args = &args[..args.len() - 2];
    let csv_text = stdout(&run(csv_args));
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let rows = parsed.as_array().unwrap();
    let mut n = 0;
    for (rec, row) in reader.records().zip(rows) {
        let rec = rec.unwrap();
        assert_eq!(rec[2], row["d"].to_string());
        assert_eq!(&rec[3], row["H"].as_str().unwrap());
        n += 1;
    }
    assert_eq!(n, rows.len());
}

#[test]
fn emit_table_json_round_trip() {
    let rows = vec![
        vec![json!([3, 1]), json!(2), json!("-7/12")],
        vec![json!([]), json!(0), json!("1")],
    ];
    let mut buf = Vec::new();
    emit_table(&mut buf, &["mu", "d", "H"], &rows, Format::Json).unwrap();
    let v: Value = serde_json::from_slice(&buf).unwrap();
    let back: Vec<Vec<Value>> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|o| vec![o["mu"].clone(), o["d"].clone(), o["H"].clone()])
        .collect();
    assert_eq!(back, rows);
}

#[test]
fn verify_rational_suite_passes() {
    let o = run(&[
        "verify", "--suite", "all", "--gen", "rational", "--c", "1", "--d", "1/3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().skip(1).all(|l| l.contains(",pass,")));
}

#[test]
fn verify_on_a_pole_exits_one() {
    let o = run(&[
        "verify",
        "--suite",
        "analytic",
        "--gen",
        "rational",
        "--c",
        "1",
        "--d",
        "1/3",
        "--beta",
        "1/3",
        "--kmax",
        "2",
        "--det-order",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("singular_parameter"));
}

#[test]
fn usage_errors_exit_two() {
    let o = run(&[
        "weighted", "--gen", "rational", "--c", "1/0", "--d", "1/3", "--deg", "1", "--mu", "[2]",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_code(&o), "usage");
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"]["position"], 2);

    let o = run(&["hurwitz", "--n", "2", "--profiles", "[3]"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn singular_input_exits_one() {
    let o = run(&[
        "phi", "--gen", "rational", "--c", "1", "--d", "1/3", "--beta", "1/3", "--k", "2",
        "--order", "12",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_code(&o), "singular_parameter");
    assert!(o.stdout.is_empty());
}
