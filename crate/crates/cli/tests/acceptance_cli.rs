//! Determinism acceptance: two consecutive runs of the full CLI suite
//! produce byte-identical reports once the timing field is stripped, in
//! both text and JSON formats.

use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn suite() -> Vec<Vec<String>> {
    let cmd = |args: &[&str], model: &str| -> Vec<String> {
        let mut v: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        v.push(fixture(model));
        v
    };
    vec![
        cmd(&["validate", "--max-degree", "4"], "circle.json"),
        cmd(&["validate", "--max-degree", "4"], "su2_frame.json"),
        cmd(&["validate"], "broken_antisym.json"),
        cmd(&["weil", "--max-degree", "6"], "u1.json"),
        cmd(&["weil", "--max-degree", "4"], "abelian2.json"),
        cmd(&["weil", "--max-degree", "3"], "su2.json"),
        cmd(
            &["cohomology", "--model", "cartan", "--max-degree", "5"],
            "circle.json",
        ),
        cmd(
            &["cohomology", "--model", "weil-basic", "--max-degree", "4"],
            "t2.json",
        ),
        cmd(&["kalkman", "--max-degree", "4", "--t", "identity"], "circle.json"),
        cmd(&["kalkman", "--max-degree", "4", "--t", "seed:1"], "circle.json"),
        cmd(&["kalkman", "--max-degree", "2", "--t", "seed:2"], "su2_weil_op.json"),
        cmd(
            &[
                "transgress",
                "--theta0",
                "left",
                "--theta1",
                "right",
                "--max-degree",
                "4",
            ],
            "u1_pair.json",
        ),
        cmd(&["reduce", "--max-degree", "4"], "circle.json"),
        cmd(&["reduce", "--max-degree", "4"], "t2.json"),
        cmd(&["reduce", "--max-degree", "4"], "t2_weighted.json"),
        cmd(&["reduce", "--max-degree", "3"], "u1_weil_op.json"),
        cmd(&["char-class", "--poly", "c1", "--max-degree", "4"], "u1_weil_op.json"),
        cmd(&["char-class", "--poly", "c2", "--max-degree", "4"], "t2.json"),
    ]
}

fn run_suite(format: &str) -> String {
    let mut all = String::new();
    for args in suite() {
        let out = Command::new(env!("CARGO_BIN_EXE_cartan"))
            .arg("--format")
            .arg(format)
            .args(&args)
            .output()
            .expect("binary runs");
        all.push_str(&format!("$ cartan {}\n", args.join(" ")));
        all.push_str(&String::from_utf8_lossy(&out.stdout));
        all.push_str(&format!("[exit {}]\n", out.status.code().unwrap_or(-1)));
    }
    all
}

fn strip_timing(report: &str) -> String {
    report
        .lines()
        .filter(|line| {
            !line.starts_with("wall-ms:") && !line.trim_start().starts_with("\"wall_ms\"")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn criterion_11_determinism() {
    for format in ["text", "json"] {
        let first = strip_timing(&run_suite(format));
        let second = strip_timing(&run_suite(format));
        assert_eq!(
            first, second,
            "two runs of the full suite differ in {format} format"
        );
        assert!(!first.is_empty());
    }
    println!("[PASS] criterion 11: full CLI suite is byte-deterministic modulo timing");
}
