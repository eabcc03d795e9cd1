//! The acceptance suite, run through the command line. Two `selftest --seed 7`
//! runs execute side by side; the first report gives criteria 1 to 9 and the
//! byte comparison of both reports decides criterion 10.

use std::process::{Command, ExitCode, Output};
use std::thread;

use serde_json::Value;

const SEED: &str = "7";

fn selftest() -> Output {
    Command::new(env!("CARGO_BIN_EXE_belyi"))
        .args(["--command", "selftest", "--seed", SEED])
        .output()
        .expect("the belyi binary runs")
}

fn main() -> ExitCode {
    let other = thread::spawn(selftest);
    let first = selftest();
    let second = other.join().expect("second selftest run");
    let report: Value = match serde_json::from_slice(&first.stdout) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("selftest did not print a JSON report: {e}");
            eprintln!("{}", String::from_utf8_lossy(&first.stderr));
            return ExitCode::FAILURE;
        }
    };
    let Some(criteria) = report["result"]["criteria"].as_array() else {
        eprintln!("selftest report has no criteria: {report}");
        return ExitCode::FAILURE;
    };
    let mut failed = Vec::new();
    for c in criteria {
        let id = c["id"].as_u64().unwrap_or(0);
        let title = c["title"].as_str().unwrap_or("?");
        let mut passed = c["passed"].as_bool().unwrap_or(false);
        let mut detail = c["detail"].as_str().unwrap_or("").to_string();
        if id == 10 {
            if first.stdout == second.stdout {
                detail = format!(
                    "{detail}; two selftest --seed {SEED} reports are byte-identical ({} bytes)",
                    first.stdout.len()
                );
            } else {
                passed = false;
                detail = format!("{detail}; two selftest --seed {SEED} reports differ");
            }
        }
        println!("[{}] {id:>2} {title}: {detail}", if passed { "PASS" } else { "FAIL" });
        if !passed {
            failed.push(id);
        }
    }
    if criteria.len() != 10 {
        println!("expected 10 criteria, the report has {}", criteria.len());
        return ExitCode::FAILURE;
    }
    if !failed.is_empty() || !first.status.success() {
        println!("acceptance failed: {failed:?}");
        return ExitCode::FAILURE;
    }
    println!("acceptance: 10 of 10 criteria pass");
    ExitCode::SUCCESS
}
