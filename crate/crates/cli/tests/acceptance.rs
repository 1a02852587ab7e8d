//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::path::Path;
use std::process::{Command, ExitCode};

use pulsebeam_core::verify::{self, CheckOutcome};

/// Runs `pattern` and `channel` through the binary twice at one and at four
/// threads and compares the files byte for byte.
fn cli_determinism() -> CheckOutcome {
    let configs = Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/configs"));
    let dir = tempfile::tempdir().expect("temp dir");
    let mut passed = true;
    let mut detail = Vec::new();
    for name in ["pattern", "channel"] {
        let cfg = configs.join(format!("{name}.json"));
        let mut files = Vec::new();
        for (k, threads) in ["1", "1", "4", "4"].into_iter().enumerate() {
            let out = dir.path().join(format!("{name}{k}.csv"));
            let status = Command::new(env!("CARGO_BIN_EXE_pulsebeam"))
                .args([name, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--threads", threads])
                .env_remove("PULSEBEAM_THREADS")
                .output()
                .map(|o| o.status.success())
                .unwrap_or(false);
            files.push(if status { std::fs::read(&out).ok() } else { None });
        }
        let ok = files[0].is_some() && files.windows(2).all(|w| w[0] == w[1]);
        passed &= ok;
        let len = files[0].as_ref().map_or(0, Vec::len);
        detail.push(format!("{name}: 4 runs, {len} bytes, identical={ok}"));
    }
    CheckOutcome { id: 12, name: "cli determinism", passed, detail: detail.join("; ") }
}

fn main() -> ExitCode {
    let mut outcomes = verify::run_all();
    outcomes.push(cli_determinism());
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("acceptance: {} criteria, {} failed", outcomes.len(), failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
