//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//! Runs without the libtest harness so the lines are never captured.

use std::process::ExitCode;

use qpoker_core::verify::{run_criterion, VerifyConfig};

fn main() -> ExitCode {
    let config = VerifyConfig::default();
    let mut failed = Vec::new();
    for id in 1..=12u8 {
        let (result, _) = run_criterion(id, config);
        println!(
            "criterion {id:>2}: {} {} ({:.2?})",
            if result.pass { "PASS" } else { "FAIL" },
            result.title,
            result.elapsed
        );
        if !result.pass {
            for note in &result.notes {
                println!("    {note}");
            }
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 12 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
