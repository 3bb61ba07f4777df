//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
//! Run with `cargo test -p dualhash --test acceptance`.

use std::process::ExitCode;

use dualhash::verify::{run_criterion, CRITERIA};

const SEED: u64 = 7;

fn main() -> ExitCode {
    let ids: Vec<u8> = CRITERIA.iter().map(|c| c.0).collect();
    assert_eq!(ids, (1..=9).collect::<Vec<_>>(), "criteria are numbered 1 to 9");
    let mut failed = 0;
    for (id, name) in CRITERIA {
        match run_criterion(id, SEED) {
            Ok(report) => {
                println!("{}", report.line());
                failed += usize::from(!report.passed);
            }
            Err(e) => {
                println!("FAIL [{id}] {name}: error: {e}");
                failed += 1;
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed (seed {SEED})", CRITERIA.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
