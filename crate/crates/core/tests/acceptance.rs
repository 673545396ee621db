//! Full-size acceptance sweep: one PASS/FAIL line per criterion. Runs
//! without the test harness so the lines are always printed.

use std::process::ExitCode;
use std::time::Duration;

use polymatroid::selftest::{run_all, SelftestConfig};

const SOLVE_TIME_LIMIT: Duration = Duration::from_secs(60);

fn main() -> ExitCode {
    let results = run_all(&SelftestConfig::with_seed(2024));
    let mut all = true;
    for r in &results {
        let mut passed = r.passed;
        let mut detail = r.detail.clone();
        if r.id == 1 {
            passed &= r.elapsed < SOLVE_TIME_LIMIT;
            detail = format!(
                "{detail}; {:.2}s (limit {}s)",
                r.elapsed.as_secs_f64(),
                SOLVE_TIME_LIMIT.as_secs()
            );
        }
        println!(
            "criterion {} {}: {} ({} checks; {detail})",
            r.id,
            if passed { "PASS" } else { "FAIL" },
            r.name,
            r.checked
        );
        for f in &r.failures {
            println!("    {f}");
        }
        all &= passed;
    }
    all &= results.len() == 7;
    println!("acceptance: {}", if all { "all criteria passed" } else { "FAILED" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
