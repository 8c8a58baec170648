//! Runs the ten acceptance criteria and prints one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use twosimple_cli::suite::{criterion_determinism, run_checks, run_suite, Config, Criterion};
use twosimple_cli::to_json;

const SEED: u64 = 0;

fn report(c: &Criterion) -> bool {
    println!("{}", c.status_line());
    for case in c.failures() {
        println!("    failed: {} {}", case.label, case.detail);
    }
    c.passed
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cfg = Config::full(SEED);
    let first = run_checks(&cfg);
    let mut ok = true;
    for c in &first {
        ok &= report(c);
    }

    // Criterion 10: two complete demo reports built from scratch must match byte for byte.
    let (a, b) = (run_suite(&cfg), run_suite(&cfg));
    let again = run_checks(&cfg);
    let mut det = criterion_determinism(&first, &again);
    let same = to_json(&a) == to_json(&b);
    det.passed &= same && a.passed;
    det.cases[0].detail["full_report_identical"] = same.into();
    ok &= report(&det);

    println!("acceptance: {} in {:.1}s", if ok { "all criteria passed" } else { "FAILURES" }, start.elapsed().as_secs_f64());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
