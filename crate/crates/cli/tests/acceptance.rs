//! Acceptance criteria 1–10 at their stated tolerances, one line each.
//!
//! Runtime limits are enforced here rather than in the suites, so that
//! `verify` reports stay byte-identical across runs.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use weil2_cli::suites::{criterion_title, run_criterion, CheckRecord, SuiteConfig};

/// Wall-clock limit for one criterion: per check for criterion 1, for the
/// whole criterion otherwise.
fn limit(c: u8) -> Option<(Duration, bool)> {
    match c {
        1 => Some((Duration::from_secs(10), true)),
        2 => Some((Duration::from_secs(60), false)),
        7 => Some((Duration::from_secs(5), false)),
        _ => None,
    }
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut failed = 0;
    for c in 1..=10u8 {
        let t0 = Instant::now();
        let checks: Vec<CheckRecord> = run_criterion(c, &cfg);
        let total = t0.elapsed();
        let slow = match limit(c) {
            Some((l, true)) => checks.iter().any(|r| r.elapsed > l),
            Some((l, false)) => total > l,
            None => false,
        };
        let ok = !checks.is_empty() && checks.iter().all(|r| r.pass()) && !slow;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<24} {}  ({} checks, {:.2}s{})",
            c,
            criterion_title(c),
            if ok { "PASS" } else { "FAIL" },
            checks.len(),
            total.as_secs_f64(),
            if slow { ", over time limit" } else { "" }
        );
        for r in checks.iter().filter(|r| !r.pass()) {
            println!("    {} {}: {}", r.name, serde_json::to_string(&r.inputs).unwrap_or_default(), r.detail);
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", failed);
        ExitCode::FAILURE
    }
}
