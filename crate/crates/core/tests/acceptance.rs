//! Acceptance suite A1-A11: one PASS/FAIL line per criterion, nonzero exit on failure.
//!
//! Run a subset with `cargo test --test acceptance -- A3 A5`.

use hecke_core::harness::acceptance::{run_criterion, write_report, SuiteContext, CRITERIA};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let selected: Vec<&str> =
        CRITERIA.iter().copied().filter(|id| args.is_empty() || args.iter().any(|a| a == id)).collect();
    let cache = tempfile::tempdir().expect("temporary cache directory");
    let ctx = SuiteContext { cache_dir: Some(cache.path().to_path_buf()) };
    let mut reports = Vec::new();
    for id in &selected {
        let report = run_criterion(id, &ctx).expect("known criterion");
        println!("{}", report.summary_line());
        if !report.passed {
            println!("    {}", report.detail);
        }
        reports.push(report);
    }
    let report_path = cache.path().join("acceptance_report.json");
    write_report(&report_path, &reports).expect("report written");
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} passed, {} failed", reports.len() - failed, failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
