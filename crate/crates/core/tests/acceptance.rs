//! Runs the ten acceptance criteria and prints one line per criterion.
//! Tolerances and runtime budgets live in `monogen::suite`.

use monogen::exec::Execution;
use monogen::suite::{self, CriterionReport};

fn main() {
    let seed = 0;
    let reports: Vec<CriterionReport> = (1..=10)
        .map(|id| {
            let r = suite::run_criterion(id, seed, Execution::default()).expect("criterion exists");
            println!("{}", r.line());
            r
        })
        .collect();
    let failed: Vec<u8> = reports.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    println!(
        "acceptance: {}/10 criteria passed in {:.2}s",
        10 - failed.len(),
        suite::total_time(&reports).as_secs_f64()
    );
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
