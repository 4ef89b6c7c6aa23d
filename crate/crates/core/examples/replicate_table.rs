//! Replicate the two-way moment table at a small number of replications
//! and grade it against the published values.
//!
//! Usage: `replicate_table [REPS]` (default 100).

use cdpanel::mc_harness::{compare_with_references, replicate_table, TableId, TableOptions};

fn main() {
    let reps = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let opts = TableOptions {
        replications: reps,
        ..TableOptions::default()
    };
    let rows = replicate_table(TableId::T1A, &opts);
    let checks = compare_with_references(&rows);
    for c in checks.iter().filter(|c| c.quantity == "mean") {
        println!(
            "N={:3} T={:3} {:6} mean CD {:8.3}  ref {:7.2}  {}",
            c.row.n,
            c.row.t,
            c.row.case_labels,
            c.observed,
            c.reference.value,
            if c.passed() { "ok" } else { "off" }
        );
    }
    let ok = checks.iter().filter(|c| c.passed()).count();
    println!("{ok}/{} comparisons within tolerance at R = {reps}", checks.len());
}
