//! Random subsumption queries checked against sampled and constructed
//! worlds.
//!
//! ```text
//! cargo run --release --example soundness_fuzz -- 7 500
//! ```

use classic::fuzz::{run, FuzzConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let cases = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);
    let report = run(&FuzzConfig {
        seed,
        cases,
        ..Default::default()
    });
    println!(
        "seed {seed}: {} subsumed, {} not, {} worlds checked, {} counter-models, {} failures in {:?}",
        report.subsumed,
        report.not_subsumed,
        report.worlds_checked,
        report.countermodels,
        report.failures.len(),
        report.elapsed
    );
    for f in report.failures.iter().take(10) {
        println!(
            "  case {} {:?}: {} / {}: {}",
            f.case, f.kind, f.subsumer, f.subsumee, f.detail
        );
    }
}
