//! Runs every verification suite at a given bound.
//!
//! ```text
//! cargo run --release --example verify_suites -- 6
//! ```

use partisan_chocolate::engine::DEFAULT_NODE_BUDGET;
use partisan_chocolate::verify::{run, Suite};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bound: u32 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(4);
    let reports = run(Suite::All, bound, DEFAULT_NODE_BUDGET);
    for r in &reports {
        println!("{:>7.3}s {r}", r.elapsed.as_secs_f64());
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("{} checks, {failed} failed", reports.len());
    if failed > 0 {
        std::process::exit(1);
    }
    Ok(())
}
