//! Expands bars into explicit game trees and checks the oracle against the
//! closed form, then shows the canonical structure of one small bar.
//!
//! ```text
//! cargo run --release --example oracle_check -- 8
//! ```

use std::time::Instant;

use partisan_chocolate::chocolate::{bar_tree, Bar};
use partisan_chocolate::engine::GameStore;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bound: u32 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(8);
    let mut store = GameStore::new();
    let start = Instant::now();
    let mut mismatches = 0;
    for n in 0..=bound {
        for m in 0..=bound {
            for bar in [Bar::positive(n, m), Bar::negative(n, m)] {
                let tree = bar_tree(&mut store, bar)?;
                let (oracle, closed) = (store.value(tree)?, bar.value()?);
                if oracle != closed {
                    mismatches += 1;
                    println!("{bar}: oracle {oracle}, closed form {closed}");
                }
            }
        }
    }
    println!(
        "{} bars up to ({bound},{bound}) checked in {:?}: {mismatches} mismatches, {} distinct nodes",
        2 * (bound + 1) * (bound + 1),
        start.elapsed(),
        store.node_count()
    );

    let bar = Bar::positive(2, 3);
    let tree = bar_tree(&mut store, bar)?;
    let reduced = store.reduce_dominated(tree)?;
    println!("{bar} = {}", store.display(tree, 6));
    println!("without dominated options: {}", store.display(reduced, 6));
    println!("F-loss holds: {}", store.f_loss_holds(tree)?);
    Ok(())
}
