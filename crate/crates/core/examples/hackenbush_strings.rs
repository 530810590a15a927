//! Alternating Hackenbush strings: closed-form values, oracle values, and the
//! isomorphism between a string and a single-row bar.

use partisan_chocolate::chocolate::{bar_tree, Bar};
use partisan_chocolate::engine::GameStore;
use partisan_chocolate::hackenbush::{
    hackenbush_value, jacobsthal, string_tree, AlternatingString,
};

fn main() -> partisan_chocolate::Result<()> {
    let mut store = GameStore::new();
    println!(
        "{:>3} {:>6} {:>12} {:>12} {:>5}",
        "n", "J_n", "H_n", "oracle", "iso"
    );
    for n in 0..=12 {
        let string = string_tree(&mut store, AlternatingString::new(n))?;
        let row = bar_tree(&mut store, Bar::positive(0, n))?;
        println!(
            "{n:>3} {:>6} {:>12} {:>12} {:>5}",
            jacobsthal(n)?,
            hackenbush_value(n)?.to_string(),
            store.value(string)?.to_string(),
            store.iso(string, row),
        );
    }
    Ok(())
}
