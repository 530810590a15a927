//! Prints the value grid of positive bars, largest `m` on top.
//!
//! ```text
//! cargo run --example value_table -- 9 9
//! ```

use partisan_chocolate::chocolate::{render_table, value_table};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let max_n: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(9);
    let max_m: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(max_n);
    let grid = value_table(max_n, max_m)?;
    print!("{}", render_table(&grid, "  "));
    Ok(())
}
