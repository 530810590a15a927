//! Rooks that only move left or down, colored by square parity, are sums of
//! bars. Reads `B x y` / `W x y` lines from stdin, or uses a sample board.
//!
//! ```text
//! printf 'B 2 3\nW 4 1\n' | cargo run --example rook_board
//! ```

use std::io::{IsTerminal, Read};

use partisan_chocolate::engine::Player;
use partisan_chocolate::solver::RookBoard;

const SAMPLE: &str = "W 2 4\nW 1 3\nB 2 3\nB 2 0\n";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut text = String::new();
    if !std::io::stdin().is_terminal() {
        std::io::stdin().read_to_string(&mut text)?;
    }
    if text.trim().is_empty() {
        text = SAMPLE.to_string();
    }
    let board = RookBoard::parse(&text)?;
    let sum = board.to_sum()?;
    for (rook, bar) in board.rooks.iter().zip(&sum.bars) {
        println!(
            "{:?} rook at ({}, {}) is {bar} = {}",
            rook.color,
            rook.x,
            rook.y,
            bar.value()?
        );
    }
    println!("total {} ({})", sum.value()?, sum.outcome()?);
    for player in [Player::Left, Player::Right] {
        match sum.best_move(player)? {
            Some(m) => println!("{player} plays {} -> {}", m.mv, m.resulting_value),
            None => println!("{player} has no move"),
        }
    }
    Ok(())
}
