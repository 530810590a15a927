//! Analyzes a four-bar endgame and plays it out with the engine on both
//! sides.
//!
//! ```text
//! cargo run --example endgame -- "-(2,4) -(1,3) +(2,3) +(2,0)"
//! ```

use partisan_chocolate::engine::Player;
use partisan_chocolate::solver::SumGame;

fn main() -> partisan_chocolate::Result<()> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "-(2,4) -(1,3) +(2,3) +(2,0)".to_string());
    let mut game: SumGame = text.parse()?;
    println!(
        "{game}: value {}, outcome {}",
        game.value()?,
        game.outcome()?
    );
    for bar in &game.bars {
        println!("  {bar} = {}", bar.value()?);
    }

    println!("Left's options:");
    for m in game.scored_moves(Player::Left)? {
        println!(
            "  {} -> {} ({} squares)",
            m.mv, m.resulting_value, m.squares_removed
        );
    }

    game = game.with_to_move(Player::Left);
    loop {
        let mover = game.to_move.expect("set above");
        let Some(best) = game.best_move(mover)? else {
            println!("{mover} cannot move and loses");
            break;
        };
        game = game.play(best.mv)?;
        println!("{mover}: {} -> {game} = {}", best.mv, best.resulting_value);
    }
    Ok(())
}
