//! Exact values and optimal play for the partisan chocolate-bar game.
//!
//! Positions are rectangular bars with a poisoned corner and checkerboard
//! coloring; players cut along lines governed by square colors. Every
//! position is a dyadic number, equal to an alternating blue-red Hackenbush
//! string, so sums are solved by plain addition. A hash-consed game-tree
//! oracle re-derives all of this from first principles.

pub mod chocolate;
pub mod dyadic;
pub mod engine;
pub mod error;
pub mod hackenbush;
pub mod service;
pub mod solver;
pub mod verify;

pub use chocolate::{bar_tree, value_table, Axis, Bar, CellColor, Cut, Sign};
pub use dyadic::{simplest_between, Dyadic};
pub use engine::{GameId, GameStore, Outcome, Player, Relation};
pub use error::{Error, Result};
pub use hackenbush::{hackenbush_value, jacobsthal, string_tree, AlternatingString};
pub use service::{router, serve, GameService};
pub use solver::{rooks_to_sum, RookBoard, ScoredMove, SumGame, SumMove};
pub use verify::{Suite, VerifyReport};
