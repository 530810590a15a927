//! Disjunctive sums of bars and optimal play.
//!
//! Every component is a number, so the value of a sum is the plain sum of
//! its component values and the side with a positive (Left) or negative
//! (Right) total wins. A mover always loses value by playing in a number;
//! the best move is the one losing the least. Ties are broken toward the
//! component with the finest denominator, then toward eating more squares.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chocolate::{Axis, Bar, Cut, Sign};
use crate::dyadic::Dyadic;
use crate::engine::{Outcome, Player};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SumGame {
    pub bars: Vec<Bar>,
    pub to_move: Option<Player>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SumMove {
    pub component: usize,
    pub cut: Cut,
}

impl fmt::Display for SumMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "component {}: {}", self.component, self.cut)
    }
}

/// A legal move together with the total value it leads to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoredMove {
    #[serde(flatten)]
    pub mv: SumMove,
    pub resulting_value: Dyadic,
    pub squares_removed: u64,
}

impl SumGame {
    pub fn new(bars: Vec<Bar>) -> SumGame {
        SumGame {
            bars,
            to_move: None,
        }
    }

    pub fn with_to_move(mut self, player: Player) -> SumGame {
        self.to_move = Some(player);
        self
    }

    pub fn value(&self) -> Result<Dyadic> {
        Dyadic::checked_sum(
            self.bars
                .iter()
                .map(|b| b.value())
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// `L` for positive totals, `R` for negative, `P` for zero. Sums of
    /// numbers are never first-player wins.
    pub fn outcome(&self) -> Result<Outcome> {
        Ok(match self.value()?.signum() {
            1 => Outcome::L,
            -1 => Outcome::R,
            _ => Outcome::P,
        })
    }

    pub fn legal_moves(&self, player: Player) -> Vec<SumMove> {
        self.bars
            .iter()
            .enumerate()
            .flat_map(|(component, bar)| {
                bar.legal_moves(player)
                    .into_iter()
                    .map(move |cut| SumMove { component, cut })
            })
            .collect()
    }

    pub fn has_moves(&self, player: Player) -> bool {
        self.bars.iter().any(|b| !b.legal_moves(player).is_empty())
    }

    /// Every legal move for `player`, annotated with the resulting total.
    pub fn scored_moves(&self, player: Player) -> Result<Vec<ScoredMove>> {
        let total = self.value()?;
        let mut out = Vec::new();
        for (component, bar) in self.bars.iter().enumerate() {
            let before = bar.value()?;
            for cut in bar.legal_moves(player) {
                let after = bar.apply_cut(cut)?.value()?;
                out.push(ScoredMove {
                    mv: SumMove { component, cut },
                    resulting_value: total.checked_sub(before)?.checked_add(after)?,
                    squares_removed: bar.squares_removed(cut),
                });
            }
        }
        Ok(out)
    }

    /// The engine's choice for `player`, or `None` if it has no move.
    pub fn best_move(&self, player: Player) -> Result<Option<ScoredMove>> {
        let exponents = self
            .bars
            .iter()
            .map(|b| b.value().map(Dyadic::exponent))
            .collect::<Result<Vec<_>>>()?;
        let preference = |a: &ScoredMove, b: &ScoredMove| -> Ordering {
            let by_value = match player {
                Player::Left => a.resulting_value.cmp(&b.resulting_value),
                Player::Right => b.resulting_value.cmp(&a.resulting_value),
            };
            by_value
                .then(exponents[a.mv.component].cmp(&exponents[b.mv.component]))
                .then(a.squares_removed.cmp(&b.squares_removed))
                .then(b.mv.component.cmp(&a.mv.component))
                .then(axis_rank(b.mv.cut.axis).cmp(&axis_rank(a.mv.cut.axis)))
                .then(b.mv.cut.keep.cmp(&a.mv.cut.keep))
        };
        Ok(self.scored_moves(player)?.into_iter().max_by(preference))
    }

    /// Plays `mv` for the side to move.
    pub fn play(&self, mv: SumMove) -> Result<SumGame> {
        let mover = self
            .to_move
            .ok_or_else(|| Error::WrongTurn("no side is set to move".into()))?;
        self.play_as(mover, mv)
    }

    /// Plays `mv` for `mover`; if a side to move is set it must be `mover`.
    pub fn play_as(&self, mover: Player, mv: SumMove) -> Result<SumGame> {
        if let Some(expected) = self.to_move {
            if expected != mover {
                return Err(Error::WrongTurn(format!(
                    "it is {expected}'s turn, not {mover}'s"
                )));
            }
        }
        let bar = self.bars.get(mv.component).ok_or_else(|| {
            Error::IllegalMove(format!(
                "component {} does not exist (the sum has {})",
                mv.component,
                self.bars.len()
            ))
        })?;
        bar.check_cut(mover, mv.cut)
            .map_err(|e| Error::IllegalMove(format!("component {}: {}", mv.component, strip(e))))?;
        let mut bars = self.bars.clone();
        bars[mv.component] = bar.apply_cut(mv.cut)?;
        Ok(SumGame {
            bars,
            to_move: Some(mover.opponent()),
        })
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::IllegalCut(s) => s,
        other => other.to_string(),
    }
}

fn axis_rank(axis: Axis) -> u8 {
    match axis {
        Axis::Vertical => 0,
        Axis::Horizontal => 1,
    }
}

impl fmt::Display for SumGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.bars.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for SumGame {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bars = Vec::new();
        let mut offset = 0;
        for token in s.split_inclusive(char::is_whitespace) {
            let trimmed = token.trim_end();
            if !trimmed.is_empty() {
                bars.push(Bar::parse_at(trimmed, offset)?);
            }
            offset += token.len();
        }
        Ok(SumGame::new(bars))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RookColor {
    #[serde(rename = "B")]
    Black,
    #[serde(rename = "W")]
    White,
}

/// Which squares of the board are dark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DarkSquares {
    /// `x + y` even, so the corner `(0, 0)` is dark.
    #[default]
    EvenSum,
    OddSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rook {
    pub color: RookColor,
    pub x: i64,
    pub y: i64,
}

/// Rooks that only move left or down. Left moves black rooks onto dark
/// squares and white rooks onto light squares; Right does the opposite.
/// Rooks never block each other and may share squares.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RookBoard {
    pub rooks: Vec<Rook>,
    pub dark: DarkSquares,
    pub size: u32,
}

pub const DEFAULT_BOARD_SIZE: u32 = 8;

impl RookBoard {
    pub fn new(rooks: Vec<Rook>) -> RookBoard {
        RookBoard {
            rooks,
            dark: DarkSquares::EvenSum,
            size: DEFAULT_BOARD_SIZE,
        }
    }

    /// One rook per bar at `(n, m)`: black for positive bars, white for
    /// negative ones (dark squares at even coordinate sums).
    pub fn from_sum(sum: &SumGame) -> RookBoard {
        let size = sum
            .bars
            .iter()
            .map(|b| b.n.max(b.m) + 1)
            .max()
            .unwrap_or(0)
            .max(DEFAULT_BOARD_SIZE);
        let rooks = sum
            .bars
            .iter()
            .map(|b| Rook {
                color: match b.sign {
                    Sign::Positive => RookColor::Black,
                    Sign::Negative => RookColor::White,
                },
                x: b.n as i64,
                y: b.m as i64,
            })
            .collect();
        RookBoard {
            rooks,
            dark: DarkSquares::EvenSum,
            size,
        }
    }

    /// Parses one rook per line, `B x y` or `W x y`; blank lines are skipped.
    pub fn parse(text: &str) -> Result<RookBoard> {
        let mut rooks = Vec::new();
        let mut offset = 0;
        for line in text.split_inclusive('\n') {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if !fields.is_empty() {
                if fields.len() != 3 {
                    return Err(Error::parse(offset, "expected \"B x y\" or \"W x y\""));
                }
                let color = match fields[0] {
                    "B" | "b" => RookColor::Black,
                    "W" | "w" => RookColor::White,
                    other => {
                        return Err(Error::parse(
                            offset,
                            format!("unknown rook color {other:?}"),
                        ))
                    }
                };
                let coord = |f: &str| {
                    f.parse::<i64>()
                        .map_err(|_| Error::parse(offset, format!("bad coordinate {f:?}")))
                };
                rooks.push(Rook {
                    color,
                    x: coord(fields[1])?,
                    y: coord(fields[2])?,
                });
            }
            offset += line.len();
        }
        Ok(RookBoard::new(rooks))
    }

    /// Whether Left's targets for a rook of this color are the even-sum squares.
    fn left_targets_even(&self, color: RookColor) -> bool {
        let dark_even = self.dark == DarkSquares::EvenSum;
        match color {
            RookColor::Black => dark_even,
            RookColor::White => !dark_even,
        }
    }

    /// The equivalent sum of bars: a rook on `(x, y)` is the bar `(x, y)`,
    /// positive when Left's target squares have even coordinate sums.
    pub fn to_sum(&self) -> Result<SumGame> {
        let mut bars = Vec::with_capacity(self.rooks.len());
        for rook in &self.rooks {
            if rook.x < 0 || rook.y < 0 || rook.x >= self.size as i64 || rook.y >= self.size as i64
            {
                return Err(Error::OutOfBounds {
                    i: rook.x,
                    j: rook.y,
                });
            }
            let sign = if self.left_targets_even(rook.color) {
                Sign::Positive
            } else {
                Sign::Negative
            };
            bars.push(Bar::new(rook.x as u32, rook.y as u32, sign));
        }
        Ok(SumGame::new(bars))
    }
}

pub fn rooks_to_sum(board: &RookBoard) -> Result<SumGame> {
    board.to_sum()
}
