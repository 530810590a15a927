//! The partisan chocolate-bar ruleset.
//!
//! A [`Bar`] `(n, m)` is a grid of `n + 1` columns and `m + 1` rows with the
//! poisoned black square at `(0, 0)`. Column index `i` grows to the right,
//! row index `j` grows upward. With positive sign the two squares next to the
//! poison are blue and the rest follows a checkerboard; negative sign swaps
//! blue and red, which is exactly the negative of the positive bar.
//!
//! A vertical cut keeping `k` columns' worth of index (the new `n` is `k`) is
//! governed by the top square of column `k + 1`, i.e. cell `(k + 1, m)`; a
//! horizontal cut keeping `k` is governed by the rightmost square of row
//! `k + 1`, cell `(n, k + 1)`. Left may cut when that square is blue, Right
//! when it is red.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::engine::{ExpansionKey, GameId, GameStore, Player};
use crate::error::{Error, Result};
use crate::hackenbush::hackenbush_value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    fn as_i64(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellColor {
    Black,
    Blue,
    Red,
}

impl fmt::Display for CellColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CellColor::Black => "black",
            CellColor::Blue => "blue",
            CellColor::Red => "red",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Vertical,
    Horizontal,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Vertical => "vertical",
            Axis::Horizontal => "horizontal",
        })
    }
}

/// A cut, recorded by the dimension it leaves behind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cut {
    pub axis: Axis,
    pub keep: u32,
}

impl Cut {
    pub fn vertical(keep: u32) -> Cut {
        Cut {
            axis: Axis::Vertical,
            keep,
        }
    }

    pub fn horizontal(keep: u32) -> Cut {
        Cut {
            axis: Axis::Horizontal,
            keep,
        }
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, keep {}", self.axis, self.keep)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bar {
    pub n: u32,
    pub m: u32,
    pub sign: Sign,
}

impl Bar {
    pub fn new(n: u32, m: u32, sign: Sign) -> Bar {
        Bar { n, m, sign }
    }

    pub fn positive(n: u32, m: u32) -> Bar {
        Bar::new(n, m, Sign::Positive)
    }

    pub fn negative(n: u32, m: u32) -> Bar {
        Bar::new(n, m, Sign::Negative)
    }

    pub fn negated(self) -> Bar {
        Bar {
            sign: self.sign.flip(),
            ..self
        }
    }

    pub fn columns(self) -> u64 {
        self.n as u64 + 1
    }

    pub fn rows(self) -> u64 {
        self.m as u64 + 1
    }

    pub fn squares(self) -> u64 {
        self.columns() * self.rows()
    }

    pub fn cell_color(self, i: u32, j: u32) -> Result<CellColor> {
        if i > self.n || j > self.m {
            return Err(Error::OutOfBounds {
                i: i as i64,
                j: j as i64,
            });
        }
        if i == 0 && j == 0 {
            return Ok(CellColor::Black);
        }
        let odd = (i as u64 + j as u64) % 2 == 1;
        Ok(match (odd, self.sign) {
            (true, Sign::Positive) | (false, Sign::Negative) => CellColor::Blue,
            _ => CellColor::Red,
        })
    }

    /// The square whose color decides who may make `cut`.
    pub fn governing_cell(self, cut: Cut) -> (u32, u32) {
        match cut.axis {
            Axis::Vertical => (cut.keep + 1, self.m),
            Axis::Horizontal => (self.n, cut.keep + 1),
        }
    }

    /// Which player owns a given cut, by parity alone. Positive bars give
    /// Left every vertical `k` with `k + m` even and horizontal `k` with
    /// `n + k` even.
    fn owner(self, cut: Cut) -> Player {
        let parity = match cut.axis {
            Axis::Vertical => cut.keep as u64 + self.m as u64,
            Axis::Horizontal => self.n as u64 + cut.keep as u64,
        };
        match (parity % 2 == 0, self.sign) {
            (true, Sign::Positive) | (false, Sign::Negative) => Player::Left,
            _ => Player::Right,
        }
    }

    /// All cuts available to `player`, verticals first, each by ascending keep.
    pub fn legal_moves(self, player: Player) -> Vec<Cut> {
        let verticals = (0..self.n).map(Cut::vertical);
        let horizontals = (0..self.m).map(Cut::horizontal);
        verticals
            .chain(horizontals)
            .filter(|&c| self.owner(c) == player)
            .collect()
    }

    /// Checks that `player` may make `cut`, explaining the color rule when not.
    pub fn check_cut(self, player: Player, cut: Cut) -> Result<()> {
        let dim = match cut.axis {
            Axis::Vertical => self.n,
            Axis::Horizontal => self.m,
        };
        if cut.keep >= dim {
            return Err(Error::IllegalCut(format!(
                "{} cut keeping {} needs a dimension above {}, but {self} has {}",
                cut.axis, cut.keep, cut.keep, dim
            )));
        }
        let owner = self.owner(cut);
        if owner != player {
            let (i, j) = self.governing_cell(cut);
            let color = self.cell_color(i, j)?;
            let (needed, square) = match cut.axis {
                Axis::Vertical => ("top square of the column right of the cut", "column"),
                Axis::Horizontal => ("rightmost square of the row above the cut", "row"),
            };
            let wanted = match player {
                Player::Left => CellColor::Blue,
                Player::Right => CellColor::Red,
            };
            return Err(Error::IllegalCut(format!(
                "{player} may only cut when the {needed} is {wanted}, but cell ({i},{j}) of that {square} is {color}"
            )));
        }
        Ok(())
    }

    /// The bar left after `cut`, regardless of who makes it.
    pub fn apply_cut(self, cut: Cut) -> Result<Bar> {
        match cut.axis {
            Axis::Vertical if cut.keep < self.n => Ok(Bar {
                n: cut.keep,
                ..self
            }),
            Axis::Horizontal if cut.keep < self.m => Ok(Bar {
                m: cut.keep,
                ..self
            }),
            _ => Err(Error::IllegalCut(format!(
                "{} cut keeping {} is outside {self}",
                cut.axis, cut.keep
            ))),
        }
    }

    /// Unit squares eaten by `cut`.
    pub fn squares_removed(self, cut: Cut) -> u64 {
        match cut.axis {
            Axis::Vertical => (self.n - cut.keep.min(self.n)) as u64 * self.rows(),
            Axis::Horizontal => (self.m - cut.keep.min(self.m)) as u64 * self.columns(),
        }
    }

    /// Closed-form value: `H_{n+m}` if either side is even, `H_{n+m-2}` if
    /// both are odd, times the sign.
    pub fn value(self) -> Result<Dyadic> {
        let (n, m) = (self.n as u64, self.m as u64);
        let index = if n % 2 == 1 && m % 2 == 1 {
            n + m - 2
        } else {
            n + m
        };
        let index = u32::try_from(index).map_err(|_| Error::Overflow("bar value"))?;
        let magnitude = hackenbush_value(index)?;
        match self.sign {
            Sign::Positive => Ok(magnitude),
            Sign::Negative => magnitude.checked_neg(),
        }
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.sign {
            Sign::Positive => '+',
            Sign::Negative => '-',
        };
        write!(f, "{sign}({},{})", self.n, self.m)
    }
}

impl Bar {
    /// Parses `[+|-](n,m)`; error positions are offset by `base`.
    pub(crate) fn parse_at(s: &str, base: usize) -> Result<Bar> {
        let err = |pos: usize, msg: &str| Error::parse(base + pos, msg);
        let bytes = s.as_bytes();
        let mut pos = 0;
        let sign = match bytes.first() {
            Some(b'+') => {
                pos += 1;
                Sign::Positive
            }
            Some(b'-') => {
                pos += 1;
                Sign::Negative
            }
            _ => Sign::Positive,
        };
        let expect = |pos: usize, c: u8| {
            if bytes.get(pos) == Some(&c) {
                Ok(pos + 1)
            } else {
                Err(err(pos, &format!("expected '{}'", c as char)))
            }
        };
        let number = |pos: usize| -> Result<(u32, usize)> {
            let start = pos;
            let end = start
                + bytes[start..]
                    .iter()
                    .take_while(|b| b.is_ascii_digit())
                    .count();
            if end == start {
                return Err(err(start, "expected a nonnegative integer"));
            }
            let v = s[start..end]
                .parse()
                .map_err(|_| err(start, "dimension too large"))?;
            Ok((v, end))
        };
        pos = expect(pos, b'(')?;
        let (n, p) = number(pos)?;
        pos = expect(p, b',')?;
        let (m, p) = number(pos)?;
        pos = expect(p, b')')?;
        if pos != bytes.len() {
            return Err(err(pos, "trailing characters after bar"));
        }
        Ok(Bar { n, m, sign })
    }
}

impl FromStr for Bar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Bar::parse_at(s.trim(), 0)
    }
}

/// Expands a bar into an explicit game tree, memoized per `(n, m, sign)`.
pub fn bar_tree(store: &mut GameStore, bar: Bar) -> Result<GameId> {
    let key = ExpansionKey {
        family: "chocolate-bar",
        params: [bar.n as i64, bar.m as i64, bar.sign.as_i64()],
    };
    if let Some(id) = store.cached_expansion(&key) {
        return Ok(id);
    }
    let mut left = Vec::new();
    for cut in bar.legal_moves(Player::Left) {
        left.push(bar_tree(store, bar.apply_cut(cut)?)?);
    }
    let mut right = Vec::new();
    for cut in bar.legal_moves(Player::Right) {
        right.push(bar_tree(store, bar.apply_cut(cut)?)?);
    }
    let id = store.node(left, right)?;
    store.record_expansion(key, id);
    Ok(id)
}

/// Closed-form values of positive bars, indexed `grid[m][n]`.
pub fn value_table(max_n: u32, max_m: u32) -> Result<Vec<Vec<Dyadic>>> {
    (0..=max_m)
        .map(|m| (0..=max_n).map(|n| Bar::positive(n, m).value()).collect())
        .collect()
}

/// Renders a `grid[m][n]` table with the largest `m` on top, one row per line.
pub fn render_table(grid: &[Vec<Dyadic>], separator: &str) -> String {
    let mut out = String::new();
    for row in grid.iter().rev() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(separator));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bar(s: &str) -> Bar {
        s.parse().unwrap()
    }

    #[test]
    fn colors() {
        let b = Bar::positive(2, 3);
        assert_eq!(b.cell_color(0, 0).unwrap(), CellColor::Black);
        // top-right is blue exactly when n + m is odd
        assert_eq!(b.cell_color(2, 3).unwrap(), CellColor::Blue);
        assert_eq!(
            Bar::positive(2, 2).cell_color(2, 2).unwrap(),
            CellColor::Red
        );
        assert_eq!(b.cell_color(1, 1).unwrap(), CellColor::Red);
        assert_eq!(b.cell_color(2, 0).unwrap(), CellColor::Red);
        assert_eq!(b.cell_color(1, 0).unwrap(), CellColor::Blue);
        assert_eq!(b.cell_color(0, 1).unwrap(), CellColor::Blue);
        assert_eq!(b.negated().cell_color(1, 0).unwrap(), CellColor::Red);
        assert_eq!(b.negated().cell_color(0, 0).unwrap(), CellColor::Black);
        assert!(matches!(
            b.cell_color(3, 0),
            Err(Error::OutOfBounds { i: 3, j: 0 })
        ));
        assert!(b.cell_color(0, 4).is_err());
    }

    #[test]
    fn moves_of_two_three() {
        let b = Bar::positive(2, 3);
        assert_eq!(
            b.legal_moves(Player::Left),
            vec![Cut::vertical(1), Cut::horizontal(0), Cut::horizontal(2)]
        );
        assert_eq!(
            b.legal_moves(Player::Right),
            vec![Cut::vertical(0), Cut::horizontal(1)]
        );
        let left: Vec<Bar> = b
            .legal_moves(Player::Left)
            .into_iter()
            .map(|c| b.apply_cut(c).unwrap())
            .collect();
        assert_eq!(left, vec![bar("(1,3)"), bar("(2,0)"), bar("(2,2)")]);
        // negation swaps the move sets
        assert_eq!(
            b.negated().legal_moves(Player::Left),
            b.legal_moves(Player::Right)
        );
    }

    #[test]
    fn degenerate_bars_have_few_moves() {
        assert!(Bar::positive(1, 1).legal_moves(Player::Left).is_empty());
        assert_eq!(Bar::positive(1, 1).legal_moves(Player::Right).len(), 2);
        assert!(Bar::positive(0, 0).legal_moves(Player::Left).is_empty());
        assert!(Bar::positive(0, 0).legal_moves(Player::Right).is_empty());
    }

    #[test]
    fn cuts() {
        let b = Bar::positive(2, 3);
        assert_eq!(b.apply_cut(Cut::vertical(1)).unwrap(), bar("+(1,3)"));
        assert_eq!(b.apply_cut(Cut::horizontal(1)).unwrap(), bar("+(2,1)"));
        assert_eq!(
            bar("-(2,4)").apply_cut(Cut::vertical(1)).unwrap(),
            bar("-(1,4)")
        );
        assert!(matches!(
            b.apply_cut(Cut::vertical(2)),
            Err(Error::IllegalCut(_))
        ));
        assert!(b.apply_cut(Cut::horizontal(3)).is_err());
        assert_eq!(bar("-(2,4)").squares_removed(Cut::vertical(1)), 5);
        assert_eq!(bar("-(2,4)").squares_removed(Cut::horizontal(3)), 3);
    }

    #[test]
    fn check_cut_names_the_color_rule() {
        let b = Bar::positive(2, 3);
        assert!(b.check_cut(Player::Left, Cut::vertical(1)).is_ok());
        let err = b
            .check_cut(Player::Left, Cut::vertical(0))
            .unwrap_err()
            .to_string();
        assert!(err.contains("blue") && err.contains("red"), "{err}");
        let err = b
            .check_cut(Player::Right, Cut::horizontal(0))
            .unwrap_err()
            .to_string();
        assert!(err.contains("row"), "{err}");
        assert!(b.check_cut(Player::Left, Cut::vertical(5)).is_err());
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(bar("+(2,3)").value().unwrap(), Dyadic::new(11, 4));
        assert_eq!(bar("+(1,3)").value().unwrap(), Dyadic::new(1, 1));
        assert_eq!(bar("+(1,1)").value().unwrap(), Dyadic::ZERO);
        assert_eq!(bar("+(9,9)").value().unwrap(), Dyadic::new(21845, 15));
        assert_eq!(bar("-(2,4)").value().unwrap(), Dyadic::new(-21, 5));
        assert!(Bar::positive(40, 40).value().is_err());
    }

    #[test]
    fn table_shapes() {
        let t = value_table(0, 0).unwrap();
        assert_eq!(t, vec![vec![Dyadic::ZERO]]);
        let t = value_table(3, 0).unwrap();
        assert_eq!(render_table(&t, ", "), "0, 1, 1/2^1, 3/2^2\n");
        let t = value_table(9, 9).unwrap();
        assert_eq!(t.len(), 10);
        assert!(t.iter().all(|r| r.len() == 10));
    }

    #[test]
    fn notation() {
        assert_eq!(bar("+(2,3)"), Bar::positive(2, 3));
        assert_eq!(bar("(2,3)"), Bar::positive(2, 3));
        assert_eq!(bar("-(1,3)"), Bar::negative(1, 3));
        assert_eq!(Bar::negative(1, 3).to_string(), "-(1,3)");
        for (bad, pos) in [
            ("+(2;3)", 3),
            ("+2,3)", 1),
            ("+(2,3", 5),
            ("+(a,3)", 2),
            ("+(2,3)x", 6),
        ] {
            match bad.parse::<Bar>() {
                Err(Error::Parse { position, .. }) => assert_eq!(position, pos, "{bad}"),
                other => panic!("{bad}: {other:?}"),
            }
        }
    }

    #[test]
    fn trees_of_small_bars() {
        let mut store = GameStore::new();
        let z = bar_tree(&mut store, Bar::positive(0, 0)).unwrap();
        assert_eq!(z, store.zero());
        let pos = bar_tree(&mut store, Bar::positive(2, 2)).unwrap();
        let neg = bar_tree(&mut store, Bar::negative(2, 2)).unwrap();
        let negated = store.neg(pos).unwrap();
        assert!(store.iso(neg, negated));
        let t = bar_tree(&mut store, Bar::positive(2, 3)).unwrap();
        assert_eq!(store.value(t).unwrap(), Dyadic::new(11, 4));
    }
}
