//! Alternating blue-red Hackenbush strings and the Jacobsthal numbers.

use crate::dyadic::Dyadic;
use crate::engine::{ExpansionKey, GameId, GameStore};
use crate::error::{Error, Result};

/// A single stalk of `length` edges, blue at the ground, alternating colors
/// upward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlternatingString {
    pub length: u32,
}

impl AlternatingString {
    pub fn new(length: u32) -> Self {
        AlternatingString { length }
    }

    pub fn value(self) -> Result<Dyadic> {
        hackenbush_value(self.length)
    }
}

/// `J_n = (2^n - (-1)^n) / 3`.
pub fn jacobsthal(n: u32) -> Result<i64> {
    if n > 125 {
        return Err(Error::Overflow("jacobsthal"));
    }
    let sign: i128 = if n.is_multiple_of(2) { 1 } else { -1 };
    let j = ((1i128 << n) - sign) / 3;
    i64::try_from(j).map_err(|_| Error::Overflow("jacobsthal"))
}

/// Value of the alternating string of length `n`: `H_n = J_n / 2^(n-1)`,
/// with `H_0 = 0`.
pub fn hackenbush_value(n: u32) -> Result<Dyadic> {
    if n == 0 {
        return Ok(Dyadic::ZERO);
    }
    Dyadic::checked_new(jacobsthal(n)?, n - 1)
}

/// Expands a string into a game tree: Left may cut a blue edge, leaving any
/// shorter even length; Right cuts red edges, leaving odd lengths.
pub fn string_tree(store: &mut GameStore, s: AlternatingString) -> Result<GameId> {
    let key = |len: u32| ExpansionKey {
        family: "hackenbush-string",
        params: [len as i64, 0, 0],
    };
    if let Some(id) = store.cached_expansion(&key(s.length)) {
        return Ok(id);
    }
    let mut trees: Vec<GameId> = Vec::with_capacity(s.length as usize + 1);
    for len in 0..=s.length {
        let id = match store.cached_expansion(&key(len)) {
            Some(id) => id,
            None => {
                let left = (0..len).step_by(2).map(|k| trees[k as usize]).collect();
                let right = (1..len).step_by(2).map(|k| trees[k as usize]).collect();
                let id = store.node(left, right)?;
                store.record_expansion(key(len), id);
                id
            }
        };
        trees.push(id);
    }
    Ok(trees[s.length as usize])
}
