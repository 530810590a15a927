//! Short partisan game trees and the brute-force oracle.
//!
//! Trees live in a [`GameStore`], which hash-conses every node: option sets
//! are sorted and deduplicated, and two structurally equal trees always get
//! the same [`GameId`]. All memo tables (negation, sums, outcomes, values)
//! are keyed on those ids, so the DAG of a position is explored once even
//! though its tree would be exponentially large.
//!
//! Nothing here knows about chocolate bars; the oracle answers are computed
//! purely from the recursive definitions of outcome, sum and negation.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dyadic::{simplest_between, Dyadic};
use crate::error::{Error, Result};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Left => Player::Right,
            Player::Right => Player::Left,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Left => "L",
            Player::Right => "R",
        })
    }
}

impl std::str::FromStr for Player {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" | "l" | "left" | "Left" => Ok(Player::Left),
            "R" | "r" | "right" | "Right" => Ok(Player::Right),
            _ => Err(Error::parse(0, format!("expected L or R, got {s:?}"))),
        }
    }
}

/// Outcome class under normal play.
///
/// Ordered from Left's point of view: `R < N < L`, `R < P < L`, with `N` and
/// `P` incomparable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    L,
    N,
    P,
    R,
}

impl Outcome {
    fn from_first_player_wins(left_first: bool, right_first: bool) -> Outcome {
        match (left_first, right_first) {
            (true, false) => Outcome::L,
            (false, true) => Outcome::R,
            (true, true) => Outcome::N,
            (false, false) => Outcome::P,
        }
    }
}

impl PartialOrd for Outcome {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use Outcome::*;
        match (self, other) {
            (a, b) if a == b => Some(Ordering::Equal),
            (L, _) | (_, R) => Some(Ordering::Greater),
            (R, _) | (_, L) => Some(Ordering::Less),
            _ => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    Less,
    Equal,
    Greater,
    Confused,
}

impl Relation {
    pub fn reversed(self) -> Relation {
        match self {
            Relation::Less => Relation::Greater,
            Relation::Greater => Relation::Less,
            r => r,
        }
    }

    /// `g >= h`
    pub fn is_ge(self) -> bool {
        matches!(self, Relation::Greater | Relation::Equal)
    }

    /// `g <= h`
    pub fn is_le(self) -> bool {
        matches!(self, Relation::Less | Relation::Equal)
    }
}

/// Handle to a hash-consed tree inside a [`GameStore`].
///
/// Ids from different stores must not be mixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GameId(u32);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Node {
    left: Box<[GameId]>,
    right: Box<[GameId]>,
}

/// Cache key for expanding ruleset positions into trees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExpansionKey {
    pub family: &'static str,
    pub params: [i64; 3],
}

pub struct GameStore {
    nodes: Vec<Node>,
    index: HashMap<Node, GameId>,
    budget: u64,
    work: u64,
    neg_memo: HashMap<GameId, GameId>,
    sum_memo: HashMap<(GameId, GameId), GameId>,
    // (left wins moving first, right wins moving first)
    first_player_memo: HashMap<GameId, (bool, bool)>,
    value_memo: HashMap<GameId, std::result::Result<Dyadic, Error>>,
    iso_memo: HashMap<(GameId, GameId), bool>,
    expansions: HashMap<ExpansionKey, GameId>,
    zero: GameId,
}

impl Default for GameStore {
    fn default() -> Self {
        Self::new()
    }
}

impl GameStore {
    pub fn new() -> Self {
        Self::with_budget(DEFAULT_NODE_BUDGET)
    }

    /// A store that fails with [`Error::ResourceLimit`] after `budget` nodes
    /// have been expanded (interned or combined).
    pub fn with_budget(budget: u64) -> Self {
        let zero_node = Node {
            left: Box::new([]),
            right: Box::new([]),
        };
        let mut index = HashMap::new();
        index.insert(zero_node.clone(), GameId(0));
        GameStore {
            nodes: vec![zero_node],
            index,
            budget,
            work: 0,
            neg_memo: HashMap::new(),
            sum_memo: HashMap::new(),
            first_player_memo: HashMap::new(),
            value_memo: HashMap::new(),
            iso_memo: HashMap::new(),
            expansions: HashMap::new(),
            zero: GameId(0),
        }
    }

    /// The terminal position `{ | }`.
    pub fn zero(&self) -> GameId {
        self.zero
    }

    /// Number of distinct trees interned so far.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes_expanded(&self) -> u64 {
        self.work
    }

    fn charge(&mut self) -> Result<()> {
        self.work += 1;
        if self.work > self.budget {
            Err(Error::ResourceLimit {
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    /// Interns `{ left | right }`. Option lists are treated as sets.
    pub fn node(&mut self, mut left: Vec<GameId>, mut right: Vec<GameId>) -> Result<GameId> {
        self.charge()?;
        left.sort_unstable();
        left.dedup();
        right.sort_unstable();
        right.dedup();
        let node = Node {
            left: left.into_boxed_slice(),
            right: right.into_boxed_slice(),
        };
        if let Some(&id) = self.index.get(&node) {
            return Ok(id);
        }
        let id = GameId(
            u32::try_from(self.nodes.len()).map_err(|_| Error::ResourceLimit {
                budget: self.budget,
            })?,
        );
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        Ok(id)
    }

    pub fn left_options(&self, g: GameId) -> &[GameId] {
        &self.nodes[g.0 as usize].left
    }

    pub fn right_options(&self, g: GameId) -> &[GameId] {
        &self.nodes[g.0 as usize].right
    }

    pub fn options(&self, g: GameId, player: Player) -> &[GameId] {
        match player {
            Player::Left => self.left_options(g),
            Player::Right => self.right_options(g),
        }
    }

    pub fn cached_expansion(&self, key: &ExpansionKey) -> Option<GameId> {
        self.expansions.get(key).copied()
    }

    pub fn record_expansion(&mut self, key: ExpansionKey, id: GameId) {
        self.expansions.insert(key, id);
    }

    /// `-G = { -G^R | -G^L }`
    pub fn neg(&mut self, g: GameId) -> Result<GameId> {
        if let Some(&id) = self.neg_memo.get(&g) {
            return Ok(id);
        }
        let (left, right) = self.option_lists(g);
        let new_left = right
            .iter()
            .map(|&x| self.neg(x))
            .collect::<Result<Vec<_>>>()?;
        let new_right = left
            .iter()
            .map(|&x| self.neg(x))
            .collect::<Result<Vec<_>>>()?;
        let id = self.node(new_left, new_right)?;
        self.neg_memo.insert(g, id);
        self.neg_memo.insert(id, g);
        Ok(id)
    }

    /// Disjunctive sum `G + H = { G^L + H, G + H^L | G^R + H, G + H^R }`.
    pub fn sum(&mut self, g: GameId, h: GameId) -> Result<GameId> {
        let key = if g <= h { (g, h) } else { (h, g) };
        if let Some(&id) = self.sum_memo.get(&key) {
            return Ok(id);
        }
        let (gl, gr) = self.option_lists(g);
        let (hl, hr) = self.option_lists(h);
        let mut left = Vec::with_capacity(gl.len() + hl.len());
        for x in gl {
            left.push(self.sum(x, h)?);
        }
        for y in hl {
            left.push(self.sum(g, y)?);
        }
        let mut right = Vec::with_capacity(gr.len() + hr.len());
        for x in gr {
            right.push(self.sum(x, h)?);
        }
        for y in hr {
            right.push(self.sum(g, y)?);
        }
        let id = self.node(left, right)?;
        self.sum_memo.insert(key, id);
        Ok(id)
    }

    pub fn sum_all(&mut self, games: &[GameId]) -> Result<GameId> {
        games.iter().try_fold(self.zero, |acc, &g| self.sum(acc, g))
    }

    fn option_lists(&self, g: GameId) -> (Vec<GameId>, Vec<GameId>) {
        let node = &self.nodes[g.0 as usize];
        (node.left.to_vec(), node.right.to_vec())
    }

    /// Whether each player wins when moving first: a mover wins iff some
    /// option is a loss for the opponent moving next.
    fn first_player_wins(&mut self, g: GameId) -> (bool, bool) {
        if let Some(&r) = self.first_player_memo.get(&g) {
            return r;
        }
        let (left, right) = self.option_lists(g);
        let left_first = left.iter().any(|&x| !self.first_player_wins(x).1);
        let right_first = right.iter().any(|&x| !self.first_player_wins(x).0);
        self.first_player_memo.insert(g, (left_first, right_first));
        (left_first, right_first)
    }

    pub fn outcome(&mut self, g: GameId) -> Outcome {
        let (l, r) = self.first_player_wins(g);
        Outcome::from_first_player_wins(l, r)
    }

    /// Compares via the outcome of `G - H`.
    pub fn compare(&mut self, g: GameId, h: GameId) -> Result<Relation> {
        if g == h {
            return Ok(Relation::Equal);
        }
        let minus_h = self.neg(h)?;
        let diff = self.sum(g, minus_h)?;
        Ok(match self.outcome(diff) {
            Outcome::P => Relation::Equal,
            Outcome::L => Relation::Greater,
            Outcome::R => Relation::Less,
            Outcome::N => Relation::Confused,
        })
    }

    /// The number `g` equals, checking numberhood at every node on the way.
    ///
    /// Fails with [`Error::NotANumber`] if some node has a Left option value
    /// at least as large as a Right option value.
    pub fn value(&mut self, g: GameId) -> Result<Dyadic> {
        if let Some(r) = self.value_memo.get(&g) {
            return r.clone();
        }
        let result = self.compute_value(g);
        self.value_memo.insert(g, result.clone());
        result
    }

    fn compute_value(&mut self, g: GameId) -> Result<Dyadic> {
        let (left, right) = self.option_lists(g);
        let mut best_left: Option<Dyadic> = None;
        for x in left {
            let v = self.value(x)?;
            best_left = Some(best_left.map_or(v, |b| b.max(v)));
        }
        let mut best_right: Option<Dyadic> = None;
        for x in right {
            let v = self.value(x)?;
            best_right = Some(best_right.map_or(v, |b| b.min(v)));
        }
        if let (Some(l), Some(r)) = (best_left, best_right) {
            if l >= r {
                return Err(Error::NotANumber { left: l, right: r });
            }
        }
        simplest_between(best_left, best_right)
    }

    /// Removes dominated options for `side`: a Left option is dropped when
    /// some other kept Left option is `>=` it (dually for Right). Of a group
    /// of equal options the first in id order survives.
    pub fn dominate(&mut self, options: &[GameId], side: Player) -> Result<Vec<GameId>> {
        let mut kept: Vec<GameId> = Vec::new();
        'next: for &candidate in options {
            let mut i = 0;
            while i < kept.len() {
                let rel = self.compare(candidate, kept[i])?;
                let (candidate_dominated, candidate_dominates) = match side {
                    Player::Left => (rel.is_le(), rel == Relation::Greater),
                    Player::Right => (rel.is_ge(), rel == Relation::Less),
                };
                if candidate_dominated {
                    continue 'next;
                }
                if candidate_dominates {
                    kept.swap_remove(i);
                } else {
                    i += 1;
                }
            }
            kept.push(candidate);
        }
        kept.sort_unstable();
        Ok(kept)
    }

    /// `g` with both option sets reduced by domination.
    pub fn reduce_dominated(&mut self, g: GameId) -> Result<GameId> {
        let (left, right) = self.option_lists(g);
        let left = self.dominate(&left, Player::Left)?;
        let right = self.dominate(&right, Player::Right)?;
        self.node(left, right)
    }

    /// F-loss property at `g` (not hereditary): every pair `(G^L, G^R)` has a
    /// `G^RL >= G^L` or a `G^LR <= G^R`.
    pub fn f_loss_holds(&mut self, g: GameId) -> Result<bool> {
        let (left, right) = self.option_lists(g);
        for &gl in &left {
            for &gr in &right {
                if !self.f_loss_pair(gl, gr)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn f_loss_pair(&mut self, gl: GameId, gr: GameId) -> Result<bool> {
        for grl in self.left_options(gr).to_vec() {
            if self.compare(grl, gl)?.is_ge() {
                return Ok(true);
            }
        }
        for glr in self.right_options(gl).to_vec() {
            if self.compare(glr, gr)?.is_le() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Structural isomorphism: a bijection between option sets on each side
    /// whose paired options are recursively isomorphic.
    pub fn iso(&mut self, g: GameId, h: GameId) -> bool {
        if g == h {
            return true;
        }
        let key = if g <= h { (g, h) } else { (h, g) };
        if let Some(&r) = self.iso_memo.get(&key) {
            return r;
        }
        let (gl, gr) = self.option_lists(g);
        let (hl, hr) = self.option_lists(h);
        let r = self.options_match(&gl, &hl) && self.options_match(&gr, &hr);
        self.iso_memo.insert(key, r);
        r
    }

    // Bipartite matching by augmenting paths; option sets are small.
    fn options_match(&mut self, a: &[GameId], b: &[GameId]) -> bool {
        if a.len() != b.len() {
            return false;
        }
        let adjacency: Vec<Vec<usize>> = a
            .iter()
            .map(|&x| {
                b.iter()
                    .enumerate()
                    .filter(|&(_, &y)| self.iso(x, y))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        let mut matched_to: Vec<Option<usize>> = vec![None; b.len()];
        fn augment(
            i: usize,
            adjacency: &[Vec<usize>],
            seen: &mut [bool],
            matched_to: &mut [Option<usize>],
        ) -> bool {
            for &j in &adjacency[i] {
                if seen[j] {
                    continue;
                }
                seen[j] = true;
                if matched_to[j].is_none_or(|k| augment(k, adjacency, seen, matched_to)) {
                    matched_to[j] = Some(i);
                    return true;
                }
            }
            false
        }
        (0..a.len()).all(|i| {
            let mut seen = vec![false; b.len()];
            augment(i, &adjacency, &mut seen, &mut matched_to)
        })
    }

    /// Renders `g` in brace notation, replacing subtrees deeper than `depth`
    /// with `...`.
    pub fn display(&self, g: GameId, depth: usize) -> String {
        let mut out = String::new();
        self.write_tree(g, depth, &mut out);
        out
    }

    fn write_tree(&self, g: GameId, depth: usize, out: &mut String) {
        if g == self.zero {
            out.push('0');
            return;
        }
        if depth == 0 {
            out.push_str("...");
            return;
        }
        out.push('{');
        for (i, &x) in self.left_options(g).iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            self.write_tree(x, depth - 1, out);
        }
        out.push_str(" | ");
        for (i, &x) in self.right_options(g).iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            self.write_tree(x, depth - 1, out);
        }
        out.push('}');
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Integer `n` as `{n-1 | }` or `{ | n+1}`.
    fn integer(store: &mut GameStore, n: i64) -> GameId {
        let mut g = store.zero();
        for _ in 0..n.unsigned_abs() {
            g = if n > 0 {
                store.node(vec![g], vec![]).unwrap()
            } else {
                store.node(vec![], vec![g]).unwrap()
            };
        }
        g
    }

    fn star(store: &mut GameStore) -> GameId {
        let z = store.zero();
        store.node(vec![z], vec![z]).unwrap()
    }

    #[test]
    fn outcome_lattice() {
        use Outcome::*;
        assert!(L > N && L > P && N > R && P > R && L > R);
        assert_eq!(N.partial_cmp(&P), None);
        assert_eq!(P.partial_cmp(&N), None);
        assert_eq!(L.partial_cmp(&L), Some(Ordering::Equal));
    }

    #[test]
    fn basic_outcomes() {
        let mut s = GameStore::new();
        let z = s.zero();
        assert_eq!(s.outcome(z), Outcome::P);
        let one = integer(&mut s, 1);
        assert_eq!(s.outcome(one), Outcome::L);
        let m1 = integer(&mut s, -1);
        assert_eq!(s.outcome(m1), Outcome::R);
        let st = star(&mut s);
        assert_eq!(s.outcome(st), Outcome::N);
    }

    #[test]
    fn negation_is_an_involution_and_cancels() {
        let mut s = GameStore::new();
        let z = s.zero();
        let one = integer(&mut s, 1);
        let half = s.node(vec![z], vec![one]).unwrap();
        let g = s.node(vec![half, z], vec![one]).unwrap();
        let ng = s.neg(g).unwrap();
        assert_eq!(s.neg(ng).unwrap(), g);
        let diff = s.sum(g, ng).unwrap();
        assert_eq!(s.outcome(diff), Outcome::P);
        assert_eq!(s.sum(z, g).unwrap(), g);
        assert_eq!(s.sum(g, z).unwrap(), g);
    }

    #[test]
    fn half_plus_half_is_one() {
        let mut s = GameStore::new();
        let z = s.zero();
        let one = integer(&mut s, 1);
        let half = s.node(vec![z], vec![one]).unwrap();
        let two_halves = s.sum(half, half).unwrap();
        assert_eq!(s.compare(two_halves, one).unwrap(), Relation::Equal);
        assert_eq!(s.compare(half, one).unwrap(), Relation::Less);
        assert_eq!(s.compare(one, half).unwrap(), Relation::Greater);
        assert_eq!(s.value(half).unwrap(), Dyadic::new(1, 1));
        assert_eq!(s.value(two_halves).unwrap(), Dyadic::ONE);
    }

    #[test]
    fn star_is_confused_with_zero_and_not_a_number() {
        let mut s = GameStore::new();
        let z = s.zero();
        let st = star(&mut s);
        assert_eq!(s.compare(st, z).unwrap(), Relation::Confused);
        assert!(matches!(s.value(st), Err(Error::NotANumber { .. })));
        // still fails when cached
        assert!(matches!(s.value(st), Err(Error::NotANumber { .. })));
    }

    #[test]
    fn values_of_integers() {
        let mut s = GameStore::new();
        for n in -4..=4 {
            let g = integer(&mut s, n);
            assert_eq!(s.value(g).unwrap(), Dyadic::integer(n));
        }
    }

    #[test]
    fn dominate_keeps_best_options() {
        let mut s = GameStore::new();
        let z = s.zero();
        let one = integer(&mut s, 1);
        let two = integer(&mut s, 2);
        let half = s.node(vec![z], vec![one]).unwrap();
        assert_eq!(
            s.dominate(&[z, half, one], Player::Left).unwrap(),
            vec![one]
        );
        assert_eq!(s.dominate(&[z, half, one], Player::Right).unwrap(), vec![z]);
        assert!(s.dominate(&[], Player::Left).unwrap().is_empty());
        assert_eq!(s.dominate(&[two], Player::Left).unwrap(), vec![two]);
        // incomparable options both survive
        let st = star(&mut s);
        let mut kept = s.dominate(&[z, st], Player::Left).unwrap();
        kept.sort();
        let mut expected = vec![z, st];
        expected.sort();
        assert_eq!(kept, expected);
    }

    #[test]
    fn reduce_dominated_preserves_value() {
        let mut s = GameStore::new();
        let z = s.zero();
        let one = integer(&mut s, 1);
        let two = integer(&mut s, 2);
        let half = s.node(vec![z], vec![one]).unwrap();
        let g = s.node(vec![z, half], vec![one, two]).unwrap();
        let r = s.reduce_dominated(g).unwrap();
        assert_eq!(s.left_options(r), &[half]);
        assert_eq!(s.right_options(r), &[one]);
        assert_eq!(s.value(r).unwrap(), s.value(g).unwrap());
        assert_eq!(s.compare(r, g).unwrap(), Relation::Equal);
    }

    #[test]
    fn iso_distinguishes_equal_but_different_trees() {
        let mut s = GameStore::new();
        let z = s.zero();
        let one = integer(&mut s, 1);
        let m1 = integer(&mut s, -1);
        // {-1 | 1} = 0 but is not the empty tree
        let g = s.node(vec![m1], vec![one]).unwrap();
        assert_eq!(s.compare(g, z).unwrap(), Relation::Equal);
        assert!(!s.iso(g, z));
        assert!(s.iso(g, g));
    }

    #[test]
    fn f_loss_on_simple_games() {
        let mut s = GameStore::new();
        let z = s.zero();
        assert!(s.f_loss_holds(z).unwrap());
        let st = star(&mut s);
        assert!(!s.f_loss_holds(st).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let mut s = GameStore::with_budget(3);
        let z = s.zero();
        let a = s.node(vec![z], vec![]).unwrap();
        let b = s.node(vec![a], vec![]).unwrap();
        let c = s.node(vec![b], vec![]).unwrap();
        assert!(matches!(
            s.node(vec![c], vec![]),
            Err(Error::ResourceLimit { budget: 3 })
        ));
    }

    #[test]
    fn display_brace_notation() {
        let mut s = GameStore::new();
        let z = s.zero();
        let one = integer(&mut s, 1);
        let half = s.node(vec![z], vec![one]).unwrap();
        assert_eq!(s.display(half, 4), "{0 | {0 | }}");
        assert_eq!(s.display(half, 1), "{0 | ...}");
    }
}
