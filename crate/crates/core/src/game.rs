//! Rules of the comparison game.
//!
//! The game is parameterized by a box budget `k` and factor cardinalities
//! `n_0..n_l`. Tokens are elements of the product `n_0 x .. x n_l`; a token
//! `w` has colour `(i, c)` iff `w_i = c`. The board holds up to `k` boxes of
//! pairwise disjoint token sets. Player 1 wins as soon as a box is empty;
//! a board with zero boxes can never produce an empty box, so it is a
//! Player 2 win.
//!
//! Everything in this module is an immutable value; transitions are pure
//! functions returning fresh positions.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::config::AdjacencyMode;

/// Hard caps for the explicit-state representation: token sets live in a
/// `u128` bitmask and colour sets in a `u32` bitmask.
pub const MAX_TOKENS: u32 = 128;
pub const MAX_COLOURS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("token universe too large: {0} tokens (limit {MAX_TOKENS})")]
    UniverseTooLarge(u64),
    #[error("colour universe too large: {0} colours (limit {MAX_COLOURS})")]
    ColourUniverseTooLarge(u64),
    #[error("operation applied in phase {0:?}, expected {1}")]
    WrongPhase(Phase, &'static str),
    #[error("box index {0} out of range")]
    BadBox(usize),
    #[error("colour set does not cover every token of the tapped box")]
    NotACover,
    #[error("illegal reintroduction: {0}")]
    BadReintroduce(String),
    #[error("split attempted with a full board")]
    BoardFull,
    #[error("bipartition is not a partition of the split box")]
    BadPartition,
}

/// A colour `(coord, value)` with `value < factors[coord]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Colour {
    pub coord: u8,
    pub value: u8,
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.coord, self.value)
    }
}

/// Set of tokens, one bit per token index of the mixed-radix encoding.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct TokenSet(pub u128);

impl TokenSet {
    pub const EMPTY: TokenSet = TokenSet(0);

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, token: u8) -> bool {
        self.0 >> token & 1 == 1
    }

    pub fn insert(&mut self, token: u8) {
        self.0 |= 1u128 << token;
    }

    pub fn iter(self) -> impl Iterator<Item = u8> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let t = bits.trailing_zeros() as u8;
                bits &= bits - 1;
                Some(t)
            }
        })
    }
}

/// Set of colours, one bit per colour id (coordinate-major).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColourSet(pub u32);

impl ColourSet {
    pub const EMPTY: ColourSet = ColourSet(0);

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, id: u8) -> bool {
        self.0 >> id & 1 == 1
    }

    pub fn insert(&mut self, id: u8) {
        self.0 |= 1 << id;
    }

    pub fn iter(self) -> impl Iterator<Item = u8> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let c = bits.trailing_zeros() as u8;
                bits &= bits - 1;
                Some(c)
            }
        })
    }
}

/// Game parameters `k` and `n_0..n_l`, with precomputed lookup tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameParams {
    k: u8,
    factors: Vec<u8>,
    #[serde(skip)]
    strides: Vec<u32>,
    /// First colour id of each coordinate.
    #[serde(skip)]
    colour_base: Vec<u8>,
    /// All tokens carrying a given colour id.
    #[serde(skip)]
    colour_masks: Vec<TokenSet>,
    #[serde(skip)]
    universe: TokenSet,
    #[serde(skip)]
    token_count: u32,
}

impl GameParams {
    pub fn new(k: u8, factors: &[u8]) -> Result<Self, GameError> {
        if k == 0 {
            return Err(GameError::InvalidParams("k must be >= 1".into()));
        }
        if factors.is_empty() {
            return Err(GameError::InvalidParams("factor list must be nonempty".into()));
        }
        if factors.iter().any(|&n| n == 0) {
            return Err(GameError::InvalidParams("every factor must be >= 1".into()));
        }
        let tokens: u64 = factors.iter().map(|&n| n as u64).product();
        if tokens > MAX_TOKENS as u64 {
            return Err(GameError::UniverseTooLarge(tokens));
        }
        let colours: u64 = factors.iter().map(|&n| n as u64).sum();
        if colours > MAX_COLOURS as u64 {
            return Err(GameError::ColourUniverseTooLarge(colours));
        }
        let mut p = GameParams {
            k,
            factors: factors.to_vec(),
            strides: Vec::new(),
            colour_base: Vec::new(),
            colour_masks: Vec::new(),
            universe: TokenSet::EMPTY,
            token_count: tokens as u32,
        };
        p.rebuild_tables();
        Ok(p)
    }

    /// Recomputes derived tables; used after deserialization as well.
    pub fn rebuild_tables(&mut self) {
        let mut stride = 1u32;
        self.strides = self
            .factors
            .iter()
            .map(|&n| {
                let s = stride;
                stride *= n as u32;
                s
            })
            .collect();
        self.token_count = stride;
        let mut base = 0u8;
        self.colour_base = self
            .factors
            .iter()
            .map(|&n| {
                let b = base;
                base += n;
                b
            })
            .collect();
        self.universe = if self.token_count as u32 == 128 {
            TokenSet(u128::MAX)
        } else {
            TokenSet((1u128 << self.token_count) - 1)
        };
        self.colour_masks = (0..base)
            .map(|id| {
                let (coord, value) = self.colour_of_id(id);
                let mut m = TokenSet::EMPTY;
                for t in 0..self.token_count as u8 {
                    if self.token_value(t, coord) == value {
                        m.insert(t);
                    }
                }
                m
            })
            .collect();
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn factors(&self) -> &[u8] {
        &self.factors
    }

    pub fn coord_count(&self) -> u8 {
        self.factors.len() as u8
    }

    pub fn token_count(&self) -> u32 {
        self.token_count
    }

    pub fn colour_count(&self) -> u8 {
        self.colour_base.last().copied().unwrap_or(0) + *self.factors.last().unwrap()
    }

    pub fn universe(&self) -> TokenSet {
        self.universe
    }

    pub fn token_value(&self, token: u8, coord: u8) -> u8 {
        (token as u32 / self.strides[coord as usize] % self.factors[coord as usize] as u32) as u8
    }

    pub fn token_from_values(&self, values: &[u8]) -> u8 {
        values
            .iter()
            .zip(&self.strides)
            .map(|(&v, &s)| v as u32 * s)
            .sum::<u32>() as u8
    }

    pub fn token_values(&self, token: u8) -> Vec<u8> {
        (0..self.coord_count()).map(|i| self.token_value(token, i)).collect()
    }

    pub fn colour_id(&self, c: Colour) -> u8 {
        self.colour_base[c.coord as usize] + c.value
    }

    pub fn colour_of_id(&self, id: u8) -> (u8, u8) {
        let coord = self
            .colour_base
            .iter()
            .rposition(|&b| b <= id)
            .expect("colour id below base");
        (coord as u8, id - self.colour_base[coord])
    }

    pub fn colour_mask(&self, c: Colour) -> TokenSet {
        self.colour_masks[self.colour_id(c) as usize]
    }

    /// Tokens carrying at least one colour from `set`.
    pub fn tokens_with_any(&self, set: ColourSet) -> TokenSet {
        let mut m = TokenSet::EMPTY;
        for id in set.iter() {
            m.0 |= self.colour_masks[id as usize].0;
        }
        m
    }

    pub fn all_colours(&self) -> impl Iterator<Item = Colour> + '_ {
        (0..self.coord_count()).flat_map(move |coord| {
            (0..self.factors[coord as usize]).map(move |value| Colour { coord, value })
        })
    }

    pub fn token_string(&self, token: u8) -> String {
        self.token_values(token).iter().map(|v| v.to_string()).collect()
    }
}

/// A live board: nonempty, pairwise disjoint boxes in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Board {
    boxes: Vec<TokenSet>,
}

impl Board {
    pub fn boxes(&self) -> &[TokenSet] {
        &self.boxes
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// Union of all boxes.
    pub fn occupied(&self) -> TokenSet {
        TokenSet(self.boxes.iter().fold(0u128, |acc, b| acc | b.0))
    }

    pub fn colour_present(&self, params: &GameParams, c: Colour) -> bool {
        self.occupied().0 & params.colour_mask(c).0 != 0
    }

    fn from_sorted(mut boxes: Vec<TokenSet>) -> Board {
        boxes.sort_unstable();
        debug_assert!(boxes.iter().all(|b| !b.is_empty()));
        debug_assert!({
            let mut seen = 0u128;
            boxes.iter().all(|b| {
                let ok = seen & b.0 == 0;
                seen |= b.0;
                ok
            })
        });
        Board { boxes }
    }

    /// Terminal boards may carry empty boxes; sort without the liveness
    /// checks.
    pub fn from_raw(mut boxes: Vec<TokenSet>) -> Board {
        boxes.sort_unstable();
        Board { boxes }
    }
}

/// Turn phase. The response phases carry the index of the tapped or
/// to-be-split box within the (sorted) board.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Phase {
    P1ToMove,
    P2RespondRemove(u8),
    P2SplitPhase(u8),
    TerminalP1Win,
    TerminalP2Win,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Position {
    pub board: Board,
    pub phase: Phase,
}

impl Position {
    pub fn is_terminal(&self) -> bool {
        matches!(self.phase, Phase::TerminalP1Win | Phase::TerminalP2Win)
    }

    /// Builds the position reached after a transition produced `boxes`
    /// (unsorted, possibly with empty entries). Win checks happen here:
    /// an empty box ends the game for Player 1, a boxless board for
    /// Player 2.
    pub fn resolve(boxes: Vec<TokenSet>) -> Position {
        if boxes.iter().any(|b| b.is_empty()) {
            return Position {
                board: Board::from_raw(boxes),
                phase: Phase::TerminalP1Win,
            };
        }
        if boxes.is_empty() {
            return Position {
                board: Board { boxes: vec![] },
                phase: Phase::TerminalP2Win,
            };
        }
        Position {
            board: Board::from_sorted(boxes),
            phase: Phase::P1ToMove,
        }
    }
}

/// A Player 1 action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum P1Move {
    Remove(u8),
    Split(u8),
}

/// One reintroduction step: copy every token of colour `from` to a token of
/// colour `to` in the same box.
pub type ReintroStep = (Colour, Colour);

/// A composite Player 2 answer to a split: a reintroduction chain followed
/// by a bipartition of the split box. `left` is the post-chain content kept
/// in the first half; the rest of the box forms the second half.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SplitResponse {
    pub chain: Vec<ReintroStep>,
    pub left: TokenSet,
}

/// A composite Player 2 answer to a tap: optional reintroduction chain
/// (empty unless the configuration allows it) followed by a covering
/// colour set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RemoveResponse {
    pub chain: Vec<ReintroStep>,
    pub colours: ColourSet,
}

/// Cap on explicitly enumerated initial distributions.
pub const MAX_ASSIGNMENTS: u64 = 1 << 26;

/// Number of ordered assignments of every token to one of `box_count`
/// boxes; `None` when it exceeds [`MAX_ASSIGNMENTS`].
pub fn assignment_count(params: &GameParams, box_count: u8) -> Option<u64> {
    (box_count as u64)
        .checked_pow(params.token_count())
        .filter(|&n| n <= MAX_ASSIGNMENTS)
}

/// Decodes one assignment, a base-`box_count` number with one digit per
/// token.
pub fn assignment_position(params: &GameParams, box_count: u8, code: u64) -> Position {
    let mut boxes = vec![TokenSet::EMPTY; box_count as usize];
    let mut c = code;
    for t in 0..params.token_count() as u8 {
        boxes[(c % box_count as u64) as usize].insert(t);
        c /= box_count as u64;
    }
    Position::resolve(boxes)
}

/// The two-level root structure: Player 1 picks the number of boxes, then
/// Player 2 distributes all tokens. Returns, per box count `b` in `1..=k`,
/// the list of resulting positions for every total assignment (assignments
/// with an empty box resolve to the Player 1 terminal).
pub fn initial_positions(params: &GameParams) -> Result<Vec<(u8, Vec<Position>)>, GameError> {
    (1..=params.k())
        .map(|b| {
            let count = assignment_count(params, b).ok_or_else(|| {
                GameError::InvalidParams(format!(
                    "too many initial distributions for explicit enumeration (k={b})"
                ))
            })?;
            let positions = (0..count).map(|code| assignment_position(params, b, code)).collect();
            Ok((b, positions))
        })
        .collect()
}

/// Remove every box, split every box while the board is below budget.
pub fn legal_p1_moves(params: &GameParams, pos: &Position) -> Result<Vec<P1Move>, GameError> {
    if pos.phase != Phase::P1ToMove {
        return Err(GameError::WrongPhase(pos.phase, "P1ToMove"));
    }
    let n = pos.board.len();
    let mut moves: Vec<P1Move> = (0..n as u8).map(P1Move::Remove).collect();
    if n < params.k() as usize {
        moves.extend((0..n as u8).map(P1Move::Split));
    }
    Ok(moves)
}

/// Every colour subset covering the tapped box. Colours absent from the box
/// (or from the whole board) may be included: removing extra tokens can free
/// colour slots for later reintroductions.
pub fn legal_remove_responses(
    params: &GameParams,
    board: &Board,
    tapped: usize,
) -> Result<Vec<ColourSet>, GameError> {
    let tapped_box = *board.boxes().get(tapped).ok_or(GameError::BadBox(tapped))?;
    let ncol = params.colour_count();
    let mut out = Vec::new();
    for bits in 0..(1u32 << ncol) {
        let set = ColourSet(bits);
        if tapped_box.0 & !params.tokens_with_any(set).0 == 0 {
            out.push(set);
        }
    }
    Ok(out)
}

/// Applies a tap response: delete the tapped box, then delete every token
/// carrying a colour from `colours` from the remaining boxes.
pub fn apply_remove(
    params: &GameParams,
    board: &Board,
    tapped: usize,
    colours: ColourSet,
) -> Result<Position, GameError> {
    let tapped_box = *board.boxes().get(tapped).ok_or(GameError::BadBox(tapped))?;
    let removed = params.tokens_with_any(colours);
    if tapped_box.0 & !removed.0 != 0 {
        return Err(GameError::NotACover);
    }
    let boxes = board
        .boxes()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != tapped)
        .map(|(_, b)| TokenSet(b.0 & !removed.0))
        .collect();
    Ok(Position::resolve(boxes))
}

fn check_reintroduce(
    params: &GameParams,
    board: &Board,
    from: Colour,
    to: Colour,
    mode: AdjacencyMode,
) -> Result<(), GameError> {
    if from.coord != to.coord {
        return Err(GameError::BadReintroduce("colours in distinct coordinates".into()));
    }
    if from.value == to.value {
        return Err(GameError::BadReintroduce("colours are equal".into()));
    }
    let n = params.factors()[from.coord as usize];
    if from.value >= n || to.value >= n {
        return Err(GameError::BadReintroduce("colour value out of range".into()));
    }
    if mode == AdjacencyMode::Successor && from.value.abs_diff(to.value) != 1 {
        return Err(GameError::BadReintroduce("values not successive".into()));
    }
    if board.colour_present(params, to) {
        return Err(GameError::BadReintroduce(format!(
            "colour {to} already present on the board"
        )));
    }
    Ok(())
}

/// For every box and every token of colour `from` in it, adds the copy with
/// coordinate value `to.value` to the same box.
pub fn reintroduce(
    params: &GameParams,
    board: &Board,
    from: Colour,
    to: Colour,
    mode: AdjacencyMode,
) -> Result<Board, GameError> {
    check_reintroduce(params, board, from, to, mode)?;
    let from_mask = params.colour_mask(from);
    let stride = (params.strides[from.coord as usize]) as i32;
    let delta = (to.value as i32 - from.value as i32) * stride;
    let boxes = board
        .boxes()
        .iter()
        .map(|b| {
            let src = b.0 & from_mask.0;
            let copies = if delta >= 0 { src << delta } else { src >> -delta };
            TokenSet(b.0 | copies)
        })
        .collect();
    Ok(Board::from_sorted(boxes))
}

/// Enumerates every reintroduction chain (as a sequence) from `board`.
/// Steps whose source colour has no token are skipped: they leave the board
/// unchanged, so every board reachable with them is reachable without.
pub fn reintroduce_chains(
    params: &GameParams,
    board: &Board,
    mode: AdjacencyMode,
) -> Vec<(Vec<ReintroStep>, Board)> {
    let mut out = Vec::new();
    let mut stack = vec![(Vec::new(), board.clone())];
    while let Some((chain, b)) = stack.pop() {
        for from in params.all_colours() {
            if !b.colour_present(params, from) {
                continue;
            }
            for value in 0..params.factors()[from.coord as usize] {
                let to = Colour { coord: from.coord, value };
                if check_reintroduce(params, &b, from, to, mode).is_err() {
                    continue;
                }
                let next = reintroduce(params, &b, from, to, mode).expect("checked step");
                let mut c = chain.clone();
                c.push((from, to));
                stack.push((c, next));
            }
        }
        out.push((chain, b));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// All composite split answers: any reintroduction chain, then any ordered
/// bipartition of the (post-chain) split box.
pub fn legal_split_responses(
    params: &GameParams,
    board: &Board,
    split: usize,
    mode: AdjacencyMode,
) -> Result<Vec<SplitResponse>, GameError> {
    if board.len() >= params.k() as usize {
        return Err(GameError::BoardFull);
    }
    if split >= board.len() {
        return Err(GameError::BadBox(split));
    }
    let mut out = Vec::new();
    for (chain, b) in reintroduce_chains(params, board, mode) {
        let content = b.boxes()[split];
        let tokens: Vec<u8> = content.iter().collect();
        for bits in 0u64..(1u64 << tokens.len()) {
            let mut left = TokenSet::EMPTY;
            for (j, &t) in tokens.iter().enumerate() {
                if bits >> j & 1 == 1 {
                    left.insert(t);
                }
            }
            out.push(SplitResponse { chain: chain.clone(), left });
        }
    }
    Ok(out)
}

/// Applies a composite split answer to a `P2SplitPhase` board.
pub fn apply_split_response(
    params: &GameParams,
    board: &Board,
    split: usize,
    resp: &SplitResponse,
    mode: AdjacencyMode,
) -> Result<Position, GameError> {
    if board.len() >= params.k() as usize {
        return Err(GameError::BoardFull);
    }
    if split >= board.len() {
        return Err(GameError::BadBox(split));
    }
    let mut b = board.clone();
    for &(from, to) in &resp.chain {
        b = reintroduce(params, &b, from, to, mode)?;
    }
    let content = b.boxes()[split];
    if resp.left.0 & !content.0 != 0 {
        return Err(GameError::BadPartition);
    }
    let right = TokenSet(content.0 & !resp.left.0);
    let mut boxes: Vec<TokenSet> = b
        .boxes()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != split)
        .map(|(_, &x)| x)
        .collect();
    boxes.push(resp.left);
    boxes.push(right);
    Ok(Position::resolve(boxes))
}

/// Applies a composite tap answer (reintroduction chain, then covering
/// colour set). With the default configuration the chain is empty.
pub fn apply_remove_response(
    params: &GameParams,
    board: &Board,
    tapped: usize,
    resp: &RemoveResponse,
    mode: AdjacencyMode,
) -> Result<Position, GameError> {
    let mut b = board.clone();
    for &(from, to) in &resp.chain {
        b = reintroduce(params, &b, from, to, mode)?;
    }
    apply_remove(params, &b, tapped, resp.colours)
}

/// All composite tap answers when chains before removals are enabled.
pub fn legal_remove_responses_chained(
    params: &GameParams,
    board: &Board,
    tapped: usize,
    mode: AdjacencyMode,
) -> Result<Vec<RemoveResponse>, GameError> {
    let mut out = Vec::new();
    for (chain, b) in reintroduce_chains(params, board, mode) {
        for colours in legal_remove_responses(params, &b, tapped)? {
            out.push(RemoveResponse { chain: chain.clone(), colours });
        }
    }
    Ok(out)
}

pub fn format_board(params: &GameParams, board: &Board) -> String {
    let boxes: Vec<String> = board
        .boxes()
        .iter()
        .map(|b| {
            let toks: Vec<String> = b.iter().map(|t| params.token_string(t)).collect();
            toks.join(",")
        })
        .collect();
    format!("[{}]", boxes.join("|"))
}

pub fn format_position(params: &GameParams, pos: &Position) -> String {
    match pos.phase {
        Phase::P1ToMove => format!("p1 {}", format_board(params, &pos.board)),
        Phase::P2RespondRemove(b) => {
            format!("remove#{b} {}", format_board(params, &pos.board))
        }
        Phase::P2SplitPhase(b) => format!("split#{b} {}", format_board(params, &pos.board)),
        Phase::TerminalP1Win => "p1-wins".into(),
        Phase::TerminalP2Win => "p2-wins".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k: u8, factors: &[u8]) -> GameParams {
        GameParams::new(k, factors).unwrap()
    }

    fn board(params: &GameParams, boxes: &[&[&[u8]]]) -> Board {
        let sets: Vec<TokenSet> = boxes
            .iter()
            .map(|tokens| {
                let mut s = TokenSet::EMPTY;
                for vals in tokens.iter() {
                    s.insert(params.token_from_values(vals));
                }
                s
            })
            .collect();
        Board::from_sorted(sets)
    }

    #[test]
    fn params_validation() {
        assert!(GameParams::new(0, &[2]).is_err());
        assert!(GameParams::new(1, &[]).is_err());
        assert!(GameParams::new(1, &[2, 0]).is_err());
        assert!(matches!(
            GameParams::new(1, &[2; 8]),
            Err(GameError::UniverseTooLarge(256))
        ));
        let p = params(2, &[2, 3]);
        assert_eq!(p.token_count(), 6);
        assert_eq!(p.colour_count(), 5);
    }

    #[test]
    fn colour_tables() {
        let p = params(2, &[2, 3]);
        let t = p.token_from_values(&[1, 2]);
        assert_eq!(p.token_values(t), vec![1, 2]);
        assert!(p.colour_mask(Colour { coord: 1, value: 2 }).contains(t));
        assert!(!p.colour_mask(Colour { coord: 0, value: 0 }).contains(t));
        for c in p.all_colours() {
            assert_eq!(p.colour_of_id(p.colour_id(c)), (c.coord, c.value));
        }
    }

    #[test]
    fn initial_positions_counts() {
        // k=1, [2]: a single box, one live distribution.
        let p = params(1, &[2]);
        let roots = initial_positions(&p).unwrap();
        assert_eq!(roots.len(), 1);
        let (b, ps) = &roots[0];
        assert_eq!(*b, 1);
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].phase, Phase::P1ToMove);
        assert_eq!(ps[0].board.len(), 1);

        // k=2, [2]: b=2 has 4 assignments, 2 of them live.
        let p = params(2, &[2]);
        let roots = initial_positions(&p).unwrap();
        let (_, ps) = &roots[1];
        assert_eq!(ps.len(), 4);
        assert_eq!(ps.iter().filter(|q| q.phase == Phase::P1ToMove).count(), 2);

        // k=2, [2,2]: b=2 has 16 assignments; independent count of the
        // live ones by direct enumeration of token->box functions.
        let p = params(2, &[2, 2]);
        let mut live = 0;
        for code in 0..16u64 {
            let mut occupied = [false; 2];
            for t in 0..4 {
                occupied[(code >> t & 1) as usize] = true;
            }
            if occupied[0] && occupied[1] {
                live += 1;
            }
        }
        assert_eq!(live, 14);
        let roots = initial_positions(&p).unwrap();
        let (_, ps) = &roots[1];
        assert_eq!(ps.len(), 16);
        assert_eq!(ps.iter().filter(|q| q.phase == Phase::P1ToMove).count(), live);
    }

    #[test]
    fn p1_moves() {
        let p = params(2, &[2]);
        let b1 = board(&p, &[&[&[0], &[1]]]);
        let pos = Position { board: b1, phase: Phase::P1ToMove };
        assert_eq!(
            legal_p1_moves(&p, &pos).unwrap(),
            vec![P1Move::Remove(0), P1Move::Split(0)]
        );

        let b2 = board(&p, &[&[&[0]], &[&[1]]]);
        let pos = Position { board: b2, phase: Phase::P1ToMove };
        assert_eq!(
            legal_p1_moves(&p, &pos).unwrap(),
            vec![P1Move::Remove(0), P1Move::Remove(1)]
        );

        let pos = Position { board: Board { boxes: vec![] }, phase: Phase::P1ToMove };
        assert!(legal_p1_moves(&p, &pos).unwrap().is_empty());

        let pos = Position {
            board: board(&p, &[&[&[0]]]),
            phase: Phase::P2RespondRemove(0),
        };
        assert!(legal_p1_moves(&p, &pos).is_err());
    }

    #[test]
    fn remove_responses() {
        let p = params(2, &[2]);
        // Box {(0)}: every cover contains colour (0,0).
        let b = board(&p, &[&[&[0]]]);
        let covers = legal_remove_responses(&p, &b, 0).unwrap();
        let c00 = p.colour_id(Colour { coord: 0, value: 0 });
        assert_eq!(covers.len(), 2);
        assert!(covers.iter().all(|c| c.contains(c00)));
        assert!(covers.contains(&ColourSet(1 << c00)));

        // Box {(0),(1)}: only the full colour set covers.
        let b = board(&p, &[&[&[0], &[1]]]);
        let covers = legal_remove_responses(&p, &b, 0).unwrap();
        assert_eq!(covers.len(), 1);
        assert_eq!(covers[0].len(), 2);

        // [2,2], box {(0,0),(1,1)}: the diagonal pair covers.
        let p = params(2, &[2, 2]);
        let b = board(&p, &[&[&[0, 0], &[1, 1]]]);
        let covers = legal_remove_responses(&p, &b, 0).unwrap();
        let mut diag = ColourSet::EMPTY;
        diag.insert(p.colour_id(Colour { coord: 0, value: 0 }));
        diag.insert(p.colour_id(Colour { coord: 1, value: 1 }));
        assert!(covers.contains(&diag));
    }

    #[test]
    fn apply_remove_cases() {
        let p = params(2, &[2]);
        let b = board(&p, &[&[&[0]], &[&[1]]]);
        let mut c = ColourSet::EMPTY;
        c.insert(p.colour_id(Colour { coord: 0, value: 0 }));
        let next = apply_remove(&p, &b, 0, c).unwrap();
        assert_eq!(next.phase, Phase::P1ToMove);
        assert_eq!(next.board, board(&p, &[&[&[1]]]));

        let p = params(2, &[2, 2]);
        // Boxes sort by token mask: {(1,0)} comes first, {(0,0),(1,1)} second.
        let b = board(&p, &[&[&[0, 0], &[1, 1]], &[&[1, 0]]]);
        let mut c = ColourSet::EMPTY;
        c.insert(p.colour_id(Colour { coord: 0, value: 0 }));
        c.insert(p.colour_id(Colour { coord: 1, value: 1 }));
        let next = apply_remove(&p, &b, 1, c).unwrap();
        assert_eq!(next.phase, Phase::P1ToMove);
        assert_eq!(next.board, board(&p, &[&[&[1, 0]]]));

        // Removing (0,0) also kills (0,1) in the other box: empty box, P1 win.
        let b = board(&p, &[&[&[0, 0]], &[&[0, 1]]]);
        let mut c = ColourSet::EMPTY;
        c.insert(p.colour_id(Colour { coord: 0, value: 0 }));
        let next = apply_remove(&p, &b, 0, c).unwrap();
        assert_eq!(next.phase, Phase::TerminalP1Win);

        // Non-cover rejected.
        let b = board(&p, &[&[&[0, 0], &[1, 1]]]);
        assert_eq!(apply_remove(&p, &b, 0, c), Err(GameError::NotACover));
    }

    #[test]
    fn reintroduce_cases() {
        let p = params(2, &[2, 2]);
        let b = board(&p, &[&[&[0, 0]]]);
        let out = reintroduce(
            &p,
            &b,
            Colour { coord: 0, value: 0 },
            Colour { coord: 0, value: 1 },
            AdjacencyMode::Any,
        )
        .unwrap();
        assert_eq!(out, board(&p, &[&[&[0, 0], &[1, 0]]]));

        let p = params(2, &[2]);
        let b = board(&p, &[&[&[0]], &[&[1]]]);
        assert!(reintroduce(
            &p,
            &b,
            Colour { coord: 0, value: 0 },
            Colour { coord: 0, value: 1 },
            AdjacencyMode::Any,
        )
        .is_err());

        let p = params(1, &[3]);
        let b = board(&p, &[&[&[0]]]);
        let from = Colour { coord: 0, value: 0 };
        let to = Colour { coord: 0, value: 2 };
        assert!(reintroduce(&p, &b, from, to, AdjacencyMode::Any).is_ok());
        assert!(reintroduce(&p, &b, from, to, AdjacencyMode::Successor).is_err());
    }

    #[test]
    fn split_responses() {
        let p = params(2, &[2]);
        let b = board(&p, &[&[&[0]]]);
        let resps = legal_split_responses(&p, &b, 0, AdjacencyMode::Any).unwrap();
        // Chains: empty, or the single reintroduction (0,0)->(0,1).
        // Box sizes 1 and 2 give 2 + 4 ordered bipartitions.
        assert_eq!(resps.len(), 6);
        let live: Vec<Position> = resps
            .iter()
            .map(|r| apply_split_response(&p, &b, 0, r, AdjacencyMode::Any).unwrap())
            .filter(|q| q.phase == Phase::P1ToMove)
            .collect();
        assert_eq!(live.len(), 2);
        assert!(live.iter().all(|q| q.board == board(&p, &[&[&[0]], &[&[1]]])));

        // Chainless bipartitions of a singleton all lose.
        for r in resps.iter().filter(|r| r.chain.is_empty()) {
            let q = apply_split_response(&p, &b, 0, r, AdjacencyMode::Any).unwrap();
            assert_eq!(q.phase, Phase::TerminalP1Win);
        }

        // [2,2], full box, no chain possible: 16 bipartitions, 14 live.
        let p = params(2, &[2, 2]);
        let full = board(&p, &[&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]]);
        let resps = legal_split_responses(&p, &full, 0, AdjacencyMode::Any).unwrap();
        assert_eq!(resps.len(), 16);
        let live = resps
            .iter()
            .map(|r| apply_split_response(&p, &full, 0, r, AdjacencyMode::Any).unwrap())
            .filter(|q| q.phase == Phase::P1ToMove)
            .count();
        assert_eq!(live, 14);

        // Splitting with a full board is a contract violation.
        let two = board(&p, &[&[&[0, 0]], &[&[1, 1]]]);
        assert_eq!(
            legal_split_responses(&p, &two, 0, AdjacencyMode::Any).unwrap_err(),
            GameError::BoardFull
        );
    }

    #[test]
    fn chains_terminate_and_grow() {
        let p = params(3, &[2, 2]);
        let b = board(&p, &[&[&[0, 0]]]);
        let chains = reintroduce_chains(&p, &b, AdjacencyMode::Any);
        let colour_bound = p.colour_count() as usize;
        for (chain, out) in &chains {
            assert!(chain.len() <= colour_bound);
            assert!(out.occupied().len() >= b.occupied().len());
        }
        // The empty chain is present.
        assert!(chains.iter().any(|(c, _)| c.is_empty()));
    }

    #[test]
    fn boxless_board_is_p2_terminal() {
        let pos = Position::resolve(vec![]);
        assert_eq!(pos.phase, Phase::TerminalP2Win);
        let pos = Position::resolve(vec![TokenSet(1), TokenSet::EMPTY]);
        assert_eq!(pos.phase, Phase::TerminalP1Win);
    }
}
