//! Decides the winner of the comparison game and extracts positional
//! strategies.
//!
//! The game is a reachability game on a finite graph: Player 1 wants to
//! reach an empty box, Player 2 wants to play forever. We build the
//! forward-reachable arena over canonical positions (split-phase
//! reintroduction chains are pre-closed into composite edges), then compute
//! Player 1's attractor of the target set backwards as a least fixpoint.
//! Naive memoized AND-OR recursion is unsound here because Player 2 profits
//! from cycles; the two-pass formulation is not.

mod brute;
mod dot;
mod sweep;

pub use brute::{solve_brute, BruteKey, BruteOutcome};
pub use dot::arena_to_dot;
pub use sweep::{sweep, sweep_csv, SweepOutcome, SweepReport, SweepRow};

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonize, CanonKey, SymmetryGroup};
use crate::config::Config;
use crate::game::{
    apply_remove, apply_remove_response, apply_split_response, assignment_count,
    assignment_position, format_board, format_position, legal_p1_moves, legal_remove_responses,
    legal_remove_responses_chained, legal_split_responses, GameError, GameParams, P1Move, Phase,
    Position, RemoveResponse, SplitResponse,
};

#[derive(Debug, Clone, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("resource budget exceeded ({what}); partial stats: {stats:?}")]
    Resource { what: String, stats: SolveStats },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Winner {
    P1,
    P2,
}

impl std::fmt::Display for Winner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Winner::P1 => write!(f, "P1"),
            Winner::P2 => write!(f, "P2"),
        }
    }
}

/// Arena node identity. `Root` is Player 1's box-count choice,
/// `Distribute(b)` Player 2's initial distribution into `b` boxes, and the
/// rest are canonical positions. The two terminals are collapsed to a
/// single node each.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArenaKey {
    Root,
    Distribute(u8),
    Pos(CanonKey),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Owner {
    P1,
    P2,
    Terminal,
}

/// Edge labels, in the coordinates of the source node's canonical position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveLabel {
    /// Player 1 picks the number of boxes.
    PlaceBoxes(u8),
    /// Player 2 assigns every token to a box (token index -> box index).
    Assign(Vec<u8>),
    /// Player 1 taps a box.
    Tap(u8),
    /// Player 1 selects a box to be split.
    SplitBox(u8),
    /// Player 2 answers a tap.
    Respond(RemoveResponse),
    /// Player 2 answers a split.
    Partition(SplitResponse),
}

pub fn format_move(params: &GameParams, label: &MoveLabel) -> String {
    match label {
        MoveLabel::PlaceBoxes(b) => format!("place b={b}"),
        MoveLabel::Assign(a) => {
            let s: Vec<String> = a
                .iter()
                .enumerate()
                .map(|(t, b)| format!("{}>{}", params.token_string(t as u8), b))
                .collect();
            format!("assign {}", s.join(","))
        }
        MoveLabel::Tap(b) => format!("tap {b}"),
        MoveLabel::SplitBox(b) => format!("split {b}"),
        MoveLabel::Respond(r) => {
            let cols: Vec<String> = r
                .colours
                .iter()
                .map(|id| {
                    let (coord, value) = params.colour_of_id(id);
                    format!("{coord}.{value}")
                })
                .collect();
            let chain: Vec<String> =
                r.chain.iter().map(|(c, d)| format!("{c}->{d}")).collect();
            if chain.is_empty() {
                format!("respond C={{{}}}", cols.join(","))
            } else {
                format!("respond chain[{}] C={{{}}}", chain.join(";"), cols.join(","))
            }
        }
        MoveLabel::Partition(r) => {
            let chain: Vec<String> =
                r.chain.iter().map(|(c, d)| format!("{c}->{d}")).collect();
            let left: Vec<String> = r.left.iter().map(|t| params.token_string(t)).collect();
            if chain.is_empty() {
                format!("part left={{{}}}", left.join(","))
            } else {
                format!("part chain[{}] left={{{}}}", chain.join(";"), left.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes: usize,
    pub edges: usize,
    pub peak_frontier: usize,
    pub millis: u64,
}

impl SolveStats {
    /// Structural equality; wall time is not reproducible and is excluded.
    pub fn same_shape(&self, other: &SolveStats) -> bool {
        self.nodes == other.nodes
            && self.edges == other.edges
            && self.peak_frontier == other.peak_frontier
    }
}

pub struct NodeInfo {
    pub key: ArenaKey,
    pub owner: Owner,
    /// Canonical position for `Pos` nodes.
    pub position: Option<Position>,
}

pub struct Arena {
    pub params: GameParams,
    pub group: SymmetryGroup,
    pub nodes: Vec<NodeInfo>,
    pub edges: Vec<Vec<(MoveLabel, u32)>>,
    pub index: HashMap<ArenaKey, u32>,
    pub root: u32,
    pub p1win: Option<u32>,
    pub p2win: Option<u32>,
    pub stats: SolveStats,
}

impl Arena {
    pub fn node_label(&self, id: u32) -> String {
        let info = &self.nodes[id as usize];
        match &info.key {
            ArenaKey::Root => "root".into(),
            ArenaKey::Distribute(b) => format!("dist b={b}"),
            ArenaKey::Pos(_) => {
                format_position(&self.params, info.position.as_ref().expect("pos node"))
            }
        }
    }
}

/// Winner, positional strategy on the winner's nodes, and exploration
/// statistics.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub winner: Winner,
    pub strategy: std::collections::BTreeMap<ArenaKey, MoveLabel>,
    pub stats: SolveStats,
}

impl SolveResult {
    /// The documented JSON shape:
    /// `{params, winner, stats, strategy: [{position, move}]}`.
    pub fn to_json(&self, params: &GameParams, arena: Option<&Arena>) -> serde_json::Value {
        let strategy: Vec<serde_json::Value> = self
            .strategy
            .iter()
            .map(|(key, mv)| {
                let position = match (key, arena) {
                    (ArenaKey::Root, _) => "root".to_string(),
                    (ArenaKey::Distribute(b), _) => format!("dist b={b}"),
                    (ArenaKey::Pos(_), Some(a)) => {
                        let id = a.index[key];
                        a.node_label(id)
                    }
                    (ArenaKey::Pos(ck), None) => format!("{ck:?}"),
                };
                serde_json::json!({
                    "position": position,
                    "move": format_move(params, mv),
                })
            })
            .collect();
        serde_json::json!({
            "params": { "k": params.k(), "factors": params.factors() },
            "winner": self.winner,
            "stats": self.stats,
            "strategy": strategy,
        })
    }
}

/// Everything a caller may want to inspect after solving.
pub struct Solved {
    pub result: SolveResult,
    pub arena: Arena,
    /// Per node: whether Player 1 can force reaching the target from it.
    pub attractor: Vec<bool>,
}

enum Succ {
    Terminal(Winner),
    Distribute(u8),
    Pos(Box<Position>),
}

/// Successor positions of a single game position, shared by the canonical
/// solver, the brute-force oracle and the witness simulations. Edges are
/// generated in a deterministic order.
pub fn position_successors(
    params: &GameParams,
    config: &Config,
    pos: &Position,
) -> Result<Vec<(MoveLabel, Position)>, GameError> {
    let mut out = Vec::new();
    match pos.phase {
        Phase::P1ToMove => {
            for mv in legal_p1_moves(params, pos)? {
                let (label, phase) = match mv {
                    P1Move::Remove(b) => (MoveLabel::Tap(b), Phase::P2RespondRemove(b)),
                    P1Move::Split(b) => (MoveLabel::SplitBox(b), Phase::P2SplitPhase(b)),
                };
                out.push((label, Position { board: pos.board.clone(), phase }));
            }
        }
        Phase::P2RespondRemove(b) => {
            if config.reintro_on_remove {
                for resp in
                    legal_remove_responses_chained(params, &pos.board, b as usize, config.adjacency)?
                {
                    let next = apply_remove_response(
                        params,
                        &pos.board,
                        b as usize,
                        &resp,
                        config.adjacency,
                    )?;
                    out.push((MoveLabel::Respond(resp), next));
                }
            } else {
                for colours in legal_remove_responses(params, &pos.board, b as usize)? {
                    let next = apply_remove(params, &pos.board, b as usize, colours)?;
                    out.push((
                        MoveLabel::Respond(RemoveResponse { chain: vec![], colours }),
                        next,
                    ));
                }
            }
        }
        Phase::P2SplitPhase(b) => {
            for resp in legal_split_responses(params, &pos.board, b as usize, config.adjacency)? {
                let next =
                    apply_split_response(params, &pos.board, b as usize, &resp, config.adjacency)?;
                out.push((MoveLabel::Partition(resp), next));
            }
        }
        Phase::TerminalP1Win | Phase::TerminalP2Win => {}
    }
    Ok(out)
}

fn owner_of(key: &ArenaKey, pos: Option<&Position>) -> Owner {
    match key {
        ArenaKey::Root => Owner::P1,
        ArenaKey::Distribute(_) => Owner::P2,
        ArenaKey::Pos(_) => match pos.expect("pos node").phase {
            Phase::P1ToMove => Owner::P1,
            Phase::P2RespondRemove(_) | Phase::P2SplitPhase(_) => Owner::P2,
            Phase::TerminalP1Win | Phase::TerminalP2Win => Owner::Terminal,
        },
    }
}

fn expand_node(
    params: &GameParams,
    config: &Config,
    group: &SymmetryGroup,
    info: &NodeInfo,
) -> Result<Vec<(MoveLabel, Succ)>, SolveError> {
    let mut out = Vec::new();
    match &info.key {
        ArenaKey::Root => {
            for b in 1..=params.k() {
                out.push((MoveLabel::PlaceBoxes(b), Succ::Distribute(b)));
            }
        }
        ArenaKey::Distribute(b) => {
            let count = assignment_count(params, *b).ok_or_else(|| SolveError::Resource {
                what: format!("initial distribution enumeration for b={b}"),
                stats: SolveStats::default(),
            })?;
            for code in 0..count {
                let pos = assignment_position(params, *b, code);
                let mut assign = vec![0u8; params.token_count() as usize];
                let mut c = code;
                for t in assign.iter_mut() {
                    *t = (c % *b as u64) as u8;
                    c /= *b as u64;
                }
                out.push((MoveLabel::Assign(assign), succ_of(group, pos)));
            }
        }
        ArenaKey::Pos(_) => {
            let pos = info.position.as_ref().expect("pos node");
            for (label, next) in position_successors(params, config, pos)? {
                out.push((label, succ_of(group, next)));
            }
        }
    }
    Ok(out)
}

fn succ_of(group: &SymmetryGroup, pos: Position) -> Succ {
    match pos.phase {
        Phase::TerminalP1Win => Succ::Terminal(Winner::P1),
        Phase::TerminalP2Win => Succ::Terminal(Winner::P2),
        _ => Succ::Pos(Box::new(canonize(group, &pos).canonical)),
    }
}

/// Builds the forward-reachable canonical arena, breadth-first. With more
/// than one thread configured the frontier is expanded in parallel; node
/// ids are assigned in deterministic frontier order either way, so the
/// resulting arena is identical to the sequential one.
pub fn build_arena(params: &GameParams, config: &Config) -> Result<Arena, SolveError> {
    let start = Instant::now();
    let group = if config.symmetry {
        SymmetryGroup::new(params, config.adjacency)
    } else {
        SymmetryGroup::trivial(params)
    };

    let mut arena = Arena {
        params: params.clone(),
        group,
        nodes: Vec::new(),
        edges: Vec::new(),
        index: HashMap::new(),
        root: 0,
        p1win: None,
        p2win: None,
        stats: SolveStats::default(),
    };
    let root = intern(&mut arena, ArenaKey::Root, None);
    arena.root = root;

    let pool = (config.threads > 1).then(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .expect("thread pool")
    });
    let mut frontier = vec![root];
    let mut peak = 1usize;
    while !frontier.is_empty() {
        peak = peak.max(frontier.len());
        let expansions: Result<Vec<Vec<(MoveLabel, Succ)>>, SolveError> = if let Some(pool) = &pool
        {
            pool.install(|| {
                frontier
                    .par_iter()
                    .map(|&id| {
                        expand_node(&arena.params, config, &arena.group, &arena.nodes[id as usize])
                    })
                    .collect()
            })
        } else {
            frontier
                .iter()
                .map(|&id| {
                    expand_node(&arena.params, config, &arena.group, &arena.nodes[id as usize])
                })
                .collect()
        };
        let expansions = expansions.map_err(|e| match e {
            SolveError::Resource { what, .. } => SolveError::Resource {
                what,
                stats: partial_stats(&arena, peak, start),
            },
            other => other,
        })?;

        let mut next_frontier = Vec::new();
        for (&id, succs) in frontier.iter().zip(expansions) {
            let mut seen: HashMap<u32, ()> = HashMap::new();
            for (label, succ) in succs {
                let (key, position) = match succ {
                    Succ::Terminal(Winner::P1) => (
                        ArenaKey::Pos(CanonKey { phase: 3, tagged: 255, boxes: vec![] }),
                        Some(Position {
                            board: crate::game::Board::from_raw(vec![]),
                            phase: Phase::TerminalP1Win,
                        }),
                    ),
                    Succ::Terminal(Winner::P2) => (
                        ArenaKey::Pos(CanonKey { phase: 4, tagged: 255, boxes: vec![] }),
                        Some(Position {
                            board: crate::game::Board::from_raw(vec![]),
                            phase: Phase::TerminalP2Win,
                        }),
                    ),
                    Succ::Distribute(b) => (ArenaKey::Distribute(b), None),
                    Succ::Pos(p) => {
                        let key = canonize(&arena.group, &p).key;
                        (ArenaKey::Pos(key), Some(*p))
                    }
                };
                let is_new = !arena.index.contains_key(&key);
                let sid = intern(&mut arena, key, position);
                match arena.nodes[sid as usize].owner {
                    Owner::Terminal => {
                        if arena.nodes[sid as usize].position.as_ref().unwrap().phase
                            == Phase::TerminalP1Win
                        {
                            arena.p1win = Some(sid);
                        } else {
                            arena.p2win = Some(sid);
                        }
                    }
                    _ => {
                        if is_new {
                            next_frontier.push(sid);
                        }
                    }
                }
                if seen.insert(sid, ()).is_none() {
                    arena.edges[id as usize].push((label, sid));
                }
            }
        }
        if arena.nodes.len() > config.node_cap {
            return Err(SolveError::Resource {
                what: format!("node cap {} exceeded", config.node_cap),
                stats: partial_stats(&arena, peak, start),
            });
        }
        if start.elapsed().as_millis() as u64 > config.time_cap_millis {
            return Err(SolveError::Resource {
                what: format!("time cap {} ms exceeded", config.time_cap_millis),
                stats: partial_stats(&arena, peak, start),
            });
        }
        frontier = next_frontier;
    }
    arena.stats = partial_stats(&arena, peak, start);
    Ok(arena)
}

fn partial_stats(arena: &Arena, peak: usize, start: Instant) -> SolveStats {
    SolveStats {
        nodes: arena.nodes.len(),
        edges: arena.edges.iter().map(|e| e.len()).sum(),
        peak_frontier: peak,
        millis: start.elapsed().as_millis() as u64,
    }
}

fn intern(arena: &mut Arena, key: ArenaKey, position: Option<Position>) -> u32 {
    if let Some(&id) = arena.index.get(&key) {
        return id;
    }
    let id = arena.nodes.len() as u32;
    let owner = owner_of(&key, position.as_ref());
    arena.nodes.push(NodeInfo { key: key.clone(), owner, position });
    arena.edges.push(Vec::new());
    arena.index.insert(key, id);
    id
}

/// Backward attractor computation. A Player 1 node is winning when some
/// successor is; a Player 2 node when all successors are. Returns the
/// attractor membership plus a rank-decreasing Player 1 strategy.
fn attractor(arena: &Arena) -> (Vec<bool>, HashMap<u32, usize>) {
    let n = arena.nodes.len();
    let mut preds: Vec<Vec<(u32, usize)>> = vec![Vec::new(); n];
    let mut out_deg = vec![0usize; n];
    for (u, edges) in arena.edges.iter().enumerate() {
        out_deg[u] = edges.len();
        for (ei, (_, v)) in edges.iter().enumerate() {
            preds[*v as usize].push((u as u32, ei));
        }
    }
    let mut in_attr = vec![false; n];
    let mut p1_choice: HashMap<u32, usize> = HashMap::new();
    let mut queue = std::collections::VecDeque::new();
    if let Some(t) = arena.p1win {
        in_attr[t as usize] = true;
        queue.push_back(t);
    }
    while let Some(v) = queue.pop_front() {
        for &(u, ei) in &preds[v as usize] {
            if in_attr[u as usize] {
                continue;
            }
            match arena.nodes[u as usize].owner {
                Owner::P1 => {
                    in_attr[u as usize] = true;
                    p1_choice.insert(u, ei);
                    queue.push_back(u);
                }
                Owner::P2 => {
                    out_deg[u as usize] -= 1;
                    if out_deg[u as usize] == 0 {
                        in_attr[u as usize] = true;
                        queue.push_back(u);
                    }
                }
                Owner::Terminal => {}
            }
        }
    }
    (in_attr, p1_choice)
}

pub fn solve_full(params: &GameParams, config: &Config) -> Result<Solved, SolveError> {
    let arena = build_arena(params, config)?;
    let t0 = Instant::now();
    let (in_attr, p1_choice) = attractor(&arena);
    let winner = if in_attr[arena.root as usize] { Winner::P1 } else { Winner::P2 };

    let mut strategy = std::collections::BTreeMap::new();
    match winner {
        Winner::P1 => {
            for (id, info) in arena.nodes.iter().enumerate() {
                if info.owner == Owner::P1 && in_attr[id] {
                    let ei = p1_choice[&(id as u32)];
                    strategy.insert(info.key.clone(), arena.edges[id][ei].0.clone());
                }
            }
        }
        Winner::P2 => {
            for (id, info) in arena.nodes.iter().enumerate() {
                if info.owner == Owner::P2 && !in_attr[id] {
                    let (label, _) = arena.edges[id]
                        .iter()
                        .find(|(_, v)| !in_attr[*v as usize])
                        .expect("P2 node outside the attractor keeps an escape");
                    strategy.insert(info.key.clone(), label.clone());
                }
            }
        }
    }
    let mut stats = arena.stats.clone();
    stats.millis += t0.elapsed().as_millis() as u64;
    Ok(Solved {
        result: SolveResult { winner, strategy, stats },
        arena,
        attractor: in_attr,
    })
}

pub fn solve(params: &GameParams, config: &Config) -> Result<SolveResult, SolveError> {
    solve_full(params, config).map(|s| s.result)
}

/// Replays the strategy against every reply of the opponent.
///
/// For a Player 1 strategy: every play must reach the Player 1 terminal,
/// with no cycle in the strategy-restricted subgraph. For a Player 2
/// strategy: the strategy-closed region must exclude the Player 1 terminal
/// and be closed under all Player 1 moves. `false` signals a solver bug
/// (or a corrupted strategy), never an error.
pub fn verify_strategy(
    params: &GameParams,
    config: &Config,
    result: &SolveResult,
) -> Result<bool, SolveError> {
    let arena = build_arena(params, config)?;
    Ok(verify_on_arena(&arena, result))
}

fn follow_strategy(arena: &Arena, result: &SolveResult, id: u32) -> Option<Vec<u32>> {
    let info = &arena.nodes[id as usize];
    let winner_owned = match (result.winner, info.owner) {
        (Winner::P1, Owner::P1) | (Winner::P2, Owner::P2) => true,
        (_, Owner::Terminal) => return Some(vec![]),
        _ => false,
    };
    if winner_owned {
        let label = result.strategy.get(&info.key)?;
        let (_, v) = arena.edges[id as usize].iter().find(|(l, _)| l == label)?;
        Some(vec![*v])
    } else {
        Some(arena.edges[id as usize].iter().map(|(_, v)| *v).collect())
    }
}

/// Nodes reachable from the root when the winner follows the strategy and
/// the opponent plays every move. `None` when a needed strategy entry is
/// missing or names an illegal move.
pub fn strategy_closed_region(arena: &Arena, result: &SolveResult) -> Option<Vec<u32>> {
    let n = arena.nodes.len();
    let mut seen = vec![false; n];
    let mut stack = vec![arena.root];
    seen[arena.root as usize] = true;
    let mut region = Vec::new();
    while let Some(v) = stack.pop() {
        region.push(v);
        for s in follow_strategy(arena, result, v)? {
            if !seen[s as usize] {
                seen[s as usize] = true;
                stack.push(s);
            }
        }
    }
    Some(region)
}

pub fn verify_on_arena(arena: &Arena, result: &SolveResult) -> bool {
    let follow = |id: u32| follow_strategy(arena, result, id);
    let region = match strategy_closed_region(arena, result) {
        Some(r) => r,
        None => return false, // missing or illegal strategy entry
    };

    match result.winner {
        Winner::P2 => {
            // The closed region must avoid the Player 1 terminal.
            !region.iter().any(|&v| Some(v) == arena.p1win)
        }
        Winner::P1 => {
            // Every play must reach the target: no Player 2 terminal in the
            // region and no cycle among region nodes.
            if region.iter().any(|&v| Some(v) == arena.p2win) {
                return false;
            }
            // Kahn-style cycle check restricted to the region.
            let mut indeg: HashMap<u32, usize> = HashMap::new();
            let mut radj: HashMap<u32, Vec<u32>> = HashMap::new();
            for &v in &region {
                indeg.entry(v).or_insert(0);
                for s in follow(v).unwrap_or_default() {
                    *indeg.entry(s).or_insert(0) += 1;
                    radj.entry(v).or_default().push(s);
                }
            }
            let mut queue: Vec<u32> =
                indeg.iter().filter(|&(_, &d)| d == 0).map(|(&v, _)| v).collect();
            let mut removed = 0usize;
            while let Some(v) = queue.pop() {
                removed += 1;
                if let Some(succs) = radj.get(&v) {
                    for &s in succs.clone().iter() {
                        let d = indeg.get_mut(&s).unwrap();
                        *d -= 1;
                        if *d == 0 {
                            queue.push(s);
                        }
                    }
                }
            }
            removed == indeg.len()
        }
    }
}

/// Translates the strategy's move at an arbitrary concrete position back
/// into that position's coordinates, using the canonizing group element.
pub fn strategy_move_at(
    arena: &Arena,
    result: &SolveResult,
    pos: &Position,
) -> Option<MoveLabel> {
    let c = canonize(&arena.group, pos);
    let label = result.strategy.get(&ArenaKey::Pos(c.key.clone()))?;
    Some(pull_back(&arena.params, &c, label))
}

fn pull_back(
    params: &GameParams,
    c: &crate::canon::Canonized<'_>,
    label: &MoveLabel,
) -> MoveLabel {
    let unbox = |b: u8| -> u8 {
        c.box_map
            .iter()
            .position(|&m| m == b)
            .expect("canonical box index maps back") as u8
    };
    match label {
        MoveLabel::PlaceBoxes(b) => MoveLabel::PlaceBoxes(*b),
        MoveLabel::Assign(a) => {
            let mut out = vec![0u8; a.len()];
            for (t, slot) in out.iter_mut().enumerate() {
                *slot = a[c.elem.token_map[t] as usize];
            }
            MoveLabel::Assign(out)
        }
        MoveLabel::Tap(b) => MoveLabel::Tap(unbox(*b)),
        MoveLabel::SplitBox(b) => MoveLabel::SplitBox(unbox(*b)),
        MoveLabel::Respond(r) => MoveLabel::Respond(RemoveResponse {
            chain: r
                .chain
                .iter()
                .map(|&(f, t)| {
                    (c.elem.unapply_colour(params, f), c.elem.unapply_colour(params, t))
                })
                .collect(),
            colours: c.elem.unapply_colours(r.colours),
        }),
        MoveLabel::Partition(r) => MoveLabel::Partition(SplitResponse {
            chain: r
                .chain
                .iter()
                .map(|&(f, t)| {
                    (c.elem.unapply_colour(params, f), c.elem.unapply_colour(params, t))
                })
                .collect(),
            left: c.elem.unapply_tokens(r.left),
        }),
    }
}

pub fn board_label(params: &GameParams, pos: &Position) -> String {
    format_board(params, &pos.board)
}

/// Every way to corrupt one strategy entry so it genuinely spoils the
/// strategy: deleting an entry that strategy play reaches, or retargeting
/// an entry to a move that leaves the winner's region (a Player 1 entry
/// retargeted outside the attractor, a Player 2 entry into it) while the
/// entry stays reachable. A uniformly random retarget may land on an
/// alternative winning move and prove nothing, so candidates are filtered
/// here. Results are in deterministic order; each one must fail
/// `verify_strategy`.
pub fn adversarial_mutations(solved: &Solved) -> Vec<SolveResult> {
    let arena = &solved.arena;
    let reachable: std::collections::HashSet<u32> =
        strategy_closed_region(arena, &solved.result)
            .unwrap_or_default()
            .into_iter()
            .collect();
    let mut out = Vec::new();
    for (key, _) in solved.result.strategy.iter() {
        let id = arena.index[key];
        if reachable.contains(&id) {
            let mut mutated = solved.result.clone();
            mutated.strategy.remove(key);
            out.push(mutated);
        }
        for (label, target) in &arena.edges[id as usize] {
            let bad = match solved.result.winner {
                Winner::P1 => !solved.attractor[*target as usize],
                Winner::P2 => solved.attractor[*target as usize],
            };
            if bad && label != &solved.result.strategy[key] {
                let mut mutated = solved.result.clone();
                mutated.strategy.insert(key.clone(), label.clone());
                // Only keep it if the corrupted entry actually gets played.
                let hits = strategy_closed_region(arena, &mutated)
                    .map(|r| r.contains(&id))
                    .unwrap_or(true);
                if hits {
                    out.push(mutated);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_key;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn arena_k1_f2_by_hand() {
        let params = GameParams::new(1, &[2]).unwrap();
        let solved = solve_full(&params, &cfg()).unwrap();
        let a = &solved.arena;
        // root, dist b=1, the single live position, its remove phase, and
        // the boxless terminal.
        assert_eq!(a.nodes.len(), 5);
        assert!(a.p1win.is_none());
        assert!(a.p2win.is_some());
        assert_eq!(solved.result.winner, Winner::P2);
    }

    #[test]
    fn solve_small_anchors() {
        let cases = [
            (1, vec![2u8], Winner::P2),
            (2, vec![2], Winner::P2),
            (3, vec![2], Winner::P1),
        ];
        for (k, factors, expect) in cases {
            let params = GameParams::new(k, &factors).unwrap();
            let r = solve(&params, &cfg()).unwrap();
            assert_eq!(r.winner, expect, "k={k} factors={factors:?}");
        }
    }

    #[test]
    fn node_count_equals_raw_orbit_count() {
        for (k, factors) in [(2u8, vec![2u8]), (2, vec![2, 2])] {
            let params = GameParams::new(k, &factors).unwrap();
            let config = cfg();
            let solved = solve_full(&params, &config).unwrap();
            let brute = solve_brute(&params, &config, 1 << 20).unwrap();
            let group = SymmetryGroup::new(&params, config.adjacency);
            let mut orbits = std::collections::HashSet::new();
            for key in &brute.nodes {
                match key {
                    BruteKey::Root => {
                        orbits.insert(ArenaKey::Root);
                    }
                    BruteKey::Distribute(b) => {
                        orbits.insert(ArenaKey::Distribute(*b));
                    }
                    BruteKey::Pos(p) => {
                        orbits.insert(ArenaKey::Pos(canonical_key(&group, p)));
                    }
                }
            }
            assert_eq!(
                solved.arena.nodes.len(),
                orbits.len(),
                "k={k} factors={factors:?}"
            );
            assert_eq!(solved.result.winner, brute.winner);
        }
    }

    #[test]
    fn verify_accepts_and_rejects() {
        for (k, factors) in [(3u8, vec![2u8]), (2, vec![2, 2])] {
            let params = GameParams::new(k, &factors).unwrap();
            let config = cfg();
            let solved = solve_full(&params, &config).unwrap();
            assert!(verify_on_arena(&solved.arena, &solved.result));

            let mutations = adversarial_mutations(&solved);
            assert!(!mutations.is_empty(), "no mutable entry for k={k} {factors:?}");
            for bad in mutations.iter().take(20) {
                assert!(!verify_on_arena(&solved.arena, bad));
            }
        }
    }

    #[test]
    fn deterministic_and_parallel_agree() {
        let params = GameParams::new(3, &[2, 2]).unwrap();
        let config = cfg();
        let a = solve_full(&params, &config).unwrap();
        let b = solve_full(&params, &config).unwrap();
        assert_eq!(a.result.winner, b.result.winner);
        assert!(a.result.stats.same_shape(&b.result.stats));
        assert_eq!(a.result.strategy, b.result.strategy);

        let mut par = config.clone();
        par.threads = 2;
        let c = solve_full(&params, &par).unwrap();
        assert_eq!(a.result.winner, c.result.winner);
        assert!(a.result.stats.same_shape(&c.result.stats));
        assert_eq!(a.result.strategy, c.result.strategy);
        assert!(verify_on_arena(&c.arena, &c.result));
    }

    #[test]
    fn resource_cap_reports_partial_stats() {
        let params = GameParams::new(3, &[2, 2]).unwrap();
        let mut config = cfg();
        config.node_cap = 10;
        match solve(&params, &config) {
            Err(SolveError::Resource { stats, .. }) => assert!(stats.nodes > 0),
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn factor_permutation_invariance() {
        let config = cfg();
        let a = solve(&GameParams::new(2, &[2, 3]).unwrap(), &config).unwrap();
        let b = solve(&GameParams::new(2, &[3, 2]).unwrap(), &config).unwrap();
        assert_eq!(a.winner, b.winner);
    }
}
