//! Brute-force oracle: explicit states without canonicalization, solved by
//! a naive monotone fixpoint iteration instead of the attractor queue. It
//! shares only the move generators with the main solver and exists to
//! cross-check winners and orbit counts on small instances.

use std::collections::HashMap;

use crate::config::Config;
use crate::game::{assignment_count, assignment_position, GameParams, Phase, Position};
use crate::solver::{position_successors, SolveError, SolveStats, Winner};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BruteKey {
    Root,
    Distribute(u8),
    Pos(Position),
}

pub struct BruteOutcome {
    pub winner: Winner,
    pub nodes: Vec<BruteKey>,
    pub edge_count: usize,
}

enum BruteOwner {
    P1,
    P2,
    Win1,
    Win2,
}

pub fn solve_brute(
    params: &GameParams,
    config: &Config,
    node_limit: usize,
) -> Result<BruteOutcome, SolveError> {
    let mut keys: Vec<BruteKey> = Vec::new();
    let mut owners: Vec<BruteOwner> = Vec::new();
    let mut edges: Vec<Vec<u32>> = Vec::new();
    let mut index: HashMap<BruteKey, u32> = HashMap::new();

    // The two terminal sentinels mirror the canonical arena's quotient so
    // node sets stay comparable orbit-wise.
    let intern = |keys: &mut Vec<BruteKey>,
                      owners: &mut Vec<BruteOwner>,
                      edges: &mut Vec<Vec<u32>>,
                      index: &mut HashMap<BruteKey, u32>,
                      key: BruteKey|
     -> u32 {
        if let Some(&id) = index.get(&key) {
            return id;
        }
        let id = keys.len() as u32;
        let owner = match &key {
            BruteKey::Root => BruteOwner::P1,
            BruteKey::Distribute(_) => BruteOwner::P2,
            BruteKey::Pos(p) => match p.phase {
                Phase::P1ToMove => BruteOwner::P1,
                Phase::P2RespondRemove(_) | Phase::P2SplitPhase(_) => BruteOwner::P2,
                Phase::TerminalP1Win => BruteOwner::Win1,
                Phase::TerminalP2Win => BruteOwner::Win2,
            },
        };
        keys.push(key.clone());
        owners.push(owner);
        edges.push(Vec::new());
        index.insert(key, id);
        id
    };

    let sentinel = |phase: Phase| BruteKey::Pos(Position {
        board: crate::game::Board::from_raw(vec![]),
        phase,
    });

    let root = intern(&mut keys, &mut owners, &mut edges, &mut index, BruteKey::Root);
    let mut frontier = vec![root];
    while let Some(id) = frontier.pop() {
        if keys.len() > node_limit {
            return Err(SolveError::Resource {
                what: format!("brute node limit {node_limit} exceeded"),
                stats: SolveStats { nodes: keys.len(), ..Default::default() },
            });
        }
        let succ_positions: Vec<Position> = match keys[id as usize].clone() {
            BruteKey::Root => {
                for b in 1..=params.k() {
                    let sid = intern(
                        &mut keys,
                        &mut owners,
                        &mut edges,
                        &mut index,
                        BruteKey::Distribute(b),
                    );
                    if !edges[id as usize].contains(&sid) {
                        edges[id as usize].push(sid);
                        frontier.push(sid);
                    }
                }
                continue;
            }
            BruteKey::Distribute(b) => {
                let count = assignment_count(params, b).ok_or_else(|| SolveError::Resource {
                    what: format!("brute distribution enumeration for b={b}"),
                    stats: SolveStats::default(),
                })?;
                (0..count).map(|code| assignment_position(params, b, code)).collect()
            }
            BruteKey::Pos(p) => position_successors(params, config, &p)?
                .into_iter()
                .map(|(_, q)| q)
                .collect(),
        };
        for q in succ_positions {
            let key = match q.phase {
                Phase::TerminalP1Win => sentinel(Phase::TerminalP1Win),
                Phase::TerminalP2Win => sentinel(Phase::TerminalP2Win),
                _ => BruteKey::Pos(q),
            };
            let fresh = !index.contains_key(&key);
            let sid = intern(&mut keys, &mut owners, &mut edges, &mut index, key);
            if !edges[id as usize].contains(&sid) {
                edges[id as usize].push(sid);
            }
            if fresh && !matches!(owners[sid as usize], BruteOwner::Win1 | BruteOwner::Win2) {
                frontier.push(sid);
            }
        }
    }

    // Least fixpoint by repeated sweeps: start from nothing winning, add
    // the target, and iterate the one-step forcing rule until stable.
    let n = keys.len();
    let mut win = vec![false; n];
    for (i, o) in owners.iter().enumerate() {
        if matches!(o, BruteOwner::Win1) {
            win[i] = true;
        }
    }
    loop {
        let mut changed = false;
        for v in 0..n {
            if win[v] {
                continue;
            }
            let value = match owners[v] {
                BruteOwner::Win1 => true,
                BruteOwner::Win2 => false,
                BruteOwner::P1 => edges[v].iter().any(|&s| win[s as usize]),
                BruteOwner::P2 => {
                    !edges[v].is_empty() && edges[v].iter().all(|&s| win[s as usize])
                }
            };
            if value {
                win[v] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    Ok(BruteOutcome {
        winner: if win[root as usize] { Winner::P1 } else { Winner::P2 },
        edge_count: edges.iter().map(|e| e.len()).sum(),
        nodes: keys,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_matches_known_winners() {
        let config = Config::default();
        for (k, factors, expect) in [
            (1u8, vec![2u8], Winner::P2),
            (2, vec![2], Winner::P2),
            (3, vec![2], Winner::P1),
        ] {
            let params = GameParams::new(k, &factors).unwrap();
            let out = solve_brute(&params, &config, 1 << 20).unwrap();
            assert_eq!(out.winner, expect, "k={k} factors={factors:?}");
        }
    }

    #[test]
    fn node_limit_enforced() {
        let params = GameParams::new(3, &[2, 2]).unwrap();
        let config = Config::default();
        assert!(matches!(
            solve_brute(&params, &config, 5),
            Err(SolveError::Resource { .. })
        ));
    }
}

#[cfg(test)]
mod size_probe {
    use super::*;

    #[test]
    #[ignore]
    fn raw_sizes() {
        let config = Config::default();
        for (k, f) in [
            (1u8, vec![2u8]), (2, vec![2]), (3, vec![2]), (4, vec![2]),
            (1, vec![2, 2]), (2, vec![2, 2]), (3, vec![2, 2]), (4, vec![2, 2]),
            (1, vec![2, 2, 2]), (2, vec![2, 2, 2]), (3, vec![2, 2, 2]), (4, vec![2, 2, 2]),
        ] {
            let params = GameParams::new(k, &f).unwrap();
            let t = std::time::Instant::now();
            match solve_brute(&params, &config, 200_000) {
                Ok(out) => println!(
                    "k={k} {f:?}: raw nodes {} edges {} winner {} ({} ms)",
                    out.nodes.len(), out.edge_count, out.winner, t.elapsed().as_millis()
                ),
                Err(e) => println!("k={k} {f:?}: {e}"),
            }
        }
    }
}
