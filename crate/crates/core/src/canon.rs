//! Canonicalization of positions under the game's automorphisms.
//!
//! The group is generated by value permutations within each coordinate,
//! permutations between coordinates of equal cardinality, and arbitrary box
//! permutations. Box permutations are handled by keeping boards sorted; the
//! rest is an explicit list of group elements with precomputed token and
//! colour remap tables, and the canonical form is the lexicographic minimum
//! of the orbit. Each relabeling maps legal moves to legal moves and
//! terminals to terminals of the same winner, so solving the quotient
//! decides the original game.

use serde::{Deserialize, Serialize};

use crate::config::AdjacencyMode;
use crate::game::{Board, Colour, ColourSet, GameParams, Phase, Position, TokenSet};

/// One relabeling: `w'[j] = value_perms[j][ w[coord_perm[j]] ]`.
#[derive(Debug, Clone)]
pub struct GroupElem {
    pub coord_perm: Vec<u8>,
    pub value_perms: Vec<Vec<u8>>,
    pub token_map: Vec<u8>,
    pub colour_map: Vec<u8>,
    pub inv_token_map: Vec<u8>,
    pub inv_colour_map: Vec<u8>,
}

impl GroupElem {
    fn build(params: &GameParams, coord_perm: Vec<u8>, value_perms: Vec<Vec<u8>>) -> GroupElem {
        let n_tokens = params.token_count() as usize;
        let mut token_map = vec![0u8; n_tokens];
        for t in 0..n_tokens as u8 {
            let new_vals: Vec<u8> = (0..params.coord_count())
                .map(|j| {
                    let old = params.token_value(t, coord_perm[j as usize]);
                    value_perms[j as usize][old as usize]
                })
                .collect();
            token_map[t as usize] = params.token_from_values(&new_vals);
        }
        let n_col = params.colour_count() as usize;
        let mut colour_map = vec![0u8; n_col];
        for j in 0..params.coord_count() {
            let i = coord_perm[j as usize];
            for v in 0..params.factors()[i as usize] {
                let old = params.colour_id(Colour { coord: i, value: v });
                let new = params.colour_id(Colour {
                    coord: j,
                    value: value_perms[j as usize][v as usize],
                });
                colour_map[old as usize] = new;
            }
        }
        let mut inv_token_map = vec![0u8; n_tokens];
        for (t, &u) in token_map.iter().enumerate() {
            inv_token_map[u as usize] = t as u8;
        }
        let mut inv_colour_map = vec![0u8; n_col];
        for (c, &d) in colour_map.iter().enumerate() {
            inv_colour_map[d as usize] = c as u8;
        }
        GroupElem {
            coord_perm,
            value_perms,
            token_map,
            colour_map,
            inv_token_map,
            inv_colour_map,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.token_map.iter().enumerate().all(|(t, &u)| t as u8 == u)
    }

    pub fn apply_tokens(&self, set: TokenSet) -> TokenSet {
        let mut out = TokenSet::EMPTY;
        for t in set.iter() {
            out.insert(self.token_map[t as usize]);
        }
        out
    }

    pub fn unapply_tokens(&self, set: TokenSet) -> TokenSet {
        let mut out = TokenSet::EMPTY;
        for t in set.iter() {
            out.insert(self.inv_token_map[t as usize]);
        }
        out
    }

    pub fn apply_colours(&self, set: ColourSet) -> ColourSet {
        let mut out = ColourSet::EMPTY;
        for c in set.iter() {
            out.insert(self.colour_map[c as usize]);
        }
        out
    }

    pub fn unapply_colours(&self, set: ColourSet) -> ColourSet {
        let mut out = ColourSet::EMPTY;
        for c in set.iter() {
            out.insert(self.inv_colour_map[c as usize]);
        }
        out
    }

    pub fn unapply_colour(&self, params: &GameParams, c: Colour) -> Colour {
        let id = self.inv_colour_map[params.colour_id(c) as usize];
        let (coord, value) = params.colour_of_id(id);
        Colour { coord, value }
    }
}

/// The full symmetry group for given parameters and adjacency mode. In
/// `Successor` mode only order reversal preserves adjacency, so the value
/// permutations are restricted to identity and reversal.
pub struct SymmetryGroup {
    elems: Vec<GroupElem>,
}

fn permutations(n: u8) -> Vec<Vec<u8>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut items: Vec<u8> = (0..n).collect();
    heap_permute(&mut items, n as usize, &mut out);
    out.sort();
    out
}

fn heap_permute(items: &mut Vec<u8>, n: usize, out: &mut Vec<Vec<u8>>) {
    if n <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..n {
        heap_permute(items, n - 1, out);
        if n % 2 == 0 {
            items.swap(i, n - 1);
        } else {
            items.swap(0, n - 1);
        }
    }
}

impl SymmetryGroup {
    pub fn new(params: &GameParams, mode: AdjacencyMode) -> SymmetryGroup {
        let m = params.coord_count() as usize;
        let coord_perms: Vec<Vec<u8>> = permutations(m as u8)
            .into_iter()
            .filter(|perm| {
                perm.iter()
                    .enumerate()
                    .all(|(j, &i)| params.factors()[i as usize] == params.factors()[j])
            })
            .collect();
        let value_choices: Vec<Vec<Vec<u8>>> = (0..m)
            .map(|j| {
                let n = params.factors()[j];
                match mode {
                    AdjacencyMode::Any => permutations(n),
                    AdjacencyMode::Successor => {
                        let id: Vec<u8> = (0..n).collect();
                        let rev: Vec<u8> = (0..n).rev().collect();
                        if rev == id {
                            vec![id]
                        } else {
                            vec![id, rev]
                        }
                    }
                }
            })
            .collect();
        let mut elems = Vec::new();
        for cp in &coord_perms {
            // Value permutations operate on the target coordinate slot j,
            // whose cardinality matches factors[cp[j]].
            let mut idx = vec![0usize; m];
            loop {
                let vps: Vec<Vec<u8>> =
                    (0..m).map(|j| value_choices[j][idx[j]].clone()).collect();
                elems.push(GroupElem::build(params, cp.clone(), vps));
                let mut j = 0;
                loop {
                    if j == m {
                        break;
                    }
                    idx[j] += 1;
                    if idx[j] < value_choices[j].len() {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == m {
                    break;
                }
            }
        }
        // Identity first, for the trivial-group fast path.
        elems.sort_by_key(|e| e.token_map.clone());
        SymmetryGroup { elems }
    }

    /// A group with only the identity; used when symmetry reduction is off.
    pub fn trivial(params: &GameParams) -> SymmetryGroup {
        let cp: Vec<u8> = (0..params.coord_count()).collect();
        let vps: Vec<Vec<u8>> = params.factors().iter().map(|&n| (0..n).collect()).collect();
        SymmetryGroup {
            elems: vec![GroupElem::build(params, cp, vps)],
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[GroupElem] {
        &self.elems
    }
}

/// Canonical key: phase discriminant, index of the distinguished box (255
/// when none), then the sorted box masks. Keys are equal exactly for
/// positions in the same orbit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonKey {
    pub phase: u8,
    pub tagged: u8,
    pub boxes: Vec<u128>,
}

fn phase_parts(phase: Phase) -> (u8, Option<u8>) {
    match phase {
        Phase::P1ToMove => (0, None),
        Phase::P2RespondRemove(b) => (1, Some(b)),
        Phase::P2SplitPhase(b) => (2, Some(b)),
        Phase::TerminalP1Win => (3, None),
        Phase::TerminalP2Win => (4, None),
    }
}

/// Result of canonicalizing one position: the key, the canonical position,
/// the group element applied, and where each original box ended up.
pub struct Canonized<'g> {
    pub key: CanonKey,
    pub canonical: Position,
    pub elem: &'g GroupElem,
    /// `box_map[original index] = canonical index`.
    pub box_map: Vec<u8>,
}

fn image(
    elem: &GroupElem,
    boxes: &[TokenSet],
    tag: Option<u8>,
) -> (Vec<u128>, u8, Vec<u8>) {
    let mut imgs: Vec<(u128, u8)> = boxes
        .iter()
        .enumerate()
        .map(|(j, &b)| (elem.apply_tokens(b).0, j as u8))
        .collect();
    imgs.sort_unstable();
    let mut box_map = vec![0u8; boxes.len()];
    for (new_idx, &(_, old_idx)) in imgs.iter().enumerate() {
        box_map[old_idx as usize] = new_idx as u8;
    }
    let tagged = tag.map(|b| box_map[b as usize]).unwrap_or(255);
    (imgs.into_iter().map(|(m, _)| m).collect(), tagged, box_map)
}

pub fn canonize<'g>(group: &'g SymmetryGroup, pos: &Position) -> Canonized<'g> {
    let (phase_id, tag) = phase_parts(pos.phase);
    let mut best: Option<(Vec<u128>, u8, Vec<u8>, &GroupElem)> = None;
    for elem in group.elems() {
        let (boxes, tagged, box_map) = image(elem, pos.board.boxes(), tag);
        let better = match &best {
            None => true,
            Some((bb, bt, _, _)) => (&boxes, &tagged) < (bb, bt),
        };
        if better {
            best = Some((boxes, tagged, box_map, elem));
        }
    }
    let (boxes, tagged, box_map, elem) = best.expect("nonempty group");
    let key = CanonKey { phase: phase_id, tagged, boxes: boxes.clone() };
    let canonical = Position {
        board: Board::from_raw(boxes.iter().map(|&m| TokenSet(m)).collect()),
        phase: match pos.phase {
            Phase::P2RespondRemove(_) => Phase::P2RespondRemove(tagged),
            Phase::P2SplitPhase(_) => Phase::P2SplitPhase(tagged),
            other => other,
        },
    };
    Canonized { key, canonical, elem, box_map }
}

pub fn canonical_key(group: &SymmetryGroup, pos: &Position) -> CanonKey {
    canonize(group, pos).key
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::format_board;

    fn pos(params: &GameParams, boxes: &[&[&[u8]]], phase: Phase) -> Position {
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
        let mut p = Position::resolve(sets);
        p.phase = phase;
        p
    }

    #[test]
    fn box_swap_same_key() {
        let p = GameParams::new(2, &[2]).unwrap();
        let g = SymmetryGroup::new(&p, AdjacencyMode::Any);
        let a = pos(&p, &[&[&[0]], &[&[1]]], Phase::P1ToMove);
        let b = pos(&p, &[&[&[1]], &[&[0]]], Phase::P1ToMove);
        assert_eq!(canonical_key(&g, &a), canonical_key(&g, &b));
    }

    #[test]
    fn value_swap_same_key_in_any_mode() {
        let p = GameParams::new(2, &[2]).unwrap();
        let g = SymmetryGroup::new(&p, AdjacencyMode::Any);
        let a = pos(&p, &[&[&[0]]], Phase::P1ToMove);
        let b = pos(&p, &[&[&[1]]], Phase::P1ToMove);
        assert_eq!(canonical_key(&g, &a), canonical_key(&g, &b));
    }

    #[test]
    fn unequal_factors_fix_coordinates() {
        let p = GameParams::new(2, &[2, 3]).unwrap();
        let g = SymmetryGroup::new(&p, AdjacencyMode::Any);
        // No coordinate permutation applies between coordinates of size 2
        // and 3: group order 2! * 3! = 12.
        assert_eq!(g.len(), 12);
        // Two boards that differ only by the role of the coordinates:
        // {(0,0),(1,0)} spans coordinate 0, {(0,0),(0,1)} spans coordinate 1.
        let a = pos(&p, &[&[&[0, 0], &[1, 0]]], Phase::P1ToMove);
        let b = pos(&p, &[&[&[0, 0], &[0, 1]]], Phase::P1ToMove);
        assert_ne!(canonical_key(&g, &a), canonical_key(&g, &b));
    }

    #[test]
    fn group_sizes() {
        let p = GameParams::new(2, &[2, 2]).unwrap();
        assert_eq!(SymmetryGroup::new(&p, AdjacencyMode::Any).len(), 8);
        assert_eq!(SymmetryGroup::new(&p, AdjacencyMode::Successor).len(), 8);
        let p = GameParams::new(2, &[3, 3]).unwrap();
        assert_eq!(SymmetryGroup::new(&p, AdjacencyMode::Any).len(), 72);
        assert_eq!(SymmetryGroup::new(&p, AdjacencyMode::Successor).len(), 8);
        assert_eq!(SymmetryGroup::trivial(&p).len(), 1);
        assert!(SymmetryGroup::trivial(&p).elems()[0].is_identity());
    }

    #[test]
    fn idempotent() {
        let p = GameParams::new(3, &[2, 2]).unwrap();
        let g = SymmetryGroup::new(&p, AdjacencyMode::Any);
        let a = pos(&p, &[&[&[0, 0], &[1, 1]], &[&[1, 0]]], Phase::P2RespondRemove(1));
        let c = canonize(&g, &a);
        let again = canonize(&g, &c.canonical);
        assert_eq!(c.key, again.key);
        assert_eq!(format_board(&p, &c.canonical.board), format_board(&p, &again.canonical.board));
    }

    #[test]
    fn tag_travels_with_box() {
        let p = GameParams::new(2, &[2]).unwrap();
        let g = SymmetryGroup::new(&p, AdjacencyMode::Any);
        let a = pos(&p, &[&[&[0]], &[&[1]]], Phase::P2RespondRemove(0));
        let b = pos(&p, &[&[&[0]], &[&[1]]], Phase::P2RespondRemove(1));
        // Tapping either side of a symmetric board is the same subgame.
        assert_eq!(canonical_key(&g, &a), canonical_key(&g, &b));
        let c = canonize(&g, &a);
        // The original box 0 went wherever the tag says.
        assert_eq!(c.key.tagged, c.box_map[0]);
    }

    #[test]
    fn keys_injective_on_orbits() {
        // If two positions get the same key, some group element maps one to
        // the other (as sorted boards).
        let p = GameParams::new(2, &[2, 2]).unwrap();
        let g = SymmetryGroup::new(&p, AdjacencyMode::Any);
        let mut rng = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            rng ^= rng << 13;
            rng ^= rng >> 7;
            rng ^= rng << 17;
            rng
        };
        let mut positions = Vec::new();
        for _ in 0..200 {
            let bits = next() % (1 << 8);
            let b0 = TokenSet((bits & 0xf) as u128);
            let b1 = TokenSet(((bits >> 4) & !(bits & 0xf)) as u128);
            let mut boxes = vec![];
            if !b0.is_empty() {
                boxes.push(b0);
            }
            if !b1.is_empty() {
                boxes.push(b1);
            }
            if boxes.is_empty() {
                continue;
            }
            positions.push(Position::resolve(boxes));
        }
        for a in &positions {
            for b in &positions {
                if canonical_key(&g, a) == canonical_key(&g, b) {
                    let related = g.elems().iter().any(|e| {
                        let mut img: Vec<TokenSet> =
                            a.board.boxes().iter().map(|&x| e.apply_tokens(x)).collect();
                        img.sort_unstable();
                        img == b.board.boxes()
                    });
                    assert!(related, "equal keys on unrelated positions");
                }
            }
        }
    }
}
