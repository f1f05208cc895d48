//! Graphviz export of arenas: box-shaped nodes for Player 1, ellipses for
//! Player 2, doublecircles for terminals.

use crate::solver::{format_move, Arena, Owner};

pub fn arena_to_dot(arena: &Arena) -> String {
    let mut out = String::from("digraph arena {\n  rankdir=LR;\n");
    for (id, info) in arena.nodes.iter().enumerate() {
        let shape = match info.owner {
            Owner::P1 => "box",
            Owner::P2 => "ellipse",
            Owner::Terminal => "doublecircle",
        };
        out.push_str(&format!(
            "  n{id} [shape={shape}, label=\"{}\"];\n",
            arena.node_label(id as u32).replace('"', "'")
        ));
    }
    for (id, edges) in arena.edges.iter().enumerate() {
        for (label, target) in edges {
            out.push_str(&format!(
                "  n{id} -> n{target} [label=\"{}\"];\n",
                format_move(&arena.params, label).replace('"', "'")
            ));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use crate::config::Config;
    use crate::game::GameParams;
    use crate::solver::build_arena;

    #[test]
    fn dot_contains_nodes_and_terminals() {
        let params = GameParams::new(1, &[2]).unwrap();
        let arena = build_arena(&params, &Config::default()).unwrap();
        let dot = super::arena_to_dot(&arena);
        assert!(dot.starts_with("digraph arena {"));
        assert!(dot.contains("doublecircle"));
        assert!(dot.contains("shape=box"));
        assert!(dot.ends_with("}\n"));
    }
}
