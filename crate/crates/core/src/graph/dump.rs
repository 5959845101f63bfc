//! Structured-text dump of graphs.
//!
//! Nodes are renumbered breadth-first from the root, following a-edges in
//! attribute order, so two graphs that differ only in node numbering dump
//! identically. Unreachable nodes, which translation never produces, come
//! last in arena order. The universal dom is written `"*"` and an infinite
//! max `"inf"`.

use serde_json::{json, Value};

use super::{DescriptionGraph, Dom, NodeId};
use crate::syntax::Individual;

fn individuals<'a>(ls: impl IntoIterator<Item = &'a Individual>) -> Value {
    Value::Array(ls.into_iter().map(|l| Value::String(l.to_string())).collect())
}

/// The dump as a JSON value.
pub fn graph_to_json(g: &DescriptionGraph) -> Value {
    let mut order = g.bfs_order();
    let mut rank = vec![usize::MAX; g.node_count()];
    for (i, n) in order.iter().enumerate() {
        rank[n.index()] = i;
    }
    for (i, r) in rank.iter_mut().enumerate() {
        if *r == usize::MAX {
            *r = order.len();
            order.push(NodeId::new(i));
        }
    }
    let nodes: Vec<Value> = order
        .iter()
        .map(|&id| {
            let n = g.node(id);
            let dom = match &n.dom {
                Dom::Universal => Value::String("*".into()),
                Dom::Finite(s) => individuals(s),
            };
            let mut r_edges: Vec<_> = n.r_edges.iter().collect();
            r_edges.sort_by(|a, b| a.role.cmp(&b.role));
            let r_edges: Vec<Value> = r_edges
                .into_iter()
                .map(|e| {
                    json!({
                        "role": e.role,
                        "min": e.min,
                        "max": e.max.finite().map(Value::from).unwrap_or_else(|| Value::String("inf".into())),
                        "fillers": individuals(&e.fillers),
                        "restriction": graph_to_json(&e.restriction),
                    })
                })
                .collect();
            json!({
                "id": rank[id.index()],
                "atoms": n.atoms.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                "dom": dom,
                "redges": r_edges,
            })
        })
        .collect();
    let mut edges: Vec<_> = g.a_edges().iter().collect();
    edges.sort_by(|a, b| {
        (rank[a.source.index()], &a.attr, rank[a.target.index()]).cmp(&(
            rank[b.source.index()],
            &b.attr,
            rank[b.target.index()],
        ))
    });
    let edges: Vec<Value> = edges
        .into_iter()
        .map(|e| {
            json!({
                "src": rank[e.source.index()],
                "dst": rank[e.target.index()],
                "attr": e.attr,
                "fillers": individuals(&e.fillers),
            })
        })
        .collect();
    json!({
        "root": 0,
        "incoherent": g.is_incoherent(),
        "nodes": nodes,
        "aedges": edges,
    })
}

/// Pretty-printed dump.
pub fn dump_graph(g: &DescriptionGraph) -> String {
    serde_json::to_string_pretty(&graph_to_json(g)).expect("graph dumps are always serializable")
}

/// Equality up to node renaming. Exact for canonical graphs, where each
/// node has at most one a-edge per attribute and one r-edge per role, so
/// the breadth-first numbering is forced.
pub fn isomorphic(a: &DescriptionGraph, b: &DescriptionGraph) -> bool {
    graph_to_json(a) == graph_to_json(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::translate;
    use crate::kb::KnowledgeBase;
    use crate::syntax::parse_description;

    fn graph(text: &str) -> DescriptionGraph {
        translate(&parse_description(text, &KnowledgeBase::default()).unwrap()).unwrap()
    }

    #[test]
    fn dump_encodes_markers() {
        let v = graph_to_json(&graph("at-least(2, r)"));
        assert_eq!(v["nodes"][0]["dom"], "*");
        assert_eq!(v["nodes"][0]["redges"][0]["max"], "inf");
        assert_eq!(v["nodes"][0]["redges"][0]["min"], 2);
        let v = graph_to_json(&graph("one-of(1, \"x\")"));
        assert_eq!(v["nodes"][0]["dom"], json!(["1", "\"x\""]));
    }

    #[test]
    fn numbering_does_not_matter() {
        let a = graph("and(all(a, X), all(b, Y))");
        let b = graph("and(all(b, Y), all(a, X))");
        assert!(isomorphic(&a, &b));
        assert!(!isomorphic(&a, &graph("and(all(a, Y), all(b, X))")));
    }
}
