//! Mention heads: the "highest" node of a span in the dependency tree.

use std::collections::BTreeSet;

use crate::conllu::head_index_field;
use crate::model::{CorefDoc, Mention, Node, NodeIdx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeadRule {
    /// Taken from the numeric head field of the opening bracket.
    Provided,
    HighestNode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadChoice {
    pub head: NodeIdx,
    /// Treelet roots of the span.
    pub candidates: Vec<NodeIdx>,
    pub rule_used: HeadRule,
}

fn in_span(span: &[NodeIdx], n: NodeIdx) -> bool {
    span.binary_search(&n).is_ok()
}

/// Nodes of `span` whose tree parent is absent or outside the span.
pub fn treelet_roots(nodes: &[Node], span: &[NodeIdx]) -> Vec<NodeIdx> {
    span.iter()
        .copied()
        .filter(|&n| match nodes[n as usize].tree_parent() {
            Some(p) => !in_span(span, p),
            None => true,
        })
        .collect()
}

/// The minimal-depth root; surface words win over empty nodes at equal
/// depth, then the earlier node. Falls back to the first node when a
/// candidate's depth is undefined (cyclic tree).
pub fn highest_node(nodes: &[Node], span: &[NodeIdx]) -> HeadChoice {
    let candidates = treelet_roots(nodes, span);
    let depths: Option<Vec<u32>> = candidates
        .iter()
        .map(|&n| nodes[n as usize].depth)
        .collect();
    let head = match depths {
        Some(depths) => candidates
            .iter()
            .zip(depths)
            .min_by_key(|&(&n, d)| (d, nodes[n as usize].is_empty, n))
            .map(|(&n, _)| n)
            .unwrap_or(span[0]),
        None => {
            log::warn!("dependency cycle while finding a mention head; using its first node");
            span[0]
        }
    };
    HeadChoice {
        head,
        candidates,
        rule_used: HeadRule::HighestNode,
    }
}

/// Head of a span, preferring a numeric head-index field when present.
pub fn find_head(nodes: &[Node], span: &[NodeIdx], fields: &[String]) -> HeadChoice {
    let computed = highest_node(nodes, span);
    match head_index_field(fields) {
        Some(i) if i >= 1 && i <= span.len() => {
            let head = span[i - 1];
            if head != computed.head {
                log::debug!(
                    "annotated head (node {head}) differs from the highest node ({})",
                    computed.head
                );
            }
            HeadChoice {
                head,
                candidates: computed.candidates,
                rule_used: HeadRule::Provided,
            }
        }
        Some(i) => {
            log::warn!(
                "head index {i} out of range for a mention of {} nodes; computing the head",
                span.len()
            );
            computed
        }
        None => computed,
    }
}

/// UPOS of the head plus UPOS of its `flat*` children inside the mention.
pub fn head_upos_set<'d>(layer: &CorefDoc<'d>, m: &Mention) -> BTreeSet<&'d str> {
    let mut set = BTreeSet::new();
    set.insert(layer.token(m.head).upos());
    let nodes = layer.nodes();
    for &n in &m.nodes {
        if n != m.head
            && nodes[n as usize].tree_parent() == Some(m.head)
            && layer.token(n).deprel().starts_with("flat")
        {
            set.insert(layer.token(n).upos());
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conllu::parse_str;

    // 1 Mr. <-flat- 2 Brown -nsubj-> 3 saw (root); 4 the <-det- 5 dog -obj-> 3; 6 Jr. -flat-> 2
    const TREE: &str = "1\tMr.\tMr.\tNOUN\t_\t_\t3\tnsubj\t_\t_\n\
2\tBrown\tBrown\tPROPN\t_\t_\t1\tflat\t_\t_\n\
3\tsaw\tsee\tVERB\t_\t_\t0\troot\t_\t_\n\
4\tthe\tthe\tDET\t_\t_\t5\tdet\t_\t_\n\
5\tdog\tdog\tNOUN\t_\t_\t3\tobj\t_\t_\n\
6\tJr.\tJr.\tPROPN\t_\t_\t1\tflat:name\t_\t_\n\n";

    fn with_layer(f: impl FnOnce(&CorefDoc)) {
        let c = parse_str(TREE).unwrap();
        let l = CorefDoc::build(&c.documents[0]).unwrap();
        f(&l)
    }

    fn mention(nodes: Vec<NodeIdx>, head: NodeIdx) -> Mention {
        Mention {
            nodes,
            head,
            head_rule: HeadRule::HighestNode,
            fields: vec![],
        }
    }

    #[test]
    fn det_noun_head_is_noun() {
        with_layer(|l| {
            let h = highest_node(l.nodes(), &[3, 4]);
            assert_eq!(h.head, 4);
            assert_eq!(h.candidates, vec![4]);
        });
    }

    #[test]
    fn full_subtree_head_is_root() {
        with_layer(|l| {
            assert_eq!(highest_node(l.nodes(), &[0, 1, 5]).head, 0);
            assert_eq!(highest_node(l.nodes(), &[0, 1, 2, 3, 4, 5]).head, 2);
        });
    }

    #[test]
    fn provided_head_wins() {
        with_layer(|l| {
            let h = find_head(l.nodes(), &[3, 4], &["x".into(), "1".into()]);
            assert_eq!((h.head, h.rule_used), (3, HeadRule::Provided));
            let h = find_head(l.nodes(), &[3, 4], &["x".into(), "9".into()]);
            assert_eq!((h.head, h.rule_used), (4, HeadRule::HighestNode));
        });
    }

    #[test]
    fn flat_children_inside_mention_count() {
        with_layer(|l| {
            let m = mention(vec![0, 1], 0);
            assert_eq!(head_upos_set(l, &m), BTreeSet::from(["NOUN", "PROPN"]));
            // flat child outside the mention is ignored
            let m = mention(vec![0], 0);
            assert_eq!(head_upos_set(l, &m), BTreeSet::from(["NOUN"]));
        });
    }
}
