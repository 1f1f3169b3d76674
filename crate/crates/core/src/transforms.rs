//! In-place rewrites of a coreference layer. Each returns whether anything changed.

use std::cmp::Reverse;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::heads::head_upos_set;
use crate::model::{eid_cmp, CorefDoc, MentionRef, NodeIdx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transform {
    ReduceToHead,
    MergeSameSpan,
    ConservativeHeadReduce,
    RemoveSingletons,
}

impl Transform {
    pub const ALL: [Transform; 4] = [
        Transform::ReduceToHead,
        Transform::MergeSameSpan,
        Transform::ConservativeHeadReduce,
        Transform::RemoveSingletons,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Transform::ReduceToHead => "reduce-to-head",
            Transform::MergeSameSpan => "merge-same-span",
            Transform::ConservativeHeadReduce => "conservative-head-reduce",
            Transform::RemoveSingletons => "remove-singletons",
        }
    }

    pub fn apply(self, layer: &mut CorefDoc) -> bool {
        match self {
            Transform::ReduceToHead => reduce_to_head(layer),
            Transform::MergeSameSpan => merge_same_span_entities(layer),
            Transform::ConservativeHeadReduce => conservative_head_reduce(layer),
            Transform::RemoveSingletons => remove_singletons(layer),
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Transform {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Transform::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown transform `{s}`"))
    }
}

/// Every mention becomes its head node. Spans may end up duplicated.
pub fn reduce_to_head(layer: &mut CorefDoc) -> bool {
    let mut changed = false;
    for e in layer.entities_mut() {
        for m in &mut e.mentions {
            if m.len() > 1 {
                m.reduce_to_head();
                changed = true;
            }
        }
    }
    if changed {
        layer.normalize();
    }
    changed
}

/// Union entities sharing a mention span; the merged entity keeps the
/// smallest eid and duplicate spans are kept once.
pub fn merge_same_span_entities(layer: &mut CorefDoc) -> bool {
    let n = layer.entities().len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut seen: HashMap<Vec<NodeIdx>, usize> = HashMap::new();
    let mut duplicates = false;
    for (ei, e) in layer.entities().iter().enumerate() {
        for m in &e.mentions {
            match seen.get(&m.nodes) {
                Some(&other) => {
                    duplicates = true;
                    let a = find(&mut parent, other);
                    let b = find(&mut parent, ei);
                    parent[a.max(b)] = a.min(b);
                }
                None => {
                    seen.insert(m.nodes.clone(), ei);
                }
            }
        }
    }
    if !duplicates {
        return false;
    }

    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for ei in 0..n {
        groups.entry(find(&mut parent, ei)).or_default().push(ei);
    }
    let mut old = std::mem::take(layer.entities_mut());
    let mut merged = Vec::with_capacity(groups.len());
    let mut roots: Vec<usize> = groups.keys().copied().collect();
    roots.sort_unstable();
    for root in roots {
        let members = &groups[&root];
        let eid = members
            .iter()
            .map(|&i| old[i].eid.as_str())
            .min_by(|a, b| eid_cmp(a, b))
            .unwrap()
            .to_string();
        let mut mentions = Vec::new();
        for &i in members {
            mentions.append(&mut old[i].mentions);
        }
        mentions.sort_by(|a, b| a.order_cmp(b));
        mentions.dedup_by(|a, b| a.nodes == b.nodes);
        merged.push(crate::model::Entity { eid, mentions });
    }
    *layer.entities_mut() = merged;
    layer.normalize();
    true
}

/// Group mentions by head; in a group of several, the largest one (then
/// the earliest) stays intact and the rest shrink to the head. Lone
/// mentions shrink to the head.
pub fn conservative_head_reduce(layer: &mut CorefDoc) -> bool {
    let refs = layer.sorted_mentions();
    let mut groups: HashMap<NodeIdx, Vec<(usize, MentionRef)>> = HashMap::new();
    for (rank, r) in refs.iter().enumerate() {
        groups.entry(layer.mention(*r).head).or_default().push((rank, *r));
    }
    let mut reduce: Vec<MentionRef> = Vec::new();
    for group in groups.values() {
        if group.len() == 1 {
            reduce.push(group[0].1);
            continue;
        }
        let keep = group
            .iter()
            .min_by_key(|(rank, r)| {
                let m = layer.mention(*r);
                (Reverse(m.len()), m.first(), *rank)
            })
            .unwrap()
            .1;
        reduce.extend(group.iter().map(|g| g.1).filter(|&r| r != keep));
    }
    let mut changed = false;
    for r in reduce {
        let m = &mut layer.entities_mut()[r.entity].mentions[r.mention];
        if m.len() > 1 {
            m.reduce_to_head();
            changed = true;
        }
    }
    if changed {
        layer.normalize();
    }
    changed
}

pub fn remove_singletons(layer: &mut CorefDoc) -> bool {
    let before = layer.entities().len();
    layer.retain_entities(|e| !e.is_singleton());
    layer.entities().len() != before
}

/// Keep only entities with a mention whose head UPOS set contains `upos`.
pub fn upos_filter(layer: &mut CorefDoc, upos: &str) -> bool {
    let keep: Vec<bool> = layer
        .entities()
        .iter()
        .map(|e| e.mentions.iter().any(|m| head_upos_set(layer, m).contains(upos)))
        .collect();
    let mut it = keep.iter();
    let before = layer.entities().len();
    layer.retain_entities(|_| *it.next().unwrap());
    layer.entities().len() != before
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conllu::parse_str;

    // "the big dog and cat": dog is the root, cat a conjunct of dog.
    fn doc(misc: [&str; 5]) -> String {
        let rows = [
            ("1", "the", "DET", "3", "det"),
            ("2", "big", "ADJ", "3", "amod"),
            ("3", "dog", "NOUN", "0", "root"),
            ("4", "and", "CCONJ", "5", "cc"),
            ("5", "cat", "NOUN", "3", "conj"),
        ];
        let mut s = String::new();
        for ((id, form, upos, head, rel), misc) in rows.into_iter().zip(misc) {
            s += &format!("{id}\t{form}\t{form}\t{upos}\t_\t_\t{head}\t{rel}\t_\t{misc}\n");
        }
        s + "\n"
    }

    fn spans(l: &CorefDoc) -> Vec<(String, Vec<Vec<NodeIdx>>)> {
        l.entities()
            .iter()
            .map(|e| (e.eid.clone(), e.mentions.iter().map(|m| m.nodes.clone()).collect()))
            .collect()
    }

    #[test]
    fn coordination_shares_head() {
        // e1 = whole coordination, e2 = first conjunct; both headed by "dog".
        let c = parse_str(&doc(["Entity=(e1(e2", "_", "Entity=e2)", "_", "Entity=e1)"])).unwrap();
        let base = CorefDoc::build(&c.documents[0]).unwrap();

        let mut l = base.clone();
        assert!(reduce_to_head(&mut l));
        assert_eq!(spans(&l), vec![("e1".into(), vec![vec![2]]), ("e2".into(), vec![vec![2]])]);
        assert!(merge_same_span_entities(&mut l));
        assert_eq!(spans(&l), vec![("e1".into(), vec![vec![2]])]);

        let mut l = base.clone();
        assert!(conservative_head_reduce(&mut l));
        assert_eq!(
            spans(&l),
            vec![("e1".into(), vec![vec![0, 1, 2, 3, 4]]), ("e2".into(), vec![vec![2]])]
        );
        assert!(!conservative_head_reduce(&mut l));
    }

    #[test]
    fn lone_mention_reduces_to_head() {
        let c = parse_str(&doc(["Entity=(e1", "_", "Entity=e1)", "Entity=(e2)", "_"])).unwrap();
        let mut l = CorefDoc::build(&c.documents[0]).unwrap();
        conservative_head_reduce(&mut l);
        assert_eq!(spans(&l), vec![("e1".into(), vec![vec![2]]), ("e2".into(), vec![vec![3]])]);
    }

    #[test]
    fn remove_singletons_and_filter() {
        let c = parse_str(&doc(["Entity=(e1)", "_", "Entity=(e2)", "Entity=(e3)", "Entity=(e2)"])).unwrap();
        let mut l = CorefDoc::build(&c.documents[0]).unwrap();
        assert!(remove_singletons(&mut l));
        assert_eq!(spans(&l), vec![("e2".into(), vec![vec![2], vec![4]])]);
        assert!(!remove_singletons(&mut l));
        assert!(!upos_filter(&mut l, "NOUN"));
        assert!(upos_filter(&mut l, "DET"));
        assert!(l.entities().is_empty());
    }

    #[test]
    fn names_parse() {
        for t in Transform::ALL {
            assert_eq!(t.name().parse::<Transform>().unwrap(), t);
        }
    }
}
