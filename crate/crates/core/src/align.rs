//! Key/response mention alignment under exact and partial matching.
//!
//! Identical spans are paired first, greedily in mention order. Under the
//! partial policy the remaining mentions are then matched with maximum
//! cardinality, then maximum word overlap, then the lexicographically
//! smallest list of (key rank, response rank) pairs.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::assignment::{components, max_weight_assignment, max_weight_matching};
use crate::model::{Mention, NodeIdx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MatchPolicy {
    Exact,
    #[default]
    Partial,
    /// Conservative head reduction on both sides, then partial matching.
    Head,
}

impl fmt::Display for MatchPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatchPolicy::Exact => "exact",
            MatchPolicy::Partial => "partial",
            MatchPolicy::Head => "head",
        })
    }
}

impl FromStr for MatchPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(MatchPolicy::Exact),
            "partial" => Ok(MatchPolicy::Partial),
            "head" => Ok(MatchPolicy::Head),
            _ => Err(format!("unknown match policy `{s}`")),
        }
    }
}

fn is_subset(small: &[NodeIdx], big: &[NodeIdx]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Whether `resp` counts as a match of `key`. `Head` behaves as `Partial`;
/// the head reduction itself happens before alignment.
pub fn matches(key: &Mention, resp: &Mention, policy: MatchPolicy) -> bool {
    match policy {
        MatchPolicy::Exact => key.nodes == resp.nodes,
        MatchPolicy::Partial | MatchPolicy::Head => {
            resp.contains(key.head) && is_subset(&resp.nodes, &key.nodes)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MentionAlignment {
    /// (key index, response index), sorted by key index.
    pub pairs: Vec<(usize, usize)>,
    pub policy: MatchPolicy,
}

impl MentionAlignment {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Response index aligned to each key mention.
    pub fn key_to_response(&self, n_key: usize) -> Vec<Option<usize>> {
        let mut v = vec![None; n_key];
        for &(k, r) in &self.pairs {
            v[k] = Some(r);
        }
        v
    }
}

/// Align two mention lists; list order is the rank used for tie-breaking.
pub fn align_mentions(key: &[&Mention], resp: &[&Mention], policy: MatchPolicy) -> MentionAlignment {
    let mut key_done = vec![false; key.len()];
    let mut resp_done = vec![false; resp.len()];
    let mut pairs = Vec::new();

    let mut by_span: HashMap<&[NodeIdx], Vec<usize>> = HashMap::new();
    for (ri, r) in resp.iter().enumerate().rev() {
        by_span.entry(r.nodes.as_slice()).or_default().push(ri);
    }
    for (ki, k) in key.iter().enumerate() {
        if let Some(ri) = by_span.get_mut(k.nodes.as_slice()).and_then(Vec::pop) {
            key_done[ki] = true;
            resp_done[ri] = true;
            pairs.push((ki, ri));
        }
    }

    if policy != MatchPolicy::Exact {
        let mut by_head: HashMap<NodeIdx, Vec<usize>> = HashMap::new();
        for (ki, k) in key.iter().enumerate() {
            if !key_done[ki] {
                by_head.entry(k.head).or_default().push(ki);
            }
        }
        let mut edges: Vec<(usize, usize, u64)> = Vec::new();
        for (ri, r) in resp.iter().enumerate() {
            if resp_done[ri] {
                continue;
            }
            for n in &r.nodes {
                if let Some(ks) = by_head.get(n) {
                    for &ki in ks {
                        if is_subset(&r.nodes, &key[ki].nodes) {
                            edges.push((ki, ri, r.nodes.len() as u64));
                        }
                    }
                }
            }
        }
        pairs.extend(lexicographic_max_matching(key.len(), resp.len(), &edges));
    }

    pairs.sort_unstable();
    MentionAlignment { pairs, policy }
}

/// Among matchings of maximum cardinality and then maximum total weight,
/// the one whose sorted pair list is lexicographically smallest.
pub(crate) fn lexicographic_max_matching(
    n_left: usize,
    n_right: usize,
    edges: &[(usize, usize, u64)],
) -> Vec<(usize, usize)> {
    let plain: Vec<(usize, usize)> = edges.iter().map(|&(l, r, _)| (l, r)).collect();
    let mut out = Vec::new();
    for (ls, rs, es) in components(n_left, n_right, &plain) {
        if es.len() == 1 {
            out.push(plain[es[0]]);
            continue;
        }
        // Every edge outweighs any sum of overlaps, so cardinality dominates.
        let bonus: u64 = es.iter().map(|&e| edges[e].2).sum::<u64>() + 1;
        let mut matrix = vec![vec![0.0f64; rs.len()]; ls.len()];
        let mut local: Vec<(usize, usize, f64)> = es
            .iter()
            .map(|&e| {
                let (l, r, w) = edges[e];
                let li = ls.binary_search(&l).unwrap();
                let ri = rs.binary_search(&r).unwrap();
                let w = (bonus + w) as f64;
                matrix[li][ri] = matrix[li][ri].max(w);
                (li, ri, w)
            })
            .collect();
        local.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        local.dedup_by(|a, b| (a.0, a.1) == (b.0, b.1));

        let solve = |rows_used: &[bool], cols_used: &[bool]| -> f64 {
            let rows: Vec<usize> = (0..ls.len()).filter(|&i| !rows_used[i]).collect();
            let cols: Vec<usize> = (0..rs.len()).filter(|&j| !cols_used[j]).collect();
            if rows.is_empty() || cols.is_empty() {
                return 0.0;
            }
            let sub: Vec<Vec<f64>> = rows
                .iter()
                .map(|&i| cols.iter().map(|&j| matrix[i][j]).collect())
                .collect();
            max_weight_assignment(&sub)
                .into_iter()
                .enumerate()
                .filter_map(|(i, c)| c.map(|c| sub[i][c]))
                .sum()
        };

        let mut rows_used = vec![false; ls.len()];
        let mut cols_used = vec![false; rs.len()];
        let optimum = solve(&rows_used, &cols_used);
        let mut fixed = 0.0;
        for &(li, ri, _) in &local {
            if rows_used[li] || cols_used[ri] {
                continue;
            }
            let w = matrix[li][ri];
            rows_used[li] = true;
            cols_used[ri] = true;
            if fixed + w + solve(&rows_used, &cols_used) == optimum {
                fixed += w;
                out.push((ls[li], rs[ri]));
            } else {
                rows_used[li] = false;
                cols_used[ri] = false;
            }
        }
    }
    out
}

/// One-to-one alignment maximizing the total number of shared nodes,
/// regardless of entities. Returns the pairs and the total overlap.
pub fn overlap_alignment(key: &[&Mention], resp: &[&Mention]) -> (Vec<(usize, usize)>, u64) {
    let mut containing: HashMap<NodeIdx, Vec<usize>> = HashMap::new();
    for (ki, k) in key.iter().enumerate() {
        for &n in &k.nodes {
            containing.entry(n).or_default().push(ki);
        }
    }
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut counts: HashMap<usize, u64> = HashMap::new();
    for (ri, r) in resp.iter().enumerate() {
        counts.clear();
        for n in &r.nodes {
            if let Some(ks) = containing.get(n) {
                for &ki in ks {
                    *counts.entry(ki).or_default() += 1;
                }
            }
        }
        let mut row: Vec<(usize, u64)> = counts.iter().map(|(&k, &c)| (k, c)).collect();
        row.sort_unstable();
        edges.extend(row.into_iter().map(|(ki, c)| (ki, ri, c as f64)));
    }
    let (pairs, total) = max_weight_matching(key.len(), resp.len(), &edges);
    (pairs, total as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heads::HeadRule;

    fn m(nodes: &[NodeIdx], head: NodeIdx) -> Mention {
        Mention {
            nodes: nodes.to_vec(),
            head,
            head_rule: HeadRule::HighestNode,
            fields: vec![],
        }
    }

    #[test]
    fn partial_predicate() {
        // the=0 big=1 dog=2
        let key = m(&[0, 1, 2], 2);
        assert!(matches(&key, &m(&[1, 2], 2), MatchPolicy::Partial));
        assert!(!matches(&key, &m(&[0, 1], 1), MatchPolicy::Partial));
        assert!(!matches(&key, &m(&[1, 2], 2), MatchPolicy::Exact));
        assert!(matches(&key, &m(&[0, 1, 2], 2), MatchPolicy::Exact));
    }

    #[test]
    fn partial_predicate_discontinuous_enumeration() {
        // Key {A=0, B=1, E=4} head B; C=2 is outside the key.
        let key = m(&[0, 1, 4], 1);
        let universe = [0u32, 1, 4, 2];
        for mask in 1u32..16 {
            let nodes: Vec<NodeIdx> = {
                let mut v: Vec<NodeIdx> = (0..4)
                    .filter(|b| mask & (1 << b) != 0)
                    .map(|b| universe[b as usize])
                    .collect();
                v.sort_unstable();
                v
            };
            let expected = nodes.contains(&1) && !nodes.contains(&2);
            assert_eq!(
                matches(&key, &m(&nodes, nodes[0]), MatchPolicy::Partial),
                expected,
                "{nodes:?}"
            );
        }
    }

    #[test]
    fn larger_overlap_wins() {
        let key = [m(&[0, 1, 2], 1)];
        let resp = [m(&[1], 1), m(&[0, 1, 2], 1)];
        let keys: Vec<&Mention> = key.iter().collect();
        let resps: Vec<&Mention> = resp.iter().collect();
        let a = align_mentions(&keys, &resps, MatchPolicy::Partial);
        assert_eq!(a.pairs, vec![(0, 1)]);
    }

    #[test]
    fn nested_keys_identical_span_first() {
        let key = [m(&[0, 1, 2], 1), m(&[1], 1)];
        let resp = [m(&[1], 1)];
        let keys: Vec<&Mention> = key.iter().collect();
        let resps: Vec<&Mention> = resp.iter().collect();
        let a = align_mentions(&keys, &resps, MatchPolicy::Partial);
        assert_eq!(a.pairs, vec![(1, 0)]);
    }

    #[test]
    fn lexicographic_tie_break() {
        // Two keys, two responses, all four edges of equal weight.
        let edges = vec![(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)];
        assert_eq!(lexicographic_max_matching(2, 2, &edges), vec![(0, 0), (1, 1)]);
        // Cardinality beats overlap.
        let edges = vec![(0, 0, 5), (0, 1, 1), (1, 0, 1)];
        let mut got = lexicographic_max_matching(2, 2, &edges);
        got.sort_unstable();
        assert_eq!(got, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn mor_alignment_example() {
        let key = [m(&[0, 1, 2], 1), m(&[3], 3)];
        let resp = [m(&[1, 2], 1)];
        let keys: Vec<&Mention> = key.iter().collect();
        let resps: Vec<&Mention> = resp.iter().collect();
        let (pairs, total) = overlap_alignment(&keys, &resps);
        assert_eq!(pairs, vec![(0, 0)]);
        assert_eq!(total, 2);
    }
}
