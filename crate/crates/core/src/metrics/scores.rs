//! Entity-level metrics over relabeled clusters.
//!
//! Clusters are lists of mention ids. Key mention `i` has id `i`; a response
//! mention aligned to key mention `i` also gets id `i`, so intersections
//! between key and response clusters are plain id intersections.

use std::collections::HashMap;

use crate::align::{overlap_alignment, MentionAlignment};
use crate::assignment::max_weight_matching;
use crate::metrics::{BlancCounts, Ratio};
use crate::model::{CorefDoc, Mention, MentionRef};

pub type Clusters = Vec<Vec<usize>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabeled {
    pub key: Clusters,
    pub resp: Clusters,
    /// Upper bound on mention ids.
    pub n_ids: usize,
}

/// Mentions of a layer in alignment order.
pub fn mention_lists<'a>(layer: &'a CorefDoc<'_>) -> (Vec<MentionRef>, Vec<&'a Mention>) {
    let refs = layer.sorted_mentions();
    let ms = refs.iter().map(|&r| layer.mention(r)).collect();
    (refs, ms)
}

/// Cluster ids for both layers given an alignment over [`mention_lists`] order.
pub fn relabel(key: &CorefDoc, resp: &CorefDoc, alignment: &MentionAlignment) -> Relabeled {
    let (key_refs, _) = mention_lists(key);
    let (resp_refs, _) = mention_lists(resp);
    let nk = key_refs.len();

    let mut resp_id: Vec<usize> = (0..resp_refs.len()).map(|j| nk + j).collect();
    for &(k, r) in &alignment.pairs {
        resp_id[r] = k;
    }

    let clusters = |layer: &CorefDoc, refs: &[MentionRef], id: &dyn Fn(usize) -> usize| {
        let mut out: Clusters = vec![Vec::new(); layer.entities().len()];
        for (i, r) in refs.iter().enumerate() {
            out[r.entity].push(id(i));
        }
        out.retain(|c| !c.is_empty());
        out
    };
    Relabeled {
        key: clusters(key, &key_refs, &|i| i),
        resp: clusters(resp, &resp_refs, &|j| resp_id[j]),
        n_ids: nk + resp_refs.len(),
    }
}

fn cluster_of(clusters: &[Vec<usize>], n_ids: usize) -> Vec<Option<usize>> {
    let mut of = vec![None; n_ids];
    for (ci, c) in clusters.iter().enumerate() {
        for &m in c {
            of[m] = Some(ci);
        }
    }
    of
}

fn n_ids(key: &[Vec<usize>], resp: &[Vec<usize>]) -> usize {
    key.iter()
        .chain(resp)
        .flatten()
        .max()
        .map_or(0, |&m| m + 1)
}

/// Sizes of the non-empty intersections `|K ∩ R|`, keyed by (key, response) cluster.
fn intersections(key: &[Vec<usize>], resp: &[Vec<usize>]) -> HashMap<(usize, usize), usize> {
    let resp_of = cluster_of(resp, n_ids(key, resp));
    let mut out = HashMap::new();
    for (ki, k) in key.iter().enumerate() {
        for &m in k {
            if let Some(ri) = resp_of[m] {
                *out.entry((ki, ri)).or_insert(0) += 1;
            }
        }
    }
    out
}

/// Sum in ascending order, so the result does not depend on entity order.
fn ordered_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.into_iter().sum()
}

fn muc_side(a: &[Vec<usize>], b: &[Vec<usize>]) -> (f64, f64) {
    let b_of = cluster_of(b, n_ids(a, b));
    let mut num = 0usize;
    let mut den = 0usize;
    for c in a {
        if c.len() < 2 {
            continue;
        }
        let mut cells: Vec<usize> = c.iter().filter_map(|&m| b_of[m]).collect();
        let missing = c.len() - cells.len();
        cells.sort_unstable();
        cells.dedup();
        num += c.len() - (cells.len() + missing);
        den += c.len() - 1;
    }
    (num as f64, den as f64)
}

pub fn muc(key: &[Vec<usize>], resp: &[Vec<usize>]) -> Ratio {
    let (r_num, r_den) = muc_side(key, resp);
    let (p_num, p_den) = muc_side(resp, key);
    Ratio {
        r_num,
        r_den,
        p_num,
        p_den,
    }
}

pub fn b_cubed(key: &[Vec<usize>], resp: &[Vec<usize>]) -> Ratio {
    let cells = intersections(key, resp);
    let r_terms = cells.iter().map(|(&(ki, _), &n)| (n * n) as f64 / key[ki].len() as f64);
    let p_terms = cells.iter().map(|(&(_, ri), &n)| (n * n) as f64 / resp[ri].len() as f64);
    Ratio {
        r_num: ordered_sum(r_terms.collect()),
        r_den: key.iter().map(Vec::len).sum::<usize>() as f64,
        p_num: ordered_sum(p_terms.collect()),
        p_den: resp.iter().map(Vec::len).sum::<usize>() as f64,
    }
}

pub fn ceaf_e(key: &[Vec<usize>], resp: &[Vec<usize>]) -> Ratio {
    let mut edges: Vec<(usize, usize, f64)> = intersections(key, resp)
        .into_iter()
        .map(|((ki, ri), n)| {
            (
                ki,
                ri,
                2.0 * n as f64 / (key[ki].len() + resp[ri].len()) as f64,
            )
        })
        .collect();
    edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    let (pairs, _) = max_weight_matching(key.len(), resp.len(), &edges);
    let weight = |&(k, r): &(usize, usize)| {
        let i = edges.binary_search_by(|e| (e.0, e.1).cmp(&(k, r))).unwrap();
        edges[i].2
    };
    let total = ordered_sum(pairs.iter().map(weight).collect());
    Ratio {
        r_num: total,
        r_den: key.len() as f64,
        p_num: total,
        p_den: resp.len() as f64,
    }
}

fn choose2(n: usize) -> u64 {
    (n as u64) * (n as u64).saturating_sub(1) / 2
}

pub fn blanc_counts(key: &[Vec<usize>], resp: &[Vec<usize>]) -> BlancCounts {
    let ids = n_ids(key, resp);
    let mut in_key = vec![false; ids];
    let mut in_resp = vec![false; ids];
    for &m in key.iter().flatten() {
        in_key[m] = true;
    }
    for &m in resp.iter().flatten() {
        in_resp[m] = true;
    }
    let common = (0..ids).filter(|&m| in_key[m] && in_resp[m]).count();

    let coref_key: u64 = key.iter().map(|c| choose2(c.len())).sum();
    let coref_resp: u64 = resp.iter().map(|c| choose2(c.len())).sum();
    let coref_both: u64 = intersections(key, resp).values().map(|&n| choose2(n)).sum();
    let n_key: usize = key.iter().map(Vec::len).sum();
    let n_resp: usize = resp.iter().map(Vec::len).sum();

    let key_common: u64 = key
        .iter()
        .map(|c| choose2(c.iter().filter(|&&m| in_resp[m]).count()))
        .sum();
    let resp_common: u64 = resp
        .iter()
        .map(|c| choose2(c.iter().filter(|&&m| in_key[m]).count()))
        .sum();
    // Pairs of common mentions split on both sides, by inclusion-exclusion.
    let non_both = choose2(common) + coref_both - key_common - resp_common;

    BlancCounts {
        coref_key,
        coref_resp,
        coref_both,
        non_key: choose2(n_key) - coref_key,
        non_resp: choose2(n_resp) - coref_resp,
        non_both,
    }
}

pub fn blanc(key: &[Vec<usize>], resp: &[Vec<usize>]) -> crate::metrics::Prf {
    blanc_counts(key, resp).prf()
}

fn lea_side(a: &[Vec<usize>], b: &[Vec<usize>]) -> (f64, f64) {
    let b_of = cluster_of(b, n_ids(a, b));
    let mut terms = Vec::with_capacity(a.len());
    let mut den = 0.0;
    for c in a {
        let size = c.len() as f64;
        let resolution = if c.len() == 1 {
            // A singleton is resolved when it is a singleton on the other side too.
            match b_of[c[0]] {
                Some(bi) if b[bi].len() == 1 => 1.0,
                _ => 0.0,
            }
        } else {
            let mut counts: HashMap<usize, usize> = HashMap::new();
            for &m in c {
                if let Some(bi) = b_of[m] {
                    *counts.entry(bi).or_insert(0) += 1;
                }
            }
            let common: u64 = counts.values().map(|&n| choose2(n)).sum();
            common as f64 / choose2(c.len()) as f64
        };
        terms.push(size * resolution);
        den += size;
    }
    (ordered_sum(terms), den)
}

pub fn lea(key: &[Vec<usize>], resp: &[Vec<usize>]) -> Ratio {
    let (r_num, r_den) = lea_side(key, resp);
    let (p_num, p_den) = lea_side(resp, key);
    Ratio {
        r_num,
        r_den,
        p_num,
        p_den,
    }
}

/// Mention overlap ratio over node sets, ignoring entities.
pub fn mor(key: &[&Mention], resp: &[&Mention]) -> Ratio {
    let (_, total) = overlap_alignment(key, resp);
    Ratio {
        r_num: total as f64,
        r_den: key.iter().map(|m| m.len()).sum::<usize>() as f64,
        p_num: total as f64,
        p_den: resp.iter().map(|m| m.len()).sum::<usize>() as f64,
    }
}
