//! Corpus statistics over coreference layers.

use std::ops::AddAssign;

use serde::Serialize;

use crate::heads::treelet_roots;
use crate::metrics::ratio;
use crate::model::CorefDoc;

pub const UPOS_BUCKETS: [&str; 9] = ["NOUN", "PRON", "PROPN", "DET", "ADJ", "VERB", "ADV", "NUM", "other"];

/// Raw sums; percentages and means are derived on demand.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct StatsCounts {
    pub documents: u64,
    pub words: u64,
    pub empty_nodes: u64,
    pub entities: u64,
    pub entity_mentions_sum: u64,
    pub entity_max_len: u64,
    /// Entity lengths 1, 2, 3, 4, 5+.
    pub entity_hist: [u64; 5],
    pub mentions: u64,
    pub mention_words_sum: u64,
    pub mention_max_len: u64,
    /// Mention lengths in surface words 0, 1, 2, 3, 4, 5+.
    pub mention_hist: [u64; 6],
    pub with_empty: u64,
    pub with_gap: u64,
    pub non_tree: u64,
    pub head_upos: [u64; 9],
}

impl AddAssign<&StatsCounts> for StatsCounts {
    fn add_assign(&mut self, o: &StatsCounts) {
        self.documents += o.documents;
        self.words += o.words;
        self.empty_nodes += o.empty_nodes;
        self.entities += o.entities;
        self.entity_mentions_sum += o.entity_mentions_sum;
        self.entity_max_len = self.entity_max_len.max(o.entity_max_len);
        for (a, b) in self.entity_hist.iter_mut().zip(o.entity_hist) {
            *a += b;
        }
        self.mentions += o.mentions;
        self.mention_words_sum += o.mention_words_sum;
        self.mention_max_len = self.mention_max_len.max(o.mention_max_len);
        for (a, b) in self.mention_hist.iter_mut().zip(o.mention_hist) {
            *a += b;
        }
        self.with_empty += o.with_empty;
        self.with_gap += o.with_gap;
        self.non_tree += o.non_tree;
        for (a, b) in self.head_upos.iter_mut().zip(o.head_upos) {
            *a += b;
        }
    }
}

/// Counts for one layer. Entity figures cover all entities; mention
/// figures cover mentions of non-singleton entities unless
/// `include_singletons` is set.
pub fn collect(layer: &CorefDoc, include_singletons: bool) -> StatsCounts {
    let mut s = StatsCounts {
        documents: 1,
        ..Default::default()
    };
    for n in layer.nodes() {
        if n.is_empty {
            s.empty_nodes += 1;
        } else {
            s.words += 1;
        }
    }
    for e in layer.entities() {
        let len = e.mentions.len() as u64;
        s.entities += 1;
        s.entity_mentions_sum += len;
        s.entity_max_len = s.entity_max_len.max(len);
        s.entity_hist[(len.clamp(1, 5) - 1) as usize] += 1;

        if e.is_singleton() && !include_singletons {
            continue;
        }
        for m in &e.mentions {
            let words = layer.surface_len(m) as u64;
            s.mentions += 1;
            s.mention_words_sum += words;
            s.mention_max_len = s.mention_max_len.max(words);
            s.mention_hist[words.min(5) as usize] += 1;
            s.with_empty += layer.contains_empty(m) as u64;
            s.with_gap += m.is_discontinuous() as u64;
            s.non_tree += (treelet_roots(layer.nodes(), &m.nodes).len() >= 2) as u64;
            let upos = layer.token(m.head).upos();
            let bucket = UPOS_BUCKETS[..8].iter().position(|&u| u == upos).unwrap_or(8);
            s.head_upos[bucket] += 1;
        }
    }
    s
}

fn pct(n: u64, total: u64) -> f64 {
    100.0 * ratio(n as f64, total as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntityStats {
    pub total: u64,
    pub per_1k: f64,
    pub max_len: u64,
    pub mean_len: f64,
    /// Percentages for lengths 1, 2, 3, 4, 5+.
    pub hist: [f64; 5],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MentionStats {
    pub total: u64,
    pub per_1k: f64,
    pub max_len: u64,
    pub mean_len: f64,
    /// Percentages for lengths 0, 1, 2, 3, 4, 5+.
    pub hist: [f64; 6],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MentionDetailStats {
    pub with_empty: f64,
    pub with_gap: f64,
    pub non_tree: f64,
    /// Percentages in [`UPOS_BUCKETS`] order.
    pub head_upos: [f64; 9],
}

pub fn entity_stats(c: &StatsCounts) -> EntityStats {
    EntityStats {
        total: c.entities,
        per_1k: 1000.0 * ratio(c.entities as f64, c.words as f64),
        max_len: c.entity_max_len,
        mean_len: ratio(c.entity_mentions_sum as f64, c.entities as f64),
        hist: c.entity_hist.map(|n| pct(n, c.entities)),
    }
}

pub fn mention_stats(c: &StatsCounts) -> MentionStats {
    MentionStats {
        total: c.mentions,
        per_1k: 1000.0 * ratio(c.mentions as f64, c.words as f64),
        max_len: c.mention_max_len,
        mean_len: ratio(c.mention_words_sum as f64, c.mentions as f64),
        hist: c.mention_hist.map(|n| pct(n, c.mentions)),
    }
}

pub fn mention_detail_stats(c: &StatsCounts) -> MentionDetailStats {
    MentionDetailStats {
        with_empty: pct(c.with_empty, c.mentions),
        with_gap: pct(c.with_gap, c.mentions),
        non_tree: pct(c.non_tree, c.mentions),
        head_upos: c.head_upos.map(|n| pct(n, c.mentions)),
    }
}
