//! Anaphor-decomposable score restricted to zero mentions.

use std::collections::HashMap;
use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

use crate::metrics::{ratio, Prf};
use crate::model::{CorefDoc, Mention, NodeIdx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ZeroScoreCounts {
    pub tp: u64,
    pub wl: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ZeroScoreCounts {
    pub fn prf(&self) -> Prf {
        Prf::new(
            ratio(self.tp as f64, (self.tp + self.wl + self.fn_) as f64),
            ratio(self.tp as f64, (self.tp + self.wl + self.fp) as f64),
        )
    }
}

impl AddAssign for ZeroScoreCounts {
    fn add_assign(&mut self, o: ZeroScoreCounts) {
        self.tp += o.tp;
        self.wl += o.wl;
        self.fp += o.fp;
        self.fn_ += o.fn_;
    }
}

#[derive(Clone, Copy)]
struct Zero {
    entity: usize,
    /// Position within the entity; 0 means non-anaphoric.
    pos: usize,
}

fn zeros<'a>(layer: &'a CorefDoc) -> Vec<(&'a Mention, Zero)> {
    let mut out: Vec<(&Mention, Zero)> = Vec::new();
    for (ei, e) in layer.entities().iter().enumerate() {
        for (mi, m) in e.mentions.iter().enumerate() {
            if layer.is_zero(m) {
                out.push((m, Zero { entity: ei, pos: mi }));
            }
        }
    }
    out.sort_by(|a, b| a.0.order_cmp(b.0).then((a.1.entity, a.1.pos).cmp(&(b.1.entity, b.1.pos))));
    out
}

fn overlap(a: &Mention, b: &Mention) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.nodes.len() && j < b.nodes.len() {
        match a.nodes[i].cmp(&b.nodes[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Zeros are paired one-to-one by identical node sets, in mention order.
/// Layers must share one node universe.
pub fn zero_score(key: &CorefDoc, resp: &CorefDoc) -> ZeroScoreCounts {
    let kz = zeros(key);
    let rz = zeros(resp);

    let mut by_span: HashMap<&[NodeIdx], Vec<usize>> = HashMap::new();
    for (ri, (m, _)) in rz.iter().enumerate().rev() {
        by_span.entry(m.nodes.as_slice()).or_default().push(ri);
    }
    let mut resp_match: Vec<Option<usize>> = vec![None; rz.len()];
    let mut counts = ZeroScoreCounts::default();

    for (ki, (_, z)) in kz.iter().enumerate() {
        let counterpart = by_span.get_mut(kz[ki].0.nodes.as_slice()).and_then(Vec::pop);
        if let Some(ri) = counterpart {
            resp_match[ri] = Some(ki);
        }
        if z.pos == 0 {
            continue;
        }
        match counterpart.map(|ri| rz[ri].1) {
            Some(r) if r.pos > 0 => {
                let key_prev = &key.entities()[z.entity].mentions[..z.pos];
                let resp_prev = &resp.entities()[r.entity].mentions[..r.pos];
                if key_prev.iter().any(|a| resp_prev.iter().any(|b| overlap(a, b))) {
                    counts.tp += 1;
                } else {
                    counts.wl += 1;
                }
            }
            _ => counts.fn_ += 1,
        }
    }
    for (ri, (_, r)) in rz.iter().enumerate() {
        if r.pos > 0 && resp_match[ri].map_or(true, |ki| kz[ki].1.pos == 0) {
            counts.fp += 1;
        }
    }
    counts
}
