//! Coreference scores over aligned key/response layers.

mod evaluate;
mod scores;
mod zero;

use std::fmt;
use std::ops::AddAssign;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use evaluate::{
    evaluate, prepare_layer, score_layers, DatasetInput, DatasetScore, DocScore, EvalOptions,
    ScoreReport,
};
pub use scores::{
    b_cubed, blanc, blanc_counts, ceaf_e, lea, mention_lists, mor, muc, relabel, Clusters,
    Relabeled,
};
pub use zero::{zero_score, ZeroScoreCounts};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Prf {
    #[serde(rename = "r")]
    pub recall: f64,
    #[serde(rename = "p")]
    pub precision: f64,
    pub f1: f64,
}

impl Prf {
    pub fn new(recall: f64, precision: f64) -> Prf {
        let f1 = if recall + precision > 0.0 {
            2.0 * recall * precision / (recall + precision)
        } else {
            0.0
        };
        Prf {
            recall,
            precision,
            f1,
        }
    }

    pub fn perfect() -> Prf {
        Prf::new(1.0, 1.0)
    }

    /// Component-wise mean; the f1 field is the mean of f1 values.
    pub fn mean(items: &[Prf]) -> Prf {
        if items.is_empty() {
            return Prf::default();
        }
        let n = items.len() as f64;
        Prf {
            recall: items.iter().map(|p| p.recall).sum::<f64>() / n,
            precision: items.iter().map(|p| p.precision).sum::<f64>() / n,
            f1: items.iter().map(|p| p.f1).sum::<f64>() / n,
        }
    }
}

pub(crate) fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Recall and precision as numerator/denominator pairs, summable over documents.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Ratio {
    pub r_num: f64,
    pub r_den: f64,
    pub p_num: f64,
    pub p_den: f64,
}

impl Ratio {
    pub fn prf(&self) -> Prf {
        Prf::new(ratio(self.r_num, self.r_den), ratio(self.p_num, self.p_den))
    }
}

impl AddAssign for Ratio {
    fn add_assign(&mut self, o: Ratio) {
        self.r_num += o.r_num;
        self.r_den += o.r_den;
        self.p_num += o.p_num;
        self.p_den += o.p_den;
    }
}

/// Link counts behind BLANC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BlancCounts {
    pub coref_key: u64,
    pub coref_resp: u64,
    pub coref_both: u64,
    pub non_key: u64,
    pub non_resp: u64,
    pub non_both: u64,
}

impl BlancCounts {
    pub fn prf(&self) -> Prf {
        let class = |k: u64, r: u64, both: u64| -> Option<Prf> {
            if k == 0 && r == 0 {
                return None;
            }
            Some(Prf::new(
                ratio(both as f64, k as f64),
                ratio(both as f64, r as f64),
            ))
        };
        let classes: Vec<Prf> = [
            class(self.coref_key, self.coref_resp, self.coref_both),
            class(self.non_key, self.non_resp, self.non_both),
        ]
        .into_iter()
        .flatten()
        .collect();
        Prf::mean(&classes)
    }
}

impl AddAssign for BlancCounts {
    fn add_assign(&mut self, o: BlancCounts) {
        self.coref_key += o.coref_key;
        self.coref_resp += o.coref_resp;
        self.coref_both += o.coref_both;
        self.non_key += o.non_key;
        self.non_resp += o.non_resp;
        self.non_both += o.non_both;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Muc,
    Bcub,
    Ceafe,
    Conll,
    Blanc,
    Lea,
    Mor,
    Zero,
}

impl Metric {
    pub const ALL: [Metric; 8] = [
        Metric::Muc,
        Metric::Bcub,
        Metric::Ceafe,
        Metric::Conll,
        Metric::Blanc,
        Metric::Lea,
        Metric::Mor,
        Metric::Zero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Muc => "muc",
            Metric::Bcub => "bcub",
            Metric::Ceafe => "ceafe",
            Metric::Conll => "conll",
            Metric::Blanc => "blanc",
            Metric::Lea => "lea",
            Metric::Mor => "mor",
            Metric::Zero => "zero",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown metric `{s}`"))
    }
}

/// Summable per-document counts for every metric.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DocCounts {
    pub muc: Ratio,
    pub bcub: Ratio,
    pub ceafe: Ratio,
    pub blanc: BlancCounts,
    pub lea: Ratio,
    pub mor: Ratio,
    pub zero: ZeroScoreCounts,
}

impl DocCounts {
    pub fn prf(&self, metric: Metric) -> Prf {
        match metric {
            Metric::Muc => self.muc.prf(),
            Metric::Bcub => self.bcub.prf(),
            Metric::Ceafe => self.ceafe.prf(),
            Metric::Conll => Prf::mean(&[self.muc.prf(), self.bcub.prf(), self.ceafe.prf()]),
            Metric::Blanc => self.blanc.prf(),
            Metric::Lea => self.lea.prf(),
            Metric::Mor => self.mor.prf(),
            Metric::Zero => self.zero.prf(),
        }
    }
}

impl AddAssign for DocCounts {
    fn add_assign(&mut self, o: DocCounts) {
        self.muc += o.muc;
        self.bcub += o.bcub;
        self.ceafe += o.ceafe;
        self.blanc += o.blanc;
        self.lea += o.lea;
        self.mor += o.mor;
        self.zero += o.zero;
    }
}
