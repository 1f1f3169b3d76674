//! Rule-based reference predictors.
//!
//! A token "belongs" to an entity when it heads one of the entity's
//! mentions. Whenever two entities have to be joined, the one with the
//! smaller eid absorbs the other.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::heads::HeadRule;
use crate::model::{eid_cmp, CorefDoc, Entity, Mention, NodeIdx};
use crate::transforms::{merge_same_span_entities, reduce_to_head};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    PropnLemma,
    PronounGender,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::PropnLemma => "propn-lemma",
            Rule::PronounGender => "pronoun-gender",
        })
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "propn-lemma" => Ok(Rule::PropnLemma),
            "pronoun-gender" => Ok(Rule::PronounGender),
            _ => Err(format!("unknown rule `{s}`")),
        }
    }
}

fn single(n: NodeIdx) -> Mention {
    Mention {
        nodes: vec![n],
        head: n,
        head_rule: HeadRule::HighestNode,
        fields: Vec::new(),
    }
}

/// Eid of the smallest-eid entity having a mention headed by `n`.
fn owner(layer: &CorefDoc, n: NodeIdx) -> Option<String> {
    layer
        .entities()
        .iter()
        .filter(|e| e.mentions.iter().any(|m| m.head == n))
        .map(|e| e.eid.as_str())
        .min_by(|a, b| eid_cmp(a, b))
        .map(str::to_string)
}

fn index_of(layer: &CorefDoc, eid: &str) -> usize {
    layer.entities().iter().position(|e| e.eid == eid).unwrap()
}

/// Move all mentions of `other` into `target`, keeping each span once.
fn absorb(layer: &mut CorefDoc, target: &str, other: &str) {
    if target == other {
        return;
    }
    let oi = index_of(layer, other);
    let moved = layer.entities_mut().remove(oi).mentions;
    let ti = index_of(layer, target);
    let e = &mut layer.entities_mut()[ti];
    e.mentions.extend(moved);
    e.mentions.sort_by(|a, b| a.order_cmp(b));
    e.mentions.dedup_by(|a, b| a.nodes == b.nodes);
}

/// Add the single-node mention `{n}` to `eid` unless `n` already heads one of its mentions.
fn attach(layer: &mut CorefDoc, eid: &str, n: NodeIdx) {
    let ti = index_of(layer, eid);
    let e = &mut layer.entities_mut()[ti];
    if !e.mentions.iter().any(|m| m.head == n) {
        e.mentions.push(single(n));
    }
}

/// Put all tokens of `nodes` into one entity, joining existing ones.
fn unify(layer: &mut CorefDoc, nodes: &[NodeIdx]) {
    let mut owners: Vec<String> = nodes.iter().filter_map(|&n| owner(layer, n)).collect();
    owners.sort_by(|a, b| eid_cmp(a, b));
    owners.dedup();
    let target = match owners.first() {
        Some(t) => t.clone(),
        None => {
            let eid = layer.fresh_eid();
            layer.entities_mut().push(Entity {
                eid: eid.clone(),
                mentions: Vec::new(),
            });
            eid
        }
    };
    for o in &owners[owners.len().min(1)..] {
        absorb(layer, &target, o);
    }
    for &n in nodes {
        attach(layer, &target, n);
    }
    layer.normalize();
}

/// Proper nouns sharing a lemma end up in one entity.
pub fn propn_lemma_merge(layer: &mut CorefDoc, enabled: bool) -> bool {
    if !enabled {
        return false;
    }
    let mut groups: BTreeMap<&str, Vec<NodeIdx>> = BTreeMap::new();
    for (i, node) in layer.nodes().iter().enumerate() {
        let tok = layer.token(i as NodeIdx);
        if !node.is_empty && tok.upos() == "PROPN" && tok.lemma() != "_" {
            groups.entry(tok.lemma()).or_default().push(i as NodeIdx);
        }
    }
    let before = layer.clone();
    for nodes in groups.into_values().filter(|g| g.len() >= 2) {
        unify(layer, &nodes);
    }
    *layer != before
}

/// Each gendered pronoun joins the nearest preceding noun of the same gender.
pub fn pronoun_gender_link(layer: &mut CorefDoc) -> bool {
    let mut last_noun: HashMap<&str, NodeIdx> = HashMap::new();
    let mut links: Vec<(NodeIdx, NodeIdx)> = Vec::new();
    for (i, node) in layer.nodes().iter().enumerate() {
        if node.is_empty {
            continue;
        }
        let tok = layer.token(i as NodeIdx);
        let Some(gender) = tok.feat("Gender") else {
            continue;
        };
        match tok.upos() {
            "PRON" => {
                if let Some(&noun) = last_noun.get(gender) {
                    links.push((noun, i as NodeIdx));
                }
            }
            "NOUN" => {
                last_noun.insert(gender, i as NodeIdx);
            }
            _ => {}
        }
    }
    let before = layer.clone();
    for (noun, pron) in links {
        unify(layer, &[noun, pron]);
    }
    *layer != before
}

/// Head reduction, same-span merging and the optional proper-noun rule.
pub fn head_merge_postprocess(layer: &mut CorefDoc, propn: bool) -> bool {
    let a = reduce_to_head(layer);
    let b = merge_same_span_entities(layer);
    let c = propn_lemma_merge(layer, propn);
    a || b || c
}

/// Run the selected rules, then the shared post-processing.
pub fn run_baseline(layer: &mut CorefDoc, rules: &[Rule], propn_enabled: bool) -> bool {
    let linked = rules.contains(&Rule::PronounGender) && pronoun_gender_link(layer);
    let post = head_merge_postprocess(layer, propn_enabled && rules.contains(&Rule::PropnLemma));
    linked || post
}
