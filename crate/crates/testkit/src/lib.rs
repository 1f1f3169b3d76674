//! Random CorefUD documents for property tests, plus naive reference
//! implementations of the scores in [`oracle`].

pub mod oracle;

use rand::seq::SliceRandom;
use rand::Rng;

use corefud::conllu::{parse_str, write_string, Corpus};
use corefud::heads::{find_head, highest_node};
use corefud::model::{CorefDoc, Entity, Mention};

/// Entities as lists of mentions, each a sorted list of node indices.
pub type Entities = Vec<Vec<Vec<u32>>>;

#[derive(Debug, Clone)]
pub struct SkeletonConfig {
    pub sentences: usize,
    pub min_words: usize,
    pub max_words: usize,
    /// Chance of an empty node after each word.
    pub empty_prob: f64,
}

impl Default for SkeletonConfig {
    fn default() -> Self {
        SkeletonConfig {
            sentences: 3,
            min_words: 3,
            max_words: 8,
            empty_prob: 0.15,
        }
    }
}

const UPOS: [&str; 10] = ["NOUN", "PRON", "PROPN", "DET", "ADJ", "VERB", "ADV", "NUM", "ADP", "X"];
const DEPRELS: [&str; 7] = ["nsubj", "obj", "det", "amod", "flat", "conj", "obl"];
const GENDERS: [&str; 4] = ["_", "Gender=Masc", "Gender=Fem", "Gender=Neut"];

/// A document without coreference annotation: random trees, random
/// morphology, occasional empty nodes attached through DEPS.
pub fn skeleton(rng: &mut impl Rng, cfg: &SkeletonConfig) -> String {
    let mut out = String::from("# newdoc id = d1\n");
    for s in 0..cfg.sentences {
        let n = rng.gen_range(cfg.min_words..=cfg.max_words);
        let mut order: Vec<usize> = (1..=n).collect();
        order.shuffle(rng);
        let mut head = vec![0usize; n + 1];
        for i in 1..n {
            head[order[i]] = order[rng.gen_range(0..i)];
        }
        out += &format!("# sent_id = d1-s{}\n", s + 1);
        for w in 1..=n {
            let upos = UPOS[rng.gen_range(0..UPOS.len())];
            let lemma = format!("l{}", rng.gen_range(0..6));
            let form = if upos == "PROPN" { format!("N{lemma}") } else { lemma.clone() };
            let lemma = if upos == "PROPN" { form.clone() } else { lemma };
            let feats = GENDERS[rng.gen_range(0..GENDERS.len())];
            let deprel = if head[w] == 0 {
                "root"
            } else {
                DEPRELS[rng.gen_range(0..DEPRELS.len())]
            };
            out += &format!("{w}\t{form}\t{lemma}\t{upos}\t_\t{feats}\t{}\t{deprel}\t_\t_\n", head[w]);
            let mut k = 1;
            while rng.gen_bool(cfg.empty_prob) && k <= 2 {
                out += &format!("{w}.{k}\t_\t_\tPRON\t_\t{feats}\t_\t_\t{w}:nsubj\t_\n");
                k += 1;
            }
        }
        out.push('\n');
    }
    out
}

/// Serialize `entities` (eids `e1`, `e2`, …) onto a skeleton.
pub fn render(skeleton: &str, entities: &Entities) -> String {
    let corpus = parse_str(skeleton).expect("skeleton parses");
    let mut docs = Vec::new();
    for doc in &corpus.documents {
        let mut layer = CorefDoc::build(doc).expect("skeleton layer");
        for (i, ms) in entities.iter().enumerate() {
            if ms.is_empty() {
                continue;
            }
            let mentions = ms
                .iter()
                .map(|nodes| {
                    let choice = find_head(layer.nodes(), nodes, &[]);
                    Mention {
                        nodes: nodes.clone(),
                        head: choice.head,
                        head_rule: choice.rule_used,
                        fields: Vec::new(),
                    }
                })
                .collect();
            layer.push_entity(Entity {
                eid: format!("e{}", i + 1),
                mentions,
            });
        }
        docs.push(layer.to_document().expect("serializable layer"));
    }
    write_string(&Corpus {
        documents: docs,
        ..corpus
    })
}

#[derive(Debug, Clone)]
pub struct EntityConfig {
    pub max_entities: usize,
    pub max_mentions: usize,
    pub max_len: usize,
    pub zero_prob: f64,
    pub max_zeros: usize,
    pub discontinuous_prob: f64,
}

impl Default for EntityConfig {
    fn default() -> Self {
        EntityConfig {
            max_entities: 4,
            max_mentions: 10,
            max_len: 4,
            zero_prob: 0.2,
            max_zeros: 5,
            discontinuous_prob: 0.15,
        }
    }
}

fn sentence_nodes(layer: &CorefDoc) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    for (i, n) in layer.nodes().iter().enumerate() {
        if out.len() <= n.sent as usize {
            out.resize(n.sent as usize + 1, Vec::new());
        }
        out[n.sent as usize].push(i as u32);
    }
    out
}

fn random_span(rng: &mut impl Rng, layer: &CorefDoc, cfg: &EntityConfig, zeros_left: &mut usize) -> Vec<u32> {
    let sents = sentence_nodes(layer);
    let sent = &sents[rng.gen_range(0..sents.len())];
    let empties: Vec<u32> = sent
        .iter()
        .copied()
        .filter(|&n| layer.nodes()[n as usize].is_empty)
        .collect();
    if *zeros_left > 0 && !empties.is_empty() && rng.gen_bool(cfg.zero_prob) {
        *zeros_left -= 1;
        return vec![*empties.choose(rng).unwrap()];
    }
    let len = rng.gen_range(1..=cfg.max_len.min(sent.len()));
    let start = rng.gen_range(0..=sent.len() - len);
    let mut span: Vec<u32> = sent[start..start + len].to_vec();
    let gap_start = start + len + 1;
    if gap_start < sent.len() && rng.gen_bool(cfg.discontinuous_prob) {
        let len2 = rng.gen_range(1..=(sent.len() - gap_start).min(2));
        span.extend_from_slice(&sent[gap_start..gap_start + len2]);
    }
    // A span made only of empty nodes counts as a zero.
    if span.iter().all(|&n| layer.nodes()[n as usize].is_empty) {
        if *zeros_left == 0 {
            span.retain(|_| false);
        } else {
            *zeros_left -= 1;
        }
    }
    span
}

fn same_sentence(layer: &CorefDoc, a: u32, b: u32) -> bool {
    layer.nodes()[a as usize].sent == layer.nodes()[b as usize].sent
}

fn overlaps(a: &[u32], b: &[u32]) -> bool {
    a.iter().any(|x| b.contains(x))
}

/// Put `span` into entity `e` unless it shares a node with one of its mentions.
fn try_add(entities: &mut Entities, e: usize, span: Vec<u32>) -> bool {
    if span.is_empty() || entities[e].iter().any(|m| overlaps(m, &span)) {
        return false;
    }
    entities[e].push(span);
    true
}

pub fn random_entities(rng: &mut impl Rng, layer: &CorefDoc, cfg: &EntityConfig) -> Entities {
    let n_ent = rng.gen_range(1..=cfg.max_entities);
    let n_mentions = rng.gen_range(1..=cfg.max_mentions);
    let mut entities: Entities = vec![Vec::new(); n_ent];
    let mut zeros_left = cfg.max_zeros;
    for _ in 0..n_mentions {
        for _attempt in 0..10 {
            let e = rng.gen_range(0..n_ent);
            let span = random_span(rng, layer, cfg, &mut zeros_left);
            if try_add(&mut entities, e, span) {
                break;
            }
        }
    }
    entities.retain(|e| !e.is_empty());
    entities
}

/// A response derived from `key`: spans kept, shrunk around the head,
/// extended, dropped or moved to other entities, plus spurious mentions.
pub fn perturb(rng: &mut impl Rng, layer: &CorefDoc, key: &Entities, cfg: &EntityConfig) -> Entities {
    let n_nodes = layer.nodes().len() as u32;
    let mut out: Entities = vec![Vec::new(); key.len() + 2];
    for (ei, ms) in key.iter().enumerate() {
        for m in ms {
            let roll: f64 = rng.gen();
            let (target, span) = if roll < 0.5 {
                (ei, m.clone())
            } else if roll < 0.65 {
                let head = highest_node(layer.nodes(), m).head;
                let span: Vec<u32> = m.iter().copied().filter(|&n| n == head || rng.gen_bool(0.5)).collect();
                (ei, span)
            } else if roll < 0.75 {
                let mut span = m.clone();
                let next = m.last().unwrap() + 1;
                if next < n_nodes && same_sentence(layer, m[0], next) {
                    span.push(next);
                }
                (ei, span)
            } else if roll < 0.85 {
                continue;
            } else {
                (rng.gen_range(0..out.len()), m.clone())
            };
            try_add(&mut out, target, span);
        }
    }
    let mut zeros_left = cfg.max_zeros.min(1);
    for _ in 0..rng.gen_range(0..=2) {
        let e = rng.gen_range(0..out.len());
        let span = random_span(rng, layer, cfg, &mut zeros_left);
        try_add(&mut out, e, span);
    }
    out.retain(|e| !e.is_empty());
    out.shuffle(rng);
    out
}

/// Skeleton, key and response texts for one random document pair.
pub fn random_pair(rng: &mut impl Rng, sk: &SkeletonConfig, ec: &EntityConfig) -> (String, String) {
    let text = skeleton(rng, sk);
    let corpus = parse_str(&text).unwrap();
    let layer = CorefDoc::build(&corpus.documents[0]).unwrap();
    let key = random_entities(rng, &layer, ec);
    let resp = perturb(rng, &layer, &key, ec);
    (render(&text, &key), render(&text, &resp))
}
