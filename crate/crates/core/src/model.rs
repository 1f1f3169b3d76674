//! The coreference layer of a document: nodes in global word order,
//! mentions as node sets and entities as mention clusters.

use std::cmp::Ordering;
use std::collections::HashMap;

use smallvec::SmallVec;
use thiserror::Error;

use crate::conllu::{
    head_index_field, BracketKind, Document, EntityBracket, HeadRef, PartIndex, Token, TokenId,
};
use crate::heads::{self, HeadRule};

/// Index of a node in document word order.
pub type NodeIdx = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorefError {
    #[error("document {doc}: part {part} of entity `{eid}` at sentence {sent}, node {node} does not continue an open discontinuous mention")]
    PartOrder {
        doc: String,
        eid: String,
        part: String,
        sent: String,
        node: String,
    },
    #[error("document {doc}: discontinuous mention of `{eid}` is missing parts")]
    PartIncomplete { doc: String, eid: String },
    #[error("document {doc}: unbalanced bracket for `{eid}`")]
    Unbalanced { doc: String, eid: String },
    #[error("document {doc}: cannot serialize {reason}")]
    Unserializable { doc: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub sent: u32,
    /// Index into `Sentence::tokens`.
    pub tok: u32,
    pub id: TokenId,
    pub is_empty: bool,
    /// Basic-tree parent; always `None` for empty nodes.
    pub parent: Option<NodeIdx>,
    pub enhanced_parents: SmallVec<[NodeIdx; 2]>,
    /// Distance from a root along [`Node::tree_parent`]; `None` on a cycle.
    pub depth: Option<u32>,
}

impl Node {
    /// Parent used for head finding: the basic parent, or the first
    /// enhanced parent when there is none (empty nodes).
    pub fn tree_parent(&self) -> Option<NodeIdx> {
        self.parent.or_else(|| self.enhanced_parents.first().copied())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mention {
    /// Sorted, non-empty.
    pub nodes: Vec<NodeIdx>,
    pub head: NodeIdx,
    pub head_rule: HeadRule,
    /// Opening-bracket fields after the eid (entity type, head index, …).
    pub fields: Vec<String>,
}

impl Mention {
    pub fn first(&self) -> NodeIdx {
        self.nodes[0]
    }

    pub fn last(&self) -> NodeIdx {
        *self.nodes.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, n: NodeIdx) -> bool {
        self.nodes.binary_search(&n).is_ok()
    }

    /// True if the nodes are not consecutive in document order.
    pub fn is_discontinuous(&self) -> bool {
        (self.last() - self.first()) as usize + 1 != self.nodes.len()
    }

    pub(crate) fn order_cmp(&self, other: &Mention) -> Ordering {
        (self.first(), self.last())
            .cmp(&(other.first(), other.last()))
            .then_with(|| self.nodes.cmp(&other.nodes))
    }

    /// Contiguous runs of nodes.
    pub fn parts(&self) -> Vec<(NodeIdx, NodeIdx)> {
        let mut parts = Vec::new();
        let mut start = self.nodes[0];
        let mut prev = start;
        for &n in &self.nodes[1..] {
            if n != prev + 1 {
                parts.push((start, prev));
                start = n;
            }
            prev = n;
        }
        parts.push((start, prev));
        parts
    }

    /// Shrink the mention to its head node, keeping a numeric head field in sync.
    pub fn reduce_to_head(&mut self) {
        if self.nodes.len() == 1 {
            return;
        }
        self.nodes = vec![self.head];
        if head_index_field(&self.fields).is_some() {
            self.fields[1] = "1".to_string();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entity {
    pub eid: String,
    /// Sorted by (first node, last node).
    pub mentions: Vec<Mention>,
}

impl Entity {
    pub fn is_singleton(&self) -> bool {
        self.mentions.len() == 1
    }
}

/// Orders eids with embedded numbers numerically (`e4` < `e10`).
pub fn eid_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> impl Iterator<Item = (bool, &str)> {
        let mut rest = s;
        std::iter::from_fn(move || {
            let first = rest.chars().next()?;
            let digit = first.is_ascii_digit();
            let end = rest
                .find(|c: char| c.is_ascii_digit() != digit)
                .unwrap_or(rest.len());
            let (chunk, tail) = rest.split_at(end);
            rest = tail;
            Some((digit, chunk))
        })
    }
    let mut ca = chunks(a);
    let mut cb = chunks(b);
    loop {
        match (ca.next(), cb.next()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((true, x)), Some((true, y))) => {
                let xt = x.trim_start_matches('0');
                let yt = y.trim_start_matches('0');
                let o = xt.len().cmp(&yt.len()).then_with(|| xt.cmp(yt));
                if o != Ordering::Equal {
                    return o;
                }
            }
            (Some((_, x)), Some((_, y))) => {
                let o = x.cmp(y);
                if o != Ordering::Equal {
                    return o;
                }
            }
        }
    }
}

/// Position of a mention inside a [`CorefDoc`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MentionRef {
    pub entity: usize,
    pub mention: usize,
}

/// Coreference layer of one document.
#[derive(Debug, Clone)]
pub struct CorefDoc<'d> {
    doc: &'d Document,
    pub(crate) nodes: Vec<Node>,
    pub(crate) entities: Vec<Entity>,
}

impl PartialEq for CorefDoc<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.entities == other.entities
    }
}

/// Global node order: sentences in sequence; within a sentence word `n`,
/// then `n.1`, `n.2`, …; `0.k` before word 1. Multiword ranges are skipped.
pub fn word_order(doc: &Document) -> Vec<(u32, u32)> {
    let mut order = Vec::new();
    for (si, sent) in doc.sentences.iter().enumerate() {
        let mut toks: Vec<(u32, u32)> = sent
            .tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.id().is_range())
            .map(|(ti, _)| (si as u32, ti as u32))
            .collect();
        toks.sort_by_key(|&(_, ti)| sent.tokens[ti as usize].id().order_key());
        order.extend(toks);
    }
    order
}

struct PendingParts {
    eid: String,
    count: u16,
    next: u16,
    nodes: Vec<NodeIdx>,
    fields: Vec<String>,
}

impl<'d> CorefDoc<'d> {
    /// Reconstruct mentions and entities from the `Entity` brackets.
    pub fn build(doc: &'d Document) -> Result<CorefDoc<'d>, CorefError> {
        let order = word_order(doc);
        let mut nodes: Vec<Node> = Vec::with_capacity(order.len());

        // Per-sentence id lookup; sentences are contiguous in `order`.
        let mut sent_start = 0usize;
        while sent_start < order.len() {
            let si = order[sent_start].0;
            let mut sent_end = sent_start;
            while sent_end < order.len() && order[sent_end].0 == si {
                sent_end += 1;
            }
            let sent = &doc.sentences[si as usize];
            let mut words: Vec<Option<NodeIdx>> = Vec::new();
            let mut empties: Vec<((u32, u32), NodeIdx)> = Vec::new();
            for (k, &(_, ti)) in order[sent_start..sent_end].iter().enumerate() {
                let idx = (sent_start + k) as NodeIdx;
                match sent.tokens[ti as usize].id() {
                    TokenId::Word(n) => {
                        let n = n as usize;
                        if words.len() <= n {
                            words.resize(n + 1, None);
                        }
                        words[n] = Some(idx);
                    }
                    TokenId::Empty(n, e) => empties.push(((n, e), idx)),
                    TokenId::Range(..) => unreachable!(),
                }
            }
            let resolve = |r: HeadRef| -> Option<NodeIdx> {
                match r {
                    HeadRef::Root => None,
                    HeadRef::Node(TokenId::Word(n)) => words.get(n as usize).copied().flatten(),
                    HeadRef::Node(TokenId::Empty(n, e)) => empties
                        .iter()
                        .find(|(k, _)| *k == (n, e))
                        .map(|(_, i)| *i),
                    HeadRef::Node(TokenId::Range(..)) => None,
                }
            };
            for &(_, ti) in &order[sent_start..sent_end] {
                let tok = &sent.tokens[ti as usize];
                let is_empty = tok.id().is_empty_node();
                let parent = if is_empty {
                    None
                } else {
                    tok.head().and_then(resolve)
                };
                let enhanced_parents = tok
                    .deps()
                    .into_iter()
                    .filter_map(|(h, _)| resolve(h))
                    .collect();
                nodes.push(Node {
                    sent: si,
                    tok: ti,
                    id: tok.id(),
                    is_empty,
                    parent,
                    enhanced_parents,
                    depth: None,
                });
            }
            sent_start = sent_end;
        }
        compute_depths(&mut nodes);

        let mut layer = CorefDoc {
            doc,
            nodes,
            entities: Vec::new(),
        };
        layer.read_brackets()?;
        Ok(layer)
    }

    fn read_brackets(&mut self) -> Result<(), CorefError> {
        let doc = self.doc;
        let doc_id = || doc.display_id().to_string();
        let mut entity_index: HashMap<String, usize> = HashMap::new();
        let mut entities: Vec<Entity> = Vec::new();
        let mut open: HashMap<(String, Option<PartIndex>), (NodeIdx, Vec<String>)> =
            HashMap::new();
        let mut pending: Vec<PendingParts> = Vec::new();

        let mut finish = |eid: &str, nodes: Vec<NodeIdx>, fields: Vec<String>| {
            let ei = *entity_index.entry(eid.to_string()).or_insert_with(|| {
                entities.push(Entity {
                    eid: eid.to_string(),
                    mentions: Vec::new(),
                });
                entities.len() - 1
            });
            entities[ei].mentions.push(Mention {
                nodes,
                head: 0,
                head_rule: HeadRule::HighestNode,
                fields,
            });
        };

        for (ni, node) in self.nodes.iter().enumerate() {
            let ni = ni as NodeIdx;
            let tok = &doc.sentences[node.sent as usize].tokens[node.tok as usize];
            for b in tok.entity_brackets() {
                let span = match b.kind {
                    BracketKind::Open => {
                        open.insert((b.eid.clone(), b.part), (ni, b.extra_fields.clone()));
                        continue;
                    }
                    BracketKind::OpenClose => Some((ni, b.extra_fields.clone())),
                    BracketKind::Close => open.remove(&(b.eid.clone(), b.part)),
                };
                let Some((start, fields)) = span else {
                    return Err(CorefError::Unbalanced {
                        doc: doc_id(),
                        eid: b.eid.clone(),
                    });
                };
                let nodes: Vec<NodeIdx> = (start..=ni).collect();
                match b.part {
                    None => finish(&b.eid, nodes, fields),
                    Some(p) if p.index == 1 => pending.push(PendingParts {
                        eid: b.eid.clone(),
                        count: p.count,
                        next: 2,
                        nodes,
                        fields,
                    }),
                    Some(p) => {
                        let pos = pending
                            .iter()
                            .position(|q| q.eid == b.eid && q.count == p.count && q.next == p.index)
                            .ok_or_else(|| CorefError::PartOrder {
                                doc: doc_id(),
                                eid: b.eid.clone(),
                                part: p.to_string(),
                                sent: doc.sentences[node.sent as usize]
                                    .sent_id()
                                    .map(str::to_string)
                                    .unwrap_or_else(|| format!("#{}", node.sent + 1)),
                                node: node.id.to_string(),
                            })?;
                        let q = &mut pending[pos];
                        q.nodes.extend(nodes);
                        q.next += 1;
                        if q.next > q.count {
                            let mut q = pending.remove(pos);
                            q.nodes.sort_unstable();
                            q.nodes.dedup();
                            finish(&q.eid, q.nodes, q.fields);
                        }
                    }
                }
            }
        }
        if let Some(((eid, _), _)) = open.into_iter().next() {
            return Err(CorefError::Unbalanced { doc: doc_id(), eid });
        }
        if let Some(q) = pending.first() {
            return Err(CorefError::PartIncomplete {
                doc: doc_id(),
                eid: q.eid.clone(),
            });
        }

        for e in &mut entities {
            for m in &mut e.mentions {
                let choice = heads::find_head(&self.nodes, &m.nodes, &m.fields);
                m.head = choice.head;
                m.head_rule = choice.rule_used;
            }
        }
        self.entities = entities;
        self.normalize();
        Ok(())
    }

    /// A layer over the same nodes with no mentions.
    pub fn without_mentions(&self) -> CorefDoc<'d> {
        CorefDoc {
            doc: self.doc,
            nodes: self.nodes.clone(),
            entities: Vec::new(),
        }
    }

    pub fn document(&self) -> &'d Document {
        self.doc
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn token(&self, n: NodeIdx) -> &'d Token {
        let node = &self.nodes[n as usize];
        &self.doc.sentences[node.sent as usize].tokens[node.tok as usize]
    }

    pub fn mention(&self, r: MentionRef) -> &Mention {
        &self.entities[r.entity].mentions[r.mention]
    }

    pub fn mention_count(&self) -> usize {
        self.entities.iter().map(|e| e.mentions.len()).sum()
    }

    /// True if every node of the mention is an empty node.
    pub fn is_zero(&self, m: &Mention) -> bool {
        m.nodes.iter().all(|&n| self.nodes[n as usize].is_empty)
    }

    pub fn contains_empty(&self, m: &Mention) -> bool {
        m.nodes.iter().any(|&n| self.nodes[n as usize].is_empty)
    }

    /// Number of surface (non-empty) nodes in the mention.
    pub fn surface_len(&self, m: &Mention) -> usize {
        m.nodes
            .iter()
            .filter(|&&n| !self.nodes[n as usize].is_empty)
            .count()
    }

    /// All mentions sorted by (first node, last node, node list), ties by entity order.
    pub fn sorted_mentions(&self) -> Vec<MentionRef> {
        let mut refs: Vec<MentionRef> = self
            .entities
            .iter()
            .enumerate()
            .flat_map(|(ei, e)| {
                (0..e.mentions.len()).map(move |mi| MentionRef {
                    entity: ei,
                    mention: mi,
                })
            })
            .collect();
        refs.sort_by(|a, b| {
            self.mention(*a)
                .order_cmp(self.mention(*b))
                .then_with(|| (a.entity, a.mention).cmp(&(b.entity, b.mention)))
        });
        refs
    }

    /// Sort mentions within entities and entities by their first mention;
    /// drop entities left without mentions.
    pub fn normalize(&mut self) {
        self.entities.retain(|e| !e.mentions.is_empty());
        for e in &mut self.entities {
            e.mentions.sort_by(Mention::order_cmp);
        }
        self.entities.sort_by(|a, b| {
            a.mentions[0]
                .order_cmp(&b.mentions[0])
                .then_with(|| eid_cmp(&a.eid, &b.eid))
        });
    }

    pub fn retain_entities(&mut self, f: impl FnMut(&Entity) -> bool) {
        self.entities.retain(f);
    }

    pub fn push_entity(&mut self, entity: Entity) {
        self.entities.push(entity);
        self.normalize();
    }

    pub fn entities_mut(&mut self) -> &mut Vec<Entity> {
        &mut self.entities
    }

    /// A fresh eid of the form `e<N>` not used in this document.
    pub fn fresh_eid(&self) -> String {
        let max = self
            .entities
            .iter()
            .filter_map(|e| e.eid.strip_prefix('e')?.parse::<u64>().ok())
            .max()
            .unwrap_or(0);
        format!("e{}", max + 1)
    }

    /// Bracket sequences per node implied by the current layer.
    pub fn brackets(&self) -> Result<Vec<Vec<EntityBracket>>, CorefError> {
        struct Part<'a> {
            eid: &'a str,
            part: Option<PartIndex>,
            start: NodeIdx,
            end: NodeIdx,
            fields: Vec<String>,
        }
        let doc_id = || self.doc.display_id().to_string();
        let mut parts: Vec<Part> = Vec::new();
        for e in &self.entities {
            for m in &e.mentions {
                if m.nodes.is_empty() {
                    return Err(CorefError::Unserializable {
                        doc: doc_id(),
                        reason: format!("a mention of `{}` with no nodes", e.eid),
                    });
                }
                let runs = m.parts();
                let count = runs.len() as u16;
                for (i, (s, t)) in runs.into_iter().enumerate() {
                    parts.push(Part {
                        eid: &e.eid,
                        part: (count > 1).then_some(PartIndex {
                            index: i as u16 + 1,
                            count,
                        }),
                        start: s,
                        end: t,
                        fields: if i == 0 { m.fields.clone() } else { Vec::new() },
                    });
                }
            }
        }

        // Two multi-node parts with the same (eid, part) may not overlap.
        let mut by_key: HashMap<(&str, Option<PartIndex>), Vec<(NodeIdx, NodeIdx)>> =
            HashMap::new();
        for p in parts.iter().filter(|p| p.start != p.end) {
            by_key.entry((p.eid, p.part)).or_default().push((p.start, p.end));
        }
        for ((eid, _), mut spans) in by_key {
            spans.sort_unstable();
            if spans.windows(2).any(|w| w[1].0 <= w[0].1) {
                return Err(CorefError::Unserializable {
                    doc: doc_id(),
                    reason: format!("overlapping multi-node mentions of `{eid}`"),
                });
            }
        }

        let mut closes: Vec<Vec<&Part>> = vec![Vec::new(); self.nodes.len()];
        let mut singles: Vec<Vec<&Part>> = vec![Vec::new(); self.nodes.len()];
        let mut opens: Vec<Vec<&Part>> = vec![Vec::new(); self.nodes.len()];
        for p in &parts {
            if p.start == p.end {
                singles[p.start as usize].push(p);
            } else {
                opens[p.start as usize].push(p);
                closes[p.end as usize].push(p);
            }
        }
        let mut out = Vec::with_capacity(self.nodes.len());
        for n in 0..self.nodes.len() {
            let mut v = Vec::new();
            // Inner mentions (started later) close first; outer ones open first.
            closes[n].sort_by(|a, b| b.start.cmp(&a.start).then_with(|| eid_cmp(a.eid, b.eid)));
            opens[n].sort_by(|a, b| b.end.cmp(&a.end).then_with(|| eid_cmp(a.eid, b.eid)));
            for p in &closes[n] {
                v.push(EntityBracket::close(p.eid, p.part));
            }
            for p in &singles[n] {
                v.push(EntityBracket::single(p.eid, p.part, p.fields.clone()));
            }
            for p in &opens[n] {
                v.push(EntityBracket::open(p.eid, p.part, p.fields.clone()));
            }
            out.push(v);
        }
        Ok(out)
    }

    /// A copy of the underlying document carrying this layer's brackets.
    pub fn to_document(&self) -> Result<Document, CorefError> {
        let brackets = self.brackets()?;
        let mut doc = self.doc.clone();
        for (node, b) in self.nodes.iter().zip(brackets) {
            doc.sentences[node.sent as usize].tokens[node.tok as usize].set_entity_brackets(b);
        }
        Ok(doc)
    }
}

fn compute_depths(nodes: &mut [Node]) {
    const VISITING: u32 = u32::MAX;
    const CYCLE: u32 = u32::MAX - 1;
    let mut state: Vec<Option<u32>> = vec![None; nodes.len()];
    let mut stack = Vec::new();
    for start in 0..nodes.len() {
        if state[start].is_some() {
            continue;
        }
        let mut cur = start;
        let base = loop {
            match state[cur] {
                Some(VISITING) | Some(CYCLE) => break CYCLE,
                Some(d) => break d,
                None => {}
            }
            state[cur] = Some(VISITING);
            stack.push(cur);
            match nodes[cur].tree_parent() {
                Some(p) => cur = p as usize,
                None => {
                    stack.pop();
                    state[cur] = Some(0);
                    break 0;
                }
            }
        };
        let mut d = base;
        while let Some(n) = stack.pop() {
            if d != CYCLE {
                d += 1;
            }
            state[n] = Some(d);
        }
    }
    for (node, s) in nodes.iter_mut().zip(state) {
        node.depth = match s {
            Some(CYCLE) | Some(VISITING) | None => None,
            Some(d) => Some(d),
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conllu::parse_str;

    fn line(id: &str, head: &str, misc: &str) -> String {
        format!("{id}\tw{id}\tw\tNOUN\t_\t_\t{head}\tdep\t_\t{misc}\n")
    }

    fn layer_spans(layer: &CorefDoc) -> Vec<(String, Vec<Vec<NodeIdx>>)> {
        layer
            .entities()
            .iter()
            .map(|e| (e.eid.clone(), e.mentions.iter().map(|m| m.nodes.clone()).collect()))
            .collect()
    }

    #[test]
    fn contiguous_span() {
        let text = [
            line("1", "0", "_"),
            line("2", "1", "Entity=(e1"),
            line("3", "2", "_"),
            line("4", "2", "Entity=e1)"),
        ]
        .concat()
            + "\n";
        let c = parse_str(&text).unwrap();
        let l = CorefDoc::build(&c.documents[0]).unwrap();
        assert_eq!(layer_spans(&l), vec![("e1".into(), vec![vec![1, 2, 3]])]);
        assert!(!l.entities()[0].mentions[0].is_discontinuous());
    }

    #[test]
    fn parts_merge_into_one_mention() {
        let text = [
            line("1", "0", "Entity=(e7[1/2]-org-1-"),
            line("2", "1", "Entity=e7[1/2])"),
            line("3", "1", "_"),
            line("4", "1", "_"),
            line("5", "1", "Entity=(e7[2/2])"),
        ]
        .concat()
            + "\n";
        let c = parse_str(&text).unwrap();
        let l = CorefDoc::build(&c.documents[0]).unwrap();
        let m = &l.entities()[0].mentions[0];
        assert_eq!(m.nodes, vec![0, 1, 4]);
        assert!(m.is_discontinuous());
        assert_eq!(m.fields, vec!["org", "1", ""]);
        assert_eq!(m.head, 0);
        assert_eq!(m.head_rule, HeadRule::Provided);
    }

    #[test]
    fn part_out_of_order_is_error() {
        let text = [
            line("1", "0", "Entity=(e7[2/2])"),
            line("2", "1", "Entity=(e7[1/2])"),
        ]
        .concat()
            + "\n";
        let c = parse_str(&text).unwrap();
        assert!(matches!(
            CorefDoc::build(&c.documents[0]),
            Err(CorefError::PartOrder { .. })
        ));
    }

    #[test]
    fn nested_entities() {
        let text = [
            line("1", "0", "Entity=(e1"),
            line("2", "1", "Entity=(e2"),
            line("3", "2", "Entity=e2)e1)"),
        ]
        .concat()
            + "\n";
        let c = parse_str(&text).unwrap();
        let l = CorefDoc::build(&c.documents[0]).unwrap();
        assert_eq!(
            layer_spans(&l),
            vec![("e1".into(), vec![vec![0, 1, 2]]), ("e2".into(), vec![vec![1, 2]])]
        );
    }

    #[test]
    fn word_order_places_empty_nodes() {
        let text = "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n2\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n2.1\tz\tz\tX\t_\t_\t_\t_\t2:dep\t_\n3\tc\tc\tX\t_\t_\t1\tdep\t_\t_\n\n\
0.1\tz\tz\tX\t_\t_\t_\t_\t1:dep\t_\n1\td\td\tX\t_\t_\t0\troot\t_\t_\n\n";
        let c = parse_str(text).unwrap();
        let ids: Vec<String> = word_order(&c.documents[0])
            .into_iter()
            .map(|(s, t)| c.documents[0].sentences[s as usize].tokens[t as usize].id().to_string())
            .collect();
        assert_eq!(ids, ["1", "2", "2.1", "3", "0.1", "1"]);
        let l = CorefDoc::build(&c.documents[0]).unwrap();
        assert_eq!(l.nodes().len(), 6);
        assert_eq!(l.nodes()[2].parent, None);
        assert_eq!(l.nodes()[2].tree_parent(), Some(1));
        assert_eq!(l.nodes()[2].depth, Some(2));
        assert_eq!(l.nodes()[4].tree_parent(), Some(5));
    }

    #[test]
    fn multiword_ranges_are_not_nodes() {
        let text = "1-2\tdel\t_\t_\t_\t_\t_\t_\t_\t_\n1\tde\tde\tADP\t_\t_\t2\tcase\t_\t_\n2\tel\tel\tDET\t_\t_\t0\troot\t_\tEntity=(e1)\n\n";
        let c = parse_str(text).unwrap();
        let l = CorefDoc::build(&c.documents[0]).unwrap();
        assert_eq!(l.nodes().len(), 2);
        assert_eq!(layer_spans(&l), vec![("e1".into(), vec![vec![1]])]);
    }

    #[test]
    fn cycle_depth_is_none() {
        let text = "1\ta\ta\tX\t_\t_\t2\tdep\t_\t_\n2\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n3\tc\tc\tX\t_\t_\t0\troot\t_\t_\n\n";
        let c = parse_str(text).unwrap();
        let l = CorefDoc::build(&c.documents[0]).unwrap();
        assert_eq!(l.nodes()[0].depth, None);
        assert_eq!(l.nodes()[1].depth, None);
        assert_eq!(l.nodes()[2].depth, Some(0));
    }

    #[test]
    fn eid_ordering_is_natural() {
        assert_eq!(eid_cmp("e4", "e10"), Ordering::Less);
        assert_eq!(eid_cmp("e10", "e10"), Ordering::Equal);
        assert_eq!(eid_cmp("c2", "e1"), Ordering::Less);
        assert_eq!(eid_cmp("e1", "e1a"), Ordering::Less);
    }

    #[test]
    fn brackets_rebuild_same_layer() {
        let text = [
            line("1", "0", "Entity=(e1-person-2-"),
            line("2", "1", "Entity=(e2)"),
            line("3", "1", "Entity=e1)(e3[1/2]"),
            line("4", "1", "Entity=e3[1/2])"),
            line("5", "1", "_"),
            line("6", "1", "Entity=(e3[2/2])(e1)"),
        ]
        .concat()
            + "\n";
        let c = parse_str(&text).unwrap();
        let l = CorefDoc::build(&c.documents[0]).unwrap();
        let doc2 = l.to_document().unwrap();
        let l2 = CorefDoc::build(&doc2).unwrap();
        assert_eq!(l, l2);
    }

    #[test]
    fn overlapping_same_eid_is_unserializable() {
        let text = [line("1", "0", "Entity=(e1"), line("2", "1", "_"), line("3", "1", "Entity=e1)(e2)")].concat() + "\n";
        let c = parse_str(&text).unwrap();
        let mut l = CorefDoc::build(&c.documents[0]).unwrap();
        let mut m = l.entities()[0].mentions[0].clone();
        m.nodes = vec![1, 2];
        l.entities_mut()[0].mentions.push(m);
        assert!(matches!(l.brackets(), Err(CorefError::Unserializable { .. })));
    }
}
