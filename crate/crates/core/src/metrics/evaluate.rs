use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::align::{align_mentions, MatchPolicy};
use crate::conllu::{Corpus, Document};
use crate::error::Error;
use crate::metrics::{
    b_cubed, blanc_counts, ceaf_e, lea, mention_lists, mor, muc, relabel, zero_score, DocCounts,
    Metric, Prf,
};
use crate::model::CorefDoc;
use crate::transforms;

#[derive(Debug, Clone, PartialEq)]
pub struct EvalOptions {
    pub policy: MatchPolicy,
    pub keep_singletons: bool,
    pub metrics: BTreeSet<Metric>,
    /// Keep only entities with a mention whose head UPOS set contains this tag.
    pub upos_filter: Option<String>,
    pub per_doc: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            policy: MatchPolicy::Partial,
            keep_singletons: false,
            metrics: Metric::ALL.into_iter().collect(),
            upos_filter: None,
            per_doc: false,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DatasetInput<'a> {
    pub name: &'a str,
    pub key: &'a Corpus,
    pub response: &'a Corpus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocScore {
    pub id: String,
    pub counts: DocCounts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetScore {
    pub name: String,
    pub counts: DocCounts,
    pub scores: BTreeMap<Metric, Prf>,
    /// Filled only with [`EvalOptions::per_doc`].
    pub documents: Vec<DocScore>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub policy: MatchPolicy,
    pub keep_singletons: bool,
    pub datasets: Vec<DatasetScore>,
    /// Unweighted mean over datasets.
    pub macro_avg: BTreeMap<Metric, Prf>,
}

/// Apply the scoring-time rewrites: UPOS filter, head reduction under
/// [`MatchPolicy::Head`], singleton removal.
pub fn prepare_layer(layer: &mut CorefDoc, opts: &EvalOptions) {
    if let Some(tag) = &opts.upos_filter {
        transforms::upos_filter(layer, tag);
    }
    if opts.policy == MatchPolicy::Head {
        transforms::conservative_head_reduce(layer);
    }
    if !opts.keep_singletons {
        transforms::remove_singletons(layer);
    }
}

/// Counts for one pair of already prepared layers.
pub fn score_layers(
    key: &CorefDoc,
    resp: &CorefDoc,
    policy: MatchPolicy,
    metrics: &BTreeSet<Metric>,
) -> DocCounts {
    let want = |m: &[Metric]| m.iter().any(|m| metrics.contains(m));
    let mut out = DocCounts::default();
    let (_, key_ms) = mention_lists(key);
    let (_, resp_ms) = mention_lists(resp);

    if want(&[Metric::Muc, Metric::Bcub, Metric::Ceafe, Metric::Conll, Metric::Blanc, Metric::Lea]) {
        let alignment = align_mentions(&key_ms, &resp_ms, policy);
        let r = relabel(key, resp, &alignment);
        if want(&[Metric::Muc, Metric::Conll]) {
            out.muc = muc(&r.key, &r.resp);
        }
        if want(&[Metric::Bcub, Metric::Conll]) {
            out.bcub = b_cubed(&r.key, &r.resp);
        }
        if want(&[Metric::Ceafe, Metric::Conll]) {
            out.ceafe = ceaf_e(&r.key, &r.resp);
        }
        if want(&[Metric::Blanc]) {
            out.blanc = blanc_counts(&r.key, &r.resp);
        }
        if want(&[Metric::Lea]) {
            out.lea = lea(&r.key, &r.resp);
        }
    }
    if want(&[Metric::Mor]) {
        out.mor = mor(&key_ms, &resp_ms);
    }
    if want(&[Metric::Zero]) {
        out.zero = zero_score(key, resp);
    }
    out
}

fn score_pair(key: &Document, resp: Option<&Document>, opts: &EvalOptions) -> Result<DocCounts, Error> {
    let mut k = CorefDoc::build(key)?;
    let mut r = match resp {
        Some(resp) => {
            key.same_node_universe(resp).map_err(Error::Pairing)?;
            CorefDoc::build(resp)?
        }
        None => k.without_mentions(),
    };
    prepare_layer(&mut k, opts);
    prepare_layer(&mut r, opts);
    Ok(score_layers(&k, &r, opts.policy, &opts.metrics))
}

fn doc_keys(corpus: &Corpus) -> Vec<String> {
    corpus
        .documents
        .iter()
        .enumerate()
        .map(|(i, d)| d.id.clone().unwrap_or_else(|| format!("#{}", i + 1)))
        .collect()
}

/// Score datasets of paired key/response files. Documents pair by id;
/// counts are summed within a dataset and averaged across datasets.
pub fn evaluate(datasets: &[DatasetInput], opts: &EvalOptions) -> Result<ScoreReport, Error> {
    struct Job<'a> {
        dataset: usize,
        id: String,
        key: &'a Document,
        resp: Option<&'a Document>,
    }
    let mut jobs: Vec<Job> = Vec::new();
    for (di, ds) in datasets.iter().enumerate() {
        let key_ids = doc_keys(ds.key);
        let resp_ids = doc_keys(ds.response);
        let mut resp_by_id: HashMap<&str, &Document> = HashMap::new();
        for (id, doc) in resp_ids.iter().zip(&ds.response.documents) {
            if resp_by_id.insert(id, doc).is_some() {
                return Err(Error::Pairing(format!(
                    "{}: duplicate response document `{id}`",
                    ds.name
                )));
            }
        }
        let key_set: BTreeSet<&str> = key_ids.iter().map(String::as_str).collect();
        if let Some(extra) = resp_ids.iter().find(|id| !key_set.contains(id.as_str())) {
            return Err(Error::Pairing(format!(
                "{}: response document `{extra}` has no key document",
                ds.name
            )));
        }
        for (id, doc) in key_ids.into_iter().zip(&ds.key.documents) {
            let resp = resp_by_id.get(id.as_str()).copied();
            if resp.is_none() {
                log::warn!("{}: document `{id}` missing from the response; scored as empty", ds.name);
            }
            jobs.push(Job {
                dataset: di,
                id,
                key: doc,
                resp,
            });
        }
    }

    let results: Vec<Result<DocCounts, Error>> = jobs
        .par_iter()
        .map(|j| score_pair(j.key, j.resp, opts))
        .collect();

    let mut out: Vec<DatasetScore> = datasets
        .iter()
        .map(|d| DatasetScore {
            name: d.name.to_string(),
            counts: DocCounts::default(),
            scores: BTreeMap::new(),
            documents: Vec::new(),
        })
        .collect();
    for (job, res) in jobs.into_iter().zip(results) {
        let counts = res?;
        let ds = &mut out[job.dataset];
        ds.counts += counts;
        if opts.per_doc {
            ds.documents.push(DocScore { id: job.id, counts });
        }
    }
    for ds in &mut out {
        ds.scores = opts.metrics.iter().map(|&m| (m, ds.counts.prf(m))).collect();
    }
    let macro_avg = opts
        .metrics
        .iter()
        .map(|&m| {
            let per: Vec<Prf> = out.iter().map(|d| d.scores[&m]).collect();
            (m, Prf::mean(&per))
        })
        .collect();
    Ok(ScoreReport {
        policy: opts.policy,
        keep_singletons: opts.keep_singletons,
        datasets: out,
        macro_avg,
    })
}
