use std::fs;
use std::path::Path;

use corefud::baselines::{propn_lemma_merge, pronoun_gender_link, run_baseline, Rule};
use corefud::conllu::{parse_str, write_string, Corpus};
use corefud::model::CorefDoc;

fn fixture(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/baselines").join(name);
    fs::read_to_string(p).unwrap()
}

/// Parse `input`, run `f` on its single document and write the result back.
fn apply(input: &str, f: impl Fn(&mut CorefDoc) -> bool) -> String {
    let mut corpus = parse_str(&fixture(input)).unwrap();
    let mut layer = CorefDoc::build(&corpus.documents[0]).unwrap();
    assert!(f(&mut layer), "rule reported no change");
    corpus.documents[0] = layer.to_document().unwrap();
    write_string(&corpus)
}

fn assert_valid(text: &str) {
    let corpus: Corpus = parse_str(text).unwrap();
    for d in &corpus.documents {
        CorefDoc::build(d).unwrap();
    }
}

fn check(got: &str, gold: &str) {
    let want = fixture(gold);
    for (i, (g, w)) in got.lines().zip(want.lines()).enumerate() {
        assert_eq!(g, w, "{gold}:{}", i + 1);
    }
    assert_eq!(got, want);
    assert_valid(got);
}

#[test]
fn pronoun_gender_rule_output() {
    check(&apply("pronoun_gender.conllu", pronoun_gender_link), "pronoun_gender.gold.conllu");
}

#[test]
fn pronoun_gender_pipeline_output() {
    let got = apply("pronoun_gender.conllu", |l| run_baseline(l, &[Rule::PronounGender], false));
    check(&got, "pronoun_gender.pipeline.conllu");
}

#[test]
fn propn_lemma_rule_output() {
    check(&apply("propn_lemma.conllu", |l| propn_lemma_merge(l, true)), "propn_lemma.gold.conllu");
}

#[test]
fn propn_lemma_pipeline_output() {
    let got = apply("propn_lemma.conllu", |l| run_baseline(l, &[Rule::PropnLemma], true));
    check(&got, "propn_lemma.pipeline.conllu");
}

#[test]
fn propn_rule_disabled_leaves_links_alone() {
    let mut corpus = parse_str(&fixture("propn_lemma.conllu")).unwrap();
    let mut layer = CorefDoc::build(&corpus.documents[0]).unwrap();
    let before = layer.clone();
    assert!(!propn_lemma_merge(&mut layer, false));
    assert!(layer == before);
    corpus.documents[0] = layer.to_document().unwrap();
    assert_eq!(write_string(&corpus), fixture("propn_lemma.conllu"));
}

#[test]
fn rules_are_idempotent() {
    let once = apply("propn_lemma.conllu", |l| propn_lemma_merge(l, true));
    let mut corpus = parse_str(&once).unwrap();
    let mut layer = CorefDoc::build(&corpus.documents[0]).unwrap();
    assert!(!propn_lemma_merge(&mut layer, true));
    corpus.documents[0] = layer.to_document().unwrap();
    assert_eq!(write_string(&corpus), once);

    let once = apply("pronoun_gender.conllu", pronoun_gender_link);
    let corpus = parse_str(&once).unwrap();
    let mut layer = CorefDoc::build(&corpus.documents[0]).unwrap();
    assert!(!pronoun_gender_link(&mut layer));
}
