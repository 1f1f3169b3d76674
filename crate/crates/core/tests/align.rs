use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use corefud::align::{align_mentions, matches, MatchPolicy};
use corefud::conllu::parse_str;
use corefud::metrics::mention_lists;
use corefud::model::{CorefDoc, Mention};
use corefud_testkit::{oracle, random_pair, render, EntityConfig, SkeletonConfig};

fn fixture(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    fs::read_to_string(p).unwrap()
}

#[test]
fn partial_match_table() {
    let corpus = parse_str(&fixture("partial_match/mentions.conllu")).unwrap();
    let layer = CorefDoc::build(&corpus.documents[0]).unwrap();
    let by_eid: BTreeMap<&str, &Mention> = layer
        .entities()
        .iter()
        .map(|e| (e.eid.as_str(), &e.mentions[0]))
        .collect();
    let table = fixture("partial_match/table.tsv");
    let mut rows = 0;
    for line in table.lines().filter(|l| !l.starts_with('#')) {
        let cols: Vec<&str> = line.split('\t').collect();
        let (k, r) = (by_eid[cols[0]], by_eid[cols[1]]);
        assert_eq!(matches(k, r, MatchPolicy::Partial), cols[2] == "true", "{line}");
        assert_eq!(matches(k, r, MatchPolicy::Exact), cols[3] == "true", "{line}");
        rows += 1;
    }
    assert_eq!(rows, 13);
}

/// Six words in a chain: word 2 heads 1 and 3, word 5 heads 4 and 6.
const CHAIN: &str = "# newdoc id = d1\n# sent_id = s1\n\
1\ta\ta\tDET\t_\t_\t2\tdet\t_\t_\n\
2\tb\tb\tNOUN\t_\t_\t0\troot\t_\t_\n\
3\tc\tc\tADJ\t_\t_\t2\tamod\t_\t_\n\
4\td\td\tDET\t_\t_\t5\tdet\t_\t_\n\
5\te\te\tNOUN\t_\t_\t2\tconj\t_\t_\n\
6\tf\tf\tADJ\t_\t_\t5\tamod\t_\t_\n\n";

fn pair_on_chain(key: Vec<Vec<Vec<u32>>>, resp: Vec<Vec<Vec<u32>>>, policy: MatchPolicy) -> Vec<(Vec<u32>, Vec<u32>)> {
    let kt = render(CHAIN, &key);
    let rt = render(CHAIN, &resp);
    let (kc, rc) = (parse_str(&kt).unwrap(), parse_str(&rt).unwrap());
    let kl = CorefDoc::build(&kc.documents[0]).unwrap();
    let rl = CorefDoc::build(&rc.documents[0]).unwrap();
    let (_, km) = mention_lists(&kl);
    let (_, rm) = mention_lists(&rl);
    align_mentions(&km, &rm, policy)
        .pairs
        .iter()
        .map(|&(k, r)| (km[k].nodes.clone(), rm[r].nodes.clone()))
        .collect()
}

#[test]
fn identical_lists_align_fully_under_exact() {
    let ents = vec![vec![vec![0, 1, 2], vec![4]], vec![vec![3, 4, 5]]];
    assert_eq!(pair_on_chain(ents.clone(), ents, MatchPolicy::Exact).len(), 3);
}

#[test]
fn larger_overlap_wins() {
    let key = vec![vec![vec![0, 1, 2]]];
    let resp = vec![vec![vec![1]], vec![vec![0, 1, 2]]];
    assert_eq!(pair_on_chain(key, resp, MatchPolicy::Partial), vec![(vec![0, 1, 2], vec![0, 1, 2])]);
}

#[test]
fn nested_keys_prefer_identical_span() {
    let key = vec![vec![vec![0, 1, 2]], vec![vec![1]]];
    let resp = vec![vec![vec![1]]];
    assert_eq!(pair_on_chain(key, resp, MatchPolicy::Partial), vec![(vec![1], vec![1])]);
}

#[test]
fn tie_prefers_earlier_key() {
    // Two key mentions with head 2 could each take the response {2}.
    let key = vec![vec![vec![0, 1]], vec![vec![1, 2]]];
    let resp = vec![vec![vec![1]]];
    assert_eq!(pair_on_chain(key, resp, MatchPolicy::Partial), vec![(vec![0, 1], vec![1])]);
}

fn layers(kt: &str, rt: &str) -> (corefud::conllu::Corpus, corefud::conllu::Corpus) {
    (parse_str(kt).unwrap(), parse_str(rt).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn alignment_matches_exhaustive_oracle(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (kt, rt) = random_pair(&mut rng, &SkeletonConfig::default(), &EntityConfig::default());
        let (kc, rc) = layers(&kt, &rt);
        let kl = CorefDoc::build(&kc.documents[0]).unwrap();
        let rl = CorefDoc::build(&rc.documents[0]).unwrap();
        let (_, km) = mention_lists(&kl);
        let (_, rm) = mention_lists(&rl);
        let ko = oracle::mentions_of(&kl);
        let ro = oracle::mentions_of(&rl);

        let partial = align_mentions(&km, &rm, MatchPolicy::Partial);
        let exact = align_mentions(&km, &rm, MatchPolicy::Exact);
        prop_assert_eq!(&partial.pairs, &oracle::align(&ko, &ro, true));
        prop_assert_eq!(&exact.pairs, &oracle::align(&ko, &ro, false));

        prop_assert!(partial.len() <= km.len().min(rm.len()));
        prop_assert!(exact.pairs.iter().all(|p| partial.pairs.contains(p)));
        let mut ks: Vec<usize> = partial.pairs.iter().map(|p| p.0).collect();
        let mut rs: Vec<usize> = partial.pairs.iter().map(|p| p.1).collect();
        ks.dedup();
        rs.sort_unstable();
        rs.dedup();
        prop_assert_eq!(ks.len(), partial.len());
        prop_assert_eq!(rs.len(), partial.len());
        for &(k, r) in &partial.pairs {
            prop_assert!(matches(km[k], rm[r], MatchPolicy::Partial));
        }
        for &(k, r) in &exact.pairs {
            prop_assert_eq!(&km[k].nodes, &rm[r].nodes);
        }
    }

    #[test]
    fn alignment_ignores_entity_order(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (kt, rt) = random_pair(&mut rng, &SkeletonConfig::default(), &EntityConfig::default());
        let (kc, rc) = layers(&kt, &rt);
        let kl = CorefDoc::build(&kc.documents[0]).unwrap();
        let mut rl = CorefDoc::build(&rc.documents[0]).unwrap();
        let (_, km) = mention_lists(&kl);
        let spans = |l: &CorefDoc| -> Vec<(Vec<u32>, Vec<u32>)> {
            let (_, rm) = mention_lists(l);
            align_mentions(&km, &rm, MatchPolicy::Partial)
                .pairs
                .iter()
                .map(|&(k, r)| (km[k].nodes.clone(), rm[r].nodes.clone()))
                .collect::<Vec<_>>()
        };
        let before = spans(&rl);
        rl.entities_mut().reverse();
        for (i, e) in rl.entities_mut().iter_mut().enumerate() {
            e.eid = format!("z{i}");
        }
        rl.normalize();
        let after = spans(&rl);
        prop_assert_eq!(before, after);
    }
}
