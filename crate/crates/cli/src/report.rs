//! Report rendering: aligned text, JSON (schema 1) and TSV.

use std::fmt::Write;

use serde_json::{json, Map, Value};

use corefud::metrics::{EvalOptions, Metric, Prf, ScoreReport};
use corefud::stats::{self, StatsCounts, UPOS_BUCKETS};

fn pct(x: f64) -> f64 {
    (x * 10000.0).round() / 100.0
}

fn variant(opts: &EvalOptions) -> String {
    format!(
        "{}, {}",
        opts.policy,
        if opts.keep_singletons { "with singletons" } else { "no singletons" }
    )
}

fn prf_json(p: &Prf) -> Value {
    json!({ "r": pct(p.recall), "p": pct(p.precision), "f1": pct(p.f1) })
}

fn scores_json<'a>(it: impl Iterator<Item = (&'a Metric, &'a Prf)>) -> Value {
    Value::Object(it.map(|(m, p)| (m.to_string(), prf_json(p))).collect())
}

pub fn text(reports: &[(String, ScoreReport)], opts: &EvalOptions) -> String {
    let mut out = String::new();
    let multi = reports.len() > 1;
    for (name, r) in reports {
        if multi {
            writeln!(out, "== {name} ==").unwrap();
        }
        if let Some(c) = r.macro_avg.get(&Metric::Conll) {
            writeln!(out, "CoNLL F1 ({}): {:.2}", variant(opts), pct(c.f1)).unwrap();
        }
        writeln!(out, "{:<24} {:<6} {:>7} {:>9} {:>7}", "dataset", "metric", "recall", "precision", "f1").unwrap();
        let mut row = |label: &str, m: &Metric, p: &Prf| {
            writeln!(
                out,
                "{:<24} {:<6} {:>7.2} {:>9.2} {:>7.2}",
                label,
                m.to_string(),
                pct(p.recall),
                pct(p.precision),
                pct(p.f1)
            )
            .unwrap();
        };
        for ds in &r.datasets {
            for doc in &ds.documents {
                let label = format!("{}/{}", ds.name, doc.id);
                for m in &opts.metrics {
                    row(&label, m, &doc.counts.prf(*m));
                }
            }
            for (m, p) in &ds.scores {
                row(&ds.name, m, p);
            }
        }
        if r.datasets.len() > 1 {
            for (m, p) in &r.macro_avg {
                row("macro", m, p);
            }
        }
        if opts.metrics.contains(&Metric::Zero) {
            for ds in &r.datasets {
                let z = ds.counts.zero;
                writeln!(out, "{} zero counts: tp={} wl={} fp={} fn={}", ds.name, z.tp, z.wl, z.fp, z.fn_).unwrap();
            }
        }
    }
    out
}

fn report_json(r: &ScoreReport, opts: &EvalOptions) -> Map<String, Value> {
    let mut obj = Map::new();
    let datasets: Map<String, Value> = r
        .datasets
        .iter()
        .map(|d| (d.name.clone(), scores_json(d.scores.iter())))
        .collect();
    obj.insert("datasets".into(), Value::Object(datasets));
    obj.insert("macro".into(), scores_json(r.macro_avg.iter()));
    if opts.metrics.contains(&Metric::Zero) {
        let zeros: Map<String, Value> = r
            .datasets
            .iter()
            .map(|d| (d.name.clone(), serde_json::to_value(d.counts.zero).unwrap()))
            .collect();
        obj.insert("zero_counts".into(), Value::Object(zeros));
    }
    if opts.per_doc {
        let docs: Map<String, Value> = r
            .datasets
            .iter()
            .map(|d| {
                let per: Map<String, Value> = d
                    .documents
                    .iter()
                    .map(|doc| {
                        let s = opts.metrics.iter().map(|m| (m.to_string(), prf_json(&doc.counts.prf(*m))));
                        (doc.id.clone(), Value::Object(s.collect()))
                    })
                    .collect();
                (d.name.clone(), Value::Object(per))
            })
            .collect();
        obj.insert("documents".into(), Value::Object(docs));
    }
    obj
}

/// `{schema, variant, datasets, macro}`; several systems go under `systems`.
pub fn json(reports: &[(String, ScoreReport)], opts: &EvalOptions) -> String {
    let mut top = Map::new();
    top.insert("schema".into(), json!(1));
    top.insert(
        "variant".into(),
        json!({ "match": opts.policy.to_string(), "singletons": opts.keep_singletons }),
    );
    if let [(_, r)] = reports {
        top.extend(report_json(r, opts));
    } else {
        let systems: Map<String, Value> = reports
            .iter()
            .map(|(name, r)| (name.clone(), Value::Object(report_json(r, opts))))
            .collect();
        top.insert("systems".into(), Value::Object(systems));
    }
    serde_json::to_string_pretty(&Value::Object(top)).unwrap() + "\n"
}

/// One row per system; F1 columns per metric and dataset, then the macro average.
pub fn tsv(reports: &[(String, ScoreReport)], opts: &EvalOptions) -> String {
    let mut out = String::from("system");
    let names: Vec<&str> = reports[0].1.datasets.iter().map(|d| d.name.as_str()).collect();
    for m in &opts.metrics {
        for n in &names {
            write!(out, "\t{m}:{n}").unwrap();
        }
        write!(out, "\t{m}:macro").unwrap();
    }
    out.push('\n');
    for (sys, r) in reports {
        out.push_str(sys);
        for m in &opts.metrics {
            for d in &r.datasets {
                write!(out, "\t{:.2}", pct(d.scores[m].f1)).unwrap();
            }
            write!(out, "\t{:.2}", pct(r.macro_avg[m].f1)).unwrap();
        }
        out.push('\n');
    }
    out
}

fn with_total(rows: &[(String, StatsCounts)]) -> Vec<(String, StatsCounts)> {
    let mut all = rows.to_vec();
    if rows.len() > 1 {
        let mut total = StatsCounts::default();
        for (_, c) in rows {
            total += c;
        }
        all.push(("total".into(), total));
    }
    all
}

const STATS_COLUMNS: [&str; 27] = [
    "dataset", "docs", "words", "zeros", "entities", "ent_per_1k", "ent_max", "ent_avg", "ent_1",
    "ent_2", "ent_3", "ent_4", "ent_5+", "mentions", "men_per_1k", "men_max", "men_avg", "men_0",
    "men_1", "men_2", "men_3", "men_4", "men_5+", "w_empty", "w_gap", "non_tree", "head_upos",
];

fn stats_cells(name: &str, c: &StatsCounts) -> Vec<String> {
    let e = stats::entity_stats(c);
    let m = stats::mention_stats(c);
    let d = stats::mention_detail_stats(c);
    let mut v = vec![
        name.to_string(),
        c.documents.to_string(),
        c.words.to_string(),
        c.empty_nodes.to_string(),
        e.total.to_string(),
        format!("{:.1}", e.per_1k),
        e.max_len.to_string(),
        format!("{:.2}", e.mean_len),
    ];
    v.extend(e.hist.iter().map(|x| format!("{x:.1}")));
    v.push(m.total.to_string());
    v.push(format!("{:.1}", m.per_1k));
    v.push(m.max_len.to_string());
    v.push(format!("{:.2}", m.mean_len));
    v.extend(m.hist.iter().map(|x| format!("{x:.1}")));
    v.push(format!("{:.1}", d.with_empty));
    v.push(format!("{:.1}", d.with_gap));
    v.push(format!("{:.1}", d.non_tree));
    let upos: Vec<String> = UPOS_BUCKETS
        .iter()
        .zip(d.head_upos)
        .map(|(u, x)| format!("{u}={x:.1}"))
        .collect();
    v.push(upos.join(","));
    v
}

pub fn stats_tsv(rows: &[(String, StatsCounts)]) -> String {
    let mut out = STATS_COLUMNS.join("\t") + "\n";
    for (name, c) in with_total(rows) {
        out += &(stats_cells(&name, &c).join("\t") + "\n");
    }
    out
}

pub fn stats_text(rows: &[(String, StatsCounts)]) -> String {
    let table: Vec<Vec<String>> = std::iter::once(STATS_COLUMNS.iter().map(|s| s.to_string()).collect())
        .chain(with_total(rows).iter().map(|(n, c)| stats_cells(n, c)))
        .collect();
    let widths: Vec<usize> = (0..STATS_COLUMNS.len())
        .map(|i| table.iter().map(|r| r[i].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in &table {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out += cells.join("  ").trim_end();
        out.push('\n');
    }
    out
}

pub fn stats_json(rows: &[(String, StatsCounts)]) -> String {
    let items: Map<String, Value> = with_total(rows)
        .into_iter()
        .map(|(name, c)| {
            let v = json!({
                "counts": c,
                "entities": stats::entity_stats(&c),
                "mentions": stats::mention_stats(&c),
                "details": stats::mention_detail_stats(&c),
            });
            (name, v)
        })
        .collect();
    serde_json::to_string_pretty(&json!({ "schema": 1, "datasets": items })).unwrap() + "\n"
}
