#!/usr/bin/env python3
"""Generate CoNLL-U fixtures with coreference annotation.

Writes round-trip files (varied layout: multiword tokens, empty nodes,
discontinuous mentions, odd bracket orders, blank-line variations) and
scoring corpora (each with non-singletons, singletons and anaphoric zeros).

Usage: scripts/gen_fixtures.py [OUT_DIR]   (default crates/core/tests/fixtures)
"""

import os
import random
import sys

WORDS = ["dog", "cat", "house", "Prague", "Brown", "tree", "river", "book", "idea", "city",
         "run", "see", "give", "big", "old", "red", "he", "she", "it", "they", "the", "a"]
UPOS = ["NOUN", "NOUN", "PROPN", "PRON", "DET", "ADJ", "VERB", "ADV", "NUM", "ADP"]
DEPRELS = ["nsubj", "obj", "det", "amod", "flat", "flat:name", "conj", "obl", "nmod"]
MISC_EXTRA = ["SpaceAfter=No", "Translit=x", "Gloss=thing", "SpacesAfter=\\n"]
ETYPES = ["person", "place", "object", "abstract", "event", ""]


class Opts:
    def __init__(self, **kw):
        self.sentences = kw.get("sentences", 6)
        self.words = kw.get("words", (3, 12))
        self.empty_prob = kw.get("empty_prob", 0.1)
        self.mwt_prob = kw.get("mwt_prob", 0.0)
        self.zero_root_prob = kw.get("zero_root_prob", 0.0)
        self.mention_rate = kw.get("mention_rate", 0.35)
        self.disc_prob = kw.get("disc_prob", 0.0)
        self.zero_mention_prob = kw.get("zero_mention_prob", 0.5)
        self.fields_prob = kw.get("fields_prob", 0.3)
        self.shuffle_brackets = kw.get("shuffle_brackets", False)
        self.misc_prob = kw.get("misc_prob", 0.2)
        self.cross_sentence = kw.get("cross_sentence", False)
        self.docs = kw.get("docs", 1)


def gen_sentence(rng, opts):
    """Token dicts in file order (multiword ranges, words, empty nodes)."""
    n = rng.randint(*opts.words)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    head = {order[0]: 0}
    for i in range(1, n):
        head[order[i]] = order[rng.randrange(i)]
    rows = []

    def word(w):
        upos = rng.choice(UPOS)
        feats = rng.choice(["_", "Gender=Masc", "Gender=Fem", "Gender=Fem|Number=Sing", "Number=Plur"])
        form = rng.choice(WORDS)
        return {"id": str(w), "form": form, "lemma": form.lower() if upos != "PROPN" else form,
                "upos": upos, "xpos": "_", "feats": feats, "head": str(head[w]),
                "deprel": "root" if head[w] == 0 else rng.choice(DEPRELS), "deps": "_",
                "misc": [], "empty": False}

    def empty(w, k):
        parent = w if w > 0 else 1
        return {"id": f"{w}.{k}", "form": "_", "lemma": "#PersPron", "upos": "PRON", "xpos": "_",
                "feats": rng.choice(["_", "Gender=Masc"]), "head": "_", "deprel": "_",
                "deps": f"{parent}:nsubj", "misc": [], "empty": True}

    if rng.random() < opts.zero_root_prob:
        rows.append(empty(0, 1))
    w = 1
    while w <= n:
        if w < n and rng.random() < opts.mwt_prob:
            rows.append({"id": f"{w}-{w + 1}", "form": "dela", "mwt": True, "misc": []})
        rows.append(word(w))
        k = 1
        while rng.random() < opts.empty_prob and k <= 2:
            rows.append(empty(w, k))
            k += 1
        w += 1
    return rows


def node_rows(rows):
    return [r for r in rows if not r.get("mwt")]


def add_mentions(rng, doc_nodes, sent_of, opts, min_entities=3):
    """Entities as lists of (sorted node-index list, fields) with disjoint
    [first, last] ranges inside each entity."""
    total = len(doc_nodes)
    n_mentions = max(4, int(total * opts.mention_rate))
    n_entities = max(min_entities, n_mentions // 3)
    entities = [[] for _ in range(n_entities)]

    def free(e, first, last):
        return all(last < m[0][0] or first > m[0][-1] for m in entities[e])

    empties = [i for i, r in enumerate(doc_nodes) if r["empty"]]
    for _ in range(n_mentions):
        for _attempt in range(20):
            e = rng.randrange(n_entities)
            if empties and rng.random() < opts.zero_mention_prob * 0.3:
                span = [rng.choice(empties)]
            else:
                start = rng.randrange(total)
                length = rng.choice([1, 1, 2, 3, 4])
                span = [i for i in range(start, min(total, start + length))
                        if opts.cross_sentence or sent_of[i] == sent_of[start]]
                if opts.disc_prob and rng.random() < opts.disc_prob:
                    gap_to = span[-1] + 2 + rng.randrange(2)
                    extra = [i for i in range(gap_to, min(total, gap_to + 2)) if sent_of[i] == sent_of[start]]
                    span += extra
            if not span or not free(e, span[0], span[-1]):
                continue
            fields = []
            if rng.random() < opts.fields_prob:
                fields = [rng.choice(ETYPES)]
                if rng.random() < 0.6:
                    fields.append(str(rng.randint(1, len(span))))
                    if rng.random() < 0.5:
                        fields.append("")
            entities[e].append((span, fields))
            break
    return [e for e in entities if e]


def ensure_features(entities, doc_nodes, rng):
    """Guarantee at least one non-singleton, one singleton and one anaphoric zero."""
    empties = [i for i, r in enumerate(doc_nodes) if r["empty"]]
    used = {i for e in entities for m in e for i in m[0]}
    surface = [i for i, r in enumerate(doc_nodes) if not r["empty"] and i not in used]
    if empties:
        z = max(empties)
        first = [i for i in surface if i < z]
        if first and not any(m[0] == [z] for e in entities for m in e):
            entities.append([([first[0]], []), ([z], [])])
            used.update({first[0], z})
    surface = [i for i in surface if i not in used]
    if len(surface) >= 3:
        entities.append([([surface[0]], []), ([surface[1]], [])])
        entities.append([([surface[2]], [])])
    return entities


def brackets_for(entities, n_nodes, rng, shuffle):
    per_node = [[] for _ in range(n_nodes)]
    for ei, ms in enumerate(entities):
        eid = f"e{ei + 1}"
        for span, fields in ms:
            runs = []
            for i in span:
                if runs and runs[-1][1] == i - 1:
                    runs[-1][1] = i
                else:
                    runs.append([i, i])
            count = len(runs)
            for pi, (s, t) in enumerate(runs):
                part = f"[{pi + 1}/{count}]" if count > 1 else ""
                extra = "".join("-" + f for f in fields) if pi == 0 else ""
                if s == t:
                    per_node[s].append((1, 0, f"({eid}{part}{extra})"))
                else:
                    per_node[s].append((2, -t, f"({eid}{part}{extra}"))
                    per_node[t].append((0, -s, f"{eid}{part})"))
    out = []
    for items in per_node:
        if shuffle:
            # A closing bracket right after an opening one would read as part of it.
            closes = [x for x in items if x[0] == 0]
            rest = [x for x in items if x[0] != 0]
            rng.shuffle(closes)
            rng.shuffle(rest)
            items = closes + rest
        else:
            items.sort(key=lambda x: (x[0], x[1]))
        out.append("".join(x[2] for x in items))
    return out


def render_doc(rng, doc_id, opts, with_coref=True):
    sents = [gen_sentence(rng, opts) for _ in range(opts.sentences)]
    doc_nodes, sent_of = [], []
    for si, rows in enumerate(sents):
        for r in node_rows(rows):
            doc_nodes.append(r)
            sent_of.append(si)
    if with_coref:
        entities = add_mentions(rng, doc_nodes, sent_of, opts)
        entities = ensure_features(entities, doc_nodes, rng)
        for r, b in zip(doc_nodes, brackets_for(entities, len(doc_nodes), rng, opts.shuffle_brackets)):
            if b:
                r["misc"].append("Entity=" + b)
    for r in doc_nodes:
        if rng.random() < opts.misc_prob:
            if rng.random() < 0.5:
                r["misc"].insert(0, rng.choice(MISC_EXTRA))
            else:
                r["misc"].append(rng.choice(MISC_EXTRA))
    lines = [f"# newdoc id = {doc_id}"]
    for si, rows in enumerate(sents):
        lines.append(f"# sent_id = {doc_id}-s{si + 1}")
        lines.append("# text = " + " ".join(r["form"] for r in rows if not r.get("empty") and not r.get("mwt")))
        for r in rows:
            misc = "|".join(r["misc"]) if r["misc"] else "_"
            if r.get("mwt"):
                lines.append(f"{r['id']}\t{r['form']}\t_\t_\t_\t_\t_\t_\t_\t{misc}")
            else:
                lines.append("\t".join([r["id"], r["form"], r["lemma"], r["upos"], r["xpos"], r["feats"],
                                        r["head"], r["deprel"], r["deps"], misc]))
        lines.append("")
    return lines


def write(path, lines, trailing_newline=True, leading_blank=0, extra_blank_after=()):
    out = [""] * leading_blank
    blank_seen = 0
    for line in lines:
        out.append(line)
        if line == "":
            blank_seen += 1
            if blank_seen in extra_blank_after:
                out.append("")
    text = "\n".join(out)
    if trailing_newline:
        text += "\n"
    else:
        text = text.rstrip("\n")
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)


VARIANTS = [
    dict(),
    dict(empty_prob=0.3, zero_mention_prob=1.0),
    dict(disc_prob=0.4),
    dict(mwt_prob=0.2),
    dict(shuffle_brackets=True),
    dict(fields_prob=0.9),
    dict(zero_root_prob=0.5, empty_prob=0.2),
    dict(cross_sentence=True, mention_rate=0.5),
    dict(docs=3, sentences=3),
    dict(misc_prob=0.8, mwt_prob=0.1, disc_prob=0.2, empty_prob=0.2),
]


def main():
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "crates/core/tests/fixtures"
    rt_dir = os.path.join(out_dir, "roundtrip")
    corp_dir = os.path.join(out_dir, "corpora")
    os.makedirs(rt_dir, exist_ok=True)
    os.makedirs(corp_dir, exist_ok=True)
    rng = random.Random(20220601)

    for i in range(54):
        v = VARIANTS[i % len(VARIANTS)]
        opts = Opts(**v)
        lines = ["# global.Entity = eid-etype-head-other"]
        for d in range(opts.docs):
            lines += render_doc(rng, f"rt{i:02d}-d{d + 1}", opts)
        layout = i % 5
        write(os.path.join(rt_dir, f"rt{i:02d}.conllu"), lines,
              trailing_newline=layout != 1,
              leading_blank=1 if layout == 2 else 0,
              extra_blank_after=(1, 3) if layout == 3 else ())
    # Degenerate: a document with header comments only, followed by a normal one.
    lines = ["# newdoc id = empty-doc", "# comment only", ""] + render_doc(rng, "after-empty", Opts(sentences=2))
    write(os.path.join(rt_dir, "rt_header_only.conllu"), lines)
    write(os.path.join(rt_dir, "rt_no_coref.conllu"), render_doc(rng, "plain", Opts(), with_coref=False))

    corpora = {
        "mixed": (Opts(docs=4, sentences=8, empty_prob=0.1, disc_prob=0.1, mwt_prob=0.05), 4),
        "zeros": (Opts(docs=5, sentences=10, empty_prob=0.35, zero_mention_prob=1.0, zero_root_prob=0.2), 5),
        "discontinuous": (Opts(docs=3, sentences=10, disc_prob=0.5, fields_prob=0.6), 3),
        "large": (Opts(docs=20, sentences=68, words=(4, 11), empty_prob=0.08, disc_prob=0.05), 20),
    }
    for name, (opts, docs) in corpora.items():
        lines = []
        for d in range(docs):
            lines += render_doc(rng, f"{name}-d{d + 1}", opts)
        write(os.path.join(corp_dir, f"{name}.conllu"), lines)


if __name__ == "__main__":
    main()
