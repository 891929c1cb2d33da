"""Computes the six sentence features for one corpus document, from raw text.

Written separately from the library: segmentation, tokenization, tagging
and the feature formulas are re-derived here with regular expressions and
the reference Snowball stemmer, so the output can serve as a golden matrix.

usage: golden_features.py CORPUS DOC_ID OUT
"""
import json
import math
import re
import sys
from collections import Counter
from pathlib import Path

import snowballstemmer

HERE = Path(__file__).resolve().parent
DATA = HERE.parent / "crates" / "core" / "data"


def load_list(name):
    out = []
    for line in (DATA / name).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line.lower())
    return out


STOP = set(load_list("stopwords.txt"))
ABBR = load_list("abbreviations.txt")
STEM = snowballstemmer.stemmer("english")

SYM = re.escape("%$€£¥&#@+=*<>^~|")
UNIT = re.compile(
    r"(?:(?<![^\W_])[+-](?=\d))?[^\W_]+(?:(?:['’-]|(?<=\d)[.,](?=\d))[^\W_]+)*(?:(?<=\d)%)?"
    rf"|[{SYM}]"
    rf"|(?:[^\w\s{SYM}]|_)+"
)
NUMERIC = re.compile(r"[+-]?(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?%?")
BOUNDARY = re.compile(r"[.!?][.!?\"')\]”’»]*(?=\s+[A-Z0-9\"'“‘(\[«]|\s*$)")


def segment(body):
    out, start = [], 0
    for m in BOUNDARY.finditer(body):
        head = body[start:m.start() + 1].lower()
        cluster = m.group(0)
        if cluster[0] == "." and not any(c in ".!?" for c in cluster[1:]):
            if any(head.endswith(a) and (len(head) == len(a) or head[-len(a) - 1] in " \t\n(\"'“‘[")
                   for a in ABBR):
                continue
        out.append(" ".join(body[start:m.end()].split()))
        start = m.end()
    tail = " ".join(body[start:].split())
    if tail:
        out.append(tail)
    return out


def is_punct(u):
    return all(not c.isalnum() and not c.isspace() and c not in "%$€£¥&#@+=*<>^~|" for c in u)


def alphabetic(u):
    return any(c.isalpha() for c in u) and all(c.isalpha() or c in "'’-" for c in u)


def norm(u):
    return u.lower().replace("’", "'")


def candidate(u):
    return u[0].isupper() and alphabetic(u) and norm(u) not in STOP


def first_word(units):
    return next((k for k, u in enumerate(units) if not is_punct(u)), None)


def analyse(sentences):
    units = [UNIT.findall(s) for s in sentences]
    seen = {norm(u) for us in units for k, u in enumerate(us) if k != first_word(us) and candidate(u)}
    out = []
    for us in units:
        first = first_word(us)
        terms = []
        for k, u in enumerate(us):
            if is_punct(u):
                continue
            lower = norm(u)
            stem = (STEM.stemWord(lower) or lower) if alphabetic(u) else lower
            terms.append({
                "stem": stem,
                "stop": lower in STOP,
                "proper": candidate(u) and (k != first or norm(u) in seen),
                "numeric": bool(NUMERIC.fullmatch(u)),
            })
        if terms:
            out.append(terms)
    return out


def cosine(a, b):
    if not a or not b:
        return 0.0
    dot = sum(a[k] * b.get(k, 0) for k in a)
    return dot / (math.sqrt(sum(v * v for v in a.values())) * math.sqrt(sum(v * v for v in b.values())))


def features(sents):
    n = len(sents)
    content = [[t["stem"] for t in s if not t["stop"]] for s in sents]
    grams = [list(zip(c, c[1:])) for c in content]
    total = Counter(g for gs in grams for g in gs)
    df = Counter(g for gs in grams for g in set(gs))
    w = [sum(total[g] * math.log(n / df[g]) for g in gs) for gs in grams]
    lengths = [len(s) for s in sents]
    vecs = [Counter(c) for c in content]
    sim = [sum(cosine(vecs[i], vecs[j]) for j in range(n) if j != i) for i in range(n)]
    rows = []
    for i, s in enumerate(sents):
        rows.append([
            w[i] / max(w) if max(w) > 0 else 0.0,
            (i + 1) / n,
            lengths[i] / max(lengths),
            sum(t["proper"] for t in s) / len(s),
            sum(t["numeric"] for t in s) / len(s),
            sim[i] / max(sim) if n > 1 and max(sim) > 0 else 0.0,
        ])
    return rows


def main():
    corpus, doc_id, out = sys.argv[1:4]
    with open(corpus, encoding="utf-8") as fh:
        doc = next(d for d in map(json.loads, fh) if d["id"] == doc_id)
    sents = analyse(segment(doc["body"]))
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("sentence\ttf_isf\tposition\tlength\tproper_noun\tnumeric\tsimilarity\tterms\n")
        for i, (row, s) in enumerate(zip(features(sents), sents)):
            fh.write("\t".join([str(i)] + [repr(v) for v in row] + [str(len(s))]) + "\n")


if __name__ == "__main__":
    main()
