#!/usr/bin/env python3
"""Reference stylometric feature extractor used to freeze golden values.

A regex-driven re-implementation of the documented tokenizer rules and
feature definitions, written independently of the C++ scanner. Run it to
regenerate tests/fixtures/golden_features.json:

    python3 tests/oracle/stylo_oracle.py tests/fixtures

Non-ASCII letters are limited to the Latin-1/Latin Extended-A/B range,
which is all the fixtures use.
"""

import json
import math
import re
import sys
from pathlib import Path

SPACE = " \t\v\f\r\u00a0\u1680\u2028\u2029\u202f\u205f\u3000" + "".join(
    chr(c) for c in range(0x2000, 0x200B)
)
WC = r"[A-Za-z0-9_À-ÖØ-öø-ɏ]"
ALNUM = re.compile(r"[A-Za-z0-9À-ÖØ-öø-ɏ]")
SPACE_CLASS = "[" + re.escape(SPACE) + "]"

URL_RE = re.compile(r"(?:[Hh][Tt][Tt][Pp][Ss]?://|[Ww][Ww][Ww]\.)[^" + re.escape(SPACE) + r"]*")
TAG_RE = re.compile(r"[@#]" + WC + "+")
WORD_RE = re.compile(WC + r"+(?:(?:['’]|-|(?<=[0-9])\.(?=[0-9]))" + WC + r"+)*")
SPACE_RE = re.compile(SPACE_CLASS + "+")
ASCII_PUNCT = set("!\"#$%&'()*+,-./:;<=>?@[\\]^`{|}~")
UNICODE_MARKS = {
    "…": "…",
    "‘": "'",
    "’": "'",
    "“": '"',
    "”": '"',
    "–": "–",
    "—": "—",
}
TRACKED = ["!", "'", ",", ":", ";", "?", '"', "-", "--", "@", "#", "."]


def tokenize(raw):
    """Returns (paragraphs, marks) where each paragraph is a list of
    sentences and each sentence is a list of word strings; marks is a list of
    (mark, chars)."""
    paragraphs = []
    marks = []
    words_total = []
    for line in raw.split("\n"):
        if line.endswith("\r"):
            line = line[:-1]
        if line.strip(SPACE) == "":
            continue
        sentences = []
        current = []
        pos = 0
        after_word = False
        while pos < len(line):
            m = SPACE_RE.match(line, pos)
            if m:
                pos = m.end()
                after_word = False
                continue
            if not after_word:
                m = URL_RE.match(line, pos)
                if m:
                    end = m.end()
                    while end > pos + 1 and line[end - 1] in ".,!?;:)\"'":
                        end -= 1
                    token = line[pos:end]
                    if ALNUM.search(token):
                        current.append(token)
                    pos = end
                    after_word = False
                    continue
                m = TAG_RE.match(line, pos)
                if m:
                    marks.append((line[pos], 1))
                    token = m.group(0)
                    if ALNUM.search(token):
                        current.append(token)
                    pos = m.end()
                    after_word = False
                    continue
            m = WORD_RE.match(line, pos)
            if m:
                token = m.group(0)
                for i, ch in enumerate(token):
                    if ch in "'’" or ch == "-" or ch == ".":
                        marks.append(("'" if ch in "'’" else ch, 1))
                if ALNUM.search(token):
                    current.append(token)
                pos = m.end()
                after_word = True
                continue
            after_word = False
            ch = line[pos]
            if line.startswith("--", pos):
                marks.append(("--", 2))
                pos += 2
                continue
            if ch in ASCII_PUNCT:
                marks.append((ch, 1))
                pos += 1
                if ch in ".!?" and current:
                    sentences.append(current)
                    current = []
                continue
            if ch in UNICODE_MARKS:
                marks.append((UNICODE_MARKS[ch], 1))
            pos += 1
        if current:
            sentences.append(current)
        paragraphs.append(sentences)
    return paragraphs, marks


def pop_stats(xs):
    if not xs:
        return 0.0, 0.0
    s = 0.0
    for x in xs:
        s += float(x)
    mean = s / len(xs)
    ss = 0.0
    for x in xs:
        d = float(x) - mean
        ss += d * d
    return mean, math.sqrt(ss / len(xs))


def syllables(word):
    letters = "".join(c.lower() for c in word if c.isascii() and c.isalpha())
    groups = len(re.findall(r"[aeiouy]+", letters))
    if letters.endswith("e") and groups > 0:
        groups -= 1
    return max(groups, 1)


def mttr(words, window):
    if not words:
        return 0.0
    folded = ["".join(c.lower() if c.isascii() else c for c in w) for w in words]
    if len(folded) < window:
        return len(set(folded)) / len(folded)
    n_windows = len(folded) - window + 1
    unique_total = sum(len(set(folded[i : i + window])) for i in range(n_windows))
    return float(unique_total) / float(n_windows * window)


def features(raw, window=10):
    paragraphs, marks = tokenize(raw)
    sentences = [s for p in paragraphs for s in p]
    words = [w for s in sentences for w in s]
    out = [0.0] * 24
    if sentences and paragraphs:
        wps = pop_stats([len(s) for s in sentences])
        wpp = pop_stats([sum(len(s) for s in p) for p in paragraphs])
        spp = pop_stats([len(p) for p in paragraphs])
        out[0:9] = [float(len(words)), float(len(sentences)), float(len(paragraphs)),
                    wps[0], wps[1], wpp[0], wpp[1], spp[0], spp[1]]
        n = float(len(sentences))
        out[9] = float(sum(c for _, c in marks))
        for k, mark in enumerate(TRACKED):
            out[10 + k] = float(sum(1 for m, _ in marks if m == mark)) / n
    out[22] = mttr(words, window)
    if words and sentences:
        syl = sum(syllables(w) for w in words)
        score = 206.835 - 1.015 * (float(len(words)) / float(len(sentences))) - 84.6 * (float(syl) / float(len(words)))
        out[23] = min(max(score, -100.0), 121.22)
    return out, paragraphs


def main(fixture_dir):
    fixture_dir = Path(fixture_dir)
    tweets = [json.loads(l)["text"] for l in (fixture_dir / "golden_tweets.jsonl").read_text("utf-8").splitlines() if l.strip()]
    extra = [json.loads(l)["text"] for l in (fixture_dir / "golden_timeline_extra.jsonl").read_text("utf-8").splitlines() if l.strip()]
    timeline = tweets + extra
    rows = []
    for t in tweets:
        vec, paragraphs = features(t)
        rows.append({
            "text": t,
            "words": [w for p in paragraphs for s in p for w in s],
            "sentence_word_counts": [len(s) for p in paragraphs for s in p],
            "paragraph_count": len(paragraphs),
            "features": vec,
        })
    timeline_vec, _ = features("\n".join(timeline))
    out = {
        "mttr_window": 10,
        "tweets": rows,
        "timeline": {"tweets": timeline, "features": timeline_vec,
                     "columns": [features(t)[0] for t in timeline]},
    }
    (fixture_dir / "golden_features.json").write_text(json.dumps(out, indent=1, ensure_ascii=False) + "\n", "utf-8")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "fixtures")
