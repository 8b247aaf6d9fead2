#!/usr/bin/env python3
"""Regenerate the frozen test fixtures under tests/data/.

The tokenizer/BLEU half of this script is a self-contained reimplementation of
the WMT reference scorer pipeline (v13a tokenization, corpus BLEU, sentence
BLEU with exponential smoothing).  It is deliberately written in Python with
the original regex rules so that it exercises a completely different code path
from the C++ library; its outputs are frozen into the repo and the C++ side
must reproduce them.

The statistics half freezes Pearson r and Williams-test values computed with
numpy/scipy as the independent reference implementation.

Run from the repo root:  python3 scripts/make_fixtures.py
"""

import json
import math
import random
import re
from pathlib import Path

import numpy as np
from scipy import stats as sps

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "tests" / "data"


# ---------------------------------------------------------------------------
# v13a tokenizer (reference scorer semantics)
# ---------------------------------------------------------------------------

_RULES = [
    # language-dependent punctuation padding
    (re.compile(r'([\{-\~\[-\` -\&\(-\+\:-\@\/])'), r' \1 '),
    # period/comma unless preceded by a digit
    (re.compile(r'([^0-9])([\.,])'), r'\1 \2 '),
    # period/comma unless followed by a digit
    (re.compile(r'([\.,])([^0-9])'), r' \1 \2'),
    # dash preceded by a digit
    (re.compile(r'([0-9])(\-)'), r'\1 \2 '),
]


def tokenize_v13a(line: str) -> list[str]:
    line = line.replace('<skipped>', '')
    line = line.replace('-\n', '')
    line = line.replace('\n', ' ')
    if '&' in line:
        line = line.replace('&quot;', '"')
        line = line.replace('&amp;', '&')
        line = line.replace('&lt;', '<')
        line = line.replace('&gt;', '>')
    line = f' {line} '
    for rx, repl in _RULES:
        line = rx.sub(repl, line)
    return line.split()


# ---------------------------------------------------------------------------
# BLEU (corpus + exponentially smoothed sentence variant)
# ---------------------------------------------------------------------------

def ngram_counts(tokens: list[str], max_order: int) -> dict:
    counts = {}
    for n in range(1, max_order + 1):
        for i in range(len(tokens) - n + 1):
            key = tuple(tokens[i:i + n])
            counts[key] = counts.get(key, 0) + 1
    return counts


def segment_stats(hyp, refs, max_order):
    """Clipped matches and totals per order, plus closest reference length."""
    hyp_counts = ngram_counts(hyp, max_order)
    ref_counts = {}
    for ref in refs:
        for key, cnt in ngram_counts(ref, max_order).items():
            if cnt > ref_counts.get(key, 0):
                ref_counts[key] = cnt
    match = [0] * max_order
    total = [0] * max_order
    for n in range(1, max_order + 1):
        total[n - 1] = max(len(hyp) - n + 1, 0)
    for key, cnt in hyp_counts.items():
        c = min(cnt, ref_counts.get(key, 0))
        match[len(key) - 1] += c
    # closest reference length, ties -> shorter
    best = None
    for ref in refs:
        d = abs(len(ref) - len(hyp))
        if best is None or d < best[0] or (d == best[0] and len(ref) < best[1]):
            best = (d, len(ref))
    return match, total, len(hyp), best[1]


def compute_bleu(match, total, sys_len, ref_len, smooth, effective_order, max_order):
    if sys_len < ref_len:
        bp = math.exp(1 - ref_len / sys_len) if sys_len > 0 else 0.0
    else:
        bp = 1.0
    prec = [0.0] * max_order
    smooth_mteval = 1.0
    eff = max_order
    for n in range(1, max_order + 1):
        if total[n - 1] == 0:
            break
        if effective_order:
            eff = n
        if match[n - 1] == 0:
            if smooth == 'exp':
                smooth_mteval *= 2
                prec[n - 1] = 100.0 / (smooth_mteval * total[n - 1])
        else:
            prec[n - 1] = 100.0 * match[n - 1] / total[n - 1]
    if all(p == 0.0 for p in prec):
        score = 0.0
    elif any(p == 0.0 for p in prec[:eff]):
        score = 0.0          # unsmoothed zero precision: exact zero
    else:
        score = bp * math.exp(sum(math.log(p) for p in prec[:eff]) / eff)
    return score, bp, prec


def corpus_bleu(hyps, refs_per_seg, max_order=4):
    match = [0] * max_order
    total = [0] * max_order
    sys_len = 0
    ref_len = 0
    for hyp, refs in zip(hyps, refs_per_seg, strict=True):
        m, t, c, r = segment_stats(hyp, refs, max_order)
        for i in range(max_order):
            match[i] += m[i]
            total[i] += t[i]
        sys_len += c
        ref_len += r
    score, bp, prec = compute_bleu(match, total, sys_len, ref_len,
                                   smooth='none', effective_order=False,
                                   max_order=max_order)
    return dict(score=score, bp=bp, precisions=prec, sys_len=sys_len,
                ref_len=ref_len, match=match, total=total)


def sentence_bleu(hyp, refs, max_order=4):
    m, t, c, r = segment_stats(hyp, refs, max_order)
    score, bp, prec = compute_bleu(m, t, c, r, smooth='exp',
                                   effective_order=True, max_order=max_order)
    return score


# ---------------------------------------------------------------------------
# Fixture corpus
# ---------------------------------------------------------------------------

BASE_SENTENCES = [
    "The U.S. economy grew by 3.5 percent in 2019, according to the report.",
    "He said: “this is fine” — but nobody believed him.",
    "Prices rose from $1,000.50 to $2,500 (a 150% increase) last year.",
    "The high-tech sector added 12,000 jobs; manufacturing lost 3,400.",
    "Tickets cost 9-euro apiece, or 25-30 dollars for the weekend pass.",
    "Die Königin besüchte München und aß dort Brezeln.",
    "Президент подписал указ вчера вечером.",
    "The committee (which met on Tuesday) rejected amendments #4 and #7.",
    "Visit https://example.com/page?id=42&lang=en for more details.",
    "She whispered &quot;never again&quot; &amp; walked away.",
    "Temperatures fell below -10°C in parts of northern Sweden.",
    "A 5-4 ruling by the court upheld the 2017 law.",
    "Molière's «L'Avare» premiered in 1668 at the Palais-Royal.",
    "The firm's Q3 profits hit €1.2bn, up 8.4% year-on-year.",
    "Er sagte, dass er um 19.30 Uhr ankommen würde.",
    "Flight LH-441 departs at 6:45 a.m. from gate B12.",
    "The spokesman added: we will not comment further.",
    "Around 2,5 Millionen Menschen besuchten die Messe.",
    "Is this the end? No -- it is only the beginning!",
    "Researchers found traces of H2O and CO2 in the samples.",
    "The score was 3:1 after ninety minutes of play.",
    "Ein 25-jähriger Mann wurde am Bahnhof festgenommen.",
    "They shouted ¡viva! and waved flags along the route.",
    "The museum's collection includes 14,500 artefacts from Egypt.",
    "Read the fine print, i.e. sections 2.3 and 4.1, carefully.",
    "Its GDP shrank by 0.7% in the first quarter of 2020.",
    "Der Zug fährt täglich — außer sonntags — um 8.15 Uhr ab.",
    "Witnesses described a man aged 30-35 wearing a grey hoodie.",
    "The president-elect spoke for 45 minutes about health care.",
    "Wages increased by 2.1%, while inflation stayed at 1,9%.",
    "He bought three books, two pens, and a 99-cent ruler.",
    "“Never,” she said, “have I seen such chaos.”",
    "The new A380 carries up to 853 passengers on two decks.",
    "Los Angeles hosted the games in 1932 and 1984.",
    "Under clause 7(b), tenants must give 30 days' notice.",
    "Die Inflation lag bei 2,4 Prozent – ein Zehnjahreshoch.",
    "Customs seized 1.2 tonnes of cocaine at the port of Antwerp.",
    "The satellite orbits the Earth every 92.5 minutes.",
    "Please e-mail the form to office@example.org by Friday.",
]

SYNONYMS = {
    "said": "stated", "rose": "climbed", "fell": "dropped", "grew": "expanded",
    "report": "statement", "added": "noted", "bought": "purchased",
    "new": "latest", "man": "suspect", "spoke": "talked", "found": "detected",
    "increased": "rose", "rejected": "declined", "hit": "reached",
    "carries": "transports", "hosted": "held", "described": "reported",
    "premiered": "debuted", "whispered": "murmured", "shouted": "yelled",
    "walked": "strolled", "met": "convened", "upheld": "confirmed",
    "departs": "leaves", "visit": "see", "cost": "run", "waved": "flew",
}

FILLER = [
    "officials said on {d} that the figure was {n},{m} at most",
    "the {a} minister announced a {n}.{m}% cut in subsidies",
    "about {n},000 visitors attended the {a} fair near the river",
    "a {n}-year-old driver was fined €{m}50 for speeding",
    "`{a}' deals, he argued, rarely survive first contact",
    "the index closed at {n},{m}21.77 points — a record",
    "lawmakers debated bill no. {n}{m} until 2 a.m. today",
    "rescue teams worked {n}-hour shifts during the {a} floods",
    "the {a} league match ended {n}:{m} before a sellout crowd",
    "survey data show {n}.{m}% of households own a &quot;smart&quot; TV",
]

WORDS_A = ["regional", "federal", "annual", "provisional", "historic",
           "controversial", "long-awaited", "record-breaking"]
DAYS = ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday"]


def build_corpus(rng: random.Random):
    lines = list(BASE_SENTENCES)
    i = 0
    while len(lines) < 100:
        t = FILLER[i % len(FILLER)]
        lines.append(t.format(n=rng.randint(1, 9), m=rng.randint(1, 9),
                              a=rng.choice(WORDS_A), d=rng.choice(DAYS)))
        i += 1
    # sprinkle tokenizer trouble into a few generated lines
    lines[52] += "  (see <skipped> appendix C)"
    lines[57] += " – cf. &lt;tab&gt; 5"
    lines[63] = lines[63] + " … allegedly."   # NBSP + ellipsis
    lines[71] += " [sic]"
    lines[88] += "  — really?"                 # thin space
    return lines


def perturb(tokens: list[str], rng: random.Random) -> list[str]:
    out = []
    for tok in tokens:
        r = rng.random()
        low = tok.lower()
        if r < 0.12:
            continue                      # drop
        if r < 0.30 and low in SYNONYMS:
            out.append(SYNONYMS[low] if tok == low else SYNONYMS[low].capitalize())
            continue
        out.append(tok)
        if r > 0.97:
            out.append(tok)               # rare stutter
    if len(out) >= 4 and rng.random() < 0.25:
        i = rng.randrange(len(out) - 1)
        out[i], out[i + 1] = out[i + 1], out[i]
    if not out:
        out = tokens[:1]
    return out


def make_bleu_fixture():
    rng = random.Random(20190814)
    raw_ref_a = build_corpus(rng)
    raw_hyp, raw_ref_b = [], []
    for line in raw_ref_a:
        words = line.split(' ')
        raw_hyp.append(' '.join(perturb(words, rng)))
        raw_ref_b.append(' '.join(perturb(words, rng)))

    tok_hyp = [tokenize_v13a(l) for l in raw_hyp]
    tok_a = [tokenize_v13a(l) for l in raw_ref_a]
    tok_b = [tokenize_v13a(l) for l in raw_ref_b]

    (DATA / "fixture_hyp.raw").write_text('\n'.join(raw_hyp) + '\n', encoding='utf-8')
    (DATA / "fixture_ref_a.raw").write_text('\n'.join(raw_ref_a) + '\n', encoding='utf-8')
    (DATA / "fixture_ref_b.raw").write_text('\n'.join(raw_ref_b) + '\n', encoding='utf-8')
    (DATA / "fixture_hyp.tok").write_text(
        '\n'.join(' '.join(t) for t in tok_hyp) + '\n', encoding='utf-8')
    (DATA / "fixture_ref_a.tok").write_text(
        '\n'.join(' '.join(t) for t in tok_a) + '\n', encoding='utf-8')
    (DATA / "fixture_ref_b.tok").write_text(
        '\n'.join(' '.join(t) for t in tok_b) + '\n', encoding='utf-8')

    one = corpus_bleu(tok_hyp, [[a] for a in tok_a])
    two = corpus_bleu(tok_hyp, [[a, b] for a, b in zip(tok_a, tok_b)])
    assert all(m > 0 for m in one["match"]), "fixture must have matches at every order"
    assert one["sys_len"] < one["ref_len"], "fixture should exercise BP < 1"

    sent_one = [sentence_bleu(h, [a]) for h, a in zip(tok_hyp, tok_a)]
    sent_two = [sentence_bleu(h, [a, b]) for h, a, b in zip(tok_hyp, tok_a, tok_b)]

    expected = {
        "corpus_single_ref": one,
        "corpus_two_refs": two,
        "sentence_single_ref": sent_one,
        "sentence_two_refs": sent_two,
    }
    (DATA / "bleu_expected.json").write_text(
        json.dumps(expected, indent=1, ensure_ascii=False) + '\n', encoding='utf-8')
    print(f"corpus BLEU 1ref  = {one['score']:.6f}  (bp {one['bp']:.6f}, "
          f"len {one['sys_len']}/{one['ref_len']})")
    print(f"corpus BLEU 2refs = {two['score']:.6f}  (bp {two['bp']:.6f})")
    print(f"sentence BLEU[0..2] = {[round(s, 4) for s in sent_one[:3]]}")


# ---------------------------------------------------------------------------
# Statistics reference values (numpy/scipy)
# ---------------------------------------------------------------------------

def williams_t(r12, r13, r23, n):
    k = 1 - r12 * r12 - r13 * r13 - r23 * r23 + 2 * r12 * r13 * r23
    num = (r12 - r13) * math.sqrt((n - 1) * (1 + r23))
    den = math.sqrt(2 * k * (n - 1) / (n - 3) +
                    ((r12 + r13) ** 2 / 4) * (1 - r23) ** 3)
    return num / den


def make_stats_fixture():
    rng = np.random.default_rng(7241912)
    pearson_cases = []
    for _ in range(50):
        n = int(rng.integers(3, 60))
        x = rng.normal(0, 3, n)
        slope = rng.normal(0, 1.5)
        y = slope * x + rng.normal(0, 2.0, n)
        if np.std(y) < 1e-9:
            y[0] += 1.0
        r = sps.pearsonr(x, y).statistic
        pearson_cases.append({"x": x.tolist(), "y": y.tolist(), "r": float(r)})

    williams_cases = []
    for _ in range(50):
        n = int(rng.integers(5, 400))
        base = rng.normal(0, 1, n)
        m1 = base + rng.normal(0, rng.uniform(0.3, 2.0), n)
        m2 = base + rng.normal(0, rng.uniform(0.3, 2.0), n)
        h = base + rng.normal(0, rng.uniform(0.3, 2.0), n)
        r12 = float(sps.pearsonr(h, m1).statistic)
        r13 = float(sps.pearsonr(h, m2).statistic)
        r23 = float(sps.pearsonr(m1, m2).statistic)
        t = williams_t(r12, r13, r23, n)
        p = float(sps.t.sf(t, n - 3))
        williams_cases.append({"r12": r12, "r13": r13, "r23": r23,
                               "n": n, "t": float(t), "p": p})

    tsf_cases = []
    for _ in range(40):
        t = float(rng.uniform(-6, 6))
        df = int(rng.integers(1, 500))
        tsf_cases.append({"t": t, "df": df, "sf": float(sps.t.sf(t, df))})

    out = {"pearson": pearson_cases, "williams": williams_cases,
           "t_sf": tsf_cases}
    (DATA / "stats_expected.json").write_text(
        json.dumps(out, indent=1) + '\n', encoding='utf-8')
    print(f"stats fixture: {len(pearson_cases)} pearson, "
          f"{len(williams_cases)} williams, {len(tsf_cases)} t-sf cases")


if __name__ == "__main__":
    DATA.mkdir(parents=True, exist_ok=True)
    make_bleu_fixture()
    make_stats_fixture()
    print("fixtures written to", DATA)
