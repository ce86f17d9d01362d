"""Independent oracles and generators shared by the test modules.

These deliberately re-derive expected behavior by the most naive route
available (try-everything matching, dense matrices, direct counting) so
they cannot share bugs with the implementations they check.
"""

from __future__ import annotations

import math
import random

import numpy as np

from proptc.gazetteer import DEFAULT_PRIORITY
from proptc.rewrite import tokenize_with_offsets


def brute_force_match(text, entries, priority=DEFAULT_PRIORITY):
    """Reference matcher: try every phrase at every token position.

    Scans left to right; at each position keeps the candidate with the
    most tokens, breaking ties by tag priority and then entry order;
    resumes after each match.
    """
    tokens = tokenize_with_offsets(text)
    prio = {tag: i for i, tag in enumerate(priority)}
    matches = []
    i = 0
    while i < len(tokens):
        best = None
        for idx, entry in enumerate(entries):
            k = len(entry.tokens)
            if i + k > len(tokens):
                continue
            window = tuple(t.text for t in tokens[i : i + k])
            if entry.case_sensitive:
                ok = window == entry.tokens
            else:
                ok = tuple(w.lower() for w in window) == tuple(
                    t.lower() for t in entry.tokens
                )
            if ok:
                cand = (k, prio.get(entry.tag, len(priority)), idx)
                if (
                    best is None
                    or cand[0] > best[0]
                    or (cand[0] == best[0] and cand[1:] < best[1:])
                ):
                    best = cand
        if best is None:
            i += 1
        else:
            k, _, idx = best
            matches.append((tokens[i].begin, tokens[i + k - 1].end, entries[idx].tag))
            i += k
    return matches


def dense_tfidf(docs, fit_docs):
    """Reference TF-IDF: dense counting, explicit formula, explicit norm."""
    terms = sorted({t for doc in fit_docs for t in doc})
    col = {t: j for j, t in enumerate(terms)}
    n = len(fit_docs)
    df = {t: sum(1 for doc in fit_docs if t in set(doc)) for t in terms}
    out = np.zeros((len(docs), len(terms)))
    for r, doc in enumerate(docs):
        for t in doc:
            if t in col:
                out[r, col[t]] += 1.0
        for t in terms:
            out[r, col[t]] *= math.log((1 + n) / (1 + df[t])) + 1.0
        norm = np.linalg.norm(out[r])
        if norm > 0:
            out[r] /= norm
    return out, terms


def accuracy(gold, pred):
    """Plain fraction-correct oracle."""
    return sum(1 for g, p in zip(gold, pred) if g == p) / len(gold)


_WORDS = (
    "alpha beta gamma delta epsilon kappa sigma omega news war peace vote "
    "the of and to in not this is or it was were un aff able"
).split()
_SEPARATORS = [" ", " ", " ", ", ", ". ", "; ", " - ", "  ", "\n", "! ", "?? "]
_EXOTIC = ["©", "½", "№", "…", "€", "３", "Ωmega", "naïve", "ÜBER", "ʼn"]
_URLS = ["http://a.b/c", "www.example.com", "https://x.y/z?q=1"]


def random_text(rng: random.Random, vocab_words=None, tags=("NATION", "PERSON", "URL")) -> str:
    """A small messy text: words, case noise, punctuation, URLs, tags."""
    words = list(vocab_words) if vocab_words else list(_WORDS)
    parts = []
    for _ in range(rng.randint(0, 14)):
        roll = rng.random()
        if roll < 0.70:
            w = rng.choice(words)
            case = rng.random()
            if case < 0.15:
                w = w.upper()
            elif case < 0.40:
                w = w.capitalize()
            parts.append(w)
        elif roll < 0.80:
            parts.append(rng.choice(_EXOTIC))
        elif roll < 0.86:
            parts.append(rng.choice(_URLS))
        elif roll < 0.92:
            parts.append(rng.choice(tags))
        else:
            parts.append(str(rng.randint(0, 99999)))
    out = []
    for i, p in enumerate(parts):
        out.append(p)
        if i != len(parts) - 1:
            out.append(rng.choice(_SEPARATORS))
    return "".join(out)


def toy_gazetteer_entries(rng: random.Random, n_phrases: int = 50):
    """A dense little lexicon over a small token alphabet.

    Produces heavy overlap (shared prefixes, nested phrases, case
    variants) so leftmost-longest tie-breaking actually gets exercised.
    """
    from proptc.gazetteer import GazetteerEntry
    from proptc.rewrite import tokenize_with_offsets as tok

    alphabet = ["alpha", "beta", "gamma", "delta", "ul", "OM", "Zeta", "kap-nu", "war", "no"]
    tags = list(DEFAULT_PRIORITY)
    entries = []
    seen = set()
    while len(entries) < n_phrases:
        k = rng.choice([1, 1, 2, 2, 3])
        words = [rng.choice(alphabet) for _ in range(k)]
        phrase = " ".join(words)
        if rng.random() < 0.3:
            phrase = phrase.upper()
        elif rng.random() < 0.3:
            phrase = phrase.capitalize()
        tag = rng.choice(tags)
        if (phrase, tag) in seen or phrase.upper() in ("NATION", "RELIGION", "POLITICS", "SLOGANS", "PERSON", "URL"):
            continue
        seen.add((phrase, tag))
        tokens = tuple(t.text for t in tok(phrase))
        entries.append(
            GazetteerEntry(
                phrase=phrase,
                tag=tag,
                tokens=tokens,
                case_sensitive=phrase.isupper() or len(phrase) < 4,
            )
        )
    return entries


def random_gazetteer_text(rng: random.Random) -> str:
    """Texts over the toy gazetteer's alphabet, with case and punct noise."""
    alphabet = ["alpha", "beta", "gamma", "delta", "ul", "OM", "Zeta", "kap-nu", "war", "no", "zzz", "q"]
    parts = []
    for _ in range(rng.randint(0, 12)):
        w = rng.choice(alphabet)
        roll = rng.random()
        if roll < 0.2:
            w = w.upper()
        elif roll < 0.4:
            w = w.capitalize()
        parts.append(w)
    out = []
    for i, p in enumerate(parts):
        out.append(p)
        if i != len(parts) - 1:
            out.append(rng.choice([" ", " ", ", ", ". ", "-", " -- ", "  "]))
    return "".join(out)
