"""Deterministic desk-scale corpus generator for pipeline experiments.

Generates a 14-label corpus in the article/annotation file formats the
loaders expect.  Class signal is carried two ways: a per-label keyword
present in most fragments, and a per-label combination of entity types
(country / religion / politics / slogan mentions).  The concrete entity
surface forms are drawn from pools that are disjoint between the
positions a given seed will later send to train and to dev, so collapsing
surfaces to their tags is guaranteed to add transferable signal.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from pathlib import Path

from .corpus import LABELS, annotations_to_tsv
from .evaluation import split_indices
from .gazetteer import STANDARD_LISTS, Gazetteer

#: Neutral connective words; shared freely across labels and splits.
FILLERS = (
    "the of and to in that it for on with as at by from about into after "
    "over under during between through since until again once here there "
    "when where why how any both each few more most other some such only "
    "own same so than too very can will just should now"
).split()

#: One invented keyword per label; never collides with gazetteer phrases.
KEYWORDS = (
    "quorvex blentharn crasmidol dovetrik ephrandal flumetrow grindelva "
    "hastrobin ismarquel jontrivex klorvessa lumbraxen morvantic nestrafol"
).split()

#: Entity-type combination per label: 4 singles, 6 pairs, 4 triples.
SIGNATURES = (
    ("NATION",),
    ("RELIGION",),
    ("POLITICS",),
    ("SLOGANS",),
    ("NATION", "RELIGION"),
    ("NATION", "POLITICS"),
    ("NATION", "SLOGANS"),
    ("RELIGION", "POLITICS"),
    ("RELIGION", "SLOGANS"),
    ("POLITICS", "SLOGANS"),
    ("NATION", "RELIGION", "POLITICS"),
    ("NATION", "RELIGION", "SLOGANS"),
    ("NATION", "POLITICS", "SLOGANS"),
    ("RELIGION", "POLITICS", "SLOGANS"),
)

_LEAK_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)
_STOPTOKENS = frozenset(FILLERS)


@dataclass(frozen=True)
class SyntheticCorpus:
    articles_dir: Path
    annotations_path: Path
    n_fragments: int
    train_surfaces: dict[str, tuple[str, ...]]
    dev_surfaces: dict[str, tuple[str, ...]]


def _leak_tokens(phrase: str) -> set[str]:
    # Tokens as the downstream classifier will see them (hyphens split).
    return {
        t for t in (m.group(0).lower() for m in _LEAK_TOKEN_RE.finditer(phrase))
        if t not in _STOPTOKENS
    }


def _split_pools(
    phrases_by_tag: dict[str, list[str]], seed: int
) -> dict[str, dict[str, list[str]]]:
    """Partition every list into train/dev pools with no shared content tokens.

    Phrases sharing a non-stopword token, across *all* lists, are grouped
    and assigned to the same side, so no token a classifier could key on
    crosses the split (e.g. a country inside a dev-side slogan never shows
    up on the train side).
    """
    items = [(tag, phrase) for tag, phrases in phrases_by_tag.items() for phrase in phrases]
    parent = list(range(len(items)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    token_owner: dict[str, int] = {}
    for i, (_tag, phrase) in enumerate(items):
        for token in _leak_tokens(phrase):
            if token in token_owner:
                ra, rb = find(i), find(token_owner[token])
                if ra != rb:
                    parent[ra] = rb
            else:
                token_owner[token] = i

    groups: dict[int, list[int]] = {}
    for i in range(len(items)):
        groups.setdefault(find(i), []).append(i)
    base_components = sorted(groups.values(), key=lambda g: (-len(g), items[g[0]]))

    tags = list(phrases_by_tag)
    for attempt in range(100):
        rng = random.Random(f"pools-{seed}-{attempt}")
        components = list(base_components)
        rng.shuffle(components)
        counts = {side: {tag: 0 for tag in tags} for side in ("train", "dev")}
        assignment: dict[int, str] = {}
        for comp_no, comp in enumerate(components):
            comp_counts = {tag: 0 for tag in tags}
            for i in comp:
                comp_counts[items[i][0]] += 1

            def imbalance(side):
                other = "dev" if side == "train" else "train"
                return sum(
                    abs(counts[side][t] + comp_counts[t] - counts[other][t])
                    for t in tags
                )

            side = "train" if imbalance("train") <= imbalance("dev") else "dev"
            for i in comp:
                assignment[i] = side
                counts[side][items[i][0]] += 1
        if all(counts[side][tag] >= 1 for side in counts for tag in tags):
            pools = {tag: {"train": [], "dev": []} for tag in tags}
            for i, (tag, phrase) in enumerate(items):
                pools[tag][assignment[i]].append(phrase)
            return pools
    raise ValueError("could not split entity pools into non-empty halves")


def make_synthetic_corpus(
    out_dir,
    seed: int,
    n_per_label: int,
    keyword_prob: float = 0.95,
    fragments_per_article: int = 6,
) -> SyntheticCorpus:
    """Write a synthetic corpus under ``out_dir``; deterministic per seed.

    The same ``seed`` passed to the 2:1 splitter reproduces the train/dev
    destiny this generator assumed, which is what makes the entity-surface
    disjointness guarantee hold end to end.
    """
    if n_per_label < 1:
        raise ValueError("n_per_label must be >= 1")
    out_dir = Path(out_dir)
    articles_dir = out_dir / "articles"
    articles_dir.mkdir(parents=True, exist_ok=True)
    annotations_path = out_dir / "annotations.tsv"

    n = len(LABELS) * n_per_label
    train_idx, dev_idx = split_indices(n, seed)
    dev_positions = set(dev_idx)

    gazetteer = Gazetteer.standard()
    phrases_by_tag = {
        tag: [e.phrase for e in gazetteer.entries if e.tag == tag]
        for tag in STANDARD_LISTS
    }
    pools = _split_pools(phrases_by_tag, seed)
    train_surfaces = {tag: tuple(pools[tag]["train"]) for tag in pools}
    dev_surfaces = {tag: tuple(pools[tag]["dev"]) for tag in pools}

    text_rng = random.Random(f"text-{seed}")
    fragment_texts: list[str] = []
    fragment_labels = []
    for pos in range(n):
        label = LABELS[pos // n_per_label]
        signature = SIGNATURES[pos // n_per_label]
        side = "dev" if pos in dev_positions else "train"
        chunks = [
            " ".join(text_rng.choices(FILLERS, k=text_rng.randint(3, 6))),
            " ".join(text_rng.choices(FILLERS, k=text_rng.randint(2, 4))),
        ]
        if text_rng.random() < keyword_prob:
            chunks.append(KEYWORDS[pos // n_per_label])
        for tag in signature:
            chunks.append(text_rng.choice(pools[tag][side]))
        text_rng.shuffle(chunks)
        fragment_texts.append(" ".join(chunks) + ".")
        fragment_labels.append(label)

    records = []
    for first in range(0, n, fragments_per_article):
        block = list(range(first, min(first + fragments_per_article, n)))
        article_id = str(1000 + first // fragments_per_article)
        offset = 0
        parts = []
        for pos in block:
            text = fragment_texts[pos]
            records.append((article_id, fragment_labels[pos], offset, offset + len(text)))
            parts.append(text)
            offset += len(text) + 1
        (articles_dir / f"article{article_id}.txt").write_text(
            "\n".join(parts) + "\n", encoding="utf-8"
        )

    annotations_path.write_text(annotations_to_tsv(records), encoding="utf-8")

    return SyntheticCorpus(
        articles_dir=articles_dir,
        annotations_path=annotations_path,
        n_fragments=n,
        train_surfaces=train_surfaces,
        dev_surfaces=dev_surfaces,
    )
