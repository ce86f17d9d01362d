"""Train/dev splitting, per-label P/R/F1, micro-averaged F1, and reports.

The 2:1 split shuffles with a seeded RNG, cuts at floor(2n/3), and
re-shuffles the training side.  Scores use the convention that precision,
recall, and F1 are 0 whenever their denominator is 0.  In this
single-label multi-class setting the overall micro-F1 equals accuracy.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .errors import ShapeError, SplitError
from .corpus import TechniqueLabel


@dataclass(frozen=True)
class LabelScore:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class ScoreReport:
    per_label: dict
    overall_micro_f1: float
    n_instances: int


def split_indices(n: int, seed: int) -> tuple[list[int], list[int]]:
    """Deterministic index permutation behind split_2_1.

    Exposed so data generators can know, for a given size and seed, which
    positions will land in train versus dev.
    """
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    cut = (2 * n) // 3
    train, dev = order[:cut], order[cut:]
    rng.shuffle(train)
    return train, dev


def split_2_1(items, seed: int) -> tuple[list, list]:
    """Seeded 2/3 train, 1/3 dev split with a re-shuffled training side."""
    items = list(items)
    if len(items) < 3:
        raise SplitError(f"need at least 3 items to split 2:1, got {len(items)}")
    train_idx, dev_idx = split_indices(len(items), seed)
    return [items[i] for i in train_idx], [items[i] for i in dev_idx]


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def _label_sort_key(label):
    if isinstance(label, TechniqueLabel):
        return (0, list(TechniqueLabel).index(label))
    return (1, str(label))


def micro_f1(gold, pred) -> ScoreReport:
    """Score single-label predictions against gold labels.

    Per-label one-vs-rest precision/recall/F1 plus overall micro-F1 from
    TP/FP/FN summed over labels.
    """
    gold = list(gold)
    pred = list(pred)
    if len(gold) != len(pred):
        raise ShapeError(f"gold has {len(gold)} labels but pred has {len(pred)}")
    if not gold:
        raise ShapeError("need at least one instance to score")

    labels = sorted(set(gold) | set(pred), key=_label_sort_key)
    tp = {l: 0 for l in labels}
    fp = {l: 0 for l in labels}
    fn = {l: 0 for l in labels}
    support = {l: 0 for l in labels}
    for g, p in zip(gold, pred):
        support[g] += 1
        if g == p:
            tp[g] += 1
        else:
            fp[p] += 1
            fn[g] += 1

    per_label = {}
    for l in labels:
        precision = _ratio(tp[l], tp[l] + fp[l])
        recall = _ratio(tp[l], tp[l] + fn[l])
        f1 = _ratio(2 * precision * recall, precision + recall)
        per_label[l] = LabelScore(precision, recall, f1, support[l])

    tp_sum = sum(tp.values())
    fp_sum = sum(fp.values())
    fn_sum = sum(fn.values())
    micro_p = _ratio(tp_sum, tp_sum + fp_sum)
    micro_r = _ratio(tp_sum, tp_sum + fn_sum)
    overall = _ratio(2 * micro_p * micro_r, micro_p + micro_r)
    return ScoreReport(per_label=per_label, overall_micro_f1=overall, n_instances=len(gold))


def _fmt(score: float) -> str:
    return f"{100.0 * score:.2f}"


def report_tsv(score: ScoreReport) -> str:
    """TSV table: label, precision, recall, f1, support; Overall row last."""
    lines = ["label\tprecision\trecall\tf1\tsupport"]
    for label, s in score.per_label.items():
        lines.append(
            f"{label}\t{_fmt(s.precision)}\t{_fmt(s.recall)}\t{_fmt(s.f1)}\t{s.support}"
        )
    overall = _fmt(score.overall_micro_f1)
    lines.append(f"Overall\t{overall}\t{overall}\t{overall}\t{score.n_instances}")
    return "\n".join(lines) + "\n"


def report_text(metadata: dict, score: ScoreReport) -> str:
    """Aligned, human-readable rendering of a score report."""
    width = max([len("Overall")] + [len(str(l)) for l in score.per_label])
    lines = []
    for key, value in metadata.items():
        lines.append(f"# {key}: {value}")
    header = f"{'label':<{width}}  {'prec':>7} {'recall':>7} {'f1':>7} {'support':>8}"
    lines.append(header)
    lines.append("-" * len(header))
    for label, s in score.per_label.items():
        lines.append(
            f"{str(label):<{width}}  {_fmt(s.precision):>7} {_fmt(s.recall):>7} "
            f"{_fmt(s.f1):>7} {s.support:>8}"
        )
    lines.append("-" * len(header))
    overall = _fmt(score.overall_micro_f1)
    lines.append(
        f"{'Overall':<{width}}  {overall:>7} {overall:>7} {overall:>7} "
        f"{score.n_instances:>8}"
    )
    return "\n".join(lines) + "\n"


def write_report(score: ScoreReport, path) -> None:
    Path(path).write_text(report_tsv(score), encoding="utf-8")
