"""Article files, span annotations, and labeled fragment extraction.

Articles are UTF-8 plain-text files named ``article<id>.txt``.  Annotations
are 4-column TSVs (article_id, label, begin, end) with character offsets
into the article text; fragments are the annotated character slices.  All
offsets are Unicode scalar-value indices, never bytes.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import (
    EncodingError,
    FormatError,
    LabelError,
    MissingArticleError,
    SpanError,
)

_ARTICLE_NAME_RE = re.compile(r"^article(\d+)\.txt$")
_INT_RE = re.compile(r"^\d+$")


class TechniqueLabel(str, Enum):
    """The 14 technique labels, in canonical reporting order.

    ``value`` is the canonical spelling used on the wire; parse/print
    round-trip byte-exactly.
    """

    LOADED_LANGUAGE = "Loaded_Language"
    NAME_CALLING = "Name_Calling,Labeling"
    REPETITION = "Repetition"
    DOUBT = "Doubt"
    EXAGGERATION = "Exaggeration,Minimisation"
    APPEAL_TO_FEAR = "Appeal_to_fear-prejudice"
    FLAG_WAVING = "Flag-Waving"
    CAUSAL_OVERSIMPLIFICATION = "Causal_Oversimplification"
    APPEAL_TO_AUTHORITY = "Appeal_to_Authority"
    SLOGANS = "Slogans"
    BLACK_AND_WHITE = "Black-and-White_Fallacy"
    WHATABOUTISM = "Whataboutism,Straw_Men"
    THOUGHT_TERMINATING = "Thought-terminating_Cliches"
    BANDWAGON = "Bandwagon,Reductio_ad_hitlerum"

    @classmethod
    def parse(cls, s: str) -> "TechniqueLabel":
        """Parse a canonical label string; anything else is a LabelError.

        No trimming: a label with stray whitespace is dirty data and is
        rejected loudly.
        """
        try:
            return cls(s)
        except ValueError:
            raise LabelError(f"unknown technique label: {s!r}") from None

    def __str__(self) -> str:
        return self.value


#: Canonical label order used for model columns and reports.
LABELS: tuple[TechniqueLabel, ...] = tuple(TechniqueLabel)


@dataclass(frozen=True)
class Article:
    """One news article: the coordinate system for annotation spans."""

    id: str
    text: str

    def __post_init__(self):
        if not self.id:
            raise FormatError("article id must be non-empty")


@dataclass(frozen=True)
class LabeledFragment:
    """A labeled character slice of one article: the classification unit."""

    article_id: str
    label: TechniqueLabel
    begin: int
    end: int
    text: str


def parse_article(path) -> Article:
    """Read one ``article<id>.txt`` file, preserving content verbatim."""
    path = Path(path)
    m = _ARTICLE_NAME_RE.match(path.name)
    if m is None:
        raise FormatError(
            f"article filename must match article<digits>.txt: {path.name!r}"
        )
    raw = path.read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise EncodingError(f"{path}: not valid UTF-8 ({exc})") from None
    return Article(id=m.group(1), text=text)


def parse_annotations(path) -> list[tuple[str, TechniqueLabel, int, int]]:
    """Parse a 4-column annotation TSV into (article_id, label, begin, end).

    One record per non-empty line, in file order.  Errors carry the
    1-based line number.
    """
    path = Path(path)
    try:
        content = path.read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise EncodingError(f"{path}: not valid UTF-8 ({exc})") from None
    records = []
    for lineno, line in enumerate(content.splitlines(), start=1):
        if not line:
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            raise FormatError(
                f"{path}:{lineno}: expected 4 tab-separated columns, got {len(cols)}"
            )
        article_id, label_str, begin_str, end_str = cols
        if not article_id:
            raise FormatError(f"{path}:{lineno}: empty article id")
        label = TechniqueLabel.parse(label_str)
        if not _INT_RE.match(begin_str) or not _INT_RE.match(end_str):
            raise FormatError(
                f"{path}:{lineno}: begin/end must be non-negative integers"
            )
        begin, end = int(begin_str), int(end_str)
        if begin >= end:
            raise SpanError(f"{path}:{lineno}: empty or inverted span {begin}..{end}")
        records.append((article_id, label, begin, end))
    return records


def annotations_to_tsv(records) -> str:
    """Serialize annotation records back to TSV (inverse of parse)."""
    lines = [
        f"{article_id}\t{label}\t{begin}\t{end}"
        for article_id, label, begin, end in records
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def write_annotations(records, path) -> None:
    """Write records as a 4-column TSV; also used for prediction output."""
    Path(path).write_text(annotations_to_tsv(records), encoding="utf-8")


def extract_fragment(
    article: Article, begin: int, end: int, label: TechniqueLabel
) -> LabeledFragment:
    """Slice one labeled fragment out of an article."""
    if not (0 <= begin < end <= len(article.text)):
        raise SpanError(
            f"article {article.id}: span {begin}..{end} outside text of length "
            f"{len(article.text)}"
        )
    return LabeledFragment(
        article_id=article.id,
        label=label,
        begin=begin,
        end=end,
        text=article.text[begin:end],
    )


def load_corpus(articles_dir, annotations_path, dedup: bool = False) -> list[LabeledFragment]:
    """Load all annotated fragments, in annotation-file order.

    Every referenced article must exist as ``article<id>.txt`` under
    ``articles_dir``.  Duplicate identical rows are kept unless ``dedup``.
    """
    articles_dir = Path(articles_dir)
    records = parse_annotations(annotations_path)
    if dedup:
        seen = set()
        unique = []
        for rec in records:
            if rec not in seen:
                seen.add(rec)
                unique.append(rec)
        records = unique

    missing = sorted(
        {
            article_id
            for article_id, _, _, _ in records
            if not os.path.isfile(articles_dir / f"article{article_id}.txt")
        }
    )
    if missing:
        raise MissingArticleError(missing)

    cache: dict[str, Article] = {}
    fragments = []
    for article_id, label, begin, end in records:
        article = cache.get(article_id)
        if article is None:
            article = parse_article(articles_dir / f"article{article_id}.txt")
            cache[article_id] = article
        fragments.append(extract_fragment(article, begin, end, label))
    return fragments
