"""Person/entity tag replacement from standoff NER output or a heuristic.

External NER output is consumed as JSON-lines standoff data so any
recognizer can feed the pipeline.  When no external output is available,
a crude capitalized-run heuristic supplies PERSON spans.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import FormatError, SpanError
from .gazetteer import Gazetteer
from .rewrite import RewriteResult, apply_replacements, tokenize_with_offsets

#: Titles that may precede a name and belong inside the PERSON span.
HONORIFICS = frozenset({"Mr", "Mrs", "Ms", "Dr", "President", "Senator"})

_SENTENCE_END = ".!?"
_QUOTES = "\"'‘’“”"


@dataclass(frozen=True)
class EntityAnnotation:
    doc_key: str
    begin: int
    end: int
    entity_type: str


def ingest_entities(path) -> list[EntityAnnotation]:
    """Read JSON-lines standoff entities, grouped by doc and begin-sorted.

    Overlapping spans are kept; overlap resolution happens at apply time.
    """
    annotations = []
    content = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(content.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}:{lineno}: invalid JSON ({exc})") from None
        try:
            doc_key = obj["doc_key"]
            begin = obj["begin"]
            end = obj["end"]
            entity_type = obj["type"]
        except (KeyError, TypeError):
            raise FormatError(
                f"{path}:{lineno}: expected keys doc_key, begin, end, type"
            ) from None
        if (
            not isinstance(doc_key, str)
            or not isinstance(begin, int)
            or not isinstance(end, int)
            or not isinstance(entity_type, str)
            or not entity_type
        ):
            raise FormatError(f"{path}:{lineno}: malformed entity record")
        if begin < 0 or begin >= end:
            raise FormatError(f"{path}:{lineno}: empty or inverted span {begin}..{end}")
        annotations.append(EntityAnnotation(doc_key, begin, end, entity_type))
    annotations.sort(key=lambda a: (a.doc_key, a.begin, a.end))
    return annotations


def _is_capitalized(token: str) -> bool:
    return token[0].isupper() and not token.isupper()


def _sentence_initial(text: str, begin: int) -> bool:
    i = begin - 1
    while i >= 0 and (text[i].isspace() or text[i] in _QUOTES):
        i -= 1
    return i < 0 or text[i] in _SENTENCE_END


def heuristic_person_tagger(
    text: str, gazetteer: Gazetteer | None = None, doc_key: str = ""
) -> list[EntityAnnotation]:
    """Fallback PERSON recognizer: maximal runs of capitalized tokens.

    A run extends over whitespace gaps (plus the "Mr. Smith" case: a
    period after an honorific).  Single-token runs at sentence starts are
    skipped, as are runs made only of honorifics and runs overlapping a
    gazetteer match.
    """
    tokens = tokenize_with_offsets(text)
    runs: list[tuple[int, int]] = []  # token index ranges [i, j)
    i = 0
    while i < len(tokens):
        if not _is_capitalized(tokens[i].text):
            i += 1
            continue
        j = i + 1
        while j < len(tokens) and _is_capitalized(tokens[j].text):
            sep = text[tokens[j - 1].end : tokens[j].begin]
            joined = sep.isspace() or (
                tokens[j - 1].text in HONORIFICS and sep.rstrip() == "."
            )
            if not joined:
                break
            j += 1
        runs.append((i, j))
        i = j

    blocked: list[tuple[int, int]] = []
    if gazetteer is not None:
        blocked = [(b, e) for b, e, _ in gazetteer.match(text)]

    annotations = []
    for i, j in runs:
        begin, end = tokens[i].begin, tokens[j - 1].end
        if j - i == 1 and _sentence_initial(text, begin):
            continue
        if all(tokens[k].text in HONORIFICS for k in range(i, j)):
            continue
        if any(b < end and begin < e for b, e in blocked):
            continue
        annotations.append(EntityAnnotation(doc_key, begin, end, "PERSON"))
    return annotations


def apply_person_tags(
    text: str, annotations, types_to_map=frozenset({"PERSON"})
) -> RewriteResult:
    """Replace spans of the selected entity types with their type name.

    Overlaps are resolved leftmost-longest; ties go to the annotation
    listed first.
    """
    types_to_map = frozenset(types_to_map)
    selected = []
    for order, ann in enumerate(annotations):
        if ann.entity_type not in types_to_map:
            continue
        if not (0 <= ann.begin < ann.end <= len(text)):
            raise SpanError(
                f"entity span {ann.begin}..{ann.end} outside text of length {len(text)}"
            )
        selected.append((ann.begin, -ann.end, order, ann))
    selected.sort(key=lambda item: item[:3])

    replacements = []
    last_end = 0
    for _, _, _, ann in selected:
        if ann.begin >= last_end:
            replacements.append((ann.begin, ann.end, ann.entity_type))
            last_end = ann.end
    return apply_replacements(text, replacements)
