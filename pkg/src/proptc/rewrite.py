"""Token boundaries and span replacement shared by the entity mappers.

A token is a maximal run of letters/digits, with single internal hyphens
allowed ("anti-war" is one token).  Replacements substitute whole token
spans with tag strings and report an offset map from original to
rewritten coordinates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

# Letters and digits only; underscore is a separator here.
_TOKEN_RE = re.compile(r"[^\W_]+(?:-[^\W_]+)*", re.UNICODE)


@dataclass(frozen=True)
class Token:
    text: str
    begin: int
    end: int


@dataclass(frozen=True)
class RewriteResult:
    """A rewritten text plus provenance back into the original.

    ``offset_map`` has one entry per original index 0..len(original): the
    rewritten index for characters outside replacements, and the start of
    the substituted tag for characters inside one.  It is total and
    non-decreasing.  ``replacements`` are disjoint, sorted
    (orig_begin, orig_end, tag) triples.
    """

    text: str
    offset_map: tuple[int, ...]
    replacements: tuple[tuple[int, int, str], ...]


def tokenize_with_offsets(text: str) -> list[Token]:
    """All tokens of ``text`` with their character spans, left to right."""
    return [Token(m.group(0), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def apply_replacements(text: str, replacements) -> RewriteResult:
    """Splice (begin, end, tag) replacements into ``text``.

    Replacements must be sorted and pairwise disjoint.
    """
    replacements = tuple(replacements)
    last_end = 0
    for begin, end, _tag in replacements:
        if begin < last_end:
            raise ValueError("replacements must be sorted and disjoint")
        if not (0 <= begin < end <= len(text)):
            raise ValueError(f"replacement span {begin}..{end} out of range")
        last_end = end

    parts: list[str] = []
    offset_map: list[int] = []
    out_len = 0
    pos = 0
    for begin, end, tag in replacements:
        keep = text[pos:begin]
        offset_map.extend(range(out_len, out_len + len(keep)))
        parts.append(keep)
        out_len += len(keep)
        # Every original index inside the replaced span maps to the tag start.
        offset_map.extend([out_len] * (end - begin))
        parts.append(tag)
        out_len += len(tag)
        pos = end
    tail = text[pos:]
    offset_map.extend(range(out_len, out_len + len(tail)))
    parts.append(tail)
    out_len += len(tail)
    offset_map.append(out_len)

    return RewriteResult(
        text="".join(parts),
        offset_map=tuple(offset_map),
        replacements=replacements,
    )
