"""Word lists and leftmost-longest phrase replacement.

Four curated lists (countries, religion, politics, slogans) are matched
against text over token boundaries and replaced with the tags NATION,
RELIGION, POLITICS, and SLOGANS.  Matching scans left to right, always
prefers the longest phrase starting at the current token, and never
produces overlapping replacements.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import EmptyListError, FormatError
from .rewrite import RewriteResult, apply_replacements, tokenize_with_offsets

#: Tag precedence when two entries match the same span (first wins).
DEFAULT_PRIORITY = ("SLOGANS", "NATION", "RELIGION", "POLITICS")

#: Filenames of the vendored lists, keyed by their tag.
STANDARD_LISTS = {
    "NATION": "List_Countries.txt",
    "RELIGION": "List_Religion.txt",
    "POLITICS": "List_Politics.txt",
    "SLOGANS": "List_Slogans.txt",
}

_RESERVED_TAGS = frozenset(
    {"NATION", "RELIGION", "POLITICS", "SLOGANS", "PERSON", "URL"}
)


@dataclass(frozen=True)
class GazetteerEntry:
    phrase: str
    tag: str
    tokens: tuple[str, ...]
    case_sensitive: bool


def _entry_from_phrase(phrase: str, tag: str) -> GazetteerEntry:
    tokens = tuple(t.text for t in tokenize_with_offsets(phrase))
    if not tokens:
        raise FormatError(f"phrase has no word characters: {phrase!r}")
    # All-uppercase acronyms match exactly; short mixed-case entries are
    # kept exact too so e.g. "us" never matches "US".  Everything of
    # length >= 4 matches case-insensitively.
    case_sensitive = phrase.isupper() or len(phrase) < 4
    if (case_sensitive and phrase in _RESERVED_TAGS) or (
        not case_sensitive and phrase.upper() in _RESERVED_TAGS
    ):
        raise FormatError(f"gazetteer phrase collides with a tag name: {phrase!r}")
    return GazetteerEntry(phrase=phrase, tag=tag, tokens=tokens, case_sensitive=case_sensitive)


def load_list(path, tag: str) -> list[GazetteerEntry]:
    """Load one phrase-per-line list; '#' comments and blank lines ignored."""
    content = Path(path).read_text(encoding="utf-8")
    entries = []
    for line in content.splitlines():
        phrase = line.strip()
        if not phrase or phrase.startswith("#"):
            continue
        entries.append(_entry_from_phrase(phrase, tag))
    if not entries:
        raise EmptyListError(f"{path}: no usable entries")
    return entries


class Gazetteer:
    """Immutable multi-pattern matcher over token sequences."""

    def __init__(self, entries, priority=DEFAULT_PRIORITY):
        self.entries: tuple[GazetteerEntry, ...] = tuple(entries)
        self.priority: tuple[str, ...] = tuple(priority)
        self._prio_index = {tag: i for i, tag in enumerate(self.priority)}
        # Trie over lowercased tokens; terminal nodes carry entry indices.
        self._root: dict = {}
        for idx, entry in enumerate(self.entries):
            node = self._root
            for token in entry.tokens:
                node = node.setdefault(token.lower(), {})
            node.setdefault(None, []).append(idx)

    def _tag_rank(self, tag: str) -> int:
        return self._prio_index.get(tag, len(self.priority))

    @classmethod
    def from_paths(cls, tagged_paths, priority=DEFAULT_PRIORITY) -> "Gazetteer":
        """Build from (path, tag) pairs, keeping list order."""
        entries = []
        for path, tag in tagged_paths:
            entries.extend(load_list(path, tag))
        return cls(entries, priority=priority)

    @classmethod
    def standard(cls, tags=None, priority=DEFAULT_PRIORITY) -> "Gazetteer":
        """The vendored lists, optionally restricted to a subset of tags."""
        wanted = tuple(tags) if tags is not None else tuple(STANDARD_LISTS)
        entries = []
        for tag in wanted:
            if tag not in STANDARD_LISTS:
                raise FormatError(f"no standard list for tag {tag!r}")
            ref = resources.files("proptc.data.lists") / STANDARD_LISTS[tag]
            with resources.as_file(ref) as path:
                entries.extend(load_list(path, tag))
        return cls(entries, priority=priority)

    def match(self, text: str) -> list[tuple[int, int, str]]:
        """Leftmost-longest matches as (begin, end, tag), non-overlapping.

        At each token position the longest matching phrase wins; among
        same-length matches, tag priority and then entry order decide.
        Scanning resumes after each replacement.
        """
        tokens = tokenize_with_offsets(text)
        matches = []
        i = 0
        n = len(tokens)
        while i < n:
            best = None  # (token_count, tag_rank, entry_idx)
            node = self._root
            j = i
            while j < n:
                node = node.get(tokens[j].text.lower())
                if node is None:
                    break
                j += 1
                for idx in node.get(None, ()):
                    entry = self.entries[idx]
                    if entry.case_sensitive and entry.tokens != tuple(
                        t.text for t in tokens[i:j]
                    ):
                        continue
                    cand = (j - i, self._tag_rank(entry.tag), idx)
                    if (
                        best is None
                        or cand[0] > best[0]
                        or (cand[0] == best[0] and cand[1:] < best[1:])
                    ):
                        best = cand
            if best is None:
                i += 1
            else:
                count, _, idx = best
                matches.append(
                    (tokens[i].begin, tokens[i + count - 1].end, self.entries[idx].tag)
                )
                i += count
        return matches


def map_entities(text: str, gazetteer: Gazetteer) -> RewriteResult:
    """Replace every gazetteer match in ``text`` with its tag."""
    return apply_replacements(text, gazetteer.match(text))
