"""Noise-reduction preprocessing with protection for entity tags.

The recipe, applied in a fixed order: replace URLs with the token URL,
strip digits (Unicode Nd), strip punctuation (P*), strip symbols (S*),
lowercase.  Stopwords are deliberately never removed.  Uppercase entity
tags such as NATION or PERSON pass through every stage unchanged so that
entity mapping survives preprocessing.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

#: Tags that must survive preprocessing untouched.
DEFAULT_PROTECTED_TAGS = frozenset(
    {"NATION", "RELIGION", "POLITICS", "SLOGANS", "PERSON", "URL"}
)

# A URL is a whitespace-delimited token starting with scheme:// or www.
_URL_RE = re.compile(
    r"(?:^|(?<=\s))(?:[A-Za-z][A-Za-z0-9+.\-]*://|www\.)\S*",
    re.IGNORECASE,
)

# Word characters for tag boundaries: letters and digits (no underscore).
_WORD_CHAR = r"[^\W_]"


@dataclass(frozen=True)
class PreprocessConfig:
    remove_numbers: bool = True
    remove_punctuation: bool = True
    remove_symbols: bool = True
    lowercase: bool = True
    replace_urls: bool = True
    protected_tags: frozenset[str] = field(default_factory=lambda: DEFAULT_PROTECTED_TAGS)


def replace_urls(text: str) -> str:
    """Replace every URL-shaped token with the literal token ``URL``."""
    return _URL_RE.sub("URL", text)


def _tag_pattern(tags: frozenset[str]) -> re.Pattern | None:
    if not tags:
        return None
    alternatives = "|".join(re.escape(t) for t in sorted(tags, key=len, reverse=True))
    return re.compile(
        rf"(?<!{_WORD_CHAR})(?:{alternatives})(?!{_WORD_CHAR})", re.UNICODE
    )


def _scrub_segment(segment: str, config: PreprocessConfig) -> str:
    # Deleted characters become spaces so "U.S." ends up as "u s", not "us".
    out = []
    for ch in segment:
        cat = unicodedata.category(ch)
        if config.remove_numbers and cat == "Nd":
            out.append(" ")
        elif config.remove_punctuation and cat.startswith("P"):
            out.append(" ")
        elif config.remove_symbols and cat.startswith("S"):
            out.append(" ")
        else:
            out.append(ch)
    scrubbed = "".join(out)
    return scrubbed.lower() if config.lowercase else scrubbed


def preprocess(text: str, config: PreprocessConfig | None = None) -> str:
    """Apply the full preprocessing recipe; total and idempotent.

    Protected tags are shielded wherever they occur as whole words (bounded
    by non-letter/digit characters or string edges); everything else goes
    through the configured stages.  Whitespace runs produced by deletions
    collapse to single spaces and the result is trimmed.
    """
    if config is None:
        config = PreprocessConfig()
    if config.replace_urls:
        text = replace_urls(text)

    tag_re = _tag_pattern(config.protected_tags)
    if tag_re is None:
        processed = _scrub_segment(text, config)
    else:
        parts = []
        pos = 0
        for m in tag_re.finditer(text):
            parts.append(_scrub_segment(text[pos : m.start()], config))
            parts.append(m.group(0))
            pos = m.end()
        parts.append(_scrub_segment(text[pos:], config))
        processed = "".join(parts)

    return " ".join(processed.split())
