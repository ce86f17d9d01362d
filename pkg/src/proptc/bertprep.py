"""Transformer-ready dataset export: WordPiece encoding plus a manifest.

Tokenization reimplements the standard greedy longest-prefix subwording
against a one-token-per-line vocabulary, with "##" marking word-internal
continuations.  Encoded examples are framed as [CLS] + text + [SEP],
padded/truncated to a fixed length, and written as JSON lines alongside a
training manifest carrying the fine-tuning hyperparameters.
"""

from __future__ import annotations

import hashlib
import json
import unicodedata
from dataclasses import dataclass, field, asdict
from pathlib import Path

from .corpus import LABELS, write_annotations
from .errors import FormatError, LabelError

CLS, SEP, PAD, UNK = "[CLS]", "[SEP]", "[PAD]", "[UNK]"
_SPECIALS = (CLS, SEP, PAD, UNK)
_MAX_WORD_CHARS = 100


@dataclass(frozen=True)
class WordPieceVocab:
    token_to_id: dict[str, int]
    sha256: str
    raw: bytes = field(repr=False, default=b"")

    def __len__(self) -> int:
        return len(self.token_to_id)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id

    def id(self, token: str) -> int:
        return self.token_to_id[token]

    def token(self, token_id: int) -> str:
        rev = getattr(self, "_rev", None)
        if rev is None:
            rev = {i: t for t, i in self.token_to_id.items()}
            object.__setattr__(self, "_rev", rev)
        return rev[token_id]


def load_wordpiece_vocab(path) -> WordPieceVocab:
    """Load a one-token-per-line vocabulary; ids are dense line numbers."""
    raw = Path(path).read_bytes()
    tokens = raw.decode("utf-8").splitlines()
    while tokens and tokens[-1] == "":
        tokens.pop()
    mapping: dict[str, int] = {}
    for i, token in enumerate(tokens):
        if not token or token != token.strip():
            raise FormatError(f"{path}:{i + 1}: blank or padded vocab token")
        if token in mapping:
            raise FormatError(f"{path}:{i + 1}: duplicate vocab token {token!r}")
        mapping[token] = i
    for special in _SPECIALS:
        if special not in mapping:
            raise FormatError(f"{path}: vocabulary lacks required token {special}")
    return WordPieceVocab(
        token_to_id=mapping, sha256=hashlib.sha256(raw).hexdigest(), raw=raw
    )


def _is_punctuation(ch: str) -> bool:
    cp = ord(ch)
    if 33 <= cp <= 47 or 58 <= cp <= 64 or 91 <= cp <= 96 or 123 <= cp <= 126:
        return True
    return unicodedata.category(ch).startswith("P")


def _basic_split(text: str) -> list[str]:
    """Whitespace split with every punctuation character its own word."""
    words = []
    current: list[str] = []
    for ch in text:
        if ch.isspace():
            if current:
                words.append("".join(current))
                current = []
        elif _is_punctuation(ch):
            if current:
                words.append("".join(current))
                current = []
            words.append(ch)
        else:
            current.append(ch)
    if current:
        words.append("".join(current))
    return words


def wordpiece_tokenize(text: str, vocab: WordPieceVocab) -> list[str]:
    """Greedy longest-prefix subword tokenization.

    Words that cannot be decomposed (or exceed a length cap) become [UNK].
    """
    pieces = []
    for word in _basic_split(text):
        if len(word) > _MAX_WORD_CHARS:
            pieces.append(UNK)
            continue
        start = 0
        word_pieces = []
        while start < len(word):
            end = len(word)
            piece = None
            while end > start:
                candidate = word[start:end]
                if start > 0:
                    candidate = "##" + candidate
                if candidate in vocab:
                    piece = candidate
                    break
                end -= 1
            if piece is None:
                word_pieces = [UNK]
                break
            word_pieces.append(piece)
            start = end
        pieces.extend(word_pieces)
    return pieces


@dataclass(frozen=True)
class EncodedExample:
    input_ids: list[int]
    attention_mask: list[int]
    label_id: int


def encode(text: str, label, vocab: WordPieceVocab, max_len: int, label_order=LABELS) -> EncodedExample:
    """Frame one fragment as [CLS] + tokens + [SEP], padded to max_len."""
    if max_len < 3:
        raise ValueError("max_len must be >= 3")
    label_ids = {l: i for i, l in enumerate(label_order)}
    if label not in label_ids:
        raise LabelError(f"label {label!r} not in label order")
    tokens = wordpiece_tokenize(text, vocab)[: max_len - 2]
    ids = [vocab.id(CLS)] + [vocab.id(t) for t in tokens] + [vocab.id(SEP)]
    mask = [1] * len(ids)
    pad = max_len - len(ids)
    ids.extend([vocab.id(PAD)] * pad)
    mask.extend([0] * pad)
    return EncodedExample(input_ids=ids, attention_mask=mask, label_id=label_ids[label])


def decode(input_ids, vocab: WordPieceVocab) -> list[str]:
    """Tokens between [CLS] and [SEP]; inverse of the id mapping."""
    tokens = []
    for token_id in input_ids:
        token = vocab.token(token_id)
        if token == CLS:
            continue
        if token in (SEP, PAD):
            break
        tokens.append(token)
    return tokens


@dataclass(frozen=True)
class FinetuneManifest:
    """Training contract for the downstream fine-tuning component."""

    batch_size: int = 32
    learning_rate: float = 2e-5
    epochs: int = 4
    max_len: int = 128
    labels: tuple[str, ...] = field(default_factory=lambda: tuple(str(l) for l in LABELS))
    checkpoint: str = "bert-base-uncased"
    vocab_size: int = 0
    vocab_sha256: str = ""
    examples_file: str = "examples.jsonl"
    fragments_file: str = "fragments.tsv"
    vocab_file: str = "vocab.txt"

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def export_dataset(fragments, vocab: WordPieceVocab, max_len: int, out_dir,
                   texts=None, checkpoint: str = "bert-base-uncased") -> FinetuneManifest:
    """Write examples.jsonl, fragments.tsv, and manifest.json to out_dir.

    ``texts`` optionally overrides each fragment's text (e.g. after entity
    mapping) while fragments.tsv keeps the original gold rows, aligned
    line-for-line with examples.jsonl.  Output is deterministic.
    """
    fragments = list(fragments)
    if not fragments:
        raise ValueError("cannot export an empty fragment list")
    if texts is None:
        texts = [f.text for f in fragments]
    if len(texts) != len(fragments):
        raise ValueError("texts must align with fragments")

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    label_order = tuple(LABELS)

    lines = []
    for fragment, text in zip(fragments, texts):
        example = encode(text, fragment.label, vocab, max_len, label_order)
        lines.append(
            json.dumps(
                {
                    "input_ids": example.input_ids,
                    "attention_mask": example.attention_mask,
                    "label_id": example.label_id,
                },
                separators=(",", ":"),
            )
        )
    manifest = FinetuneManifest(
        max_len=max_len,
        labels=tuple(str(l) for l in label_order),
        checkpoint=checkpoint,
        vocab_size=len(vocab),
        vocab_sha256=vocab.sha256,
    )
    (out_dir / manifest.examples_file).write_text("\n".join(lines) + "\n", encoding="utf-8")
    write_annotations(
        [(f.article_id, f.label, f.begin, f.end) for f in fragments],
        out_dir / manifest.fragments_file,
    )
    # Ship the vocabulary verbatim so downstream training is self-contained.
    (out_dir / manifest.vocab_file).write_bytes(vocab.raw)
    (out_dir / "manifest.json").write_text(manifest.to_json(), encoding="utf-8")
    return manifest
