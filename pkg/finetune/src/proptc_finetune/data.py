"""Readers for the dataset-export file contract.

An export directory contains manifest.json (training hyperparameters,
label order, vocabulary fingerprint), examples.jsonl (one encoded example
per line with input_ids / attention_mask / label_id), fragments.tsv (the
gold 4-column rows aligned line-for-line with the examples), and
vocab.txt (the WordPiece vocabulary, one token per line).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import torch

from .errors import CompatibilityError, FormatError


@dataclass
class ExportBundle:
    manifest: dict
    input_ids: torch.Tensor
    attention_mask: torch.Tensor
    label_ids: torch.Tensor
    fragments: list[tuple[str, str, str, str]]
    vocab_tokens: list[str] | None
    vocab_sha256: str | None

    def __len__(self) -> int:
        return self.input_ids.shape[0]

    @property
    def labels(self) -> list[str]:
        return list(self.manifest["labels"])


def _read_examples(path: Path, max_len: int, n_labels: int):
    ids, masks, labels = [], [], []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
            input_ids = row["input_ids"]
            attention_mask = row["attention_mask"]
            label_id = row["label_id"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise FormatError(f"{path}:{lineno}: bad example row ({exc})") from None
        if len(input_ids) != max_len or len(attention_mask) != max_len:
            raise FormatError(f"{path}:{lineno}: row width != manifest max_len {max_len}")
        if not 0 <= label_id < n_labels:
            raise FormatError(f"{path}:{lineno}: label_id {label_id} out of range")
        ids.append(input_ids)
        masks.append(attention_mask)
        labels.append(label_id)
    shape = (len(ids), max_len)
    return (
        torch.tensor(ids, dtype=torch.long).reshape(shape),
        torch.tensor(masks, dtype=torch.long).reshape(shape),
        torch.tensor(labels, dtype=torch.long),
    )


def _read_fragments(path: Path):
    rows = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line:
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            raise FormatError(f"{path}:{lineno}: expected 4 columns")
        rows.append(tuple(cols))
    return rows


def load_export(export_dir) -> ExportBundle:
    """Read one export directory; missing optional files yield None fields."""
    export_dir = Path(export_dir)
    manifest_path = export_dir / "manifest.json"
    if not manifest_path.is_file():
        raise FileNotFoundError(f"no manifest.json under {export_dir}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    max_len = int(manifest["max_len"])
    labels = list(manifest["labels"])

    examples_path = export_dir / manifest.get("examples_file", "examples.jsonl")
    if not examples_path.is_file():
        raise FileNotFoundError(f"no examples file under {export_dir}")
    input_ids, attention_mask, label_ids = _read_examples(examples_path, max_len, len(labels))

    fragments: list = []
    fragments_path = export_dir / manifest.get("fragments_file", "fragments.tsv")
    if fragments_path.is_file():
        fragments = _read_fragments(fragments_path)
    if fragments and len(fragments) != len(label_ids):
        raise FormatError(
            f"{fragments_path}: {len(fragments)} rows but {len(label_ids)} examples"
        )

    vocab_tokens = None
    vocab_sha = None
    vocab_path = export_dir / manifest.get("vocab_file", "vocab.txt")
    if vocab_path.is_file():
        raw = vocab_path.read_bytes()
        vocab_sha = hashlib.sha256(raw).hexdigest()
        vocab_tokens = raw.decode("utf-8").splitlines()
        while vocab_tokens and vocab_tokens[-1] == "":
            vocab_tokens.pop()
        expected_sha = manifest.get("vocab_sha256")
        if expected_sha and vocab_sha != expected_sha:
            raise CompatibilityError(
                f"{vocab_path} does not match the manifest's vocab_sha256"
            )
        if manifest.get("vocab_size") and len(vocab_tokens) != manifest["vocab_size"]:
            raise CompatibilityError(
                f"{vocab_path}: {len(vocab_tokens)} tokens, manifest says "
                f"{manifest['vocab_size']}"
            )

    return ExportBundle(
        manifest=manifest,
        input_ids=input_ids,
        attention_mask=attention_mask,
        label_ids=label_ids,
        fragments=fragments,
        vocab_tokens=vocab_tokens,
        vocab_sha256=vocab_sha,
    )


def check_checkpoint_compatibility(checkpoint_dir, bundle: ExportBundle) -> None:
    """Raise CompatibilityError unless the checkpoint fits the export."""
    checkpoint_dir = Path(checkpoint_dir)
    meta_path = checkpoint_dir / "finetune_meta.json"
    manifest_sha = bundle.manifest.get("vocab_sha256")
    if meta_path.is_file():
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        if manifest_sha and meta.get("vocab_sha256") != manifest_sha:
            raise CompatibilityError(
                "checkpoint was built over a different vocabulary than this export"
            )
        if meta.get("vocab_size") != bundle.manifest.get("vocab_size"):
            raise CompatibilityError("checkpoint/export vocabulary sizes differ")
        return
    config_path = checkpoint_dir / "config.json"
    if config_path.is_file():
        config = json.loads(config_path.read_text(encoding="utf-8"))
        if config.get("vocab_size") != bundle.manifest.get("vocab_size"):
            raise CompatibilityError(
                "checkpoint config vocab_size differs from the export's vocabulary"
            )
