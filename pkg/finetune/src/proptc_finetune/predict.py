"""Batch inference producing the pipeline's 4-column predictions TSV.

Each output row copies the aligned gold row's article id and span and
substitutes the argmax label in column 2, preserving input order, so the
file scores directly against the gold annotations.
"""

from __future__ import annotations

import json
from pathlib import Path

import torch
from transformers import BertForSequenceClassification

from .data import load_export
from .errors import CompatibilityError, FormatError


def predict_classifier(
    model_dir,
    export_dir,
    out_path,
    *,
    batch_size: int = 64,
    device: str = "cpu",
    deterministic: bool = True,
) -> Path:
    """Write argmax predictions for every example, in input order."""
    model_dir = Path(model_dir)
    if not model_dir.is_dir():
        raise IOError(f"no model directory at {model_dir}")
    bundle = load_export(export_dir)

    labels = bundle.labels
    meta_path = model_dir / "classifier_meta.json"
    if meta_path.is_file():
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        labels = list(meta["labels"])
        manifest_sha = bundle.manifest.get("vocab_sha256")
        if manifest_sha and meta.get("vocab_sha256") not in (None, manifest_sha):
            raise CompatibilityError("model was trained over a different vocabulary")

    out_path = Path(out_path)
    if len(bundle) == 0:
        out_path.write_text("", encoding="utf-8")
        return out_path
    if not bundle.fragments:
        raise FormatError(f"{export_dir}: fragments.tsv is required to emit predictions")

    if deterministic:
        torch.use_deterministic_algorithms(True)
    model = BertForSequenceClassification.from_pretrained(model_dir)
    if model.config.num_labels != len(labels):
        raise CompatibilityError(
            f"model has {model.config.num_labels} labels, export names {len(labels)}"
        )
    model.to(device)
    model.eval()

    predicted: list[int] = []
    with torch.no_grad():
        for start in range(0, len(bundle), batch_size):
            sl = slice(start, start + batch_size)
            logits = model(
                input_ids=bundle.input_ids[sl].to(device),
                attention_mask=bundle.attention_mask[sl].to(device),
            ).logits
            predicted.extend(int(i) for i in logits.argmax(dim=1))

    lines = []
    for (article_id, _gold, begin, end), label_id in zip(bundle.fragments, predicted):
        lines.append(f"{article_id}\t{labels[label_id]}\t{begin}\t{end}")
    out_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return out_path
