"""Sequence-classification fine-tuning driven by the export manifest.

Hyperparameters come from manifest.json verbatim (batch size 32, learning
rate 2e-5, 4 epochs by default) unless explicitly overridden.  The fresh
classification head starts at zero so every run begins from uniform class
scores; all parameters then train under AdamW.  Per-epoch mean training
loss is logged and saved alongside the model.
"""

from __future__ import annotations

import json
from pathlib import Path

import torch
from transformers import BertForSequenceClassification

from .data import check_checkpoint_compatibility, load_export


def _epoch_mean_loss(model, bundle, order, batch_size, optimizer=None):
    total = 0.0
    for start in range(0, len(order), batch_size):
        batch = order[start : start + batch_size]
        out = model(
            input_ids=bundle.input_ids[batch],
            attention_mask=bundle.attention_mask[batch],
            labels=bundle.label_ids[batch],
        )
        if optimizer is not None:
            out.loss.backward()
            optimizer.step()
            optimizer.zero_grad()
        total += float(out.loss.item()) * len(batch)
    return total / len(order)


def train_classifier(
    export_dir,
    checkpoint_dir,
    out_dir,
    *,
    epochs: int | None = None,
    batch_size: int | None = None,
    learning_rate: float | None = None,
    seed: int = 0,
    device: str = "cpu",
    deterministic: bool = True,
    zero_head: bool = True,
) -> list[float]:
    """Fine-tune ``checkpoint_dir`` on an export; returns the loss curve.

    ``epochs=0`` saves the model unchanged with an empty curve.  Raises
    CompatibilityError when the checkpoint's vocabulary does not match the
    export's.
    """
    bundle = load_export(export_dir)
    check_checkpoint_compatibility(checkpoint_dir, bundle)
    manifest = bundle.manifest
    epochs = manifest["epochs"] if epochs is None else epochs
    batch_size = manifest["batch_size"] if batch_size is None else batch_size
    learning_rate = manifest["learning_rate"] if learning_rate is None else learning_rate

    if deterministic:
        torch.use_deterministic_algorithms(True)
    torch.manual_seed(seed)
    model = BertForSequenceClassification.from_pretrained(
        checkpoint_dir, num_labels=len(bundle.labels)
    )
    if zero_head:
        torch.nn.init.zeros_(model.classifier.weight)
        torch.nn.init.zeros_(model.classifier.bias)
    model.to(device)
    bundle.input_ids = bundle.input_ids.to(device)
    bundle.attention_mask = bundle.attention_mask.to(device)
    bundle.label_ids = bundle.label_ids.to(device)

    loss_curve: list[float] = []
    if epochs > 0 and len(bundle) > 0:
        optimizer = torch.optim.AdamW(model.parameters(), lr=learning_rate)
        generator = torch.Generator().manual_seed(seed)
        model.train()
        for epoch in range(epochs):
            order = torch.randperm(len(bundle), generator=generator)
            mean_loss = _epoch_mean_loss(model, bundle, order, batch_size, optimizer)
            loss_curve.append(mean_loss)
            print(f"epoch {epoch + 1}/{epochs}: mean training loss {mean_loss:.5f}")

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out_dir)
    meta = {
        "labels": bundle.labels,
        "vocab_sha256": manifest.get("vocab_sha256"),
        "vocab_size": manifest.get("vocab_size"),
        "epochs": epochs,
        "batch_size": batch_size,
        "learning_rate": learning_rate,
        "seed": seed,
        "checkpoint": str(checkpoint_dir),
    }
    (out_dir / "classifier_meta.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    (out_dir / "loss_curve.json").write_text(
        json.dumps(loss_curve) + "\n", encoding="utf-8"
    )
    return loss_curve
