"""Checkpoint construction for desk-scale runs.

Pre-trained BERT weights are not distributable with this package, so
``init_checkpoint`` builds a small randomly-initialized encoder over the
export's own WordPiece vocabulary and (by default) warms it up with
masked-language-model training on the export's unlabeled token sequences.
That stands in for "a pre-trained transformer" at toy scale; for real
runs, point the trainer at any directory holding genuine pre-trained
weights with a matching vocabulary.
"""

from __future__ import annotations

import json
from pathlib import Path

import torch
from transformers import BertConfig, BertForMaskedLM

from .data import ExportBundle, load_export
from .errors import CompatibilityError

MASK_TOKEN = "[MASK]"
#: Special tokens assumed non-content for masking purposes.
NON_CONTENT = ("[PAD]", "[UNK]", "[CLS]", "[SEP]", MASK_TOKEN)


def _mlm_warmup(model, bundle: ExportBundle, mask_id: int, special_ids: set[int],
                steps: int, lr: float, mask_rate: float, batch_size: int,
                generator: torch.Generator) -> list[float]:
    optimizer = torch.optim.AdamW(model.parameters(), lr=lr)
    special = torch.zeros_like(bundle.input_ids, dtype=torch.bool)
    for sid in special_ids:
        special |= bundle.input_ids == sid
    n = len(bundle)
    losses = []
    model.train()
    for _ in range(steps):
        batch = torch.randperm(n, generator=generator)[:batch_size]
        ids = bundle.input_ids[batch].clone()
        attention = bundle.attention_mask[batch]
        maskable = (attention == 1) & ~special[batch]
        chosen = maskable & (torch.rand(ids.shape, generator=generator) < mask_rate)
        labels = torch.where(chosen, bundle.input_ids[batch], torch.tensor(-100))
        ids[chosen] = mask_id
        out = model(input_ids=ids, attention_mask=attention, labels=labels)
        out.loss.backward()
        optimizer.step()
        optimizer.zero_grad()
        losses.append(float(out.loss.item()))
    return losses


def init_checkpoint(
    export_dir,
    out_dir,
    *,
    hidden_size: int = 128,
    num_layers: int = 2,
    num_heads: int = 2,
    intermediate_size: int = 256,
    mlm_steps: int = 600,
    mlm_lr: float = 1e-3,
    mlm_mask_rate: float = 0.30,
    mlm_batch_size: int = 32,
    seed: int = 0,
) -> Path:
    """Create (and optionally MLM-warm) a base checkpoint for an export.

    The checkpoint directory carries the vocabulary and its fingerprint so
    later training runs can verify compatibility.  Pass ``mlm_steps=0`` to
    skip warm-up entirely.
    """
    bundle = load_export(export_dir)
    if bundle.vocab_tokens is None:
        raise CompatibilityError(f"{export_dir} has no vocab.txt; cannot build a checkpoint")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    token_ids = {tok: i for i, tok in enumerate(bundle.vocab_tokens)}
    pad_id = token_ids.get("[PAD]", 0)

    torch.manual_seed(seed)
    config = BertConfig(
        vocab_size=len(bundle.vocab_tokens),
        hidden_size=hidden_size,
        num_hidden_layers=num_layers,
        num_attention_heads=num_heads,
        intermediate_size=intermediate_size,
        max_position_embeddings=int(bundle.manifest["max_len"]),
        pad_token_id=pad_id,
    )
    model = BertForMaskedLM(config)

    mlm_losses: list[float] = []
    if mlm_steps > 0 and len(bundle) > 0:
        if MASK_TOKEN not in token_ids:
            raise CompatibilityError(
                f"vocabulary has no {MASK_TOKEN} token; rerun with mlm_steps=0"
            )
        generator = torch.Generator().manual_seed(seed)
        special_ids = {token_ids[t] for t in NON_CONTENT if t in token_ids}
        mlm_losses = _mlm_warmup(
            model,
            bundle,
            token_ids[MASK_TOKEN],
            special_ids,
            steps=mlm_steps,
            lr=mlm_lr,
            mask_rate=mlm_mask_rate,
            batch_size=mlm_batch_size,
            generator=generator,
        )

    model.save_pretrained(out_dir)
    vocab_file = Path(export_dir) / bundle.manifest.get("vocab_file", "vocab.txt")
    (out_dir / "vocab.txt").write_bytes(vocab_file.read_bytes())
    meta = {
        "vocab_sha256": bundle.vocab_sha256,
        "vocab_size": len(bundle.vocab_tokens),
        "mlm_steps": mlm_steps,
        "mlm_final_loss": mlm_losses[-1] if mlm_losses else None,
        "seed": seed,
    }
    (out_dir / "finetune_meta.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return out_dir
