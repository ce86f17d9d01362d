"""Command-line front end: init a checkpoint, fine-tune, predict."""

from __future__ import annotations

import argparse
import sys

from .errors import FinetuneError
from .model import init_checkpoint
from .predict import predict_classifier
from .train import train_classifier


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="proptc-finetune", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init", help="build a small MLM-warmed base checkpoint for an export")
    p.add_argument("--export", required=True, help="dataset export directory")
    p.add_argument("--out", required=True, help="checkpoint output directory")
    p.add_argument("--hidden-size", type=int, default=128)
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--heads", type=int, default=2)
    p.add_argument("--intermediate-size", type=int, default=256)
    p.add_argument("--mlm-steps", type=int, default=600, help="0 disables MLM warm-up")
    p.add_argument("--mlm-lr", type=float, default=1e-3)
    p.add_argument("--mlm-mask-rate", type=float, default=0.30)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("train", help="fine-tune a checkpoint with the manifest recipe")
    p.add_argument("--export", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--out", required=True, help="trained model output directory")
    p.add_argument("--epochs", type=int, help="override manifest epochs")
    p.add_argument("--batch-size", type=int, help="override manifest batch size")
    p.add_argument("--learning-rate", type=float, help="override manifest learning rate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--device", default="cpu")
    p.add_argument("--keep-head-init", action="store_true",
                   help="keep the random classifier init instead of zeroing it")

    p = sub.add_parser("predict", help="write a 4-column predictions TSV for an export")
    p.add_argument("--model", required=True)
    p.add_argument("--export", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--device", default="cpu")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        from transformers.utils import logging as hf_logging

        hf_logging.set_verbosity_error()
        hf_logging.disable_progress_bar()
    except Exception:
        pass
    try:
        if args.command == "init":
            out = init_checkpoint(
                args.export,
                args.out,
                hidden_size=args.hidden_size,
                num_layers=args.layers,
                num_heads=args.heads,
                intermediate_size=args.intermediate_size,
                mlm_steps=args.mlm_steps,
                mlm_lr=args.mlm_lr,
                mlm_mask_rate=args.mlm_mask_rate,
                seed=args.seed,
            )
            print(f"checkpoint written to {out}")
        elif args.command == "train":
            curve = train_classifier(
                args.export,
                args.checkpoint,
                args.out,
                epochs=args.epochs,
                batch_size=args.batch_size,
                learning_rate=args.learning_rate,
                seed=args.seed,
                device=args.device,
                zero_head=not args.keep_head_init,
            )
            print(f"trained model written to {args.out} ({len(curve)} epochs)")
        elif args.command == "predict":
            out = predict_classifier(
                args.model,
                args.export,
                args.out,
                batch_size=args.batch_size,
                device=args.device,
            )
            print(f"predictions written to {out}")
    except (FinetuneError, OSError) as exc:
        print(f"proptc-finetune: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
