"""Command-line front end.

Subcommands mirror the pipeline stages (ingest, map, preprocess, train,
predict, evaluate, export-bert) plus the composite ``run``, the synthetic
corpus generator ``synth``, and manifest replay.  Stage commands hand
fragments around as JSON lines carrying the original article coordinates
next to the (possibly rewritten) text.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from dataclasses import fields
from pathlib import Path

from .corpus import TechniqueLabel, load_corpus, parse_annotations, write_annotations
from .errors import FormatError, PipelineError
from .evaluation import micro_f1, report_text, write_report
from .features import fit_vocab, load_vocab, save_vocab, tfidf_transform, tokenize
from .linmod import TrainConfig, load_model, predict, save_model, train
from .pipeline import (
    ExperimentConfig,
    PRESETS,
    preset_config,
    run_experiment,
    run_from_manifest,
    transform_texts,
)
from .synth import make_synthetic_corpus

USAGE_ERROR, DATA_ERROR = 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _write_fragment_rows(rows, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")


def _read_fragment_rows(path) -> list[dict]:
    rows = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
            rows.append(
                {
                    "article_id": row["article_id"],
                    "label": str(row["label"]),
                    "begin": int(row["begin"]),
                    "end": int(row["end"]),
                    "text": row["text"],
                }
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"{path}:{lineno}: bad fragment row ({exc})") from None
    return rows


class _RowFragment:
    """Adapter giving dict rows the fragment attribute surface."""

    __slots__ = ("article_id", "label", "begin", "end", "text")

    def __init__(self, row):
        self.article_id = row["article_id"]
        self.label = TechniqueLabel.parse(row["label"])
        self.begin = row["begin"]
        self.end = row["end"]
        self.text = row["text"]


def _rows_from_corpus(args) -> list[dict]:
    fragments = load_corpus(args.articles, args.annotations, dedup=args.dedup)
    return [
        {
            "article_id": f.article_id,
            "label": str(f.label),
            "begin": f.begin,
            "end": f.end,
            "text": f.text,
        }
        for f in fragments
    ]


def _config_from_file(path) -> dict:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise FormatError(f"cannot read config file {path}")
    if "experiment" not in parser:
        raise FormatError(f"{path}: missing [experiment] section")
    section = parser["experiment"]
    out: dict = {}
    bool_keys = {f.name for f in fields(ExperimentConfig) if f.type == "bool"}
    int_keys = {"sgd_epochs", "ngram_min", "ngram_max", "max_len", "seed"}
    float_keys = {"ridge_alpha", "sgd_eta0", "sgd_reg"}
    for key, value in section.items():
        if key in bool_keys:
            out[key] = section.getboolean(key)
        elif key in int_keys:
            out[key] = section.getint(key)
        elif key in float_keys:
            out[key] = section.getfloat(key)
        elif key in ("lists", "entity_types"):
            out[key] = tuple(v.strip() for v in value.split(",") if v.strip())
        else:
            out[key] = value
    return out


def _add_corpus_args(sub):
    sub.add_argument("--articles", required=True, help="directory of article<id>.txt files")
    sub.add_argument("--annotations", required=True, help="4-column annotation TSV")
    sub.add_argument("--dedup", action="store_true", help="drop duplicate annotation rows")


def _add_transform_args(sub):
    sub.add_argument("--list", dest="lists", action="append", default=[],
                     metavar="TAG[=PATH] | NAME=PATH:TAG",
                     help="gazetteer list to apply; repeatable (NATION, RELIGION, "
                          "POLITICS, SLOGANS, or a named custom file with its tag)")
    sub.add_argument("--audit", help="dump gazetteer replacements to a 3-column TSV")
    sub.add_argument("--entities", help="JSON-lines NER standoff file")
    sub.add_argument("--entity-types", default="",
                     help="comma-separated entity types to map (e.g. PERSON,NORP)")
    sub.add_argument("--heuristic-ner", action="store_true",
                     help="use the built-in person heuristic when no entities file is given")
    sub.add_argument("--no-preprocess", action="store_true")
    sub.add_argument("--no-lowercase", action="store_true")
    sub.add_argument("--no-remove-numbers", action="store_true")
    sub.add_argument("--no-remove-punctuation", action="store_true")
    sub.add_argument("--no-remove-symbols", action="store_true")
    sub.add_argument("--no-replace-urls", action="store_true")
    sub.add_argument("--preprocess-before-map", action="store_true",
                     help="run preprocessing before entity mapping (default: after)")


def _transform_kwargs(args) -> dict:
    lists = []
    list_paths = {}
    for item in args.lists:
        head, sep, rest = item.partition("=")
        if sep and ":" in rest:
            # NAME=PATH:TAG form; the name is only for the reader.
            path, _, tag = rest.rpartition(":")
        else:
            tag, path = head, rest
        lists.append(tag)
        if path:
            list_paths[tag] = path
    return {
        "lists": tuple(lists),
        "list_paths": list_paths,
        "entities_path": args.entities,
        "entity_types": tuple(t.strip() for t in args.entity_types.split(",") if t.strip()),
        "heuristic_ner": args.heuristic_ner,
        "preprocess": not args.no_preprocess,
        "lowercase": not args.no_lowercase,
        "remove_numbers": not args.no_remove_numbers,
        "remove_punctuation": not args.no_remove_punctuation,
        "remove_symbols": not args.no_remove_symbols,
        "replace_urls": not args.no_replace_urls,
        "map_before_preprocess": not args.preprocess_before_map,
    }


def build_parser() -> _Parser:
    parser = _Parser(prog="proptc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic labeled corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--n-per-label", type=int, default=10)

    p = sub.add_parser("ingest", help="load a corpus and dump fragments as JSON lines")
    _add_corpus_args(p)
    p.add_argument("--out", required=True, help="output fragments .jsonl")

    p = sub.add_parser("map", help="rewrite fragment texts with entity tags")
    p.add_argument("--fragments", required=True)
    p.add_argument("--out", required=True)
    _add_transform_args(p)

    p = sub.add_parser("preprocess", help="preprocess fragment texts")
    p.add_argument("--fragments", required=True)
    p.add_argument("--out", required=True)
    _add_transform_args(p)

    p = sub.add_parser("train", help="train a linear model on fragment texts")
    p.add_argument("--fragments", required=True)
    p.add_argument("--model", required=True, help="output model TSV")
    p.add_argument("--vocab", required=True, help="output vocabulary TSV")
    p.add_argument("--algorithm", choices=("ridge", "sgd_hinge"), default="ridge")
    p.add_argument("--ridge-alpha", type=float, default=1.0)
    p.add_argument("--sgd-epochs", type=int, default=5)
    p.add_argument("--sgd-eta0", type=float, default=0.5)
    p.add_argument("--sgd-reg", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("predict", help="predict labels for fragments")
    p.add_argument("--fragments", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--out", required=True, help="output predictions TSV")

    p = sub.add_parser("evaluate", help="score predictions against gold annotations")
    p.add_argument("--gold", required=True, help="gold 4-column TSV")
    p.add_argument("--predictions", required=True, help="predicted 4-column TSV")
    p.add_argument("--report", help="optional output report TSV")

    p = sub.add_parser("export-bert", help="export transformer-ready features")
    p.add_argument("--fragments", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--wordpiece-vocab", help="one-token-per-line vocab file")
    p.add_argument("--max-len", type=int, default=128)
    p.add_argument("--checkpoint", default="bert-base-uncased")

    p = sub.add_parser("run", help="run a full experiment (or replay a manifest)")
    p.add_argument("--config", help="INI config file with an [experiment] section")
    p.add_argument("--replay", help="manifest.json from a previous run")
    p.add_argument("--preset", choices=sorted(PRESETS), help="named experiment configuration")
    p.add_argument("--articles")
    p.add_argument("--annotations")
    p.add_argument("--out")
    p.add_argument("--seed", type=int)
    p.add_argument("--algorithm", choices=("ridge", "sgd_hinge"))

    return parser


def _cmd_run(args) -> int:
    if args.replay:
        run_from_manifest(args.replay, out_dir=args.out, quiet=False)
        return 0
    overrides = {}
    if args.articles:
        overrides["articles_dir"] = args.articles
    if args.annotations:
        overrides["annotations_path"] = args.annotations
    if args.out:
        overrides["out_dir"] = args.out
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.algorithm:
        overrides["algorithm"] = args.algorithm

    base: dict = {}
    if args.config:
        base = _config_from_file(args.config)
    base.update(overrides)
    try:
        if args.preset:
            config = preset_config(args.preset, **base)
        else:
            config = ExperimentConfig(**base)
    except TypeError as exc:
        print(f"proptc run: incomplete configuration: {exc}", file=sys.stderr)
        return USAGE_ERROR
    run_experiment(config, quiet=False)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "synth":
            result = make_synthetic_corpus(args.out, seed=args.seed, n_per_label=args.n_per_label)
            print(f"wrote {result.n_fragments} fragments under {args.out}")
        elif args.command == "ingest":
            rows = _rows_from_corpus(args)
            _write_fragment_rows(rows, args.out)
            print(f"wrote {len(rows)} fragments to {args.out}")
        elif args.command in ("map", "preprocess"):
            rows = _read_fragment_rows(args.fragments)
            kwargs = _transform_kwargs(args)
            if args.command == "map":
                kwargs["preprocess"] = False
            else:
                kwargs["lists"] = ()
                kwargs["entity_types"] = ()
            config = ExperimentConfig(
                articles_dir="", annotations_path="", out_dir="", **kwargs
            )
            fragments = [_RowFragment(r) for r in rows]
            audit = [] if args.audit else None
            texts = transform_texts(fragments, config, audit=audit)
            for row, text in zip(rows, texts):
                row["text"] = text
            _write_fragment_rows(rows, args.out)
            if args.audit:
                with open(args.audit, "w", encoding="utf-8") as fh:
                    for begin, end, tag in audit:
                        fh.write(f"{begin}\t{end}\t{tag}\n")
            print(f"wrote {len(rows)} fragments to {args.out}")
        elif args.command == "train":
            rows = _read_fragment_rows(args.fragments)
            docs = [tokenize(r["text"]) for r in rows]
            vocab = fit_vocab(docs)
            x = tfidf_transform(docs, vocab)
            labels = [TechniqueLabel.parse(r["label"]) for r in rows]
            order = [l for l in TechniqueLabel if l in set(labels)]
            config = TrainConfig(
                algorithm=args.algorithm,
                ridge_alpha=args.ridge_alpha,
                sgd_epochs=args.sgd_epochs,
                sgd_eta0=args.sgd_eta0,
                sgd_reg=args.sgd_reg,
                seed=args.seed,
            )
            model = train(x, labels, config, order)
            save_model(model, args.model)
            save_vocab(vocab, args.vocab)
            print(f"trained {args.algorithm} on {len(rows)} fragments")
        elif args.command == "predict":
            rows = _read_fragment_rows(args.fragments)
            vocab = load_vocab(args.vocab)
            model = load_model(args.model, label_parser=TechniqueLabel.parse)
            x = tfidf_transform([tokenize(r["text"]) for r in rows], vocab)
            predicted = predict(model, x)
            write_annotations(
                [
                    (r["article_id"], label, r["begin"], r["end"])
                    for r, label in zip(rows, predicted)
                ],
                args.out,
            )
            print(f"wrote {len(rows)} predictions to {args.out}")
        elif args.command == "evaluate":
            gold = parse_annotations(args.gold)
            predicted = parse_annotations(args.predictions)
            if len(gold) != len(predicted):
                raise FormatError(
                    f"gold has {len(gold)} rows, predictions {len(predicted)}"
                )
            for i, (g, p) in enumerate(zip(gold, predicted), start=1):
                if (g[0], g[2], g[3]) != (p[0], p[2], p[3]):
                    raise FormatError(
                        f"row {i}: prediction refers to {p[0]}:{p[2]}-{p[3]}, "
                        f"gold to {g[0]}:{g[2]}-{g[3]}"
                    )
            score = micro_f1([g[1] for g in gold], [p[1] for p in predicted])
            print(report_text({"gold": args.gold, "predictions": args.predictions}, score))
            if args.report:
                write_report(score, args.report)
        elif args.command == "export-bert":
            rows = _read_fragment_rows(args.fragments)
            from .bertprep import export_dataset, load_wordpiece_vocab
            from .pipeline import _load_default_vocab

            if args.wordpiece_vocab:
                wp_vocab = load_wordpiece_vocab(args.wordpiece_vocab)
            else:
                wp_vocab = _load_default_vocab()
            fragments = [_RowFragment(r) for r in rows]
            export_dataset(
                fragments,
                wp_vocab,
                args.max_len,
                args.out,
                texts=[r["text"] for r in rows],
                checkpoint=args.checkpoint,
            )
            print(f"exported {len(rows)} examples to {args.out}")
        elif args.command == "run":
            return _cmd_run(args)
        else:  # pragma: no cover
            parser.error(f"unknown command {args.command}")
    except PipelineError as exc:
        print(f"proptc: {exc}", file=sys.stderr)
        return DATA_ERROR
    except OSError as exc:
        print(f"proptc: {exc}", file=sys.stderr)
        return DATA_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
