"""End-to-end experiment orchestration with replayable manifests.

A run loads the corpus, optionally rewrites fragment texts (person tags
first, then gazetteer tags), optionally preprocesses, splits 2:1, fits
TF-IDF on the training side, trains a linear baseline, and scores the dev
side; in export mode it instead writes transformer-ready datasets for
both sides.  Every run records a manifest (resolved config, seed, list
checksums) sufficient to reproduce its outputs byte-for-byte.
"""

from __future__ import annotations

import hashlib
import json
from contextlib import contextmanager
from dataclasses import dataclass, field, asdict, replace
from importlib import resources
from pathlib import Path

from . import __version__
from .bertprep import export_dataset, load_wordpiece_vocab
from .corpus import LABELS, load_corpus, write_annotations
from .errors import PipelineError, StageError
from .evaluation import ScoreReport, micro_f1, report_text, split_2_1, write_report
from .features import fit_vocab, save_vocab, tfidf_transform, tokenize
from .gazetteer import STANDARD_LISTS, Gazetteer, load_list, map_entities
from .linmod import TrainConfig, predict, save_model, train
from .nermap import apply_person_tags, heuristic_person_tagger, ingest_entities
from .textprep import DEFAULT_PROTECTED_TAGS, PreprocessConfig, preprocess

ALL_LIST_TAGS = tuple(STANDARD_LISTS)
VARIOUS_ENTITY_TYPES = ("PERSON", "NORP", "ORG", "GPE", "LOC", "FAC")


@dataclass(frozen=True)
class ExperimentConfig:
    articles_dir: str
    annotations_path: str
    out_dir: str
    name: str = "experiment"
    mode: str = "linear"  # "linear" trains/scores; "export" writes BERT data
    lists: tuple[str, ...] = ()
    list_paths: dict[str, str] = field(default_factory=dict)
    entities_path: str | None = None
    entity_types: tuple[str, ...] = ()
    heuristic_ner: bool = False
    map_before_preprocess: bool = True
    preprocess: bool = True
    remove_numbers: bool = True
    remove_punctuation: bool = True
    remove_symbols: bool = True
    lowercase: bool = True
    replace_urls: bool = True
    dedup: bool = False
    algorithm: str = "ridge"
    ridge_alpha: float = 1.0
    sgd_epochs: int = 5
    sgd_eta0: float = 0.5
    sgd_reg: float = 1e-4
    ngram_min: int = 1
    ngram_max: int = 1
    max_len: int = 128
    wordpiece_vocab: str | None = None
    checkpoint: str = "bert-base-uncased"
    seed: int = 0


#: Named configurations, one per reported experiment row.
PRESETS: dict[str, dict] = {
    # Linear baseline rows.
    "baseline": {},
    "nation": {"lists": ("NATION",)},
    "religion": {"lists": ("RELIGION",)},
    "politics": {"lists": ("POLITICS",)},
    "slogans": {"lists": ("SLOGANS",)},
    "combined-lists": {"lists": ALL_LIST_TAGS},
    "person": {"entity_types": ("PERSON",), "heuristic_ner": True},
    "various-entities": {"entity_types": VARIOUS_ENTITY_TYPES, "heuristic_ner": True},
    # Transformer dataset rows.
    "bert-raw": {"mode": "export", "preprocess": False},
    "bert-preprocessed": {"mode": "export", "preprocess": True},
    "bert-various-entities": {
        "mode": "export",
        "preprocess": False,
        "entity_types": VARIOUS_ENTITY_TYPES,
        "heuristic_ner": True,
    },
    "bert-entity-person": {
        "mode": "export",
        "preprocess": False,
        "entity_types": ("PERSON",),
        "heuristic_ner": True,
    },
    "bert-entity-person-preprocessed": {
        "mode": "export",
        "preprocess": True,
        "entity_types": ("PERSON",),
        "heuristic_ner": True,
    },
    "bert-lists": {"mode": "export", "preprocess": False, "lists": ALL_LIST_TAGS},
    "bert-lists-preprocessed": {
        "mode": "export",
        "preprocess": True,
        "lists": ALL_LIST_TAGS,
    },
}


def preset_config(name: str, **kwargs) -> ExperimentConfig:
    """Instantiate a named preset; extra kwargs override its fields."""
    if name not in PRESETS:
        raise PipelineError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}")
    merged = dict(PRESETS[name])
    merged["name"] = name
    merged.update(kwargs)
    return ExperimentConfig(**merged)


@contextmanager
def _stage(name: str):
    try:
        yield
    except StageError:
        raise
    except PipelineError as exc:
        raise StageError(name, exc) from exc


def _load_default_vocab():
    ref = resources.files("proptc.data") / "wordpiece_vocab.txt"
    with resources.as_file(ref) as path:
        return load_wordpiece_vocab(path)


def _load_tag_list(config: ExperimentConfig, tag: str):
    if tag in config.list_paths:
        return load_list(config.list_paths[tag], tag)
    ref = resources.files("proptc.data.lists") / STANDARD_LISTS[tag]
    with resources.as_file(ref) as path:
        return load_list(path, tag)


def _list_checksum(config: ExperimentConfig, tag: str) -> str:
    if tag in config.list_paths:
        return _sha256_file(Path(config.list_paths[tag]))
    ref = resources.files("proptc.data.lists") / STANDARD_LISTS[tag]
    return hashlib.sha256(ref.read_bytes()).hexdigest()


def _build_gazetteer(config: ExperimentConfig, tags) -> Gazetteer:
    entries = []
    for tag in tags:
        entries.extend(_load_tag_list(config, tag))
    return Gazetteer(entries)


def _fragment_entities(fragment, entities_by_doc):
    """Entities of one fragment, shifted into fragment-local coordinates."""
    local = []
    for ann in entities_by_doc.get(fragment.article_id, ()):
        if ann.begin >= fragment.begin and ann.end <= fragment.end:
            local.append(
                replace(
                    ann,
                    begin=ann.begin - fragment.begin,
                    end=ann.end - fragment.begin,
                )
            )
    return local


def transform_texts(fragments, config: ExperimentConfig, audit: list | None = None) -> list[str]:
    """Apply the configured rewriting and preprocessing to fragment texts.

    When ``audit`` is a list, every gazetteer replacement is appended to it
    as a (begin, end, tag) triple in fragment-local coordinates.
    """
    gazetteer = None
    if config.lists:
        with _stage("gazetteer"):
            gazetteer = _build_gazetteer(config, config.lists)

    exclusion_gazetteer = None
    entities_by_doc: dict[str, list] = {}
    if config.entity_types:
        if config.entities_path:
            with _stage("ner"):
                for ann in ingest_entities(config.entities_path):
                    entities_by_doc.setdefault(ann.doc_key, []).append(ann)
        elif config.heuristic_ner:
            # The heuristic never tags spans the gazetteer would claim.
            exclusion_gazetteer = gazetteer if gazetteer is not None else Gazetteer.standard()

    pre_cfg = PreprocessConfig(
        remove_numbers=config.remove_numbers,
        remove_punctuation=config.remove_punctuation,
        remove_symbols=config.remove_symbols,
        lowercase=config.lowercase,
        replace_urls=config.replace_urls,
        protected_tags=frozenset(DEFAULT_PROTECTED_TAGS | set(config.entity_types)),
    )

    def map_stage(text: str, fragment) -> str:
        if config.entity_types:
            if config.entities_path:
                anns = _fragment_entities(fragment, entities_by_doc)
            else:
                anns = heuristic_person_tagger(text, gazetteer=exclusion_gazetteer)
            text = apply_person_tags(text, anns, frozenset(config.entity_types)).text
        if gazetteer is not None:
            rewritten = map_entities(text, gazetteer)
            if audit is not None:
                audit.extend(rewritten.replacements)
            text = rewritten.text
        return text

    texts = []
    for fragment in fragments:
        text = fragment.text
        with _stage("map"):
            if config.map_before_preprocess:
                text = map_stage(text, fragment)
        with _stage("preprocess"):
            if config.preprocess:
                text = preprocess(text, pre_cfg)
        if not config.map_before_preprocess:
            with _stage("map"):
                text = map_stage(text, fragment)
        texts.append(text)
    return texts


def _sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(config: ExperimentConfig, out_dir: Path) -> None:
    checksums = {tag: _list_checksum(config, tag) for tag in config.lists}
    manifest = {
        "proptc_version": __version__,
        "config": asdict(config),
        "list_checksums": checksums,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def run_experiment(config: ExperimentConfig, quiet: bool = True) -> ScoreReport | None:
    """Execute one experiment; returns the ScoreReport in linear mode."""
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    with _stage("load"):
        fragments = load_corpus(config.articles_dir, config.annotations_path, dedup=config.dedup)
    texts = transform_texts(fragments, config)
    pairs = list(zip(fragments, texts))

    with _stage("split"):
        train_pairs, dev_pairs = split_2_1(pairs, config.seed)

    if config.mode == "export":
        with _stage("export"):
            if config.wordpiece_vocab:
                vocab = load_wordpiece_vocab(config.wordpiece_vocab)
            else:
                vocab = _load_default_vocab()
            for side, side_pairs in (("train", train_pairs), ("dev", dev_pairs)):
                export_dataset(
                    [f for f, _ in side_pairs],
                    vocab,
                    config.max_len,
                    out_dir / side,
                    texts=[t for _, t in side_pairs],
                    checkpoint=config.checkpoint,
                )
        _write_manifest(config, out_dir)
        return None

    if config.mode != "linear":
        raise StageError("config", PipelineError(f"unknown mode {config.mode!r}"))

    with _stage("features"):
        ngram_range = (config.ngram_min, config.ngram_max)
        docs_train = [tokenize(t) for _, t in train_pairs]
        docs_dev = [tokenize(t) for _, t in dev_pairs]
        vocab = fit_vocab(docs_train, ngram_range)
        x_train = tfidf_transform(docs_train, vocab)
        x_dev = tfidf_transform(docs_dev, vocab)

    with _stage("train"):
        present = {f.label for f, _ in pairs}
        label_order = [l for l in LABELS if l in present]
        train_config = TrainConfig(
            algorithm=config.algorithm,
            ridge_alpha=config.ridge_alpha,
            sgd_epochs=config.sgd_epochs,
            sgd_eta0=config.sgd_eta0,
            sgd_reg=config.sgd_reg,
            seed=config.seed,
        )
        model = train(x_train, [f.label for f, _ in train_pairs], train_config, label_order)

    with _stage("predict"):
        predicted = predict(model, x_dev)

    with _stage("evaluate"):
        gold = [f.label for f, _ in dev_pairs]
        score = micro_f1(gold, predicted)

    write_annotations(
        [
            (f.article_id, label, f.begin, f.end)
            for (f, _), label in zip(dev_pairs, predicted)
        ],
        out_dir / "predictions.tsv",
    )
    write_report(score, out_dir / "report.tsv")
    save_model(model, out_dir / "model.tsv")
    save_vocab(vocab, out_dir / "vocab.tsv")
    _write_manifest(config, out_dir)
    if not quiet:
        print(report_text({"experiment": config.name, "seed": config.seed}, score))
    return score


def run_from_manifest(manifest_path, out_dir=None, quiet: bool = True) -> ScoreReport | None:
    """Re-run an experiment exactly as recorded in its manifest."""
    data = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
    raw = data["config"]
    raw["lists"] = tuple(raw.get("lists", ()))
    raw["entity_types"] = tuple(raw.get("entity_types", ()))
    config = ExperimentConfig(**raw)
    if out_dir is not None:
        config = replace(config, out_dir=str(out_dir))
    return run_experiment(config, quiet=quiet)
