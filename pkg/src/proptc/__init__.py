"""Propaganda-technique classification pipeline.

Corpus ingestion, entity-tag text normalization, TF-IDF linear baselines,
micro-F1 evaluation, and transformer-ready dataset export.
"""

__version__ = "0.1.0"

from .corpus import (  # noqa: F401
    LABELS,
    Article,
    LabeledFragment,
    TechniqueLabel,
    extract_fragment,
    load_corpus,
    parse_annotations,
    parse_article,
)
from .evaluation import ScoreReport, micro_f1, split_2_1  # noqa: F401
from .gazetteer import Gazetteer, load_list, map_entities  # noqa: F401
from .pipeline import ExperimentConfig, preset_config, run_experiment  # noqa: F401
from .textprep import PreprocessConfig, preprocess, replace_urls  # noqa: F401
