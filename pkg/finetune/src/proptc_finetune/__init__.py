"""Transformer fine-tuning companion for proptc dataset exports.

Consumes the files-only export contract (manifest.json, examples.jsonl,
fragments.tsv, vocab.txt) and produces predictions in the pipeline's
4-column TSV format.
"""

__version__ = "0.1.0"

from .data import ExportBundle, load_export  # noqa: F401
from .errors import CompatibilityError, FinetuneError, FormatError  # noqa: F401
from .model import init_checkpoint  # noqa: F401
from .predict import predict_classifier  # noqa: F401
from .train import train_classifier  # noqa: F401
