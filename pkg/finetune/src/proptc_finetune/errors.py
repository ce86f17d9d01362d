class FinetuneError(Exception):
    """Base class for fine-tuning pipeline errors."""


class CompatibilityError(FinetuneError):
    """Checkpoint and export disagree (vocabulary, sizes, label count)."""


class FormatError(FinetuneError):
    """An export file does not follow its documented format."""
