"""Exception hierarchy shared across the pipeline.

Everything raised on bad data derives from PipelineError so the CLI can
map data problems to a single exit code.
"""


class PipelineError(Exception):
    """Base class for all data and usage errors raised by this package."""


class FormatError(PipelineError):
    """A file or line does not follow its documented format."""


class EncodingError(PipelineError):
    """A file is not valid UTF-8."""


class LabelError(PipelineError):
    """A label string is not one of the canonical technique labels."""


class SpanError(PipelineError):
    """A character span is inverted or falls outside its text."""


class MissingArticleError(PipelineError):
    """Annotations reference article ids with no matching article file."""

    def __init__(self, article_ids):
        self.article_ids = sorted(set(article_ids))
        super().__init__(f"no article file for ids: {', '.join(self.article_ids)}")


class EmptyListError(PipelineError):
    """A gazetteer file contains no usable entries."""


class EmptyVocabularyError(PipelineError):
    """No terms were observed when fitting a vocabulary."""


class DegenerateLabelsError(PipelineError):
    """Training data contains fewer than two distinct labels."""


class ShapeError(PipelineError):
    """Matrix/vector dimensions do not line up."""


class SplitError(PipelineError):
    """Too few instances to produce the requested split."""


class StageError(PipelineError):
    """Wraps an error raised inside a named pipeline stage."""

    def __init__(self, stage, cause):
        self.stage = stage
        super().__init__(f"[{stage}] {cause}")
