"""Tokenization, vocabulary fitting, and L2-normalized TF-IDF vectors.

Weights follow the smoothed formula tf * (ln((1+n)/(1+df)) + 1) with each
row scaled to unit Euclidean norm (zero rows are left alone).  Column
order is lexicographic over terms so runs are reproducible.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyVocabularyError, FormatError, ShapeError

# Maximal runs of >= 2 word characters; single-character tokens drop out.
_TOKEN_RE = re.compile(r"\w\w+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Split into word tokens of length >= 2; casing is left untouched."""
    return _TOKEN_RE.findall(text)


def ngrams(tokens, ngram_range=(1, 1)) -> list[str]:
    """Expand a token list into space-joined n-grams for the given range."""
    lo, hi = ngram_range
    if lo < 1 or hi < lo:
        raise ValueError(f"bad ngram range: {ngram_range}")
    if (lo, hi) == (1, 1):
        return list(tokens)
    tokens = list(tokens)
    out = []
    for n in range(lo, hi + 1):
        out.extend(" ".join(tokens[i : i + n]) for i in range(len(tokens) - n + 1))
    return out


@dataclass(frozen=True)
class Vocabulary:
    """Fitted term index with document frequencies."""

    index: dict[str, int]
    document_frequencies: dict[str, int]
    n_docs: int
    ngram_range: tuple[int, int] = (1, 1)

    def __len__(self) -> int:
        return len(self.index)

    def idf(self, term: str) -> float:
        df = self.document_frequencies[term]
        return math.log((1 + self.n_docs) / (1 + df)) + 1.0


class SparseMatrix:
    """CSR rows of (column, value) pairs; no explicit zeros stored."""

    def __init__(self, n_rows, n_cols, indptr, indices, data):
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.data = np.asarray(data, dtype=np.float64)
        if len(self.indptr) != n_rows + 1:
            raise ShapeError("indptr length must be n_rows + 1")
        if not np.all(np.isfinite(self.data)):
            raise ShapeError("matrix values must be finite")
        if np.any(self.data == 0.0):
            raise ShapeError("explicit zeros are not allowed")
        for r in range(n_rows):
            idx = self.indices[self.indptr[r] : self.indptr[r + 1]]
            if len(idx) and (
                np.any(np.diff(idx) <= 0) or idx[0] < 0 or idx[-1] >= n_cols
            ):
                raise ShapeError(f"row {r}: indices must be strictly increasing and in range")
        # Row id of every stored value, for vectorized products.
        self._row_ids = np.repeat(np.arange(n_rows), np.diff(self.indptr))

    @classmethod
    def from_rows(cls, rows, n_cols: int) -> "SparseMatrix":
        """Build from an iterable of [(column, value), ...] rows."""
        indptr = [0]
        indices: list[int] = []
        data: list[float] = []
        for row in rows:
            for col, val in sorted(row):
                if val != 0.0:
                    indices.append(col)
                    data.append(float(val))
            indptr.append(len(indices))
        return cls(len(indptr) - 1, n_cols, indptr, indices, data)

    def row(self, r: int) -> tuple[np.ndarray, np.ndarray]:
        sl = slice(self.indptr[r], self.indptr[r + 1])
        return self.indices[sl], self.data[sl]

    def matvec(self, w: np.ndarray) -> np.ndarray:
        """X @ w for a dense vector w of length n_cols."""
        if len(w) != self.n_cols:
            raise ShapeError(f"matvec: expected length {self.n_cols}, got {len(w)}")
        return np.bincount(
            self._row_ids, weights=self.data * w[self.indices], minlength=self.n_rows
        )

    def rmatvec(self, v: np.ndarray) -> np.ndarray:
        """X.T @ v for a dense vector v of length n_rows."""
        if len(v) != self.n_rows:
            raise ShapeError(f"rmatvec: expected length {self.n_rows}, got {len(v)}")
        return np.bincount(
            self.indices, weights=self.data * v[self._row_ids], minlength=self.n_cols
        )

    def with_bias_column(self) -> "SparseMatrix":
        """Append a constant 1.0 column (used for unpenalized intercepts)."""
        nnz = len(self.data)
        indptr = self.indptr + np.arange(self.n_rows + 1)
        indices = np.empty(nnz + self.n_rows, dtype=np.int64)
        data = np.empty(nnz + self.n_rows, dtype=np.float64)
        for r in range(self.n_rows):
            lo, hi = self.indptr[r], self.indptr[r + 1]
            indices[indptr[r] : indptr[r + 1] - 1] = self.indices[lo:hi]
            data[indptr[r] : indptr[r + 1] - 1] = self.data[lo:hi]
            indices[indptr[r + 1] - 1] = self.n_cols
            data[indptr[r + 1] - 1] = 1.0
        return SparseMatrix(self.n_rows, self.n_cols + 1, indptr, indices, data)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols))
        for r in range(self.n_rows):
            idx, val = self.row(r)
            out[r, idx] = val
        return out


def fit_vocab(docs, ngram_range=(1, 1)) -> Vocabulary:
    """Fit a vocabulary over tokenized documents.

    ``docs`` is a sequence of token lists.  Raises EmptyVocabularyError
    when no terms are observed at all.
    """
    df: dict[str, int] = {}
    n_docs = 0
    for tokens in docs:
        n_docs += 1
        for term in set(ngrams(tokens, ngram_range)):
            df[term] = df.get(term, 0) + 1
    if not df:
        raise EmptyVocabularyError("no terms observed; cannot fit a vocabulary")
    index = {term: i for i, term in enumerate(sorted(df))}
    return Vocabulary(
        index=index, document_frequencies=df, n_docs=n_docs, ngram_range=ngram_range
    )


def tfidf_transform(docs, vocab: Vocabulary) -> SparseMatrix:
    """TF-IDF rows over a fitted vocabulary; unseen terms are ignored.

    Every nonzero row is L2-normalized; all-out-of-vocabulary documents
    yield zero rows.
    """
    idf_by_col = np.zeros(len(vocab))
    for term, col in vocab.index.items():
        idf_by_col[col] = vocab.idf(term)
    rows = []
    for tokens in docs:
        counts: dict[int, float] = {}
        for term in ngrams(tokens, vocab.ngram_range):
            col = vocab.index.get(term)
            if col is not None:
                counts[col] = counts.get(col, 0.0) + 1.0
        entries = [(col, tf * idf_by_col[col]) for col, tf in counts.items()]
        norm = math.sqrt(sum(v * v for _, v in entries))
        if norm > 0.0:
            entries = [(c, v / norm) for c, v in entries]
        rows.append(entries)
    return SparseMatrix.from_rows(rows, n_cols=len(vocab))


def save_vocab(vocab: Vocabulary, path) -> None:
    """Persist as TSV: header lines for n_docs and ngram range, then term/df rows."""
    lines = [
        f"#n_docs\t{vocab.n_docs}",
        f"#ngram_range\t{vocab.ngram_range[0]}\t{vocab.ngram_range[1]}",
    ]
    for term in sorted(vocab.index):
        lines.append(f"{term}\t{vocab.document_frequencies[term]}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_vocab(path) -> Vocabulary:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if len(lines) < 2 or not lines[0].startswith("#n_docs\t"):
        raise FormatError(f"{path}: missing #n_docs header")
    n_docs = int(lines[0].split("\t")[1])
    parts = lines[1].split("\t")
    if parts[0] != "#ngram_range":
        raise FormatError(f"{path}: missing #ngram_range header")
    ngram_range = (int(parts[1]), int(parts[2]))
    df = {}
    for lineno, line in enumerate(lines[2:], start=3):
        cols = line.split("\t")
        if len(cols) != 2:
            raise FormatError(f"{path}:{lineno}: expected 2 columns")
        df[cols[0]] = int(cols[1])
    if not df:
        raise EmptyVocabularyError(f"{path}: empty vocabulary file")
    index = {term: i for i, term in enumerate(sorted(df))}
    return Vocabulary(
        index=index, document_frequencies=df, n_docs=n_docs, ngram_range=ngram_range
    )
