import math
import random

import numpy as np
import pytest

from proptc.errors import EmptyVocabularyError, ShapeError
from proptc.features import (
    SparseMatrix,
    fit_vocab,
    load_vocab,
    ngrams,
    save_vocab,
    tfidf_transform,
    tokenize,
)

from helpers import dense_tfidf


def test_tokenize_examples():
    assert tokenize("vote now") == ["vote", "now"]
    assert tokenize("a bc") == ["bc"]
    assert tokenize("NATION strikes") == ["NATION", "strikes"]


def test_tokenize_splits_on_non_word_chars():
    assert tokenize("anti-war u.s. 2020!") == ["anti", "war", "2020"]


def test_fit_vocab_counts():
    vocab = fit_vocab([["a", "b"], ["b", "c"]])
    assert set(vocab.index) == {"a", "b", "c"}
    assert vocab.document_frequencies == {"a": 1, "b": 2, "c": 1}
    assert vocab.n_docs == 2


def test_fit_vocab_repeated_term_counts_once_per_doc():
    vocab = fit_vocab([["x", "x", "x"]])
    assert vocab.document_frequencies == {"x": 1}
    assert vocab.n_docs == 1


def test_fit_vocab_empty_corpus():
    with pytest.raises(EmptyVocabularyError):
        fit_vocab([])
    with pytest.raises(EmptyVocabularyError):
        fit_vocab([[], []])


def test_fit_vocab_columns_lexicographic():
    vocab = fit_vocab([["zed", "apple", "mid"]])
    assert vocab.index == {"apple": 0, "mid": 1, "zed": 2}


def test_tfidf_single_term_unit_vector():
    vocab = fit_vocab([["solo"]])
    x = tfidf_transform([["solo"]], vocab)
    assert x.to_dense().tolist() == [[1.0]]


def test_tfidf_hand_computed_weights():
    vocab = fit_vocab([["a", "b"], ["b", "c"]])
    x = tfidf_transform([["a", "b"]], vocab).to_dense()[0]
    wa = math.log(3 / 2) + 1.0
    wb = math.log(3 / 3) + 1.0
    norm = math.hypot(wa, wb)
    assert x[vocab.index["a"]] == pytest.approx(wa / norm, abs=1e-12)
    assert x[vocab.index["b"]] == pytest.approx(wb / norm, abs=1e-12)
    assert x[vocab.index["c"]] == 0.0


def test_tfidf_oov_only_doc_is_zero_row():
    vocab = fit_vocab([["seen"]])
    x = tfidf_transform([["unseen", "also-unseen"]], vocab)
    assert x.to_dense().tolist() == [[0.0]]


def test_tfidf_rows_unit_norm():
    rng = random.Random(5)
    docs = [[rng.choice("abcdefg") * 2 for _ in range(rng.randint(1, 8))] for _ in range(30)]
    vocab = fit_vocab(docs)
    x = tfidf_transform(docs, vocab)
    dense = x.to_dense()
    for row in dense:
        norm = np.linalg.norm(row)
        assert norm == 0.0 or abs(norm - 1.0) <= 1e-9


def test_tfidf_matches_dense_oracle():
    rng = random.Random(123)
    terms = [f"t{i}" for i in range(20)]
    for _ in range(30):
        n_docs = rng.randint(1, 10)
        fit_docs = [
            [rng.choice(terms) for _ in range(rng.randint(0, 12))] for _ in range(n_docs)
        ]
        if not any(fit_docs):
            continue
        vocab = fit_vocab(fit_docs)
        x = tfidf_transform(fit_docs, vocab).to_dense()
        expected, oracle_terms = dense_tfidf(fit_docs, fit_docs)
        assert sorted(vocab.index) == oracle_terms
        assert np.max(np.abs(x - expected)) <= 1e-9


def test_transform_permutation_equivariant():
    docs = [["aa", "bb"], ["bb", "cc"], ["cc", "aa", "aa"]]
    vocab = fit_vocab(docs)
    forward = tfidf_transform(docs, vocab).to_dense()
    backward = tfidf_transform(docs[::-1], vocab).to_dense()
    assert np.array_equal(forward, backward[::-1])


def test_ngrams_expansion():
    assert ngrams(["a", "b", "c"], (1, 2)) == ["a", "b", "c", "a b", "b c"]
    assert ngrams(["a"], (2, 2)) == []
    vocab = fit_vocab([["to", "the", "wall"]], ngram_range=(1, 2))
    assert "the wall" in vocab.index


def test_vocab_tsv_round_trip(tmp_path):
    vocab = fit_vocab([["a", "b"], ["b", "c"]], ngram_range=(1, 2))
    path = tmp_path / "vocab.tsv"
    save_vocab(vocab, path)
    loaded = load_vocab(path)
    assert loaded.index == vocab.index
    assert loaded.document_frequencies == vocab.document_frequencies
    assert loaded.n_docs == vocab.n_docs
    assert loaded.ngram_range == vocab.ngram_range


def test_sparse_matrix_invariants():
    with pytest.raises(ShapeError):
        SparseMatrix(1, 3, [0, 2], [1, 1], [1.0, 2.0])  # repeated index
    with pytest.raises(ShapeError):
        SparseMatrix(1, 3, [0, 1], [5], [1.0])  # out of range
    with pytest.raises(ShapeError):
        SparseMatrix(1, 3, [0, 1], [0], [float("nan")])  # non-finite
    with pytest.raises(ShapeError):
        SparseMatrix(1, 3, [0, 1], [0], [0.0])  # explicit zero
    # from_rows drops zeros and sorts columns
    x = SparseMatrix.from_rows([[(2, 5.0), (0, 1.0), (1, 0.0)]], 3)
    idx, val = x.row(0)
    assert idx.tolist() == [0, 2] and val.tolist() == [1.0, 5.0]


def test_sparse_matvec_against_dense():
    rng = random.Random(77)
    for _ in range(20):
        n, d = rng.randint(1, 6), rng.randint(1, 7)
        rows = []
        for _ in range(n):
            cols = sorted(rng.sample(range(d), rng.randint(0, d)))
            rows.append([(c, rng.uniform(-2, 2) or 1.0) for c in cols])
        x = SparseMatrix.from_rows(rows, d)
        dense = x.to_dense()
        w = np.array([rng.uniform(-1, 1) for _ in range(d)])
        v = np.array([rng.uniform(-1, 1) for _ in range(n)])
        assert np.allclose(x.matvec(w), dense @ w)
        assert np.allclose(x.rmatvec(v), dense.T @ v)
        xb = x.with_bias_column()
        assert np.allclose(xb.to_dense(), np.hstack([dense, np.ones((n, 1))]))


def test_sparse_shape_errors():
    x = SparseMatrix.from_rows([[(0, 1.0)]], 2)
    with pytest.raises(ShapeError):
        x.matvec(np.zeros(3))
    with pytest.raises(ShapeError):
        x.rmatvec(np.zeros(2))
