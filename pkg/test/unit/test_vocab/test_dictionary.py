import numpy as np
import pytest

from bofdb import Dictionary, DimensionMismatch, assign_word, assign_words, sse


def test_assign_exact_centre():
    rng = np.random.default_rng(0)
    d = Dictionary(rng.uniform(size=(5, 128)))

    for j in range(5):
        assert assign_word(d, d.values[j]) == j


def test_assign_closer_to_zero():
    d = Dictionary(np.stack([np.zeros(128), np.ones(128)]))

    assert assign_word(d, np.full(128, 0.4)) == 0


def test_tie_goes_to_lowest_index():
    centres = np.zeros((4, 2))
    centres[1] = [1, 0]
    centres[3] = [-1, 0]
    centres[0] = [10, 10]
    centres[2] = [10, -10]
    d = Dictionary(centres)

    assert assign_word(d, [0, 0]) == 1


def test_assign_matches_naive_scan():
    rng = np.random.default_rng(1)
    d = Dictionary(rng.normal(size=(12, 8)))
    queries = rng.normal(size=(10000, 8))
    naive = [
        min(range(12), key=lambda j: (float(np.sum((q - d.values[j]) ** 2)), j))
        for q in queries
    ]

    assert list(assign_words(d, queries)) == naive


def test_sse_values():
    d = Dictionary([[0.0, 0.0]])

    assert sse(d, [[0.0, 2.0]]) == 4.0
    assert sse(Dictionary([[1.0, 2.0], [3.0, 4.0]]), [[1.0, 2.0], [3.0, 4.0]]) == 0.0


def test_sse_reference():
    rng = np.random.default_rng(2)
    d = Dictionary(rng.normal(size=(3, 4)))
    data = rng.normal(size=(10, 4))
    expected = sum(min(np.sum((p - c) ** 2) for c in d.values) for p in data)

    assert sse(d, data) == pytest.approx(expected, rel=1e-12)


def test_dimension_mismatch():
    d = Dictionary(np.zeros((2, 3)))

    with pytest.raises(DimensionMismatch):
        assign_word(d, np.zeros(4))


def test_non_finite_query():
    d = Dictionary(np.zeros((2, 3)))

    with pytest.raises(ValueError, match="finite"):
        assign_word(d, [np.nan, 0, 0])


def test_values_read_only():
    d = Dictionary(np.zeros((2, 3)))

    with pytest.raises(ValueError):
        d.values[0, 0] = 1.0


def test_properties():
    d = Dictionary(np.zeros((7, 128)), dictionary_id=2)

    assert d.words_count == 7
    assert d.single_word_size == 128
    assert d.dictionary_id == 2
