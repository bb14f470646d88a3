import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncball.errors import DomainError
from ncball.fock import (
    creation_matrix,
    enumerate_words,
    fock_dim,
    prefix_pairs,
    reverse,
    word_index,
    word_matrix,
)


@pytest.mark.parametrize("n,m,expected", [(1, 5, 6), (2, 3, 15), (3, 2, 13), (2, 0, 1)])
def test_fock_dim(n, m, expected):
    assert fock_dim(n, m) == expected
    assert len(enumerate_words(n, m).words) == expected


def test_fock_dim_rejects_bad_input():
    with pytest.raises(DomainError):
        fock_dim(0, 3)
    with pytest.raises(DomainError):
        fock_dim(2, -1)


def test_word_order_is_length_major_lexicographic():
    words = enumerate_words(2, 2).words
    assert words == ((), (1,), (2,), (1, 1), (1, 2), (2, 1), (2, 2))


@given(st.integers(1, 4), st.integers(0, 4))
def test_word_index_is_the_enumeration_position(n, m):
    trunc = enumerate_words(n, m)
    assert [trunc.index(w) for w in trunc.words] == list(range(trunc.dim))


def test_creation_operators_have_orthogonal_ranges():
    trunc = enumerate_words(2, 3)
    below = trunc.lengths < trunc.m
    for side in ("left", "right"):
        S = [creation_matrix(trunc, side, i) for i in (1, 2)]
        for i, j in itertools.product(range(2), repeat=2):
            G = (S[i].T @ S[j])[np.ix_(below, below)]
            np.testing.assert_array_equal(G, np.eye(below.sum()) * (i == j))


def test_left_and_right_shifts_commute():
    trunc = enumerate_words(3, 3)
    for i, j in itertools.product((1, 2, 3), repeat=2):
        L, R = creation_matrix(trunc, "left", i), creation_matrix(trunc, "right", j)
        np.testing.assert_array_equal(L @ R, R @ L)


@given(st.lists(st.integers(1, 2), max_size=5), st.sampled_from(["left", "right"]))
def test_word_matrix_is_the_product_of_creation_matrices(w, side):
    trunc = enumerate_words(2, 4)
    expected = np.eye(trunc.dim)
    for letter in w:
        expected = expected @ creation_matrix(trunc, side, letter)
    np.testing.assert_array_equal(word_matrix(trunc, side, w), expected)


def test_right_word_appends_reversed_word():
    trunc = enumerate_words(2, 3)
    M = word_matrix(trunc, "right", (1, 2))
    col = M[:, trunc.index((2,))]
    assert col[trunc.index((2,) + reverse((1, 2)))] == 1.0
    assert col.sum() == 1.0


def test_prefix_pairs_factor_each_word():
    n, m = 2, 3
    words = enumerate_words(n, m).words
    b, g, s, k = prefix_pairs(n, m)
    for bi, gi, si, ki in zip(b, g, s, k):
        assert words[bi] + words[si] == words[gi]
        assert len(words[si]) == ki >= 1
    assert len(b) == sum(len(w) for w in words)


def test_word_index_rejects_bad_letters():
    with pytest.raises(DomainError):
        word_index(2, (3,))
