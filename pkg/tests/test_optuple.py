import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncball.errors import DimensionError, DomainError
from ncball.fock import creation_matrix, enumerate_words
from ncball.optuple import (
    OperatorTuple,
    compressed_shift_tuple,
    cp_power_norms,
    defect_delta2,
    eval_word,
    joint_spectral_radius,
    kernel_P,
    level_defect,
    reconstruction,
    resolvent,
    row_norm,
    toeplitz_section,
    word_products,
)
from ncball.sampling import ginibre_tuple

seeds = st.integers(0, 2**32 - 1)


def _random(seed, n=2, d=2, scale=0.4):
    return ginibre_tuple(np.random.default_rng(seed), n, d).scaled(scale)


def _reconstruction_by_kron(T, m):
    trunc = enumerate_words(T.n, m)
    return sum(
        np.kron(creation_matrix(trunc, "right", i), T[i].conj().T) for i in range(1, T.n + 1)
    )


def _kernel_by_powers(T, rho, m):
    """rho I plus both one-sided series, summed as powers of the nilpotent R."""
    R = _reconstruction_by_kron(T, m)
    P = rho * np.eye(len(R), dtype=complex)
    Rk = np.eye(len(R), dtype=complex)
    for _ in range(m):
        Rk = Rk @ R
        P += Rk + Rk.conj().T
    return P


def test_shapes_are_validated():
    with pytest.raises(DimensionError):
        OperatorTuple(np.zeros((2, 2, 3)))
    with pytest.raises(DomainError):
        compressed_shift_tuple(2)[3]


def test_compressed_shift_tuple():
    T = compressed_shift_tuple(2)
    assert (T.n, T.d) == (2, 3)
    assert row_norm(T) == pytest.approx(1.0)
    for w in [(1, 1), (1, 2), (2, 1), (2, 2)]:
        assert not eval_word(T, w).any()
    assert joint_spectral_radius(T) <= 1e-12


def test_word_products_match_eval_word(rng):
    T = ginibre_tuple(rng, 2, 3)
    prods = word_products(T, 3)
    for k, w in enumerate(enumerate_words(2, 3).words):
        np.testing.assert_allclose(prods[k], eval_word(T, w), atol=1e-12)


def test_spectral_radius_of_scalars():
    T = OperatorTuple.scalars([0.3, 0.4j])
    assert joint_spectral_radius(T) == pytest.approx(0.5)
    assert row_norm(T) == pytest.approx(0.5)


@given(seeds, st.floats(0.1, 5.0))
def test_spectral_radius_is_homogeneous(seed, s):
    T = _random(seed)
    assert joint_spectral_radius(T.scaled(s)) == pytest.approx(s * joint_spectral_radius(T), rel=1e-9)


def test_cp_power_norms_of_scalars():
    a = 0.6
    norms = cp_power_norms(OperatorTuple.scalars([a]), 4)
    np.testing.assert_allclose(norms, [a ** (2 * k) for k in range(0, 5)])


@given(seeds, st.integers(1, 4))
def test_reconstruction_matches_kron_form(seed, m):
    T = _random(seed)
    np.testing.assert_array_equal(reconstruction(T, m).matrix, _reconstruction_by_kron(T, m))


@settings(max_examples=30)
@given(seeds, st.sampled_from([0.5, 1.0, 2.0]), st.integers(1, 4))
def test_kernel_matches_power_series(seed, rho, m):
    T = _random(seed)
    np.testing.assert_allclose(kernel_P(T, rho, m).matrix, _kernel_by_powers(T, rho, m), atol=1e-12)


@given(seeds, st.sampled_from([0.5, 1.0, 3.0]), st.integers(1, 4))
def test_kernel_is_rho_times_section(seed, rho, m):
    T = _random(seed)
    np.testing.assert_allclose(
        kernel_P(T, rho, m).matrix, rho * toeplitz_section(T, rho, m).matrix, atol=1e-12
    )


@given(seeds, st.sampled_from([0.5, 1.0, 2.0, 4.0]), st.integers(1, 4))
def test_level_defect_factors_the_kernel(seed, rho, m):
    T = _random(seed)
    R = reconstruction(T, m).matrix
    I_R = np.eye(len(R)) - R
    np.testing.assert_allclose(
        I_R.conj().T @ kernel_P(T, rho, m).matrix @ I_R, level_defect(T, rho, m).matrix, atol=1e-12
    )


def test_full_space_defect_differs_only_on_top_words(rng):
    T = ginibre_tuple(rng, 2, 2)
    m = 3
    diff = defect_delta2(T, 0.7, m).matrix - level_defect(T, 0.7, m).matrix
    below = T.d * (2**m - 1)
    assert not diff[:below, :].any() and not diff[:, :below].any()
    assert np.abs(diff[below:, below:]).max() > 0


def test_kernel_with_radius_parameter(rng):
    T = ginibre_tuple(rng, 2, 2)
    r = 0.6
    np.testing.assert_allclose(kernel_P(T, 1.0, 3, r).matrix, kernel_P(T.scaled(r), 1.0, 3).matrix, atol=1e-12)


def test_resolvent_inverts_identity_minus_reconstruction(rng):
    T = ginibre_tuple(rng, 2, 2)
    R = reconstruction(T, 3).matrix
    np.testing.assert_allclose(resolvent(T, 3) @ (np.eye(len(R)) - R), np.eye(len(R)), atol=1e-12)


def test_tensor_order_block_layout(rng):
    T = ginibre_tuple(rng, 2, 2)
    R = reconstruction(T, 2)
    # in C^d (x) P_m order, the block of the (e_empty -> e_1) entry is T_1^*
    Tt = R.tensor_order()
    N = 7
    np.testing.assert_allclose(Tt[np.ix_([1, N + 1], [0, N])], T[1].conj().T)
    np.testing.assert_allclose(R.block((1,), ()), T[1].conj().T)
