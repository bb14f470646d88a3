import numpy as np
import pytest

from ncball.errors import DimensionError, NotPositiveError, SingularityError
from ncball.linalg import (
    generalized_max_eig,
    hermitian_part,
    inverse,
    min_eig_hermitian,
    psd_sqrt,
    psd_tolerance,
    spectral_norm,
)


def test_spectral_norm_of_diagonal():
    assert spectral_norm(np.diag([3.0, -4.0])) == pytest.approx(4.0)


def test_hermitian_part_rejects_non_hermitian():
    with pytest.raises(DimensionError):
        hermitian_part(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_psd_sqrt_squares_back(rng):
    G = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    H = G @ G.conj().T
    S = psd_sqrt(H)
    np.testing.assert_allclose(S @ S, H, atol=1e-10)
    assert min_eig_hermitian(S) >= -psd_tolerance(spectral_norm(S))


def test_psd_sqrt_clamps_roundoff_and_rejects_negative():
    P = np.diag([1.0, -1e-14])
    np.testing.assert_allclose(psd_sqrt(P), np.diag([1.0, 0.0]))
    with pytest.raises(NotPositiveError) as exc:
        psd_sqrt(np.diag([1.0, -1e-3]))
    assert exc.value.eigenvalue == pytest.approx(-1e-3)


def test_inverse_detects_singularity():
    with pytest.raises(SingularityError):
        inverse(np.array([[1.0, 1.0], [1.0, 1.0]]))


def test_generalized_max_eig_diagonal():
    assert generalized_max_eig(np.diag([2.0, 6.0]), np.diag([1.0, 2.0])) == pytest.approx(3.0)
