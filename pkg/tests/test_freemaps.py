import numpy as np
import pytest

from ncball.errors import DomainError
from ncball.freemaps import (
    NcPolyMap,
    eval_map,
    lipschitz_constant,
    rho_f,
    shift_row_norm,
    sup_norm,
    sup_norm_report,
    verify_mapping,
    von_neumann_bound,
)
from ncball.optuple import OperatorTuple, compressed_shift_tuple, joint_spectral_radius
from ncball.radii import omega
from ncball.sampling import random_contractive_map
from ncball.verify import in_ball

Z1Z2_Z1Z1 = NcPolyMap.from_terms(2, [{(1, 2): 1.0}, {(1, 1): 1.0}])


def test_terms_are_merged_and_validated():
    f = NcPolyMap.from_terms(2, [[((1,), 1.0), ((1,), 2.0), ((), 0.5)]])
    assert f.components[0] == (((), 0.5), ((1,), 3.0))
    assert f.degree == 1 and f.m == 1
    with pytest.raises(DomainError):
        NcPolyMap.from_terms(2, [{(3,): 1.0}])


def test_swap_map():
    T = OperatorTuple.from_matrices([np.diag([1.0, 2.0]), np.eye(2)])
    swapped = eval_map(NcPolyMap.from_terms(2, [{(2,): 1}, {(1,): 1}]), T)
    np.testing.assert_array_equal(swapped.mats, T.mats[::-1])


def test_sum_on_scalars():
    out = eval_map(NcPolyMap.from_terms(2, [{(1,): 1, (2,): 1}]), OperatorTuple.scalars([0.1, 0.2]))
    assert out.mats[0, 0, 0] == pytest.approx(0.3)


def test_quadratic_map_on_compressed_shifts():
    T = compressed_shift_tuple(2)
    out = eval_map(Z1Z2_Z1Z1, T)
    np.testing.assert_array_equal(out.mats[0], T[1] @ T[2])
    np.testing.assert_array_equal(out.mats[1], np.zeros((3, 3)))


def test_arity_mismatch():
    with pytest.raises(DomainError):
        eval_map(Z1Z2_Z1Z1, OperatorTuple.scalars([0.1]))


@pytest.mark.parametrize(
    "f,expected",
    [
        (NcPolyMap.from_terms(2, [{(1,): 1}]), 1.0),
        (NcPolyMap.from_terms(2, [{(1,): 1, (2,): 1}]), np.sqrt(2)),
        (Z1Z2_Z1Z1, 1.0),
        (NcPolyMap.identity(3), 1.0),
        (NcPolyMap.word_power(2, 2), 1.0),
    ],
)
def test_sup_norm_homogeneous(f, expected):
    rep = sup_norm_report(f)
    assert rep.converged
    assert rep.value == pytest.approx(expected, abs=1e-12)


def test_sup_norm_scales_with_radius():
    assert sup_norm(Z1Z2_Z1Z1, 0.5) == pytest.approx(0.25)


def test_sup_norm_non_homogeneous_is_a_lower_bound():
    rep = sup_norm_report(NcPolyMap.from_terms(1, [{(): 1, (1,): 1}]), max_dim=200)
    values = [v for _, v in rep.trace]
    assert rep.value <= 2.0
    assert values == sorted(values)


def test_restriction_norm_increases_with_level():
    comps = NcPolyMap.from_terms(2, [{(): 1, (1,): 1, (2, 1): -0.5}]).components
    vals = [shift_row_norm(2, comps, M) for M in range(2, 7)]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


def test_von_neumann_bound_for_one_plus_z():
    # |1 + z| peaks at 2 on the circle; restrictions approach it from below
    vals = [von_neumann_bound({(): 1, (1,): 1}, 1, 1.0, M) for M in (1, 7, 30)]
    assert vals[0] < vals[1] < vals[2] < 2.0
    assert vals[2] > 1.99


@pytest.mark.parametrize(
    "rho,a,expected", [(1.0, 0.7, 1.0), (3.0, 0.0, 3.0), (0.5, 0.0, 0.5), (2.0, 1 / 3, 3.0)]
)
def test_rho_f_values(rho, a, expected):
    assert rho_f(rho, a) == pytest.approx(expected)


def test_rho_f_below_one_moves_towards_one():
    assert 0.5 < rho_f(0.5, 0.5) < 1.0


def test_rho_f_domain():
    with pytest.raises(DomainError):
        rho_f(2.0, 1.0)
    with pytest.raises(DomainError):
        lipschitz_constant(1.0)
    assert lipschitz_constant(0.5) == pytest.approx(3.0)


def test_identity_map_passes_every_check(rng):
    T = in_ball(rng, 2, 2, 2.0, 0.8)
    rep = verify_mapping(NcPolyMap.identity(2), T, 2.0, 4)
    assert rep.passed and rep.rho_f == 2.0
    assert {c.status for c in rep.checks.values()} == {"pass"}


def test_zero_padding_preserves_membership_and_radii(rng):
    T = in_ball(rng, 2, 2, 1.0, 0.7, 3)
    f = NcPolyMap.zero_padding(2, 1)
    rep = verify_mapping(f, T, 1.0, 3)
    assert rep.passed
    assert omega(eval_map(f, T), 1.0, 3, 1e-9) == pytest.approx(omega(T, 1.0, 3, 1e-9), abs=1e-8)
    assert joint_spectral_radius(eval_map(f, T)) == pytest.approx(joint_spectral_radius(T))


def test_quadratic_map_squares_the_radius(rng):
    T = in_ball(rng, 2, 2, 1.0, 0.7, 6)
    assert omega(eval_map(Z1Z2_Z1Z1, T), 1.0, 3, 1e-9) <= 0.49 + 1e-6


def test_random_contractive_maps(rng):
    for _ in range(5):
        f = random_contractive_map(rng, 2, 2, f0_norm=0.3)
        assert f.f0_norm == pytest.approx(0.3)
        assert sup_norm(f) <= 1 + 1e-9


def test_non_contractive_map_is_reported():
    f = NcPolyMap.from_terms(2, [{(1,): 1, (2,): 1}])
    rep = verify_mapping(f, OperatorTuple.scalars([0.1, 0.1]), 1.0, 3)
    assert not rep.passed and rep.checks["contractive"].status == "fail"
