"""Chamber Bessel functions: series, alternating closed form, Haar averages."""

import math

import numpy as np
import pytest

from conebessel.bessel import bessel_series
from conebessel.dunkl import (
    BMultiplicity,
    ChamberPoint,
    bessel_B_mc,
    corollary_gap,
    exp_conjugation_mc,
    harish_chandra_exact,
    hyper_0F0,
)
from conebessel.errors import (
    ConvergenceError,
    DimensionError,
    DomainError,
    IllConditionedError,
)
from conebessel.linalg import StructureParams
from conebessel.seeds import substream


def test_chamber_point_validation():
    p = ChamberPoint((2.0, 1.0, 0.0))
    assert p.q == 3
    assert p.scaled(2.0).xi == (4.0, 2.0, 0.0)
    with pytest.raises(DomainError):
        ChamberPoint((1.0, 2.0))
    with pytest.raises(DomainError):
        ChamberPoint((1.0, -0.5))
    with pytest.raises(DimensionError):
        ChamberPoint(())
    with pytest.raises(DomainError):
        p.scaled(-1.0)


def test_multiplicity_from_cone_index():
    k = BMultiplicity.from_cone_index(StructureParams(q=2, d=2, mu=6.0))
    assert (k.k1, k.k2) == (6.0 - 1.5, 1.0)
    k = BMultiplicity.from_cone_index(StructureParams(q=3, d=1, mu=4.0))
    assert (k.k1, k.k2) == (4.0 - 1.5, 0.5)
    with pytest.raises(DomainError):
        BMultiplicity(k1=-0.1, k2=0.5)
    with pytest.raises(DomainError):
        BMultiplicity(k1=1.0, k2=0.75)


def test_hyper_0f0_rank_one_is_exponential():
    # the certified tail is absolute, so compare within tail + rounding
    for a, b in ((0.5, 1.2), (-2.0, 0.7), (3.0, -1.0)):
        val, tail = hyper_0F0(2.0, [a], [b])
        assert tail <= 1e-10
        assert abs(val - math.exp(a * b)) <= tail + 1e-12


def test_hyper_0f0_symmetric_in_arguments():
    x = np.array([1.3, 0.4])
    e = np.array([0.9, 0.2])
    for alpha in (0.5, 1.0, 2.0):
        v1, _ = hyper_0F0(alpha, x, e)
        v2, _ = hyper_0F0(alpha, e, x)
        assert v1 == pytest.approx(v2, rel=1e-12)


def test_hyper_0f0_alpha_one_matches_alternating_form():
    # harish_chandra_exact is an independent route to the same number
    x2 = np.array([1.1, 0.4, 0.05])
    e2 = np.array([0.9, 0.5, 0.1])
    series, tail = hyper_0F0(1.0, -x2, e2, tol=1e-12, max_weight=60)
    exact = harish_chandra_exact(x2, e2)
    assert abs(series - exact) <= tail + 1e-10


def test_hyper_0f0_guards_and_convergence():
    with pytest.raises(DomainError):
        hyper_0F0(0.0, [1.0], [1.0])
    with pytest.raises(DimensionError):
        hyper_0F0(1.0, [1.0, 2.0], [1.0])
    with pytest.raises(DomainError):
        hyper_0F0(1.0, [1.0], [1.0], tol=0.0)
    with pytest.raises(ConvergenceError) as err:
        hyper_0F0(1.0, [30.0], [2.0], max_weight=4)
    assert err.value.achieved_bound > 0.0


def test_harish_chandra_rank_one_and_guards():
    assert harish_chandra_exact([1.7], [0.3]) == pytest.approx(math.exp(-0.51))
    with pytest.raises(IllConditionedError):
        harish_chandra_exact([1.0, 1.0 + 1e-9], [2.0, 1.0])
    with pytest.raises(DomainError):
        harish_chandra_exact(list(range(9)), list(range(9)))
    with pytest.raises(DimensionError):
        harish_chandra_exact([1.0, 2.0], [1.0])


def test_harish_chandra_sign_for_small_arguments():
    # the value is an average of exp(-<e, u x u*>) and must be positive;
    # a missing (-1)^{q(q-1)/2} prefactor would flip it for q = 2, 3
    for q in (2, 3):
        x2 = np.array([0.4 * (q - i) for i in range(q)])
        e2 = np.array([0.3 * (q - i) for i in range(q)])
        val = harish_chandra_exact(x2, e2)
        lo = math.exp(-float(np.dot(x2, e2)))  # sharpest possible alignment
        assert lo <= val <= 1.0


def test_conjugation_average_three_way_identity():
    x2 = np.array([1.4, 0.5])
    e2 = np.array([0.8, 0.2])
    exact = harish_chandra_exact(x2, e2)
    series, _ = hyper_0F0(1.0, -x2, e2, tol=1e-12, max_weight=60)
    mc, se = exp_conjugation_mc(x2, e2, 2, 60_000, substream(21, "conj", 0))
    assert series == pytest.approx(exact, abs=1e-9)
    assert abs(mc - exact) <= 5.0 * se


def test_conjugation_average_real_field_runs():
    mc, se = exp_conjugation_mc([1.0, 0.3], [0.5, 0.1], 1, 20_000, substream(21, "conj", 1))
    assert 0.0 < mc <= 1.0
    with pytest.raises(DomainError):
        exp_conjugation_mc([1.0], [1.0], 1, 1, substream(21, "conj", 2))
    with pytest.raises(DimensionError):
        exp_conjugation_mc([1.0, 2.0], [1.0], 2, 100, substream(21, "conj", 3))


def test_chamber_average_rank_one_is_deterministic():
    # u xi^2 u* = xi^2 for 1 x 1 unitaries, so every Haar sample agrees
    params = StructureParams(q=1, d=1, mu=4.0)
    xi, eta = ChamberPoint((1.1,)), ChamberPoint((0.7,))
    val, se = bessel_B_mc(xi, eta, params, 50, substream(22, "b", 0))
    want, _ = bessel_series(4.0, np.array([[0.25 * 1.1**2 * 0.7**2]]), params, tol=1e-9)
    assert se == pytest.approx(0.0, abs=1e-15)
    assert val == pytest.approx(want, rel=1e-12)


def test_chamber_average_guards():
    params = StructureParams(q=1, d=1, mu=4.0)
    xi, eta = ChamberPoint((1.0,)), ChamberPoint((1.0,))
    with pytest.raises(DimensionError):
        bessel_B_mc(ChamberPoint((1.0, 0.5)), eta, params, 10, substream(22, "b", 1))
    with pytest.raises(DomainError):
        bessel_B_mc(xi, eta, params, 1, substream(22, "b", 2))
    with pytest.raises(DomainError):
        # mu must exceed 2 rho for the integrand series
        bessel_B_mc(xi, eta, StructureParams(q=1, d=1, mu=2.0), 10, substream(22, "b", 3))


def test_corollary_gap_rank_one_reduces_to_kernel_gap():
    from conebessel.bessel import theorem1_gap

    params = StructureParams(q=1, d=1, mu=24.0)
    xi, eta = ChamberPoint((0.9,)), ChamberPoint((0.6,))
    z = 0.9**2 * 0.6**2
    gap, env = corollary_gap(24.0, params, xi, eta, 50, substream(23, "cg", 0))
    want_gap, want_env = theorem1_gap(24.0, np.array([[z]]), params)
    assert gap == pytest.approx(want_gap, abs=5e-9)
    assert env == pytest.approx(want_env, rel=1e-12)
    with pytest.raises(DomainError):
        corollary_gap(2.0, params, xi, eta, 10, substream(23, "cg", 1))
