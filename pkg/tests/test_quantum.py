import itertools
import math

import numpy as np
import pytest

from fiqprop.feasibility import chsh_value
from fiqprop.quantum import (DimensionError, ObservableBasis, StateVector, bipartite_behavior,
                             born_propensities, chsh_optimal_settings, computational_basis,
                             qubit_basis, random_basis, random_state, random_unitary, singlet)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def test_eigenstate():
    basis = computational_basis(4)
    for i in range(4):
        psi = StateVector(np.eye(4)[i])
        p = born_propensities(psi, basis).outcome_propensities
        assert p == tuple(float(i == k) for k in range(4))


def test_equal_superposition():
    psi = StateVector.normalized([1, 1])
    p = born_propensities(psi, computational_basis(2)).outcome_propensities
    assert p == pytest.approx((0.5, 0.5), abs=1e-12)


def test_rotated_basis_closed_form():
    psi = StateVector([math.sqrt(3) / 2, 0.5])
    plus_minus = ObservableBasis("X", [[1 / math.sqrt(2), 1 / math.sqrt(2)],
                                       [1 / math.sqrt(2), -1 / math.sqrt(2)]])
    p = born_propensities(psi, plus_minus).outcome_propensities
    # |(sqrt3 +- 1) / (2 sqrt2)|^2 = (2 +- sqrt3) / 4
    assert p[0] == pytest.approx((2 + math.sqrt(3)) / 4, abs=1e-12)
    assert p[1] == pytest.approx((2 - math.sqrt(3)) / 4, abs=1e-12)


def test_validation():
    with pytest.raises(ValueError):
        StateVector([1, 1])
    with pytest.raises(ValueError):
        ObservableBasis("bad", [[1, 0], [1, 0]])
    with pytest.raises(DimensionError):
        born_propensities(StateVector([1, 0, 0]), computational_basis(2))


def test_random_outputs_normalized_and_invariant(rng):
    for _ in range(200):
        d = int(rng.integers(2, 9))
        psi, basis = random_state(d, rng), random_basis(d, rng)
        p = np.array(born_propensities(psi, basis).outcome_propensities)
        assert abs(p.sum() - 1) <= 1e-10 and (p >= 0).all()
        U = random_unitary(d, rng)
        q = born_propensities(StateVector(U @ psi.amplitudes),
                              ObservableBasis("U", basis.vectors @ U.T)).outcome_propensities
        assert np.allclose(p, q, rtol=0, atol=1e-10)


def test_product_state_factorizes(rng):
    for _ in range(20):
        phi, chi = random_state(2, rng), random_state(3, rng)
        sa = [random_basis(2, rng) for _ in range(2)]
        sb = [random_basis(3, rng) for _ in range(3)]
        beh = bipartite_behavior(StateVector(np.kron(phi.amplitudes, chi.amplitudes)), sa, sb)
        for (x, A), (y, B) in itertools.product(enumerate(sa), enumerate(sb)):
            pa = born_propensities(phi, A).outcome_propensities
            pb = born_propensities(chi, B).outcome_propensities
            joint = beh.context(f"A{x}", f"B{y}").probs
            expected = [u * v for u in pa for v in pb]
            assert np.allclose(joint, expected, rtol=0, atol=1e-10)


def test_singlet_same_basis_anticorrelated():
    for theta in (0.0, 0.7, math.pi / 3):
        sa = [qubit_basis(theta, "a"), qubit_basis(theta + 1, "a1")]
        sb = [qubit_basis(theta, "b"), qubit_basis(theta + 2, "b1")]
        p = bipartite_behavior(singlet(), sa, sb).context("A0", "B0").probs
        assert p[0] == pytest.approx(0, abs=1e-12) and p[3] == pytest.approx(0, abs=1e-12)
        assert p[1] == pytest.approx(0.5) and p[2] == pytest.approx(0.5)


def test_tsirelson_value():
    sa, sb = chsh_optimal_settings()
    beh = bipartite_behavior(singlet(), sa, sb)
    assert abs(chsh_value(beh) - 2 * math.sqrt(2)) <= 1e-9


def test_no_signalling(rng):
    for _ in range(50):
        da, db = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        psi = random_state(da * db, rng)
        sa = [random_basis(da, rng) for _ in range(2)]
        sb = [random_basis(db, rng) for _ in range(3)]
        beh = bipartite_behavior(psi, sa, sb)
        for x in range(2):
            marginals = [np.array(beh.context(f"A{x}", f"B{y}").probs).reshape(da, db).sum(axis=1)
                         for y in range(3)]
            for m in marginals[1:]:
                assert np.allclose(m, marginals[0], rtol=0, atol=1e-10)
        for y in range(3):
            marginals = [np.array(beh.context(f"A{x}", f"B{y}").probs).reshape(da, db).sum(axis=0)
                         for x in range(2)]
            assert np.allclose(marginals[0], marginals[1], rtol=0, atol=1e-10)


def test_bipartite_errors(rng):
    sa = [computational_basis(2)] * 2
    with pytest.raises(DimensionError):
        bipartite_behavior(random_state(6, rng), sa, sa)
    with pytest.raises(ValueError):
        bipartite_behavior(random_state(4, rng), sa[:1], sa)
    big = [computational_basis(9)] * 2
    with pytest.raises(DimensionError):
        bipartite_behavior(random_state(18, rng), sa, big)
