import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from discordlab.errors import ContractError, DegenerateInputError, DomainError
from discordlab.hadamard import (
    conditional_entropy_A_given_B,
    conditional_entropy_B_given_A,
    entropy,
    is_conditionally_pure,
    mutual_information,
)
from discordlab.states import (
    StatePrior,
    interpolate_with_identity,
    quadratic_a_grid,
    sample_conditionally_pure,
    sample_random_joint,
    state_batch,
)

from . import oracles


def test_random_joint_high_entropy():
    hs = [entropy(sample_random_joint(6, np.random.default_rng(s))) for s in range(1000)]
    assert np.mean(hs) > 0.9 * math.log2(36)


def test_random_joint_valid_and_deterministic():
    a = sample_random_joint(4, np.random.default_rng(1))
    b = sample_random_joint(4, np.random.default_rng(1))
    c = sample_random_joint(4, np.random.default_rng(2))
    assert (a >= 0).all() and abs(a.sum() - 1) <= 1e-12
    assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_conditionally_pure_samples(rng):
    for _ in range(100):
        p = sample_conditionally_pure(5, rng)
        assert is_conditionally_pure(p)
        assert conditional_entropy_A_given_B(p) <= 1e-10
        assert conditional_entropy_B_given_A(p) <= 1e-10
        expected = oracles.entropy(np.diag(p))
        assert mutual_information(p) == pytest.approx(expected, abs=1e-12)
        assert 0 <= expected <= math.log2(5)


class TestInterpolation:
    def test_endpoints(self, rng):
        p = sample_random_joint(3, rng)
        assert_allclose(interpolate_with_identity(p, 1.0, 0.0), p)
        assert_allclose(interpolate_with_identity(p, 0.0, 99.0), np.eye(3) / 3)

    def test_midpoint_by_hand(self):
        p = np.full((2, 2), 0.25)
        out = interpolate_with_identity(p, 0.5, 49.5)
        diag = 0.5 * 0.25 + 49.5
        off = 0.5 * 0.25
        total = 2 * diag + 2 * off
        assert_allclose(out, [[diag / total, off / total], [off / total, diag / total]])
        assert out[0, 0] == pytest.approx(0.49874, abs=1e-5)

    def test_errors(self):
        p = np.eye(2) / 2
        with pytest.raises(DegenerateInputError):
            interpolate_with_identity(p, 0.0, 0.0)
        with pytest.raises(ContractError):
            interpolate_with_identity(p, 1.2, 1.0)
        with pytest.raises(ContractError):
            interpolate_with_identity(p, 0.5, -1.0)


class TestBatch:
    def test_default_grid(self):
        grid = quadratic_a_grid(100)
        assert grid.size == 100
        assert grid[0] == 0
        assert grid[-1] == pytest.approx((99 * 0.0101) ** 2, abs=1e-15)
        assert grid[-1] == pytest.approx(0.9998, abs=1e-4)
        assert_allclose(grid, [((k - 1) * 0.0101) ** 2 for k in range(1, 101)], atol=1e-15)
        assert (np.diff(grid) > 0).all()

    def test_small_grids(self):
        assert_array_equal(quadratic_a_grid(1), [0.0])
        assert quadratic_a_grid(20)[-1] == pytest.approx(0.9998, abs=1e-4)

    def test_batch_shape_and_validity(self, rng):
        batch = state_batch(StatePrior(), 6, rng)
        assert batch.shape == (100, 6, 6)
        assert (batch >= 0).all()
        assert_allclose(batch.sum(axis=(1, 2)), 1.0, atol=1e-12)

    def test_entropy_spread(self):
        for seed in range(20):
            batch = state_batch(StatePrior(), 6, np.random.default_rng(seed))
            hs = [entropy(p) for p in batch]
            assert max(hs) - min(hs) >= 2.0

    def test_deterministic(self):
        prior = StatePrior(kind="random", n_states=10)
        a = state_batch(prior, 4, np.random.default_rng(3))
        b = state_batch(prior, 4, np.random.default_rng(3))
        assert_array_equal(a, b)

    def test_cp_batch_stays_pure(self, rng):
        batch = state_batch(StatePrior(kind="cp"), 6, rng)
        assert all(is_conditionally_pure(p) for p in batch)

    def test_prior_validation(self):
        with pytest.raises(DomainError):
            StatePrior(kind="gaussian")
        with pytest.raises(ContractError):
            StatePrior(B=0.5)
