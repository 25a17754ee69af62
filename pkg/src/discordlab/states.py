"""Random joint states from the two priors and the identity-interpolation family."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DegenerateInputError, DomainError
from .hadamard import check_joint
from .permutations import check_order

PRIOR_KINDS = ("random", "cp")
DEFAULT_B = 99.0
DEFAULT_GRID_SIZE = 100
# a grows quadratically: a_k = (k * 0.0101)^2 for k = 0..99
A_STEP = 0.0101


def quadratic_a_grid(n: int) -> np.ndarray:
    """Interpolation parameters ``a_k = (k * s)^2``, ``k = 0..n-1``.

    The step ``s`` is chosen so that ``n = 100`` gives ``s = 0.0101``.
    """
    if n < 1:
        raise ContractError("grid size must be at least 1")
    if n == 1:
        return np.zeros(1)
    step = A_STEP * (DEFAULT_GRID_SIZE - 1) / (n - 1)
    return (np.arange(n) * step) ** 2


@dataclass(frozen=True)
class StatePrior:
    kind: str = "random"
    B: float = DEFAULT_B
    n_states: int = DEFAULT_GRID_SIZE

    def __post_init__(self):
        if self.kind not in PRIOR_KINDS:
            raise DomainError(f"prior kind must be one of {PRIOR_KINDS}, got {self.kind!r}")
        if self.B < 1:
            raise ContractError("B must be at least 1")
        if self.n_states < 1:
            raise ContractError("need at least one state per batch")

    @property
    def grid(self) -> np.ndarray:
        return quadratic_a_grid(self.n_states)


def sample_random_joint(m: int, rng: np.random.Generator) -> np.ndarray:
    m = check_order(m)
    p = rng.random((m, m))
    return p / p.sum()


def sample_conditionally_pure(m: int, rng: np.random.Generator) -> np.ndarray:
    m = check_order(m)
    d = rng.random(m)
    return np.diag(d / d.sum())


def interpolate_with_identity(p, a: float, b: float) -> np.ndarray:
    """``(a p + b 1) / ||a p + b 1||_1`` with ``1`` the identity matrix."""
    p = check_joint(p)
    if not 0.0 <= a <= 1.0:
        raise ContractError(f"a={a} outside [0, 1]")
    if b < 0:
        raise ContractError(f"b={b} is negative")
    if a == 0 and b == 0:
        raise DegenerateInputError("a = b = 0 leaves nothing to normalize")
    q = a * p + b * np.eye(p.shape[0])
    return q / q.sum()


def sample_state(kind: str, m: int, rng: np.random.Generator) -> np.ndarray:
    if kind == "random":
        return sample_random_joint(m, rng)
    if kind == "cp":
        return sample_conditionally_pure(m, rng)
    raise DomainError(f"unknown prior kind {kind!r}")


def state_batch(prior: StatePrior, m: int, rng: np.random.Generator) -> np.ndarray:
    """One freshly drawn, interpolated state per grid point, stacked ``(n, m, m)``."""
    grid = prior.grid
    out = np.empty((grid.size, m, m))
    for k, a in enumerate(grid):
        p = sample_state(prior.kind, m, rng)
        out[k] = interpolate_with_identity(p, a, (1.0 - a) * prior.B)
    return out
