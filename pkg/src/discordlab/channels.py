"""Birkhoff weight vectors and the doubly stochastic channels they define."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, DimensionError, DomainError
from .hadamard import NORM_TOL, check_distribution, check_joint, entropy
from .permutations import PermutationTable, check_order, enumerate_reverse_lex

LOW_ENTROPY_RULES = ("clamped", "stick")


@dataclass(frozen=True)
class Channel:
    """Doubly stochastic matrix together with its generating weights.

    ``entropy`` is the entropy of ``weights`` in bits.  It is stored rather
    than recomputed because Birkhoff decompositions are not unique.
    """

    matrix: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    entropy: float

    @property
    def order(self) -> int:
        return self.matrix.shape[0]


def uniform_weights(m: int) -> np.ndarray:
    n = math.factorial(check_order(m))
    return np.full(n, 1.0 / n)


def identity_weights(m: int) -> np.ndarray:
    table = enumerate_reverse_lex(m)
    w = np.zeros(len(table))
    w[table.identity_index] = 1.0
    return w


def low_entropy_weights(m: int, rng: np.random.Generator, rule: str = "clamped") -> np.ndarray:
    """Draw a weight vector from the low-entropy prior.

    The first weight is ``U[0,1] / m!``.  Under ``rule="clamped"`` each later
    weight is drawn from ``U[max(0, 1 - S), 1]`` where ``S`` is the running
    sum of earlier weights.  Under ``rule="stick"`` it is drawn from
    ``U[0, max(0, 1 - S)]`` instead, which breaks a unit stick and gives
    geometrically decaying weights.  The vector is normalized at the end.
    """
    n = math.factorial(check_order(m))
    if rule not in LOW_ENTROPY_RULES:
        raise DomainError(f"unknown low-entropy rule {rule!r}")
    u = rng.random(n)
    w = np.empty(n)
    w[0] = u[0] / n
    total = w[0]
    for k in range(1, n):
        rest = max(0.0, 1.0 - total)
        if rule == "clamped":
            w[k] = rest + (1.0 - rest) * u[k]
        else:
            w[k] = rest * u[k]
        total += w[k]
    s = w.sum()
    if s <= 0:
        # only reachable under "stick" with a zero first draw and a zero second draw
        w = np.zeros(n)
        w[0] = 1.0
        return w
    return w / s


def interpolate_weights(w_down, w_up, a: float) -> np.ndarray:
    """``a * w_down + (1 - a) * w_up`` renormalized to unit sum."""
    if not 0.0 <= a <= 1.0:
        raise ContractError(f"interpolation parameter {a} outside [0, 1]")
    w_down = np.asarray(w_down, dtype=float)
    w_up = np.asarray(w_up, dtype=float)
    if w_down.shape != w_up.shape:
        raise DimensionError("weight vectors differ in length")
    if a == 0.0:
        return w_up.copy()
    if a == 1.0:
        return w_down.copy()
    w = a * w_down + (1.0 - a) * w_up
    return w / w.sum()


def assemble_channel(w, table: PermutationTable | None = None) -> Channel:
    """Build ``E = sum_k w_k Pi_k`` by scattering weights into place."""
    w = check_distribution(w)
    if w.ndim != 1:
        raise DimensionError("weights must be a vector")
    if table is None:
        m = next((k for k in range(1, 9) if math.factorial(k) == w.size), None)
        if m is None:
            raise DimensionError(f"weight length {w.size} is not a factorial")
        table = enumerate_reverse_lex(m)
    if w.size != len(table):
        raise DimensionError(f"{w.size} weights for {len(table)} permutations")
    m = table.order
    mat = np.empty((m, m))
    for i in range(m):
        mat[i] = np.bincount(table.rows[:, i], weights=w, minlength=m)
    return Channel(matrix=mat, weights=w, entropy=entropy(w))


def identity_channel(m: int) -> Channel:
    return assemble_channel(identity_weights(m), enumerate_reverse_lex(m))


def twobit_channel(mu: float) -> Channel:
    """``(1 - mu) * identity + mu * swap``."""
    if not 0.0 <= mu <= 1.0:
        raise DomainError(f"mu={mu} outside [0, 1]")
    # reverse-lex order for two labels is (swap, identity)
    return assemble_channel(np.array([mu, 1.0 - mu]), enumerate_reverse_lex(2))


def is_doubly_stochastic(mat, tol: float = NORM_TOL) -> bool:
    mat = np.asarray(mat, dtype=float)
    return bool(
        mat.ndim == 2
        and mat.shape[0] == mat.shape[1]
        and (mat >= 0).all()
        and np.allclose(mat.sum(axis=0), 1.0, rtol=0, atol=tol)
        and np.allclose(mat.sum(axis=1), 1.0, rtol=0, atol=tol)
    )


def apply_channel(p, channel: Channel | np.ndarray) -> np.ndarray:
    """Bob's noisy readout: ``p @ E``; Alice's side is noiseless."""
    p = check_joint(p)
    mat = channel.matrix if isinstance(channel, Channel) else np.asarray(channel, dtype=float)
    if mat.shape != (p.shape[1], p.shape[1]):
        raise DimensionError(f"channel {mat.shape} does not act on {p.shape[1]} labels")
    return p @ mat
