"""Permutations of Bob's message labels in reverse lexicographic order.

A permutation is stored as its image array ``theta`` (0-based): row ``i`` of
the permutation matrix has its single one in column ``theta[i]``.  Right
multiplication ``p @ Pi`` therefore moves input column ``i`` to output
column ``theta[i]``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CapacityError, DimensionError, DomainError

MAX_ORDER = 8


def check_order(m: int) -> int:
    if int(m) != m or m < 1:
        raise DomainError(f"message size must be a positive integer, got {m!r}")
    if m > MAX_ORDER:
        raise CapacityError(
            f"message size {m} exceeds the factorial guard {MAX_ORDER} "
            f"({m}! = {math.factorial(m)} permutations)"
        )
    return int(m)


@dataclass(frozen=True)
class PermutationTable:
    """All ``order!`` permutations, descending lexicographic order of images.

    The last row is the identity.  ``inverse[k]`` is the inverse of
    ``rows[k]``.
    """

    order: int
    rows: np.ndarray = field(repr=False)
    inverse: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return self.rows.shape[0]

    @property
    def identity_index(self) -> int:
        return len(self) - 1

    def index_of(self, perm) -> int:
        """Row index of a permutation given as an image sequence."""
        perm = np.asarray(perm)
        hits = np.flatnonzero((self.rows == perm).all(axis=1))
        if hits.size != 1:
            raise DomainError(f"{perm.tolist()} is not a permutation of order {self.order}")
        return int(hits[0])


@lru_cache(maxsize=None)
def enumerate_reverse_lex(m: int) -> PermutationTable:
    """Permutation table for ``S_m`` in reverse lexicographic order."""
    m = check_order(m)
    # itertools yields lexicographic order for a sorted input
    rows = np.array(list(itertools.permutations(range(m)))[::-1], dtype=np.intp)
    inverse = np.argsort(rows, axis=1).astype(np.intp)
    rows.setflags(write=False)
    inverse.setflags(write=False)
    return PermutationTable(order=m, rows=rows, inverse=inverse)


def _as_perm(sigma) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=np.intp)
    if sigma.ndim != 1 or not np.array_equal(np.sort(sigma), np.arange(sigma.size)):
        raise DomainError(f"not a permutation: {sigma.tolist()}")
    return sigma


def inverse_permutation(sigma) -> np.ndarray:
    return np.argsort(_as_perm(sigma))


def compose(sigma, tau) -> np.ndarray:
    """``sigma ∘ tau``: apply ``tau`` first, then ``sigma``."""
    sigma, tau = _as_perm(sigma), _as_perm(tau)
    return sigma[tau]


def permute_columns(p, sigma) -> np.ndarray:
    """Right multiplication ``p @ Pi_sigma`` as a column relabeling."""
    p = np.asarray(p)
    sigma = _as_perm(sigma)
    if p.shape[-1] != sigma.size:
        raise DimensionError(f"{p.shape[-1]} columns vs permutation of order {sigma.size}")
    out = np.empty_like(p)
    out[..., sigma] = p
    return out


def permutation_matrix(sigma) -> np.ndarray:
    sigma = _as_perm(sigma)
    mat = np.zeros((sigma.size, sigma.size), dtype=np.int64)
    mat[np.arange(sigma.size), sigma] = 1
    return mat
