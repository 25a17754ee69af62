"""Element-wise (Hadamard) tensor arithmetic and Shannon information measures.

All logarithms are base 2, so every information quantity is in bits.
Zero entries follow the usual conventions: ``0 log 0 = 0`` and ``0/0`` is a
flagged zero.  Flagged entries are carried as masked positions of a
:class:`numpy.ma.MaskedArray` and drop out of :func:`hadamard_sum`.
"""
from __future__ import annotations

import numpy as np
from scipy.special import xlogy

from .errors import ContractError, DimensionError, DomainError

NORM_TOL = 1e-12
PURITY_TOL = 1e-10

_LN2 = np.log(2.0)


def _check_same_shape(a, b):
    if np.shape(a) != np.shape(b):
        raise DimensionError(f"shape mismatch: {np.shape(a)} vs {np.shape(b)}")


def hadamard_product(a, b):
    """Element-wise product ``a ∘ b``."""
    _check_same_shape(a, b)
    if np.ma.isMaskedArray(a) or np.ma.isMaskedArray(b):
        return np.ma.multiply(a, b)
    return np.multiply(a, b)


def hadamard_sum(a, b) -> float:
    """Sum over all elements of the Hadamard product ``a ⊙ b``.

    Masked (flagged-zero) positions contribute nothing.
    """
    prod = hadamard_product(a, b)
    if np.ma.isMaskedArray(prod):
        return float(prod.filled(0.0).sum())
    return float(prod.sum())


def hadamard_log(a):
    """Element-wise base-2 logarithm with zeros flagged (masked)."""
    a = np.asarray(a, dtype=float)
    if np.any(a < 0):
        raise DomainError("logarithm of a negative entry")
    zero = a == 0
    out = np.log2(np.where(zero, 1.0, a))
    return np.ma.masked_array(out, mask=zero)


def hadamard_divide(a, b, axis: int | None = None):
    """Element-wise quotient ``a ⊘ b``.

    ``b`` may have the same shape as ``a`` or be a vector matched against
    one axis of the matrix ``a``.  With ``axis=0`` each column ``j`` of ``a``
    is divided by ``b[j]`` (the conditional ``p^{A|B}`` uses this); with
    ``axis=1`` each row ``i`` is divided by ``b[i]``.  When ``axis`` is None
    and ``b`` is a vector, the axis is inferred, preferring columns.

    ``0/0`` yields a masked entry; a nonzero over zero raises.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if b.shape != a.shape:
        if a.ndim != 2 or b.ndim != 1:
            raise DimensionError(f"cannot broadcast {b.shape} against {a.shape}")
        if axis is None:
            if b.shape[0] == a.shape[1]:
                axis = 0
            elif b.shape[0] == a.shape[0]:
                axis = 1
            else:
                raise DimensionError(f"vector of length {b.shape[0]} matches no axis of {a.shape}")
        if axis == 0:
            if b.shape[0] != a.shape[1]:
                raise DimensionError("vector length must equal the column count")
            b = np.broadcast_to(b[None, :], a.shape)
        else:
            if b.shape[0] != a.shape[0]:
                raise DimensionError("vector length must equal the row count")
            b = np.broadcast_to(b[:, None], a.shape)
    zero_den = b == 0
    if np.any(zero_den & (a != 0)):
        raise ZeroDivisionError("nonzero entry divided by zero")
    out = a / np.where(zero_den, 1.0, b)
    if np.any(zero_den):
        return np.ma.masked_array(out, mask=zero_den)
    return out


def one_norm(a) -> float:
    return float(np.abs(np.asarray(a, dtype=float)).sum())


def two_norm(a) -> float:
    """Frobenius norm; provided for completeness, never used to normalize."""
    return float(np.sqrt((np.asarray(a, dtype=float) ** 2).sum()))


def check_distribution(p, tol: float = NORM_TOL) -> np.ndarray:
    """Return ``p`` as a float array after checking nonnegativity and unit sum."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ContractError("distribution has a negative entry")
    total = p.sum()
    if abs(total - 1.0) > tol:
        raise ContractError(f"distribution sums to {total!r}, not 1")
    return p


def check_joint(p) -> np.ndarray:
    p = check_distribution(p)
    if p.ndim != 2:
        raise DimensionError("joint state must be a matrix")
    if p.shape[0] != p.shape[1]:
        raise DimensionError("Alice and Bob must have the same message size")
    return p


def versor(index: int, length: int) -> np.ndarray:
    """Probability vector with all mass on ``index``."""
    if not 0 <= index < length:
        raise DomainError(f"index {index} outside [0, {length})")
    v = np.zeros(length)
    v[index] = 1.0
    return v


def _plogp(p, axis=None):
    # sum of p log2 p with 0 log 0 = 0
    return xlogy(p, p).sum(axis=axis) / _LN2


def entropy(p) -> float:
    """Shannon entropy in bits of a probability vector or joint matrix."""
    p = check_distribution(p)
    return float(max(0.0, -_plogp(p)))


def marginal_A(p) -> np.ndarray:
    """Alice's marginal (row sums)."""
    return check_joint(p).sum(axis=1)


def marginal_B(p) -> np.ndarray:
    """Bob's marginal (column sums)."""
    return check_joint(p).sum(axis=0)


def conditional_A_given_B(p):
    """``p^{A|B}``: each column divided by Bob's marginal entry."""
    p = check_joint(p)
    return hadamard_divide(p, p.sum(axis=0), axis=0)


def conditional_B_given_A(p):
    p = check_joint(p)
    return hadamard_divide(p, p.sum(axis=1), axis=1)


def conditional_entropy_A_given_B(p) -> float:
    """``H(AB) - H(B)``, clipped at zero against round-off."""
    p = check_joint(p)
    value = _plogp(p.sum(axis=0)) - _plogp(p)
    return float(max(0.0, value))


def conditional_entropy_B_given_A(p) -> float:
    p = check_joint(p)
    value = _plogp(p.sum(axis=1)) - _plogp(p)
    return float(max(0.0, value))


def mutual_information(p) -> float:
    """``I = H(A) + H(B) - H(AB)`` in bits."""
    p = check_joint(p)
    return float(mutual_information_batch(p))


def mutual_information_hadamard(p) -> float:
    """Mutual information as ``p ⊙ log(p ⊘ p^A ⊘ p^B)``.

    Slower than :func:`mutual_information`; kept as an independent route.
    """
    p = check_joint(p)
    ratio = hadamard_divide(hadamard_divide(p, p.sum(axis=1), axis=1), p.sum(axis=0), axis=0)
    return hadamard_sum(p, hadamard_log(ratio))


def alternative_mutual_information(p) -> float:
    """``J = H(A) - H(A|B)``."""
    p = check_joint(p)
    return entropy(p.sum(axis=1)) - conditional_entropy_A_given_B(p)


def mutual_information_batch(q) -> np.ndarray:
    """Mutual information of a stack of joint matrices ``(..., M, M)``.

    No validation; this is the estimator hot path.
    """
    q = np.asarray(q, dtype=float)
    h_a = _plogp(q.sum(axis=-1), axis=-1)
    h_b = _plogp(q.sum(axis=-2), axis=-1)
    h_ab = _plogp(q.reshape(q.shape[:-2] + (-1,)), axis=-1)
    # each _plogp is a negative entropy
    return h_ab - h_a - h_b


def tv_distance(p, q) -> float:
    """Total-variation distance ``½ Σ |p - q|``."""
    _check_same_shape(p, q)
    return float(0.5 * np.abs(np.asarray(p, dtype=float) - np.asarray(q, dtype=float)).sum())


def tv_distance_batch(p, q) -> np.ndarray:
    """TV distance over the trailing two axes of broadcastable stacks."""
    return 0.5 * np.abs(p - q).sum(axis=(-2, -1))


def is_conditionally_pure(p) -> bool:
    """True iff every row and every column holds at most one nonzero entry."""
    p = check_joint(p)
    nz = p != 0
    return bool((nz.sum(axis=0) <= 1).all() and (nz.sum(axis=1) <= 1).all())
