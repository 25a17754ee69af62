"""Closed-form discord for one bit per party and the monotonicity checks.

The channel is ``(1 - mu) * identity + mu * swap``; ``alpha = 2 mu - 1``.
All logarithms are base 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import mpmath
import numpy as np
from scipy.special import xlogy

from .errors import ContractError, DomainError, SingularPointError
from .hadamard import NORM_TOL

_LN2 = np.log(2.0)


class TwoBitState(NamedTuple):
    p00: float
    p01: float
    p10: float
    p11: float

    @classmethod
    def from_matrix(cls, p) -> "TwoBitState":
        p = np.asarray(p, dtype=float)
        if p.shape != (2, 2):
            raise DomainError("two-bit state must be 2x2")
        return cls(*(float(v) for v in p.ravel()))

    def matrix(self) -> np.ndarray:
        return np.array(self, dtype=float).reshape(2, 2)

    def validate(self) -> "TwoBitState":
        if min(self) < 0 or abs(sum(self) - 1.0) > NORM_TOL:
            raise ContractError(f"not a normalized two-bit state: {tuple(self)}")
        return self


class TwoBitDerivativeParts(NamedTuple):
    gamma0: float
    gamma1: float
    w0: float
    w1: float


def _plogp(x):
    return xlogy(x, x) / _LN2


def _states(states) -> np.ndarray:
    arr = np.asarray(states, dtype=float)
    if arr.shape[-1] != 4:
        arr = arr.reshape(arr.shape[:-2] + (4,))
    return arr


def alpha_of_mu(mu):
    return 2.0 * np.asarray(mu, dtype=float) - 1.0


def mu_of_alpha(alpha):
    return (1.0 + np.asarray(alpha, dtype=float)) / 2.0


def twobit_channel_entropy(mu):
    """Binary entropy of the channel weights ``(1 - mu, mu)``."""
    mu = np.asarray(mu, dtype=float)
    if np.any((mu < 0) | (mu > 1)):
        raise DomainError("mu outside [0, 1]")
    h = -_plogp(1.0 - mu) - _plogp(mu)
    return float(h) if h.ndim == 0 else h


def twobit_discord(state, mu):
    """State discord ``I(p) - I(p E(mu))`` written out term by term.

    ``state`` is ``(p00, p01, p10, p11)`` or an array of such rows; ``mu``
    broadcasts against the leading axes.
    """
    p = _states(state)
    p00, p01, p10, p11 = np.moveaxis(p, -1, 0)
    mu = np.asarray(mu, dtype=float)
    if np.any((mu < 0) | (mu > 1)):
        raise DomainError("mu outside [0, 1]")
    nu = 1.0 - mu
    q00 = nu * p00 + mu * p01
    q01 = mu * p00 + nu * p01
    q10 = nu * p10 + mu * p11
    q11 = mu * p10 + nu * p11
    out = (
        _plogp(q00 + q10)
        + _plogp(q01 + q11)
        - _plogp(q00)
        - _plogp(q01)
        - _plogp(q10)
        - _plogp(q11)
        - _plogp(p00 + p10)
        - _plogp(p01 + p11)
        + _plogp(p00)
        + _plogp(p01)
        + _plogp(p10)
        + _plogp(p11)
    )
    return float(out) if np.ndim(out) == 0 else out


def twobit_discord_mp(state, mu):
    """:func:`twobit_discord` for one state at the current mpmath precision."""
    p00, p01, p10, p11 = (mpmath.mpf(float(v)) for v in state)
    mu = mpmath.mpf(mu)
    nu = 1 - mu

    def plogp(x):
        return x * mpmath.log(x, 2) if x > 0 else mpmath.mpf(0)

    q00 = nu * p00 + mu * p01
    q01 = mu * p00 + nu * p01
    q10 = nu * p10 + mu * p11
    q11 = mu * p10 + nu * p11
    return (
        plogp(q00 + q10) + plogp(q01 + q11)
        - plogp(q00) - plogp(q01) - plogp(q10) - plogp(q11)
        - plogp(p00 + p10) - plogp(p01 + p11)
        + plogp(p00) + plogp(p01) + plogp(p10) + plogp(p11)
    )


def derivative_parts(state) -> TwoBitDerivativeParts:
    """Row weights and row biases; a zero-weight row gets bias 0."""
    p00, p01, p10, p11 = TwoBitState(*state).validate()
    w0, w1 = p00 + p01, p10 + p11
    g0 = (p00 - p01) / w0 if w0 > 0 else 0.0
    g1 = (p10 - p11) / w1 if w1 > 0 else 0.0
    return TwoBitDerivativeParts(g0, g1, w0, w1)


def f_alpha(x, alpha):
    """``x log2((1 + alpha x) / (1 - alpha x))``."""
    x = np.asarray(x, dtype=float)
    return x * (np.log1p(alpha * x) - np.log1p(-alpha * x)) / _LN2


def ddelta_dalpha(state, alpha):
    """Exact derivative of :func:`twobit_discord` in ``alpha``.

    Equals ``½ [f(w0 g0 + w1 g1) - w0 f(g0) - w1 f(g1)]`` with ``f = f_alpha``.
    The Jensen gap of ``f`` fixes the sign: ``f`` is convex for
    ``alpha > 0`` and concave for ``alpha < 0``.
    """
    alpha = np.asarray(alpha, dtype=float)
    if np.any(np.abs(alpha) >= 1):
        raise DomainError("need |alpha| < 1")
    p = _states(state)
    p00, p01, p10, p11 = np.moveaxis(p, -1, 0)
    w0, w1 = p00 + p01, p10 + p11
    with np.errstate(invalid="ignore", divide="ignore"):
        g0 = np.where(w0 > 0, (p00 - p01) / np.where(w0 > 0, w0, 1.0), 0.0)
        g1 = np.where(w1 > 0, (p10 - p11) / np.where(w1 > 0, w1, 1.0), 0.0)
    gap = f_alpha(w0 * g0 + w1 * g1, alpha) - w0 * f_alpha(g0, alpha) - w1 * f_alpha(g1, alpha)
    out = 0.5 * gap
    return float(out) if np.ndim(out) == 0 else out


def ddelta_dmu(state, mu):
    return 2.0 * ddelta_dalpha(state, alpha_of_mu(mu))


def ddelta_dH(state, mu):
    """``dΔ/dH = (dΔ/dmu) / (log2(1 - mu) - log2(mu))``; singular at ``mu = 1/2``."""
    mu = np.asarray(mu, dtype=float)
    if np.any((mu <= 0) | (mu >= 1)):
        raise DomainError("need 0 < mu < 1")
    if np.any(mu == 0.5):
        raise SingularPointError("dΔ/dH is undefined at mu = 1/2 (maximal channel entropy)")
    out = ddelta_dmu(state, mu) / (np.log2(1.0 - mu) - np.log2(mu))
    return float(out) if np.ndim(out) == 0 else out


def g_function(y):
    """``g(y) = y artanh(y)`` on ``(-1, 1)``."""
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(y) >= 1):
        raise DomainError("need |y| < 1")
    out = y * np.arctanh(y)
    return float(out) if out.ndim == 0 else out


def g_series(y: float, terms: int) -> float:
    """Partial Maclaurin sum ``sum_{k=0}^{terms} y^(2k+2) / (2k+1)``."""
    k = np.arange(terms + 1)
    return float(np.sum(y ** (2 * k + 2) / (2 * k + 1)))


def convexity_check(grid) -> bool:
    """True if ``g`` has positive second differences on the sorted grid."""
    grid = np.sort(np.asarray(grid, dtype=float))
    if grid.size < 3:
        raise ContractError("need at least 3 grid points")
    g = g_function(grid)
    h_left = np.diff(grid)[:-1]
    h_right = np.diff(grid)[1:]
    # divided second differences handle uneven spacing
    second = ((g[2:] - g[1:-1]) / h_right - (g[1:-1] - g[:-2]) / h_left)
    return bool((second > 0).all())


def mu_grid(n: int = 99) -> np.ndarray:
    """``n`` points in (0, 1) split across both sides of 1/2, none closer to it than the first point is to 0."""
    if n < 3:
        raise ContractError("need at least 3 grid points")
    n_lo = n // 2
    n_hi = n - n_lo
    step = 0.5 / (max(n_lo, n_hi) + 1)
    lo = np.linspace(step, 0.5 - step, n_lo)
    hi = np.linspace(0.5 + step, 1.0 - step, n_hi)
    return np.concatenate([lo, hi])


def check_mu_grid(grid) -> np.ndarray:
    grid = np.sort(np.asarray(grid, dtype=float))
    if grid.size < 3:
        raise ContractError("need at least 3 grid points")
    if np.any((grid <= 0) | (grid >= 1)):
        raise DomainError("mu grid must lie strictly inside (0, 1)")
    if np.any(np.abs(grid - 0.5) < 1e-12):
        raise SingularPointError("mu grid contains the singular point 1/2")
    return grid


def _tup(row) -> tuple:
    return tuple(float(v) for v in row)


@dataclass
class Violation:
    state_index: int
    state: tuple
    mu: float
    kind: str
    value: float


@dataclass
class ScanReport:
    n_states: int
    n_mu: int
    violations: list[Violation] = field(default_factory=list)
    max_derivative_error: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.violations


def random_twobit_states(n: int, rng: np.random.Generator) -> np.ndarray:
    p = rng.random((n, 4))
    return p / p.sum(axis=1, keepdims=True)


def monotonicity_scan(states, grid, *, tol: float = 1e-12, sign_flip: bool = False) -> ScanReport:
    """Check sgn(dΔ/dα) = -sgn(α) and monotonicity of Δ on each half of (0, 1).

    ``sign_flip`` negates the analytic derivative; it exists only to prove the
    scan can fail.
    """
    grid = check_mu_grid(grid)
    states = _states(states)
    if states.ndim == 1:
        states = states[None]
    alpha = alpha_of_mu(grid)
    s = states[:, None, :]
    deriv = ddelta_dalpha(s, alpha[None, :])
    if sign_flip:
        deriv = -deriv
    delta = twobit_discord(s, grid[None, :])
    report = ScanReport(n_states=states.shape[0], n_mu=grid.size)

    # sign law: sgn(alpha) * dΔ/dα must not be positive
    bad = np.sign(alpha)[None, :] * deriv > tol
    for i, k in zip(*np.nonzero(bad)):
        report.violations.append(Violation(int(i), _tup(states[i]), float(grid[k]), "sign", float(deriv[i, k])))

    lo = grid < 0.5
    d_lo = np.diff(delta[:, lo], axis=1)
    d_hi = np.diff(delta[:, ~lo], axis=1)
    mu_lo, mu_hi = grid[lo], grid[~lo]
    for i, k in zip(*np.nonzero(d_lo < -tol)):
        report.violations.append(Violation(int(i), _tup(states[i]), float(mu_lo[k + 1]), "increase", float(d_lo[i, k])))
    for i, k in zip(*np.nonzero(d_hi > tol)):
        report.violations.append(Violation(int(i), _tup(states[i]), float(mu_hi[k + 1]), "decrease", float(d_hi[i, k])))
    return report


def derivative_check(states, alphas, step: float = 1e-5) -> np.ndarray:
    """Relative error of :func:`ddelta_dalpha` against central differences.

    Δ is evaluated with mpmath; in double precision the cancellation inside
    Δ swamps derivatives of order 1e-6.
    """
    states = _states(states).reshape(-1, 4)
    alphas = np.broadcast_to(np.asarray(alphas, dtype=float), states.shape[:1])
    analytic = ddelta_dalpha(states, alphas)
    fd = np.empty_like(analytic)
    with mpmath.workdps(40):
        h = mpmath.mpf(step)
        for i, (p, a) in enumerate(zip(states, alphas)):
            a = mpmath.mpf(float(a))
            up = twobit_discord_mp(p, (1 + a + h) / 2)
            down = twobit_discord_mp(p, (1 + a - h) / 2)
            fd[i] = float((up - down) / (2 * h))
    scale = np.maximum(np.abs(analytic), np.abs(fd))
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(scale > 0, np.abs(analytic - fd) / scale, 0.0)
