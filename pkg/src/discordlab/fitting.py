"""Quadratic least-squares fit of channel discord against channel distortion."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import ContractError, DegenerateInputError


class DegenerateFitError(DegenerateInputError):
    pass


@dataclass(frozen=True)
class QuadraticFit:
    """``y = t1 x^2 + t2 x + t3``; ``rmse`` uses denominator ``n``."""

    t1: float
    t2: float
    t3: float
    rmse: float
    n_points: int

    def predict(self, x):
        x = np.asarray(x, dtype=float)
        return (self.t1 * x + self.t2) * x + self.t3

    def to_dict(self) -> dict:
        return asdict(self) | {"rmse_denominator": "n"}


def _xy(points):
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ContractError("points must be (x, y) pairs")
    return arr[:, 0], arr[:, 1]


def rmse(points, fit: QuadraticFit) -> float:
    x, y = _xy(points)
    if x.size == 0:
        raise ContractError("no points")
    return float(np.sqrt(np.mean((fit.predict(x) - y) ** 2)))


def fit_quadratic(points) -> QuadraticFit:
    """Ordinary least squares on the design ``(x^2, x, 1)``."""
    x, y = _xy(points)
    if x.size < 3:
        raise DegenerateFitError(f"need at least 3 points, got {x.size}")
    design = np.column_stack([x * x, x, np.ones_like(x)])
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < 3:
        raise DegenerateFitError("design matrix is rank deficient (fewer than 3 distinct x)")
    t1, t2, t3 = (float(c) for c in coef)
    fit = QuadraticFit(t1, t2, t3, 0.0, int(x.size))
    return QuadraticFit(t1, t2, t3, rmse(points, fit), int(x.size))


def residual_spread(points, entropy, fit: QuadraticFit, h_max: float, n_bins: int = 3) -> list[dict]:
    """Residual standard deviation in equal-width entropy bins over ``[0, h_max]``.

    Descriptive only: it quantifies how wide the scatter is for low, middle
    and high entropy channels. Empty bins report ``n = 0`` and a null spread.
    """
    x, y = _xy(points)
    entropy = np.asarray(entropy, dtype=float)
    if entropy.shape != x.shape:
        raise ContractError("one entropy value per point")
    if n_bins < 1 or not h_max > 0:
        raise ContractError("need n_bins >= 1 and h_max > 0")
    resid = y - fit.predict(x)
    edges = np.linspace(0.0, h_max, n_bins + 1)
    idx = np.clip(np.searchsorted(edges, entropy, side="right") - 1, 0, n_bins - 1)
    out = []
    for k in range(n_bins):
        sel = resid[idx == k]
        out.append(
            {
                "entropy_lo": float(edges[k]),
                "entropy_hi": float(edges[k + 1]),
                "n": int(sel.size),
                "residual_std": float(sel.std()) if sel.size else None,
            }
        )
    return out
