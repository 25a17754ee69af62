"""Permutation-minimized discord and distortion, and their channel averages."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import Channel
from .errors import ContractError, DimensionError, DomainError
from .hadamard import (
    alternative_mutual_information,
    check_joint,
    mutual_information,
    mutual_information_batch,
    tv_distance,
    tv_distance_batch,
)
from .permutations import PermutationTable, enumerate_reverse_lex

CONVENTIONS = ("equation", "prose")
# minima closer than this are treated as ties
TIE_TOL = 1e-12
# cap on floats materialized per chunk of (states x permutations x M x M)
_CHUNK_ELEMS = 1 << 22


@dataclass
class ScatterPoint:
    channel_id: int
    a: float
    weight_entropy: float
    avg_discord: float
    avg_distortion: float
    n_states: int
    # most frequent distortion-minimizing permutation index (smallest on ties)
    argmin_mode: int
    argmin_stats: dict[int, int] | None = field(default=None, repr=False)


def _matrix(channel) -> np.ndarray:
    return channel.matrix if isinstance(channel, Channel) else np.asarray(channel, dtype=float)


def _check_dims(p, mat, table=None):
    if mat.shape != (p.shape[-1], p.shape[-1]):
        raise DimensionError(f"channel {mat.shape} does not act on {p.shape[-1]} labels")
    if table is not None and table.order != p.shape[-1]:
        raise DimensionError(f"permutation table of order {table.order} for {p.shape[-1]} labels")


def state_discord(p, channel) -> float:
    """``I(p) - J(p E)``: information lost to Bob's noisy readout."""
    p = check_joint(p)
    mat = _matrix(channel)
    _check_dims(p, mat)
    return mutual_information(p) - alternative_mutual_information(p @ mat)


def state_distortion(p, channel) -> float:
    """TV distance between ``p E`` and ``p``."""
    p = check_joint(p)
    mat = _matrix(channel)
    _check_dims(p, mat)
    return tv_distance(p @ mat, p)


def first_argmin(values: np.ndarray, tol: float = TIE_TOL) -> np.ndarray:
    """Smallest index within ``tol`` of the minimum along the last axis."""
    lo = values.min(axis=-1, keepdims=True)
    return np.argmax(values <= lo + tol, axis=-1)


def permuted_terms(states, channel, table: PermutationTable, convention: str = "equation"):
    """Discord and distortion for every (state, permutation) pair.

    Returns two arrays of shape ``(n_states, len(table))``.  With the
    ``equation`` convention the permutation acts before the channel,
    ``p Pi E`` compared with ``p Pi``; with ``prose`` it acts after,
    ``p E Pi`` compared with ``p``.
    """
    if convention not in CONVENTIONS:
        raise DomainError(f"convention must be one of {CONVENTIONS}")
    states = np.asarray(states, dtype=float)
    if states.ndim == 2:
        states = states[None]
    mat = _matrix(channel)
    _check_dims(states, mat, table)
    n, m = states.shape[0], states.shape[-1]
    k = len(table)
    discord = np.empty((n, k))
    distortion = np.empty((n, k))
    step = max(1, _CHUNK_ELEMS // (k * m * m))
    for lo in range(0, n, step):
        chunk = states[lo : lo + step]
        info = mutual_information_batch(chunk)[:, None]
        if convention == "equation":
            # p @ Pi_k == p[:, inverse_k]
            permuted = np.moveaxis(chunk[:, :, table.inverse], 2, 1)
            out = permuted @ mat
            reference = permuted
        else:
            out = np.moveaxis((chunk @ mat)[:, :, table.inverse], 2, 1)
            reference = chunk[:, None]
        discord[lo : lo + step] = info - mutual_information_batch(out)
        distortion[lo : lo + step] = tv_distance_batch(out, reference)
    return discord, distortion


def minimized_terms(states, channel, table: PermutationTable | None = None, convention: str = "equation"):
    """Per-state minima and argmins of discord and distortion, one pass over permutations."""
    states = np.asarray(states, dtype=float)
    if table is None:
        table = enumerate_reverse_lex(states.shape[-1])
    discord, distortion = permuted_terms(states, channel, table, convention)
    i_d = first_argmin(discord)
    i_t = first_argmin(distortion)
    rows = np.arange(discord.shape[0])
    return discord[rows, i_d], i_d, distortion[rows, i_t], i_t


def min_discord_over_permutations(p, channel, table=None, convention="equation") -> tuple[float, int]:
    p = check_joint(p)
    value, idx, _, _ = minimized_terms(p[None], channel, table, convention)
    return float(value[0]), int(idx[0])


def min_distortion_over_permutations(p, channel, table=None, convention="equation") -> tuple[float, int]:
    p = check_joint(p)
    _, _, value, idx = minimized_terms(p[None], channel, table, convention)
    return float(value[0]), int(idx[0])


def _check_batch(batch) -> np.ndarray:
    batch = np.asarray(batch, dtype=float)
    if batch.ndim == 2:
        batch = batch[None]
    if batch.ndim != 3 or batch.shape[0] == 0:
        raise ContractError("need a nonempty batch of joint states")
    return batch


def channel_discord(channel, batch, table=None, convention="equation") -> float:
    """Sample mean of the minimized state discord over ``batch``."""
    batch = _check_batch(batch)
    return float(minimized_terms(batch, channel, table, convention)[0].mean())


def channel_distortion(channel, batch, table=None, convention="equation") -> float:
    batch = _check_batch(batch)
    return float(minimized_terms(batch, channel, table, convention)[2].mean())


def scatter_point(
    channel: Channel,
    batch,
    table: PermutationTable | None = None,
    *,
    channel_id: int = 0,
    a: float = float("nan"),
    convention: str = "equation",
) -> ScatterPoint:
    """Channel discord, channel distortion and argmin statistics in one pass."""
    batch = _check_batch(batch)
    d_min, _, t_min, t_arg = minimized_terms(batch, channel, table, convention)
    idx, counts = np.unique(t_arg, return_counts=True)
    return ScatterPoint(
        channel_id=channel_id,
        a=a,
        weight_entropy=channel.entropy,
        avg_discord=float(d_min.mean()),
        avg_distortion=float(t_min.mean()),
        n_states=batch.shape[0],
        argmin_mode=int(idx[np.argmax(counts)]),
        argmin_stats={int(i): int(c) for i, c in zip(idx, counts)},
    )
