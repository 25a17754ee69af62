"""Scatter experiment: many random channels, each averaged over a state batch.

Channel ``c`` draws everything it needs (its low-entropy weights and its
state batch) from a generator seeded by ``SeedSequence(seed, spawn_key=(c,))``,
so results do not depend on worker count or scheduling.
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Iterator

import numpy as np

from .channels import (
    Channel,
    LOW_ENTROPY_RULES,
    assemble_channel,
    identity_channel,
    interpolate_weights,
    low_entropy_weights,
    uniform_weights,
)
from .errors import ContractError, DomainError
from .estimators import CONVENTIONS, ScatterPoint, scatter_point
from .permutations import check_order, enumerate_reverse_lex
from .states import PRIOR_KINDS, StatePrior, state_batch

log = logging.getLogger(__name__)

THREADS_ENV = "DISCORDLAB_THREADS"


@dataclass(frozen=True)
class ExperimentConfig:
    m: int = 6
    prior: str = "random"
    a_grid: int = 100
    wdown_per_a: int = 60
    states: int = 100
    seed: int = 42
    include_identity: bool = True
    convention: str = "prose"
    low_entropy_rule: str = "stick"
    B: float = 99.0

    def __post_init__(self):
        if not 2 <= self.m:
            raise DomainError("message size must be at least 2")
        check_order(self.m)
        for name in ("a_grid", "wdown_per_a", "states"):
            if getattr(self, name) < 1:
                raise ContractError(f"{name} must be at least 1")
        if self.prior not in PRIOR_KINDS:
            raise DomainError(f"prior must be one of {PRIOR_KINDS}")
        if self.convention not in CONVENTIONS:
            raise DomainError(f"convention must be one of {CONVENTIONS}")
        if self.low_entropy_rule not in LOW_ENTROPY_RULES:
            raise DomainError(f"low_entropy_rule must be one of {LOW_ENTROPY_RULES}")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must fit in 64 bits")

    @property
    def n_random(self) -> int:
        return self.a_grid * self.wdown_per_a

    @property
    def n_channels(self) -> int:
        return self.n_random + int(self.include_identity)

    def to_dict(self) -> dict:
        return asdict(self)


def channel_rng(seed: int, channel_id: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(channel_id,))))


def channel_a(config: ExperimentConfig, channel_id: int) -> float:
    """Weight-interpolation parameter of a random channel (NaN for the identity)."""
    if channel_id >= config.n_random:
        return float("nan")
    return float(np.linspace(0.0, 1.0, config.a_grid)[channel_id // config.wdown_per_a])


def build_channel(config: ExperimentConfig, channel_id: int, rng: np.random.Generator) -> Channel:
    """Channel ``channel_id``; consumes the weight draw from ``rng`` for random channels."""
    if channel_id < config.n_random:
        w_down = low_entropy_weights(config.m, rng, config.low_entropy_rule)
        weights = interpolate_weights(w_down, uniform_weights(config.m), channel_a(config, channel_id))
        return assemble_channel(weights, enumerate_reverse_lex(config.m))
    if channel_id == config.n_random and config.include_identity:
        return identity_channel(config.m)
    raise ContractError(f"channel id {channel_id} out of range")


def compute_point(config: ExperimentConfig, channel_id: int) -> ScatterPoint:
    table = enumerate_reverse_lex(config.m)
    rng = channel_rng(config.seed, channel_id)
    a = channel_a(config, channel_id)
    channel = build_channel(config, channel_id, rng)
    prior = StatePrior(kind=config.prior, B=config.B, n_states=config.states)
    batch = state_batch(prior, config.m, rng)
    return scatter_point(channel, batch, table, channel_id=channel_id, a=a, convention=config.convention)


def _compute_chunk(args) -> list[ScatterPoint]:
    config, ids = args
    return [compute_point(config, c) for c in ids]


def default_workers() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def iter_experiment(
    config: ExperimentConfig,
    start: int = 0,
    workers: int | None = None,
    chunk: int = 16,
) -> Iterator[ScatterPoint]:
    """Yield scatter points in channel order, starting at ``start``."""
    workers = default_workers() if workers is None else max(1, workers)
    ids = list(range(start, config.n_channels))
    if workers == 1 or len(ids) <= chunk:
        for c in ids:
            yield compute_point(config, c)
        return
    jobs = [(config, ids[i : i + chunk]) for i in range(0, len(ids), chunk)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for points in pool.map(_compute_chunk, jobs):
            yield from points


def run_experiment(
    config: ExperimentConfig,
    workers: int | None = None,
    progress: Callable[[int, int], None] | None = None,
) -> list[ScatterPoint]:
    points = []
    for pt in iter_experiment(config, workers=workers):
        points.append(pt)
        if progress is not None:
            progress(len(points), config.n_channels)
    return points
