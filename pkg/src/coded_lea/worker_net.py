"""Two-state Markov workers with deterministic per-state speeds.

Every worker owns an independent random stream derived from ``(seed, worker
index)``. Each round consumes exactly one uniform per worker: the first draw
picks the stationary initial state, every later draw one transition. A
worker is good next round when its draw is below ``p_gg`` (currently good)
or below ``1 - p_bb`` (currently bad). ``simulate_states`` draws in bulk and
reproduces ``sample_initial_states`` followed by repeated ``step_states``
bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

GOOD = True
BAD = False


@dataclass(frozen=True)
class WorkerParams:
    p_gg: float
    p_bb: float
    mu_g: float
    mu_b: float

    def __post_init__(self):
        if not 0.0 < self.p_gg < 1.0:
            raise ValueError(f"p_gg must lie in (0, 1), got {self.p_gg}")
        if not 0.0 < self.p_bb < 1.0:
            raise ValueError(f"p_bb must lie in (0, 1), got {self.p_bb}")
        if not self.mu_g > self.mu_b > 0:
            raise ValueError(f"need mu_g > mu_b > 0, got mu_g={self.mu_g}, mu_b={self.mu_b}")

    @property
    def pi_g(self) -> float:
        return stationary_distribution(self)[0]

    def next_good_probability(self, good: bool) -> float:
        return self.p_gg if good else 1.0 - self.p_bb


@dataclass
class NetworkState:
    states: list[bool]
    round: int = 1

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def n_good(self) -> int:
        return sum(self.states)


def stationary_distribution(params) -> tuple[float, float]:
    """(pi_g, pi_b) of the chain; accepts WorkerParams or any object with p_gg/p_bb."""
    leave_g = 1.0 - params.p_gg
    leave_b = 1.0 - params.p_bb
    pi_g = leave_b / (leave_g + leave_b)
    return pi_g, 1.0 - pi_g


def worker_streams(seed: int, n: int) -> list[np.random.Generator]:
    """Independent generators, one per worker, keyed by (seed, worker index)."""
    return [
        np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(i,))))
        for i in range(n)
    ]


def auxiliary_stream(seed: int, name: str) -> np.random.Generator:
    """A stream disjoint from every worker stream, for strategy-side randomness."""
    key = int.from_bytes(name.encode(), "little")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(1 << 32, key))))


def _good_thresholds(params: Sequence) -> tuple[np.ndarray, np.ndarray]:
    stay_g = np.array([w.p_gg for w in params], dtype=float)
    enter_g = np.array([1.0 - w.p_bb for w in params], dtype=float)
    return stay_g, enter_g


def sample_initial_states(params: Sequence, rngs: Sequence[np.random.Generator]) -> NetworkState:
    """Draw each worker's state from its stationary distribution.

    ``params`` items need ``p_gg``/``p_bb``; a ``pi_g`` attribute, when
    present, overrides the stationary value (handy for degenerate tests).
    """
    states = []
    for w, rng in zip(params, rngs):
        pi_g = getattr(w, "pi_g", None)
        if pi_g is None:
            pi_g = stationary_distribution(w)[0]
        states.append(bool(rng.random() < pi_g))
    return NetworkState(states, round=1)


def step_states(state: NetworkState, params: Sequence, rngs: Sequence[np.random.Generator]) -> NetworkState:
    nxt = []
    for good, w, rng in zip(state.states, params, rngs):
        threshold = w.p_gg if good else 1.0 - w.p_bb
        nxt.append(bool(rng.random() < threshold))
    return NetworkState(nxt, round=state.round + 1)


def simulate_states(params: Sequence[WorkerParams], rounds: int, seed: int) -> np.ndarray:
    """Boolean array of shape (rounds, n); entry [m, i] is True when worker i is good in round m+1."""
    n = len(params)
    out = np.empty((rounds, n), dtype=bool)
    stay_g, enter_g = _good_thresholds(params)
    for i, rng in enumerate(worker_streams(seed, n)):
        u = rng.random(rounds).tolist()
        sg, eg = float(stay_g[i]), float(enter_g[i])
        good = u[0] < stationary_distribution(params[i])[0]
        col = [good]
        for x in u[1:]:
            good = x < (sg if good else eg)
            col.append(good)
        out[:, i] = col
    return out


def completion_time(load: int, good: bool, params) -> float:
    if load < 0:
        raise ValueError("load must be nonnegative")
    if load == 0:
        return 0.0
    return load / (params.mu_g if good else params.mu_b)
