"""Online estimate-and-allocate scheduling.

The master never sees worker states directly. It infers each worker's
state in the round just finished from how long its results took,
accumulates transition counts, and turns them into plug-in estimates of
the probability that each worker is good in the coming round.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .allocation import AllocationVector, optimal_prefix_allocation
from .success_model import LoadProfile

# indices into the per-worker count rows
GG, GB, BG, BB = range(4)

UNKNOWN = -1
BAD = 0
GOOD = 1

DEFAULT_TOLERANCE = 1e-9


class UnclassifiableObservation(ValueError):
    pass


def infer_state(load: int, observed_time: float, mu_g: float, mu_b: float, tol: float = DEFAULT_TOLERANCE) -> bool:
    """True (good) or False (bad), judged by which speed explains ``observed_time``."""
    if load < 1:
        raise ValueError("cannot infer a state from an empty load")
    if abs(observed_time - load / mu_g) <= tol:
        return True
    if abs(observed_time - load / mu_b) <= tol:
        return False
    raise UnclassifiableObservation(
        f"unclassifiable observation: {observed_time}s for {load} evaluations"
    )


class EstimatorState:
    """Per-worker transition counts and the estimates derived from them.

    Counts start at ``prior_count`` (Laplace smoothing), so every estimate
    is 0.5 before the first transition is seen.
    """

    def __init__(self, n: int, prior_count: int = 1, prior_good: float = 0.5):
        self.n = n
        self.prior_count = prior_count
        self.prior_good = prior_good
        self.counts = np.full((n, 4), prior_count, dtype=np.int64)
        self.last_state = np.full(n, UNKNOWN, dtype=np.int8)
        self._refresh()

    def _refresh(self) -> None:
        c = self.counts
        self.p_hat_gg = c[:, GG] / (c[:, GG] + c[:, GB])
        self.p_hat_bb = c[:, BB] / (c[:, BG] + c[:, BB])
        self.p_hat_g_next = np.where(
            self.last_state == GOOD,
            self.p_hat_gg,
            np.where(self.last_state == BAD, 1.0 - self.p_hat_bb, self.prior_good),
        )

    def update(self, observed: Sequence) -> "EstimatorState":
        """Fold in one round of observed states (True/False, or None if unseen)."""
        if len(observed) != self.n:
            raise ValueError(f"expected {self.n} observations, got {len(observed)}")
        obs = np.array([UNKNOWN if o is None else int(bool(o)) for o in observed], dtype=np.int8)
        prev = self.last_state
        seen = (prev != UNKNOWN) & (obs != UNKNOWN)
        # column = 2*(prev is bad) + (obs is bad): GG=0, GB=1, BG=2, BB=3
        cols = 2 * (prev == BAD) + (obs == BAD)
        rows = np.flatnonzero(seen)
        self.counts[rows, cols[rows]] += 1
        # an unseen round breaks the chain; the next observation starts afresh
        self.last_state = obs
        self._refresh()
        return self

    def current_good_probabilities(self) -> list[float]:
        return self.p_hat_g_next.tolist()

    def snapshot(self) -> list[tuple[int, float, float]]:
        """(worker, p_hat_gg, p_hat_bb) rows with 1-based worker numbers."""
        return [
            (i + 1, float(gg), float(bb))
            for i, (gg, bb) in enumerate(zip(self.p_hat_gg, self.p_hat_bb))
        ]


def update_estimates(est: EstimatorState, observed: Sequence) -> EstimatorState:
    return est.update(observed)


def current_good_probabilities(est: EstimatorState) -> list[float]:
    return est.current_good_probabilities()


def assign_loads(est: EstimatorState, profile: LoadProfile) -> AllocationVector:
    return optimal_prefix_allocation(est.current_good_probabilities(), profile)
