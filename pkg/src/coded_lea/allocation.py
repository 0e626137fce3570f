"""Load allocation: choose which workers get the high load tier.

Only two load values ever need considering, and for a fixed number of
high-tier workers the best choice is the workers most likely to be good.
The optimum is therefore a prefix of the workers sorted by good
probability, found with n + 1 evaluations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .success_model import (
    LoadProfile,
    min_good_required,
    prefix_success_probabilities,
)

TIE_TOLERANCE = 1e-12


class DeadlineInfeasible(ValueError):
    pass


@dataclass
class AllocationVector:
    loads: list[int]
    i_star: int
    ordering: list[int]
    success_prob: float | None = None
    feasible: bool = True
    # P-hat for every prefix size 0..n, when computed by the prefix search
    landscape: list[float] = field(default_factory=list, repr=False)

    @property
    def total(self) -> int:
        return sum(self.loads)

    @property
    def high_tier(self) -> list[int]:
        return sorted(self.ordering[: self.i_star])


def sort_workers(probs) -> list[int]:
    """Workers by good probability, descending; ties keep index order."""
    return sorted(range(len(probs)), key=lambda i: -probs[i])


def check_feasible(profile: LoadProfile) -> None:
    if profile.n * profile.l_g < profile.K_star:
        raise DeadlineInfeasible(
            f"deadline infeasible: n*l_g = {profile.n * profile.l_g} < K* = {profile.K_star}"
        )


def loads_for_prefix(ordering, i_star: int, profile: LoadProfile) -> list[int]:
    loads = [profile.l_b] * profile.n
    for i in ordering[:i_star]:
        loads[i] = profile.l_g
    return loads


def optimal_prefix_allocation(probs, profile: LoadProfile) -> AllocationVector:
    """Best prefix size over 0..n; smallest one among near-ties."""
    if len(probs) != profile.n:
        raise ValueError(f"expected {profile.n} probabilities, got {len(probs)}")
    check_feasible(profile)
    ordering = sort_workers(probs)
    landscape = prefix_success_probabilities([probs[i] for i in ordering], profile)
    best = max(landscape)
    i_star = next(t for t, v in enumerate(landscape) if v >= best - TIE_TOLERANCE)
    return AllocationVector(
        loads=loads_for_prefix(ordering, i_star, profile),
        i_star=i_star,
        ordering=ordering,
        success_prob=landscape[i_star],
        landscape=landscape,
    )


# -- exhaustive oracles ----------------------------------------------------

SUBSET_LIMIT = 10
GENERAL_N_LIMIT = 5
GENERAL_R_LIMIT = 4


def bruteforce_subsets(probs, profile: LoadProfile) -> tuple[frozenset[int], float]:
    """Best high-tier set over all 2^n subsets (first found on exact ties).

    Each subset is scored by summing the probabilities of every joint state
    pattern with at least a(G_g) good members, independently of the
    dynamic program used by the prefix search.
    """
    n = profile.n
    if n > SUBSET_LIMIT:
        raise ValueError(f"subset search limited to n <= {SUBSET_LIMIT}")
    patterns = state_patterns(n)
    weights = pattern_probabilities(probs, patterns)
    masks = state_patterns(n)[::-1]  # subsets as membership rows, empty set first
    sizes = masks.sum(axis=1)
    need = np.array([min_good_required(int(s), profile) for s in sizes], dtype=float)
    good_in_subset = patterns.astype(np.int64) @ masks.T.astype(np.int64)  # S x subsets
    values = weights @ (good_in_subset >= need[None, :])
    values[need > sizes] = 0.0
    best = int(np.argmax(values))
    return frozenset(int(i) for i in np.flatnonzero(masks[best])), float(values[best])


def state_patterns(n: int) -> np.ndarray:
    """All 2^n good(True)/bad(False) assignments, shape (2^n, n)."""
    return np.array(list(itertools.product((True, False), repeat=n)), dtype=bool).reshape(-1, n)


def pattern_probabilities(probs, patterns: np.ndarray) -> np.ndarray:
    q = np.asarray(probs, dtype=float)
    return np.prod(np.where(patterns, q, 1.0 - q), axis=1)


def general_success_probability(loads, probs, K_star: int, cap_good: int, cap_bad: int) -> float:
    """Success probability of an arbitrary integer load vector, by enumerating states.

    A worker's results count only if all its ``load`` evaluations finish by
    the deadline, i.e. ``load <= cap`` for its current state.
    """
    n = len(loads)
    patterns = state_patterns(n)
    weights = pattern_probabilities(probs, patterns)
    loads = np.asarray(loads)
    caps = np.where(patterns, cap_good, cap_bad)
    on_time = np.where(loads <= caps, loads, 0).sum(axis=1)
    return float(np.sum(weights[on_time >= K_star]))


def bruteforce_general(probs, K_star: int, r: int, cap_good: int, cap_bad: int) -> tuple[tuple[int, ...] | None, float]:
    """Best load vector over all of {0..r}^n with total >= K*.

    ``cap_good``/``cap_bad`` are the largest loads a good/bad worker finishes
    in time, i.e. floor(mu * d). Returns ``(None, 0.0)`` when no vector
    reaches K*.
    """
    n = len(probs)
    if n > GENERAL_N_LIMIT or r > GENERAL_R_LIMIT:
        raise ValueError(f"general search limited to n <= {GENERAL_N_LIMIT}, r <= {GENERAL_R_LIMIT}")
    vectors = np.array(list(itertools.product(range(r + 1), repeat=n)), dtype=np.int64)
    vectors = vectors[vectors.sum(axis=1) >= K_star]
    if len(vectors) == 0:
        return None, 0.0
    patterns = state_patterns(n)
    weights = pattern_probabilities(probs, patterns)
    caps = np.where(patterns, cap_good, cap_bad)  # S x n
    # on-time evaluations for every (state pattern, load vector) pair
    counted = np.where(vectors[None, :, :] <= caps[:, None, :], vectors[None, :, :], 0)
    ok = counted.sum(axis=2) >= K_star  # S x V
    values = weights @ ok
    best = int(np.argmax(values))
    return tuple(int(x) for x in vectors[best]), float(values[best])
