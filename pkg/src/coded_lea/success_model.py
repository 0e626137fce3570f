"""Probability that a round decodes by the deadline.

With every worker assigned either ``l_g`` or ``l_b`` evaluations, the
bad-tier workers always finish in time and a high-tier worker contributes
only when it is in the good state. Success therefore means "at least ``a``
of the high-tier workers are good", a Poisson-binomial tail.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

INFEASIBLE = math.inf


@dataclass(frozen=True)
class LoadProfile:
    l_g: int
    l_b: int
    K_star: int
    n: int

    def __post_init__(self):
        if not 0 <= self.l_b <= self.l_g:
            raise ValueError(f"need 0 <= l_b <= l_g, got l_b={self.l_b}, l_g={self.l_g}")
        if self.K_star < 1 or self.n < 1:
            raise ValueError("K_star and n must be >= 1")

    @classmethod
    def from_speeds(cls, mu_g: float, mu_b: float, d: float, r: int, K_star: int, n: int):
        return cls(l_g=min(tier_load(mu_g, d), r), l_b=tier_load(mu_b, d), K_star=K_star, n=n)

    def total_load(self, g_size: int) -> int:
        return g_size * self.l_g + (self.n - g_size) * self.l_b

    def with_threshold(self, K_star: int) -> "LoadProfile":
        return LoadProfile(self.l_g, self.l_b, K_star, self.n)


def tier_load(mu: float, d: float) -> int:
    """Largest integer load a worker of speed ``mu`` finishes within ``d``."""
    # the slack absorbs binary rounding of products such as 0.3 * 10
    return max(int(math.floor(mu * d * (1 + 1e-12))), 0)


def min_good_required(g_size: int, profile: LoadProfile) -> float:
    """Fewest good workers among the high tier for the round to decode.

    Returns ``INFEASIBLE`` when the high tier carries no load but the low
    tier alone falls short.
    """
    if not 0 <= g_size <= profile.n:
        raise ValueError(f"g_size must lie in [0, {profile.n}]")
    need = profile.K_star - (profile.n - g_size) * profile.l_b
    if need <= 0:
        return 0
    if profile.l_g == 0:
        return INFEASIBLE
    return -(-need // profile.l_g)


def count_distribution(probs: Iterable[float]) -> list[float]:
    """PMF of the number of successes among independent Bernoulli(probs)."""
    dist = [1.0]
    for q in probs:
        dist = _add_worker(dist, q)
    return dist


def _add_worker(dist: list[float], q: float) -> list[float]:
    miss = 1.0 - q
    out = [dist[0] * miss]
    out += [cur * miss + prev * q for cur, prev in zip(dist[1:], dist)]
    out.append(dist[-1] * q)
    return out


def _tail(dist: Sequence[float], a: float) -> float:
    if a > len(dist) - 1:
        return 0.0
    if a <= 0:
        return 1.0
    return min(math.fsum(dist[int(a):]), 1.0)


def success_probability_dp(G_g: Iterable[int], probs: Sequence[float], profile: LoadProfile) -> float:
    """P(at least a(G_g) workers of G_g are good); O(|G_g|^2).

    ``G_g`` holds 0-based worker indices into ``probs``; order matters only
    for floating-point rounding.
    """
    members = list(G_g)
    a = min_good_required(len(members), profile)
    if a > len(members):
        return 0.0
    return _tail(count_distribution(probs[i] for i in members), a)


def prefix_success_probabilities(ordered_probs: Sequence[float], profile: LoadProfile) -> list[float]:
    """Success probability of every prefix allocation, in one O(n^2) pass.

    Entry ``t`` is ``success_probability_dp(range(t), ordered_probs, profile)``
    bit for bit: the count distribution of the first ``t`` workers is built
    by the same recurrence in the same order.
    """
    n = len(ordered_probs)
    out = []
    dist = [1.0]
    for t in range(n + 1):
        a = min_good_required(t, profile)
        out.append(0.0 if a > t else _tail(dist, a))
        if t < n:
            dist = _add_worker(dist, ordered_probs[t])
    return out


BRUTEFORCE_LIMIT = 20


def success_probability_bruteforce(G_g: Iterable[int], probs: Sequence[float], profile: LoadProfile) -> float:
    """Literal subset sum over all good/bad assignments of G_g."""
    members = list(G_g)
    if len(members) > BRUTEFORCE_LIMIT:
        raise ValueError(f"brute force limited to {BRUTEFORCE_LIMIT} workers, got {len(members)}")
    a = min_good_required(len(members), profile)
    if a > len(members):
        return 0.0
    terms = []
    for pattern in itertools.product((True, False), repeat=len(members)):
        if sum(pattern) < a:
            continue
        weight = 1.0
        for i, good in zip(members, pattern):
            weight *= probs[i] if good else 1.0 - probs[i]
        terms.append(weight)
    return math.fsum(terms)
