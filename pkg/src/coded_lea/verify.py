"""Randomized oracle checks, run by ``coded-lea verify`` and the test suite."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from .allocation import (
    bruteforce_general,
    bruteforce_subsets,
    optimal_prefix_allocation,
    state_patterns,
    pattern_probabilities,
)
from .coding import Dataset, WorkFunction, decode, encode, make_scheme
from .success_model import (
    LoadProfile,
    success_probability_bruteforce,
    success_probability_dp,
)

TOL = 1e-12


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.detail} ({self.seconds:.2f}s)"


@dataclass
class Instance:
    probs: list[float]
    profile: LoadProfile
    r: int
    cap_good: int
    cap_bad: int


def random_probs(rng: np.random.Generator, n: int) -> list[float]:
    """Mix of continuous draws, exact 0/1 endpoints and repeated values."""
    kind = rng.integers(4)
    if kind == 0:
        return rng.random(n).tolist()
    if kind == 1:
        return rng.choice([0.0, 0.2, 0.5, 0.8, 1.0], size=n).tolist()
    if kind == 2:
        return rng.choice([0.2, 0.8], size=n).tolist()
    return np.round(rng.random(n), 2).tolist()


def random_instance(rng: np.random.Generator, n_max: int, r_max: int = 10) -> Instance:
    n = int(rng.integers(1, n_max + 1))
    r = int(rng.integers(1, r_max + 1))
    cap_good = int(rng.integers(1, r + 3))
    l_g = min(cap_good, r)
    cap_bad = int(rng.integers(0, l_g + 1))
    K_star = int(rng.integers(1, n * l_g + 1))
    profile = LoadProfile(l_g=l_g, l_b=cap_bad, K_star=K_star, n=n)
    return Instance(random_probs(rng, n), profile, r, cap_good, cap_bad)


def _timed(name, fn) -> CheckResult:
    start = time.perf_counter()
    passed, detail = fn()
    return CheckResult(name, passed, detail, time.perf_counter() - start)


def check_dp_vs_bruteforce(seed: int = 1, trials: int = 1000, n_max: int = 12) -> CheckResult:
    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(trials):
            inst = random_instance(rng, n_max)
            n = inst.profile.n
            members = [i for i in range(n) if rng.random() < 0.6]
            members = list(rng.permutation(members))
            dp = success_probability_dp(members, inst.probs, inst.profile)
            bf = success_probability_bruteforce(members, inst.probs, inst.profile)
            worst = max(worst, abs(dp - bf))
        return worst <= TOL, f"{trials} instances, max |dp - brute| = {worst:.3g}"
    return _timed("success probability: DP vs subset enumeration", run)


def check_prefix_optimality(seed: int = 2, trials: int = 500, n_max: int = 10) -> CheckResult:
    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(trials):
            inst = random_instance(rng, n_max)
            prefix = optimal_prefix_allocation(inst.probs, inst.profile).success_prob
            _, best = bruteforce_subsets(inst.probs, inst.profile)
            worst = max(worst, abs(prefix - best))
        return worst <= TOL, f"{trials} instances, max |prefix - all subsets| = {worst:.3g}"
    return _timed("prefix optimality over all 2^n high-tier sets", run)


def check_two_value(seed: int = 3, trials: int = 300, n_max: int = 5, r_max: int = 4) -> CheckResult:
    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(trials):
            inst = random_instance(rng, n_max, r_max)
            _, two_value = bruteforce_subsets(inst.probs, inst.profile)
            _, general = bruteforce_general(
                inst.probs, inst.profile.K_star, inst.r, inst.cap_good, inst.cap_bad
            )
            worst = max(worst, abs(two_value - general))
        return worst <= TOL, f"{trials} instances, max |two-value - general| = {worst:.3g}"
    return _timed("two load values suffice (n <= 5, r <= 4)", run)


def check_monotonicity(seed: int = 4, trials: int = 200, n_max: int = 10) -> CheckResult:
    """Success probability of a fixed allocation never rises with the threshold."""
    def run():
        rng = np.random.default_rng(seed)
        violations = 0
        checked = 0
        for _ in range(trials):
            inst = random_instance(rng, n_max)
            n, prof = inst.profile.n, inst.profile
            high = rng.random(n) < 0.5
            loads = np.where(high, prof.l_g, prof.l_b)
            patterns = state_patterns(n)
            weights = pattern_probabilities(inst.probs, patterns)
            on_time = np.where(high[None, :] & ~patterns, 0, loads[None, :]).sum(axis=1)
            members = np.flatnonzero(high).tolist()
            prev_enum = prev_dp = np.inf
            for K in range(1, int(loads.sum()) + 2):
                p_enum = float(weights[on_time >= K].sum())
                p_dp = success_probability_dp(members, inst.probs, prof.with_threshold(K))
                checked += 1
                if p_enum > prev_enum + TOL or p_dp > prev_dp + TOL or abs(p_enum - p_dp) > 1e-9:
                    violations += 1
                prev_enum, prev_dp = p_enum, p_dp
        return violations == 0, f"{trials} allocations, {checked} thresholds, {violations} violations"
    return _timed("success probability nonincreasing in K*", run)


def check_decoding(seed: int = 5, max_shards: int = 12) -> CheckResult:
    """Decode from every K*-subset for all small (n, r, k, deg_f)."""
    def run():
        rng = np.random.default_rng(seed)
        configs = subsets = failures = 0
        for n, r, k, deg in itertools.product(range(1, 5), range(1, 4), range(1, 5), range(1, 4)):
            if n * r > max_shards:
                continue
            try:
                scheme = make_scheme(n, r, k, deg, p=101)
            except ValueError:
                continue
            configs += 1
            data = Dataset.random(k, 2, rng, 101)
            f = WorkFunction.random(deg, 2, rng, 101)
            shards = encode(data, scheme)
            evals = [(s.index, f(s.payload, 101)) for s in shards]
            expected = [f(c, 101) for c in data.chunks]
            for subset in itertools.combinations(evals, scheme.recovery_threshold):
                subsets += 1
                got = decode(list(subset), scheme, f)
                if not all(np.array_equal(a, b) for a, b in zip(got, expected)):
                    failures += 1
        return failures == 0, f"{configs} schemes, {subsets} subsets, {failures} wrong decodes"
    return _timed("decode from every K*-subset (n*r <= 12)", run)


SUITES = {
    "success_model": [check_dp_vs_bruteforce, check_monotonicity],
    "allocation": [check_prefix_optimality, check_two_value],
    "coding": [check_decoding],
}


def run_suites(names=None, seed: int | None = None) -> list[CheckResult]:
    results = []
    for name in names or SUITES:
        for check in SUITES[name]:
            results.append(check() if seed is None else check(seed=seed))
    return results
