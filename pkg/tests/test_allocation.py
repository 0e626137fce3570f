import math

import numpy as np
import pytest

from coded_lea.allocation import (
    DeadlineInfeasible,
    bruteforce_general,
    bruteforce_subsets,
    general_success_probability,
    optimal_prefix_allocation,
    sort_workers,
)
from coded_lea.success_model import LoadProfile, success_probability_bruteforce
from coded_lea.verify import random_instance

SCENARIO = LoadProfile(l_g=10, l_b=3, K_star=99, n=15)


def binom_tail(n, a, q=0.5):
    return sum(math.comb(n, j) * q**j * (1 - q) ** (n - j) for j in range(a, n + 1))


def test_scenario_profile_all_half():
    alloc = optimal_prefix_allocation([0.5] * 15, SCENARIO)
    assert alloc.i_star == 15
    assert alloc.success_prob == pytest.approx(4944 / 32768, abs=1e-15)
    # the whole landscape against closed-form binomial tails
    for t, value in enumerate(alloc.landscape):
        need = math.ceil((99 - (15 - t) * 3) / 10)
        expected = 0.0 if need > t else binom_tail(t, max(need, 0))
        assert value == pytest.approx(expected, abs=1e-14)
    assert alloc.loads == [10] * 15
    assert len(alloc.landscape) == 16  # n + 1 evaluations


def test_two_worker_example():
    prof = LoadProfile(l_g=4, l_b=1, K_star=4, n=2)
    alloc = optimal_prefix_allocation([0.9, 0.2], prof)
    assert alloc.i_star == 2
    assert alloc.success_prob == pytest.approx(0.92, abs=1e-15)
    assert alloc.landscape[1] == pytest.approx(0.9, abs=1e-15)
    assert alloc.landscape[0] == 0.0


def test_sure_workers_take_smallest_feasible_prefix():
    alloc = optimal_prefix_allocation([1.0] * 15, SCENARIO)
    # smallest t with 10 t + 3 (15 - t) >= 99 is t = 8
    assert alloc.i_star == 8 and alloc.success_prob == 1.0
    assert alloc.total >= 99


def test_ordering_is_stable_and_descending():
    probs = [0.3, 0.9, 0.3, 0.9, 0.5]
    assert sort_workers(probs) == [1, 3, 4, 0, 2]
    prof = LoadProfile(l_g=4, l_b=1, K_star=9, n=5)
    alloc = optimal_prefix_allocation(probs, prof)
    assert alloc.high_tier == sorted(sort_workers(probs)[: alloc.i_star])


def test_infeasible_deadline():
    with pytest.raises(DeadlineInfeasible, match="deadline infeasible"):
        optimal_prefix_allocation([0.5] * 3, LoadProfile(l_g=2, l_b=1, K_star=7, n=3))


def test_zero_prefix_when_low_tier_suffices():
    alloc = optimal_prefix_allocation([0.1, 0.2], LoadProfile(l_g=3, l_b=2, K_star=4, n=2))
    assert alloc.i_star == 0 and alloc.success_prob == 1.0


def test_prefix_matches_all_subsets():
    rng = np.random.default_rng(41)
    for _ in range(500):
        inst = random_instance(rng, 10)
        alloc = optimal_prefix_allocation(inst.probs, inst.profile)
        best_set, best = bruteforce_subsets(inst.probs, inst.profile)
        assert abs(alloc.success_prob - best) <= 1e-12
        # the winning subset's score against the literal subset sum
        literal = success_probability_bruteforce(sorted(best_set), inst.probs, inst.profile)
        assert abs(literal - best) <= 1e-12


def test_two_values_suffice():
    rng = np.random.default_rng(43)
    for _ in range(200):
        inst = random_instance(rng, 5, r_max=4)
        _, two = bruteforce_subsets(inst.probs, inst.profile)
        vec, general = bruteforce_general(inst.probs, inst.profile.K_star, inst.r, inst.cap_good, inst.cap_bad)
        assert abs(two - general) <= 1e-12
        if vec is not None:
            check = general_success_probability(vec, inst.probs, inst.profile.K_star, inst.cap_good, inst.cap_bad)
            assert check == pytest.approx(general, abs=1e-12)


def test_single_worker_modes_agree():
    prof = LoadProfile(l_g=3, l_b=1, K_star=3, n=1)
    assert bruteforce_subsets([0.37], prof)[1] == pytest.approx(0.37)
    assert bruteforce_general([0.37], 3, r=3, cap_good=3, cap_bad=1)[1] == pytest.approx(0.37)


def test_guards():
    with pytest.raises(ValueError):
        bruteforce_subsets([0.5] * 11, LoadProfile(1, 0, 1, 11))
    with pytest.raises(ValueError):
        bruteforce_general([0.5] * 6, 1, r=2, cap_good=2, cap_bad=1)
