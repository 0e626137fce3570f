import numpy as np
import pytest

from coded_lea.lea import (
    EstimatorState,
    UnclassifiableObservation,
    assign_loads,
    current_good_probabilities,
    infer_state,
    update_estimates,
)
from coded_lea.sim import GenieStrategy, ScenarioConfig, genie_assign
from coded_lea.success_model import LoadProfile
from coded_lea.worker_net import WorkerParams, simulate_states

G, B = True, False


@pytest.mark.parametrize(
    "load, t, expected",
    [(10, 1.0, G), (3, 1.0, B), (3, 0.3, G), (10, 10 / 3, B)],
)
def test_infer_state(load, t, expected):
    assert infer_state(load, t, mu_g=10, mu_b=3) is expected


def test_unclassifiable():
    with pytest.raises(UnclassifiableObservation, match="unclassifiable"):
        infer_state(3, 0.5, mu_g=10, mu_b=3)
    with pytest.raises(ValueError):
        infer_state(0, 0.0, mu_g=10, mu_b=3)


def feed(est, column):
    for s in column:
        update_estimates(est, [s])
    return est


def test_fresh_estimator_is_half():
    est = EstimatorState(4)
    assert current_good_probabilities(est) == [0.5] * 4
    assert np.all(est.counts == 1)


def test_first_observation_sets_state_only():
    est = update_estimates(EstimatorState(2), [G, B])
    assert np.all(est.counts == 1)
    assert current_good_probabilities(est) == [0.5, 0.5]
    assert list(est.last_state) == [1, 0]


def test_good_estimate_after_updates():
    # G, G, G adds two g->g transitions to the (1, 1) prior: C_gg = 3, C_gb = 1
    est = feed(EstimatorState(1), [G, G, G])
    assert list(est.counts[0]) == [3, 1, 1, 1]
    assert est.p_hat_gg[0] == 0.75
    assert current_good_probabilities(est) == [0.75]


def test_bad_estimate_after_updates():
    # transitions b->b, b->b, b->g, g->b: C_bb = 3, C_bg = 2
    est = feed(EstimatorState(1), [B, B, B, G, B])
    assert est.p_hat_bb[0] == pytest.approx(0.6)
    assert current_good_probabilities(est) == [pytest.approx(0.4)]


def test_unseen_round_breaks_chain():
    est = feed(EstimatorState(1), [G, G])
    update_estimates(est, [None])
    before = est.counts.copy()
    update_estimates(est, [B])
    assert np.array_equal(est.counts, before)
    assert current_good_probabilities(est)[0] == pytest.approx(1 - est.p_hat_bb[0])


def test_count_conservation():
    traj = simulate_states([WorkerParams(0.7, 0.6, 10, 3)] * 3, 500, seed=2)
    est = EstimatorState(3)
    for row in traj.tolist():
        update_estimates(est, row)
    assert list(est.counts.sum(axis=1)) == [500 - 1 + 4] * 3


def test_estimates_converge():
    traj = simulate_states([WorkerParams(0.8, 0.8, 10, 3), WorkerParams(0.9, 0.6, 10, 3)], 100_000, seed=21)
    est = EstimatorState(2)
    for row in traj.tolist():
        update_estimates(est, row)
    assert abs(est.p_hat_gg[0] - 0.8) <= 0.02 and abs(est.p_hat_bb[0] - 0.8) <= 0.02
    assert abs(est.p_hat_gg[1] - 0.9) <= 0.02 and abs(est.p_hat_bb[1] - 0.6) <= 0.02


def test_assign_loads_fresh_scenario_profile():
    alloc = assign_loads(EstimatorState(15), LoadProfile(l_g=10, l_b=3, K_star=99, n=15))
    assert alloc.i_star == 15
    assert alloc.success_prob == pytest.approx(4944 / 32768)


def test_assign_loads_confident_good():
    est = EstimatorState(15)
    est.counts[:, 1] = 0  # no g->b transitions seen, so p_hat_gg is exactly 1
    update_estimates(est, [G] * 15)
    assert current_good_probabilities(est) == [1.0] * 15
    alloc = assign_loads(est, LoadProfile(l_g=10, l_b=3, K_star=99, n=15))
    assert alloc.i_star == 8


def test_true_estimates_reproduce_genie():
    params = [WorkerParams(0.8, 0.7, 10, 3)] * 6
    profile = LoadProfile(l_g=10, l_b=3, K_star=40, n=6)
    previous = [G, B, G, G, B, B]
    est = EstimatorState(6)
    est.p_hat_gg = np.full(6, 0.8)
    est.p_hat_bb = np.full(6, 0.7)
    est.p_hat_g_next = np.where(previous, 0.8, 1 - 0.7)
    lea = assign_loads(est, profile)
    genie = genie_assign(previous, params, profile)
    assert lea.loads == genie.loads and lea.i_star == genie.i_star
    assert lea.success_prob == genie.success_prob


def test_genie_probabilities():
    cfg = ScenarioConfig.homogeneous(n=4, r=4, k=3, deg_f=1, d=1.0, mu_g=4, mu_b=1, p_gg=0.9, p_bb=0.6)
    genie = GenieStrategy(cfg)
    assert genie.good_probabilities() == pytest.approx([0.8] * 4)  # stationary before any round
    genie.observe(None, None, [G] * 4)
    assert genie.good_probabilities() == [0.9] * 4
    iid = ScenarioConfig.homogeneous(n=3, r=4, k=3, deg_f=1, d=1.0, mu_g=4, mu_b=1, p_gg=0.7, p_bb=0.3)
    genie = GenieStrategy(iid)
    for states in ([G, B, G], [B, B, B]):
        genie.observe(None, None, states)
        assert genie.good_probabilities() == pytest.approx([0.7] * 3)
