"""Multi-round simulation of coded computation over Markov workers.

Each round the strategy picks a load vector, every worker finishes its load
at the speed of its current (hidden) state, and the round succeeds when the
evaluations that arrive by the deadline reach the recovery threshold. The
timely computation throughput is the fraction of successful rounds.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .allocation import (
    AllocationVector,
    DeadlineInfeasible,
    check_feasible,
    optimal_prefix_allocation,
)
from .coding import (
    CodingScheme,
    Dataset,
    NotDecodable,
    WorkFunction,
    decode,
    encode,
    make_scheme,
    recovery_threshold,
)
from .field import DEFAULT_PRIME
from .lea import EstimatorState, UnclassifiableObservation, infer_state
from .success_model import LoadProfile, tier_load
from .worker_net import (
    NetworkState,
    WorkerParams,
    auxiliary_stream,
    completion_time,
    simulate_states,
    stationary_distribution,
    step_states,
)

log = logging.getLogger(__name__)

STRATEGIES = ("lea", "static", "genie")
FIDELITIES = ("analytic", "full")

# relative slack when comparing a completion time against the deadline
DEADLINE_SLACK = 1e-12


class ConfigError(ValueError):
    pass


@dataclass
class ScenarioConfig:
    n: int
    r: int
    k: int
    deg_f: int
    d: float
    workers: list[WorkerParams]
    strategy: str = "lea"
    static_good_prob: float | None = None
    rounds: int = 100_000
    seed: int = 0
    fidelity: str = "analytic"
    chunk_len: int = 4
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        self.validate()

    @classmethod
    def homogeneous(cls, *, n, r, k, deg_f, d, mu_g, mu_b, p_gg, p_bb, **kwargs):
        workers = [WorkerParams(p_gg, p_bb, mu_g, mu_b) for _ in range(n)]
        return cls(n=n, r=r, k=k, deg_f=deg_f, d=d, workers=workers, **kwargs)

    @property
    def mu_g(self) -> float:
        return self.workers[0].mu_g

    @property
    def mu_b(self) -> float:
        return self.workers[0].mu_b

    @property
    def K_star(self) -> int:
        return recovery_threshold(self.n, self.r, self.k, self.deg_f)

    @property
    def profile(self) -> LoadProfile:
        return LoadProfile.from_speeds(self.mu_g, self.mu_b, self.d, self.r, self.K_star, self.n)

    def scheme(self) -> CodingScheme:
        return make_scheme(self.n, self.r, self.k, self.deg_f, self.prime)

    def with_(self, **changes) -> "ScenarioConfig":
        return replace(self, **changes)

    def validate(self) -> None:
        for name in ("n", "r", "k", "deg_f", "rounds", "chunk_len"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if not self.d > 0:
            raise ConfigError("d must be positive")
        if len(self.workers) != self.n:
            raise ConfigError(f"n = {self.n} but {len(self.workers)} worker parameter sets given")
        if len({(w.mu_g, w.mu_b) for w in self.workers}) != 1:
            raise ConfigError("mu_g and mu_b must be shared by all workers")
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.fidelity not in FIDELITIES:
            raise ConfigError(f"fidelity must be one of {FIDELITIES}, got {self.fidelity!r}")
        if self.static_good_prob is not None and not 0.0 <= self.static_good_prob <= 1.0:
            raise ConfigError("static_good_prob must lie in [0, 1]")
        try:
            self.scheme()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        profile = self.profile
        if profile.l_g < 1:
            raise ConfigError(f"l_g = min(floor(mu_g*d), r) = {profile.l_g}; must be >= 1")
        try:
            check_feasible(profile)
        except DeadlineInfeasible as exc:
            raise ConfigError(str(exc)) from None
        if profile.K_star <= self.n * profile.l_b:
            log.warning(
                "K* = %d <= n*l_b = %d: every round finishes on time regardless of allocation",
                profile.K_star, self.n * profile.l_b,
            )


@dataclass(slots=True)
class RoundOutcome:
    round: int
    strategy: str
    i_star: int
    est_success_prob: float | None
    n_good_true: int
    on_time_evals: int
    success: int
    # per-worker detail, populated only on request
    allocation: AllocationVector | None = None
    true_states: list[bool] | None = None
    completion_times: list[float] | None = None
    decoded: bool | None = None


@dataclass
class SummaryReport:
    config: ScenarioConfig
    strategy: str
    throughput: float
    rounds: list[RoundOutcome] = field(repr=False)
    final_estimates: list[tuple[int, float, float]] | None = None

    @property
    def M(self) -> int:
        return len(self.rounds)


def throughput(outcomes: Sequence) -> float:
    if len(outcomes) == 0:
        raise ValueError("throughput of an empty round log is undefined")
    return sum(o.success if hasattr(o, "success") else o for o in outcomes) / len(outcomes)


def on_time(time: float, d: float) -> bool:
    return time <= d * (1 + DEADLINE_SLACK)


# -- strategies ------------------------------------------------------------


class Strategy:
    name = ""

    def assign(self) -> AllocationVector:
        raise NotImplementedError

    def observe(self, loads, times, true_states) -> None:
        pass


class LeaStrategy(Strategy):
    name = "lea"

    def __init__(self, config: ScenarioConfig, tol: float = 1e-9):
        self.profile = config.profile
        self.mu_g, self.mu_b = config.mu_g, config.mu_b
        self.tol = tol
        self.estimator = EstimatorState(config.n)
        self.unclassified = 0

    def assign(self) -> AllocationVector:
        return optimal_prefix_allocation(self.estimator.current_good_probabilities(), self.profile)

    def observe(self, loads, times, true_states) -> None:
        observed = []
        for load, t in zip(loads, times):
            if load < 1:
                observed.append(None)
                continue
            try:
                observed.append(infer_state(load, t, self.mu_g, self.mu_b, self.tol))
            except UnclassifiableObservation:
                self.unclassified += 1
                observed.append(None)
        self.estimator.update(observed)


class GenieStrategy(Strategy):
    """Knows the true transition matrices and last round's true states."""

    name = "genie"

    def __init__(self, config: ScenarioConfig):
        self.profile = config.profile
        self.workers = config.workers
        self.previous: tuple[bool, ...] | None = None
        self._cache: dict = {}

    def good_probabilities(self) -> list[float]:
        if self.previous is None:
            return [stationary_distribution(w)[0] for w in self.workers]
        return [w.next_good_probability(s) for w, s in zip(self.workers, self.previous)]

    def assign(self) -> AllocationVector:
        alloc = self._cache.get(self.previous)
        if alloc is None:
            alloc = optimal_prefix_allocation(self.good_probabilities(), self.profile)
            self._cache[self.previous] = alloc
        return alloc

    def observe(self, loads, times, true_states) -> None:
        self.previous = tuple(bool(s) for s in true_states)


def genie_assign(previous_states, params: Sequence[WorkerParams], profile: LoadProfile) -> AllocationVector:
    probs = [w.next_good_probability(bool(s)) for w, s in zip(params, previous_states)]
    return optimal_prefix_allocation(probs, profile)


class StaticStrategy(Strategy):
    """Draws each worker's tier from its stationary law, redrawing until total >= K*."""

    name = "static"
    MAX_REDRAWS = 1_000_000

    def __init__(self, config: ScenarioConfig, rng: np.random.Generator):
        self.profile = config.profile
        if config.static_good_prob is not None:
            self.probs = np.full(config.n, config.static_good_prob)
        else:
            self.probs = np.array([stationary_distribution(w)[0] for w in config.workers])
        self.rng = rng
        check_feasible(self.profile)
        prof = self.profile
        # the largest total any draw can reach
        reachable = sum(prof.l_g if q > 0 else prof.l_b for q in self.probs)
        if reachable < prof.K_star:
            raise DeadlineInfeasible("static strategy can never reach K* with these probabilities")

    def assign(self) -> AllocationVector:
        return static_assign(self.profile, self.probs, self.rng, self.MAX_REDRAWS)


def static_assign(profile: LoadProfile, probs, rng: np.random.Generator, max_redraws: int = 1_000_000) -> AllocationVector:
    probs = np.asarray(probs, dtype=float)
    for _ in range(max_redraws):
        high = rng.random(profile.n) < probs
        n_high = int(high.sum())
        if profile.total_load(n_high) >= profile.K_star:
            loads = [profile.l_g if h else profile.l_b for h in high.tolist()]
            ordering = [i for i in range(profile.n) if high[i]] + [i for i in range(profile.n) if not high[i]]
            return AllocationVector(loads=loads, i_star=n_high, ordering=ordering)
    raise DeadlineInfeasible(f"no static draw reached K* in {max_redraws} attempts")


def make_strategy(name: str, config: ScenarioConfig) -> Strategy:
    if name == "lea":
        return LeaStrategy(config)
    if name == "genie":
        return GenieStrategy(config)
    if name == "static":
        return StaticStrategy(config, auxiliary_stream(config.seed, "static"))
    raise ConfigError(f"unknown strategy {name!r}")


# -- full-fidelity coded path ----------------------------------------------


class CodedRound:
    """Encodes one dataset up front, then computes and decodes each round."""

    def __init__(self, config: ScenarioConfig):
        self.scheme = config.scheme()
        self.rng = auxiliary_stream(config.seed, "coded")
        self.data = Dataset.random(config.k, config.chunk_len, self.rng, config.prime)
        self.shards = encode(self.data, self.scheme)
        self.deg_f = config.deg_f
        self.chunk_len = config.chunk_len
        self.p = config.prime

    def run(self, loads, finished) -> bool:
        """True when the on-time results decode to the correct evaluations."""
        f = WorkFunction.random(self.deg_f, self.chunk_len, self.rng, self.p)
        results = []
        for worker, (load, ok) in enumerate(zip(loads, finished), start=1):
            if not ok:
                continue
            for v in self.scheme.shard_indices(worker, load):
                results.append((v, f(self.shards[v - 1].payload, self.p)))
        try:
            decoded = decode(results, self.scheme, f)
        except NotDecodable:
            return False
        expected = [f(chunk, self.p) for chunk in self.data.chunks]
        if not all(np.array_equal(a, b) for a, b in zip(decoded, expected)):
            raise AssertionError("decoded evaluations differ from direct computation")
        return True


# -- round loop ------------------------------------------------------------


def run_round(
    states: Sequence[bool],
    strategy: Strategy,
    config: ScenarioConfig,
    round_index: int = 1,
    coded: CodedRound | None = None,
    keep_details: bool = False,
) -> RoundOutcome:
    """Play one round against the given true worker states.

    The strategy observes the round (and LEA updates its estimates) before
    this returns; advancing the worker states is the caller's job.
    """
    alloc = strategy.assign()
    loads = alloc.loads
    d = config.d
    times = [completion_time(load, good, w) for load, good, w in zip(loads, states, config.workers)]
    finished = [on_time(t, d) for t in times]
    evals = sum(load for load, ok in zip(loads, finished) if ok)
    success = int(evals >= config.K_star)
    decoded = None
    if coded is not None:
        decoded = coded.run(loads, finished)
        if decoded != bool(success):
            raise AssertionError(
                f"round {round_index}: analytic success {success} but decode={decoded}"
            )
    strategy.observe(loads, times, states)
    out = RoundOutcome(
        round=round_index,
        strategy=strategy.name,
        i_star=alloc.i_star,
        est_success_prob=alloc.success_prob,
        n_good_true=int(sum(states)),
        on_time_evals=evals,
        success=success,
        decoded=decoded,
    )
    if keep_details:
        out.allocation = alloc
        out.true_states = [bool(s) for s in states]
        out.completion_times = times
    return out


def step_round(state: NetworkState, strategy: Strategy, config: ScenarioConfig, rngs, **kwargs):
    """``run_round`` followed by a Markov step: returns (outcome, next state)."""
    outcome = run_round(state.states, strategy, config, state.round, **kwargs)
    return outcome, step_states(state, config.workers, rngs)


def run_paired(
    config: ScenarioConfig,
    strategies: Sequence[str],
    trajectory: np.ndarray | None = None,
    keep_details: bool = False,
) -> dict[str, SummaryReport]:
    """Run several strategies against one shared worker-state trajectory."""
    if trajectory is None:
        trajectory = simulate_states(config.workers, config.rounds, config.seed)
    if trajectory.shape != (config.rounds, config.n):
        raise ValueError("trajectory shape does not match config")
    states_rows = trajectory.tolist()
    reports = {}
    for name in strategies:
        strategy = make_strategy(name, config)
        coded = CodedRound(config) if config.fidelity == "full" else None
        outcomes = [
            run_round(row, strategy, config, m, coded=coded, keep_details=keep_details)
            for m, row in enumerate(states_rows, start=1)
        ]
        final = strategy.estimator.snapshot() if isinstance(strategy, LeaStrategy) else None
        reports[name] = SummaryReport(
            config=config.with_(strategy=name),
            strategy=name,
            throughput=throughput(outcomes),
            rounds=outcomes,
            final_estimates=final,
        )
    return reports


def run_simulation(config: ScenarioConfig, keep_details: bool = False) -> SummaryReport:
    return run_paired(config, [config.strategy], keep_details=keep_details)[config.strategy]
