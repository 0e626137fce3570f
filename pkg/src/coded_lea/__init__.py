"""Lagrange-coded computation with online load allocation over Markov workers."""

from .allocation import AllocationVector, DeadlineInfeasible, optimal_prefix_allocation
from .coding import (
    CodingScheme,
    Dataset,
    WorkFunction,
    decode,
    encode,
    make_scheme,
    recovery_threshold,
)
from .lea import EstimatorState
from .sim import ScenarioConfig, SummaryReport, run_paired, run_simulation, throughput
from .success_model import LoadProfile
from .worker_net import WorkerParams, stationary_distribution

__version__ = "0.1.0"
