"""Density-matrix simulation of linear photonic clusters fused from dephased primitives."""

__version__ = "0.1.0"

from .cluster_states import ClusterChain, LabelCounter, fresh_primitive, linear_cluster
from .densmat import DensityMatrix, PureState, fidelity_pure, partial_trace, partial_transpose, purity
from .fusion import FusionOutcome, aggregate_failure, fuse
from .noise import dephase_all, dephasing_kraus, time_to_strength
from .strategies import McPolicy, Scenario, ScenarioName, compare_methods, monte_carlo, run_scenario

__all__ = [
    "ClusterChain",
    "DensityMatrix",
    "FusionOutcome",
    "LabelCounter",
    "McPolicy",
    "PureState",
    "Scenario",
    "ScenarioName",
    "aggregate_failure",
    "compare_methods",
    "dephase_all",
    "dephasing_kraus",
    "fidelity_pure",
    "fresh_primitive",
    "fuse",
    "linear_cluster",
    "monte_carlo",
    "partial_trace",
    "partial_transpose",
    "purity",
    "run_scenario",
    "time_to_strength",
]
