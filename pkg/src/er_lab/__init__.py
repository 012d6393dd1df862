"""Component-counting analysis of Erdos-Renyi G(n, p) graphs."""

from .bounds import THETA, PhaseParams
from .components import ComponentProfile, EventFlags, component_profile, evaluate_events
from .experiments import ExperimentConfig, ExperimentReport, run_experiment, run_trial
from .oracle import ExactDistribution, brute_force_distribution, exact_component_distribution
from .sampler import GraphSample, SampleSpec, sample_gnp

__all__ = [
    "THETA",
    "PhaseParams",
    "ComponentProfile",
    "EventFlags",
    "component_profile",
    "evaluate_events",
    "ExperimentConfig",
    "ExperimentReport",
    "run_experiment",
    "run_trial",
    "ExactDistribution",
    "brute_force_distribution",
    "exact_component_distribution",
    "GraphSample",
    "SampleSpec",
    "sample_gnp",
]
