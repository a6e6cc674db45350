"""Trajectory-level Pareto analysis for finite-horizon decision processes.

Computes trajectory dominance and exact Pareto fronts, detects Pareto traps
(strict geometric criterion and policy-confinement criterion), classifies
them into a four-type geometric taxonomy, scores escape difficulty (TEDI),
computes dynamic intelligence ceilings, and reproduces the minimal-model
simulations with seeded determinism.
"""

from ._core import backend as kernel_backend
from .dominance import FrontResult, dominates, front_components, pareto_front, \
    pareto_front_costs, plan_front
from .env import ActionSpec, CostRule, EnvironmentSpec, TransitionRule, \
    builtin_env, load_env, load_env_file, serialize_env, step_cost, transition
from .errors import InfeasibleError, SpecError
from .sim import BatchStats, ComparisonReport, PolicySpec, compare_policies, \
    run_batch, select_action
from .tedi import EscapeCategory, TediReport, TediWeights, behavioral_inertia, \
    escape_distance, structural_constraint, tedi, tedi_for_trap
from .trajspace import Trajectory, TrajectorySpace, accumulate, \
    enumerate_trajectories, hamming, rollout
from .traps import FRONT_PLANNER, Scalarization, TaxonomyConfig, TaxonomyLabel, \
    Trap, TrapMode, ceiling, ceiling_gap, classify_trap, \
    detect_trap_confinement, detect_traps_strict, is_locally_pareto_optimal

__version__ = "0.1.0"

__all__ = [
    "ActionSpec",
    "BatchStats",
    "ComparisonReport",
    "CostRule",
    "EnvironmentSpec",
    "EscapeCategory",
    "FRONT_PLANNER",
    "FrontResult",
    "InfeasibleError",
    "PolicySpec",
    "Scalarization",
    "SpecError",
    "TaxonomyConfig",
    "TaxonomyLabel",
    "TediReport",
    "TediWeights",
    "Trajectory",
    "TrajectorySpace",
    "TransitionRule",
    "Trap",
    "TrapMode",
    "accumulate",
    "behavioral_inertia",
    "builtin_env",
    "ceiling",
    "ceiling_gap",
    "classify_trap",
    "compare_policies",
    "detect_trap_confinement",
    "detect_traps_strict",
    "dominates",
    "enumerate_trajectories",
    "escape_distance",
    "front_components",
    "hamming",
    "is_locally_pareto_optimal",
    "kernel_backend",
    "load_env",
    "load_env_file",
    "pareto_front",
    "pareto_front_costs",
    "plan_front",
    "rollout",
    "run_batch",
    "select_action",
    "serialize_env",
    "step_cost",
    "structural_constraint",
    "tedi",
    "tedi_for_trap",
    "transition",
]
