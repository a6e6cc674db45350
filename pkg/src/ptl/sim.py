"""Policy classes and the seeded batch simulation harness.

Three fixed policy rules (no learning): point-wise greedy on instantaneous
cost sums, a trajectory-dominant rule that tolerates short-term cost spikes
(restructure with fixed probability, otherwise explore below a state
threshold, otherwise exploit), and a uniform-random baseline.

Reproducibility contract: run r of a batch uses one PCG64 stream seeded
with base_seed XOR r; within a step the policy draws first, then the
transition. Batches are bitwise reproducible independent of thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dominance import FrontResult, pareto_front_costs
from .env import EnvironmentSpec, step_cost
from .errors import SpecError
from .trajspace import Trajectory, accumulate, rollout

POLICY_KINDS = ("pointwise", "trajectory", "random")

# Action-index convention of the three-action toy models, used by the
# trajectory-dominant rule.
EXPLOIT, EXPLORE, RESTRUCTURE = 0, 1, 2


@dataclass(frozen=True)
class PolicySpec:
    """One of the fixed policy rules; immutable and thread-safe."""

    kind: str
    restructure_rate: float = 0.1
    explore_below: int = 3

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise SpecError(
                f"unknown policy {self.kind!r}; valid: {', '.join(POLICY_KINDS)}"
            )
        if not 0.0 <= self.restructure_rate <= 1.0:
            raise SpecError("restructure_rate must lie in [0, 1]")

    @classmethod
    def pointwise(cls) -> "PolicySpec":
        return cls("pointwise")

    @classmethod
    def trajectory_dominant(cls, restructure_rate: float = 0.1,
                            explore_below: int = 3) -> "PolicySpec":
        return cls("trajectory", restructure_rate, explore_below)

    @classmethod
    def random_uniform(cls) -> "PolicySpec":
        return cls("random")

    @property
    def is_deterministic(self) -> bool:
        if self.kind == "pointwise":
            return True
        if self.kind == "trajectory":
            return self.restructure_rate == 0.0
        return False

    def select_action(self, spec: EnvironmentSpec, state: int, t: int, rng) -> int:
        return select_action(self, spec, state, t, rng)


def select_action(policy: PolicySpec, spec: EnvironmentSpec, state: int,
                  t: int, rng) -> int:
    """Next action index under the policy rule.

    Pointwise: argmin of the unweighted sum of instantaneous costs, ties to
    the lowest action index. Trajectory-dominant: restructure roll first,
    then explore below the state threshold, else exploit. Random: uniform.
    """
    if policy.kind == "pointwise":
        sums = [float(step_cost(spec, state, a).sum()) for a in range(spec.num_actions)]
        return min(range(spec.num_actions), key=sums.__getitem__)
    if policy.kind == "trajectory":
        if spec.num_actions <= RESTRUCTURE:
            raise SpecError(
                "trajectory-dominant policy expects the three-action layout "
                "(exploit/explore/restructure)"
            )
        if policy.explore_below >= spec.n_states:
            raise SpecError("explore_below must be below n_states")
        if rng.random() < policy.restructure_rate:
            return RESTRUCTURE
        if state < policy.explore_below:
            return EXPLORE
        return EXPLOIT
    return int(rng.integers(spec.num_actions))


@dataclass
class BatchStats:
    """Aggregated results of one policy's seeded batch."""

    policy: PolicySpec
    runs: int
    base_seed: int
    states: np.ndarray          # (runs, T+1) visited states
    actions: np.ndarray         # (runs, T) chosen actions
    costs: np.ndarray           # (runs, m) accumulated cost vectors
    final_states: np.ndarray    # (runs,)
    final_state_histogram: np.ndarray   # (n_states,)
    action_counts: np.ndarray   # (num_actions,)
    mean_state_curve: np.ndarray        # (T+1,)
    mean_cum_j1_curve: np.ndarray       # (T+1,), row 0 is 0.0
    step_costs_j1: np.ndarray = field(repr=False, default=None)  # (runs, T)

    @property
    def action_frequencies(self) -> np.ndarray:
        return self.action_counts / self.action_counts.sum()

    def final_state_cdf(self) -> np.ndarray:
        return np.cumsum(self.final_state_histogram) / self.runs


def run_batch(spec: EnvironmentSpec, policy: PolicySpec, runs: int,
              base_seed: int, threads: int = 1) -> BatchStats:
    """Simulate ``runs`` seeded rollouts and aggregate their statistics."""
    if runs < 1:
        raise SpecError("runs must be >= 1")
    T = spec.horizon
    m = spec.num_objectives

    def one(r: int):
        traj = rollout(spec, policy, base_seed ^ r)
        cost = accumulate(spec, traj)
        j1_steps = np.array(
            [step_cost(spec, traj.states[t], traj.actions[t])[0] for t in range(T)]
        )
        return traj, cost, j1_steps

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, range(runs)))
    else:
        results = [one(r) for r in range(runs)]

    states = np.empty((runs, T + 1), dtype=np.int16)
    actions = np.empty((runs, T), dtype=np.int8)
    costs = np.empty((runs, m), dtype=np.float64)
    j1 = np.empty((runs, T), dtype=np.float64)
    for r, (traj, cost, j1_steps) in enumerate(results):
        states[r] = traj.states
        actions[r] = traj.actions
        costs[r] = cost
        j1[r] = j1_steps

    final_states = states[:, -1].astype(np.int64)
    cum_j1 = np.zeros((runs, T + 1), dtype=np.float64)
    np.cumsum(j1, axis=1, out=cum_j1[:, 1:])
    return BatchStats(
        policy=policy,
        runs=runs,
        base_seed=base_seed,
        states=states,
        actions=actions,
        costs=costs,
        final_states=final_states,
        final_state_histogram=np.bincount(final_states, minlength=spec.n_states),
        action_counts=np.bincount(actions.ravel(), minlength=spec.num_actions),
        mean_state_curve=states.mean(axis=0),
        mean_cum_j1_curve=cum_j1.mean(axis=0),
        step_costs_j1=j1,
    )


@dataclass
class ComparisonReport:
    """Side-by-side batches plus pooled cost-cloud analytics."""

    spec: EnvironmentSpec
    labels: tuple[str, ...]
    stats: tuple[BatchStats, ...]
    pooled_costs: np.ndarray        # (sum runs, m)
    pooled_policy_idx: np.ndarray   # (sum runs,) index into labels
    pooled_run_ids: np.ndarray      # (sum runs,) run id within its batch
    pooled_front: FrontResult
    j2_bin_edges: np.ndarray        # (bins+1,) shared across policies
    j2_histograms: np.ndarray       # (len(labels), bins)


J2_HISTOGRAM_BINS = 20


def compare_policies(spec: EnvironmentSpec, policies, runs: int,
                     base_seed: int, threads: int = 1) -> ComparisonReport:
    """Run each policy on the same seed schedule and pool the cost clouds."""
    policies = list(policies)
    if len(policies) < 2:
        raise SpecError("compare_policies needs at least 2 policies")
    stats = tuple(
        run_batch(spec, p, runs, base_seed, threads=threads) for p in policies
    )
    pooled_costs = np.concatenate([s.costs for s in stats], axis=0)
    pooled_policy_idx = np.concatenate(
        [np.full(s.runs, k, dtype=np.int64) for k, s in enumerate(stats)]
    )
    pooled_run_ids = np.concatenate(
        [np.arange(s.runs, dtype=np.int64) for s in stats]
    )
    front = pareto_front_costs(pooled_costs)

    j2 = pooled_costs[:, 1] if spec.num_objectives > 1 else pooled_costs[:, 0]
    lo, hi = float(j2.min()), float(j2.max())
    if hi == lo:
        hi = lo + 1.0
    edges = np.linspace(lo, hi, J2_HISTOGRAM_BINS + 1)
    hists = np.stack([
        np.histogram(
            s.costs[:, 1] if spec.num_objectives > 1 else s.costs[:, 0], bins=edges
        )[0]
        for s in stats
    ])
    return ComparisonReport(
        spec=spec,
        labels=tuple(p.kind for p in policies),
        stats=stats,
        pooled_costs=pooled_costs,
        pooled_policy_idx=pooled_policy_idx,
        pooled_run_ids=pooled_run_ids,
        pooled_front=front,
        j2_bin_edges=edges,
        j2_histograms=hists,
    )
