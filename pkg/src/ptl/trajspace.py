"""Trajectories, accumulated cost vectors, and finite trajectory spaces.

A trajectory is a state path plus the action sequence that produced it.
Trajectory identity is the action sequence; states are recomputed by replay
under deterministic dynamics. A TrajectorySpace packages a finite set of
trajectories with their accumulated costs and a Hamming-edit adjacency
relation (two items are adjacent when their action sequences differ in at
most ``epsilon`` positions).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._core import kernels
from .env import EnvironmentSpec, build_tables, step_cost, transition
from .errors import InfeasibleError, SpecError

ENUMERATION_CAP = 10_000_000


@dataclass(frozen=True)
class Trajectory:
    """A horizon-T path: T+1 states and the T actions between them."""

    states: tuple[int, ...]
    actions: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(int(s) for s in self.states))
        object.__setattr__(self, "actions", tuple(int(a) for a in self.actions))
        if len(self.states) != len(self.actions) + 1:
            raise SpecError(
                f"trajectory: {len(self.states)} states do not fit "
                f"{len(self.actions)} actions"
            )

    @property
    def horizon(self) -> int:
        return len(self.actions)

    @property
    def final_state(self) -> int:
        return self.states[-1]


def accumulate(spec: EnvironmentSpec, traj: Trajectory) -> np.ndarray:
    """Accumulated cost vector: per-objective sums of step costs.

    Sums are correctly rounded (math.fsum), so e.g. thirty 0.1 steps total
    exactly 3.0. For deterministic environments the state path is replayed
    and must match the trajectory.
    """
    if traj.horizon < 0:
        raise SpecError("trajectory horizon must be >= 0")
    deterministic = spec.deterministic
    state = traj.states[0]
    terms: list[list[float]] = [[] for _ in range(spec.num_objectives)]
    for t, action in enumerate(traj.actions):
        c = step_cost(spec, traj.states[t], action)
        for i in range(spec.num_objectives):
            terms[i].append(float(c[i]))
        if deterministic:
            state = transition(spec, traj.states[t], action, None)
            if state != traj.states[t + 1]:
                raise SpecError(
                    f"trajectory is not replay-consistent at step {t}: "
                    f"expected state {state}, found {traj.states[t + 1]}"
                )
    return np.array([math.fsum(ts) for ts in terms], dtype=np.float64)


def hamming(a: Trajectory, b: Trajectory) -> int:
    """Number of positions where the action sequences differ."""
    if a.horizon != b.horizon:
        raise SpecError(
            f"hamming: horizons differ ({a.horizon} vs {b.horizon})"
        )
    return sum(x != y for x, y in zip(a.actions, b.actions))


def rollout(spec: EnvironmentSpec, policy, seed: int, horizon: int | None = None) -> Trajectory:
    """Simulate one episode from state 0.

    Fully determined by (spec, policy, seed): each rollout owns a fresh
    PCG64 stream, and within a step the policy draws first, then the
    transition. ``horizon`` overrides ``spec.horizon`` when given.
    """
    T = spec.horizon if horizon is None else int(horizon)
    rng = np.random.default_rng(seed)
    state = 0
    states = [0]
    actions = []
    for t in range(T):
        action = policy.select_action(spec, state, t, rng)
        actions.append(action)
        state = transition(spec, state, action, rng)
        states.append(state)
    return Trajectory(states=tuple(states), actions=tuple(actions))


@dataclass
class TrajectorySpace:
    """A finite set of trajectories with costs and edit-distance adjacency.

    Stored columnar: ``actions`` (n, T) int8, ``states`` (n, T+1) int16,
    ``costs`` (n, m) float64. Ids are row indices; for complete enumerations
    they follow lexicographic action-sequence order. Treat instances as
    immutable values.
    """

    env: EnvironmentSpec
    actions: np.ndarray
    states: np.ndarray
    costs: np.ndarray
    epsilon: int = 1
    complete: bool = False
    _adjacency: tuple | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.epsilon < 0:
            raise SpecError("epsilon: must be >= 0")
        n = self.actions.shape[0]
        if self.states.shape[0] != n or self.costs.shape[0] != n:
            raise SpecError("trajectory space arrays disagree on item count")
        if self.states.shape[1] != self.actions.shape[1] + 1:
            raise SpecError("states must have horizon + 1 columns")

    def __len__(self) -> int:
        return self.actions.shape[0]

    @property
    def horizon(self) -> int:
        return self.actions.shape[1]

    def trajectory(self, item_id: int) -> Trajectory:
        self._check_id(item_id)
        return Trajectory(
            states=tuple(int(s) for s in self.states[item_id]),
            actions=tuple(int(a) for a in self.actions[item_id]),
        )

    def cost(self, item_id: int) -> np.ndarray:
        self._check_id(item_id)
        return self.costs[item_id].copy()

    def items(self):
        """Iterate (id, Trajectory, cost vector)."""
        for i in range(len(self)):
            yield i, self.trajectory(i), self.cost(i)

    def adjacency(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR (indptr, indices) of the epsilon-edit adjacency; cached."""
        if self._adjacency is None:
            indptr, indices = kernels.hamming_adjacency(
                np.ascontiguousarray(self.actions, dtype=np.int8), self.epsilon
            )
            self._adjacency = (indptr, indices)
        return self._adjacency

    def neighbors(self, item_id: int) -> np.ndarray:
        self._check_id(item_id)
        indptr, indices = self.adjacency()
        return indices[indptr[item_id]:indptr[item_id + 1]]

    def index_of(self, actions) -> int:
        """Id of the item carrying this action sequence."""
        seq = tuple(int(a) for a in actions)
        if len(seq) != self.horizon:
            raise SpecError(
                f"action sequence has length {len(seq)}, space horizon is "
                f"{self.horizon} (horizon mismatch)"
            )
        if self.complete:
            a = self.env.num_actions
            idx = 0
            for digit in seq:
                idx = idx * a + digit
            return idx
        matches = np.nonzero((self.actions == np.array(seq, dtype=np.int8)).all(axis=1))[0]
        if matches.size == 0:
            raise SpecError("action sequence not present in this trajectory space")
        return int(matches[0])

    def _check_id(self, item_id: int) -> None:
        if not 0 <= item_id < len(self):
            raise SpecError(f"item id {item_id} out of range [0, {len(self)})")


def enumerate_trajectories(
    spec: EnvironmentSpec,
    horizon_override: int | None = None,
    *,
    epsilon: int = 1,
    cap: int = ENUMERATION_CAP,
) -> TrajectorySpace:
    """All |A|**T action sequences of a deterministic environment, realized
    as replay-consistent trajectories with accumulated costs.

    Ids follow lexicographic action-sequence order. Raises InfeasibleError
    for stochastic environments or when |A|**T exceeds ``cap``.
    """
    if not spec.deterministic:
        raise InfeasibleError(
            f"environment {spec.name!r} is stochastic; exhaustive enumeration "
            "is infeasible"
        )
    T = spec.horizon if horizon_override is None else int(horizon_override)
    if T < 1:
        raise SpecError("horizon: must be >= 1")
    count = spec.num_actions ** T
    if count > cap:
        raise InfeasibleError(
            f"enumeration of {spec.num_actions}^{T} = {count} trajectories "
            f"exceeds the cap of {cap}"
        )
    trans, cost_table = build_tables(spec)
    actions, states, costs = kernels.enumerate_paths(
        trans, cost_table, T, spec.num_actions
    )
    return TrajectorySpace(
        env=spec,
        actions=actions,
        states=states,
        costs=costs,
        epsilon=epsilon,
        complete=True,
    )
