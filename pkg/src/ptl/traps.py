"""Pareto trap detection, taxonomy, and dynamic intelligence ceilings.

Two operational trap criteria:

* Strict: connected components of the locally-non-dominated set that some
  external trajectory dominates, where every edit path out to a dominating
  trajectory passes through an intermediate with a cost coordinate strictly
  above the start (temporary degradation certificate).
* Confinement: the reachable trajectory set of a policy mapped into a
  complete reference enumeration, with the ceiling gap certifying
  sub-global reach.

The strict criterion is provably unsatisfiable for the all-exploit
trajectory of the builtin toy models (it globally minimizes the first
objective, so nothing dominates it); the two-basin fixture exists to
exercise it. The confinement criterion reproduces the toy models' story.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .dominance import pareto_front
from .errors import InfeasibleError, SpecError
from .tedi import behavioral_inertia, member_action_counts, normalized_costs
from .trajspace import TrajectorySpace, enumerate_trajectories, rollout

FRONT_PLANNER = "front-planner"


class TrapMode(str, Enum):
    STRICT = "strict"
    CONFINEMENT = "confinement"


class TaxonomyLabel(str, Enum):
    LOCAL_BASIN = "local_basin"
    NARROW_CORRIDOR = "narrow_corridor"
    OPTIMALITY_PLATEAU = "optimality_plateau"
    ATTRACTOR_LOOP = "attractor_loop"


@dataclass(frozen=True)
class TaxonomyConfig:
    """Thresholds of the classification cascade (checked in order)."""

    loop_inertia_min: float = 0.8
    loop_pair_share_min: float = 0.5
    corridor_max_cheap_exits: int = 2
    corridor_tolerance: float = 0.1
    plateau_min_members: int = 8
    plateau_max_spread: float = 0.1


@dataclass(frozen=True)
class Scalarization:
    """Monotone effective-intelligence score f(v) = -sum(w_i * v_i)."""

    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "weights", tuple(float(w) for w in self.weights)
        )
        if not self.weights:
            raise SpecError("scalarization needs at least one weight")
        if any(w < 0 for w in self.weights):
            raise SpecError("scalarization weights must be non-negative")
        if abs(math.fsum(self.weights) - 1.0) > 1e-12:
            raise SpecError("scalarization weights must sum to 1")

    @classmethod
    def uniform(cls, m: int) -> "Scalarization":
        return cls(tuple(1.0 / m for _ in range(m)))

    @classmethod
    def normalized(cls, weights) -> "Scalarization":
        total = math.fsum(weights)
        if total <= 0:
            raise SpecError("scalarization weights must have a positive sum")
        return cls(tuple(w / total for w in weights))

    def __call__(self, costs) -> float:
        if len(costs) != len(self.weights):
            raise SpecError(
                f"cost vector has {len(costs)} components, scalarization "
                f"expects {len(self.weights)}"
            )
        return -math.fsum(w * float(v) for w, v in zip(self.weights, costs))


@dataclass(frozen=True)
class Trap:
    member_ids: tuple[int, ...]
    witnesses: tuple[int, ...]
    boundary_edges: tuple[tuple[int, int], ...]
    mode: TrapMode
    label: TaxonomyLabel | None = None
    confinement_threshold: int | None = None


def is_locally_pareto_optimal(space: TrajectorySpace, item_id: int) -> bool:
    """True iff no epsilon-neighbor dominates the item."""
    space._check_id(item_id)
    nb = space.neighbors(item_id)
    if nb.size == 0:
        return True
    ci = space.costs[item_id]
    cn = space.costs[nb]
    return not bool(((cn <= ci).all(axis=1) & (cn < ci).any(axis=1)).any())


def _components(ids: list[int], space: TrajectorySpace) -> list[list[int]]:
    """Connected components (epsilon-adjacency) of a subset, id-ordered."""
    member = set(ids)
    indptr, indices = space.adjacency()
    seen: set[int] = set()
    comps = []
    for start in ids:
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in indices[indptr[u]:indptr[u + 1]]:
                v = int(v)
                if v in member and v not in seen:
                    seen.add(v)
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def _boundary_edges(space: TrajectorySpace, members: set[int]) -> tuple[tuple[int, int], ...]:
    indptr, indices = space.adjacency()
    edges = []
    for i in sorted(members):
        for j in indices[indptr[i]:indptr[i + 1]]:
            j = int(j)
            if j not in members:
                edges.append((i, j))
    return tuple(edges)


def _degradation_free_escape(space: TrajectorySpace, members: list[int],
                             witnesses: set[int]) -> bool:
    """True when some member can reach some witness through intermediates
    whose costs never exceed the start's in any coordinate."""
    costs = space.costs
    indptr, indices = space.adjacency()
    for start in members:
        base = costs[start]
        allowed = (costs <= base).all(axis=1)
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in indices[indptr[u]:indptr[u + 1]]:
                v = int(v)
                if v in witnesses:
                    return True
                if v not in seen and allowed[v]:
                    seen.add(v)
                    stack.append(v)
    return False


def _max_member_state(space: TrajectorySpace, members) -> int:
    ids = np.asarray(tuple(members), dtype=np.int64)
    return int(space.states[ids].max())


def detect_traps_strict(space: TrajectorySpace,
                        config: TaxonomyConfig | None = None) -> list[Trap]:
    """Strict-criterion traps of a complete enumerated space.

    A connected component of the locally-Pareto-optimal set is a trap when
    some external item dominates some member and every single-edit path
    from the component to a dominating item passes through temporary
    degradation.
    """
    if not space.complete:
        raise InfeasibleError(
            "strict trap detection requires a complete enumerated space"
        )
    costs = space.costs
    indptr, indices = space.adjacency()
    from ._core import kernels

    flags = kernels.local_pareto_flags(
        np.ascontiguousarray(costs, dtype=np.float64), indptr, indices
    )
    optimal_ids = [int(i) for i in np.nonzero(flags)[0]]
    traps = []
    for comp in _components(optimal_ids, space):
        comp_set = set(comp)
        witness_set: set[int] = set()
        for i in comp:
            ci = costs[i]
            dom = (costs <= ci).all(axis=1) & (costs < ci).any(axis=1)
            witness_set.update(int(j) for j in np.nonzero(dom)[0])
        witness_set -= comp_set
        if not witness_set:
            continue
        if _degradation_free_escape(space, comp, witness_set):
            continue
        trap = Trap(
            member_ids=tuple(comp),
            witnesses=tuple(sorted(witness_set)),
            boundary_edges=_boundary_edges(space, comp_set),
            mode=TrapMode.STRICT,
            confinement_threshold=_max_member_state(space, comp),
        )
        traps.append(replace(trap, label=classify_trap(space, trap, config=config)))
    return traps


def detect_trap_confinement(spec, policy, reference: TrajectorySpace,
                            seeds=None,
                            config: TaxonomyConfig | None = None) -> Trap:
    """Confinement-criterion trap: the policy's reachable trajectories
    mapped into a complete reference enumeration.

    Deterministic policies need no seeds (their single trajectory is the
    member set); stochastic policies require a non-empty seed set.
    """
    if not reference.complete:
        raise InfeasibleError("confinement detection requires a complete reference space")
    if getattr(policy, "is_deterministic", False):
        seed_list = [0]
    else:
        if not seeds:
            raise SpecError(
                "stochastic policy requires a non-empty seed set for "
                "confinement detection"
            )
        seed_list = [int(s) for s in seeds]
    horizon = reference.horizon
    member_set: set[int] = set()
    for seed in seed_list:
        traj = rollout(spec, policy, seed, horizon=horizon)
        member_set.add(reference.index_of(traj.actions))
    members = tuple(sorted(member_set))
    trap = Trap(
        member_ids=members,
        witnesses=(),
        boundary_edges=_boundary_edges(reference, set(members)),
        mode=TrapMode.CONFINEMENT,
        confinement_threshold=_max_member_state(reference, members),
    )
    return replace(trap, label=classify_trap(reference, trap, config=config))


def classify_trap(space: TrajectorySpace, trap: Trap, stats=None,
                  config: TaxonomyConfig | None = None) -> TaxonomyLabel:
    """First matching rule of the taxonomy cascade:

    1. attractor loop: inertia >= 0.8 and one (state, action) pair covers
       at least half of all member steps
    2. narrow corridor: at most 2 boundary edges within 10% of the minimum
       degradation
    3. optimality plateau: >= 8 members with normalized pairwise cost
       spread <= 0.1
    4. local basin otherwise
    """
    cfg = config or TaxonomyConfig()
    members = np.asarray(trap.member_ids, dtype=np.int64)

    if stats is None:
        stats = member_action_counts(space, trap.member_ids)
    inertia = behavioral_inertia(stats)
    if inertia >= cfg.loop_inertia_min:
        pairs: dict[tuple[int, int], int] = {}
        total = 0
        for i in members:
            for t in range(space.horizon):
                key = (int(space.states[i, t]), int(space.actions[i, t]))
                pairs[key] = pairs.get(key, 0) + 1
                total += 1
        if total and max(pairs.values()) / total >= cfg.loop_pair_share_min:
            return TaxonomyLabel.ATTRACTOR_LOOP

    if trap.boundary_edges:
        norm, _ = normalized_costs(space.costs)
        if norm.shape[1] > 0:
            deltas = [
                max(0.0, float(np.max(norm[out] - norm[inside])))
                for inside, out in trap.boundary_edges
            ]
            d_min = min(deltas)
            cheap = sum(1 for d in deltas if d <= d_min * (1.0 + cfg.corridor_tolerance))
            if cheap <= cfg.corridor_max_cheap_exits:
                return TaxonomyLabel.NARROW_CORRIDOR

    if len(members) >= cfg.plateau_min_members:
        norm, _ = normalized_costs(space.costs)
        if norm.shape[1] > 0:
            pts = norm[members]
            diff = pts[:, None, :] - pts[None, :, :]
            spread = math.sqrt(float(np.einsum("ijk,ijk->ij", diff, diff).max()))
            if spread <= cfg.plateau_max_spread:
                return TaxonomyLabel.OPTIMALITY_PLATEAU

    return TaxonomyLabel.LOCAL_BASIN


def ceiling(space: TrajectorySpace, members, f: Scalarization) -> float:
    """Dynamic intelligence ceiling: max of the scalarization over members."""
    ids = tuple(members)
    if not ids:
        raise SpecError("ceiling of an empty member set")
    return max(f(space.costs[i]) for i in ids)


def ceiling_gap(spec, policy, f: Scalarization,
                horizon: int | None = None, seeds=None,
                cap: int | None = None) -> float:
    """Global ceiling minus the policy's confinement-trap ceiling (>= 0).

    ``policy`` is a PolicySpec, or the FRONT_PLANNER sentinel for the
    exhaustive trajectory-dominant planner (whose gap is exactly 0).
    """
    kwargs = {}
    if cap is not None:
        kwargs["cap"] = cap
    space = enumerate_trajectories(spec, horizon, **kwargs)
    full = ceiling(space, range(len(space)), f)
    if isinstance(policy, str) and policy == FRONT_PLANNER:
        members = sorted(pareto_front(space).front_ids)
    else:
        members = detect_trap_confinement(spec, policy, space, seeds=seeds).member_ids
    return full - ceiling(space, members, f)
