"""Trajectory dominance and exact Pareto fronts over finite spaces.

A cost vector dominates another when it is componentwise <= and strictly <
in at least one component. The front algorithm is exact; an O(n^2)
brute-force oracle lives permanently in the test suite and equivalence with
it is a release gate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._core import kernels
from .errors import SpecError
from .trajspace import TrajectorySpace, enumerate_trajectories

__all__ = [
    "dominates",
    "FrontResult",
    "pareto_front",
    "pareto_front_costs",
    "front_components",
    "plan_front",
]


def dominates(a, b) -> bool:
    """True iff cost vector ``a`` dominates ``b`` (<= everywhere, < somewhere)."""
    if len(a) != len(b):
        raise SpecError(f"cost vectors differ in length ({len(a)} vs {len(b)})")
    strict = False
    for x, y in zip(a, b):
        if x > y:
            return False
        if x < y:
            strict = True
    return strict


@dataclass(frozen=True)
class FrontResult:
    """Non-dominated ids plus a witness (lowest dominating id) per excluded item."""

    front_ids: frozenset[int]
    dominated_by: dict[int, int]

    def sorted_front(self) -> list[int]:
        return sorted(self.front_ids)


def pareto_front_costs(costs: np.ndarray) -> FrontResult:
    """Front over a raw (n, m) cost array; ids are row indices."""
    costs = np.ascontiguousarray(costs, dtype=np.float64)
    if costs.ndim != 2 or costs.shape[0] == 0:
        raise SpecError("pareto front requires a non-empty 2-D cost array")
    on_front, witness = kernels.front_witness(costs)
    front_ids = frozenset(int(i) for i in np.nonzero(on_front)[0])
    dominated_by = {
        int(i): int(witness[i]) for i in np.nonzero(on_front == 0)[0]
    }
    return FrontResult(front_ids=front_ids, dominated_by=dominated_by)


def pareto_front(space: TrajectorySpace) -> FrontResult:
    """Exactly the non-dominated items of the space."""
    if len(space) == 0:
        raise SpecError("pareto front of an empty trajectory space")
    return pareto_front_costs(space.costs)


def front_components(space: TrajectorySpace, front: FrontResult) -> list[list[int]]:
    """Connected components of the epsilon-adjacency graph restricted to
    front members; each component sorted by id, components ordered by their
    smallest member."""
    members = sorted(front.front_ids)
    member_set = set(members)
    indptr, indices = space.adjacency()
    seen: set[int] = set()
    components: list[list[int]] = []
    for start in members:
        if start in seen:
            continue
        comp = []
        queue = [start]
        seen.add(start)
        while queue:
            u = queue.pop()
            comp.append(u)
            for v in indices[indptr[u]:indptr[u + 1]]:
                v = int(v)
                if v in member_set and v not in seen:
                    seen.add(v)
                    queue.append(v)
        components.append(sorted(comp))
    return components


def plan_front(
    spec,
    horizon_override: int | None = None,
    *,
    epsilon: int = 1,
    cap: int | None = None,
) -> FrontResult:
    """Idealized trajectory-dominant planning: the exact front over the full
    enumeration of a deterministic environment."""
    kwargs = {"epsilon": epsilon}
    if cap is not None:
        kwargs["cap"] = cap
    space = enumerate_trajectories(spec, horizon_override, **kwargs)
    return pareto_front(space)
