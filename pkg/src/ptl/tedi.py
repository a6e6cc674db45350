"""Trap Escape Difficulty Index.

Three components, each in [0, 1]:
  D escape distance      normalized cost-space distance from the trap to
                         dominating (or better-scoring) trajectories
  S structural constraint mean clipped boundary degradation
  B behavioral inertia   1 - normalized action entropy

The index is the weighted sum alpha*D + beta*S + gamma*B with weights
summing to 1. All cost-space quantities are computed on per-coordinate
range-normalized costs, which makes D and S invariant under positive
affine transforms applied per cost coordinate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np

from .errors import SpecError

if TYPE_CHECKING:
    from .trajspace import TrajectorySpace
    from .traps import Scalarization, Trap

WEIGHT_SUM_TOL = 1e-12

# Category thresholds; a value exactly at a boundary maps to the harder
# category.
CATEGORY_EDGES = (0.25, 0.5, 0.75)


class EscapeCategory(str, Enum):
    TRIVIAL = "trivial"
    MODERATE = "moderate"
    HARD = "hard"
    PRACTICALLY_INESCAPABLE = "practically_inescapable"


def category_for(value: float) -> EscapeCategory:
    if value >= CATEGORY_EDGES[2]:
        return EscapeCategory.PRACTICALLY_INESCAPABLE
    if value >= CATEGORY_EDGES[1]:
        return EscapeCategory.HARD
    if value >= CATEGORY_EDGES[0]:
        return EscapeCategory.MODERATE
    return EscapeCategory.TRIVIAL


@dataclass(frozen=True)
class TediWeights:
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            if getattr(self, name) < 0:
                raise SpecError(f"tedi weight {name} must be non-negative")
        total = math.fsum((self.alpha, self.beta, self.gamma))
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise SpecError(
                f"tedi weights must sum to 1 (got {total!r}); "
                "use TediWeights.normalized to rescale"
            )

    @classmethod
    def uniform(cls) -> "TediWeights":
        return cls(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)

    @classmethod
    def normalized(cls, alpha: float, beta: float, gamma: float) -> "TediWeights":
        total = math.fsum((alpha, beta, gamma))
        if total <= 0:
            raise SpecError("tedi weights must have a positive sum")
        return cls(alpha / total, beta / total, gamma / total)


@dataclass(frozen=True)
class TediReport:
    escape_distance: float
    structural: float
    inertia: float
    weights: TediWeights
    value: float
    category: EscapeCategory


def normalized_costs(costs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-coordinate range normalization over the whole cost cloud.

    Returns (normalized, kept_mask). Coordinates with zero range carry no
    dominance information in this cloud; they are dropped with a warning.
    """
    lo = costs.min(axis=0)
    hi = costs.max(axis=0)
    span = hi - lo
    kept = span > 0
    if not kept.all():
        dropped = [int(i) for i in np.nonzero(~kept)[0]]
        warnings.warn(
            f"dropping degenerate cost coordinate(s) {dropped} (zero range)",
            stacklevel=2,
        )
    norm = np.zeros_like(costs)
    norm[:, kept] = (costs[:, kept] - lo[kept]) / span[kept]
    return norm[:, kept], kept


def _cloud_diameter(points: np.ndarray) -> float:
    n = points.shape[0]
    best = 0.0
    block = max(1, (1 << 22) // max(1, n))
    for start in range(0, n, block):
        chunk = points[start:start + block]
        diff = chunk[:, None, :] - points[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        best = max(best, float(d2.max()))
    return math.sqrt(best)


def escape_distance(space: "TrajectorySpace", trap: "Trap",
                    scalarization: "Scalarization | None" = None) -> float:
    """Normalized distance from the trap to strictly better trajectories.

    Strict mode: minimum distance from any member to any witness (the
    items dominating the trap). Confinement mode: minimum distance from
    any member to any complement item whose scalarization beats the trap
    ceiling (0 when no such item exists). Either minimum is divided by the
    diameter of the normalized cost cloud.
    """
    norm, _ = normalized_costs(space.costs)
    if norm.shape[1] == 0:
        return 0.0
    members = np.asarray(trap.member_ids, dtype=np.int64)
    diameter = _cloud_diameter(norm)
    if diameter == 0.0:
        return 0.0

    costs = space.costs
    n = len(space)
    best = math.inf
    if trap.mode == "strict":
        if not trap.witnesses:
            raise SpecError("strict-mode trap has no witnesses")
        wits = np.asarray(trap.witnesses, dtype=np.int64)
        for i in members:
            diff = norm[wits] - norm[i]
            d2 = float(np.einsum("ij,ij->i", diff, diff).min())
            best = min(best, math.sqrt(d2))
    else:
        from .traps import Scalarization  # local import to avoid a cycle

        f = scalarization or Scalarization.uniform(space.env.num_objectives)
        scores = np.array([f(costs[i]) for i in range(n)])
        member_mask = np.zeros(n, dtype=bool)
        member_mask[members] = True
        ceiling_score = scores[member_mask].max()
        target = (~member_mask) & (scores > ceiling_score)
        if not target.any():
            return 0.0
        for i in members:
            diff = norm[target] - norm[i]
            d2 = float(np.einsum("ij,ij->i", diff, diff).min())
            best = min(best, math.sqrt(d2))
    return best / diameter


def structural_constraint(space: "TrajectorySpace", trap: "Trap") -> float:
    """Mean clipped boundary-edge degradation in normalized cost space.

    Each boundary edge contributes min(1, max over coordinates of the
    positive part of outside - inside). No boundary edges means the trap is
    sealed: S = 1.
    """
    edges = trap.boundary_edges
    if not edges:
        return 1.0
    norm, _ = normalized_costs(space.costs)
    if norm.shape[1] == 0:
        return 0.0
    deltas = []
    for inside, outside in edges:
        worst = float(np.max(norm[outside] - norm[inside]))
        deltas.append(min(1.0, max(0.0, worst)))
    return math.fsum(deltas) / len(deltas)


def behavioral_inertia(stats) -> float:
    """1 - H(p)/log|A| over the empirical action distribution.

    ``stats`` is a frequency vector over the full action set (zero counts
    included). A single-action environment has inertia 1 by convention.
    """
    counts = np.asarray(stats, dtype=np.float64)
    if counts.ndim != 1 or counts.size == 0:
        raise SpecError("action frequencies must be a non-empty vector")
    if (counts < 0).any():
        raise SpecError("action frequencies must be non-negative")
    total = counts.sum()
    if total == 0:
        raise SpecError("action frequencies are all zero")
    if counts.size == 1:
        return 1.0
    p = counts / total
    nz = p[p > 0]
    entropy = -float(np.sum(nz * np.log(nz)))
    return 1.0 - entropy / math.log(counts.size)


def tedi(D: float, S: float, B: float, weights: TediWeights | None = None) -> TediReport:
    """Weighted index alpha*D + beta*S + gamma*B with its escape category."""
    w = weights or TediWeights.uniform()
    for name, comp in (("D", D), ("S", S), ("B", B)):
        if not 0.0 <= comp <= 1.0:
            raise SpecError(f"tedi component {name}={comp!r} outside [0, 1]")
    value = w.alpha * D + w.beta * S + w.gamma * B
    return TediReport(
        escape_distance=D,
        structural=S,
        inertia=B,
        weights=w,
        value=value,
        category=category_for(value),
    )


def tedi_for_trap(space: "TrajectorySpace", trap: "Trap", stats=None,
                  weights: TediWeights | None = None,
                  scalarization: "Scalarization | None" = None) -> TediReport:
    """Compose the three components for a detected trap.

    When no rollout stats are supplied, the action-occurrence distribution
    across trap members is used for the inertia component.
    """
    if stats is None:
        stats = member_action_counts(space, trap.member_ids)
    D = escape_distance(space, trap, scalarization)
    S = structural_constraint(space, trap)
    B = behavioral_inertia(stats)
    return tedi(D, S, B, weights)


def member_action_counts(space: "TrajectorySpace", member_ids) -> np.ndarray:
    """Occurrences of each action across the members' action sequences."""
    ids = np.asarray(tuple(member_ids), dtype=np.int64)
    flat = space.actions[ids].ravel()
    return np.bincount(flat, minlength=space.env.num_actions).astype(np.float64)
