"""Shared fixtures and independent oracles.

The brute-force front oracle is a permanent part of the suite: the
production front algorithm must match it exactly on every enumerable
builtin (release gate).
"""

from __future__ import annotations

import numpy as np
import pytest

from ptl.env import ActionSpec, CostRule, EnvironmentSpec, TransitionRule


def oracle_dominates(a, b) -> bool:
    """Reference dominance check, independent of the production path."""
    le = all(x <= y for x, y in zip(a, b))
    lt = any(x < y for x, y in zip(a, b))
    return le and lt


def oracle_front(costs) -> tuple[set[int], dict[int, int]]:
    """O(n^2) brute force: front ids and the lowest-id witness per loser."""
    n = len(costs)
    front: set[int] = set()
    witness: dict[int, int] = {}
    for i in range(n):
        for j in range(n):
            if j != i and oracle_dominates(costs[j], costs[i]):
                witness[i] = j
                break
        else:
            front.add(i)
    return front, witness


def plateau_env(horizon: int = 6) -> EnvironmentSpec:
    """Fixture with a broad flat non-dominated cluster.

    Actions a/b trade tiny cost differences while staying put; c climbs
    toward a regime that only pays off after two climbs, so the 2^T a/b
    cluster is locally optimal, globally dominated, and very flat.
    """
    cheap_a = (1.0, 1.0, 0.01, 0.01)
    cheap_b = (1.01, 1.01, 0.012, 0.012)
    climb = (2.2, 2.2, 2.2, 2.2)
    return EnvironmentSpec(
        name="plateau",
        n_states=4,
        horizon=horizon,
        objectives=("o1", "o2"),
        actions=(
            ActionSpec("a", TransitionRule("stay"),
                       (CostRule("table", values=cheap_a),
                        CostRule("table", values=cheap_b))),
            ActionSpec("b", TransitionRule("stay"),
                       (CostRule("table", values=cheap_b),
                        CostRule("table", values=cheap_a))),
            ActionSpec("c", TransitionRule("increment"),
                       (CostRule("table", values=climb),
                        CostRule("table", values=climb))),
        ),
        restructure_prob=1.0,
    )


def corridor_env() -> EnvironmentSpec:
    """Fixture whose single trap has exactly two cheapest exit edges.

    Two stay actions s/t form a small non-dominated cluster at state 0;
    the climb action u is the only road to the dominating trajectory uu,
    and replacing a final s with u degrades least (two such edges).
    """
    return EnvironmentSpec(
        name="corridor",
        n_states=2,
        horizon=2,
        objectives=("o1", "o2"),
        actions=(
            ActionSpec("s", TransitionRule("stay"),
                       (CostRule("table", values=(1.0, 0.5)),
                        CostRule("table", values=(1.0, 3.0)))),
            ActionSpec("t", TransitionRule("stay"),
                       (CostRule("table", values=(1.1, 0.7)),
                        CostRule("table", values=(0.7, 3.2)))),
            ActionSpec("u", TransitionRule("increment"),
                       (CostRule("table", values=(1.0, 0.5)),
                        CostRule("table", values=(2.5, -1.0)))),
        ),
        restructure_prob=1.0,
    )


def convex_env(horizon: int = 4) -> EnvironmentSpec:
    """Every single edit moves costs monotonically toward the front, so the
    only locally optimal trajectory is the global optimum (no traps)."""
    return EnvironmentSpec(
        name="convex",
        n_states=2,
        horizon=horizon,
        objectives=("o1", "o2"),
        actions=(
            ActionSpec("good", TransitionRule("stay"),
                       (CostRule("affine", a=1.0, b=0.0),
                        CostRule("affine", a=1.0, b=0.0))),
            ActionSpec("bad", TransitionRule("stay"),
                       (CostRule("affine", a=2.0, b=0.0),
                        CostRule("affine", a=2.0, b=0.0))),
        ),
        restructure_prob=1.0,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
