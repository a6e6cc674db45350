"""Finite-horizon decision environments.

An environment is a finite state chain 0..N, a small ordered action set,
one transition rule per action, and one cost rule per (action, objective).
Two kinds of toy model ship as builtins together with a hand-crafted
two-basin fixture used by the trap analytics, and arbitrary variants can
be loaded from a strict JSON document (see ``load_env``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import SpecError

TRANSITION_KINDS = ("stay", "increment", "jump_fixed", "jump_random_above")
COST_KINDS = ("affine", "reciprocal", "table")

BUILTIN_NAMES = ("a3", "a4", "a4-detjump", "two-basin")


@dataclass(frozen=True)
class TransitionRule:
    """Next-state rule for one action.

    kind:
      stay               x -> x
      increment          x -> min(x+1, N)
      jump_fixed         x -> min(x+delta, N) with probability p, else x
      jump_random_above  x -> uniform integer in [x+1, N] when x < N, else x

    ``p`` is the environment-level ``restructure_prob`` and only affects
    ``jump_fixed``; ``jump_random_above`` always jumps (and is the only
    rule that consumes the random stream, one draw per step when x < N).
    """

    kind: str
    delta: int | None = None

    def __post_init__(self):
        if self.kind not in TRANSITION_KINDS:
            raise SpecError(f"transition.kind: unknown kind {self.kind!r}")
        if self.kind == "jump_fixed":
            if self.delta is None:
                raise SpecError("transition.delta: required for jump_fixed")
        elif self.delta is not None:
            raise SpecError(f"transition.delta: not allowed for kind {self.kind!r}")

    def is_deterministic(self, restructure_prob: float) -> bool:
        if self.kind == "jump_random_above":
            return False
        if self.kind == "jump_fixed":
            return restructure_prob in (0.0, 1.0)
        return True

    def apply(self, state: int, n_states: int, restructure_prob: float, rng) -> int:
        top = n_states - 1
        if self.kind == "stay":
            return state
        if self.kind == "increment":
            return min(state + 1, top)
        if self.kind == "jump_fixed":
            p = restructure_prob
            if p == 1.0 or (0.0 < p < 1.0 and rng.random() < p):
                return min(state + self.delta, top)
            return state
        # jump_random_above
        if state < top:
            return int(rng.integers(state + 1, n_states))
        return state


@dataclass(frozen=True)
class CostRule:
    """Per-step cost of one (action, objective) pair as a function of state.

    affine      a + b*x
    reciprocal  a / (x + 1)
    table       values[x] (length must equal the number of states)
    """

    kind: str
    a: float = 0.0
    b: float = 0.0
    values: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in COST_KINDS:
            raise SpecError(f"cost.kind: unknown kind {self.kind!r}")
        if self.kind == "table":
            if self.values is None:
                raise SpecError("cost.values: required for table rule")
            object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        elif self.values is not None:
            raise SpecError(f"cost.values: not allowed for kind {self.kind!r}")

    def evaluate(self, state: int) -> float:
        if self.kind == "affine":
            return self.a + self.b * state
        if self.kind == "reciprocal":
            return self.a / (state + 1)
        return self.values[state]

    def validate_for(self, n_states: int, where: str) -> None:
        """Structural checks that need the state count."""
        if self.kind == "table" and len(self.values) != n_states:
            raise SpecError(
                f"{where}: table has {len(self.values)} values, expected {n_states}"
            )
        if self.kind == "affine":
            # Affine formulas lifted from a fixed-N paper go negative when
            # reused with a larger state range; reject instead of silently
            # flipping dominance relations.
            lo = min(self.a, self.a + self.b * (n_states - 1))
            if lo < 0:
                raise SpecError(
                    f"{where}: affine cost goes negative within state range"
                )


@dataclass(frozen=True)
class ActionSpec:
    name: str
    transition: TransitionRule
    costs: tuple[CostRule, ...]

    def __post_init__(self):
        object.__setattr__(self, "costs", tuple(self.costs))
        if not self.costs:
            raise SpecError(f"action {self.name!r}: needs at least one cost rule")


@dataclass(frozen=True)
class EnvironmentSpec:
    """Immutable environment definition; shareable across threads.

    States are 0..n_states-1, the start state is 0, and the horizon is the
    number of decision steps. ``objectives`` names the cost components.
    """

    name: str
    n_states: int
    horizon: int
    objectives: tuple[str, ...]
    actions: tuple[ActionSpec, ...]
    restructure_prob: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "objectives", tuple(self.objectives))
        object.__setattr__(self, "actions", tuple(self.actions))
        if self.n_states < 2:
            raise SpecError("n_states: must be >= 2")
        if self.horizon < 1:
            raise SpecError("horizon: must be >= 1")
        if not self.objectives:
            raise SpecError("objectives: must be non-empty")
        if not self.actions:
            raise SpecError("actions: must be non-empty")
        if not 0.0 <= self.restructure_prob <= 1.0:
            raise SpecError("restructure_prob: must lie in [0, 1]")
        m = len(self.objectives)
        for act in self.actions:
            if len(act.costs) != m:
                raise SpecError(
                    f"action {act.name!r}: has {len(act.costs)} cost rules, "
                    f"expected {m}"
                )
            if act.transition.kind == "jump_fixed":
                d = act.transition.delta
                if not 0 <= d <= self.n_states - 1:
                    raise SpecError(
                        f"action {act.name!r}: jump delta {d} outside state bounds"
                    )
            for i, rule in enumerate(act.costs):
                rule.validate_for(self.n_states, f"action {act.name!r} cost {i}")

    @property
    def num_objectives(self) -> int:
        return len(self.objectives)

    @property
    def num_actions(self) -> int:
        return len(self.actions)

    @property
    def deterministic(self) -> bool:
        return all(
            a.transition.is_deterministic(self.restructure_prob) for a in self.actions
        )


def transition(spec: EnvironmentSpec, state: int, action: int, rng) -> int:
    """Next state for (state, action); consumes rng only for random jumps."""
    _check_indices(spec, state, action)
    return spec.actions[action].transition.apply(
        state, spec.n_states, spec.restructure_prob, rng
    )


def step_cost(spec: EnvironmentSpec, state: int, action: int) -> np.ndarray:
    """Instantaneous cost vector (one component per objective)."""
    _check_indices(spec, state, action)
    rules = spec.actions[action].costs
    return np.array([r.evaluate(state) for r in rules], dtype=np.float64)


def _check_indices(spec: EnvironmentSpec, state: int, action: int) -> None:
    if not 0 <= state < spec.n_states:
        raise SpecError(f"state {state} out of range [0, {spec.n_states})")
    if not 0 <= action < spec.num_actions:
        raise SpecError(f"action {action} out of range [0, {spec.num_actions})")


def build_tables(spec: EnvironmentSpec) -> tuple[np.ndarray, np.ndarray]:
    """Dense (state, action) lookup tables for the enumeration kernels.

    Returns (transitions, costs) with shapes (S, A) and (S, A, m). Only
    valid for deterministic environments; callers check that first.
    """
    S, A, m = spec.n_states, spec.num_actions, spec.num_objectives
    trans = np.empty((S, A), dtype=np.int64)
    costs = np.empty((S, A, m), dtype=np.float64)
    for x in range(S):
        for a, act in enumerate(spec.actions):
            trans[x, a] = act.transition.apply(x, S, spec.restructure_prob, None)
            for i, rule in enumerate(act.costs):
                costs[x, a, i] = rule.evaluate(x)
    return trans, costs


# ---------------------------------------------------------------------------
# Builtin environments
# ---------------------------------------------------------------------------

def _toy_actions(exploit_slope: float, restructure: TransitionRule,
                 names: tuple[str, str, str]) -> tuple[ActionSpec, ...]:
    # Common three-action structure of the toy models; the two printed cost
    # models differ only in the first action's first objective and in the
    # restructure transition.
    return (
        ActionSpec(
            name=names[0],
            transition=TransitionRule("stay"),
            costs=(
                CostRule("affine", a=0.1, b=exploit_slope),
                CostRule("reciprocal", a=1.0),
            ),
        ),
        ActionSpec(
            name=names[1],
            transition=TransitionRule("increment"),
            costs=(
                CostRule("affine", a=0.8, b=0.0),
                CostRule("affine", a=2.0, b=-0.3),  # 0.5 + 0.3*(5 - x)
            ),
        ),
        ActionSpec(
            name=names[2],
            transition=restructure,
            costs=(
                CostRule("affine", a=2.0, b=0.0),
                CostRule("affine", a=3.0, b=-0.4),  # 1.0 + 0.4*(5 - x)
            ),
        ),
    )


def _builtin_a4() -> EnvironmentSpec:
    return EnvironmentSpec(
        name="a4",
        n_states=6,
        horizon=30,
        objectives=("immediate", "opportunity"),
        actions=_toy_actions(
            0.05,
            TransitionRule("jump_random_above"),
            ("exploit", "explore", "restructure"),
        ),
        restructure_prob=1.0,
    )


def _builtin_a3() -> EnvironmentSpec:
    return EnvironmentSpec(
        name="a3",
        n_states=6,
        horizon=30,
        objectives=("immediate", "opportunity"),
        actions=_toy_actions(
            0.0,
            TransitionRule("jump_fixed", delta=2),
            ("refine", "advance", "restructure"),
        ),
        restructure_prob=1.0,
    )


def _builtin_a4_detjump() -> EnvironmentSpec:
    return EnvironmentSpec(
        name="a4-detjump",
        n_states=6,
        horizon=30,
        objectives=("immediate", "opportunity"),
        actions=_toy_actions(
            0.05,
            TransitionRule("jump_fixed", delta=2),
            ("exploit", "explore", "restructure"),
        ),
        restructure_prob=1.0,
    )


def _builtin_two_basin() -> EnvironmentSpec:
    # Two actions over 3 steps; the state counts B choices so far. The
    # per-state tables are the unique solution making accumulated costs a
    # function of the B count alone:
    #   0 B -> (2, 2);  1 B -> (1.5, 3);  2 B -> (3, 1.5);  3 B -> (1, 1)
    # (some entries are necessarily negative; the accumulated totals are
    # what the fixture guarantees). State 3 is terminal-only, entries 0.
    a_cost = 2.0 / 3.0
    b1 = (1.0 / 6.0, 13.0 / 6.0, -4.0 / 3.0, 0.0)
    b2 = (5.0 / 3.0, -5.0 / 6.0, 1.0 / 6.0, 0.0)
    return EnvironmentSpec(
        name="two-basin",
        n_states=4,
        horizon=3,
        objectives=("o1", "o2"),
        actions=(
            ActionSpec(
                name="a",
                transition=TransitionRule("stay"),
                costs=(
                    CostRule("table", values=(a_cost, a_cost, a_cost, 0.0)),
                    CostRule("table", values=(a_cost, a_cost, a_cost, 0.0)),
                ),
            ),
            ActionSpec(
                name="b",
                transition=TransitionRule("increment"),
                costs=(
                    CostRule("table", values=b1),
                    CostRule("table", values=b2),
                ),
            ),
        ),
        restructure_prob=1.0,
    )


_BUILTINS = {
    "a3": _builtin_a3,
    "a4": _builtin_a4,
    "a4-detjump": _builtin_a4_detjump,
    "two-basin": _builtin_two_basin,
}


def builtin_env(name: str) -> EnvironmentSpec:
    """One of the builtin environments: a3, a4, a4-detjump, two-basin."""
    try:
        builder = _BUILTINS[name]
    except KeyError:
        raise SpecError(
            f"unknown builtin environment {name!r}; valid: {', '.join(BUILTIN_NAMES)}"
        ) from None
    return builder()


# ---------------------------------------------------------------------------
# JSON (de)serialization; parsing is strict: unknown keys are errors
# ---------------------------------------------------------------------------

def _require_keys(obj: dict, allowed: dict[str, bool], where: str) -> None:
    for key in obj:
        if key not in allowed:
            raise SpecError(f"{where}: unknown key {key!r}")
    for key, required in allowed.items():
        if required and key not in obj:
            raise SpecError(f"{where}: missing key {key!r}")


def _parse_transition(obj, where: str) -> TransitionRule:
    if not isinstance(obj, dict):
        raise SpecError(f"{where}: must be an object")
    _require_keys(obj, {"kind": True, "delta": False}, where)
    kind = obj["kind"]
    delta = obj.get("delta")
    if delta is not None:
        if not isinstance(delta, int) or isinstance(delta, bool):
            raise SpecError(f"{where}.delta: must be an integer")
    return TransitionRule(kind=kind, delta=delta)


def _parse_cost(obj, where: str) -> CostRule:
    if not isinstance(obj, dict):
        raise SpecError(f"{where}: must be an object")
    kind = obj.get("kind")
    if kind == "affine":
        _require_keys(obj, {"kind": True, "a": True, "b": True}, where)
        return CostRule("affine", a=float(obj["a"]), b=float(obj["b"]))
    if kind == "reciprocal":
        _require_keys(obj, {"kind": True, "a": True}, where)
        return CostRule("reciprocal", a=float(obj["a"]))
    if kind == "table":
        _require_keys(obj, {"kind": True, "values": True}, where)
        values = obj["values"]
        if not isinstance(values, list) or not values:
            raise SpecError(f"{where}.values: must be a non-empty array")
        return CostRule("table", values=tuple(float(v) for v in values))
    raise SpecError(f"{where}.kind: unknown kind {kind!r}")


def load_env(document: str | dict) -> EnvironmentSpec:
    """Parse and validate an environment from a JSON document (or dict)."""
    if isinstance(document, str):
        try:
            obj = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON: {exc}") from None
    else:
        obj = document
    if not isinstance(obj, dict):
        raise SpecError("environment document: must be a JSON object")
    _require_keys(
        obj,
        {
            "name": True,
            "n_states": True,
            "horizon": True,
            "objectives": True,
            "restructure_prob": False,
            "actions": True,
        },
        "environment",
    )
    objectives = obj["objectives"]
    if not isinstance(objectives, list) or not all(isinstance(o, str) for o in objectives):
        raise SpecError("objectives: must be an array of strings")
    raw_actions = obj["actions"]
    if not isinstance(raw_actions, list):
        raise SpecError("actions: must be an array")
    actions = []
    for k, raw in enumerate(raw_actions):
        where = f"actions[{k}]"
        if not isinstance(raw, dict):
            raise SpecError(f"{where}: must be an object")
        _require_keys(raw, {"name": True, "transition": True, "costs": True}, where)
        costs = raw["costs"]
        if not isinstance(costs, list):
            raise SpecError(f"{where}.costs: must be an array")
        actions.append(
            ActionSpec(
                name=str(raw["name"]),
                transition=_parse_transition(raw["transition"], f"{where}.transition"),
                costs=tuple(
                    _parse_cost(c, f"{where}.costs[{i}]") for i, c in enumerate(costs)
                ),
            )
        )
    return EnvironmentSpec(
        name=str(obj["name"]),
        n_states=int(obj["n_states"]),
        horizon=int(obj["horizon"]),
        objectives=tuple(objectives),
        actions=tuple(actions),
        restructure_prob=float(obj.get("restructure_prob", 1.0)),
    )


def env_to_dict(spec: EnvironmentSpec) -> dict:
    actions = []
    for act in spec.actions:
        tr: dict = {"kind": act.transition.kind}
        if act.transition.delta is not None:
            tr["delta"] = act.transition.delta
        costs = []
        for rule in act.costs:
            if rule.kind == "affine":
                costs.append({"kind": "affine", "a": rule.a, "b": rule.b})
            elif rule.kind == "reciprocal":
                costs.append({"kind": "reciprocal", "a": rule.a})
            else:
                costs.append({"kind": "table", "values": list(rule.values)})
        actions.append({"name": act.name, "transition": tr, "costs": costs})
    return {
        "name": spec.name,
        "n_states": spec.n_states,
        "horizon": spec.horizon,
        "objectives": list(spec.objectives),
        "restructure_prob": spec.restructure_prob,
        "actions": actions,
    }


def serialize_env(spec: EnvironmentSpec) -> str:
    """JSON text that ``load_env`` parses back to an equal spec."""
    return json.dumps(env_to_dict(spec), indent=2) + "\n"


def load_env_file(path) -> EnvironmentSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return load_env(fh.read())
