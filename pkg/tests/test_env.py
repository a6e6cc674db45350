import json
import math

import numpy as np
import pytest

import ptl
from ptl import SpecError, builtin_env, load_env, serialize_env, step_cost, transition
from ptl.env import CostRule, TransitionRule


def test_a4_exploit_cost_at_origin():
    a4 = builtin_env("a4")
    assert step_cost(a4, 0, 0).tolist() == [0.1, 1.0]


def test_a4_explore_cost_at_origin():
    a4 = builtin_env("a4")
    c = step_cost(a4, 0, 1)
    assert c[0] == 0.8
    assert c[1] == pytest.approx(0.5 + 0.3 * 5, abs=0)


def test_a4_restructure_cost_at_top():
    a4 = builtin_env("a4")
    c = step_cost(a4, 5, 2)
    assert c.tolist() == [2.0, 1.0]


def test_a3_restructure_costs_match_printed_formula():
    a3 = builtin_env("a3")
    for x in range(6):
        c = step_cost(a3, x, 2)
        assert c[0] == 2.0
        assert c[1] == pytest.approx(1.0 + 0.4 * (5 - x), abs=1e-15)


def test_a3_refine_cost_constant():
    a3 = builtin_env("a3")
    for x in range(6):
        assert step_cost(a3, x, 0)[0] == 0.1


def test_transition_exploit_stays():
    a4 = builtin_env("a4")
    rng = np.random.default_rng(0)
    assert transition(a4, 3, 0, rng) == 3


def test_transition_explore_clamps_at_top():
    a4 = builtin_env("a4")
    assert transition(a4, 5, 1, None) == 5


def test_transition_jump_from_4_is_forced():
    a4 = builtin_env("a4")
    for seed in range(20):
        assert transition(a4, 4, 2, np.random.default_rng(seed)) == 5


def test_jump_random_above_range_and_coverage():
    a4 = builtin_env("a4")
    for x in range(5):
        rng = np.random.default_rng(99)
        seen = set()
        for _ in range(10_000):
            nxt = transition(a4, x, 2, rng)
            assert x + 1 <= nxt <= 5
            seen.add(nxt)
        assert seen == set(range(x + 1, 6))


def test_jump_random_at_top_consumes_nothing():
    a4 = builtin_env("a4")
    rng = np.random.default_rng(7)
    before = rng.bit_generator.state
    assert transition(a4, 5, 2, rng) == 5
    assert rng.bit_generator.state == before


def test_deterministic_transitions_are_pure():
    for name in ("a3", "a4-detjump", "two-basin"):
        spec = builtin_env(name)
        assert spec.deterministic
        for x in range(spec.n_states):
            for a in range(spec.num_actions):
                first = transition(spec, x, a, None)
                assert all(
                    transition(spec, x, a, None) == first for _ in range(3)
                )


def test_a4_is_stochastic():
    assert not builtin_env("a4").deterministic


def test_step_costs_finite_nonnegative_for_toy_builtins():
    # The two-basin fixture is exempt: its accumulated-cost contract forces
    # some negative table entries (checked in test_trajspace instead).
    for name in ("a3", "a4", "a4-detjump"):
        spec = builtin_env(name)
        pairs = 0
        for x in range(spec.n_states):
            for a in range(spec.num_actions):
                c = step_cost(spec, x, a)
                assert np.isfinite(c).all()
                assert (c >= 0).all()
                pairs += 1
        assert pairs <= 18


def test_a3_restructure_jump_delta():
    a3 = builtin_env("a3")
    assert transition(a3, 0, 2, None) == 2
    assert transition(a3, 4, 2, None) == 5
    assert transition(a3, 5, 2, None) == 5


def test_unknown_builtin_name():
    with pytest.raises(SpecError, match="unknown builtin"):
        builtin_env("a5")


def test_roundtrip_all_builtins():
    for name in ("a3", "a4", "a4-detjump", "two-basin"):
        spec = builtin_env(name)
        assert load_env(serialize_env(spec)) == spec


def test_load_minimal_single_stay_action():
    doc = {
        "name": "mini",
        "n_states": 2,
        "horizon": 1,
        "objectives": ["only"],
        "actions": [
            {"name": "wait", "transition": {"kind": "stay"},
             "costs": [{"kind": "affine", "a": 1.0, "b": 0.0}]}
        ],
    }
    spec = load_env(json.dumps(doc))
    assert spec.num_actions == 1
    assert spec.deterministic


def test_load_rejects_unknown_keys():
    doc = {
        "name": "x", "n_states": 2, "horizon": 1, "objectives": ["o"],
        "actions": [], "extra": True,
    }
    with pytest.raises(SpecError, match="unknown key 'extra'"):
        load_env(doc)


def test_load_rejects_wrong_table_length():
    doc = {
        "name": "x", "n_states": 3, "horizon": 1, "objectives": ["o"],
        "actions": [
            {"name": "a", "transition": {"kind": "stay"},
             "costs": [{"kind": "table", "values": [1.0, 2.0]}]}
        ],
    }
    with pytest.raises(SpecError, match="table has 2 values, expected 3"):
        load_env(doc)


def test_load_rejects_negative_affine_within_range():
    # formulas hard-coding the top state 5 break for larger state spaces
    doc = {
        "name": "x", "n_states": 8, "horizon": 1, "objectives": ["o"],
        "actions": [
            {"name": "a", "transition": {"kind": "stay"},
             "costs": [{"kind": "affine", "a": 2.0, "b": -0.3}]}
        ],
    }
    with pytest.raises(SpecError, match="negative within state range"):
        load_env(doc)


def test_load_rejects_out_of_range_probability():
    doc = {
        "name": "x", "n_states": 2, "horizon": 1, "objectives": ["o"],
        "restructure_prob": 1.5,
        "actions": [
            {"name": "a", "transition": {"kind": "stay"},
             "costs": [{"kind": "affine", "a": 1.0, "b": 0.0}]}
        ],
    }
    with pytest.raises(SpecError, match="restructure_prob"):
        load_env(doc)


def test_load_rejects_missing_delta():
    with pytest.raises(SpecError, match="delta"):
        TransitionRule("jump_fixed")


def test_cost_rule_kind_validation():
    with pytest.raises(SpecError, match="unknown kind"):
        CostRule("quadratic", a=1.0)


def test_reciprocal_defined_across_state_range():
    rule = CostRule("reciprocal", a=1.0)
    for x in range(100):
        assert rule.evaluate(x) == 1.0 / (x + 1)


def test_cost_rules_match_listing_formulas():
    a4 = builtin_env("a4")
    for x in range(6):
        assert step_cost(a4, x, 0)[0] == pytest.approx(0.1 + 0.05 * x, abs=0)
        assert step_cost(a4, x, 0)[1] == pytest.approx(1.0 / (x + 1), abs=0)
        assert step_cost(a4, x, 1).tolist() == pytest.approx(
            [0.8, 0.5 + 0.3 * (5 - x)], abs=1e-15)
        assert step_cost(a4, x, 2).tolist() == pytest.approx(
            [2.0, 1.0 + 0.4 * (5 - x)], abs=1e-15)


def test_index_range_errors():
    a4 = builtin_env("a4")
    with pytest.raises(SpecError, match="state"):
        step_cost(a4, 6, 0)
    with pytest.raises(SpecError, match="action"):
        step_cost(a4, 0, 3)
    with pytest.raises(SpecError, match="state"):
        transition(a4, -1, 0, None)


def test_jump_fixed_partial_probability_is_stochastic():
    doc = {
        "name": "p", "n_states": 4, "horizon": 2, "objectives": ["o"],
        "restructure_prob": 0.5,
        "actions": [
            {"name": "jump", "transition": {"kind": "jump_fixed", "delta": 2},
             "costs": [{"kind": "affine", "a": 1.0, "b": 0.0}]}
        ],
    }
    spec = load_env(doc)
    assert not spec.deterministic
    outcomes = {transition(spec, 0, 0, np.random.default_rng(s)) for s in range(64)}
    assert outcomes == {0, 2}


def test_env_invariant_validation():
    with pytest.raises(SpecError, match="n_states"):
        load_env({"name": "x", "n_states": 1, "horizon": 1,
                  "objectives": ["o"], "actions": [
                      {"name": "a", "transition": {"kind": "stay"},
                       "costs": [{"kind": "affine", "a": 0.0, "b": 0.0}]}]})
    with pytest.raises(SpecError, match="actions"):
        load_env({"name": "x", "n_states": 2, "horizon": 1,
                  "objectives": ["o"], "actions": []})
    with pytest.raises(SpecError, match="cost rules"):
        load_env({"name": "x", "n_states": 2, "horizon": 1,
                  "objectives": ["o1", "o2"], "actions": [
                      {"name": "a", "transition": {"kind": "stay"},
                       "costs": [{"kind": "affine", "a": 0.0, "b": 0.0}]}]})
