import math

import numpy as np
import pytest

import ptl
from ptl import SpecError, builtin_env, enumerate_trajectories
from ptl.tedi import EscapeCategory, TediWeights, behavioral_inertia, \
    escape_distance, member_action_counts, structural_constraint, tedi, \
    tedi_for_trap
from ptl.traps import Scalarization, Trap, TrapMode, detect_trap_confinement, \
    detect_traps_strict
from ptl.sim import PolicySpec
from conftest import plateau_env

# hand-oracle values for the two-basin trap (exact where possible):
#   normalized members: aaa (0.5, 0.5), one-b (0.25, 1); witness bbb (0, 0)
#   D = sqrt(0.5) / sqrt(1.125) = 2/3
#   S: all six exits degrade by (3 - 1.5) / 2 = 0.75
#   B = 1 - H(0.75, 0.25)/ln 2 = 0.75*log2(3) - 1
TWO_BASIN_D = 2.0 / 3.0
TWO_BASIN_S = 0.75
TWO_BASIN_B = 0.75 * math.log2(3.0) - 1.0
TWO_BASIN_TEDI = (TWO_BASIN_D + TWO_BASIN_S + TWO_BASIN_B) / 3.0


@pytest.fixture(scope="module")
def two_basin():
    space = enumerate_trajectories(builtin_env("two-basin"))
    traps = detect_traps_strict(space)
    assert len(traps) == 1
    return space, traps[0]


def _independent_components(space, trap):
    """Plain-loop recomputation of D and S, independent of the library path."""
    costs = space.costs
    lo = costs.min(axis=0)
    hi = costs.max(axis=0)
    norm = (costs - lo) / (hi - lo)
    diam = max(
        math.dist(norm[i], norm[j])
        for i in range(len(space)) for j in range(len(space))
    )
    dmin = min(
        math.dist(norm[i], norm[w])
        for i in trap.member_ids for w in trap.witnesses
    )
    deltas = [
        min(1.0, max(0.0, max(norm[out][k] - norm[inside][k] for k in range(2))))
        for inside, out in trap.boundary_edges
    ]
    return dmin / diam, sum(deltas) / len(deltas)


def test_two_basin_escape_distance(two_basin):
    space, trap = two_basin
    D = escape_distance(space, trap)
    D_oracle, _ = _independent_components(space, trap)
    assert D == pytest.approx(D_oracle, abs=1e-12)
    assert D == pytest.approx(TWO_BASIN_D, abs=1e-9)


def test_two_basin_structural_constraint(two_basin):
    space, trap = two_basin
    S = structural_constraint(space, trap)
    _, S_oracle = _independent_components(space, trap)
    assert S == pytest.approx(S_oracle, abs=1e-12)
    assert S == pytest.approx(TWO_BASIN_S, abs=1e-9)


def test_two_basin_inertia(two_basin):
    space, trap = two_basin
    counts = member_action_counts(space, trap.member_ids)
    assert counts.tolist() == [9.0, 3.0]
    assert behavioral_inertia(counts) == pytest.approx(TWO_BASIN_B, abs=1e-9)


def test_two_basin_tedi_composition(two_basin):
    space, trap = two_basin
    rep = tedi_for_trap(space, trap)
    assert rep.value == pytest.approx(TWO_BASIN_TEDI, abs=1e-9)
    assert rep.value == pytest.approx(0.5351, abs=5e-5)
    assert rep.category == EscapeCategory.HARD
    manual = tedi(rep.escape_distance, rep.structural, rep.inertia)
    assert manual == rep


def test_escape_distance_zero_when_member_matches_witness_cost():
    # duplicate cost vectors: the witness dominates one member and ties the
    # other, so the minimizing pair coincides
    from ptl.env import ActionSpec, CostRule, EnvironmentSpec, TransitionRule
    costs = np.array([[1.0, 1.0], [2.0, 2.0], [1.0, 1.0], [0.5, 3.0]])
    space = ptl.TrajectorySpace(
        env=builtin_env("two-basin"),
        actions=np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=np.int8),
        states=np.zeros((4, 3), dtype=np.int16),
        costs=costs,
        epsilon=1,
        complete=False,
    )
    trap = Trap(member_ids=(1, 2), witnesses=(0,), boundary_edges=(),
                mode=TrapMode.STRICT)
    assert escape_distance(space, trap) == 0.0


def test_escape_distance_affine_invariance_exact(two_basin):
    # dyadic scalings are exact in binary floating point, so invariance is
    # bitwise; arbitrary affine maps agree to within rounding
    space, trap = two_basin
    D0 = escape_distance(space, trap)
    S0 = structural_constraint(space, trap)
    for scale in (0.25, 0.5, 2.0, 8.0):
        clone = ptl.TrajectorySpace(
            env=space.env, actions=space.actions, states=space.states,
            costs=space.costs * scale, epsilon=1, complete=True)
        clone_trap = detect_traps_strict(clone)[0]
        assert escape_distance(clone, clone_trap) == D0
        assert structural_constraint(clone, clone_trap) == S0


def test_escape_distance_affine_invariance_general(two_basin, rng):
    space, trap = two_basin
    D0 = escape_distance(space, trap)
    S0 = structural_constraint(space, trap)
    for _ in range(20):
        scale = rng.uniform(0.1, 10.0, size=2)
        shift = rng.uniform(-5.0, 5.0, size=2)
        clone = ptl.TrajectorySpace(
            env=space.env, actions=space.actions, states=space.states,
            costs=space.costs * scale + shift, epsilon=1, complete=True)
        clone_trap = detect_traps_strict(clone)[0]
        assert escape_distance(clone, clone_trap) == pytest.approx(D0, abs=1e-12)
        assert structural_constraint(clone, clone_trap) == pytest.approx(S0, abs=1e-12)


def test_structural_constraint_sealed_trap_is_one(two_basin):
    space, _ = two_basin
    sealed = Trap(member_ids=(0,), witnesses=(7,), boundary_edges=(),
                  mode=TrapMode.STRICT)
    assert structural_constraint(space, sealed) == 1.0


def test_structural_constraint_zero_degradation_exits():
    costs = np.array([[1.0, 1.0], [1.0, 1.0], [0.5, 0.5]])
    space = ptl.TrajectorySpace(
        env=builtin_env("two-basin"),
        actions=np.array([[0, 0], [0, 1], [1, 1]], dtype=np.int8),
        states=np.zeros((3, 3), dtype=np.int16),
        costs=costs,
        epsilon=1,
        complete=False,
    )
    trap = Trap(member_ids=(0,), witnesses=(2,),
                boundary_edges=((0, 1),), mode=TrapMode.STRICT)
    assert structural_constraint(space, trap) == 0.0


def test_inertia_extremes():
    assert behavioral_inertia([30, 0, 0]) == 1.0
    assert behavioral_inertia([100, 100, 100]) == pytest.approx(0.0, abs=1e-15)
    assert behavioral_inertia([7]) == 1.0


def test_inertia_permutation_invariance(rng):
    for _ in range(50):
        counts = rng.integers(0, 50, size=4)
        if counts.sum() == 0:
            continue
        base = behavioral_inertia(counts)
        assert behavioral_inertia(counts[::-1]) == pytest.approx(base, abs=1e-15)
        assert behavioral_inertia(rng.permutation(counts)) == pytest.approx(
            base, abs=1e-15)


def test_inertia_rejects_degenerate_stats():
    with pytest.raises(SpecError, match="all zero"):
        behavioral_inertia([0, 0])
    with pytest.raises(SpecError, match="non-negative"):
        behavioral_inertia([1, -1])
    with pytest.raises(SpecError, match="non-empty"):
        behavioral_inertia([])


def test_tedi_corner_values():
    zero = tedi(0.0, 0.0, 0.0)
    assert zero.value == 0.0 and zero.category == EscapeCategory.TRIVIAL
    one = tedi(1.0, 1.0, 1.0, TediWeights.normalized(3, 1, 1))
    assert one.value == pytest.approx(1.0, abs=1e-15)
    assert one.category == EscapeCategory.PRACTICALLY_INESCAPABLE


def test_tedi_category_boundaries_map_to_harder_class():
    assert tedi(0.25, 0.25, 0.25).category == EscapeCategory.MODERATE
    assert tedi(0.5, 0.5, 0.5).category == EscapeCategory.HARD
    assert tedi(0.75, 0.75, 0.75).category == EscapeCategory.PRACTICALLY_INESCAPABLE
    assert tedi(0.2499999, 0.2499999, 0.2499999).category == EscapeCategory.TRIVIAL


def test_tedi_rejects_out_of_range_components():
    with pytest.raises(SpecError, match="outside"):
        tedi(1.2, 0.0, 0.0)
    with pytest.raises(SpecError, match="outside"):
        tedi(0.0, -0.1, 0.0)


def test_tedi_value_in_unit_interval_and_monotone(rng):
    for _ in range(1000):
        comps = rng.random(3)
        raw = rng.random(3) + 1e-9
        w = TediWeights.normalized(*raw)
        rep = tedi(*comps, w)
        assert 0.0 <= rep.value <= 1.0
        k = int(rng.integers(0, 3))
        bumped = comps.copy()
        bumped[k] = min(1.0, bumped[k] + float(rng.random()))
        rep2 = tedi(*bumped, w)
        assert rep2.value >= rep.value - 1e-15


def test_weights_scale_invariant_through_normalization(rng):
    for _ in range(100):
        raw = rng.random(3) + 0.05
        c = float(rng.uniform(0.1, 100.0))
        w1 = TediWeights.normalized(*raw)
        w2 = TediWeights.normalized(*(raw * c))
        comps = rng.random(3)
        assert tedi(*comps, w1).value == pytest.approx(
            tedi(*comps, w2).value, abs=1e-12)


def test_weights_validation():
    with pytest.raises(SpecError, match="sum to 1"):
        TediWeights(0.5, 0.5, 0.5)
    with pytest.raises(SpecError, match="non-negative"):
        TediWeights(1.5, -0.25, -0.25)
    with pytest.raises(SpecError, match="positive sum"):
        TediWeights.normalized(0, 0, 0)
    assert TediWeights.uniform().alpha == pytest.approx(1 / 3)


def test_confinement_trap_tedi_inertia_is_one():
    env = builtin_env("a4-detjump")
    space = enumerate_trajectories(env, 6)
    trap = detect_trap_confinement(env, PolicySpec.pointwise(), space)
    rep = tedi_for_trap(space, trap)
    assert rep.inertia == 1.0


def test_front_planner_reachable_set_has_zero_escape_distance():
    from ptl.dominance import pareto_front
    env = builtin_env("a4-detjump")
    space = enumerate_trajectories(env, 4)
    front = sorted(pareto_front(space).front_ids)
    trap = Trap(member_ids=tuple(front), witnesses=(),
                boundary_edges=(), mode=TrapMode.CONFINEMENT)
    assert escape_distance(space, trap) == 0.0


def test_default_stats_path_matches_manual_composition(two_basin):
    space, trap = two_basin
    auto = tedi_for_trap(space, trap)
    manual = tedi(
        escape_distance(space, trap),
        structural_constraint(space, trap),
        behavioral_inertia(member_action_counts(space, trap.member_ids)),
    )
    assert auto == manual


def test_degenerate_coordinate_dropped_with_warning():
    costs = np.array([[1.0, 5.0], [2.0, 5.0], [0.5, 5.0]])
    space = ptl.TrajectorySpace(
        env=builtin_env("two-basin"),
        actions=np.array([[0, 0], [0, 1], [1, 1]], dtype=np.int8),
        states=np.zeros((3, 3), dtype=np.int16),
        costs=costs,
        epsilon=1,
        complete=False,
    )
    trap = Trap(member_ids=(0,), witnesses=(2,),
                boundary_edges=((0, 1),), mode=TrapMode.STRICT)
    with pytest.warns(UserWarning, match="degenerate"):
        D = escape_distance(space, trap)
    assert 0.0 <= D <= 1.0
