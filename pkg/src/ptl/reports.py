"""CSV and JSON report writers.

All writers are byte-deterministic for fixed inputs: floats are formatted
with Python's shortest round-trip repr, column orders are frozen, and rows
are emitted in id/run order.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .dominance import FrontResult
from .env import EnvironmentSpec, step_cost
from .sim import BatchStats, ComparisonReport
from .tedi import TediReport
from .trajspace import TrajectorySpace
from .traps import Scalarization, Trap, ceiling


def fmt(value) -> str:
    """Shortest round-trip decimal for floats; plain text otherwise."""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _writer(path: Path):
    fh = open(path, "w", newline="", encoding="utf-8")
    return fh, csv.writer(fh)


def _cost_headers(m: int) -> tuple[list[str], list[str]]:
    step = [f"l{i + 1}" for i in range(m)]
    cum = [f"J{i + 1}_cum" for i in range(m)]
    return step, cum


def write_trajectories_csv(path, spec: EnvironmentSpec, states: np.ndarray,
                           actions: np.ndarray, run_ids=None) -> None:
    """One row per (run, step) with step costs and running totals, plus a
    step=-1 summary row carrying final accumulated costs."""
    m = spec.num_objectives
    step_h, cum_h = _cost_headers(m)
    n, T = actions.shape
    if run_ids is None:
        run_ids = range(n)
    fh, w = _writer(Path(path))
    with fh:
        w.writerow(["run_id", "step", "state", "action_name", *step_h, *cum_h])
        for row, rid in zip(range(n), run_ids):
            cum = [[] for _ in range(m)]
            totals = [0.0] * m
            for t in range(T):
                state = int(states[row, t])
                action = int(actions[row, t])
                c = step_cost(spec, state, action)
                for i in range(m):
                    cum[i].append(float(c[i]))
                    totals[i] = math.fsum(cum[i])
                w.writerow([
                    rid, t, state, spec.actions[action].name,
                    *(fmt(float(c[i])) for i in range(m)),
                    *(fmt(totals[i]) for i in range(m)),
                ])
            w.writerow([
                rid, -1, int(states[row, T]), "",
                *([""] * m),
                *(fmt(totals[i]) for i in range(m)),
            ])


def write_front_csv(path, costs: np.ndarray, front: FrontResult,
                    components: list[list[int]] | None = None) -> None:
    n, m = costs.shape
    comp_of: dict[int, int] = {}
    if components:
        for k, comp in enumerate(components):
            for i in comp:
                comp_of[i] = k
    fh, w = _writer(Path(path))
    with fh:
        w.writerow(["traj_id", *(f"J{i + 1}" for i in range(m)),
                    "on_front", "dominated_by", "component_id"])
        for i in range(n):
            on = i in front.front_ids
            w.writerow([
                i,
                *(fmt(costs[i, k]) for k in range(m)),
                1 if on else 0,
                "" if on else front.dominated_by[i],
                comp_of.get(i, "") if on else "",
            ])


def write_traps_json(path, space: TrajectorySpace, traps: list[Trap],
                     f: Scalarization) -> None:
    records = []
    for k, trap in enumerate(traps):
        records.append({
            "trap_id": k,
            "mode": trap.mode.value,
            "member_ids": list(trap.member_ids),
            "witness_ids": list(trap.witnesses),
            "boundary_edges": [list(e) for e in trap.boundary_edges],
            "label": trap.label.value if trap.label else None,
            "ceiling": ceiling(space, trap.member_ids, f),
            "confinement_threshold": trap.confinement_threshold,
        })
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(records, fh, indent=2)
        fh.write("\n")


def write_tedi_csv(path, reports: list[tuple[int, TediReport]]) -> None:
    fh, w = _writer(Path(path))
    with fh:
        w.writerow(["trap_id", "D", "S_structural", "B",
                    "alpha", "beta", "gamma", "tedi", "category"])
        for trap_id, rep in reports:
            w.writerow([
                trap_id,
                fmt(rep.escape_distance), fmt(rep.structural), fmt(rep.inertia),
                fmt(rep.weights.alpha), fmt(rep.weights.beta), fmt(rep.weights.gamma),
                fmt(rep.value), rep.category.value,
            ])


def write_stats_csv(path, entries: list[tuple[str, BatchStats]]) -> None:
    """Final-state histogram rows per policy."""
    fh, w = _writer(Path(path))
    with fh:
        w.writerow(["policy", "final_state", "count", "frequency"])
        for label, stats in entries:
            for state, count in enumerate(stats.final_state_histogram):
                w.writerow([label, state, int(count), fmt(count / stats.runs)])


def write_actions_csv(path, spec: EnvironmentSpec,
                      entries: list[tuple[str, BatchStats]]) -> None:
    fh, w = _writer(Path(path))
    with fh:
        w.writerow(["policy", "action_name", "count", "frequency"])
        for label, stats in entries:
            total = stats.action_counts.sum()
            for a, count in enumerate(stats.action_counts):
                w.writerow([label, spec.actions[a].name, int(count),
                            fmt(count / total)])


def write_curves_csv(path, entries: list[tuple[str, BatchStats]]) -> None:
    fh, w = _writer(Path(path))
    with fh:
        w.writerow(["policy", "step", "mean_state", "mean_cum_J1"])
        for label, stats in entries:
            for t in range(stats.states.shape[1]):
                w.writerow([label, t, fmt(stats.mean_state_curve[t]),
                            fmt(stats.mean_cum_j1_curve[t])])


def write_costs_csv(path, report: ComparisonReport) -> None:
    m = report.pooled_costs.shape[1]
    fh, w = _writer(Path(path))
    with fh:
        w.writerow(["policy", "run_id", *(f"J{i + 1}" for i in range(m))])
        for row in range(report.pooled_costs.shape[0]):
            w.writerow([
                report.labels[report.pooled_policy_idx[row]],
                int(report.pooled_run_ids[row]),
                *(fmt(report.pooled_costs[row, k]) for k in range(m)),
            ])


def write_pooled_front_csv(path, report: ComparisonReport) -> None:
    costs = report.pooled_costs
    front = report.pooled_front
    fh, w = _writer(Path(path))
    with fh:
        w.writerow(["policy", "run_id",
                    *(f"J{i + 1}" for i in range(costs.shape[1])),
                    "on_front", "dominated_by"])
        for row in range(costs.shape[0]):
            on = row in front.front_ids
            w.writerow([
                report.labels[report.pooled_policy_idx[row]],
                int(report.pooled_run_ids[row]),
                *(fmt(costs[row, k]) for k in range(costs.shape[1])),
                1 if on else 0,
                "" if on else front.dominated_by[row],
            ])


def write_hist_j2_csv(path, report: ComparisonReport) -> None:
    edges = report.j2_bin_edges
    fh, w = _writer(Path(path))
    with fh:
        w.writerow(["policy", "bin_lo", "bin_hi", "count"])
        for k, label in enumerate(report.labels):
            for b in range(len(edges) - 1):
                w.writerow([label, fmt(edges[b]), fmt(edges[b + 1]),
                            int(report.j2_histograms[k, b])])
