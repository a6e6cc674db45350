"""Command-line front-end.

Subcommands: env show|list, simulate, enumerate, front, analyze, compare,
tedi. Exit codes: 0 success, 1 usage error, 2 invalid environment spec,
3 infeasible operation (stochastic enumeration, cap exceeded). The seed
falls back to the PTL_SEED environment variable, then to 0. All file
outputs are byte-deterministic for fixed flags.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import reports, svg
from .dominance import front_components, pareto_front
from .env import BUILTIN_NAMES, EnvironmentSpec, builtin_env, load_env_file, \
    serialize_env
from .errors import InfeasibleError, SpecError
from .sim import PolicySpec, compare_policies, run_batch
from .tedi import TediWeights, tedi_for_trap
from .trajspace import ENUMERATION_CAP, enumerate_trajectories
from .traps import Scalarization, ceiling, detect_trap_confinement, \
    detect_traps_strict

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SPEC = 2
EXIT_INFEASIBLE = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _UsageError(Exception):
    pass


def _resolve_env(token: str) -> EnvironmentSpec:
    if token.startswith("builtin:"):
        return builtin_env(token[len("builtin:"):])
    if token in BUILTIN_NAMES:
        return builtin_env(token)
    return load_env_file(token)


def _resolve_policy(name: str) -> PolicySpec:
    name = name.strip()
    if name == "pointwise":
        return PolicySpec.pointwise()
    if name == "trajectory":
        return PolicySpec.trajectory_dominant()
    if name == "random":
        return PolicySpec.random_uniform()
    raise _UsageError(
        f"unknown policy {name!r}; valid: pointwise, trajectory, random"
    )


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env_seed = os.environ.get("PTL_SEED")
    if env_seed is not None:
        try:
            return int(env_seed)
        except ValueError:
            raise _UsageError(f"PTL_SEED must be an integer, got {env_seed!r}")
    return 0


def _prepare_out(args, filenames: list[str]) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if not args.force:
        existing = [name for name in filenames if (out / name).exists()]
        if existing:
            raise _UsageError(
                f"refusing to overwrite {', '.join(existing)} in {out} "
                "(pass --force)"
            )
    return out


def _scalarization(args, m: int) -> Scalarization:
    raw = getattr(args, "scalar_weights", None)
    if not raw:
        return Scalarization.uniform(m)
    weights = [float(w) for w in raw.split(",")]
    if len(weights) != m:
        raise _UsageError(
            f"--scalar-weights needs {m} comma-separated values, got {len(weights)}"
        )
    return Scalarization.normalized(weights)


def _tedi_weights(args) -> TediWeights:
    raw = getattr(args, "weights", None)
    if not raw:
        return TediWeights.uniform()
    parts = [float(w) for w in raw.split(",")]
    if len(parts) != 3:
        raise _UsageError("--weights needs 3 comma-separated values (alpha,beta,gamma)")
    return TediWeights.normalized(*parts)


def _add_common(p, out=True):
    p.add_argument("--env", required=True,
                   help="builtin:NAME (a3, a4, a4-detjump, two-basin) or a JSON file path")
    p.add_argument("--seed", type=int, default=None,
                   help="base seed (fallback: PTL_SEED, then 0)")
    if out:
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--force", action="store_true",
                       help="overwrite existing output files")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads for parallel-capable operations")
    p.add_argument("--json", action="store_true",
                   help="also write a summary.json next to the CSVs")


def build_parser() -> _Parser:
    parser = _Parser(prog="ptl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p_env = sub.add_parser("env", help="inspect environments")
    env_sub = p_env.add_subparsers(dest="env_command", required=True,
                                   parser_class=_Parser)
    env_sub.add_parser("list", help="list builtin environment names")
    p_show = env_sub.add_parser("show", help="print an environment as JSON")
    p_show.add_argument("--env", required=True)

    p_sim = sub.add_parser("simulate", help="seeded batch rollout of one policy")
    _add_common(p_sim)
    p_sim.add_argument("--policy", required=True)
    p_sim.add_argument("--runs", type=int, required=True)

    p_enum = sub.add_parser("enumerate", help="exhaustively enumerate trajectories")
    _add_common(p_enum)
    p_enum.add_argument("--horizon", type=int, default=None)
    p_enum.add_argument("--epsilon", type=int, default=1)
    p_enum.add_argument("--cap", type=int, default=ENUMERATION_CAP)

    p_front = sub.add_parser("front", help="exact Pareto front of the enumeration")
    _add_common(p_front)
    p_front.add_argument("--horizon", type=int, default=None)
    p_front.add_argument("--epsilon", type=int, default=1)
    p_front.add_argument("--cap", type=int, default=ENUMERATION_CAP)

    p_an = sub.add_parser("analyze",
                          help="front, strict traps, ceilings, TEDI")
    _add_common(p_an)
    p_an.add_argument("--horizon", type=int, default=None)
    p_an.add_argument("--epsilon", type=int, default=1)
    p_an.add_argument("--cap", type=int, default=ENUMERATION_CAP)
    p_an.add_argument("--weights", default=None,
                      help="TEDI weights alpha,beta,gamma (normalized)")
    p_an.add_argument("--scalar-weights", default=None,
                      help="scalarization weights w1,...,wm (normalized)")
    p_an.add_argument("--policy", default=None,
                      help="also run confinement analysis for this policy")
    p_an.add_argument("--confinement-seeds", type=int, default=32,
                      help="seed count for stochastic-policy confinement")

    p_cmp = sub.add_parser("compare", help="run and compare several policies")
    _add_common(p_cmp)
    p_cmp.add_argument("--policies", required=True,
                       help="comma-separated policy names (at least 2)")
    p_cmp.add_argument("--runs", type=int, required=True)
    p_cmp.add_argument("--svg", action="store_true",
                       help="emit SVG panels next to the CSVs")

    p_tedi = sub.add_parser("tedi", help="TEDI table for detected traps")
    _add_common(p_tedi)
    p_tedi.add_argument("--horizon", type=int, default=None)
    p_tedi.add_argument("--epsilon", type=int, default=1)
    p_tedi.add_argument("--cap", type=int, default=ENUMERATION_CAP)
    p_tedi.add_argument("--weights", default=None)
    p_tedi.add_argument("--scalar-weights", default=None)
    return parser


def cmd_env(args) -> int:
    if args.env_command == "list":
        for name in BUILTIN_NAMES:
            print(name)
        return EXIT_OK
    spec = _resolve_env(args.env)
    sys.stdout.write(serialize_env(spec))
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = _resolve_env(args.env)
    policy = _resolve_policy(args.policy)
    if args.runs < 1:
        raise _UsageError("--runs must be >= 1")
    seed = _resolve_seed(args)
    out = _prepare_out(args, ["trajectories.csv", "stats.csv", "actions.csv",
                              "curves.csv", "summary.json"])
    stats = run_batch(spec, policy, args.runs, seed, threads=args.threads)
    entries = [(policy.kind, stats)]
    reports.write_trajectories_csv(out / "trajectories.csv", spec,
                                   stats.states, stats.actions)
    reports.write_stats_csv(out / "stats.csv", entries)
    reports.write_actions_csv(out / "actions.csv", spec, entries)
    reports.write_curves_csv(out / "curves.csv", entries)
    if args.json:
        import json
        summary = {
            "env": spec.name,
            "policy": policy.kind,
            "runs": args.runs,
            "seed": seed,
            "final_state_histogram": stats.final_state_histogram.tolist(),
            "action_counts": stats.action_counts.tolist(),
        }
        (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    print(f"wrote simulation reports for {args.runs} runs to {out}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    spec = _resolve_env(args.env)
    seedless_out = _prepare_out(args, ["trajectories.csv"])
    space = enumerate_trajectories(spec, args.horizon, epsilon=args.epsilon,
                                   cap=args.cap)
    reports.write_trajectories_csv(seedless_out / "trajectories.csv", spec,
                                   space.states, space.actions)
    print(f"enumerated {len(space)} trajectories to {seedless_out}")
    return EXIT_OK


def cmd_front(args) -> int:
    spec = _resolve_env(args.env)
    out = _prepare_out(args, ["front.csv"])
    space = enumerate_trajectories(spec, args.horizon, epsilon=args.epsilon,
                                   cap=args.cap)
    front = pareto_front(space)
    comps = front_components(space, front)
    reports.write_front_csv(out / "front.csv", space.costs, front, comps)
    print(f"front size {len(front.front_ids)} over {len(space)} trajectories; "
          f"{len(comps)} component(s)")
    return EXIT_OK


def cmd_analyze(args) -> int:
    spec = _resolve_env(args.env)
    out = _prepare_out(args, ["front.csv", "traps.json", "tedi.csv"])
    space = enumerate_trajectories(spec, args.horizon, epsilon=args.epsilon,
                                   cap=args.cap)
    f = _scalarization(args, spec.num_objectives)
    weights = _tedi_weights(args)

    front = pareto_front(space)
    comps = front_components(space, front)
    reports.write_front_csv(out / "front.csv", space.costs, front, comps)

    traps = detect_traps_strict(space)
    if args.policy is not None:
        policy = _resolve_policy(args.policy)
        seeds = None if policy.is_deterministic else range(args.confinement_seeds)
        conf_trap = detect_trap_confinement(spec, policy, space, seeds=seeds)
        traps = traps + [conf_trap]
        gap = ceiling(space, range(len(space)), f) - ceiling(
            space, conf_trap.member_ids, f)
        print(f"confinement ceiling gap ({policy.kind}): {gap!r}")
    reports.write_traps_json(out / "traps.json", space, traps, f)
    tedi_rows = [
        (k, tedi_for_trap(space, trap, weights=weights, scalarization=f))
        for k, trap in enumerate(traps)
    ]
    reports.write_tedi_csv(out / "tedi.csv", tedi_rows)
    print(f"front {len(front.front_ids)}/{len(space)}; "
          f"{len(traps)} trap(s); reports in {out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    spec = _resolve_env(args.env)
    names = [n for n in args.policies.split(",") if n.strip()]
    if len(names) < 2:
        raise _UsageError("--policies needs at least 2 comma-separated names")
    if args.runs < 1:
        raise _UsageError("--runs must be >= 1")
    policies = [_resolve_policy(n) for n in names]
    seed = _resolve_seed(args)
    files = ["stats.csv", "actions.csv", "curves.csv", "costs.csv",
             "front.csv", "hist_j2.csv"]
    out = _prepare_out(args, files)
    report = compare_policies(spec, policies, args.runs, seed,
                              threads=args.threads)
    entries = list(zip(report.labels, report.stats))
    reports.write_stats_csv(out / "stats.csv", entries)
    reports.write_actions_csv(out / "actions.csv", spec, entries)
    reports.write_curves_csv(out / "curves.csv", entries)
    reports.write_costs_csv(out / "costs.csv", report)
    reports.write_pooled_front_csv(out / "front.csv", report)
    reports.write_hist_j2_csv(out / "hist_j2.csv", report)
    if args.svg:
        _write_compare_svgs(out, spec, report)
    print(f"compared {', '.join(report.labels)} over {args.runs} runs; "
          f"reports in {out}")
    return EXIT_OK


def _write_compare_svgs(out: Path, spec: EnvironmentSpec, report) -> None:
    state_series = {
        label: list(enumerate(stats.mean_state_curve.tolist()))
        for label, stats in zip(report.labels, report.stats)
    }
    (out / "states.svg").write_text(
        svg.line_chart("Mean state evolution", "step", "mean state", state_series))

    scatter = {}
    for k, label in enumerate(report.labels):
        rows = report.pooled_policy_idx == k
        pts = report.pooled_costs[rows]
        scatter[label] = [(float(x), float(y)) for x, y in pts[:, :2]]
    front_pts = [
        (float(report.pooled_costs[i, 0]), float(report.pooled_costs[i, 1]))
        for i in sorted(report.pooled_front.front_ids)
    ]
    (out / "scatter_front.svg").write_text(
        svg.scatter_chart("Accumulated cost vectors", "J1", "J2", scatter,
                          overlay=front_pts))

    categories = [str(s) for s in range(spec.n_states)]
    hist_series = {
        label: stats.final_state_histogram.tolist()
        for label, stats in zip(report.labels, report.stats)
    }
    (out / "final_states.svg").write_text(
        svg.bar_chart("Final state distribution", "final state", "runs",
                      categories, hist_series))

    action_names = [a.name for a in spec.actions]
    action_series = {
        label: stats.action_counts.tolist()
        for label, stats in zip(report.labels, report.stats)
    }
    (out / "actions.svg").write_text(
        svg.bar_chart("Action frequencies", "action", "count", action_names,
                      action_series))

    j1_series = {
        label: list(enumerate(stats.mean_cum_j1_curve.tolist()))
        for label, stats in zip(report.labels, report.stats)
    }
    (out / "cumulative_j1.svg").write_text(
        svg.line_chart("Mean cumulative J1", "step", "cumulative J1", j1_series))


def cmd_tedi(args) -> int:
    spec = _resolve_env(args.env)
    out = _prepare_out(args, ["tedi.csv"])
    space = enumerate_trajectories(spec, args.horizon, epsilon=args.epsilon,
                                   cap=args.cap)
    f = _scalarization(args, spec.num_objectives)
    weights = _tedi_weights(args)
    traps = detect_traps_strict(space)
    rows = [
        (k, tedi_for_trap(space, trap, weights=weights, scalarization=f))
        for k, trap in enumerate(traps)
    ]
    reports.write_tedi_csv(out / "tedi.csv", rows)
    for k, rep in rows:
        print(f"trap {k}: tedi={rep.value!r} category={rep.category.value}")
    if not rows:
        print("no strict traps detected")
    return EXIT_OK


_COMMANDS = {
    "env": cmd_env,
    "simulate": cmd_simulate,
    "enumerate": cmd_enumerate,
    "front": cmd_front,
    "analyze": cmd_analyze,
    "compare": cmd_compare,
    "tedi": cmd_tedi,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"ptl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpecError as exc:
        print(f"ptl: invalid spec: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except InfeasibleError as exc:
        print(f"ptl: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except FileNotFoundError as exc:
        print(f"ptl: invalid spec: {exc}", file=sys.stderr)
        return EXIT_SPEC


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
