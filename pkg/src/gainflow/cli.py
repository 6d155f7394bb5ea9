"""Command-line surface: simulate, audit, check-protocol, check-game, properties.

Exit codes: 0 all requested assertions pass, 1 an assertion fails, 2 bad
flags, 3 an output path cannot be written.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .analysis import (
    audit_convergence,
    audit_monotonicity,
    run_property_suite,
)
from .games import GameError, is_stable_game, make_game
from .integrate import Trajectory, simulate
from .protocols import ProtocolError, make_protocol
from .scenario import Scenario, ScenarioError, bundled_scenario_path, parse_scenario


def _resolve_scenario(path: str) -> str:
    import os
    if os.path.exists(path):
        return path
    try:
        return bundled_scenario_path(path)
    except FileNotFoundError:
        raise ScenarioError([f"(file): no such scenario file or bundled name: {path}"])


def write_trajectory_csv(traj: Trajectory, path: str) -> None:
    """Columns: t, x1..xA, pi1..piA, G, H, Gamma, nash_gap, then any extras.

    Values use 17 significant digits so a re-parse reproduces them exactly.
    """
    A = traj.states.shape[1]
    preferred = ["G", "H", "Gamma", "nash_gap"]
    names = [n for n in preferred if n in traj.series]
    names += [n for n in sorted(traj.series) if n not in preferred]
    header = (["t"] + [f"x{i + 1}" for i in range(A)]
              + [f"pi{i + 1}" for i in range(A)] + names)
    fmt = "%.17g"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(traj.times.size):
            row = [fmt % traj.times[i]]
            row += [fmt % v for v in traj.states[i]]
            row += [fmt % v for v in traj.payoffs[i]]
            row += [fmt % traj.series[n][i] for n in names]
            fh.write(",".join(row) + "\n")


def read_trajectory_csv(path: str) -> dict[str, np.ndarray]:
    """Re-parse a written trajectory into named columns."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return {name: data[:, j] for j, name in enumerate(header)}


def _json_ready(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: _json_ready(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    return obj


def _write_json(payload, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_json_ready(payload), fh, indent=2)
        fh.write("\n")


def _run_scenario(sc: Scenario) -> Trajectory:
    return simulate(sc.game, sc.dynamic, sc.initial_state, sc.config, seed=sc.seed)


def _resolve_target(sc: Scenario, target):
    if target == "equilibrium" or target is None:
        if not sc.game.equilibria:
            raise ScenarioError(["audit.target: the game has no annotated equilibrium"])
        return np.asarray(sc.game.equilibria[0], float)
    return np.asarray(target, float)


def _audit_scenario(sc: Scenario, traj: Trajectory) -> tuple[list, bool]:
    reports = []
    ok = True
    for req in sc.audits:
        if req.kind == "monotonicity":
            rep = audit_monotonicity(traj, req.series, budget=req.budget)
            if req.expect is None:
                passed = True
            elif req.expect == "monotone_up_to_transients":
                # a fully monotone series satisfies the weaker expectation
                passed = rep.verdict in ("monotone", "monotone_up_to_transients")
            else:
                passed = rep.verdict == req.expect
            reports.append({"kind": "monotonicity", "series": req.series,
                            "expect": req.expect, "passed": passed, "report": rep})
        else:
            rep = audit_convergence(traj, _resolve_target(sc, req.target), req.radius)
            passed = rep.converged == (req.expect if req.expect is not None else True)
            reports.append({"kind": "convergence", "expect": req.expect,
                            "passed": passed, "report": rep})
        ok = ok and passed
    return reports, ok


def _simulate_one(path: str, out: str | None, out_json: str | None,
                  do_audit: bool, report_path: str | None) -> int:
    sc = parse_scenario(_resolve_scenario(path))
    traj = _run_scenario(sc)
    code = 0
    reports = []
    if do_audit:
        reports, ok = _audit_scenario(sc, traj)
        code = 0 if ok else 1
        for r in reports:
            verdict = r["report"].verdict if r["kind"] == "monotonicity" \
                else ("converged" if r["report"].converged else "not converged")
            status = "PASS" if r["passed"] else \
                ("INFO" if r.get("expect") is None else "FAIL")
            label = r["series"] if r["kind"] == "monotonicity" else "convergence"
            print(f"[{status}] {sc.name}: {label} -> {verdict}")
    csv_path = out or sc.trajectory_csv
    json_path = out_json or sc.report_json
    try:
        if csv_path:
            write_trajectory_csv(traj, csv_path)
        if json_path:
            _write_json({"scenario": sc.name, "metadata": traj.metadata,
                         "clipped_total": traj.clipped_total,
                         "audits": reports}, json_path)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 3
    return code


def _cmd_simulate(args) -> int:
    return _run_many(args.scenario, args.sweep, args.out, args.json, do_audit=False,
                     report_path=None)


def _cmd_audit(args) -> int:
    return _run_many(args.scenario, args.sweep, args.out, args.report, do_audit=True,
                     report_path=args.report)


def _run_many(paths, sweep: bool, out, out_json, do_audit, report_path) -> int:
    if len(paths) == 1:
        return _simulate_one(paths[0], out, out_json, do_audit, report_path)
    if out or out_json:
        print("error: per-file outputs are not supported with several scenarios; "
              "set [output] in each scenario file", file=sys.stderr)
        return 2
    runner = (lambda p: _simulate_one(p, None, None, do_audit, None))
    if sweep:
        with ThreadPoolExecutor() as pool:
            codes = list(pool.map(runner, paths))
    else:
        codes = [runner(p) for p in paths]
    return max(codes)


def _cmd_check_protocol(args) -> int:
    proto = make_protocol(args.spec, args.actions)
    report = proto.validate()
    print(f"protocol: {proto.name}")
    for flag in ("a0_pass", "q1_pass", "a1i_pass", "a1ii_pass"):
        print(f"  {flag}: {getattr(report, flag)}")
    for w in report.witnesses[:10]:
        print(f"  witness: {w}")
    if args.json:
        _write_json(report, args.json)
    return 0 if report.all_pass else 1


def _cmd_check_game(args) -> int:
    game = make_game(args.spec)
    report = is_stable_game(game, sample_count=args.samples, seed=args.seed)
    print(f"game: {game.name}")
    print(f"  stable: {report.stable}")
    print(f"  worst_margin: {report.worst_margin:.6g}")
    print(f"  worst_state: {np.asarray(report.worst_state).round(6).tolist()}")
    print(f"  sample_count: {report.sample_count}")
    if args.json:
        _write_json({"name": game.name, "stable": report.stable,
                     "worst_margin": report.worst_margin,
                     "worst_state": np.asarray(report.worst_state),
                     "sample_count": report.sample_count}, args.json)
    return 0 if report.stable else 1


def _cmd_properties(args) -> int:
    proto = make_protocol(args.spec, args.actions)
    report = run_property_suite(proto, seed=args.seed, trial_count=args.trials)
    for r in report.results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {report.protocol}: {r.name} "
              f"({r.trials} trials, {r.failures} failures)")
    if args.json:
        _write_json(report, args.json)
    return 0 if report.all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gainflow",
                                description="Evolutionary-dynamics gain audits")
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a scenario and write the trajectory")
    sim.add_argument("--scenario", nargs="+", required=True)
    sim.add_argument("--out", help="trajectory CSV path")
    sim.add_argument("--json", help="run-report JSON path")
    sim.add_argument("--sweep", action="store_true",
                     help="run several scenarios in parallel")
    sim.set_defaults(func=_cmd_simulate)

    aud = sub.add_parser("audit", help="run a scenario and audit its series")
    aud.add_argument("--scenario", nargs="+", required=True)
    aud.add_argument("--out", help="trajectory CSV path")
    aud.add_argument("--report", help="audit-report JSON path")
    aud.add_argument("--sweep", action="store_true")
    aud.set_defaults(func=_cmd_audit)

    chp = sub.add_parser("check-protocol", help="validate a protocol's assumptions")
    chp.add_argument("--spec", required=True)
    chp.add_argument("--actions", type=int, default=3)
    chp.add_argument("--json")
    chp.set_defaults(func=_cmd_check_protocol)

    chg = sub.add_parser("check-game", help="certify static stability of a game")
    chg.add_argument("--spec", required=True)
    chg.add_argument("--samples", type=int, default=64)
    chg.add_argument("--seed", type=int, default=0)
    chg.add_argument("--json")
    chg.set_defaults(func=_cmd_check_game)

    props = sub.add_parser("properties", help="run the randomized gain property suite")
    props.add_argument("--spec", required=True)
    props.add_argument("--actions", type=int, default=3)
    props.add_argument("--trials", type=int, default=200)
    props.add_argument("--seed", type=int, default=0)
    props.add_argument("--json")
    props.set_defaults(func=_cmd_properties)
    return p


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ScenarioError as exc:
        for e in exc.errors:
            print(f"error: {e}", file=sys.stderr)
        return 1
    except (GameError, ProtocolError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
