"""Declarative scenario files: one game, one dynamic, one run, some audits.

Scenario files are TOML.  Exact keys:

    seed = 0                         # optional integer

    [game]
    spec = "good_rps:1:0.9"          # string shorthand, or inline fields
                                     # (type = "matrix", matrix = [[...]], ...)

    [dynamic]
    spec = "smith:1.0"               # string shorthand, or inline fields

    [run]
    initial_state = [0.9, 0.05, 0.05]
    dt = 0.01                        # optional, default 0.01
    horizon = 200.0
    scheme = "rk4"                   # optional: euler | rk4
    record_every = 1                 # optional

    [[audit]]                        # zero or more
    kind = "monotonicity"
    series = "G"
    budget = "default"               # "default" or a number
    expect = "monotone_up_to_transients"   # optional; omit = informational

    [[audit]]
    kind = "convergence"
    target = "equilibrium"           # "equilibrium" or an explicit state
    radius = 1e-3
    expect = true                    # optional, default true

    [output]                         # optional
    trajectory_csv = "traj.csv"
    report_json = "report.json"

Unknown keys anywhere are rejected.  Validation collects every error before
failing, each tagged with its key path.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
import tomli

from .dynamics import DynamicsError, MeanDynamic, make_dynamic
from .games import GameError, MultiPopulationGame, PopulationGame, make_game
from .integrate import IntegratorConfig
from .protocols import ProtocolError

_VERDICTS = ("monotone", "monotone_up_to_transients", "non_monotone")


class ScenarioError(ValueError):
    """Carries the full list of validation errors."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class AuditRequest:
    kind: str                       # monotonicity | convergence
    series: str | None = None
    budget: float | None = None     # None means the default budget
    expect: str | bool | None = None
    target: tuple | str | None = None
    radius: float | None = None


@dataclass(frozen=True)
class Scenario:
    game: PopulationGame | MultiPopulationGame
    dynamic: MeanDynamic
    initial_state: tuple[float, ...]
    config: IntegratorConfig
    audits: tuple[AuditRequest, ...] = ()
    seed: int = 0
    trajectory_csv: str | None = None
    report_json: str | None = None
    name: str = ""


def _check_keys(table: dict, allowed: set[str], where: str, errors: list) -> None:
    for k in table:
        if k not in allowed:
            errors.append(f"{where}.{k}: unknown key")


def parse_scenario(path: str) -> Scenario:
    """Parse and fully validate a scenario file; raises ScenarioError with
    every problem found, not just the first."""
    with open(path, "rb") as fh:
        try:
            raw = tomli.load(fh)
        except tomli.TOMLDecodeError as exc:
            raise ScenarioError([f"(file): not valid TOML: {exc}"]) from exc
    errors: list[str] = []
    _check_keys(raw, {"seed", "game", "dynamic", "run", "audit", "output"},
                "(top level)", errors)

    seed = raw.get("seed", 0)
    if not isinstance(seed, int):
        errors.append("seed: must be an integer")
        seed = 0
    env = os.environ.get("GAINFLOW_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            errors.append("GAINFLOW_SEED: not an integer")

    # game ------------------------------------------------------------------
    game = None
    if "game" not in raw:
        errors.append("game: missing table")
    else:
        gspec = raw["game"]
        if "spec" in gspec and len(gspec) > 1:
            errors.append("game: give either spec or inline fields, not both")
        try:
            game = make_game(gspec["spec"] if "spec" in gspec else dict(gspec))
        except (GameError, KeyError, TypeError, ValueError) as exc:
            errors.append(f"game: {exc}")

    if isinstance(game, MultiPopulationGame):
        errors.append("game: several-population games are driven through the "
                      "library API, not scenario files")
        game = None
    action_count = getattr(game, "action_count", None)

    # dynamic ----------------------------------------------------------------
    dynamic = None
    if "dynamic" not in raw:
        errors.append("dynamic: missing table")
    elif game is not None and action_count is not None:
        dspec = raw["dynamic"]
        if "spec" in dspec and len(dspec) > 1:
            errors.append("dynamic: give either spec or inline fields, not both")
        try:
            dynamic = make_dynamic(dspec["spec"] if "spec" in dspec else dict(dspec),
                                   action_count)
        except (DynamicsError, ProtocolError, KeyError, TypeError, ValueError) as exc:
            errors.append(f"dynamic: {exc}")

    # run ---------------------------------------------------------------------
    x0: tuple[float, ...] = ()
    config = None
    if "run" not in raw:
        errors.append("run: missing table")
    else:
        run = raw["run"]
        _check_keys(run, {"initial_state", "dt", "horizon", "scheme", "record_every"},
                    "run", errors)
        if "initial_state" not in run:
            errors.append("run.initial_state: missing")
        else:
            try:
                x0 = tuple(float(v) for v in run["initial_state"])
            except (TypeError, ValueError):
                errors.append("run.initial_state: must be a list of numbers")
            if x0 and action_count is not None and len(x0) != action_count:
                errors.append(
                    f"run.initial_state: length {len(x0)} does not match the "
                    f"game's action count {action_count}")
            if x0 and (min(x0) < 0 or sum(x0) <= 0):
                errors.append("run.initial_state: must be non-negative with positive mass")
        if "horizon" not in run:
            errors.append("run.horizon: missing")
        try:
            config = IntegratorConfig(
                dt=float(run.get("dt", 0.01)),
                horizon=float(run.get("horizon", 0.0)),
                scheme=run.get("scheme", "rk4"),
                record_every=int(run.get("record_every", 1)),
            )
        except (TypeError, ValueError) as exc:
            errors.append(f"run: {exc}")

    # audits --------------------------------------------------------------------
    audits: list[AuditRequest] = []
    for i, a in enumerate(raw.get("audit", [])):
        where = f"audit[{i}]"
        if not isinstance(a, dict):
            errors.append(f"{where}: must be a table")
            continue
        kind = a.get("kind")
        if kind == "monotonicity":
            _check_keys(a, {"kind", "series", "budget", "expect"}, where, errors)
            if "series" not in a:
                errors.append(f"{where}.series: missing")
            budget = a.get("budget", "default")
            if budget == "default":
                budget = None
            elif not isinstance(budget, (int, float)):
                errors.append(f"{where}.budget: must be a number or \"default\"")
                budget = None
            expect = a.get("expect")
            if expect is not None and expect not in _VERDICTS:
                errors.append(f"{where}.expect: must be one of {_VERDICTS}")
            audits.append(AuditRequest(kind="monotonicity", series=a.get("series"),
                                       budget=budget, expect=expect))
        elif kind == "convergence":
            _check_keys(a, {"kind", "target", "radius", "expect"}, where, errors)
            target = a.get("target", "equilibrium")
            if isinstance(target, (list, tuple)):
                target = tuple(float(v) for v in target)
                if action_count is not None and len(target) != action_count:
                    errors.append(f"{where}.target: wrong length")
            elif target != "equilibrium":
                errors.append(f"{where}.target: must be \"equilibrium\" or a state")
            if "radius" not in a:
                errors.append(f"{where}.radius: missing")
            expect = a.get("expect", True)
            if not isinstance(expect, bool):
                errors.append(f"{where}.expect: must be a boolean")
            audits.append(AuditRequest(kind="convergence", target=target,
                                       radius=float(a.get("radius", 0.0)),
                                       expect=expect))
        else:
            errors.append(f"{where}.kind: unknown audit kind {kind!r}")

    # output ----------------------------------------------------------------------
    out = raw.get("output", {})
    _check_keys(out, {"trajectory_csv", "report_json"}, "output", errors)

    if errors:
        raise ScenarioError(errors)
    return Scenario(
        game=game,
        dynamic=dynamic,
        initial_state=x0,
        config=config,
        audits=tuple(audits),
        seed=seed,
        trajectory_csv=out.get("trajectory_csv"),
        report_json=out.get("report_json"),
        name=os.path.splitext(os.path.basename(path))[0],
    )


def bundled_scenario_path(name: str) -> str:
    """Resolve the path of a scenario shipped with the package."""
    here = os.path.join(os.path.dirname(__file__), "scenarios")
    fn = name if name.endswith(".scenario") else name + ".scenario"
    path = os.path.join(here, fn)
    if not os.path.exists(path):
        raise FileNotFoundError(f"no bundled scenario named {name!r}")
    return path
