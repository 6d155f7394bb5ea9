"""Fixed-step integration of the closed-loop dynamic on the simplex.

The combined field evaluates payoffs at the current state and feeds them to
the mean dynamic.  States are kept on the simplex by entrywise clipping at
zero followed by renormalization to the population mass; total clipping is
recorded so runs that lean on it are visible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dynamics import BirthDeathDynamic, MeanDynamic, RationalizableDynamic, ReplicatorDynamic
from .games import (
    GameError,
    MultiPopulationGame,
    PopulationGame,
    as_state_vector,
    jacobian as game_jacobian,
)
from .gains import (
    GainEvaluator,
    birth_death_gains,
    replicator_aggregate_gain,
    replicator_aggregate_gross,
    replicator_lyapunov,
)


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 0.01
    horizon: float = 100.0
    scheme: str = "rk4"
    record_every: int = 1
    clip_negative: bool = True

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.horizon < 0:
            raise ValueError("horizon must be non-negative")
        if self.horizon > 0 and self.dt > self.horizon:
            raise ValueError("dt must not exceed the horizon")
        if self.scheme not in ("euler", "rk4"):
            raise ValueError(f"unknown scheme: {self.scheme!r}")
        if self.record_every < 1:
            raise ValueError("record_every must be a positive integer")


@dataclass
class Trajectory:
    """A recorded solution path with per-record diagnostic series.

    ``series`` maps a name (e.g. "G", "H", "Gamma", "nash_gap", "W") to an
    array aligned with ``times``.  ``metadata`` records the run setup,
    including the sup-norm Jacobian bound used for audit budgets.
    """

    times: np.ndarray
    states: np.ndarray
    payoffs: np.ndarray
    series: dict[str, np.ndarray]
    metadata: dict
    clipped_total: float = 0.0

    def series_named(self, name: str) -> np.ndarray:
        if name not in self.series:
            raise KeyError(
                f"series {name!r} not recorded; available: {sorted(self.series)}")
        return self.series[name]


@dataclass
class MultiTrajectory(Trajectory):
    """Trajectory of a several-population run.

    ``states``/``payoffs`` hold the aggregate (mass-weighted sum of the
    population states and the stack-mean payoffs); per-population paths live
    in ``population_states`` and ``population_payoffs``.
    """

    population_states: tuple[np.ndarray, ...] = ()
    population_payoffs: tuple[np.ndarray, ...] = ()


def _project(y: np.ndarray, mass: float, clip: bool) -> tuple[np.ndarray, float]:
    """Clip negatives and renormalize to the mass; return clipped magnitude."""
    clipped = 0.0
    if clip and y.min() < 0:
        clipped = float(-y[y < 0].sum())
        y = np.maximum(y, 0.0)
    total = y.sum()
    if total <= 0:
        raise IntegrationError(f"state collapsed to zero mass: {y}")
    return y * (mass / total), clipped


def _field(game: PopulationGame, dyn: MeanDynamic, x: np.ndarray) -> np.ndarray:
    # payoff finiteness is asserted at every record, not at every stage
    pi = np.asarray(game.payoff_map(x), dtype=float)
    return dyn._velocity(x, pi)


def step(game: PopulationGame, dyn: MeanDynamic, x, dt: float,
         scheme: str = "rk4", clip_negative: bool = True) -> tuple[np.ndarray, float]:
    """One integration step; returns the new state and the clipped magnitude."""
    x = as_state_vector(x, game.action_count)
    mass = game.mass
    if scheme == "euler":
        y = x + dt * _field(game, dyn, x)
    elif scheme == "rk4":
        def f(z):
            z, _ = _project(z, mass, clip=True)
            return _field(game, dyn, z)
        k1 = _field(game, dyn, x)
        k2 = f(x + dt / 2 * k1)
        k3 = f(x + dt / 2 * k2)
        k4 = f(x + dt * k3)
        y = x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    else:
        raise ValueError(f"unknown scheme: {scheme!r}")
    if np.any(y < -1e-9) and not clip_negative:
        raise IntegrationError(f"negative state entry without clipping: {y}")
    return _project(y, mass, clip_negative)


def _gain_recorder(game, dyn, equilibrium):
    """Build (series names, record function) for the dynamic's gain family."""
    if isinstance(dyn, RationalizableDynamic):
        ev = GainEvaluator(dyn.protocol)

        def rec(x, pi):
            snap = ev.snapshot(x, pi)
            return {"G": snap.G, "H": snap.H, "Gamma": snap.Gamma}

        return ("G", "H", "Gamma"), rec
    if isinstance(dyn, BirthDeathDynamic):
        def rec(x, pi):
            snap = birth_death_gains(dyn, x, pi)
            return {"G": snap.G, "H": snap.H, "Gamma": snap.Gamma}

        return ("G", "H", "Gamma"), rec
    if isinstance(dyn, ReplicatorDynamic):
        names = ["G_replicator", "Gamma_replicator"]
        if equilibrium is not None:
            names.append("W")

        def rec(x, pi):
            out = {"G_replicator": replicator_aggregate_gain(x, pi),
                   "Gamma_replicator": replicator_aggregate_gross(x, pi)}
            if equilibrium is not None:
                out["W"] = replicator_lyapunov(equilibrium, x)
            return out

        return tuple(names), rec
    return (), (lambda x, pi: {})


def _nash_gap_raw(x: np.ndarray, pi: np.ndarray, mass: float) -> float:
    return float(pi.max() - x @ pi / mass)


def simulate(game: PopulationGame, dyn: MeanDynamic, x0,
             config: IntegratorConfig, seed: int | None = None) -> Trajectory:
    """Integrate the closed loop and record states, payoffs and gain series.

    Deterministic: the seed is metadata only (recorded for provenance of any
    seeded scenario inputs).  When the dynamic is the replicator and the game
    carries an annotated equilibrium, the relative-entropy series W is
    attached alongside the imitative aggregate-gain counterexample series.
    """
    x = as_state_vector(x0, game.action_count)
    x, _ = _project(x.astype(float), game.mass, clip=True)
    equilibrium = None
    if game.equilibria:
        equilibrium = np.asarray(game.equilibria[0], float) * game.mass
    names, rec = _gain_recorder(game, dyn, equilibrium)

    n_steps = int(round(config.horizon / config.dt)) if config.horizon > 0 else 0
    times, states, payoffs = [], [], []
    columns: dict[str, list] = {n: [] for n in names}
    columns["nash_gap"] = []
    clipped_total = 0.0
    sup_jac = 0.0

    def record(t, xv):
        pi = np.asarray(game.payoff_map(xv), dtype=float)
        if not np.all(np.isfinite(pi)):
            raise IntegrationError(f"non-finite payoff {pi} at state {xv}")
        times.append(t)
        states.append(xv)
        payoffs.append(pi)
        for k, v in rec(xv, pi).items():
            columns[k].append(v)
        columns["nash_gap"].append(_nash_gap_raw(xv, pi, game.mass))

    record(0.0, x)
    # the Jacobian bound is constant for linear games; sample it sparsely otherwise
    jac_stride = max(1, n_steps // 16) if not game.linear else max(1, n_steps)
    sup_jac = float(np.abs(game_jacobian(game, x)).sum(axis=1).max())
    for i in range(n_steps):
        x, clipped = step(game, dyn, x, config.dt, config.scheme,
                          config.clip_negative)
        clipped_total += clipped
        if not game.linear and (i + 1) % jac_stride == 0:
            sup_jac = max(sup_jac, float(np.abs(game_jacobian(game, x)).sum(axis=1).max()))
        if (i + 1) % config.record_every == 0 or i + 1 == n_steps:
            record((i + 1) * config.dt, x)

    return Trajectory(
        times=np.asarray(times),
        states=np.asarray(states),
        payoffs=np.asarray(payoffs),
        series={k: np.asarray(v) for k, v in columns.items()},
        metadata={
            "game": game.name,
            "dynamic": getattr(dyn, "name", dyn.kind),
            "dt": config.dt,
            "horizon": config.horizon,
            "scheme": config.scheme,
            "record_every": config.record_every,
            "seed": seed,
            "sup_jacobian_norm": sup_jac,
            "equilibrium": None if equilibrium is None else tuple(equilibrium),
        },
        clipped_total=clipped_total,
    )


def simulate_multi(game: MultiPopulationGame, dynamics: Sequence[MeanDynamic],
                   x0s: Sequence, config: IntegratorConfig,
                   seed: int | None = None) -> MultiTrajectory:
    """Integrate several coupled populations, one dynamic per population.

    The recorded aggregate state is the sum of the population states (each
    carrying its own mass, so the aggregate lies on the unit simplex).  The
    G/H series sum per-population aggregate gains; nash_gap records the
    largest per-population gap.
    """
    P = len(game.populations)
    if len(dynamics) != P or len(x0s) != P:
        raise GameError("one dynamic and one initial state per population required")
    xs = []
    for spec, x0 in zip(game.populations, x0s):
        v = as_state_vector(x0, spec.action_count).astype(float)
        v, _ = _project(v, spec.mass, clip=True)
        xs.append(v)
    evaluators = []
    for dyn in dynamics:
        if isinstance(dyn, RationalizableDynamic):
            evaluators.append(GainEvaluator(dyn.protocol))
        else:
            evaluators.append(None)

    def payoffs_of(xs_):
        pis = [np.asarray(p, float) for p in game.payoff_map(list(xs_))]
        for p in pis:
            if not np.all(np.isfinite(p)):
                raise IntegrationError(f"non-finite payoff {p}")
        return pis

    def project_all(ys):
        out, clipped = [], 0.0
        for y, spec in zip(ys, game.populations):
            v, c = _project(y, spec.mass, clip=True)
            out.append(v)
            clipped += c
        return out, clipped

    def fields(xs_):
        pis = [np.asarray(p, float) for p in game.payoff_map(list(xs_))]
        return [dyn._velocity(x, pi) for dyn, x, pi in zip(dynamics, xs_, pis)]

    n_steps = int(round(config.horizon / config.dt)) if config.horizon > 0 else 0
    times = []
    pop_states = [[] for _ in range(P)]
    pop_payoffs = [[] for _ in range(P)]
    G_series, H_series, gap_series = [], [], []
    clipped_total = 0.0

    def record(t, xs_):
        pis = payoffs_of(xs_)
        times.append(t)
        G = H = 0.0
        gap = 0.0
        for p in range(P):
            pop_states[p].append(xs_[p])
            pop_payoffs[p].append(pis[p])
            if evaluators[p] is not None:
                snap = evaluators[p].snapshot(xs_[p], pis[p])
                G += snap.G
                H += snap.H
            elif isinstance(dynamics[p], BirthDeathDynamic):
                snap = birth_death_gains(dynamics[p], xs_[p], pis[p])
                G += snap.G
                H += snap.H
            gap = max(gap, _nash_gap_raw(xs_[p], pis[p], game.populations[p].mass))
        G_series.append(G)
        H_series.append(H)
        gap_series.append(gap)

    record(0.0, xs)
    dt = config.dt
    for i in range(n_steps):
        if config.scheme == "euler":
            ks = fields(xs)
            ys = [x + dt * k for x, k in zip(xs, ks)]
        else:
            k1 = fields(xs)
            z, _ = project_all([x + dt / 2 * k for x, k in zip(xs, k1)])
            k2 = fields(z)
            z, _ = project_all([x + dt / 2 * k for x, k in zip(xs, k2)])
            k3 = fields(z)
            z, _ = project_all([x + dt * k for x, k in zip(xs, k3)])
            k4 = fields(z)
            ys = [x + dt / 6 * (a + 2 * b + 2 * c + d)
                  for x, a, b, c, d in zip(xs, k1, k2, k3, k4)]
        xs, clipped = project_all(ys)
        clipped_total += clipped
        if (i + 1) % config.record_every == 0 or i + 1 == n_steps:
            record((i + 1) * dt, xs)

    pop_states_arr = tuple(np.asarray(s) for s in pop_states)
    aggregate = np.sum(pop_states_arr, axis=0)
    pop_payoffs_arr = tuple(np.asarray(p) for p in pop_payoffs)
    return MultiTrajectory(
        times=np.asarray(times),
        states=aggregate,
        payoffs=np.mean(pop_payoffs_arr, axis=0),
        series={"G": np.asarray(G_series), "H": np.asarray(H_series),
                "nash_gap": np.asarray(gap_series)},
        metadata={
            "game": game.name,
            "dynamic": tuple(getattr(d, "name", d.kind) for d in dynamics),
            "dt": config.dt,
            "horizon": config.horizon,
            "scheme": config.scheme,
            "record_every": config.record_every,
            "seed": seed,
            "sup_jacobian_norm": None,
            "equilibrium": (tuple(game.aggregate_equilibria[0])
                            if game.aggregate_equilibria else None),
        },
        clipped_total=clipped_total,
        population_states=pop_states_arr,
        population_payoffs=pop_payoffs_arr,
    )
