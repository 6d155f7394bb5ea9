"""Population games: payoffs, Jacobians, equilibrium gaps, static stability.

A population game assigns to every social state x (a point on the probability
simplex, scaled by the population mass) a payoff vector pi = F(x).  Static
stability of a game is negative semidefiniteness of the Jacobian DF on the
tangent space of the simplex: deviations lower the relative payoff of the
actions deviated to.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.stats import qmc

SIMPLEX_ATOL = 1e-12
DEFAULT_TIE_TOL = 1e-9
STABILITY_TOL = 1e-9
FD_STEP = 1e-6


class GameError(ValueError):
    """Malformed game spec or dimension mismatch."""


@dataclass(frozen=True)
class SimplexState:
    """A distribution of agents over actions with total mass ``mass``.

    Entries are clipped at zero (rejecting anything below -1e-12) and
    renormalized so they sum to ``mass`` exactly.
    """

    masses: np.ndarray
    mass: float = 1.0

    def __post_init__(self) -> None:
        m = np.asarray(self.masses, dtype=float)
        if m.ndim != 1 or m.size == 0:
            raise GameError("state must be a non-empty 1-d array")
        if not np.all(np.isfinite(m)):
            raise GameError("state entries must be finite")
        if np.any(m < -SIMPLEX_ATOL):
            raise GameError(f"negative state entry below tolerance: {m.min()}")
        if self.mass <= 0:
            raise GameError("population mass must be positive")
        m = np.maximum(m, 0.0)
        total = m.sum()
        if total <= 0:
            raise GameError("state has zero total mass")
        m = m * (self.mass / total)
        m.setflags(write=False)
        object.__setattr__(self, "masses", m)

    @property
    def action_count(self) -> int:
        return self.masses.size

    def __array__(self, dtype=None) -> np.ndarray:
        return np.asarray(self.masses, dtype=dtype)


def as_state(x, mass: float = 1.0) -> SimplexState:
    return x if isinstance(x, SimplexState) else SimplexState(np.asarray(x, float), mass)


def as_state_vector(x, action_count: int | None = None) -> np.ndarray:
    """A state as a plain array, validated but not renormalized.

    Used in velocity and gain evaluation, where intermediate integrator
    stages may carry states whose mass differs slightly from the nominal one.
    """
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise GameError("state must be 1-d")
    if not np.all(np.isfinite(v)):
        raise GameError("state entries must be finite")
    if action_count is not None and v.size != action_count:
        raise GameError(f"state length {v.size} != action count {action_count}")
    return v


def as_payoff_vector(pi, action_count: int | None = None) -> np.ndarray:
    """Validate a payoff vector: finite entries, optionally a fixed length."""
    p = np.asarray(pi, dtype=float)
    if p.ndim != 1:
        raise GameError("payoff vector must be 1-d")
    if not np.all(np.isfinite(p)):
        raise GameError("payoff entries must be finite")
    if action_count is not None and p.size != action_count:
        raise GameError(f"payoff length {p.size} != action count {action_count}")
    return p


@dataclass(frozen=True)
class PopulationGame:
    action_count: int
    payoff_map: Callable[[np.ndarray], np.ndarray]
    jacobian_map: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = ""
    equilibria: tuple = ()          # annotated equilibria, as mass-1 tuples
    linear: bool = False            # constant Jacobian (matrix game)
    mass: float = 1.0


@dataclass(frozen=True)
class PopulationSpec:
    action_count: int
    mass: float


@dataclass(frozen=True)
class MultiPopulationGame:
    """Several populations with a joint payoff map on the state profile."""

    populations: tuple[PopulationSpec, ...]
    payoff_map: Callable[[list[np.ndarray]], list[np.ndarray]]
    name: str = ""
    aggregate_equilibria: tuple = ()   # equilibria of the aggregate, if known

    def __post_init__(self) -> None:
        total = sum(p.mass for p in self.populations)
        if abs(total - 1.0) > 1e-9:
            raise GameError(f"population masses must sum to 1, got {total}")

    def payoffs(self, states: Sequence[SimplexState]) -> list[np.ndarray]:
        xs = []
        for spec, s in zip(self.populations, states):
            s = as_state(s, spec.mass)
            if s.action_count != spec.action_count:
                raise GameError("state/population dimension mismatch")
            xs.append(np.asarray(s))
        return [np.asarray(p, float) for p in self.payoff_map(xs)]


def payoff(game: PopulationGame, x: SimplexState | Sequence[float]) -> np.ndarray:
    x = as_state(x, game.mass)
    if x.action_count != game.action_count:
        raise GameError("state/game dimension mismatch")
    return as_payoff_vector(game.payoff_map(np.asarray(x)), game.action_count)


def jacobian(game: PopulationGame, x: SimplexState | Sequence[float]) -> np.ndarray:
    """DF(x): analytic if available, else clipped central finite differences."""
    x = as_state(x, game.mass)
    if x.action_count != game.action_count:
        raise GameError("state/game dimension mismatch")
    xv = np.asarray(x)
    if game.jacobian_map is not None:
        return np.asarray(game.jacobian_map(xv), dtype=float)
    A = game.action_count
    J = np.empty((A, A))
    for a in range(A):
        h = min(FD_STEP, xv[a]) if xv[a] < FD_STEP else FD_STEP
        e = np.zeros(A)
        e[a] = 1.0
        if h > 1e-14:
            J[:, a] = (game.payoff_map(xv + h * e) - game.payoff_map(xv - h * e)) / (2 * h)
        else:  # at the boundary fall back to a one-sided difference
            J[:, a] = (game.payoff_map(xv + FD_STEP * e) - game.payoff_map(xv)) / FD_STEP
    return J


def best_response_set(pi, tie_tol: float = DEFAULT_TIE_TOL) -> set[int]:
    if tie_tol < 0:
        raise GameError("tie_tol must be non-negative")
    p = as_payoff_vector(pi)
    top = p.max()
    return set(np.flatnonzero(p >= top - tie_tol).tolist())


def nash_gap(game: PopulationGame, x) -> float:
    """max_a F_a(x) - x.F(x) / mass; zero exactly at Nash equilibria."""
    x = as_state(x, game.mass)
    pi = payoff(game, x)
    xv = np.asarray(x)
    return float(pi.max() - xv @ pi / game.mass)


def tangent_basis(action_count: int) -> np.ndarray:
    """Orthonormal basis of {z : sum z = 0} as columns of an A x (A-1) matrix."""
    A = action_count
    B = np.zeros((A, A - 1))
    for k in range(1, A):
        B[:k, k - 1] = 1.0 / np.sqrt(k * (k + 1))
        B[k, k - 1] = -k / np.sqrt(k * (k + 1))
    return B


def static_stability_margin(game: PopulationGame, x) -> float:
    """Max eigenvalue of the symmetrized Jacobian restricted to the tangent space.

    Margin <= 0 means static stability at x; strictly negative means strict.
    """
    J = jacobian(game, x)
    B = tangent_basis(game.action_count)
    S = B.T @ ((J + J.T) / 2.0) @ B
    return float(np.linalg.eigvalsh(S).max())


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    worst_margin: float
    worst_state: SimplexState
    sample_count: int
    constant_jacobian: bool
    margins: np.ndarray = field(repr=False, default=None)


def _simplex_samples(action_count: int, sample_count: int, seed: int,
                     center: np.ndarray | None = None,
                     radius: float | None = None) -> np.ndarray:
    """Deterministic quasi-random simplex states (Halton + exponential map)."""
    halton = qmc.Halton(d=action_count, scramble=True, seed=seed)
    u = halton.random(sample_count)
    u = np.clip(u, 1e-12, 1 - 1e-12)
    pts = -np.log(u)
    pts /= pts.sum(axis=1, keepdims=True)
    if center is not None and radius is not None:
        c = np.asarray(center, float)
        pts = c + np.clip(radius, 0.0, 1.0) * (pts - c)
        pts = np.maximum(pts, 0.0)
        pts /= pts.sum(axis=1, keepdims=True)
    return pts


def is_stable_game(game: PopulationGame, sample_count: int = 64, seed: int = 0,
                   center=None, radius: float | None = None) -> StabilityReport:
    """Certify the stable-game property by sampling margins.

    Evaluates the stability margin at quasi-random states plus all vertices
    and the barycenter; for a linear game the Jacobian is constant and one
    evaluation would suffice (the report records this).  An optional
    center/radius restricts sampling to a ball around a state, for local
    checks near an isolated equilibrium.
    """
    if sample_count < 1:
        raise GameError("sample_count must be >= 1")
    A = game.action_count
    states = [np.full(A, 1.0 / A)]
    states += [np.eye(A)[a] for a in range(A)]
    states += list(_simplex_samples(A, sample_count, seed,
                                    center=center, radius=radius))
    margins = np.array([static_stability_margin(game, s * game.mass) for s in states])
    worst = int(np.argmax(margins))
    return StabilityReport(
        stable=bool(margins[worst] <= STABILITY_TOL),
        worst_margin=float(margins[worst]),
        worst_state=SimplexState(states[worst] * game.mass, game.mass),
        sample_count=len(states),
        constant_jacobian=game.linear,
        margins=margins,
    )


# ---------------------------------------------------------------------------
# constructors


def matrix_game(matrix, name: str = "matrix", equilibria: tuple = (),
                mass: float = 1.0) -> PopulationGame:
    Pi = np.asarray(matrix, dtype=float)
    if Pi.ndim != 2 or Pi.shape[0] != Pi.shape[1]:
        raise GameError("payoff matrix must be square")
    Pi = Pi.copy()
    Pi.setflags(write=False)
    return PopulationGame(
        action_count=Pi.shape[0],
        payoff_map=lambda x, _P=Pi: _P @ x,
        jacobian_map=lambda x, _P=Pi: _P,
        name=name,
        equilibria=equilibria,
        linear=True,
        mass=mass,
    )


def good_rps(win: float = 1.0, loss: float = 0.9) -> PopulationGame:
    """Cyclic rock-paper-scissors matching: win payoff, 0 draw, -loss on a loss.

    With win > loss the game is strictly stable ("good" RPS); win < loss
    flips the margin sign and the interior equilibrium repels.
    """
    w, l = float(win), float(loss)
    Pi = np.array([[0.0, -l, w], [w, 0.0, -l], [-l, w, 0.0]])
    name = "good_rps" if w > l else ("standard_rps" if w == l else "bad_rps")
    return matrix_game(Pi, name=name, equilibria=((1 / 3, 1 / 3, 1 / 3),))


FRIEDMAN_MATRIX = np.array([[-5.0, -26.0, 31.0], [34.0, -5.0, -29.0], [-29.0, 31.0, -2.0]])


def friedman_game() -> PopulationGame:
    """A strictly stable 3-action linear game with interior equilibrium (1/3,1/3,1/3)."""
    return matrix_game(FRIEDMAN_MATRIX, name="friedman",
                       equilibria=((1 / 3, 1 / 3, 1 / 3),))


def anonymous_game(base_matrix, offsets: Sequence, masses: Sequence[float],
                   name: str = "anonymous",
                   aggregate_equilibria: tuple = ()) -> MultiPopulationGame:
    """Populations share one base game of the aggregate state, plus per-population
    payoff offsets: F^p(x) = F0(sum_q x^q) + theta^p."""
    Pi = np.asarray(base_matrix, dtype=float)
    A = Pi.shape[0]
    thetas = [np.asarray(t, float) for t in offsets]
    if any(t.size != A for t in thetas):
        raise GameError("offset length must equal the action count")
    if len(thetas) != len(masses):
        raise GameError("one offset per population required")

    def pay(xs: list[np.ndarray]) -> list[np.ndarray]:
        agg = np.sum(xs, axis=0)
        base = Pi @ agg
        return [base + t for t in thetas]

    return MultiPopulationGame(
        populations=tuple(PopulationSpec(A, float(m)) for m in masses),
        payoff_map=pay,
        name=name,
        aggregate_equilibria=tuple(tuple(e) for e in aggregate_equilibria),
    )


def saddle_game(concave_quad, cross, convex_quad, masses: Sequence[float],
                name: str = "saddle") -> MultiPopulationGame:
    """Two populations on a quadratic saddle phi(xc, xv).

    phi = 1/2 xc.Qc xc + xc.R xv + 1/2 xv.Qv xv with Qc negative semidefinite
    and Qv positive semidefinite; the first population maximizes phi
    (F^c = d phi/d xc) and the second minimizes it (F^v = -d phi/d xv).
    """
    Qc = np.asarray(concave_quad, float)
    R = np.asarray(cross, float)
    Qv = np.asarray(convex_quad, float)
    if len(masses) != 2:
        raise GameError("saddle games have exactly two populations")

    def pay(xs: list[np.ndarray]) -> list[np.ndarray]:
        xc, xv = xs
        return [Qc @ xc + R @ xv, -(R.T @ xc + Qv @ xv)]

    return MultiPopulationGame(
        populations=(PopulationSpec(Qc.shape[0], float(masses[0])),
                     PopulationSpec(Qv.shape[0], float(masses[1]))),
        payoff_map=pay,
        name=name,
    )


def make_game(spec) -> PopulationGame | MultiPopulationGame:
    """Build a game from a declarative spec (string shorthand or mapping)."""
    if isinstance(spec, str):
        parts = spec.split(":")
        head, args = parts[0], parts[1:]
        if head == "good_rps":
            return good_rps(*(float(a) for a in args)) if args else good_rps()
        if head == "bad_rps":
            return good_rps(1.0, 1.1)
        if head == "standard_rps":
            return good_rps(1.0, 1.0)
        if head == "friedman":
            return friedman_game()
        if head == "zero":
            n = int(args[0]) if args else 3
            return matrix_game(np.zeros((n, n)), name="zero")
        raise GameError(f"unknown game spec: {spec!r}")
    if not isinstance(spec, dict):
        raise GameError(f"game spec must be a string or mapping, got {type(spec)}")
    kind = spec.get("type")
    params = {k: v for k, v in spec.items() if k != "type"}
    if kind == "matrix":
        return matrix_game(params.pop("matrix"),
                           equilibria=tuple(tuple(e) for e in params.pop("equilibria", ())),
                           name=params.pop("name", "matrix"), **_none(params))
    if kind == "good_rps":
        return good_rps(params.pop("win", 1.0), params.pop("loss", 0.9))
    if kind == "friedman":
        return friedman_game()
    if kind == "anonymous":
        return anonymous_game(
            params.pop("base_matrix"), params.pop("offsets"), params.pop("masses"),
            name=params.pop("name", "anonymous"),
            aggregate_equilibria=tuple(tuple(e) for e in params.pop("aggregate_equilibria", ())))
    if kind == "saddle":
        return saddle_game(params.pop("concave_quad"), params.pop("cross"),
                           params.pop("convex_quad"), params.pop("masses"))
    raise GameError(f"unknown game type: {kind!r}")


def _none(params: dict) -> dict:
    if params:
        raise GameError(f"unexpected game parameters: {sorted(params)}")
    return params
