"""Trajectory audits and randomized property suites for the gain theory.

Monotonicity audits are rate-based: an increase between consecutive records
counts as a violation when (s[i+1] - s[i]) / dt exceeds the budget, where
the budget absorbs the first-order local truncation error of the fixed-step
scheme.  Convergence audits compare the final state against an annotated
target in sup-norm and require a closed equilibrium gap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import MeanDynamic, RationalizableDynamic
from .games import (
    PopulationGame,
    as_state_vector,
    best_response_set,
    nash_gap,
    payoff as game_payoff,
)
from .gains import GainEvaluator, delta_passivity_residual
from .integrate import Trajectory
from .protocols import RevisionProtocol


@dataclass(frozen=True)
class MonotonicityReport:
    series: str
    violation_count: int
    max_violation: float
    transient_count: int
    verdict: str
    budget: float
    decay_checked: bool = False
    decay_fraction: float = 1.0
    toward_zero: bool | None = None

    @property
    def passed(self) -> bool:
        return self.verdict in ("monotone", "monotone_up_to_transients")


@dataclass(frozen=True)
class ConvergenceReport:
    final_nash_gap: float
    final_distance: float
    first_entry_time: float | None
    radius: float
    converged: bool


def default_budget(traj: Trajectory) -> float:
    """10 * dt * (sup-norm bound of the payoff Jacobian along the run)."""
    sup = traj.metadata.get("sup_jacobian_norm")
    if sup is None:
        raise ValueError("trajectory carries no Jacobian bound; pass a budget")
    return 10.0 * traj.metadata["dt"] * float(sup)


def audit_monotonicity(traj: Trajectory, series: str,
                       budget: float | None = None) -> MonotonicityReport:
    """Classify a recorded series as monotone (no increase at all),
    monotone up to discretization transients (all increase rates within the
    budget), or non-monotone (some increase rate exceeds the budget).

    For the series named "G" the report additionally checks the discrete
    decay bound dG/dt <= H + budget record by record and the finite-horizon
    toward-zero proxy final G < max(1e-6, 1e-3 * initial G).
    """
    s = traj.series_named(series)
    if budget is None:
        budget = default_budget(traj)
    t = traj.times
    if s.size < 2:
        return MonotonicityReport(series, 0, 0.0, 0, "monotone", budget)
    dt = np.diff(t)
    rates = np.diff(s) / dt
    increases = rates[rates > 0]
    max_violation = float(increases.max()) if increases.size else 0.0
    violation_count = int((rates > budget).sum())
    transient_count = int(((rates > 0) & (rates <= budget)).sum())
    if violation_count > 0:
        verdict = "non_monotone"
    elif transient_count > 0:
        verdict = "monotone_up_to_transients"
    else:
        verdict = "monotone"
    decay_checked = False
    decay_fraction = 1.0
    toward_zero = None
    if series == "G" and "H" in traj.series:
        H = traj.series["H"]
        ok = rates <= H[:-1] + budget
        decay_checked = True
        decay_fraction = float(ok.mean())
        toward_zero = bool(s[-1] < max(1e-6, 1e-3 * s[0]))
    return MonotonicityReport(series, violation_count, max_violation,
                              transient_count, verdict, float(budget),
                              decay_checked, decay_fraction, toward_zero)


def audit_convergence(traj: Trajectory, target, radius: float) -> ConvergenceReport:
    """Converged iff the final state is within ``radius`` of ``target`` in
    sup-norm and the final equilibrium gap is below ``radius``."""
    target = np.asarray(target, dtype=float)
    dist = np.abs(traj.states - target[None, :]).max(axis=1)
    gaps = traj.series_named("nash_gap")
    inside = np.flatnonzero(dist < radius)
    first_entry = float(traj.times[inside[0]]) if inside.size else None
    converged = bool(dist[-1] < radius and gaps[-1] < radius)
    return ConvergenceReport(
        final_nash_gap=float(gaps[-1]),
        final_distance=float(dist[-1]),
        first_entry_time=first_entry,
        radius=float(radius),
        converged=converged,
    )


# ---------------------------------------------------------------------------
# randomized property suite


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    trials: int
    failures: int
    counterexamples: tuple = ()


@dataclass(frozen=True)
class PropertySuiteReport:
    protocol: str
    results: tuple[PropertyResult, ...]

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.results)


_SMOOTH_GAP = 1e-6
_FD_EPS = 1e-5
_REL_TOL = 1e-4
_EXACT_TOL = 1e-9
_GAP_MARGIN = 1e-2
_MAX_DUMPS = 3


def _is_smooth(protocol: RevisionProtocol, pi: np.ndarray, margin: float = 1e-4) -> bool:
    """No payoff tie and no gross gain near a kink of the switching rate."""
    diffs = np.abs(pi[None, :] - pi[:, None])
    off = diffs[~np.eye(pi.size, dtype=bool)]
    if np.any(off < margin):
        return False
    kinks = np.asarray(protocol.cost.kink_points())
    for a in range(pi.size):
        for subset, _prob in protocol.availability.subsets_for(a):
            if not subset:
                continue
            gross = max(pi[b] for b in subset) - pi[a]
            if np.any(np.abs(gross - kinks) < margin):
                return False
    return True


def run_property_suite(protocol: RevisionProtocol, seed: int = 0,
                       trial_count: int = 200) -> PropertySuiteReport:
    """Randomized checks of the per-action and aggregate gain identities.

    Draws ``trial_count`` payoff vectors uniform on [-5, 5]^A and random
    interior states; equality checks are screened to smooth points (no
    payoff tie, no kink of the switching rate nearby), inequality checks
    run everywhere.
    """
    rng = np.random.default_rng(seed)
    A = protocol.action_count
    ev = GainEvaluator(protocol)
    dyn = RationalizableDynamic(protocol, allow_invalid=True)
    failures: dict[str, list] = {k: [] for k in
                                 ("g0", "g1", "g2", "h", "gh", "GH-i", "GH-ii", "gross")}
    counts = {k: 0 for k in failures}

    for _ in range(trial_count):
        pi = rng.uniform(-5.0, 5.0, size=A)
        x = rng.dirichlet(np.ones(A))
        g = ev.gain_vector(pi)
        h = ev.h_vector(pi, g)
        gamma = ev.gross_vector(pi)
        best = best_response_set(pi, tie_tol=0.0)
        smooth = _is_smooth(protocol, pi)
        # the zero-iff-argmax direction is only decidable when every non-best
        # action trails the maximum by a resolvable margin; near a tie both
        # the gains and their second-order drops vanish continuously
        gaps_to_best = pi.max() - pi
        resolved = bool(np.all((gaps_to_best <= _EXACT_TOL)
                               | (gaps_to_best >= _GAP_MARGIN)))

        # g0: non-negative, zero exactly on the argmax
        counts["g0"] += 1
        bad = bool(np.any(g < -_EXACT_TOL))
        if resolved:
            bad = bad or any(
                (abs(g[a]) <= _EXACT_TOL) != (a in best) for a in range(A))
        if bad:
            failures["g0"].append({"pi": pi.tolist(), "g": g.tolist()})

        # g1: better actions have weakly smaller gains, strictly for real gaps
        counts["g1"] += 1
        ok = True
        for a in range(A):
            for b in range(A):
                if pi[a] <= pi[b] and g[b] > g[a] + _EXACT_TOL:
                    ok = False
                if pi[b] - pi[a] >= _SMOOTH_GAP and not g[b] < g[a]:
                    ok = False
        if not ok:
            failures["g1"].append({"pi": pi.tolist(), "g": g.tolist()})

        # h: non-positive, zero exactly on the argmax
        counts["h"] += 1
        bad = bool(np.any(h > _EXACT_TOL))
        if resolved:
            bad = bad or any(
                (abs(h[a]) <= _EXACT_TOL) != (a in best) for a in range(A))
        if bad:
            failures["h"].append({"pi": pi.tolist(), "h": h.tolist()})

        # gross dominance
        counts["gross"] += 1
        if np.any(gamma < g - _EXACT_TOL):
            failures["gross"].append({"pi": pi.tolist(), "g": g.tolist(),
                                      "gamma": gamma.tolist()})
        if protocol.cost.kind == "zero_cost" and np.any(np.abs(gamma - g) > _EXACT_TOL):
            failures["gross"].append({"pi": pi.tolist(), "g": g.tolist(),
                                      "gamma": gamma.tolist(), "why": "zero-cost equality"})

        if smooth:
            # g2: directional derivative of g matches z . dpi
            counts["g2"] += 1
            dpi = rng.normal(size=A)
            gp = ev.gain_vector(pi + _FD_EPS * dpi)
            gm = ev.gain_vector(pi - _FD_EPS * dpi)
            fd = (gp - gm) / (2 * _FD_EPS)
            ok = True
            for a in range(A):
                z = dyn.per_action_transition(a, pi)
                want = float(z @ dpi)
                scale = max(1.0, abs(want))
                if abs(fd[a] - want) > _REL_TOL * scale:
                    ok = False
            if not ok:
                failures["g2"].append({"pi": pi.tolist(), "dpi": dpi.tolist()})

            # gh: h_a = z_a . g
            counts["gh"] += 1
            ok = all(abs(h[a] - float(dyn.per_action_transition(a, pi) @ g)) <= 1e-9
                     for a in range(A))
            if not ok:
                failures["gh"].append({"pi": pi.tolist(), "h": h.tolist()})

            # GH-i: H = g . xdot, cross-checked by finite differences in x
            counts["GH-i"] += 1
            xdot = dyn.velocity(x, pi)
            H = float(x @ h)
            direct = float(g @ xdot)
            fd_x = (float((x + _FD_EPS * xdot) @ g) - float((x - _FD_EPS * xdot) @ g)) \
                / (2 * _FD_EPS)
            if abs(H - direct) > 1e-9 or abs(fd_x - H) > 1e-5 * max(1.0, abs(H)):
                failures["GH-i"].append({"pi": pi.tolist(), "x": x.tolist(),
                                         "H": H, "direct": direct, "fd": fd_x})

            # GH-ii: dG/dpi . dpi = xdot . dpi
            counts["GH-ii"] += 1
            Gp = float(x @ ev.gain_vector(pi + _FD_EPS * dpi))
            Gm = float(x @ ev.gain_vector(pi - _FD_EPS * dpi))
            fd_pi = (Gp - Gm) / (2 * _FD_EPS)
            want = float(xdot @ dpi)
            if abs(fd_pi - want) > _REL_TOL * max(1.0, abs(want)):
                failures["GH-ii"].append({"pi": pi.tolist(), "x": x.tolist(),
                                          "fd": fd_pi, "want": want})

    results = tuple(
        PropertyResult(name=k, passed=not v, trials=counts[k], failures=len(v),
                       counterexamples=tuple(v[:_MAX_DUMPS]))
        for k, v in failures.items())
    return PropertySuiteReport(protocol=protocol.name or "protocol", results=results)


# ---------------------------------------------------------------------------
# stationarity / Nash equivalence


@dataclass(frozen=True)
class StationarityReport:
    checked: int
    mismatches: tuple


def check_stationarity_nash(game: PopulationGame, dyn: MeanDynamic,
                            states, tol: float = 1e-9) -> StationarityReport:
    """Verify stationarity of the closed loop coincides with equilibrium.

    For the imitative replicator the equivalence is expected to fail at
    non-equilibrium rest points (vertices); mismatches are reported, not
    raised.
    """
    mismatches = []
    n = 0
    for x in states:
        n += 1
        x = as_state_vector(x, game.action_count)
        pi = game_payoff(game, x)
        v = dyn.velocity(x, pi)
        stationary = bool(np.abs(v).max() < tol)
        gap = nash_gap(game, x)
        if stationary != (gap < tol):
            mismatches.append({"state": x.tolist(), "field_norm": float(np.abs(v).max()),
                               "nash_gap": float(gap)})
    return StationarityReport(checked=n, mismatches=tuple(mismatches))


__all__ = [
    "MonotonicityReport", "ConvergenceReport", "PropertyResult",
    "PropertySuiteReport", "StationarityReport",
    "audit_monotonicity", "audit_convergence", "default_budget",
    "run_property_suite", "check_stationarity_nash", "delta_passivity_residual",
]
