"""Expected gain functionals attached to revision protocols.

For an agent playing a who faces payoffs pi, the first-order gain is the
expected net improvement of the next revision,

    g_a = sum over A' of P(A') * E[(pi_*(A') - pi_a - q)_+],

the second-order gain h_a anticipates one more revision round by comparing
the smallest first-order gain available in the drawn set against the
agent's own, and the gross gain gamma_a drops the cost from the improvement
while keeping it in the switching rate.  Aggregates weight by the state:
G = x . g, H = x . h, Gamma = x . gamma.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import BirthDeathDynamic, MeanDynamic, RationalizableDynamic
from .games import (
    PopulationGame,
    as_payoff_vector,
    as_state,
    as_state_vector,
    jacobian as game_jacobian,
    payoff as game_payoff,
)
from .protocols import CostDistribution, RevisionProtocol


@dataclass(frozen=True)
class GainSnapshot:
    """Per-action and aggregate gains at one (state, payoff) pair."""

    g: np.ndarray
    h: np.ndarray
    gamma: np.ndarray
    G: float
    H: float
    Gamma: float


class GainEvaluator:
    """Evaluates gain functionals for one revision protocol."""

    def __init__(self, protocol):
        if isinstance(protocol, RationalizableDynamic):
            protocol = protocol.protocol
        if not isinstance(protocol, RevisionProtocol):
            raise TypeError(
                "per-action gains are defined for rationalizable protocols; "
                "use birth_death_gains for birth-death dynamics")
        if not protocol.availability.excludes_current:
            raise ValueError("gain functionals need per-status-quo availability")
        self.protocol = protocol
        self.action_count = protocol.action_count
        self._support = [protocol.availability.subsets_for(a)
                         for a in range(self.action_count)]
        self._singleton = protocol.availability.kind == "uniform_singleton"

    # per-action vectors ----------------------------------------------------

    def gain_vector(self, payoffs) -> np.ndarray:
        """First-order gains g."""
        pi = as_payoff_vector(payoffs, self.action_count)
        cost = self.protocol.cost
        A = self.action_count
        if self._singleton:
            D = pi[None, :] - pi[:, None]
            E = np.asarray(cost.expected_clipped_gain(D))
            np.fill_diagonal(E, 0.0)
            return E.sum(axis=1) / (A - 1)
        g = np.zeros(A)
        for a in range(A):
            for subset, prob in self._support[a]:
                if not subset:
                    continue
                gross = max(pi[b] for b in subset) - pi[a]
                g[a] += prob * float(cost.expected_clipped_gain(gross))
        return g

    def gross_vector(self, payoffs) -> np.ndarray:
        """Gross gains gamma: improvement weighted by the switching rate but
        not reduced by the cost; the lower CDF value is used at atoms."""
        pi = as_payoff_vector(payoffs, self.action_count)
        cost = self.protocol.cost
        A = self.action_count
        if self._singleton:
            D = pi[None, :] - pi[:, None]
            V = np.asarray(cost.cdf_left(D)) * D
            np.fill_diagonal(V, 0.0)
            return V.sum(axis=1) / (A - 1)
        gamma = np.zeros(A)
        for a in range(A):
            for subset, prob in self._support[a]:
                if not subset:
                    continue
                gross = max(pi[b] for b in subset) - pi[a]
                gamma[a] += prob * float(cost.cdf_left(gross)) * gross
        return gamma

    def h_vector(self, payoffs, g: np.ndarray | None = None) -> np.ndarray:
        """Second-order gains h: the revising agent trades its own first-order
        gain for the smallest one among the actions it could move to."""
        pi = as_payoff_vector(payoffs, self.action_count)
        if g is None:
            g = self.gain_vector(pi)
        cost = self.protocol.cost
        A = self.action_count
        if self._singleton:
            D = pi[None, :] - pi[:, None]
            R = np.asarray(cost.cdf(D))
            np.fill_diagonal(R, 0.0)
            return (R @ g - R.sum(axis=1) * g) / (A - 1)
        h = np.zeros(A)
        for a in range(A):
            for subset, prob in self._support[a]:
                if not subset:
                    continue
                gross = max(pi[b] for b in subset) - pi[a]
                rate = prob * float(cost.cdf(gross))
                if rate == 0.0:
                    continue
                h[a] += rate * (min(g[b] for b in subset) - g[a])
        return h

    # aggregates --------------------------------------------------------------

    def snapshot(self, state, payoffs) -> GainSnapshot:
        x = as_state_vector(state, self.action_count)
        pi = as_payoff_vector(payoffs, self.action_count)
        g = self.gain_vector(pi)
        h = self.h_vector(pi, g)
        gamma = self.gross_vector(pi)
        return GainSnapshot(g, h, gamma,
                            float(x @ g), float(x @ h), float(x @ gamma))

    def aggregate_gain(self, state, payoffs) -> float:
        x = as_state_vector(state, self.action_count)
        return float(x @ self.gain_vector(payoffs))

    def aggregate_second_order(self, state, payoffs) -> float:
        x = as_state_vector(state, self.action_count)
        return float(x @ self.h_vector(payoffs))

    def aggregate_gross(self, state, payoffs) -> float:
        x = as_state_vector(state, self.action_count)
        return float(x @ self.gross_vector(payoffs))


# convenience wrappers --------------------------------------------------------


def first_order_gain(protocol: RevisionProtocol, payoffs) -> np.ndarray:
    return GainEvaluator(protocol).gain_vector(payoffs)


def second_order_gain(protocol: RevisionProtocol, payoffs) -> np.ndarray:
    return GainEvaluator(protocol).h_vector(payoffs)


def gross_gain(protocol: RevisionProtocol, payoffs) -> np.ndarray:
    return GainEvaluator(protocol).gross_vector(payoffs)


def aggregate_gains(protocol: RevisionProtocol, state, payoffs) -> GainSnapshot:
    return GainEvaluator(protocol).snapshot(state, payoffs)


# birth-death -----------------------------------------------------------------


def birth_death_gains(dynamic: BirthDeathDynamic, state, payoffs) -> GainSnapshot:
    """Gains for birth-death revision: every revising agent stands at the
    population average, so one common value fills the per-action fields."""
    A = dynamic.action_count
    x = as_state_vector(state, A)
    pi = as_payoff_vector(payoffs, A)
    mean = float(x @ pi)
    cost = dynamic.cost
    g_common = 0.0
    gamma_common = 0.0
    for subset, prob in dynamic._support:
        if not subset:
            continue
        gross = max(pi[b] for b in subset) - mean
        g_common += prob * float(cost.expected_clipped_gain(gross))
        gamma_common += prob * float(cost.cdf_left(gross)) * gross
    # every reviser stands at the population average, so its switch raises
    # the average itself; the second-order gain is the total switch volume
    # times the (negative of the) rate-weighted improvement of the benchmark
    rates = np.zeros(A)
    for subset, prob in dynamic._support:
        if not subset:
            continue
        gross = max(pi[b] for b in subset) - mean
        r = prob * float(cost.cdf(gross))
        if r == 0.0:
            continue
        sub = np.asarray(subset, int)
        best = sub[pi[sub] >= pi[sub].max() - 1e-12]
        rates[best] += r / best.size
    total = rates.sum()
    h_common = -total * float(rates @ (pi - mean))
    g = np.full(A, g_common)
    gamma = np.full(A, gamma_common)
    h = np.full(A, h_common)
    return GainSnapshot(g, h, gamma, g_common, h_common, gamma_common)


# replicator -------------------------------------------------------------------


def replicator_aggregate_gain(state, payoffs,
                              cost: CostDistribution | None = None) -> float:
    """An aggregate-gain analogue for the replicator dynamic: pairs of agents
    meet at random, one imitates the better-performing other when the payoff
    edge beats the cost draw.  G = sum_ab x_a x_b E[(pi_b - pi_a - q)_+]."""
    if cost is None:
        cost = CostDistribution.linear(1.0, cap=None)
    x = as_state_vector(state)
    pi = as_payoff_vector(payoffs, x.size)
    D = pi[None, :] - pi[:, None]
    E = np.asarray(cost.expected_clipped_gain(D))
    return float(x @ E @ x)


def replicator_aggregate_gross(state, payoffs,
                               cost: CostDistribution | None = None) -> float:
    """Gross variant of the replicator aggregate gain."""
    if cost is None:
        cost = CostDistribution.linear(1.0, cap=None)
    x = as_state_vector(state)
    pi = as_payoff_vector(payoffs, x.size)
    D = pi[None, :] - pi[:, None]
    V = np.asarray(cost.cdf_left(D)) * D
    return float(x @ V @ x)


def replicator_lyapunov(equilibrium, state) -> float:
    """Relative entropy W(x) = sum_a x*_a ln(x*_a / x_a), +inf when x misses
    part of the support of x*."""
    xs = np.asarray(equilibrium, dtype=float)
    x = np.asarray(state, dtype=float)
    out = 0.0
    for a in range(xs.size):
        if xs[a] <= 0:
            continue
        if x[a] <= 0:
            return float("inf")
        out += xs[a] * np.log(xs[a] / x[a])
    return float(out)


# multi-population ---------------------------------------------------------------


def multi_aggregate_gain(evaluators, states, payoff_vectors) -> float:
    """Sum of per-population aggregate gains G^P = sum_p x^p . g^p."""
    total = 0.0
    for ev, x, pi in zip(evaluators, states, payoff_vectors):
        total += ev.aggregate_gain(x, pi)
    return total


# smoothness diagnostics ----------------------------------------------------------

_FD_STEP = 1e-6
_KINK_SCREEN = 1e-3


@dataclass(frozen=True)
class PassivityResidual:
    residual: float
    at_kink: bool


def delta_passivity_residual(game: PopulationGame, dynamic: MeanDynamic,
                             evaluator: GainEvaluator, state) -> PassivityResidual:
    """Finite-difference check of dG/dt = H + xdot . pidot at a state.

    G is a function of (x, pi); its time derivative along the dynamic should
    equal H plus the payoff-velocity coupling term.  Central differences with
    one-sided disagreement screening flag kink proximity, where the identity
    is only one-sided.
    """
    A = game.action_count
    x = as_state(state, game.mass)
    pi = game_payoff(game, x)
    x = np.asarray(x)
    xdot = dynamic.velocity(x, pi)
    pidot = game_jacobian(game, x) @ xdot

    def G_of(xv, piv) -> float:
        return float(np.asarray(xv) @ evaluator.gain_vector(piv))

    h = _FD_STEP
    at_kink = False
    dG_dx_dot = 0.0
    # directional derivative along xdot at fixed pi
    gp = G_of(x + h * xdot, pi)
    gm = G_of(x - h * xdot, pi)
    central_x = (gp - gm) / (2 * h)
    fwd_x = (gp - G_of(x, pi)) / h
    bwd_x = (G_of(x, pi) - gm) / h
    if abs(fwd_x - bwd_x) > _KINK_SCREEN:
        at_kink = True
    dG_dx_dot = central_x
    # directional derivative along pidot at fixed x
    gp = G_of(x, pi + h * pidot)
    gm = G_of(x, pi - h * pidot)
    central_p = (gp - gm) / (2 * h)
    fwd_p = (gp - G_of(x, pi)) / h
    bwd_p = (G_of(x, pi) - gm) / h
    if abs(fwd_p - bwd_p) > _KINK_SCREEN:
        at_kink = True
    dG_dpi_dot = central_p

    H = evaluator.aggregate_second_order(x, pi)
    residual = dG_dx_dot + dG_dpi_dot - (H + float(xdot @ pidot))
    return PassivityResidual(float(residual), at_kink)
