"""Mean dynamics induced by revision protocols, plus classical references.

The core object maps a population state and its payoff vector to a velocity
on the simplex tangent space.  Rationalizable dynamics aggregate per-agent
transition measures: an agent playing a draws an available set A', pays a
random switching cost, and moves to the best action of A' exactly when the
top payoff there beats the agent's own payoff by more than the cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .games import (
    DEFAULT_TIE_TOL,
    PopulationGame,
    as_payoff_vector,
    as_state_vector,
    payoff as game_payoff,
)
from .protocols import (
    AvailabilityDistribution,
    CostDistribution,
    RevisionProtocol,
    make_protocol,
)


class DynamicsError(ValueError):
    pass


@dataclass(frozen=True)
class SelectionRule:
    """How a revising agent picks among payoff-maximal available actions.

    ``mixing`` is one of ``uniform_over_best``, ``lowest_index`` or
    ``given_weights`` (with per-action ``weights`` renormalized over the
    tied set).  Ties are actions within ``tie_tol`` of the maximum.
    """

    tie_tol: float = DEFAULT_TIE_TOL
    mixing: str = "uniform_over_best"
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.mixing not in ("uniform_over_best", "lowest_index", "given_weights"):
            raise DynamicsError(f"unknown mixing rule: {self.mixing!r}")
        if self.mixing == "given_weights":
            if self.weights is None or any(w < 0 for w in self.weights):
                raise DynamicsError("given_weights needs non-negative weights")

    def select(self, subset: Sequence[int], payoffs: np.ndarray) -> np.ndarray:
        """Distribution over the action set placing mass on the best of ``subset``."""
        sub = np.asarray(subset, dtype=int)
        vals = payoffs[sub]
        best = vals.max()
        tied = sub[vals >= best - self.tie_tol]
        out = np.zeros(payoffs.shape[0])
        if self.mixing == "lowest_index":
            out[tied.min()] = 1.0
        elif self.mixing == "given_weights":
            w = np.asarray([self.weights[b] for b in tied], float)
            if w.sum() <= 0:
                out[tied] = 1.0 / tied.size
            else:
                out[tied] = w / w.sum()
        else:
            out[tied] = 1.0 / tied.size
        return out


class MeanDynamic:
    """Base type: a velocity field on the simplex."""

    kind: str = ""
    action_count: int = 0

    def velocity(self, state, payoffs) -> np.ndarray:
        x = as_state_vector(state, self.action_count)
        pi = as_payoff_vector(payoffs, self.action_count)
        return self._velocity(x, pi)

    def _velocity(self, x: np.ndarray, pi: np.ndarray) -> np.ndarray:
        """Trusted variant: arguments are validated arrays of the right size."""
        raise NotImplementedError

    def velocity_for(self, game: PopulationGame, state) -> np.ndarray:
        return self.velocity(state, game_payoff(game, state))


class RationalizableDynamic(MeanDynamic):
    """Mean dynamic of a cost-benefit revision protocol.

    Construction requires the protocol's behavioral assumptions to hold;
    passing ``allow_invalid=True`` records the override on the instance
    instead of raising.
    """

    kind = "rationalizable"

    def __init__(self, protocol: RevisionProtocol,
                 selection: SelectionRule | None = None,
                 allow_invalid: bool = False):
        self.protocol = protocol
        self.selection = selection or SelectionRule()
        self.action_count = protocol.action_count
        report = protocol.validate()
        self.assumption_report = report
        self.validation_overridden = False
        if not report.all_pass:
            if not allow_invalid:
                raise DynamicsError(
                    "protocol fails behavioral assumptions; witnesses: "
                    f"{report.witnesses[:3]}")
            self.validation_overridden = True
        avail = protocol.availability
        if not avail.excludes_current:
            raise DynamicsError(
                "rationalizable dynamics need per-status-quo availability; "
                "use BirthDeathDynamic for shared availability")
        # precompute support tables once
        self._support = [avail.subsets_for(a) for a in range(self.action_count)]
        self._uniform_singleton = avail.kind == "uniform_singleton"

    def per_action_transition(self, current: int, payoffs) -> np.ndarray:
        """Expected displacement z of one agent currently playing ``current``.

        z = sum over available sets A' of P(A') * Q(pi_*(A') - pi_current)
        * (selection(A') - e_current), using the upper CDF value at atoms.
        An indifferent agent stays put: no switch happens unless the best
        available payoff beats the current one by more than the selection
        tie tolerance, so tied best responses do not churn.
        """
        pi = as_payoff_vector(payoffs, self.action_count)
        return self._transition_raw(current, pi)

    def _transition_raw(self, current: int, pi: np.ndarray) -> np.ndarray:
        cost = self.protocol.cost
        z = np.zeros(self.action_count)
        for subset, prob in self._support[current]:
            if not subset:
                continue
            sub = np.asarray(subset, dtype=int)
            gross = pi[sub].max() - pi[current]
            if gross <= self.selection.tie_tol:
                continue
            rate = prob * cost.cdf(gross)
            if rate == 0.0:
                continue
            z += rate * self.selection.select(sub, pi)
            z[current] -= rate
        return z

    def _velocity(self, x: np.ndarray, pi: np.ndarray) -> np.ndarray:
        A = self.action_count
        default = (self.selection.mixing == "uniform_over_best"
                   and self.selection.tie_tol == DEFAULT_TIE_TOL)
        if self._uniform_singleton and default:
            # pairwise: agent at a sees one alternative b uniformly; switches
            # at rate Q([pi_b - pi_a]_+) / (A - 1)
            D = pi[None, :] - pi[:, None]
            R = np.where(D > self.selection.tie_tol,
                         np.asarray(self.protocol.cost.cdf(D)), 0.0) / (A - 1)
            np.fill_diagonal(R, 0.0)
            inflow = R.T @ x
            outflow = x * R.sum(axis=1)
            return inflow - outflow
        v = np.zeros(A)
        for a in range(A):
            if x[a] > 0:
                v += x[a] * self._transition_raw(a, pi)
        return v


class ReplicatorDynamic(MeanDynamic):
    """xdot_a = x_a (pi_a - x . pi)."""

    kind = "replicator"

    def __init__(self, action_count: int):
        self.action_count = int(action_count)

    def _velocity(self, x: np.ndarray, pi: np.ndarray) -> np.ndarray:
        return x * (pi - float(x @ pi))


class BirthDeathDynamic(MeanDynamic):
    """Revision by fresh draws: the revising agent has no status quo.

    The agent draws an available set from a single shared distribution over
    the full action set and compares the best payoff there against the
    population-average payoff; switching happens at rate
    Q(pi_*(A') - x . pi) and the arrival is spread over the best of A'.
    The uniform-singleton/zero-threshold member with a linear rate is the
    classic excess-payoff dynamic.
    """

    kind = "birth_death"

    def __init__(self, availability: AvailabilityDistribution,
                 cost: CostDistribution,
                 selection: SelectionRule | None = None,
                 name: str = "birth_death"):
        if availability.excludes_current:
            raise DynamicsError(
                "birth-death availability must be shared (excludes_current=False)")
        self.availability = availability
        self.cost = cost
        self.selection = selection or SelectionRule()
        self.action_count = availability.action_count
        self.name = name
        self._support = availability.subsets_for(None)
        self._singleton = availability.kind == "uniform_singleton"

    def _velocity(self, x: np.ndarray, pi: np.ndarray) -> np.ndarray:
        mean = float(x @ pi)
        excess = pi - mean
        default = (self.selection.mixing == "uniform_over_best"
                   and self.selection.tie_tol == DEFAULT_TIE_TOL)
        if self._singleton and default:
            rates = np.asarray(self.cost.cdf(excess)) / self.action_count
            return rates - x * rates.sum()
        v = np.zeros(self.action_count)
        for subset, prob in self._support:
            if not subset:
                continue
            sub = np.asarray(subset, dtype=int)
            gross = pi[sub].max() - mean
            rate = prob * float(self.cost.cdf(gross))
            if rate == 0.0:
                continue
            v += rate * self.selection.select(sub, pi)
            v -= rate * x
        return v


def bnn_dynamic(action_count: int) -> BirthDeathDynamic:
    """Excess-payoff dynamic: uniform singleton draws over the full action
    set with a linear uncapped rate on the positive part of the excess."""
    avail = AvailabilityDistribution.uniform_singleton(
        action_count, excludes_current=False)
    return BirthDeathDynamic(avail, CostDistribution.linear(1.0, cap=None),
                             name="bnn")


def make_dynamic(spec, action_count: int | None = None,
                 selection: SelectionRule | None = None) -> MeanDynamic:
    """Build a dynamic from a declarative spec (string shorthand or mapping)."""
    if isinstance(spec, str):
        head = spec.split(":")[0]
        if head == "replicator":
            if action_count is None:
                raise DynamicsError("replicator needs an action count")
            return ReplicatorDynamic(action_count)
        if head in ("bnn", "birth_death"):
            if action_count is None:
                raise DynamicsError("birth-death needs an action count")
            return bnn_dynamic(action_count)
        return RationalizableDynamic(make_protocol(spec, action_count), selection)
    if isinstance(spec, RevisionProtocol):
        return RationalizableDynamic(spec, selection)
    if isinstance(spec, MeanDynamic):
        return spec
    if isinstance(spec, dict):
        kind = spec.get("type")
        A = spec.get("actions", action_count)
        if kind == "replicator":
            return ReplicatorDynamic(int(A))
        if kind in ("bnn", "birth_death"):
            if kind == "bnn" or ("availability" not in spec and "cost" not in spec):
                return bnn_dynamic(int(A))
            from .protocols import _cost_from_spec
            avail_spec = spec.get("availability", "uniform_singleton")
            if avail_spec == "full_set":
                avail = AvailabilityDistribution.full_set(int(A), excludes_current=False)
            else:
                avail = AvailabilityDistribution.uniform_singleton(
                    int(A), excludes_current=False)
            return BirthDeathDynamic(avail, _cost_from_spec(spec.get("cost")))
        return RationalizableDynamic(
            make_protocol(spec, action_count), selection,
            allow_invalid=spec.get("allow_invalid", False))
    raise DynamicsError(f"cannot build a dynamic from {spec!r}")
