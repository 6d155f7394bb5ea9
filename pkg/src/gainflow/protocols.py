"""Revision protocols: availability distributions and switching-cost distributions.

A revising agent first draws a set of available alternatives from a
distribution that may depend on the agent's current action (but never on the
social state), then draws a switching cost q from a cost distribution with
CDF Q.  The agent switches to the best available action exactly when the
payoff improvement exceeds the cost.  This module represents both draws,
validates the behavioral assumptions that make the induced dynamic
well-behaved, and provides the canonical protocol constructors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

PROB_ATOL = 1e-12
MAX_EXHAUSTIVE_ACTIONS = 16


class ProtocolError(ValueError):
    """Malformed protocol spec or parameters."""


class CapabilityError(ProtocolError):
    """The request exceeds what can be checked exhaustively."""


# ---------------------------------------------------------------------------
# switching-cost distributions


class CostDistribution:
    """A switching-cost CDF Q on [0, inf).

    Q is nondecreasing and right-continuous with Q(q) = 0 for q < 0.
    ``cdf_left`` is the left limit Q_-, which differs from Q only at atoms.
    ``linear`` allows an uncapped slope (cap=None); the induced switching
    rate then exceeds 1 for large gains, which is the conventional
    pairwise-comparison form rather than a literal probability.
    """

    def __init__(self, kind: str, **params):
        self.kind = kind
        self.params = params
        if kind == "linear":
            c, cap = params["slope"], params["cap"]
            if c <= 0:
                raise ProtocolError("linear cost slope must be positive")
            if cap is not None and cap <= 0:
                raise ProtocolError("cap must be positive or None")
        elif kind == "piecewise":
            qs = np.asarray(params["qs"], float)
            vs = np.asarray(params["vs"], float)
            if qs.size == 0 or qs.size != vs.size:
                raise ProtocolError("piecewise needs matching breakpoints and values")
            if np.any(np.diff(qs) <= 0):
                raise ProtocolError("breakpoints must be strictly increasing")
            if np.any(qs < 0):
                raise ProtocolError("breakpoints must be non-negative")
            if np.any(np.diff(vs) < 0) or vs[0] < 0 or vs[-1] > 1 + PROB_ATOL:
                raise ProtocolError("values must be nondecreasing within [0, 1]")
            if params["interpolation"] not in ("step", "linear"):
                raise ProtocolError("interpolation must be 'step' or 'linear'")
            # cumulative integral of Q up to each breakpoint
            self._cum = np.zeros(qs.size)
            for i in range(1, qs.size):
                dq = qs[i] - qs[i - 1]
                if params["interpolation"] == "step":
                    self._cum[i] = self._cum[i - 1] + vs[i - 1] * dq
                else:
                    self._cum[i] = self._cum[i - 1] + (vs[i - 1] + vs[i]) / 2 * dq
        elif kind == "atom_at":
            if params["location"] < 0:
                raise ProtocolError("atom location must be non-negative")
        elif kind != "zero_cost":
            raise ProtocolError(f"unknown cost kind: {kind!r}")

    # constructors ---------------------------------------------------------

    @classmethod
    def zero_cost(cls) -> "CostDistribution":
        """Point mass at zero cost: Q(q) = 1 for q >= 0."""
        return cls("zero_cost")

    @classmethod
    def linear(cls, slope: float = 1.0, cap: float | None = 1.0) -> "CostDistribution":
        """Q(q) = min(slope * [q]_+, cap); cap=None leaves the rate uncapped."""
        return cls("linear", slope=float(slope), cap=None if cap is None else float(cap))

    @classmethod
    def piecewise(cls, points: Iterable[tuple[float, float]],
                  interpolation: str = "step") -> "CostDistribution":
        """Step or piecewise-linear CDF through (q_i, Q(q_i)) breakpoints."""
        pts = sorted(points)
        return cls("piecewise", qs=tuple(p[0] for p in pts),
                   vs=tuple(p[1] for p in pts), interpolation=interpolation)

    @classmethod
    def atom_at(cls, location: float) -> "CostDistribution":
        """Point mass at a single cost value."""
        return cls("atom_at", location=float(location))

    # evaluation -----------------------------------------------------------

    def cdf(self, q):
        """Q(q), vectorized."""
        q = np.asarray(q, dtype=float)
        if self.kind == "zero_cost":
            out = np.where(q >= 0, 1.0, 0.0)
        elif self.kind == "linear":
            c, cap = self.params["slope"], self.params["cap"]
            out = c * np.maximum(q, 0.0)
            if cap is not None:
                out = np.minimum(out, cap)
        elif self.kind == "atom_at":
            out = np.where(q >= self.params["location"], 1.0, 0.0)
        else:
            qs = np.asarray(self.params["qs"])
            vs = np.asarray(self.params["vs"])
            idx = np.searchsorted(qs, q, side="right") - 1
            if self.params["interpolation"] == "step":
                out = np.where(idx >= 0, vs[np.maximum(idx, 0)], 0.0)
                out = np.where(q < 0, 0.0, out)
            else:
                out = np.interp(q, qs, vs)
                out = np.where(q < qs[0], 0.0, out)
            out = np.where(q >= qs[-1], vs[-1], out)
        return out if out.shape else float(out)

    def cdf_left(self, q):
        """The left limit Q_-(q), vectorized."""
        q = np.asarray(q, dtype=float)
        if self.kind == "zero_cost":
            out = np.where(q > 0, 1.0, 0.0)
        elif self.kind == "linear":
            out = np.asarray(self.cdf(q))
        elif self.kind == "atom_at":
            out = np.where(q > self.params["location"], 1.0, 0.0)
        else:
            qs = np.asarray(self.params["qs"])
            vs = np.asarray(self.params["vs"])
            if self.params["interpolation"] == "step":
                idx = np.searchsorted(qs, q, side="left") - 1
                out = np.where(idx >= 0, vs[np.maximum(idx, 0)], 0.0)
                out = np.where(q <= 0, np.where(q < 0, 0.0, out * (qs[0] < 0)), out)
                out = np.where(q <= qs[0], 0.0, np.where(
                    q > qs[-1], vs[-1],
                    vs[np.maximum(np.searchsorted(qs, q, side="left") - 1, 0)]))
            else:
                out = np.asarray(self.cdf(q))
                out = np.where(q <= qs[0], 0.0, out)
        return out if out.shape else float(out)

    def expected_clipped_gain(self, gross):
        """E[(gross - q)_+] = integral of Q from 0 to max(gross, 0), vectorized.

        Nondecreasing and convex in gross; zero for gross <= 0.  The value is
        independent of tie-breaking at atoms of the cost distribution.
        """
        g = np.maximum(np.asarray(gross, dtype=float), 0.0)
        if self.kind == "zero_cost":
            out = g
        elif self.kind == "linear":
            c, cap = self.params["slope"], self.params["cap"]
            if cap is None:
                out = c * g * g / 2
            else:
                q0 = cap / c
                out = np.where(g <= q0, c * g * g / 2, c * q0 * q0 / 2 + cap * (g - q0))
        elif self.kind == "atom_at":
            out = np.maximum(g - self.params["location"], 0.0)
        else:
            qs = np.asarray(self.params["qs"])
            vs = np.asarray(self.params["vs"])
            idx = np.searchsorted(qs, g, side="right") - 1
            i = np.maximum(idx, 0)
            if self.params["interpolation"] == "step":
                out = np.where(idx >= 0, self._cum[i] + vs[i] * (g - qs[i]), 0.0)
            else:
                qv = np.asarray(self.cdf(g))
                out = np.where(idx >= 0,
                               self._cum[i] + (vs[i] + qv) / 2 * (g - qs[i]), 0.0)
            # beyond the last breakpoint Q is constant at vs[-1]
            beyond = g > qs[-1]
            out = np.where(beyond, self._cum[-1] + vs[-1] * (g - qs[-1]), out)
        return out if out.shape else float(out)

    def kink_points(self) -> tuple[float, ...]:
        """Gross-gain values where the switching rate is non-smooth."""
        if self.kind == "zero_cost":
            return (0.0,)
        if self.kind == "linear":
            cap = self.params["cap"]
            pts = [0.0]
            if cap is not None:
                pts.append(cap / self.params["slope"])
            return tuple(pts)
        if self.kind == "atom_at":
            return (0.0, self.params["location"])
        return (0.0, *self.params["qs"])

    def q1_satisfied(self) -> bool:
        """Q(q) > 0 for every q > 0."""
        if self.kind == "zero_cost":
            return True
        if self.kind == "linear":
            return True
        if self.kind == "atom_at":
            return self.params["location"] == 0.0
        qs, vs = self.params["qs"], self.params["vs"]
        if self.params["interpolation"] == "step":
            return qs[0] == 0.0 and vs[0] > 0.0
        return qs[0] == 0.0 and (vs[0] > 0.0 or (len(vs) > 1 and vs[1] > 0.0))

    def __repr__(self) -> str:
        return f"CostDistribution({self.kind}, {self.params})"


# ---------------------------------------------------------------------------
# availability distributions


class AvailabilityDistribution:
    """Distribution of the set of available alternatives.

    With ``excludes_current=True`` (the default) the draw is over subsets of
    the actions other than the revising agent's current action, and the
    distribution may differ by current action.  With ``excludes_current=False``
    the draw is over subsets of the full action set and is the same for
    everyone; this variant feeds the birth-death family where agents have no
    status-quo action of their own.

    The parameters never reference a social state, so state-independence
    holds by construction.
    """

    def __init__(self, kind: str, action_count: int, excludes_current: bool = True,
                 **params):
        if action_count < 2:
            raise ProtocolError("need at least two actions")
        self.kind = kind
        self.action_count = int(action_count)
        self.excludes_current = excludes_current
        self.params = params
        self._support_cache: dict = {}
        if kind == "explicit":
            self._validate_tables(params["tables"])
        elif kind == "independent":
            probs = np.asarray(params["probs"], float)
            if probs.size != action_count or np.any(probs < 0) or np.any(probs > 1):
                raise ProtocolError("independent needs one probability in [0,1] per action")
        elif kind == "partitioned":
            parts = params["parts"]
            weights = np.asarray(params["weights"], float)
            seen = sorted(itertools.chain.from_iterable(parts))
            if seen != list(range(action_count)):
                raise ProtocolError("parts must partition the action set")
            if weights.size != len(parts) or np.any(weights < 0) or \
                    abs(weights.sum() - 1.0) > PROB_ATOL:
                raise ProtocolError("part weights must be a probability vector")
        elif kind not in ("full_set", "uniform_singleton"):
            raise ProtocolError(f"unknown availability kind: {kind!r}")

    def _validate_tables(self, tables: Mapping[int, Sequence]) -> None:
        A = self.action_count
        currents = range(A) if self.excludes_current else (None,)
        for a in currents:
            rows = tables[a]
            total = 0.0
            for subset, prob in rows:
                s = frozenset(subset)
                if prob < 0:
                    raise ProtocolError("negative subset probability")
                if self.excludes_current and a in s:
                    raise ProtocolError(
                        f"subset {sorted(s)} contains the current action {a}")
                if any(b < 0 or b >= A for b in s):
                    raise ProtocolError("subset references an unknown action")
                total += prob
            if abs(total - 1.0) > PROB_ATOL:
                raise ProtocolError(
                    f"probabilities for current action {a} sum to {total}, not 1")

    # constructors ---------------------------------------------------------

    @classmethod
    def full_set(cls, action_count: int, excludes_current: bool = True):
        """Everything (except the current action) is always available."""
        return cls("full_set", action_count, excludes_current)

    @classmethod
    def uniform_singleton(cls, action_count: int, excludes_current: bool = True):
        """Exactly one alternative is available, uniformly at random."""
        return cls("uniform_singleton", action_count, excludes_current)

    @classmethod
    def independent(cls, probs: Sequence[float], require_nonempty: bool = True,
                    excludes_current: bool = True):
        """Each alternative is available independently with its own probability.

        With ``require_nonempty`` the draw is conditioned on at least one
        action being available; without it the empty draw is allowed and the
        agent then simply keeps the current action.
        """
        probs = tuple(float(p) for p in probs)
        return cls("independent", len(probs), excludes_current,
                   probs=probs, require_nonempty=require_nonempty)

    @classmethod
    def partitioned(cls, parts: Sequence[Sequence[int]], weights: Sequence[float],
                    excludes_current: bool = True):
        """One block of a fixed partition becomes available, block i with weight i."""
        parts = tuple(tuple(sorted(p)) for p in parts)
        n = 1 + max(itertools.chain.from_iterable(parts))
        return cls("partitioned", n, excludes_current,
                   parts=parts, weights=tuple(float(w) for w in weights))

    @classmethod
    def explicit(cls, action_count: int, tables: Mapping, excludes_current: bool = True):
        """Arbitrary per-current-action tables of (subset, probability) rows."""
        norm = {}
        keys = range(action_count) if excludes_current else (None,)
        for a in keys:
            norm[a] = tuple((frozenset(s), float(p)) for s, p in tables[a])
        return cls("explicit", action_count, excludes_current, tables=norm)

    # enumeration ----------------------------------------------------------

    def subsets_for(self, current: int | None) -> tuple[tuple[tuple[int, ...], float], ...]:
        """The support as (sorted subset, probability) pairs, cached."""
        if not self.excludes_current:
            current = None
        if current in self._support_cache:
            return self._support_cache[current]
        A = self.action_count
        others = tuple(b for b in range(A) if b != current)
        if self.kind == "full_set":
            rows = ((others, 1.0),)
        elif self.kind == "uniform_singleton":
            rows = tuple(((b,), 1.0 / len(others)) for b in others)
        elif self.kind == "partitioned":
            rows = tuple((tuple(b for b in part if b != current), w)
                         for part, w in zip(self.params["parts"], self.params["weights"])
                         if w > 0)
        elif self.kind == "independent":
            probs = self.params["probs"]
            rows = []
            denom = 1.0
            if self.params["require_nonempty"]:
                denom = 1.0 - float(np.prod([1 - probs[b] for b in others]))
                if denom <= 0:
                    raise ProtocolError("empty draw has probability one")
            for r in range(0 if not self.params["require_nonempty"] else 1,
                           len(others) + 1):
                for combo in itertools.combinations(others, r):
                    inside = set(combo)
                    p = 1.0
                    for b in others:
                        p *= probs[b] if b in inside else 1 - probs[b]
                    if p > 0:
                        rows.append((combo, p / denom))
            rows = tuple(rows)
        else:
            rows = tuple((tuple(sorted(s)), p)
                         for s, p in self.params["tables"][current] if p > 0)
        self._support_cache[current] = rows
        return rows

    def event_probability(self, current: int | None, targets) -> float:
        """P(the drawn available set intersects ``targets``).

        Closed form for the structured kinds, enumeration for explicit ones.
        The drawn set never contains the current action, so ``targets`` may
        include it harmlessly.
        """
        t = set(targets) - ({current} if current is not None else set())
        t &= set(range(self.action_count))
        if not t:
            return 0.0
        A = self.action_count
        if self.kind == "full_set":
            return 1.0
        if self.kind == "uniform_singleton":
            n = A if current is None or not self.excludes_current else A - 1
            return len(t) / n
        if self.kind == "independent":
            probs = self.params["probs"]
            others = [b for b in range(A)
                      if not (self.excludes_current and b == current)]
            miss = float(np.prod([1 - probs[b] for b in t]))
            denom = 1.0
            if self.params["require_nonempty"]:
                denom = 1.0 - float(np.prod([1 - probs[b] for b in others]))
            return (1.0 - miss) / denom
        if self.kind == "partitioned":
            cur = {current} if self.excludes_current and current is not None else set()
            return float(sum(w for part, w in
                             zip(self.params["parts"], self.params["weights"])
                             if (set(part) - cur) & t))
        return float(sum(p for s, p in self.subsets_for(current) if t.intersection(s)))

    def availability_probability(self, current: int | None, b: int) -> float:
        return self.event_probability(current, {b})


# ---------------------------------------------------------------------------
# assumption validation


@dataclass(frozen=True)
class AssumptionReport:
    """Outcome of the behavioral-assumption checks.

    a0: availability never depends on the social state (holds by
    construction for every supported kind).  q1: any strictly positive
    payoff gain is acted on with positive probability.  a1i: every
    alternative is available with positive probability.  a1ii: the chance
    that the drawn set meets any fixed group of third actions is the same
    whichever of two actions is the status quo.
    """

    a0_pass: bool
    q1_pass: bool
    a1i_pass: bool
    a1ii_pass: bool
    witnesses: tuple = ()
    notes: tuple = ()

    @property
    def all_pass(self) -> bool:
        return self.a0_pass and self.q1_pass and self.a1i_pass and self.a1ii_pass


def _a1ii_witnesses(avail: AvailabilityDistribution, limit: int = 200) -> list[dict]:
    A = avail.action_count
    out: list[dict] = []
    if avail.kind in ("full_set", "uniform_singleton", "partitioned"):
        return out  # status-quo independent by construction
    if avail.kind == "independent":
        # the event probability shares one numerator; only the nonempty
        # conditioning denominator can differ across status quos
        probs = avail.params["probs"]
        if not avail.params["require_nonempty"]:
            return out
        denoms = [1.0 - float(np.prod([1 - probs[b] for b in range(A) if b != a]))
                  for a in range(A)]
        for a in range(A):
            for b in range(a + 1, A):
                if abs(denoms[a] - denoms[b]) > PROB_ATOL:
                    c = next(i for i in range(A) if i not in (a, b))
                    out.append({"assumption": "a1ii", "current": a, "other": b,
                                "subset": (c,),
                                "probabilities": (
                                    avail.event_probability(a, {c}),
                                    avail.event_probability(b, {c}))})
        return out
    if A > MAX_EXHAUSTIVE_ACTIONS:
        raise CapabilityError(
            f"exhaustive subset check needs action count <= {MAX_EXHAUSTIVE_ACTIONS}; "
            "use a structured availability kind instead")
    for a in range(A):
        for b in range(a + 1, A):
            rest = [c for c in range(A) if c not in (a, b)]
            for r in range(1, len(rest) + 1):
                for combo in itertools.combinations(rest, r):
                    pa = avail.event_probability(a, set(combo))
                    pb = avail.event_probability(b, set(combo))
                    if abs(pa - pb) > PROB_ATOL:
                        out.append({"assumption": "a1ii", "current": a, "other": b,
                                    "subset": combo, "probabilities": (pa, pb)})
                        if len(out) >= limit:
                            return out
    return out


def validate_assumptions(avail: AvailabilityDistribution,
                         cost: CostDistribution) -> AssumptionReport:
    """Check A0 (state independence), Q1, A1-i and A1-ii with witnesses."""
    witnesses: list[dict] = []
    q1 = cost.q1_satisfied()
    if not q1:
        witnesses.append({"assumption": "q1",
                          "detail": f"Q vanishes on an interval above zero: {cost!r}"})
    a1i = True
    currents = range(avail.action_count) if avail.excludes_current else (None,)
    for a in currents:
        for b in range(avail.action_count):
            if a == b:
                continue
            p = avail.availability_probability(a, b)
            if p <= 0:
                a1i = False
                witnesses.append({"assumption": "a1i", "current": a, "other": b,
                                  "probabilities": (p,)})
    if avail.excludes_current:
        a1ii_wit = _a1ii_witnesses(avail)
    else:
        a1ii_wit = []  # a single shared distribution cannot depend on the status quo
    witnesses.extend(a1ii_wit)
    return AssumptionReport(
        a0_pass=True,
        q1_pass=q1,
        a1i_pass=a1i,
        a1ii_pass=not a1ii_wit,
        witnesses=tuple(witnesses),
        notes=("state-dependence is unrepresentable by construction",),
    )


# ---------------------------------------------------------------------------
# protocols


@dataclass
class RevisionProtocol:
    availability: AvailabilityDistribution
    cost: CostDistribution
    name: str = ""
    _report: AssumptionReport | None = field(default=None, repr=False)

    @property
    def action_count(self) -> int:
        return self.availability.action_count

    def validate(self) -> AssumptionReport:
        if self._report is None:
            self._report = validate_assumptions(self.availability, self.cost)
        return self._report


def _default_partition(action_count: int) -> list[tuple[int, ...]]:
    """Contiguous blocks of size two (the last of size two or three)."""
    if action_count < 4:
        return [tuple(range(action_count))]
    parts = []
    i = 0
    while action_count - i > 3:
        parts.append((i, i + 1))
        i += 2
    parts.append(tuple(range(i, action_count)))
    return parts


def friedman_asymmetric_protocol() -> RevisionProtocol:
    """A three-action protocol with asymmetric availability that still passes
    every assumption: action 0 is always available to the others."""
    tables = {
        0: (((1,), 0.75), ((2,), 0.25)),
        1: (((0,), 0.75), ((0, 2), 0.25)),
        2: (((0, 1), 0.75), ((0,), 0.25)),
    }
    avail = AvailabilityDistribution.explicit(3, tables)
    return RevisionProtocol(avail, CostDistribution.zero_cost(), "friedman_asymmetric")


def _fixture_tables(rows_a, rows_b, action_count: int = 5) -> dict:
    """Fixture tables for status quos 0 and 1; other actions get uniform
    singletons so the distribution is complete."""
    tables = {0: rows_a, 1: rows_b}
    for a in range(2, action_count):
        others = [b for b in range(action_count) if b != a]
        tables[a] = tuple(((b,), 1.0 / len(others)) for b in others)
    return tables


def broken_fixture_i() -> RevisionProtocol:
    """Availability tables that treat status quos 0 and 1 asymmetrically:
    the chance that the drawn set meets {3, 4} is 0.6 from 0 but 0.3 from 1."""
    tables = _fixture_tables(
        (((1,), 0.4), ((2, 3), 0.3), ((4,), 0.3)),
        (((0,), 0.4), ((2,), 0.3), ((3, 4), 0.3)))
    avail = AvailabilityDistribution.explicit(5, tables)
    return RevisionProtocol(avail, CostDistribution.zero_cost(), "fixture_i")


def broken_fixture_ii() -> RevisionProtocol:
    """A second asymmetric fixture: the set meets {3, 4} with probability 0.2
    from status quo 0 but 0.1 from status quo 1."""
    tables = _fixture_tables(
        (((1,), 0.8), ((1, 2, 3), 0.1), ((1, 4), 0.1)),
        (((0,), 0.8), ((0, 2), 0.1), ((0, 3, 4), 0.1)))
    avail = AvailabilityDistribution.explicit(5, tables)
    return RevisionProtocol(avail, CostDistribution.zero_cost(), "fixture_ii")


def make_protocol(spec, action_count: int | None = None) -> RevisionProtocol:
    """Build a protocol from a declarative spec (string shorthand or mapping).

    Shorthand strings take colon-separated parameters, e.g. ``smith:1.0`` or
    ``ordinal:0.5``.
    """
    if isinstance(spec, str):
        parts = spec.split(":")
        d = {"type": parts[0]}
        if parts[0] in ("smith",) and len(parts) > 1:
            d["rate"] = float(parts[1])
        elif parts[0] == "ordinal" and len(parts) > 1:
            d["p"] = float(parts[1])
        elif len(parts) > 1:
            raise ProtocolError(f"unexpected parameters in {spec!r}")
        spec = d
    if not isinstance(spec, dict):
        raise ProtocolError(f"protocol spec must be a string or mapping, got {type(spec)}")
    kind = spec.get("type")
    A = spec.get("actions", action_count)
    zero = CostDistribution.zero_cost()

    def need_actions() -> int:
        if A is None:
            raise ProtocolError(f"protocol {kind!r} needs an action count")
        return int(A)

    if kind == "brd":
        return RevisionProtocol(AvailabilityDistribution.full_set(need_actions()),
                                zero, "brd")
    if kind == "tempered_brd":
        cost = _cost_from_spec(spec.get("cost")) if "cost" in spec else \
            CostDistribution.piecewise([(0.0, 0.3), (0.5, 0.7), (1.5, 1.0)])
        return RevisionProtocol(AvailabilityDistribution.full_set(need_actions()),
                                cost, "tempered_brd")
    if kind == "smith":
        # pairwise comparison with a rate proportional to the payoff gap;
        # the conventional form leaves the rate uncapped
        rate = float(spec.get("rate", 1.0))
        return RevisionProtocol(AvailabilityDistribution.uniform_singleton(need_actions()),
                                CostDistribution.linear(rate, cap=None), "smith")
    if kind == "pairwise":
        cost = _cost_from_spec(spec.get("cost")) if "cost" in spec else \
            CostDistribution.linear(2.0, cap=1.0)
        return RevisionProtocol(AvailabilityDistribution.uniform_singleton(need_actions()),
                                cost, "pairwise")
    if kind == "ordinal":
        # every alternative available independently with probability p; the
        # empty draw is allowed and means no switch, which makes the switch
        # probability to the i-th ranked action exactly (1-p)^(i-1) p
        p = float(spec.get("p", 0.5))
        n = need_actions()
        avail = AvailabilityDistribution.independent([p] * n, require_nonempty=False)
        return RevisionProtocol(avail, zero, "ordinal")
    if kind == "independent":
        probs = spec["probs"]
        avail = AvailabilityDistribution.independent(
            probs, require_nonempty=spec.get("require_nonempty", True))
        return RevisionProtocol(avail, _cost_from_spec(spec.get("cost")), "independent")
    if kind == "partitioned":
        n = need_actions() if "parts" not in spec else None
        parts = [tuple(p) for p in spec["parts"]] if "parts" in spec else \
            _default_partition(n)
        weights = spec.get("weights", [1.0 / len(parts)] * len(parts))
        avail = AvailabilityDistribution.partitioned(parts, weights)
        return RevisionProtocol(avail, _cost_from_spec(spec.get("cost")), "partitioned")
    if kind == "explicit":
        avail = AvailabilityDistribution.explicit(need_actions(),
                                                  _tables_from_spec(spec["tables"]))
        return RevisionProtocol(avail, _cost_from_spec(spec.get("cost")), "explicit")
    if kind == "friedman_asymmetric":
        return friedman_asymmetric_protocol()
    if kind == "fixture_i":
        return broken_fixture_i()
    if kind == "fixture_ii":
        return broken_fixture_ii()
    raise ProtocolError(f"unknown protocol type: {kind!r}")


def _cost_from_spec(spec) -> CostDistribution:
    if spec is None:
        return CostDistribution.zero_cost()
    if isinstance(spec, CostDistribution):
        return spec
    kind = spec.get("type")
    if kind == "zero_cost":
        return CostDistribution.zero_cost()
    if kind == "linear":
        cap = spec.get("cap", 1.0)
        return CostDistribution.linear(spec.get("slope", 1.0),
                                       None if cap in (None, "none") else cap)
    if kind == "piecewise":
        return CostDistribution.piecewise(
            [tuple(p) for p in spec["points"]],
            interpolation=spec.get("interpolation", "step"))
    if kind == "atom_at":
        return CostDistribution.atom_at(spec["location"])
    raise ProtocolError(f"unknown cost type: {kind!r}")


def _tables_from_spec(rows) -> dict:
    """Rows given as (current, subset, probability) triples."""
    tables: dict[int, list] = {}
    for current, subset, prob in rows:
        tables.setdefault(int(current), []).append(
            (tuple(int(b) for b in subset), float(prob)))
    return tables


def canonical_protocols(action_count: int) -> list[RevisionProtocol]:
    """The protocols every property in this package is tested against."""
    out = [
        make_protocol("brd", action_count),
        make_protocol("tempered_brd", action_count),
        make_protocol("smith", action_count),
        make_protocol("pairwise", action_count),
        make_protocol("ordinal:0.5", action_count),
        make_protocol("partitioned", action_count),
    ]
    if action_count == 3:
        out.append(friedman_asymmetric_protocol())
    return out
