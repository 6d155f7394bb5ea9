"""Mean dynamics: from one agent's expected move to a velocity field.

A revision protocol induces a flow on the simplex: each agent draws an
available set, compares the best payoff there with its own, and switches
when the improvement beats the sampled cost.  Averaging over agents gives
the population velocity.
"""

import numpy as np

import gainflow as gf


def main():
    pi = np.array([0.0, 1.0, 2.0])
    x = np.array([0.6, 0.3, 0.1])

    print(f"payoffs {pi.tolist()}, state {x.tolist()}\n")
    for spec in ("brd", "smith:1.0", "pairwise", "ordinal:0.5"):
        dyn = gf.make_dynamic(spec, 3)
        z0 = dyn.per_action_transition(0, pi)
        v = dyn.velocity(x, pi)
        print(f"{spec}:")
        print(f"  expected move of an agent on action 1: {np.round(z0, 4).tolist()}")
        print(f"  population velocity: {np.round(v, 4).tolist()} "
              f"(sums to {v.sum():.1e})")
    print()

    print("classical dynamics share the same interface:")
    for spec in ("replicator", "bnn"):
        v = gf.make_dynamic(spec, 3).velocity(x, pi)
        print(f"  {spec}: {np.round(v, 4).tolist()}")
    print()

    print("tie-breaking among equally good actions is configurable:")
    from gainflow.dynamics import SelectionRule
    dyn = gf.RationalizableDynamic(gf.make_protocol("brd", 3),
                                   selection=SelectionRule(mixing="lowest_index"))
    tied = np.array([0.0, 2.0, 2.0])
    print(f"  payoffs {tied.tolist()}, lowest-index rule: "
          f"{dyn.per_action_transition(0, tied).tolist()}")

    print("\nstationarity coincides with equilibrium for these dynamics:")
    game = gf.good_rps(1.0, 0.9)
    rng = np.random.default_rng(0)
    states = [rng.dirichlet(np.ones(3)) for _ in range(50)] + [np.full(3, 1 / 3)]
    from gainflow.analysis import check_stationarity_nash
    for spec in ("brd", "smith:1.0", "pairwise"):
        rep = check_stationarity_nash(game, gf.make_dynamic(spec, 3), states)
        print(f"  {spec}: {rep.checked} states checked, "
              f"{len(rep.mismatches)} mismatches")
    rep = check_stationarity_nash(game, gf.make_dynamic("replicator", 3),
                                  [np.array([1.0, 0.0, 0.0])])
    print(f"  replicator at a vertex: {len(rep.mismatches)} mismatch "
          "(stationary but not an equilibrium — imitation cannot leave "
          "an unused action)")


if __name__ == "__main__":
    main()
