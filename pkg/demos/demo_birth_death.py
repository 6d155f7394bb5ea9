"""Birth-death revision: revisers with no status quo.

Here a reviser compares the best available payoff against the population
average rather than against a current action, yielding excess-payoff
dynamics.  The same gain accounting applies, with one common gain value
shared by all agents.
"""

import numpy as np

import gainflow as gf
from gainflow.analysis import audit_convergence, audit_monotonicity

UNIFORM = np.full(3, 1.0 / 3.0)


def main():
    dyn = gf.bnn_dynamic(3)
    pi = np.array([0.0, 1.0, 2.0])

    snap = gf.birth_death_gains(dyn, UNIFORM, pi)
    print("closed-form gains at the uniform state with payoffs (0, 1, 2):")
    print(f"  aggregate net gain G = {snap.G:.6f} (exactly 1/6)")
    print(f"  aggregate drop rate H = {snap.H:.6f} (exactly -1/9)\n")

    game = gf.good_rps(1.0, 0.9)
    traj = gf.simulate(game, dyn, (0.9, 0.05, 0.05),
                       gf.IntegratorConfig(dt=0.01, horizon=400.0))
    conv = audit_convergence(traj, UNIFORM, 1e-3)
    g_rep = audit_monotonicity(traj, "G")
    print("excess-payoff dynamic in contractive RPS:")
    print(f"  converged: {conv.converged} (distance {conv.final_distance:.2e})")
    print(f"  G verdict: {g_rep.verdict}, final G {traj.series['G'][-1]:.2e}")

    print("\nvelocity vanishes exactly at the equilibrium:")
    v = dyn.velocity(UNIFORM, gf.payoff(game, UNIFORM))
    print(f"  |velocity| at barycenter: {np.abs(v).max():.2e}")


if __name__ == "__main__":
    main()
