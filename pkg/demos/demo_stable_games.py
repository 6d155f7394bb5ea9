"""Population games and static stability certificates.

Builds rock-paper-scissors variants and a classic congestion-style 3x3
game, then certifies (in)stability by bounding the symmetrized payoff
Jacobian on the simplex tangent space over sampled states.
"""

import numpy as np

import gainflow as gf


def describe(name, game):
    report = gf.is_stable_game(game)
    x = np.full(game.action_count, 1.0 / game.action_count)
    print(f"{name}:")
    print(f"  payoffs at barycenter: {np.round(gf.payoff(game, x), 4).tolist()}")
    print(f"  equilibrium gap there: {gf.nash_gap(game, x):.3e}")
    print(f"  stable: {report.stable}, worst tangent-space eigenvalue "
          f"{report.worst_margin:+.6f} over {report.sample_count} states")
    print()


def main():
    # win weight 1, loss weight 0.9: contractive cycle, strictly stable
    describe("good RPS (w=1, l=0.9)", gf.good_rps(1.0, 0.9))
    # loss weight 1.1: expansive cycle, strictly unstable
    describe("bad RPS (w=1, l=1.1)", gf.make_game("bad_rps"))
    # zero-sum cycle: null stability, trajectories orbit
    describe("standard RPS", gf.make_game("standard_rps"))
    describe("asymmetric 3-action game", gf.make_game("friedman"))

    game = gf.good_rps(1.0, 0.9)
    print("equilibrium margin along a ray toward a vertex:")
    for t in (0.0, 0.3, 0.6, 0.9):
        x = (1 - t) * np.full(3, 1 / 3) + t * np.array([1.0, 0.0, 0.0])
        print(f"  t={t:.1f}: state {np.round(x, 3).tolist()}, "
              f"gap {gf.nash_gap(game, x):.4f}")


if __name__ == "__main__":
    main()
