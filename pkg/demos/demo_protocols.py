"""Revision protocols: switching-cost laws, availability draws, and the
behavioral assumptions a protocol must satisfy.

A protocol pairs a distribution over available action sets with a
distribution over switching costs.  The validator checks that every
alternative is reachable and that availability does not depend on the
reviser's current action; two deliberately broken fixtures show how a
violation is witnessed.
"""

import gainflow as gf
from gainflow.protocols import AvailabilityDistribution, CostDistribution


def main():
    print("canonical protocols on 4 actions:")
    for proto in gf.canonical_protocols(4):
        report = proto.validate()
        print(f"  {proto.name:<20} cost={proto.cost.kind:<10} "
              f"availability={proto.availability.kind:<18} "
              f"valid={report.all_pass}")
    print()

    smith = gf.make_protocol("smith:1.0", 3)
    print("smith switching law: rate grows linearly with the payoff gap")
    for d in (0.0, 0.5, 1.0, 2.0):
        print(f"  gap {d:.1f}: switch probability {smith.cost.cdf(d):.2f}")
    print()

    tempered = gf.make_protocol("tempered_brd", 3)
    print("tempered best response: a piecewise switching law with jumps")
    for d in (0.0, 0.25, 0.5, 1.0, 1.5):
        print(f"  gap {d:.2f}: switch probability {tempered.cost.cdf(d):.2f}")
    print()

    print("broken fixtures (availability depends on the current action):")
    for fixture in (gf.broken_fixture_i(), gf.broken_fixture_ii()):
        report = fixture.validate()
        wit = [w for w in report.witnesses if w["assumption"] == "a1ii"][0]
        print(f"  {fixture.name}: valid={report.all_pass}")
        print(f"    witness: subset {wit['subset']} is drawn with probability "
              f"{wit['probabilities'][0]} from action {wit['current']} but "
              f"{wit['probabilities'][1]} from action {wit['other']}")
    print()

    print("a protocol built from parts (pair draws, capped linear cost):")
    proto = gf.RevisionProtocol(
        AvailabilityDistribution.uniform_singleton(3),
        CostDistribution.linear(2.0, cap=1.0), name="custom")
    print(f"  assumptions pass: {proto.validate().all_pass}")


if __name__ == "__main__":
    main()
