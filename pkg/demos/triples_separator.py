"""Search small triple-valued systems for relations that are precongruences
but not AM-bisimulations, and show why none of them is an HJ-bisimulation.

Over finite sets a relation is an AM-bisimulation exactly when it is an
HJ-bisimulation, so the second search below runs out of time or candidates.
"""
import sys

from coalg.bisim import (classify_relation, is_am_bisimulation, is_am_precongruence,
                         is_hj_bisimulation)
from coalg.functors import AtMostTwoOfThree
from coalg.search import find_relation

F = AtMostTwoOfThree()


def precongruence_not_am(P, R):
    return is_am_precongruence(P, R) and is_am_bisimulation(P, R) is None


def precongruence_hj_not_am(P, R):
    return precongruence_not_am(P, R) and is_hj_bisimulation(P, R)


if __name__ == "__main__":
    budget = float(sys.argv[1]) if len(sys.argv) > 1 else 20.0
    found = find_relation(F, precongruence_not_am, max_carrier=4, time_budget=budget)
    print(f"precongruence, not AM: found={found.found} after {found.examined} relations")
    if found:
        print("  left :", found.pair.left.structure)
        print("  right:", found.pair.right.structure)
        print("  R    :", sorted(found.relation.pairs))
        c = classify_relation(found.pair, found.relation)
        print("  flags:", c.flags(), "consistent:", c.consistent)
    also_hj = find_relation(F, precongruence_hj_not_am, max_carrier=4, time_budget=budget)
    print(f"precongruence and HJ, not AM: found={also_hj.found} after "
          f"{also_hj.examined} relations ({also_hj.elapsed:.1f}s, exhausted={also_hj.exhausted})")
