"""Minimise a transition system built from two copies of a random one, and
check the quotient against it."""
import random

from coalg.bisim import CoalgebraPair
from coalg.corpus import random_lts, rename
from coalg.lts import lts, minimize, quotient, transitions
from coalg.sequences import greatest_fixpoint
from coalg.systemfile import dumps_aut


def doubled(C):
    """Disjoint union of C with a renamed copy: every state has a twin."""
    states = list(C.carrier) + [f"{s}'" for s in C.carrier]
    trans = transitions(C) + [(f"{s}'", a, f"{t}'") for s, a, t in transitions(C)]
    return lts(states, ["a", "b"], trans)


if __name__ == "__main__":
    C = doubled(random_lts(8, ["a", "b"], random.Random(1)))
    blocks = minimize(C)
    print(f"{len(C.carrier)} states, {len(blocks)} bisimilarity classes")
    for b in blocks:
        print("  ", b)
    Q, name = quotient(C, blocks)
    limit = greatest_fixpoint(CoalgebraPair.of(C, Q)).limit
    print("every state bisimilar to its class:",
          all((s, name[s]) in limit.pairs for s in C.carrier))
    print(dumps_aut(rename(Q, "")), end="")
