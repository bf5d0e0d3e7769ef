"""Exhaustive search for relations with a given profile over small coalgebras."""
from dataclasses import dataclass
import itertools
import time

from .bisim import CoalgebraPair
from .finset import FinSet
from .functors import DEFAULT_CAP, Coalgebra, eval_object


def all_coalgebras(F, n, prefix="s", cap=DEFAULT_CAP):
    """Every F-coalgebra on the carrier {prefix0, ..., prefix(n-1)}."""
    X = FinSet([f"{prefix}{i}" for i in range(n)])
    values = list(eval_object(F, X, cap))
    for choice in itertools.product(values, repeat=n):
        yield Coalgebra(F, X, dict(zip(X, choice)), check=False)


def all_relations(P):
    full = [(x, y) for x in P.X for y in P.Y]
    for bits in range(2 ** len(full)):
        yield P.relation(p for k, p in enumerate(full) if bits >> k & 1)


@dataclass
class SearchResult:
    found: bool
    pair: CoalgebraPair = None
    relation: object = None
    examined: int = 0
    elapsed: float = 0.0
    exhausted: bool = False     # every candidate up to the size bound was tried

    def __bool__(self):
        return self.found


def find_relation(F, predicate, max_carrier=4, time_budget=None, cap=DEFAULT_CAP):
    """First relation R on a pair of F-coalgebras with ``predicate(P, R)``.

    Carrier sizes are tried by max(|X|, |Y|), then |X| * |Y|, so small witnesses come
    first.  The search stops at ``time_budget`` seconds if one is given.
    """
    start = time.monotonic()
    sizes = sorted(((m, n) for m in range(1, max_carrier + 1)
                    for n in range(1, max_carrier + 1)), key=lambda s: (max(s), s[0] * s[1], s))
    examined = 0
    for m, n in sizes:
        for left in all_coalgebras(F, m, "x", cap):
            for right in all_coalgebras(F, n, "y", cap):
                P = CoalgebraPair(F, left, right)
                for R in all_relations(P):
                    examined += 1
                    if predicate(P, R):
                        return SearchResult(True, P, R, examined, time.monotonic() - start)
                    if time_budget is not None and examined % 256 == 0 \
                            and time.monotonic() - start > time_budget:
                        return SearchResult(False, examined=examined,
                                            elapsed=time.monotonic() - start)
    return SearchResult(False, examined=examined, elapsed=time.monotonic() - start,
                        exhausted=True)
