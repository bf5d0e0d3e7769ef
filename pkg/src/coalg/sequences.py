"""Descending sequences of relations whose limits are the greatest bisimulations.

Over finite carriers every ordinal-indexed sequence here is eventually
constant at a finite stage, so stages are indexed by naturals.
"""
from dataclasses import dataclass, field

from .bisim import phi_am, phi_hj
from .finset import canon
from .functors import DEFAULT_CAP, fmap
from .terms import DEFAULT_TERM_CAP, UNIT, TermTable


@dataclass
class Chain:
    steps: list
    converged: bool
    operator: str = "hj"

    @property
    def steps_to_converge(self):
        """Number of operator applications performed."""
        return len(self.steps) - 1

    @property
    def limit(self):
        return self.steps[-1]

    def stage(self, n):
        """R_n, extended past convergence by the limit."""
        return self.steps[min(n, len(self.steps) - 1)]

    def to_json(self):
        return {"operator": self.operator, "converged": self.converged,
                "stepsToConverge": self.steps_to_converge,
                "steps": [[[canon(x), canon(y)] for x, y in R.sorted_pairs()]
                          for R in self.steps]}


def greatest_fixpoint(P, operator="hj", cap=DEFAULT_CAP, method="structural", start=None):
    """Iterate phi_hj or phi_am from X x Y until two stages coincide.

    Both operators are monotone, so the stages descend and the loop ends
    after at most |X x Y| + 1 applications.  The last stage is the greatest
    HJ-bisimulation (respectively AM-precongruence).
    """
    if operator == "hj":
        op = lambda R: phi_hj(P, R, cap, method)
    elif operator == "am":
        op = lambda R: phi_am(P, R, cap)
    else:
        raise ValueError(f"unknown operator {operator!r}")
    R = P.full() if start is None else start
    steps = [R]
    limit = len(P.X) * len(P.Y) + 1
    for _ in range(limit):
        nxt = op(R)
        steps.append(nxt)
        if nxt == R:
            return Chain(steps, True, operator)
        R = nxt
    return Chain(steps, False, operator)


@dataclass
class TerminalSequence:
    """The cones x_n: X -> Z_n and y_n: Y -> Z_n as interned term ids."""
    table: TermTable
    left: list = field(default_factory=list)
    right: list = field(default_factory=list)

    def relation(self, P, n):
        """W_n: the pairs whose level-n terms coincide."""
        xs, ys = self.left[n], self.right[n]
        by_term = {}
        for y in P.Y:
            by_term.setdefault(ys[y], []).append(y)
        return P.relation((x, y) for x in P.X for y in by_term.get(xs[x], ()))

    def realized(self, n):
        return set(self.left[n].values()) | set(self.right[n].values())

    def step_injective_on_realized(self, n):
        """Whether Z_{n+1} -> Z_n is injective on the level-(n+1) terms
        actually reached by the two cones."""
        terms = self.realized(n + 1)
        return len({self.table.step(t) for t in terms}) == len(terms)


def terminal_sequence(P, n, cap=DEFAULT_TERM_CAP):
    """Compute the cones up to level ``n`` without materialising any Z_m."""
    F = P.functor
    table = TermTable(F, cap)
    seq = TerminalSequence(table)
    seq.left.append({x: UNIT for x in P.X})
    seq.right.append({y: UNIT for y in P.Y})
    for m in range(n):
        prev_l, prev_r = seq.left[m], seq.right[m]
        seq.left.append({x: table.intern(m + 1, fmap(F, prev_l.__getitem__, P.left(x)))
                         for x in P.X})
        seq.right.append({y: table.intern(m + 1, fmap(F, prev_r.__getitem__, P.right(y)))
                          for y in P.Y})
    return seq


def terminal_sequence_relation(P, n, cap=DEFAULT_TERM_CAP):
    return terminal_sequence(P, n, cap).relation(P, n)


def terminal_relations(P, n, cap=DEFAULT_TERM_CAP):
    seq = terminal_sequence(P, n, cap)
    return [seq.relation(P, m) for m in range(n + 1)]
