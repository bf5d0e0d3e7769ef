"""Seeded generators for functor values, coalgebras and coalgebra pairs, plus
a few named systems used throughout the tests and demos."""
from fractions import Fraction
import random

from .bisim import CoalgebraPair
from .finset import FinSet
from .functors import (AtMostTwoOfThree, Coalgebra, Compose, Constant,
                       Coproduct, FinPowerset, Identity, LabelledTransitions,
                       Power, Product, SubDist, SubDistribution)
from .lts import lts


class Empty(Exception):
    """F(X) has no values."""


def random_value(F, X, rng, grid=None, max_set=3):
    """A pseudo-random value of F(X).

    Distribution weights are multiples of ``1/grid`` when ``grid`` is given,
    otherwise of a random denominator in {2, 3, 4, 6}.
    """
    if isinstance(F, Identity):
        if not len(X):
            raise Empty()
        return rng.choice(X.elements)
    if isinstance(F, Constant):
        if not len(F.carrier):
            raise Empty()
        return rng.choice(F.carrier.elements)
    if isinstance(F, Product):
        return (random_value(F.left, X, rng, grid, max_set),
                random_value(F.right, X, rng, grid, max_set))
    if isinstance(F, Power):
        return tuple(random_value(F.inner, X, rng, grid, max_set) for _ in range(F.n))
    if isinstance(F, Coproduct):
        order = [0, 1]
        rng.shuffle(order)
        for idx in order:
            try:
                return _inj(idx, random_value(F.left if idx == 0 else F.right,
                                              X, rng, grid, max_set))
            except Empty:
                continue
        raise Empty()
    if isinstance(F, Compose):
        inner = _InnerCarrier(F.inner, X, rng, grid, max_set)
        return random_value(F.outer, inner, rng, grid, max_set)
    if isinstance(F, FinPowerset):
        out = set()
        for _ in range(rng.randint(0, max_set)):
            try:
                out.add(random_value(F.inner, X, rng, grid, max_set))
            except Empty:
                break
        return frozenset(out)
    if isinstance(F, SubDistribution):
        q = grid or rng.choice((2, 3, 4, 6))
        budget = rng.randint(0, q)
        weights = {}
        for _ in range(rng.randint(0, max_set)):
            if budget == 0:
                break
            try:
                v = random_value(F.inner, X, rng, grid, max_set)
            except Empty:
                break
            c = rng.randint(1, budget)
            budget -= c
            weights[v] = weights.get(v, Fraction(0)) + Fraction(c, q)
        return SubDist(weights)
    if isinstance(F, AtMostTwoOfThree):
        if not len(X):
            raise Empty()
        a, b = rng.choice(X.elements), rng.choice(X.elements)
        return rng.choice([(a, a, a), (a, a, b), (a, b, a), (b, a, a), (a, b, b), (b, a, b), (b, b, a)])
    raise TypeError(f"not a functor expression: {F!r}")


def _inj(index, value):
    from .functors import Inj
    return Inj(index, value)


class _InnerCarrier:
    """Stands in for inner(X) when sampling a composite: every choice of an
    element draws a fresh inner value."""

    def __init__(self, F, X, rng, grid, max_set):
        self.F, self.X, self.rng, self.grid, self.max_set = F, X, rng, grid, max_set

    def __len__(self):
        return 1

    @property
    def elements(self):
        return self

    def __getitem__(self, i):
        return random_value(self.F, self.X, self.rng, self.grid, self.max_set)


def random_coalgebra(F, n, rng, prefix="s", grid=None, max_set=3):
    X = FinSet([f"{prefix}{i}" for i in range(n)])
    return Coalgebra(F, X, {x: random_value(F, X, rng, grid, max_set) for x in X})


def random_lts(n, labels, rng, prefix="s", density=None):
    """Random LTS on ``n`` states; each possible transition is present with
    probability ``density`` (default about 1.5 / n per label)."""
    states = [f"{prefix}{i}" for i in range(n)]
    labels = list(labels)
    p = density if density is not None else min(1.0, 1.5 / max(n, 1))
    trans = [(s, a, t) for s in states for a in labels for t in states if rng.random() < p]
    return lts(states, labels, trans)


def coalgebra_corpus(F, sizes=(1, 2, 3), per_size=3, seed=0, max_set=3):
    rng = random.Random(seed)
    out = []
    for n in sizes:
        for _ in range(per_size):
            out.append(random_coalgebra(F, n, rng, grid=2, max_set=max_set))
    return out


def pair_corpus(F, max_product=9, sizes=(1, 2, 3), per_size=3, seed=0, extra=()):
    """Ordered pairs of corpus coalgebras with |X| * |Y| <= ``max_product``;
    the right-hand system gets fresh state names."""
    left = coalgebra_corpus(F, sizes, per_size, seed) + list(extra)
    pairs = []
    for a in left:
        for b in left:
            if len(a.carrier) * len(b.carrier) <= max_product:
                pairs.append(CoalgebraPair(F, a, rename(b, "t")))
    return pairs


def rename(C, prefix):
    """Copy of C with states renamed ``prefix0, prefix1, ...``."""
    from .functors import fmap
    names = {x: f"{prefix}{i}" for i, x in enumerate(C.carrier)}
    X = FinSet(names[x] for x in C.carrier)
    return Coalgebra(C.functor, X, {names[x]: fmap(C.functor, names.__getitem__, C(x))
                                    for x in C.carrier})


def random_lts_pair(rng, max_states=6, labels=("a", "b")):
    n1, n2 = rng.randint(1, max_states), rng.randint(1, max_states)
    return CoalgebraPair.of(random_lts(n1, labels, rng, "x"), random_lts(n2, labels, rng, "y"))


# -- named systems -----------------------------------------------------------

def deadlock_vs_step():
    """x0 --a--> x1 (deadlocked) against a single deadlocked y0."""
    left = lts(["x0", "x1"], ["a"], [("x0", "a", "x1")])
    right = lts(["y0"], ["a"], [])
    return CoalgebraPair.of(left, right)


def milner_abc():
    """a.(b + c) against a.b + a.c."""
    labels = ["a", "b", "c"]
    left = lts(["p0", "p1", "p2", "p3"], labels,
               [("p0", "a", "p1"), ("p1", "b", "p2"), ("p1", "c", "p3")])
    right = lts(["q0", "q1", "q2", "q3", "q4"], labels,
                [("q0", "a", "q1"), ("q0", "a", "q2"), ("q1", "b", "q3"), ("q2", "c", "q4")])
    return CoalgebraPair.of(left, right)


def p32_separator():
    """Two-state P32 system whose full relation is an AM-precongruence but
    not an AM-bisimulation."""
    X = FinSet(["u", "v"])
    C = Coalgebra(AtMostTwoOfThree(), X, {"u": ("u", "u", "v"), "v": ("u", "v", "v")})
    return CoalgebraPair.of(C)


def standard_functors():
    """The functors swept by the implication suite, keyed by a short name."""
    return {
        "lts1": LabelledTransitions(["a"]),
        "lts2": LabelledTransitions(["a", "b"]),
        "pf": FinPowerset(Identity()),
        "stream": Product(Constant(FinSet(["0", "1"])), Identity()),
        "tree": Coproduct(Constant(FinSet(["nil"])), Power(Identity(), 2)),
        "p32": AtMostTwoOfThree(),
    }
