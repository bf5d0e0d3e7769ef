"""Endofunctors on finite sets, built from a small combinator language.

A functor expression is a tree of frozen dataclasses.  Values of ``F(X)``
("functor values") are plain Python data, interpreted relative to the
expression:

=====================  ===================================================
``Identity``           an element of X
``Constant(A)``        an element of A
``Product(F, G)``      a pair ``(u, v)``
``Power(F, n)``        an n-tuple
``Coproduct(F, G)``    ``Inj(0, u)`` or ``Inj(1, v)``
``Compose(F, G)``      an F-value whose atoms are G-values
``FinPowerset(F)``     a frozenset of F-values
``SubDistribution(F)`` a ``SubDist`` over F-values (exact rational weights)
``AtMostTwoOfThree``   a triple with at most two distinct entries
=====================  ===================================================
"""
from dataclasses import dataclass
from fractions import Fraction
import itertools
import math

from .errors import DomainError, ShapeError, SizeError
from .finset import FinSet, Relation, canon

DEFAULT_CAP = 200_000
DEFAULT_GRID = 2


# -- expressions -------------------------------------------------------------

class FunctorExpr:
    __slots__ = ()

    def __str__(self):
        from .syntax import format_functor
        return format_functor(self)


@dataclass(frozen=True, repr=False)
class Identity(FunctorExpr):
    def __repr__(self):
        return "Identity()"


@dataclass(frozen=True, repr=False)
class Constant(FunctorExpr):
    carrier: FinSet

    def __repr__(self):
        return f"Constant({self.carrier!r})"


@dataclass(frozen=True, repr=False)
class Product(FunctorExpr):
    left: FunctorExpr
    right: FunctorExpr

    def __repr__(self):
        return f"Product({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Coproduct(FunctorExpr):
    left: FunctorExpr
    right: FunctorExpr

    def __repr__(self):
        return f"Coproduct({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Power(FunctorExpr):
    inner: FunctorExpr
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("power exponent must be non-negative")

    def __repr__(self):
        return f"Power({self.inner!r}, {self.n})"


@dataclass(frozen=True, repr=False)
class Compose(FunctorExpr):
    """``outer`` after ``inner``: X maps to outer(inner(X))."""
    outer: FunctorExpr
    inner: FunctorExpr

    def __repr__(self):
        return f"Compose({self.outer!r}, {self.inner!r})"


@dataclass(frozen=True, repr=False)
class FinPowerset(FunctorExpr):
    inner: FunctorExpr = Identity()

    def __repr__(self):
        return f"FinPowerset({self.inner!r})"


@dataclass(frozen=True, repr=False)
class SubDistribution(FunctorExpr):
    inner: FunctorExpr = Identity()

    def __repr__(self):
        return f"SubDistribution({self.inner!r})"


@dataclass(frozen=True, repr=False)
class AtMostTwoOfThree(FunctorExpr):
    """X maps to the triples over X with at most two distinct entries."""

    def __repr__(self):
        return "AtMostTwoOfThree()"


def LabelledTransitions(labels):
    if not isinstance(labels, FinSet):
        labels = FinSet(labels)
    return FinPowerset(Product(Constant(labels), Identity()))


def lts_labels(F):
    """The label set if ``F`` is the labelled-transition functor, else None."""
    if (isinstance(F, FinPowerset) and isinstance(F.inner, Product)
            and isinstance(F.inner.left, Constant)
            and isinstance(F.inner.right, Identity)):
        return F.inner.left.carrier
    return None


def is_polynomial(F):
    if isinstance(F, (Identity, Constant)):
        return True
    if isinstance(F, (Product, Coproduct)):
        return is_polynomial(F.left) and is_polynomial(F.right)
    if isinstance(F, Power):
        return is_polynomial(F.inner)
    if isinstance(F, Compose):
        return is_polynomial(F.outer) and is_polynomial(F.inner)
    return False


# -- values ------------------------------------------------------------------

class Inj:
    """Coproduct injection: index 0 is the left summand, 1 the right."""

    __slots__ = ("index", "value")

    def __init__(self, index, value):
        if index not in (0, 1):
            raise ShapeError("injection index must be 0 or 1")
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("Inj is immutable")

    def __eq__(self, other):
        return isinstance(other, Inj) and self.index == other.index and self.value == other.value

    def __hash__(self):
        return hash(("Inj", self.index, self.value))

    def __canon__(self):
        return ("inl(" if self.index == 0 else "inr(") + canon(self.value) + ")"

    def __repr__(self):
        return f"Inj({self.index}, {self.value!r})"


class SubDist:
    """A finitely supported sub-probability distribution with rational weights.

    Zero weights are dropped; the remaining weights must be positive and sum
    to at most one.
    """

    __slots__ = ("_items", "_frozen")

    def __init__(self, weights=()):
        if isinstance(weights, dict):
            weights = weights.items()
        acc = {}
        for e, w in weights:
            w = Fraction(w)
            if w < 0:
                raise ShapeError(f"negative weight {w} on {canon(e)}")
            if w:
                acc[e] = acc.get(e, Fraction(0)) + w
        if sum(acc.values(), Fraction(0)) > 1:
            raise ShapeError("total mass exceeds 1")
        items = sorted(acc.items(), key=lambda kv: canon(kv[0]))
        object.__setattr__(self, "_items", tuple(items))
        object.__setattr__(self, "_frozen", frozenset(items))

    def __setattr__(self, name, value):
        raise AttributeError("SubDist is immutable")

    @property
    def items(self):
        return self._items

    @property
    def support(self):
        return [e for e, _ in self._items]

    @property
    def mass(self):
        return sum((w for _, w in self._items), Fraction(0))

    def weight(self, e):
        for k, w in self._items:
            if k == e:
                return w
        return Fraction(0)

    def as_dict(self):
        return dict(self._items)

    def __eq__(self, other):
        return isinstance(other, SubDist) and self._frozen == other._frozen

    def __hash__(self):
        return hash(("SubDist", self._frozen))

    def __canon__(self):
        return "{" + ",".join(f"{canon(e)}:{w}" for e, w in self._items) + "}"

    def __repr__(self):
        return "SubDist({" + ", ".join(f"{canon(e)}: {w}" for e, w in self._items) + "})"


# -- sizes and enumeration ---------------------------------------------------

def object_size(F, n, grid=DEFAULT_GRID, ceiling=None):
    """Number of values of F on an n-element set.

    Returns ``(count, exact)``.  When ``ceiling`` is given the computation
    saturates where an exponent would explode: such counts are reported as
    ``ceiling + 1`` with ``exact=False`` (a lower bound), so towers of
    powersets stay cheap.
    """
    def clamp(v, exact=True):
        return v, exact

    if isinstance(F, Identity):
        return clamp(n)
    if isinstance(F, Constant):
        return clamp(len(F.carrier))
    if isinstance(F, AtMostTwoOfThree):
        return clamp(n ** 3 - n * (n - 1) * (n - 2))
    if isinstance(F, (Product, Coproduct)):
        a, ea = object_size(F.left, n, grid, ceiling)
        b, eb = object_size(F.right, n, grid, ceiling)
        v = a * b if isinstance(F, Product) else a + b
        return clamp(v, ea and eb)
    if isinstance(F, Power):
        a, ea = object_size(F.inner, n, grid, ceiling)
        if ceiling is not None and a > 1 and F.n * math.log2(a) > ceiling.bit_length() + 1:
            return ceiling + 1, False
        return clamp(a ** F.n, ea)
    if isinstance(F, Compose):
        a, ea = object_size(F.inner, n, grid, ceiling)
        if not ea:
            b, _ = object_size(F.outer, a, grid, ceiling)
            return clamp(b, False)
        return object_size(F.outer, a, grid, ceiling)
    if isinstance(F, FinPowerset):
        a, ea = object_size(F.inner, n, grid, ceiling)
        if ceiling is not None and a > ceiling.bit_length() + 1:
            return ceiling + 1, False
        return clamp(2 ** a, ea)
    if isinstance(F, SubDistribution):
        a, ea = object_size(F.inner, n, grid, ceiling)
        return clamp(math.comb(a + grid, grid), ea)
    raise ShapeError(f"unknown functor expression {F!r}")


def _check_size(F, X, cap, grid):
    count, exact = object_size(F, len(X), grid, ceiling=cap)
    if count > cap:
        bound = "at least " if not exact else ""
        raise SizeError(f"{F} on {len(X)} elements has {bound}{count} values (cap {cap})",
                        count=count, cap=cap, exact=exact)


def _grid_vectors(k, q):
    """All length-k vectors of non-negative integers with sum at most q."""
    if k == 0:
        yield ()
        return
    for first in range(q + 1):
        for rest in _grid_vectors(k - 1, q - first):
            yield (first,) + rest


def _enum(F, X, cap, grid):
    _check_size(F, X, cap, grid)
    if isinstance(F, Identity):
        return list(X)
    if isinstance(F, Constant):
        return list(F.carrier)
    if isinstance(F, Product):
        left = _enum(F.left, X, cap, grid)
        right = _enum(F.right, X, cap, grid)
        return [(a, b) for a in left for b in right]
    if isinstance(F, Coproduct):
        return ([Inj(0, a) for a in _enum(F.left, X, cap, grid)]
                + [Inj(1, b) for b in _enum(F.right, X, cap, grid)])
    if isinstance(F, Power):
        inner = _enum(F.inner, X, cap, grid)
        return [tuple(t) for t in itertools.product(inner, repeat=F.n)]
    if isinstance(F, Compose):
        inner = FinSet(_enum(F.inner, X, cap, grid))
        return _enum(F.outer, inner, cap, grid)
    if isinstance(F, FinPowerset):
        inner = _enum(F.inner, X, cap, grid)
        return [frozenset(c) for r in range(len(inner) + 1)
                for c in itertools.combinations(inner, r)]
    if isinstance(F, SubDistribution):
        inner = _enum(F.inner, X, cap, grid)
        return [SubDist({e: Fraction(c, grid) for e, c in zip(inner, vec) if c})
                for vec in _grid_vectors(len(inner), grid)]
    if isinstance(F, AtMostTwoOfThree):
        return [t for t in itertools.product(list(X), repeat=3) if len(set(t)) <= 2]
    raise ShapeError(f"unknown functor expression {F!r}")


def eval_object(F, X, cap=DEFAULT_CAP, grid=DEFAULT_GRID):
    """All values of F(X), in canonical order.

    Distributions are enumerated on the grid of multiples of ``1/grid``.
    Raises SizeError instead of truncating when the count exceeds ``cap``.
    """
    values = _enum(F, X, cap, grid)
    return FinSet(sorted(values, key=canon))


# -- morphism action ---------------------------------------------------------

def fmap(F, fn, t):
    """Apply F to the plain callable ``fn`` and evaluate at ``t``.

    No validation; see ``eval_morphism`` for the checked version.
    """
    if isinstance(F, Identity):
        return fn(t)
    if isinstance(F, Constant):
        return t
    if isinstance(F, Product):
        return (fmap(F.left, fn, t[0]), fmap(F.right, fn, t[1]))
    if isinstance(F, Coproduct):
        branch = F.left if t.index == 0 else F.right
        return Inj(t.index, fmap(branch, fn, t.value))
    if isinstance(F, Power):
        return tuple(fmap(F.inner, fn, u) for u in t)
    if isinstance(F, Compose):
        return fmap(F.outer, lambda u: fmap(F.inner, fn, u), t)
    if isinstance(F, FinPowerset):
        return frozenset(fmap(F.inner, fn, u) for u in t)
    if isinstance(F, SubDistribution):
        pushed = {}
        for u, w in t.items:
            v = fmap(F.inner, fn, u)
            pushed[v] = pushed.get(v, Fraction(0)) + w
        return SubDist(pushed)
    if isinstance(F, AtMostTwoOfThree):
        return tuple(fn(a) for a in t)
    raise ShapeError(f"unknown functor expression {F!r}")


def check_value(F, X, t, where="value"):
    """Raise ShapeError unless ``t`` is a value of F(X)."""
    if isinstance(F, Identity):
        if t not in X:
            raise ShapeError(f"{where}: {canon(t)!r} is not an element of the carrier")
    elif isinstance(F, Constant):
        if t not in F.carrier:
            raise ShapeError(f"{where}: {canon(t)!r} is not in the constant set")
    elif isinstance(F, (Product, Power)):
        arity = 2 if isinstance(F, Product) else F.n
        if not isinstance(t, tuple) or len(t) != arity:
            raise ShapeError(f"{where}: expected a {arity}-tuple, got {canon(t)!r}")
        parts = (F.left, F.right) if isinstance(F, Product) else (F.inner,) * F.n
        for k, (G, u) in enumerate(zip(parts, t)):
            check_value(G, X, u, f"{where}[{k}]")
    elif isinstance(F, Coproduct):
        if not isinstance(t, Inj):
            raise ShapeError(f"{where}: expected an injection, got {canon(t)!r}")
        check_value(F.left if t.index == 0 else F.right, X, t.value, f"{where}.inj{t.index}")
    elif isinstance(F, Compose):
        check_value(F.outer, _ValueCarrier(F.inner, X), t, where)
    elif isinstance(F, FinPowerset):
        if not isinstance(t, frozenset):
            raise ShapeError(f"{where}: expected a finite set, got {canon(t)!r}")
        for u in t:
            check_value(F.inner, X, u, f"{where}{{}}")
    elif isinstance(F, SubDistribution):
        if not isinstance(t, SubDist):
            raise ShapeError(f"{where}: expected a sub-distribution, got {canon(t)!r}")
        for u, _ in t.items:
            check_value(F.inner, X, u, f"{where}{{}}")
    elif isinstance(F, AtMostTwoOfThree):
        if not isinstance(t, tuple) or len(t) != 3:
            raise ShapeError(f"{where}: expected a triple, got {canon(t)!r}")
        if len(set(t)) > 2:
            raise ShapeError(f"{where}: triple {canon(t)} has three distinct entries")
        for a in t:
            if a not in X:
                raise ShapeError(f"{where}: {canon(a)!r} is not an element of the carrier")
    else:
        raise ShapeError(f"unknown functor expression {F!r}")


class _ValueCarrier:
    """Membership oracle for inner(X) that avoids enumerating it."""

    def __init__(self, F, X):
        self.F, self.X = F, X

    def __contains__(self, u):
        try:
            check_value(self.F, self.X, u)
        except (ShapeError, TypeError, AttributeError, IndexError):
            return False
        return True


def is_value(F, X, t):
    try:
        check_value(F, X, t)
    except ShapeError:
        return False
    return True


def eval_morphism(F, f, t):
    """F(f) applied to ``t``, after checking that ``t`` is a value of F(f.dom)."""
    check_value(F, f.dom, t)
    return fmap(F, f, t)


def image_under(F, f, values):
    return [fmap(F, f, t) for t in values]


# -- relation lifting --------------------------------------------------------

def relation_lifting(F, R, cap=DEFAULT_CAP, grid=DEFAULT_GRID):
    """The lifted relation, by definition: the image of F(R) -> F(X) x F(Y).

    Enumerates F applied to the pair set of ``R``; distributions are therefore
    restricted to the enumeration grid.  ``lifting_witness`` decides
    membership exactly without enumerating.
    """
    apex = R.as_finset()
    elems = _enum(F, apex, cap, grid)
    first = lambda r: r[0]
    second = lambda r: r[1]
    pairs = {(fmap(F, first, t), fmap(F, second, t)) for t in elems}
    FX = eval_object(F, R.left, cap, grid)
    FY = eval_object(F, R.right, cap, grid)
    return Relation(FX, FY, pairs)


def lifted_pairs(F, R, cap=DEFAULT_CAP, grid=DEFAULT_GRID):
    """Just the pair set of ``relation_lifting``; the carriers F(X), F(Y) are
    not enumerated."""
    apex = R.as_finset()
    elems = _enum(F, apex, cap, grid)
    return {(fmap(F, lambda r: r[0], t), fmap(F, lambda r: r[1], t)) for t in elems}


def lifting_witness(F, R, s, t):
    """A value ``w`` of F(R) whose two projections are ``s`` and ``t``, or None.

    The search is structural: products and coproducts componentwise, sets by
    keeping every related pair of members, distributions by an exact
    rational transport (max-flow) problem, triples by the forced pairing.
    """
    pairs = R.pairs if isinstance(R, Relation) else frozenset(R)
    return _lift(F, lambda a, b: (a, b) if (a, b) in pairs else None, s, t)


def lifts(F, R, s, t):
    return lifting_witness(F, R, s, t) is not None


def _lift(F, related, s, t):
    if isinstance(F, Identity):
        return related(s, t)
    if isinstance(F, Constant):
        return s if s == t else None
    if isinstance(F, Product):
        a = _lift(F.left, related, s[0], t[0])
        if a is None:
            return None
        b = _lift(F.right, related, s[1], t[1])
        return None if b is None else (a, b)
    if isinstance(F, Power):
        out = []
        for u, v in zip(s, t):
            w = _lift(F.inner, related, u, v)
            if w is None:
                return None
            out.append(w)
        return tuple(out)
    if isinstance(F, Coproduct):
        if s.index != t.index:
            return None
        branch = F.left if s.index == 0 else F.right
        w = _lift(branch, related, s.value, t.value)
        return None if w is None else Inj(s.index, w)
    if isinstance(F, Compose):
        return _lift(F.outer, lambda a, b: _lift(F.inner, related, a, b), s, t)
    if isinstance(F, FinPowerset):
        chosen = []
        left_hit, right_hit = set(), set()
        for a in s:
            for b in t:
                w = _lift(F.inner, related, a, b)
                if w is not None:
                    chosen.append(w)
                    left_hit.add(a)
                    right_hit.add(b)
        if len(left_hit) != len(s) or len(right_hit) != len(t):
            return None
        return frozenset(chosen)
    if isinstance(F, SubDistribution):
        if s.mass != t.mass:
            return None
        edges = {}
        for a in s.support:
            for b in t.support:
                w = _lift(F.inner, related, a, b)
                if w is not None:
                    edges[(a, b)] = w
        flow = transport_plan(s.as_dict(), t.as_dict(), list(edges))
        if flow is None:
            return None
        return SubDist({edges[e]: c for e, c in flow.items() if c})
    if isinstance(F, AtMostTwoOfThree):
        ws = tuple(related(a, b) for a, b in zip(s, t))
        if any(w is None for w in ws) or len(set(ws)) > 2:
            return None
        return ws
    raise ShapeError(f"unknown functor expression {F!r}")


def transport_plan(supply, demand, edges):
    """Exact transport plan moving ``supply`` onto ``demand`` along ``edges``.

    Both arguments map nodes to non-negative Fractions with equal totals.
    Returns a dict edge -> amount, or None if no plan exists.  Edmonds-Karp
    on the bipartite network; edge capacities are unbounded.
    """
    total = sum(supply.values(), Fraction(0))
    if total != sum(demand.values(), Fraction(0)):
        return None
    src, snk = ("src",), ("snk",)
    L = {a: ("L", a) for a in supply}
    Rn = {b: ("R", b) for b in demand}
    cap = {}
    adj = {}

    def add(u, v, c):
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
        cap[(u, v)] = cap.get((u, v), Fraction(0)) + c
        cap.setdefault((v, u), Fraction(0))

    for a, w in supply.items():
        add(src, L[a], w)
    for b, w in demand.items():
        add(Rn[b], snk, w)
    for a, b in edges:
        add(L[a], Rn[b], total)
    flow = Fraction(0)
    while True:
        parent = {src: None}
        queue = [src]
        for u in queue:
            if u == snk:
                break
            for v in adj.get(u, ()):
                if v not in parent and cap[(u, v)] > 0:
                    parent[v] = u
                    queue.append(v)
        if snk not in parent:
            break
        path = []
        v = snk
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        push = min(cap[e] for e in path)
        for u, v in path:
            cap[(u, v)] -= push
            cap[(v, u)] += push
        flow += push
    if flow != total:
        return None
    return {(a, b): cap[(Rn[b], L[a])] for a, b in edges}


# -- coalgebras --------------------------------------------------------------

class Coalgebra:
    """A carrier together with a structure map carrier -> F(carrier)."""

    __slots__ = ("functor", "carrier", "_structure")

    def __init__(self, functor, carrier, structure, check=True):
        if not isinstance(carrier, FinSet):
            carrier = FinSet(carrier)
        structure = dict(structure)
        if check:
            if set(structure) != set(carrier.elements):
                missing = [x for x in carrier if x not in structure]
                raise ShapeError(f"structure map undefined on {missing[:3]}")
            for x in carrier:
                check_value(functor, carrier, structure[x], where=f"state {canon(x)}")
        self.functor = functor
        self.carrier = carrier
        self._structure = structure

    @property
    def structure(self):
        return dict(self._structure)

    def __call__(self, x):
        return self._structure[x]

    def __eq__(self, other):
        return (isinstance(other, Coalgebra) and self.functor == other.functor
                and self.carrier == other.carrier and self._structure == other._structure)

    def __hash__(self):
        return hash((self.functor, self.carrier))

    def __repr__(self):
        body = ", ".join(f"{canon(x)}: {canon(self._structure[x])}" for x in self.carrier)
        return f"Coalgebra({self.functor}, {{{body}}})"


def is_homomorphism(f, source, target):
    """Check F(f) . h == k . f for ``f: source.carrier -> target.carrier``."""
    if f.dom != source.carrier or f.cod != target.carrier:
        raise DomainError("map does not go between the two carriers")
    F = source.functor
    return all(fmap(F, f, source(x)) == target(f(x)) for x in source.carrier)
