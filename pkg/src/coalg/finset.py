"""Finite sets, total functions and binary relations between them.

Everything here is exact and deterministic: carriers keep the order in which
their elements were given, relations are explicit pair sets, and every
construction returns its elements in a reproducible order.
"""
from fractions import Fraction

from .errors import DomainError


def canon(value):
    """Canonical string for any element or functor value; used as sort key."""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, int)):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    method = getattr(value, "__canon__", None)
    if method is not None:
        return method()
    if isinstance(value, tuple):
        return "(" + ",".join(canon(v) for v in value) + ")"
    if isinstance(value, frozenset):
        return "{" + ",".join(sorted(canon(v) for v in value)) + "}"
    return repr(value)


def canonical_sorted(values):
    return sorted(values, key=canon)


class FinSet:
    """An ordered finite carrier of distinct hashable elements."""

    __slots__ = ("_elements", "_index", "_frozen")

    def __init__(self, elements=()):
        elements = tuple(elements)
        index = {}
        for i, e in enumerate(elements):
            if e in index:
                raise DomainError(f"duplicate element {canon(e)!r}")
            index[e] = i
        self._elements = elements
        self._index = index
        self._frozen = frozenset(elements)

    @classmethod
    def sorted(cls, elements):
        return cls(canonical_sorted(set(elements)))

    @property
    def elements(self):
        return self._elements

    def index(self, e):
        return self._index[e]

    def __iter__(self):
        return iter(self._elements)

    def __len__(self):
        return len(self._elements)

    def __contains__(self, e):
        try:
            return e in self._index
        except TypeError:
            return False

    def __eq__(self, other):
        return isinstance(other, FinSet) and self._frozen == other._frozen

    def __hash__(self):
        return hash(self._frozen)

    def __repr__(self):
        return "FinSet({" + ", ".join(canon(e) for e in self._elements) + "})"

    def __canon__(self):
        return "{" + ",".join(canon(e) for e in self._elements) + "}"


class FinFunction:
    """A total function between finite sets."""

    __slots__ = ("dom", "cod", "_map")

    def __init__(self, dom, cod, mapping):
        if callable(mapping) and not isinstance(mapping, dict):
            mapping = {x: mapping(x) for x in dom}
        else:
            mapping = dict(mapping)
        if set(mapping) != set(dom.elements):
            missing = [x for x in dom if x not in mapping]
            extra = [x for x in mapping if x not in dom]
            raise DomainError(
                f"function not defined exactly on its domain "
                f"(missing {missing[:3]}, extra {extra[:3]})")
        for x, y in mapping.items():
            if y not in cod:
                raise DomainError(f"image {canon(y)!r} of {canon(x)!r} not in codomain")
        self.dom = dom
        self.cod = cod
        self._map = mapping

    @classmethod
    def identity(cls, carrier):
        return cls(carrier, carrier, {x: x for x in carrier})

    @property
    def mapping(self):
        return dict(self._map)

    def __call__(self, x):
        return self._map[x]

    def then(self, other):
        """Diagrammatic composition: first ``self``, then ``other``."""
        if self.cod != other.dom:
            raise DomainError("cannot compose: codomain and domain differ")
        return FinFunction(self.dom, other.cod, {x: other(self(x)) for x in self.dom})

    def image(self):
        seen = {}
        for x in self.dom:
            seen.setdefault(self._map[x], None)
        return list(seen)

    def is_injective(self):
        return len(set(self._map.values())) == len(self._map)

    def is_surjective(self):
        return set(self._map.values()) == set(self.cod.elements)

    def __eq__(self, other):
        return (isinstance(other, FinFunction) and self.dom == other.dom
                and self.cod == other.cod and self._map == other._map)

    def __hash__(self):
        return hash((self.dom, self.cod, frozenset(self._map.items())))

    def __repr__(self):
        body = ", ".join(f"{canon(x)}->{canon(self._map[x])}" for x in self.dom)
        return f"FinFunction({body})"


class Relation:
    """A relation R in Rel(X, Y), stored as its set of pairs.

    The span X <- R -> Y given by the two projections is jointly monic by
    construction, so the pair set is the canonical representative.
    """

    __slots__ = ("left", "right", "pairs")

    def __init__(self, left, right, pairs=()):
        pairs = frozenset(pairs)
        for x, y in pairs:
            if x not in left or y not in right:
                raise DomainError(f"pair ({canon(x)}, {canon(y)}) outside the carriers")
        self.left = left
        self.right = right
        self.pairs = pairs

    @classmethod
    def full(cls, left, right):
        return cls(left, right, ((x, y) for x in left for y in right))

    @classmethod
    def empty(cls, left, right):
        return cls(left, right, ())

    @classmethod
    def diagonal(cls, carrier):
        return cls(carrier, carrier, ((x, x) for x in carrier))

    def sorted_pairs(self):
        li, ri = self.left.index, self.right.index
        return sorted(self.pairs, key=lambda p: (li(p[0]), ri(p[1])))

    def as_finset(self):
        """The apex of the span, as a carrier whose elements are the pairs."""
        return FinSet(self.sorted_pairs())

    def projections(self):
        apex = self.as_finset()
        p = FinFunction(apex, self.left, {r: r[0] for r in apex})
        q = FinFunction(apex, self.right, {r: r[1] for r in apex})
        return p, q

    def _check_same(self, other):
        if self.left != other.left or self.right != other.right:
            raise DomainError("relations live over different carriers")

    def __and__(self, other):
        self._check_same(other)
        return Relation(self.left, self.right, self.pairs & other.pairs)

    def __or__(self, other):
        self._check_same(other)
        return Relation(self.left, self.right, self.pairs | other.pairs)

    def __le__(self, other):
        return relation_leq(self, other)

    def __contains__(self, pair):
        return pair in self.pairs

    def __iter__(self):
        return iter(self.sorted_pairs())

    def __len__(self):
        return len(self.pairs)

    def __eq__(self, other):
        return (isinstance(other, Relation) and self.left == other.left
                and self.right == other.right and self.pairs == other.pairs)

    def __hash__(self):
        return hash((self.left, self.right, self.pairs))

    def __repr__(self):
        body = ", ".join(f"({canon(x)},{canon(y)})" for x, y in self.sorted_pairs())
        return "Relation({" + body + "})"


class Cospan:
    __slots__ = ("apex_from", "apex_to")

    def __init__(self, apex_from, apex_to):
        if apex_from.cod != apex_to.cod:
            raise DomainError("cospan legs have different codomains")
        self.apex_from = apex_from
        self.apex_to = apex_to

    @property
    def apex(self):
        return self.apex_from.cod

    def __iter__(self):
        return iter((self.apex_from, self.apex_to))

    def __repr__(self):
        return f"Cospan({self.apex_from!r}, {self.apex_to!r})"


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def classes(self):
        groups = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return list(groups.values())


def pullback(f, g):
    """Pullback of the cospan ``A --f--> C <--g-- B`` as a relation over A x B."""
    if f.cod != g.cod:
        raise DomainError("pullback needs a common codomain")
    fibres = {}
    for b in g.dom:
        fibres.setdefault(g(b), []).append(b)
    pairs = [(a, b) for a in f.dom for b in fibres.get(f(a), ())]
    return Relation(f.dom, g.dom, pairs)


def kernel_pair(f):
    return pullback(f, f)


def pushout(p, q):
    """Pushout of the span ``X <--p-- R --q--> Y``.

    The apex is the quotient of X + Y by the equivalence generated by
    p(r) ~ q(r).  Summands are tagged ``("inl", x)`` and ``("inr", y)``; each
    class is named by the canonically sorted tuple of its tagged members.
    """
    if p.dom != q.dom:
        raise DomainError("pushout needs a common domain")
    tagged = [("inl", x) for x in p.cod] + [("inr", y) for y in q.cod]
    uf = _UnionFind(tagged)
    for r in p.dom:
        uf.union(("inl", p(r)), ("inr", q(r)))
    name_of = {}
    names = []
    for members in uf.classes():
        name = tuple(canonical_sorted(members))
        names.append(name)
        for m in members:
            name_of[m] = name
    order = {t: i for i, t in enumerate(tagged)}
    names.sort(key=lambda n: min(order[m] for m in n))
    apex = FinSet(names)
    i = FinFunction(p.cod, apex, {x: name_of[("inl", x)] for x in p.cod})
    j = FinFunction(q.cod, apex, {y: name_of[("inr", y)] for y in q.cod})
    return Cospan(i, j)


def pushout_of_relation(R):
    p, q = R.projections()
    return pushout(p, q)


def image_factorization(f):
    """Factor ``f`` as a surjection onto its image followed by the inclusion."""
    image = FinSet(f.image())
    cover = FinFunction(f.dom, image, {x: f(x) for x in f.dom})
    mono = FinFunction(image, f.cod, {y: y for y in image})
    return cover, mono


def relation_leq(R, S):
    if R.left != S.left or R.right != S.right:
        raise DomainError("relations live over different carriers")
    return R.pairs <= S.pairs


def equivalence_closure(R):
    if R.left != R.right:
        raise DomainError("equivalence closure needs an endo-relation")
    uf = _UnionFind(R.left.elements)
    for x, y in R.pairs:
        uf.union(x, y)
    pairs = []
    for members in uf.classes():
        pairs.extend((a, b) for a in members for b in members)
    return Relation(R.left, R.right, pairs)


def is_equivalence(R):
    return R.left == R.right and equivalence_closure(R).pairs == R.pairs


def is_difunctional(R):
    """True when xRy, x'Ry and x'Ry' imply xRy' (the shape of every pullback)."""
    succ = {}
    for x, y in R.pairs:
        succ.setdefault(x, set()).add(y)
    pred = {}
    for x, y in R.pairs:
        pred.setdefault(y, set()).add(x)
    for x, ys in succ.items():
        for y in ys:
            for x2 in pred[y]:
                if not succ[x2] <= ys:
                    return False
    return True


def coproduct(A, B):
    """Disjoint union with tagged elements, plus its two injections."""
    S = FinSet([("inl", a) for a in A] + [("inr", b) for b in B])
    inl = FinFunction(A, S, {a: ("inl", a) for a in A})
    inr = FinFunction(B, S, {b: ("inr", b) for b in B})
    return S, inl, inr


def copair(f, g):
    """The map A + B -> C induced by ``f: A -> C`` and ``g: B -> C``."""
    if f.cod != g.cod:
        raise DomainError("copairing needs a common codomain")
    S, _, _ = coproduct(f.dom, g.dom)
    mapping = {("inl", a): f(a) for a in f.dom}
    mapping.update({("inr", b): g(b) for b in g.dom})
    return FinFunction(S, f.cod, mapping)
