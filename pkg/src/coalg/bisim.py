"""The four notions of bisimulation between two coalgebras, and how they relate.

For coalgebras ``h: X -> F X`` and ``k: Y -> F Y`` and a relation R over
X x Y:

* AM-bisimulation: R itself carries a coalgebra structure making both
  projections homomorphisms.
* HJ-bisimulation: R is contained in ``phi_hj(R)``, the pairs whose
  behaviours are related by the lifted relation.
* AM-precongruence: R is contained in ``phi_am(R)``, the pairs whose
  behaviours agree once pushed into the pushout of R.
* kernel bisimulation: R is the pullback of a cospan of homomorphisms.
"""
from dataclasses import dataclass, field

from .errors import DomainError
from .finset import (FinFunction, FinSet, Relation, canon, canonical_sorted,
                     equivalence_closure, is_difunctional, is_equivalence,
                     pullback, pushout_of_relation, relation_leq)
from .functors import (DEFAULT_CAP, DEFAULT_GRID, Coalgebra, _enum, fmap,
                       lifted_pairs, lifting_witness)


@dataclass(frozen=True)
class CoalgebraPair:
    functor: object
    left: Coalgebra
    right: Coalgebra

    def __post_init__(self):
        if self.left.functor != self.functor or self.right.functor != self.functor:
            raise DomainError("both coalgebras must be for the same functor")

    @classmethod
    def of(cls, left, right=None):
        right = left if right is None else right
        return cls(left.functor, left, right)

    @property
    def X(self):
        return self.left.carrier

    @property
    def Y(self):
        return self.right.carrier

    def relation(self, pairs=()):
        return Relation(self.X, self.Y, pairs)

    def full(self):
        return Relation.full(self.X, self.Y)

    def empty(self):
        return Relation.empty(self.X, self.Y)


def _check_over(P, R):
    if R.left != P.X or R.right != P.Y:
        raise DomainError("relation is not over the carriers of the pair")


# -- refinement operators ----------------------------------------------------

def phi_hj(P, R, cap=DEFAULT_CAP, method="structural", grid=DEFAULT_GRID):
    """Pairs (x, y) with (h x, k y) in the lifting of R.

    ``method="structural"`` decides lifting membership exactly per pair;
    ``method="enumerate"`` materialises the lifting by enumerating F(R), as
    in its definition (bounded by ``cap``; distributions only on the grid).
    """
    _check_over(P, R)
    h, k, F = P.left, P.right, P.functor
    if method == "enumerate":
        L = lifted_pairs(F, R, cap, grid)
        return P.relation((x, y) for x in P.X for y in P.Y if (h(x), k(y)) in L)
    if method != "structural":
        raise ValueError(f"unknown method {method!r}")
    return P.relation((x, y) for x in P.X for y in P.Y
                      if lifting_witness(F, R, h(x), k(y)) is not None)


def phi_am(P, R, cap=DEFAULT_CAP):
    """Pairs (x, y) with F(i)(h x) == F(j)(k y), where (i, j) is the pushout
    cospan of R's span."""
    _check_over(P, R)
    F = P.functor
    i, j = pushout_of_relation(R)
    hx = {x: fmap(F, i, P.left(x)) for x in P.X}
    ky = {y: fmap(F, j, P.right(y)) for y in P.Y}
    return P.relation((x, y) for x in P.X for y in P.Y if hx[x] == ky[y])


# -- the four checkers -------------------------------------------------------

def is_am_bisimulation(P, R, cap=DEFAULT_CAP, method="structural", grid=DEFAULT_GRID):
    """A coalgebra structure on R making both projections homomorphisms, or None.

    The structure is returned as a dict pair -> value of F(R).  Each pair is
    searched independently, which is complete because the homomorphism
    conditions do not couple different pairs.
    """
    _check_over(P, R)
    F, h, k = P.functor, P.left, P.right
    first, second = (lambda r: r[0]), (lambda r: r[1])
    witness = {}
    if method == "enumerate":
        elems = _enum(F, R.as_finset(), cap, grid)
        index = {}
        for t in elems:
            index.setdefault((fmap(F, first, t), fmap(F, second, t)), t)
        for x, y in R.sorted_pairs():
            t = index.get((h(x), k(y)))
            if t is None:
                return None
            witness[(x, y)] = t
        return witness
    for x, y in R.sorted_pairs():
        t = lifting_witness(F, R, h(x), k(y))
        if t is None:
            return None
        witness[(x, y)] = t
    return witness


def check_am_witness(P, R, witness):
    """Verify that ``witness`` is a coalgebra on R lifting both projections."""
    F = P.functor
    structure = Coalgebra(F, R.as_finset(), witness)
    p, q = R.projections()
    from .functors import is_homomorphism
    return is_homomorphism(p, structure, P.left) and is_homomorphism(q, structure, P.right)


def is_hj_bisimulation(P, R, cap=DEFAULT_CAP, method="structural", grid=DEFAULT_GRID):
    return relation_leq(R, phi_hj(P, R, cap, method, grid))


def is_am_precongruence(P, R, cap=DEFAULT_CAP):
    return relation_leq(R, phi_am(P, R, cap))


@dataclass
class KernelWitness:
    apex: FinSet
    left_leg: FinFunction
    right_leg: FinFunction
    coalgebra: Coalgebra

    def to_json(self):
        return {"apex": [canon(z) for z in self.apex],
                "left": {canon(x): canon(self.left_leg(x)) for x in self.left_leg.dom},
                "right": {canon(y): canon(self.right_leg(y)) for y in self.right_leg.dom},
                "structure": {canon(z): canon(self.coalgebra(z)) for z in self.apex}}


@dataclass
class KernelVerdict:
    """Outcome of a bounded kernel-bisimulation search.

    ``found`` false means only that no cospan with apex size <= ``bound``
    was found.
    """
    found: bool
    bound: int
    phase: int = None
    witness: KernelWitness = None

    @property
    def status(self):
        return "Yes" if self.found else "NotFoundWithinBound"

    def to_json(self):
        out = {"status": self.status, "bound": self.bound}
        if self.found:
            out["phase"] = self.phase
            out["witness"] = self.witness.to_json()
        return out


def _forced_structure(F, legs, Z):
    """The only structure on Z making every (coalgebra, leg) a homomorphism,
    restricted to the images of the legs; None when the constraints clash."""
    z = {}
    for coalg, leg in legs:
        for x in coalg.carrier:
            value = fmap(F, leg, coalg(x))
            target = leg(x)
            if target in z and z[target] != value:
                return None
            z[target] = value
    if set(z) != set(Z.elements):
        return None
    return Coalgebra(F, Z, z, check=False)


def _cospan_witness(P, Z, i, j, R):
    z = _forced_structure(P.functor, [(P.left, i), (P.right, j)], Z)
    if z is None:
        return None
    if pullback(i, j).pairs != R.pairs:
        return None
    return KernelWitness(Z, i, j, z)


def _set_partitions(items, max_blocks):
    """Set partitions of ``items`` with at most ``max_blocks`` blocks."""
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in _set_partitions(rest, max_blocks):
        for k in range(len(part)):
            yield part[:k] + [[head] + part[k]] + part[k + 1:]
        if len(part) < max_blocks:
            yield [[head]] + part


def is_kernel_bisimulation(P, R, bound=None, cap=DEFAULT_CAP):
    """Search for a cospan of homomorphisms whose pullback is exactly R.

    Phase 1 tries the pushout of R.  Phase 2 searches the remaining
    cospans.  Only the jointly-surjective part of a cospan matters (its image
    is a subcoalgebra with the same pullback), and on that part the
    structure is forced, so Phase 2 ranges over the ways of grouping states
    into apex points: the related states are grouped by the connected
    components of R, the unrelated states of each side are partitioned
    freely.  With the default bound |X| + |Y| the search is exhaustive.
    """
    _check_over(P, R)
    if bound is None:
        bound = len(P.X) + len(P.Y)
    i, j = pushout_of_relation(R)
    if len(i.cod) <= bound:
        w = _cospan_witness(P, i.cod, i, j, R)
        if w is not None:
            return KernelVerdict(True, bound, 1, w)
    if not is_difunctional(R):
        return KernelVerdict(False, bound)
    related_x = {x for x, _ in R.pairs}
    related_y = {y for _, y in R.pairs}
    # pushout classes holding related states are the connected components of R
    base_blocks = [list(name) for name in i.cod
                   if any(tag == "inl" and x in related_x for tag, x in name)]
    free_x = [x for x in P.X if x not in related_x]
    free_y = [y for y in P.Y if y not in related_y]
    room = bound - len(base_blocks)
    if room < 0:
        return KernelVerdict(False, bound)
    for part_x in _set_partitions(free_x, room):
        for part_y in _set_partitions(free_y, room - len(part_x)):
            blocks = ([tuple(b) for b in base_blocks]
                      + [tuple(("inl", x) for x in b) for b in part_x]
                      + [tuple(("inr", y) for y in b) for b in part_y])
            names = [tuple(canonical_sorted(b)) for b in blocks]
            Z = FinSet(names)
            where = {m: n for n in names for m in n}
            li = FinFunction(P.X, Z, {x: where[("inl", x)] for x in P.X})
            rj = FinFunction(P.Y, Z, {y: where[("inr", y)] for y in P.Y})
            w = _cospan_witness(P, Z, li, rj, R)
            if w is not None:
                return KernelVerdict(True, bound, 2, w)
    return KernelVerdict(False, bound)


def check_kernel_witness(P, R, w):
    from .functors import is_homomorphism
    return (is_homomorphism(w.left_leg, P.left, w.coalgebra)
            and is_homomorphism(w.right_leg, P.right, w.coalgebra)
            and pullback(w.left_leg, w.right_leg).pairs == R.pairs)


# -- equivalence-relation variant --------------------------------------------

@dataclass
class EqualLegsResult:
    raw: KernelVerdict
    closed: KernelVerdict
    closure: Relation
    raw_is_equivalence: bool

    def to_json(self):
        return {"raw": self.raw.to_json(), "closed": self.closed.to_json(),
                "rawIsEquivalence": self.raw_is_equivalence,
                "closure": [[canon(a), canon(b)] for a, b in self.closure.sorted_pairs()]}


def _quotient_witness(C, E):
    classes = {}
    for a, b in E.sorted_pairs():
        classes.setdefault(a, set()).add(b)
    name_of = {x: tuple(canonical_sorted(classes[x])) for x in C.carrier}
    names = []
    for x in C.carrier:
        if name_of[x] not in names:
            names.append(name_of[x])
    Z = FinSet(names)
    q = FinFunction(C.carrier, Z, name_of)
    z = _forced_structure(C.functor, [(C, q)], Z)
    if z is None:
        return None
    return KernelWitness(Z, q, q, z)


def behavioural_equivalence_equal_legs(C, R, bound=None, cap=DEFAULT_CAP):
    """Is R the kernel pair of a single homomorphism out of ``C``?

    Any such homomorphism factors as the quotient by R followed by a mono,
    and F maps monos with non-empty domain to monos, so the quotient is the
    only candidate worth trying; the search is therefore exhaustive.  The
    result is reported for R as given and for its equivalence closure.
    """
    if R.left != C.carrier or R.right != C.carrier:
        raise DomainError("relation is not over the coalgebra's carrier")
    if bound is None:
        bound = len(C.carrier)
    closure = equivalence_closure(R)
    w = _quotient_witness(C, closure)
    if w is not None and len(w.apex) > bound:
        w = None
    closed = KernelVerdict(w is not None, bound, 1 if w else None, w)
    equiv = is_equivalence(R)
    raw = closed if equiv else KernelVerdict(False, bound)
    return EqualLegsResult(raw=raw, closed=closed, closure=closure, raw_is_equivalence=equiv)


# -- classification ----------------------------------------------------------

@dataclass
class Classification:
    am: bool
    hj: bool
    precongruence: bool
    kernel: KernelVerdict
    am_witness: dict = None
    properties: dict = field(default_factory=dict)
    checked: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def consistent(self):
        return not self.violations

    def flags(self):
        return {"amBisim": self.am, "hjBisim": self.hj,
                "amPrecongruence": self.precongruence,
                "kernelBisim": self.kernel.status}

    def to_json(self):
        return {"flags": self.flags(), "kernel": self.kernel.to_json(),
                "properties": self.properties, "implicationsChecked": sorted(self.checked),
                "violations": self.violations, "consistent": self.consistent}


# (label, premise, conclusion, functor property it needs or None)
IMPLICATIONS = [
    ("1", "am", "hj", None),
    ("2", "hj", "precongruence", None),
    ("4", "kernel", "am", "PreservesWeakPullbacks"),
    ("5", "kernel", "hj", "CoversPullbacks"),
    ("6", "kernel", "precongruence", "PreservesPullbacksAlongMonos"),
    ("7i", "hj", "am", "EveryEpiSplits"),
    ("7ii", "hj", "am", "PreservesRelations"),
]


def classify_relation(P, R, bound=None, cap=DEFAULT_CAP, profile=None, grid=DEFAULT_GRID):
    """Run all four checkers on R and test the implications between them.

    ``profile`` maps property names to verdicts (as from
    ``props.functor_profile``); it decides which conditional implications
    apply.  Every epi of finite sets splits, so that condition always holds.
    """
    if profile is None:
        from .props import functor_profile
        profile = functor_profile(P.functor, grid=grid)
    statuses = {name: v.status for name, v in profile.items()}
    witness = is_am_bisimulation(P, R, cap)
    flags = {
        "am": witness is not None,
        "hj": is_hj_bisimulation(P, R, cap),
        "precongruence": is_am_precongruence(P, R, cap),
    }
    kernel = is_kernel_bisimulation(P, R, bound, cap)
    flags["kernel"] = kernel.found
    result = Classification(am=flags["am"], hj=flags["hj"],
                            precongruence=flags["precongruence"], kernel=kernel,
                            am_witness=witness, properties=statuses)
    for label, premise, conclusion, needs in IMPLICATIONS:
        if needs is None or needs == "EveryEpiSplits":
            applies = True
        else:
            applies = statuses.get(needs) == "HoldsOnCorpus"
        if not applies:
            continue
        result.checked.append(label)
        if flags[premise] and not flags[conclusion]:
            result.violations.append({"item": label, "premise": premise,
                                      "conclusion": conclusion, "requires": needs,
                                      "relation": [[canon(x), canon(y)]
                                                   for x, y in R.sorted_pairs()]})
    if flags["precongruence"]:
        result.checked.append("3")
        i, j = pushout_of_relation(R)
        R2 = pullback(i, j)
        if not (relation_leq(R, R2) and is_am_precongruence(P, R2, cap)
                and is_kernel_bisimulation(P, R2, bound, cap).found):
            result.violations.append({"item": "3", "premise": "precongruence",
                                      "conclusion": "contained in a kernel precongruence",
                                      "requires": None,
                                      "relation": [[canon(x), canon(y)]
                                                   for x, y in R.sorted_pairs()]})
    return result
