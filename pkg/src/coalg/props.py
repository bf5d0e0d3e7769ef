"""Bounded falsifiers for pullback-style properties of a functor.

For a cospan ``A1 --f--> Z <--g-- A2`` with pullback P, the mediating map

    m : F(P) -> F(A1) x_{F(Z)} F(A2),    t |-> (F(pi1) t, F(pi2) t)

is computed and classified.  A property holds on a corpus
when m has the required shape on every cospan of the corpus.  A positive
verdict is evidence about that corpus only.
"""
from dataclasses import dataclass, field
import enum
import functools
import itertools
import random

from .errors import SizeError
from .finset import (FinFunction, FinSet, Relation, canon, coproduct, copair,
                     pullback)
from .functors import (DEFAULT_CAP, DEFAULT_GRID, _enum, fmap, lifting_witness,
                       object_size)


# Sweeps enumerate F on small carriers only; anything larger is a cap error.
DEFAULT_SWEEP_CAP = 4096


class PropertyName(str, enum.Enum):
    PRESERVES_RELATIONS = "PreservesRelations"
    PRESERVES_PULLBACKS = "PreservesPullbacks"
    PRESERVES_WEAK_PULLBACKS = "PreservesWeakPullbacks"
    COVERS_PULLBACKS = "CoversPullbacks"
    PRESERVES_PULLBACKS_ALONG_MONOS = "PreservesPullbacksAlongMonos"


class KernelVariant(str, enum.Enum):
    WEAKLY_PRESERVES_KERNEL_PAIRS = "WeaklyPreservesKernelPairs"
    COVERS_KERNEL_PAIRS = "CoversKernelPairs"
    PRESERVES_MONOS = "PreservesMonos"


HOLDS = "HoldsOnCorpus"
COUNTEREXAMPLE = "Counterexample"


@dataclass
class Verdict:
    property: str
    status: str
    witness: dict = None
    corpus_size: int = 0
    cap_errors: int = 0
    functor: str = ""

    @property
    def holds(self):
        return self.status == HOLDS

    def to_json(self):
        out = {"functor": self.functor, "property": self.property,
               "status": self.status, "corpusSize": self.corpus_size,
               "capErrors": self.cap_errors}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class MediatingMap:
    source: list
    target: list
    images: dict
    injective: bool
    surjective: bool
    section: dict = None
    unreached: object = None
    collision: tuple = None
    source_size: int = None

    # ``injective`` is None when m is not surjective and F(P) exceeds the cap.

    @property
    def classification(self):
        """One of Iso, SplitEpi, Cover, Mono, Neither.

        Over finite sets a surjection always splits, so SplitEpi and Cover
        name the same maps; ``labels`` reports both.
        """
        if self.injective and self.surjective:
            return "Iso"
        if self.surjective:
            return "SplitEpi"
        if self.injective:
            return "Mono"
        return "Neither"

    @property
    def labels(self):
        out = []
        if self.injective and self.surjective:
            out.append("Iso")
        if self.section is not None:
            out.append("SplitEpi")
        if self.surjective:
            out.append("Cover")
        if self.injective:
            out.append("Mono")
        return out or ["Neither"]

    @property
    def is_split_epi(self):
        return self.section is not None


def _target(F, f, g, cap, grid):
    """The pullback F(A1) x_{F(Z)} F(A2), enumerated under ``cap``."""
    FA1 = _enum(F, f.dom, cap, grid)
    FA2 = _enum(F, g.dom, cap, grid)
    by_image = {}
    for u in FA2:
        by_image.setdefault(fmap(F, g, u), []).append(u)
    size = sum(len(by_image.get(fmap(F, f, s), ())) for s in FA1)
    if size > cap:
        raise SizeError(f"pullback of {F}-images has {size} elements (cap {cap})",
                        count=size, cap=cap)
    return [(s, t) for s in FA1 for t in by_image.get(fmap(F, f, s), ())]


def mediating_map(F, f, g, cap=DEFAULT_CAP, grid=DEFAULT_GRID, method="structural"):
    """Compute and classify the mediating map for the cospan (f, g).

    With ``method="structural"`` F(P) is never enumerated.  A preimage of
    each target pair is searched for directly (the lifting witness of the
    pullback relation), and injectivity of a surjective m is decided by
    comparing the exact sizes of F(P) and of the target.  For distributions
    both sizes count grid points, and witnesses of grid pairs stay on the
    grid.  ``method="enumerate"`` builds m pointwise.
    """
    if method == "enumerate":
        return _mediating_map_enumerated(F, f, g, cap, grid)
    P = pullback(f, g)
    target = _target(F, f, g, cap, grid)
    section = {}
    unreached = None
    for pt in target:
        w = lifting_witness(F, P, *pt)
        if w is None:
            unreached = pt
            break
        section[pt] = w
    surjective = unreached is None
    injective = None
    collision = None
    if surjective:
        injective = object_size(F, len(P), grid)[0] == len(target)
        if not injective:
            collision = _find_collision(F, P, cap, grid)
    else:
        try:
            collision = _find_collision(F, P, cap, grid, strict=True)
            injective = collision is None
        except SizeError:
            pass
    return MediatingMap(source=None, target=target, images=None,
                        injective=injective, surjective=surjective,
                        section=section if surjective else None,
                        unreached=unreached, collision=collision,
                        source_size=object_size(F, len(P), grid)[0])


def _find_collision(F, P, cap, grid, strict=False):
    """Two values of F(P) with the same projections, or None.  A set F(P)
    over the cap is not searched (and raises SizeError when ``strict``)."""
    try:
        elems = _enum(F, P.as_finset(), cap, grid)
    except SizeError:
        if strict:
            raise
        return None
    seen = {}
    for t in elems:
        key = (fmap(F, _first, t), fmap(F, _second, t))
        if key in seen:
            return seen[key], t
        seen[key] = t
    return None


def _first(r):
    return r[0]


def _second(r):
    return r[1]


def _mediating_map_enumerated(F, f, g, cap, grid):
    P = pullback(f, g)
    source = _enum(F, P.as_finset(), cap, grid)
    target = _target(F, f, g, cap, grid)
    images = {}
    preimage = {}
    collision = None
    for t in source:
        m = (fmap(F, _first, t), fmap(F, _second, t))
        images[t] = m
        if m in preimage and collision is None:
            collision = (preimage[m], t)
        preimage.setdefault(m, t)
    unreached = next((pt for pt in target if pt not in preimage), None)
    surjective = unreached is None
    section = None
    if surjective:
        section = {pt: preimage[pt] for pt in target}
    return MediatingMap(source=source, target=target, images=images,
                        injective=collision is None, surjective=surjective,
                        section=section, unreached=unreached, collision=collision,
                        source_size=len(source))


def mediating_function(F, f, g, cap=DEFAULT_CAP, grid=DEFAULT_GRID):
    """The mediating map as a FinFunction between the two enumerated sets."""
    mm = mediating_map(F, f, g, cap, grid, method="enumerate")
    return FinFunction(FinSet(sorted(mm.source, key=canon)),
                       FinSet(sorted(mm.target, key=canon)), mm.images), mm


# -- corpora -----------------------------------------------------------------

def _carrier(prefix, n):
    return FinSet([f"{prefix}{i}" for i in range(n)])


def _maps_up_to_iso(dom_size, Z, prefix):
    """Maps from an n-element set into Z, one per multiset of fibre sizes."""
    out = []
    for counts in itertools.combinations_with_replacement(range(len(Z)), dom_size):
        A = _carrier(prefix, dom_size)
        out.append(FinFunction(A, Z, {a: Z.elements[c] for a, c in zip(A, counts)}))
    return out


def _fibres(f):
    return tuple(sorted(sum(1 for a in f.dom if f(a) == z) for z in f.cod))


@dataclass
class Corpus:
    """Cospans for the pullback properties and spans for relation preservation."""
    cospans: list = field(default_factory=list)
    spans: list = field(default_factory=list)
    derived: list = field(default_factory=list)

    def all_cospans(self):
        return self.cospans + self.derived

    def kernel_cospans(self):
        seen, out = set(), []
        for f, g in self.all_cospans():
            for c in (f, g):
                key = (c.dom, c.cod, frozenset(c.mapping.items()))
                if key not in seen:
                    seen.add(key)
                    out.append((c, c))
        return out

    def mono_maps(self):
        seen, out = set(), []
        for f, g in self.all_cospans():
            for c in (f, g):
                key = (c.dom, c.cod, frozenset(c.mapping.items()))
                if c.is_injective() and key not in seen:
                    seen.add(key)
                    out.append(c)
        return out


def derived_cospans(f, g):
    """Cospans needed to relate covering of (f, g) to its kernel-pair and
    mono-pullback parts: the kernel pair of the copairing [f, g] and the two
    restrictions of that kernel pair along the coproduct injections."""
    S, inl, inr = coproduct(f.dom, g.dom)
    c = copair(f, g)
    K = pullback(c, c)
    Kset = K.as_finset()
    k1 = FinFunction(Kset, S, {r: r[0] for r in Kset})
    first = pullback(k1, inl)
    K1 = FinSet([r for r, _ in first.sorted_pairs()])
    k2 = FinFunction(K1, S, {r: r[1] for r in K1})
    return [(c, c), (k1, inl), (k2, inr)]


def default_corpus(max_size=3, max_cod=2, n_random=20, random_max=4, seed=0,
                   relation_size=2, derive=True):
    """All cospans between carriers of size <= max_size into codomains of
    size <= max_cod (up to isomorphism), plus seeded random cospans."""
    cospans = []
    seen = set()
    for zc in range(0, max_cod + 1):
        Z = _carrier("z", zc)
        for a1 in range(max_size + 1):
            for a2 in range(max_size + 1):
                if zc == 0 and (a1 or a2):
                    continue
                for f in _maps_up_to_iso(a1, Z, "a"):
                    for g in _maps_up_to_iso(a2, Z, "b"):
                        key = _iso_key(f, g)
                        if key in seen:
                            continue
                        seen.add(key)
                        cospans.append((f, g))
    rng = random.Random(seed)
    for _ in range(n_random):
        zc = rng.randint(1, random_max)
        Z = _carrier("z", zc)
        A1 = _carrier("a", rng.randint(0, random_max))
        A2 = _carrier("b", rng.randint(0, random_max))
        f = FinFunction(A1, Z, {a: rng.choice(Z.elements) for a in A1})
        g = FinFunction(A2, Z, {b: rng.choice(Z.elements) for b in A2})
        cospans.append((f, g))
    spans = [pullback(f, g) for f, g in cospans]
    for n1 in range(relation_size + 1):
        for n2 in range(relation_size + 1):
            A, B = _carrier("a", n1), _carrier("b", n2)
            full = [(a, b) for a in A for b in B]
            for bits in range(2 ** len(full)):
                spans.append(Relation(A, B, [p for k, p in enumerate(full) if bits >> k & 1]))
    derived = []
    if derive:
        for f, g in cospans:
            derived.extend(derived_cospans(f, g))
    return Corpus(cospans=cospans, spans=spans, derived=derived)


def _iso_key(f, g):
    """Isomorphism class of a cospan of maps given by fibre counts."""
    Z = f.cod
    pairs = [(sum(1 for a in f.dom if f(a) == z), sum(1 for b in g.dom if g(b) == z)) for z in Z]
    return (len(f.dom), len(g.dom), tuple(sorted(pairs)))


# -- sweeps ------------------------------------------------------------------

def _describe_map(f):
    return {"dom": [canon(a) for a in f.dom], "cod": [canon(z) for z in f.cod],
            "map": {canon(a): canon(f(a)) for a in f.dom}}


def _witness(F, f, g, mm, kind):
    w = {"cospan": {"left": _describe_map(f), "right": _describe_map(g)}, "kind": kind}
    if kind == "unreached":
        s, t = mm.unreached
        w["element"] = [canon(s), canon(t)]
    elif mm.collision is not None:
        a, b = mm.collision
        w["preimages"] = [canon(a), canon(b)]
        w["image"] = [canon(fmap(F, _first, a)), canon(fmap(F, _second, a))]
    else:
        # F(P) is too large to list: the size mismatch itself is the witness
        w["sourceSize"] = mm.source_size
        w["targetSize"] = len(mm.target)
    return w


_REQUIRES = {
    PropertyName.PRESERVES_PULLBACKS: ("iso", False),
    PropertyName.PRESERVES_WEAK_PULLBACKS: ("split", False),
    PropertyName.COVERS_PULLBACKS: ("cover", False),
    PropertyName.PRESERVES_PULLBACKS_ALONG_MONOS: ("iso", True),
}


def _mm_ok(mm, need):
    if need == "iso":
        return mm.injective and mm.surjective
    if need == "split":
        return mm.is_split_epi
    return mm.surjective


def _failure_kind(mm, need):
    if need == "iso" and mm.surjective:
        return "collision"
    return "unreached"


@functools.lru_cache(maxsize=1024)
def _cached_mediating_map(F, f, g, cap, grid):
    # the pullback properties share their mediating maps
    return mediating_map(F, f, g, cap, grid)


def _sweep(F, items, need, cap, grid, name):
    failures = []
    cap_errors = 0
    checked = 0
    for idx, (f, g) in enumerate(items):
        try:
            mm = _cached_mediating_map(F, f, g, cap, grid)
        except SizeError:
            cap_errors += 1
            continue
        checked += 1
        if not _mm_ok(mm, need):
            failures.append((idx, f, g, mm))
    status = HOLDS if not failures else COUNTEREXAMPLE
    witness = None
    if failures:
        idx, f, g, mm = failures[0]
        witness = _witness(F, f, g, mm, _failure_kind(mm, need))
        witness["corpusIndex"] = idx
        witness["failures"] = len(failures)
    return Verdict(property=name, status=status, witness=witness,
                   corpus_size=len(items), cap_errors=cap_errors, functor=str(F))


def _relations_sweep(F, spans, cap, grid):
    cap_errors = 0
    for idx, R in enumerate(spans):
        try:
            elems = _enum(F, R.as_finset(), cap, grid)
        except SizeError:
            cap_errors += 1
            continue
        seen = {}
        for t in elems:
            key = (fmap(F, lambda r: r[0], t), fmap(F, lambda r: r[1], t))
            if key in seen:
                witness = {"relation": [[canon(x), canon(y)] for x, y in R.sorted_pairs()],
                           "preimages": [canon(seen[key]), canon(t)],
                           "image": [canon(key[0]), canon(key[1])],
                           "corpusIndex": idx}
                return Verdict(PropertyName.PRESERVES_RELATIONS.value, COUNTEREXAMPLE,
                               witness, len(spans), cap_errors, str(F))
            seen[key] = t
    return Verdict(PropertyName.PRESERVES_RELATIONS.value, HOLDS, None,
                   len(spans), cap_errors, str(F))


def _restrict_monos(items):
    out = []
    for f, g in items:
        if f.is_injective():
            out.append((f, g))
        elif g.is_injective():
            out.append((g, f))
    return out


def check_property(F, prop, corpus=None, cap=DEFAULT_SWEEP_CAP, grid=DEFAULT_GRID):
    """Sweep ``corpus`` for a counterexample to ``prop``."""
    prop = PropertyName(prop)
    corpus = corpus if corpus is not None else default_corpus()
    if prop is PropertyName.PRESERVES_RELATIONS:
        return _relations_sweep(F, corpus.spans, cap, grid)
    need, monos_only = _REQUIRES[prop]
    items = corpus.all_cospans()
    if monos_only:
        items = _restrict_monos(items)
    return _sweep(F, items, need, cap, grid, prop.value)


def check_kernel_pair_variants(F, variant, corpus=None, cap=DEFAULT_SWEEP_CAP, grid=DEFAULT_GRID):
    """The kernel-pair weakenings of the pullback properties.

    Kernel-pair variants sweep the cospans (c, c) for every leg c in the
    corpus; PreservesMonos checks that F(m) is injective for every injective
    leg m.
    """
    variant = KernelVariant(variant)
    corpus = corpus if corpus is not None else default_corpus()
    if variant is KernelVariant.PRESERVES_MONOS:
        return _monos_sweep(F, corpus.mono_maps(), cap, grid)
    need = "split" if variant is KernelVariant.WEAKLY_PRESERVES_KERNEL_PAIRS else "cover"
    return _sweep(F, corpus.kernel_cospans(), need, cap, grid, variant.value)


def _monos_sweep(F, monos, cap, grid):
    cap_errors = 0
    for idx, m in enumerate(monos):
        try:
            elems = _enum(F, m.dom, cap, grid)
        except SizeError:
            cap_errors += 1
            continue
        images = {}
        for t in elems:
            u = fmap(F, m, t)
            if u in images:
                witness = {"map": _describe_map(m), "preimages": [canon(images[u]), canon(t)],
                           "corpusIndex": idx}
                return Verdict(KernelVariant.PRESERVES_MONOS.value, COUNTEREXAMPLE, witness,
                               len(monos), cap_errors, str(F))
            images[u] = t
    return Verdict(KernelVariant.PRESERVES_MONOS.value, HOLDS, None, len(monos),
                   cap_errors, str(F))


def check_all(F, corpus=None, cap=DEFAULT_SWEEP_CAP, grid=DEFAULT_GRID):
    """Every property and kernel-pair variant, keyed by name."""
    corpus = corpus if corpus is not None else default_corpus()
    out = {}
    for prop in PropertyName:
        out[prop.value] = check_property(F, prop, corpus, cap, grid)
    for variant in KernelVariant:
        out[variant.value] = check_kernel_pair_variants(F, variant, corpus, cap, grid)
    return out


_PROFILE_CACHE = {}


def functor_profile(F, cap=DEFAULT_SWEEP_CAP, grid=DEFAULT_GRID):
    """Cached ``check_all`` on the default corpus."""
    key = (F, cap, grid)
    if key not in _PROFILE_CACHE:
        _PROFILE_CACHE[key] = check_all(F, default_corpus(), cap, grid)
    return _PROFILE_CACHE[key]


def replay_witness(F, witness, cap=DEFAULT_CAP, grid=DEFAULT_GRID):
    """Rebuild the cospan stored in a verdict witness and recompute m."""
    def build(desc):
        dom = FinSet(desc["dom"])
        cod = FinSet(desc["cod"])
        return FinFunction(dom, cod, desc["map"])
    f = build(witness["cospan"]["left"])
    g = build(witness["cospan"]["right"])
    return mediating_map(F, f, g, cap, grid)
