"""Labelled transition systems as coalgebras for Pf(L x -)."""
from .errors import DomainError
from .finset import FinSet, Relation, canon, canonical_sorted
from .functors import Coalgebra, LabelledTransitions, lts_labels


def lts(states, labels, transitions):
    """Build an LTS coalgebra from ``(source, label, target)`` triples."""
    states = states if isinstance(states, FinSet) else FinSet(states)
    labels = labels if isinstance(labels, FinSet) else FinSet(labels)
    succ = {s: set() for s in states}
    for s, a, t in transitions:
        if s not in succ or t not in succ:
            raise DomainError(f"transition ({s}, {a}, {t}) leaves the state set")
        if a not in labels:
            raise DomainError(f"unknown label {a!r}")
        succ[s].add((a, t))
    return Coalgebra(LabelledTransitions(labels), states,
                     {s: frozenset(v) for s, v in succ.items()})


def transitions(C):
    return [(s, a, t) for s in C.carrier for a, t in sorted(C(s), key=canon)]


def _require_lts(P):
    if lts_labels(P.functor) is None:
        raise DomainError(f"{P.functor} is not a labelled-transition functor")


def lts_phi_direct(P, R):
    """Milner's refinement step: keep (x, y) when every move of either side
    is matched by an equally labelled move of the other into R."""
    _require_lts(P)
    pairs = R.pairs
    h, k = P.left, P.right
    out = []
    for x in P.X:
        for y in P.Y:
            hx, ky = h(x), k(y)
            forth = all(any(b == a and (x2, y2) in pairs for b, y2 in ky) for a, x2 in hx)
            if not forth:
                continue
            back = all(any(a == b and (x2, y2) in pairs for a, x2 in hx) for b, y2 in ky)
            if back:
                out.append((x, y))
    return Relation(P.X, P.Y, out)


def coarsest_partition(states, succ, labels):
    """Kanellakis-Smolka refinement to the coarsest stable partition.

    ``succ`` maps each state to a set of ``(label, target)`` pairs.  A block
    C is split by a splitter (a, B) into the states with an a-move into B
    and the rest, until no splitter changes anything.
    """
    blocks = [list(states)] if states else []
    changed = True
    while changed:
        changed = False
        for b_idx in range(len(blocks)):
            splitter = set(blocks[b_idx])
            for a in labels:
                pre = {s for s in states
                       if any(lab == a and t in splitter for lab, t in succ[s])}
                for c_idx in range(len(blocks)):
                    C = blocks[c_idx]
                    inside = [s for s in C if s in pre]
                    if inside and len(inside) < len(C):
                        blocks[c_idx] = inside
                        blocks.append([s for s in C if s not in pre])
                        changed = True
    return blocks


def partition_refinement_lts(P):
    """Strong bisimilarity between the two systems, by refining a partition
    of their disjoint union."""
    _require_lts(P)
    labels = list(lts_labels(P.functor))
    states = [("inl", x) for x in P.X] + [("inr", y) for y in P.Y]
    succ = {("inl", x): {(a, ("inl", t)) for a, t in P.left(x)} for x in P.X}
    succ.update({("inr", y): {(a, ("inr", t)) for a, t in P.right(y)} for y in P.Y})
    blocks = coarsest_partition(states, succ, labels)
    out = []
    for block in blocks:
        xs = [s for tag, s in block if tag == "inl"]
        ys = [s for tag, s in block if tag == "inr"]
        out.extend((x, y) for x in xs for y in ys)
    return Relation(P.X, P.Y, out)


def minimize(C):
    """Bisimilarity classes of a single LTS, in carrier order."""
    if lts_labels(C.functor) is None:
        raise DomainError(f"{C.functor} is not a labelled-transition functor")
    succ = {s: set(C(s)) for s in C.carrier}
    blocks = coarsest_partition(list(C.carrier), succ, list(lts_labels(C.functor)))
    order = {s: i for i, s in enumerate(C.carrier)}
    blocks = [sorted(b, key=order.__getitem__) for b in blocks]
    return sorted(blocks, key=lambda b: order[b[0]])


def quotient(C, blocks=None):
    """The minimal LTS: one state per bisimilarity class."""
    blocks = minimize(C) if blocks is None else blocks
    name = {s: f"[{','.join(str(m) for m in b)}]" for b in blocks for s in b}
    states = FinSet([name[b[0]] for b in blocks])
    trans = {(name[s], a, name[t]) for s in C.carrier for a, t in C(s)}
    return lts(states, lts_labels(C.functor), canonical_sorted(trans)), name
