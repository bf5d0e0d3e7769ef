import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from coalg.corpus import Empty, random_value, standard_functors
from coalg.errors import ShapeError, SizeError
from coalg.finset import FinFunction, FinSet, Relation, relation_leq
from coalg.functors import (AtMostTwoOfThree, Coalgebra, Compose, Constant,
                            Coproduct, FinPowerset, Identity, Inj,
                            LabelledTransitions, Power, Product, SubDist,
                            SubDistribution, check_value, eval_morphism,
                            eval_object, fmap, lifting_witness, object_size,
                            relation_lifting, transport_plan)

from oracles import count_values, fibre_sum, lts_subsets, subsets

BOOL = FinSet(["0", "1"])

SMALL_FUNCTORS = [
    Identity(),
    Constant(BOOL),
    Constant(FinSet([])),
    Product(Identity(), Identity()),
    Coproduct(Constant(FinSet(["nil"])), Power(Identity(), 2)),
    Power(Identity(), 0),
    FinPowerset(),
    LabelledTransitions(["a", "b"]),
    SubDistribution(),
    AtMostTwoOfThree(),
    Compose(FinPowerset(), Product(Constant(BOOL), Identity())),
    Compose(SubDistribution(), Coproduct(Identity(), Constant(FinSet(["stop"])))),
    FinPowerset(FinPowerset()),
]


def carrier(n, prefix="x"):
    return FinSet([f"{prefix}{i}" for i in range(n)])


def test_eval_object_examples():
    assert set(eval_object(Identity(), FinSet([0, 1]))) == {0, 1}
    assert len(eval_object(FinPowerset(), FinSet([0, 1]))) == 4
    got = set(eval_object(LabelledTransitions(["a"]), FinSet(["x"])))
    assert got == {frozenset(), frozenset({("a", "x")})}
    assert got == lts_subsets(["a"], ["x"])


@pytest.mark.parametrize("F", SMALL_FUNCTORS, ids=str)
def test_eval_object_counts_match_formula(F):
    for n in range(0, 3):
        X = carrier(n)
        elems = list(eval_object(F, X, cap=10**6))
        assert len(elems) == len(set(elems)) == count_values(F, n)
        assert object_size(F, n) == (count_values(F, n), True)
        for t in elems:
            check_value(F, X, t)


def test_eval_object_lts_matches_subset_oracle():
    for n in range(3):
        X = carrier(n)
        assert set(eval_object(LabelledTransitions(["a", "b"]), X)) == lts_subsets(["a", "b"], X)


def test_eval_object_is_deterministic():
    X = carrier(3)
    for F in SMALL_FUNCTORS:
        assert eval_object(F, X).elements == eval_object(F, X).elements


def test_eval_object_cap_raises_with_count():
    F = LabelledTransitions(["a", "b"])
    with pytest.raises(SizeError) as err:
        eval_object(F, carrier(9), cap=200_000)
    assert err.value.count == 2 ** 18 and err.value.exact


def test_cap_on_tower_reports_lower_bound():
    F = FinPowerset(FinPowerset(FinPowerset()))
    with pytest.raises(SizeError) as err:
        eval_object(F, carrier(5), cap=1000)
    assert err.value.count > 1000 and not err.value.exact


def test_eval_morphism_examples():
    star = FinSet(["*"])
    collapse = FinFunction(FinSet([0, 1]), star, {0: "*", 1: "*"})
    assert eval_morphism(FinPowerset(), collapse, frozenset({0, 1})) == frozenset({"*"})
    d = SubDist({0: Fraction(1, 3), 1: Fraction(1, 3)})
    out = eval_morphism(SubDistribution(), collapse, d)
    assert out == SubDist({"*": Fraction(2, 3)})
    assert out.as_dict() == fibre_sum(collapse, d)


def test_eval_morphism_rejects_malformed_values():
    f = FinFunction.identity(FinSet([0, 1]))
    with pytest.raises(ShapeError):
        eval_morphism(AtMostTwoOfThree(), f, (0, 1, 2))
    with pytest.raises(ShapeError):
        eval_morphism(Product(Identity(), Identity()), f, (0,))
    with pytest.raises(ShapeError):
        eval_morphism(FinPowerset(), f, 0)


def test_subdist_invariants():
    with pytest.raises(ValueError):
        SubDist({"a": Fraction(2, 3), "b": Fraction(1, 2)})
    with pytest.raises(ValueError):
        SubDist({"a": Fraction(-1, 3)})
    d = SubDist({"a": Fraction(1, 2), "b": Fraction(0)})
    assert list(d.support) == ["a"]
    assert d == SubDist({"a": Fraction(1, 2)})
    assert hash(d) == hash(SubDist({"a": Fraction(1, 2)}))


def _sample_function(rng, dom, n_cod, prefix):
    cod = carrier(n_cod, prefix)
    return FinFunction(dom, cod, {x: rng.choice(cod.elements) for x in dom})


@pytest.mark.parametrize("F", SMALL_FUNCTORS, ids=str)
def test_functor_laws_on_samples(F):
    rng = random.Random(7)
    for _ in range(150):
        X = carrier(rng.randint(1, 3))
        try:
            t = random_value(F, X, rng)
        except Empty:
            continue
        f = _sample_function(rng, X, rng.randint(1, 3), "y")
        g = _sample_function(rng, f.cod, rng.randint(1, 3), "z")
        assert fmap(F, FinFunction.identity(X), t) == t
        assert fmap(F, f.then(g), t) == fmap(F, g, fmap(F, f, t))
        check_value(F, f.cod, fmap(F, f, t))


def test_relation_lifting_examples():
    X, Y = carrier(2), carrier(2, "y")
    R = Relation(X, Y, [("x0", "y1")])
    assert relation_lifting(Identity(), R).pairs == R.pairs
    Rx = Relation(FinSet(["x"]), FinSet(["y"]), [("x", "y")])
    L = relation_lifting(FinPowerset(), Rx)
    assert L.pairs == {(frozenset(), frozenset()), (frozenset({"x"}), frozenset({"y"}))}


@pytest.mark.parametrize("F", SMALL_FUNCTORS, ids=str)
def test_lifting_of_diagonal_is_diagonal(F):
    X = carrier(2)
    L = relation_lifting(F, Relation.diagonal(X))
    FX = eval_object(F, X)
    assert L.pairs == {(t, t) for t in FX}


@pytest.mark.parametrize("F", SMALL_FUNCTORS, ids=str)
def test_structural_lifting_agrees_with_enumeration(F):
    # every relation between carriers of size <= 2; for distributions the
    # enumerated lifting is restricted to grid points on both sides
    for n in (1, 2):
        for m in (1, 2):
            X, Y = carrier(n), carrier(m, "y")
            full = [(x, y) for x in X for y in Y]
            FX, FY = eval_object(F, X), eval_object(F, Y)
            for S in subsets(full):
                R = Relation(X, Y, S)
                L = relation_lifting(F, R).pairs
                for s in FX:
                    for t in FY:
                        w = lifting_witness(F, R, s, t)
                        assert (w is not None) == ((s, t) in L), (R, s, t)
                        if w is not None:
                            assert fmap(F, lambda r: r[0], w) == s
                            assert fmap(F, lambda r: r[1], w) == t
                            check_value(F, R.as_finset(), w)


def test_lifting_is_monotone_on_corpus_relations():
    F = LabelledTransitions(["a"])
    X, Y = carrier(2), carrier(2, "y")
    full = [(x, y) for x in X for y in Y]
    lifts = {S: relation_lifting(F, Relation(X, Y, S)) for S in subsets(full)}
    for S in lifts:
        for T in lifts:
            if S <= T:
                assert relation_leq(lifts[S], lifts[T])


@pytest.mark.parametrize("F", SMALL_FUNCTORS, ids=str)
def test_lifting_of_full_relation_projects_onto_images(F):
    X, Y = carrier(2), carrier(1, "y")
    R = Relation.full(X, Y)
    L = relation_lifting(F, R)
    p, q = R.projections()
    FR = eval_object(F, R.as_finset())
    assert {s for s, _ in L.pairs} == {fmap(F, p, t) for t in FR}
    assert {t for _, t in L.pairs} == {fmap(F, q, t) for t in FR}


def test_transport_plan_exact():
    third = Fraction(1, 3)
    plan = transport_plan({"a": 2 * third, "b": third}, {"c": third, "d": 2 * third},
                          [("a", "c"), ("a", "d"), ("b", "d")])
    assert plan is not None
    assert sum(v for (s, _), v in plan.items() if s == "a") == 2 * third
    assert sum(v for (_, t), v in plan.items() if t == "c") == third
    assert transport_plan({"a": third}, {"c": third}, []) is None


def test_coalgebra_validates_structure():
    X = FinSet(["s"])
    Coalgebra(Identity(), X, {"s": "s"})
    with pytest.raises(ShapeError):
        Coalgebra(Identity(), X, {"s": "t"})


# -- conservation and closure under sampled morphism actions -----------------

@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_subdistribution_mass_is_conserved(seed):
    rng = random.Random(seed)
    X = carrier(rng.randint(1, 4))
    d = random_value(SubDistribution(), X, rng)
    f = _sample_function(rng, X, rng.randint(1, 3), "y")
    out = fmap(SubDistribution(), f, d)
    assert out.mass == d.mass
    assert out.as_dict() == fibre_sum(f, d)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_triples_stay_within_two_distinct(seed):
    rng = random.Random(seed)
    X = carrier(rng.randint(1, 4))
    t = random_value(AtMostTwoOfThree(), X, rng)
    f = _sample_function(rng, X, rng.randint(1, 4), "y")
    u = fmap(AtMostTwoOfThree(), f, t)
    assert len(set(u)) <= 2
    assert u == tuple(f(a) for a in t)


def test_injections_compare_by_tag_and_value():
    assert Inj(0, "a") != Inj(1, "a")
    assert Inj(0, "a") == Inj(0, "a")
    with pytest.raises(ValueError):
        Inj(2, "a")


def test_standard_functors_are_well_formed():
    for F in standard_functors().values():
        assert object_size(F, 2)[0] == len(eval_object(F, carrier(2)))
