import itertools

import pytest

from coalg.corpus import standard_functors
from coalg.errors import SizeError
from coalg.finset import FinFunction, FinSet, pullback
from coalg.functors import (AtMostTwoOfThree, Compose, Constant, Coproduct,
                            FinPowerset, Identity, LabelledTransitions,
                            Product, SubDistribution, eval_object, fmap,
                            relation_lifting)
from coalg.props import (COUNTEREXAMPLE, HOLDS, KernelVariant, PropertyName,
                         check_all, check_kernel_pair_variants, check_property,
                         default_corpus, functor_profile, mediating_function,
                         mediating_map, replay_witness)

CORPUS = default_corpus()
SWEPT = dict(standard_functors(), df=SubDistribution(), id=Identity())


def small_cospans(limit=4, legs=3):
    """Corpus cospans with small legs whose pullback has at most ``limit`` elements."""
    return [(f, g) for f, g in CORPUS.all_cospans()
            if len(f.dom) <= legs and len(g.dom) <= legs and len(pullback(f, g)) <= limit]


def constant_cospan():
    one = FinSet(["*"])
    f = FinFunction(FinSet(["a", "a'"]), one, {"a": "*", "a'": "*"})
    g = FinFunction(FinSet(["b", "b'"]), one, {"b": "*", "b'": "*"})
    return f, g


def test_corpus_shape():
    sizes = {(len(f.dom), len(g.dom), len(f.cod)) for f, g in CORPUS.cospans[:-20]}
    assert max(a for a, _, _ in sizes) == 3 and max(z for _, _, z in sizes) == 2
    assert len(CORPUS.cospans) - 20 == len(
        {(len(f.dom), len(g.dom), tuple(sorted(
            (sum(f(a) == z for a in f.dom), sum(g(b) == z for b in g.dom)) for z in f.cod)))
         for f, g in CORPUS.cospans[:-20]})


def test_identity_mediating_map_is_iso_everywhere():
    for f, g in CORPUS.all_cospans():
        assert mediating_map(Identity(), f, g).classification == "Iso"


def test_product_of_identities_preserves_pullbacks():
    F = Product(Identity(), Identity())
    for f, g in CORPUS.cospans:
        assert mediating_map(F, f, g).classification == "Iso"


def test_triples_fail_on_constant_cospan():
    f, g = constant_cospan()
    mm = mediating_map(AtMostTwoOfThree(), f, g)
    assert not mm.surjective
    s, t = mm.unreached
    # the unreached pair pairs two triples whose position-wise pairing has
    # three distinct entries
    assert len(set(zip(s, t))) == 3
    oracle = mediating_map(AtMostTwoOfThree(), f, g, method="enumerate")
    images = set(oracle.images.values())
    assert (s, t) not in images
    assert mm.classification == "Neither" or mm.classification == "Mono"
    assert "Cover" not in mm.labels and "SplitEpi" not in mm.labels


@pytest.mark.parametrize("name", sorted(SWEPT))
def test_structural_mediating_map_agrees_with_enumeration(name):
    F = SWEPT[name]
    for f, g in small_cospans():
        fast = mediating_map(F, f, g, cap=4096)
        slow = mediating_map(F, f, g, cap=4096, method="enumerate")
        assert fast.surjective == slow.surjective
        if fast.injective is not None:
            assert fast.injective == slow.injective
        assert sorted(map(str, fast.target)) == sorted(map(str, slow.target))
        assert fast.source_size == len(slow.source)
        assert fast.labels == slow.labels


@pytest.mark.parametrize("name", sorted(SWEPT))
def test_sections_are_sections(name):
    F = SWEPT[name]
    first, second = (lambda r: r[0]), (lambda r: r[1])
    for f, g in CORPUS.all_cospans()[:120]:
        try:
            mm = mediating_map(F, f, g, cap=4096)
        except SizeError:
            continue
        if mm.section is None:
            continue
        for (s, t), w in mm.section.items():
            assert fmap(F, first, w) == s and fmap(F, second, w) == t


def test_mediating_function_is_a_finfunction():
    f, g = constant_cospan()
    m, mm = mediating_function(FinPowerset(), f, g)
    assert len(m.dom) == 2 ** 4
    assert m.is_surjective() and not m.is_injective()


def test_spec_sweep_examples():
    assert check_property(FinPowerset(), "PreservesWeakPullbacks").status == HOLDS
    v = check_property(AtMostTwoOfThree(), "PreservesWeakPullbacks")
    assert v.status == COUNTEREXAMPLE and v.witness is not None
    assert check_property(SubDistribution(), "PreservesWeakPullbacks").status == HOLDS


def test_identity_passes_every_variant():
    for variant in KernelVariant:
        assert check_kernel_pair_variants(Identity(), variant).status == HOLDS


def test_counterexamples_replay():
    for F in (AtMostTwoOfThree(), FinPowerset(), LabelledTransitions(["a"])):
        for prop in (PropertyName.PRESERVES_PULLBACKS, PropertyName.PRESERVES_WEAK_PULLBACKS,
                     PropertyName.COVERS_PULLBACKS):
            v = check_property(F, prop)
            if v.status != COUNTEREXAMPLE:
                continue
            mm = replay_witness(F, v.witness)
            if v.witness["kind"] == "unreached":
                assert not mm.surjective
            else:
                assert mm.injective is False


def test_verdict_json_schema():
    v = check_property(AtMostTwoOfThree(), "PreservesWeakPullbacks")
    js = v.to_json()
    assert set(js) == {"functor", "property", "status", "witness", "corpusSize", "capErrors"}
    assert js["functor"] == "P32" and js["property"] == "PreservesWeakPullbacks"
    held = check_property(Identity(), "PreservesPullbacks").to_json()
    assert "witness" not in held


def test_cap_errors_are_counted_not_raised():
    v = check_property(LabelledTransitions(["a", "b"]), "PreservesWeakPullbacks", cap=64)
    assert v.cap_errors > 0 and v.status == HOLDS


ORDER = [PropertyName.PRESERVES_PULLBACKS, PropertyName.PRESERVES_WEAK_PULLBACKS,
         PropertyName.COVERS_PULLBACKS]


@pytest.mark.parametrize("name", sorted(SWEPT))
def test_hierarchy_consistency(name):
    profile = functor_profile(SWEPT[name])
    holds = {k: v.status == HOLDS for k, v in profile.items()}
    for stronger, weaker in zip(ORDER, ORDER[1:]):
        assert not (holds[stronger] and not holds[weaker])
    if holds["PreservesPullbacks"]:
        assert holds["PreservesRelations"]
    if holds["CoversPullbacks"]:
        assert holds["CoversKernelPairs"]


@pytest.mark.parametrize("name", sorted(SWEPT))
def test_covers_and_weak_pullbacks_coincide(name):
    profile = functor_profile(SWEPT[name])
    a, b = profile["CoversPullbacks"], profile["PreservesWeakPullbacks"]
    assert a.status == b.status
    assert a.cap_errors == b.cap_errors
    assert (a.witness or {}).get("cospan") == (b.witness or {}).get("cospan")


@pytest.mark.parametrize("name", sorted(SWEPT))
def test_gumm_schroeder_decomposition(name):
    p = functor_profile(SWEPT[name])
    covers = p["CoversPullbacks"].status == HOLDS
    parts = p["CoversKernelPairs"].status == HOLDS and \
        p["PreservesPullbacksAlongMonos"].status == HOLDS
    assert covers == parts


def test_known_profiles():
    expected = {
        "p32": {"PreservesRelations": HOLDS, "PreservesWeakPullbacks": COUNTEREXAMPLE,
                "PreservesPullbacksAlongMonos": HOLDS, "CoversKernelPairs": COUNTEREXAMPLE},
        "pf": {"PreservesRelations": COUNTEREXAMPLE, "PreservesPullbacks": COUNTEREXAMPLE,
               "PreservesWeakPullbacks": HOLDS},
        "lts2": {"PreservesRelations": COUNTEREXAMPLE, "PreservesWeakPullbacks": HOLDS},
        "tree": {k.value: HOLDS for k in PropertyName},
        "stream": {k.value: HOLDS for k in PropertyName},
        "df": {"PreservesRelations": COUNTEREXAMPLE, "PreservesWeakPullbacks": HOLDS},
    }
    for name, want in expected.items():
        profile = functor_profile(SWEPT[name])
        for prop, status in want.items():
            assert profile[prop].status == status, (name, prop)


COMPOSABLE = [Product(Constant(FinSet(["0", "1"])), Identity()),
              Coproduct(Constant(FinSet(["nil"])), Identity()),
              FinPowerset(), AtMostTwoOfThree()]


def test_composition_preserves_properties():
    small = default_corpus(max_size=2, n_random=0)
    for F, G in itertools.product(COMPOSABLE, repeat=2):
        pf, pg = check_all(F, small), check_all(G, small)
        pc = check_all(Compose(F, G), small)
        for prop in PropertyName:
            if pf[prop.value].holds and pg[prop.value].holds:
                assert pc[prop.value].holds, (F, G, prop)


@pytest.mark.parametrize("F", [LabelledTransitions(["a"]), FinPowerset()], ids=str)
def test_lifting_maps_pullbacks_to_pullbacks(F):
    for f, g in small_cospans(limit=4):
        lifted = relation_lifting(F, pullback(f, g))
        FA1, FA2 = eval_object(F, f.dom), eval_object(F, g.dom)
        image_pullback = {(s, t) for s in FA1 for t in FA2 if fmap(F, f, s) == fmap(F, g, t)}
        assert lifted.pairs == image_pullback
