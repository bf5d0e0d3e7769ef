import random
import textwrap

import pytest

from coalg.bisim import CoalgebraPair
from coalg.corpus import (coalgebra_corpus, deadlock_vs_step, milner_abc,
                          p32_separator, random_lts, rename, standard_functors)
from coalg.errors import ParseError, ValidationError
from coalg.functors import Coalgebra, Identity, LabelledTransitions, SubDistribution
from coalg.systemfile import (dumps_aut, dumps_system, import_aut, load_system,
                              loads_system, parse_aut, parse_system)


def test_minimal_identity_file(tmp_path):
    path = tmp_path / "loop.toml"
    path.write_text(textwrap.dedent("""\
        functor = "Id"
        [systems.main]
        states = ["s"]
        structure = { s = "s" }
    """))
    C = parse_system(path)
    assert isinstance(C, Coalgebra)
    assert C.functor == Identity() and C("s") == "s"


def test_undeclared_target_is_a_validation_error():
    text = textwrap.dedent("""\
        functor = "LTS({a})"
        [systems.left]
        states = ["x0"]
        structure = { x0 = "{(a,x9)}" }
    """)
    with pytest.raises(ValidationError) as err:
        loads_system(text)
    assert err.value.state == "x0"


def test_missing_structure_names_the_state():
    text = 'functor = "Id"\n[systems.m]\nstates = ["a", "b"]\nstructure = { a = "b" }\n'
    with pytest.raises(ValidationError) as err:
        loads_system(text)
    assert err.value.state == "b"


def test_value_syntax_error_has_line_and_column():
    text = 'functor = "LTS({a})"\n[systems.m]\nstates = ["x0"]\n[systems.m.structure]\nx0 = "{(a,x0}"\n'
    with pytest.raises(ParseError) as err:
        loads_system(text, source="bad.toml")
    assert err.value.line == 5
    assert err.value.column == 13
    assert str(err.value).startswith("bad.toml:5:13:")


def test_toml_syntax_error_has_line():
    with pytest.raises(ParseError) as err:
        loads_system('functor = "Id"\n[systems.m\n')
    assert err.value.line == 2


def test_bad_functor_reports_column():
    with pytest.raises(ParseError) as err:
        loads_system('functor = "Pf(Foo)"\n[systems.m]\nstates = []\n')
    assert (err.value.line, err.value.column) == (1, 15)


def test_relation_with_unknown_state():
    P = deadlock_vs_step()
    text = dumps_system(P, relations={"R": [("x0", "nope")]})
    with pytest.raises(ValidationError):
        loads_system(text)


def _pairs():
    out = [deadlock_vs_step(), milner_abc(), p32_separator()]
    for name, F in sorted(standard_functors().items()):
        cs = coalgebra_corpus(F, sizes=(1, 2, 3), per_size=2, seed=11)
        out.extend(CoalgebraPair.of(a, rename(b, "t")) for a, b in zip(cs, cs[1:]))
    cs = coalgebra_corpus(SubDistribution(), sizes=(2, 3), per_size=2, seed=3)
    out.extend(CoalgebraPair.of(a, rename(b, "t")) for a, b in zip(cs, cs[1:]))
    return out


def test_round_trip_every_corpus_pair(tmp_path):
    for k, P in enumerate(_pairs()):
        R = P.relation([(x, y) for x in P.X for y in P.Y][::2])
        path = tmp_path / f"p{k}.toml"
        path.write_text(dumps_system(P, relations={"R": R}))
        sf = load_system(path)
        Q = sf.pair()
        assert Q.functor == P.functor
        assert Q.X.elements == P.X.elements and Q.Y.elements == P.Y.elements
        assert Q.left.structure == P.left.structure
        assert Q.right.structure == P.right.structure
        assert sf.relation("R") == R


def test_named_sets_are_resolved():
    text = textwrap.dedent("""\
        functor = "LTS(L)"
        [sets]
        L = ["a", "b"]
        [systems.m]
        states = ["s"]
        structure = { s = "{(b,s)}" }
    """)
    C = next(iter(loads_system(text).systems.values()))
    assert C.functor == LabelledTransitions(["a", "b"])


# -- Aldebaran ---------------------------------------------------------------

def test_aut_two_states():
    C, init = parse_aut('des (0,1,2)\n(0,"a",1)\n')
    assert list(C.carrier) == ["0", "1"]
    assert C("0") == frozenset({("a", "1")}) and C("1") == frozenset()
    assert init == "0"


def test_aut_duplicate_lines_collapse():
    C, _ = parse_aut('des (0,3,2)\n(0,"a",1)\n(0,"a",1)\n(1,"b",0)\n')
    assert C("0") == frozenset({("a", "1")})
    assert C.functor == LabelledTransitions(["a", "b"])


def test_aut_unquoted_labels_and_blank_lines():
    C, _ = parse_aut('\ndes (0, 2, 2)\n(0, tau, 1)\n\n(1, "x y", 1)\n')
    assert C("0") == frozenset({("tau", "1")})
    assert C("1") == frozenset({("x y", "1")})


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("des 0,1,2\n", 1),
    ('des (0,1,2)\n(0,"a")\n', 2),
    ('des (0,1,2)\n(0,"a",5)\n', 2),
    ('des (0,2,2)\n(0,"a",1)\n', 1),
    ('des (0,1,2)\n(0,"",1)\n', 2),
    ('des (3,0,2)\n', 1),
])
def test_aut_malformed(text, line):
    with pytest.raises(ParseError) as err:
        parse_aut(text)
    assert err.value.line == line


def test_random_aut_round_trips_through_system_file(tmp_path):
    rng = random.Random(30)
    C = random_lts(30, ["a", "b", "c"], rng, prefix="q")
    numbered = rename(C, "")
    aut = tmp_path / "big.aut"
    aut.write_text(dumps_aut(numbered))
    D = import_aut(aut)
    toml = tmp_path / "big.toml"
    toml.write_text(dumps_system(D))
    E = parse_system(toml)
    assert E.carrier.elements == D.carrier.elements
    assert E.structure == D.structure
    assert dumps_aut(E) == aut.read_text()
