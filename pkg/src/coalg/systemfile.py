"""Reading and writing systems: a TOML format and Aldebaran ``.aut`` files.

A system file looks like::

    functor = "LTS(L)"

    [sets]
    L = ["a", "b"]

    [systems.left]
    states = ["x0", "x1"]
    structure = { x0 = "{(a,x1)}", x1 = "{}" }

    [systems.right]
    states = ["y0"]
    structure = { y0 = "{}" }

    [relations]
    R = [["x1", "y0"]]

``functor`` uses the prefix syntax of :mod:`coalg.syntax`; set names in it
refer to ``[sets]``.  Structure values are written in the value syntax for
that functor.  One or two systems may be declared; relations are lists of
``[left_state, right_state]`` pairs.
"""
from dataclasses import dataclass, field
import re

import tomli
import tomli_w

from .bisim import CoalgebraPair
from .errors import ParseError, ShapeError, ValidationError
from .finset import FinSet, Relation
from .functors import Coalgebra, LabelledTransitions, check_value
from .syntax import format_functor, format_value, parse_functor, parse_value


@dataclass
class SystemFile:
    functor: object
    systems: dict
    relations: dict = field(default_factory=dict)
    sets: dict = field(default_factory=dict)

    def pair(self):
        """The declared systems as a pair; a lone system is paired with itself."""
        cs = list(self.systems.values())
        return CoalgebraPair.of(cs[0], cs[1] if len(cs) > 1 else None)

    def relation(self, name):
        if name not in self.relations:
            known = ", ".join(sorted(self.relations)) or "none"
            raise ValidationError(f"no relation named {name!r} (declared: {known})")
        P = self.pair()
        pairs = self.relations[name]
        for x, y in pairs:
            if x not in P.X or y not in P.Y:
                bad = x if x not in P.X else y
                raise ValidationError(f"relation {name}: unknown state {bad!r}", state=bad)
        return Relation(P.X, P.Y, [tuple(p) for p in pairs])


_TOML_POS = re.compile(r"\(at line (\d+), column (\d+)\)")


def load_system(path):
    """Parse and validate a system file into a :class:`SystemFile`."""
    with open(path, "rb") as fh:
        raw = fh.read()
    return loads_system(raw.decode("utf-8"), source=str(path))


def loads_system(text, source=None):
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        m = _TOML_POS.search(str(exc))
        msg = _TOML_POS.sub("", str(exc)).strip()
        if m:
            raise ParseError(msg, int(m.group(1)), int(m.group(2)), source) from None
        raise ParseError(msg, source=source) from None
    lines = text.splitlines()

    sets = {}
    for name, elems in doc.get("sets", {}).items():
        if not isinstance(elems, list) or not all(isinstance(e, str) for e in elems):
            raise ParseError(f"set {name} must be a list of strings",
                             *_locate(lines, name), source)
        sets[name] = FinSet(elems)

    if "functor" not in doc or not isinstance(doc["functor"], str):
        raise ParseError("missing 'functor = \"...\"'", source=source)
    line, col = _locate(lines, "functor")
    try:
        F = parse_functor(doc["functor"], sets, source, line)
    except ParseError as exc:
        raise _shift(exc, col) from None

    systems_doc = doc.get("systems")
    if not isinstance(systems_doc, dict) or not 1 <= len(systems_doc) <= 2:
        raise ParseError("declare one or two tables [systems.NAME]", source=source)
    systems = {}
    for name, sysdoc in systems_doc.items():
        systems[name] = _system(F, name, sysdoc, lines, source)

    relations = {}
    for name, pairs in doc.get("relations", {}).items():
        ok = isinstance(pairs, list) and all(
            isinstance(p, list) and len(p) == 2 and all(isinstance(e, str) for e in p)
            for p in pairs)
        if not ok:
            raise ParseError(f"relation {name} must be a list of [left, right] pairs",
                             *_locate(lines, name), source)
        relations[name] = [tuple(p) for p in pairs]
    out = SystemFile(F, systems, relations, sets)
    for name in relations:
        out.relation(name)
    return out


def _system(F, name, sysdoc, lines, source):
    states = sysdoc.get("states")
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise ParseError(f"systems.{name}.states must be a list of strings", source=source)
    if len(set(states)) != len(states):
        raise ValidationError(f"systems.{name}: duplicate state")
    X = FinSet(states)
    structure_doc = sysdoc.get("structure", {})
    if not isinstance(structure_doc, dict):
        raise ParseError(f"systems.{name}.structure must be a table", source=source)
    for s in structure_doc:
        if s not in X:
            raise ValidationError(f"systems.{name}: structure given for undeclared state {s!r}",
                                  state=s)
    structure = {}
    for s in states:
        if s not in structure_doc:
            raise ValidationError(f"systems.{name}: state {s!r} has no structure", state=s)
        text = structure_doc[s]
        line, col = _locate(lines, s, after=f"systems.{name}")
        if not isinstance(text, str):
            raise ParseError(f"structure of {s!r} must be a string", line, col, source)
        try:
            value = parse_value(F, text, source, line)
        except ParseError as exc:
            raise _shift(exc, col) from None
        try:
            check_value(F, X, value, where=f"structure of {s}")
        except ShapeError as exc:
            raise ValidationError(f"systems.{name}: state {s!r}: {exc}", state=s) from None
        structure[s] = value
    return Coalgebra(F, X, structure, check=False)


def _locate(lines, key, after=None):
    """Line and column (1-based) of the value of ``key`` in the source, best effort.

    Column points at the first character inside the quoted value.
    """
    start = 0
    if after is not None:
        for i, ln in enumerate(lines):
            if after in ln:
                start = i
                break
    pat = re.compile(r'(?:^|[{,\s])"?' + re.escape(key) + r'"?\s*=\s*"?')
    for i in range(start, len(lines)):
        m = pat.search(lines[i])
        if m:
            return i + 1, m.end() + 1
    return None, None


def _shift(exc, col):
    """Re-anchor an error from parsing a value string to file columns."""
    column = exc.column
    if col is not None and column is not None:
        column += col - 1
    return ParseError(exc.message, exc.line, column, exc.source)


def parse_system(path):
    """A validated :class:`CoalgebraPair`, or a single :class:`Coalgebra` when
    the file declares one system."""
    sf = load_system(path)
    if len(sf.systems) == 1:
        return next(iter(sf.systems.values()))
    return sf.pair()


def dumps_system(systems, functor=None, relations=None, sets=None):
    """Text of a system file.

    ``systems`` is a Coalgebra, a CoalgebraPair or a dict name -> Coalgebra.
    States must be strings.
    """
    if isinstance(systems, Coalgebra):
        systems = {"main": systems}
    elif isinstance(systems, CoalgebraPair):
        systems = {"left": systems.left, "right": systems.right}
    first = next(iter(systems.values()))
    F = functor if functor is not None else first.functor
    doc = {"functor": format_functor(F, sets, sugar=True)}
    if sets:
        doc["sets"] = {k: list(FinSet(v)) for k, v in sets.items()}
    doc["systems"] = {}
    for name, C in systems.items():
        doc["systems"][name] = {
            "states": [str(s) for s in C.carrier],
            "structure": {str(s): format_value(F, C(s)) for s in C.carrier},
        }
    if relations:
        doc["relations"] = {name: [[str(x), str(y)] for x, y in
                                   (R.sorted_pairs() if isinstance(R, Relation) else R)]
                            for name, R in relations.items()}
    return tomli_w.dumps(doc)


def serialize_system(path, systems, functor=None, relations=None, sets=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_system(systems, functor, relations, sets))


# -- Aldebaran ---------------------------------------------------------------

_HEADER = re.compile(r"\s*des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_EDGE = re.compile(r'\s*\(\s*(\d+)\s*,\s*("(?:[^"\\]|\\.)*"|[^,()"]+?)\s*,\s*(\d+)\s*\)\s*$')


def parse_aut(text, source=None):
    """Parse Aldebaran text into ``(coalgebra, initial_state)``.

    States are named ``"0"`` ... ``"n-1"``; the label set is the set of labels
    that occur.  Repeated transition lines collapse to one.
    """
    lines = text.splitlines()
    idx = 0
    while idx < len(lines) and not lines[idx].strip():
        idx += 1
    if idx == len(lines):
        raise ParseError("empty file: expected 'des (initial, transitions, states)'",
                         1, 1, source)
    m = _HEADER.match(lines[idx])
    if not m:
        raise ParseError("malformed header: expected 'des (initial, transitions, states)'",
                         idx + 1, 1, source)
    initial, n_trans, n_states = (int(g) for g in m.groups())
    if n_states < 1 or initial >= n_states:
        raise ParseError(f"initial state {initial} out of range for {n_states} states",
                         idx + 1, 1, source)
    trans = []
    for lineno in range(idx + 1, len(lines)):
        ln = lines[lineno]
        if not ln.strip():
            continue
        e = _EDGE.match(ln)
        if not e:
            raise ParseError("malformed transition: expected '(from, \"label\", to)'",
                             lineno + 1, 1, source)
        src, label, dst = int(e.group(1)), e.group(2), int(e.group(3))
        if label.startswith('"'):
            label = label[1:-1].replace('\\"', '"').replace("\\\\", "\\")
        if not label:
            raise ParseError("empty label", lineno + 1, e.start(2) + 1, source)
        for s, grp in ((src, 1), (dst, 3)):
            if s >= n_states:
                raise ParseError(f"state {s} out of range (0..{n_states - 1})",
                                 lineno + 1, e.start(grp) + 1, source)
        trans.append((str(src), label, str(dst)))
    if len(trans) != n_trans:
        raise ParseError(f"header announces {n_trans} transitions, found {len(trans)}",
                         idx + 1, 1, source)
    labels = sorted({a for _, a, _ in trans})
    return aut_coalgebra(n_states, labels, trans), str(initial)


def aut_coalgebra(n_states, labels, trans):
    states = FinSet([str(i) for i in range(n_states)])
    succ = {s: set() for s in states}
    for s, a, t in trans:
        succ[s].add((a, t))
    return Coalgebra(LabelledTransitions(labels), states,
                     {s: frozenset(v) for s, v in succ.items()}, check=False)


def import_aut(path):
    """Read an ``.aut`` file as an LTS coalgebra."""
    with open(path, encoding="utf-8") as fh:
        return parse_aut(fh.read(), source=str(path))[0]


def dumps_aut(C, initial=None):
    """Aldebaran text for an LTS whose states are ``"0"`` ... ``"n-1"``."""
    trans = sorted(((int(s), a, int(t)) for s in C.carrier for a, t in C(s)),
                   key=lambda e: (e[0], e[1], e[2]))
    init = 0 if initial is None else int(initial)
    out = [f"des ({init}, {len(trans)}, {len(C.carrier)})"]
    for s, a, t in trans:
        label = a.replace("\\", "\\\\").replace('"', '\\"')
        out.append(f'({s}, "{label}", {t})')
    return "\n".join(out) + "\n"
