"""Canonical text forms for functor expressions and functor values.

Functors (prefix notation)::

    F ::= Id | P32 | Pf | Df | Pf(F) | Df(F) | Const(S) | LTS(S)
        | Times(F,F) | Plus(F,F) | Comp(F,F) | Pow(F,n)
    S ::= {a,b,...} | NAME            -- NAME looked up in a table of sets

``LTS(S)`` abbreviates ``Pf(Times(Const(S),Id))``.

Values are read against a functor:

    Id, Const       atom           (bare identifier or "json string")
    Times, Pow, P32 (v1,...,vn)
    Plus            inl(v) | inr(v)
    Pf              {v1,...,vn}
    Df              {v1:w1,...,vn:wn}   weights like 1/3, 0.25 or 1
    Comp(F,G)       an F-value whose atoms are G-values
"""
import json
import re
from fractions import Fraction

from .errors import ParseError
from .finset import FinSet, canon
from .functors import (AtMostTwoOfThree, Compose, Constant, Coproduct,
                       FinPowerset, Identity, Inj, Power, Product, SubDist,
                       SubDistribution, lts_labels)

_IDENT = re.compile(r"[A-Za-z0-9_.'#@$~+-]+")
_WEIGHT = re.compile(r"[0-9]+(?:/[0-9]+|\.[0-9]*)?")


class _Scanner:
    def __init__(self, text, source=None, line=None):
        self.text = text
        self.pos = 0
        self.start = 0          # where the last identifier began
        self.source = source
        self.line = line

    def error(self, message, at=None):
        pos = self.pos if at is None else at
        raise ParseError(message, line=self.line, column=pos + 1, source=self.source)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def accept(self, token):
        self.skip()
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def expect(self, token):
        if not self.accept(token):
            found = self.text[self.pos:self.pos + 8] or "end of input"
            self.error(f"expected {token!r}, found {found!r}")

    def ident(self):
        self.skip()
        m = _IDENT.match(self.text, self.pos)
        if not m:
            self.error("expected an identifier")
        self.start = self.pos
        self.pos = m.end()
        return m.group()

    def atom(self):
        if self.peek() == '"':
            try:
                value, end = json.JSONDecoder().raw_decode(self.text, self.pos)
            except json.JSONDecodeError:
                self.error("malformed quoted atom")
            self.pos = end
            return value
        return self.ident()

    def weight(self):
        self.skip()
        m = _WEIGHT.match(self.text, self.pos)
        if not m:
            self.error("expected a weight such as 1/3")
        self.pos = m.end()
        try:
            return Fraction(m.group())
        except (ValueError, ZeroDivisionError):
            self.error(f"bad weight {m.group()!r}")

    def done(self):
        self.skip()
        if self.pos != len(self.text):
            self.error(f"unexpected trailing text {self.text[self.pos:self.pos + 8]!r}")


# -- functors ----------------------------------------------------------------

def parse_functor(text, sets=None, source=None, line=None):
    sc = _Scanner(text, source, line)
    F = _functor(sc, sets or {})
    sc.done()
    return F


def _set_literal(sc, sets):
    if sc.accept("{"):
        elems = []
        if not sc.accept("}"):
            while True:
                elems.append(sc.atom())
                if sc.accept("}"):
                    break
                sc.expect(",")
        if len(set(elems)) != len(elems):
            sc.error("duplicate element in set literal")
        return FinSet(elems)
    name = sc.ident()
    if name not in sets:
        sc.error(f"unknown set name {name!r}", at=sc.start)
    value = sets[name]
    return value if isinstance(value, FinSet) else FinSet(value)


def _functor(sc, sets):
    name = sc.ident()
    if name == "Id":
        return Identity()
    if name == "P32":
        return AtMostTwoOfThree()
    if name in ("Pf", "Df"):
        inner = Identity()
        if sc.accept("("):
            inner = _functor(sc, sets)
            sc.expect(")")
        return FinPowerset(inner) if name == "Pf" else SubDistribution(inner)
    if name in ("Const", "LTS"):
        sc.expect("(")
        carrier = _set_literal(sc, sets)
        sc.expect(")")
        if name == "Const":
            return Constant(carrier)
        return FinPowerset(Product(Constant(carrier), Identity()))
    if name in ("Times", "Plus", "Comp"):
        sc.expect("(")
        a = _functor(sc, sets)
        sc.expect(",")
        b = _functor(sc, sets)
        sc.expect(")")
        return {"Times": Product, "Plus": Coproduct, "Comp": Compose}[name](a, b)
    if name == "Pow":
        sc.expect("(")
        a = _functor(sc, sets)
        sc.expect(",")
        n = sc.ident()
        if not n.isdigit():
            sc.error("power exponent must be a natural number", at=sc.start)
        sc.expect(")")
        return Power(a, int(n))
    sc.error(f"unknown functor {name!r}", at=sc.start)


def format_atom(a):
    if isinstance(a, str) and _IDENT.fullmatch(a):
        return a
    if isinstance(a, (str, int)):
        return json.dumps(str(a))
    return json.dumps(canon(a))


def format_set(carrier, names=None):
    if names:
        for name, value in names.items():
            if FinSet(value) == carrier:
                return name
    return "{" + ",".join(format_atom(a) for a in carrier) + "}"


def format_functor(F, names=None, sugar=False):
    """Prefix text of ``F``; ``names`` maps set names to carriers for Const."""
    if sugar and lts_labels(F) is not None:
        return f"LTS({format_set(lts_labels(F), names)})"
    rec = lambda G: format_functor(G, names, sugar)
    if isinstance(F, Identity):
        return "Id"
    if isinstance(F, AtMostTwoOfThree):
        return "P32"
    if isinstance(F, Constant):
        return f"Const({format_set(F.carrier, names)})"
    if isinstance(F, Product):
        return f"Times({rec(F.left)},{rec(F.right)})"
    if isinstance(F, Coproduct):
        return f"Plus({rec(F.left)},{rec(F.right)})"
    if isinstance(F, Compose):
        return f"Comp({rec(F.outer)},{rec(F.inner)})"
    if isinstance(F, Power):
        return f"Pow({rec(F.inner)},{F.n})"
    if isinstance(F, FinPowerset):
        return "Pf" if isinstance(F.inner, Identity) else f"Pf({rec(F.inner)})"
    if isinstance(F, SubDistribution):
        return "Df" if isinstance(F.inner, Identity) else f"Df({rec(F.inner)})"
    raise TypeError(f"not a functor expression: {F!r}")


# -- values ------------------------------------------------------------------

def parse_value(F, text, source=None, line=None):
    sc = _Scanner(text, source, line)
    v = _value(F, sc, sc.atom)
    sc.done()
    return v


def _tuple(sc, parts, atom):
    sc.expect("(")
    out = []
    for k, G in enumerate(parts):
        if k:
            sc.expect(",")
        out.append(_value(G, sc, atom))
    sc.expect(")")
    return tuple(out)


def _value(F, sc, atom):
    if isinstance(F, (Identity,)):
        return atom()
    if isinstance(F, Constant):
        return sc.atom()
    if isinstance(F, Product):
        return _tuple(sc, (F.left, F.right), atom)
    if isinstance(F, Power):
        return _tuple(sc, (F.inner,) * F.n, atom)
    if isinstance(F, AtMostTwoOfThree):
        return _tuple(sc, (Identity(),) * 3, atom)
    if isinstance(F, Coproduct):
        tag = sc.ident()
        if tag not in ("inl", "inr"):
            sc.error("expected inl(...) or inr(...)", at=sc.start)
        sc.expect("(")
        v = _value(F.left if tag == "inl" else F.right, sc, atom)
        sc.expect(")")
        return Inj(0 if tag == "inl" else 1, v)
    if isinstance(F, Compose):
        return _value(F.outer, sc, lambda: _value(F.inner, sc, atom))
    if isinstance(F, (FinPowerset, SubDistribution)):
        dist = isinstance(F, SubDistribution)
        sc.expect("{")
        items = []
        if not sc.accept("}"):
            while True:
                v = _value(F.inner, sc, atom)
                if dist:
                    sc.expect(":")
                    items.append((v, sc.weight()))
                else:
                    items.append(v)
                if sc.accept("}"):
                    break
                sc.expect(",")
        if not dist:
            return frozenset(items)
        try:
            return SubDist(items)
        except ValueError as exc:
            sc.error(str(exc))
    raise TypeError(f"not a functor expression: {F!r}")


def format_value(F, t):
    """Text of the value ``t`` of F; inverse of ``parse_value``."""
    return _fmt(F, t, format_atom)


def _fmt(F, t, atom):
    if isinstance(F, Identity):
        return atom(t)
    if isinstance(F, Constant):
        return format_atom(t)
    if isinstance(F, Product):
        return f"({_fmt(F.left, t[0], atom)},{_fmt(F.right, t[1], atom)})"
    if isinstance(F, Power):
        return "(" + ",".join(_fmt(F.inner, u, atom) for u in t) + ")"
    if isinstance(F, AtMostTwoOfThree):
        return "(" + ",".join(atom(a) for a in t) + ")"
    if isinstance(F, Coproduct):
        tag = "inl" if t.index == 0 else "inr"
        branch = F.left if t.index == 0 else F.right
        return f"{tag}({_fmt(branch, t.value, atom)})"
    if isinstance(F, Compose):
        return _fmt(F.outer, t, lambda u: _fmt(F.inner, u, atom))
    if isinstance(F, FinPowerset):
        parts = sorted(_fmt(F.inner, u, atom) for u in t)
        return "{" + ",".join(parts) + "}"
    if isinstance(F, SubDistribution):
        parts = sorted(f"{_fmt(F.inner, u, atom)}:{w}" for u, w in t.items)
        return "{" + ",".join(parts) + "}"
    raise TypeError(f"not a functor expression: {F!r}")
