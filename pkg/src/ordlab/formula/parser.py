"""Text syntax for formulas.

Connectives ``~ & | ->`` bind in that order (``->`` associates to the right),
quantifiers are ``A x.`` and ``E x.`` and their body extends as far right as
possible.  Atoms: ``x < y``, ``x = y``, ``x <= y`` (inclusion), ``S(x)``,
``p in x``, ``true``, ``false``, and in ``lbs`` the macro ``Atom(y)``.

The language tag decides variable sorts from names: ``lmon`` treats names
with an uppercase initial as set variables, ``l1s`` treats names starting
with ``p`` or ``q`` as urelements and all others as sets, and ``lord`` /
``lbs`` have individual variables only.
"""

from __future__ import annotations

import re
from typing import List, Tuple

from .syntax import (IND, LANGS, SET, UR, And, Bottom, Eq, Exists, Forall, Implies, In,
                     Less, Not, Or, S, Subeq, Top, Var, atom_formula, atom_vars,
                     subformulas)

__all__ = ["FormulaSyntaxError", "SortError", "parse", "sort_of", "check_language"]

RESERVED = {"A", "E", "S", "in", "true", "false", "Atom"}


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position


class SortError(FormulaSyntaxError):
    pass


def sort_of(name: str, lang: str) -> str:
    if lang == "lmon":
        return SET if name[0].isupper() else IND
    if lang == "l1s":
        return UR if name[0] in "pq" else SET
    return IND


def _atom_sorts_ok(f, lang: str) -> bool:
    sig = tuple(v.sort for v in atom_vars(f))
    if isinstance(f, (Top, Bottom)):
        return True
    if lang == "lord":
        return isinstance(f, (Less, Eq)) and sig == (IND, IND)
    if lang == "lmon":
        if isinstance(f, (Less, Eq)):
            return sig == (IND, IND)
        return isinstance(f, In) and sig == (IND, SET)
    if lang == "lbs":
        return isinstance(f, (Subeq, Eq, S)) and all(s == IND for s in sig)
    if lang == "l1s":
        if isinstance(f, Eq):
            return sig in ((UR, UR), (SET, SET))
        if isinstance(f, In):
            return sig == (UR, SET)
        return isinstance(f, S) and sig == (SET,)
    raise ValueError(f"unknown language {lang!r}")


def check_language(f, lang: str) -> bool:
    """Whether every atom and binder of ``f`` is well sorted in ``lang``."""
    if lang not in LANGS:
        raise ValueError(f"unknown language {lang!r}")
    for g in subformulas(f):
        if isinstance(g, (Exists, Forall)):
            allowed = {"lord": (IND,), "lbs": (IND,), "lmon": (IND, SET), "l1s": (UR, SET)}
            if g.var.sort not in allowed[lang]:
                return False
        elif not isinstance(g, (Not, And, Or, Implies)) and not _atom_sorts_ok(g, lang):
            return False
    return True


_TOKEN = re.compile(r"\s*(?:(->|<=|[()<=~&|.])|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if not text[pos:].strip():
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1):
            out.append(("op", m.group(1), m.start(1)))
        else:
            word = m.group(2)
            kind = "kw" if word in RESERVED else "id"
            out.append((kind, word, m.start(2)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, lang: str):
        if lang not in LANGS:
            raise ValueError(f"unknown language {lang!r}")
        self.text = text
        self.lang = lang
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        if self.i < len(self.toks):
            return self.toks[self.i]
        return (None, None, len(self.text))

    def accept(self, kind, value):
        k, v, _ = self.peek()
        if k == kind and v == value:
            self.i += 1
            return True
        return False

    def expect(self, kind, value=None):
        k, v, p = self.peek()
        if k != kind or (value is not None and v != value):
            want = value if value is not None else {"id": "a variable"}.get(kind, kind)
            got = "end of input" if k is None else repr(v)
            raise FormulaSyntaxError(f"expected {want!r}, found {got}", p)
        self.i += 1
        return v, p

    def var(self) -> Tuple[Var, int]:
        name, p = self.expect("id")
        return Var(name, sort_of(name, self.lang)), p

    def formula(self):
        left = self.disjunction()
        if self.accept("op", "->"):
            return Implies(left, self.formula())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.accept("op", "|"):
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.accept("op", "&"):
            left = And(left, self.unary())
        return left

    def unary(self):
        k, v, p = self.peek()
        if (k, v) == ("op", "~"):
            self.i += 1
            return Not(self.unary())
        if k == "kw" and v in ("A", "E"):
            self.i += 1
            var, vp = self.var()
            self.check_binder(var, vp)
            self.expect("op", ".")
            body = self.formula()
            return Forall(var, body) if v == "A" else Exists(var, body)
        return self.primary()

    def check_binder(self, var: Var, pos: int):
        ok = {"lord": (IND,), "lbs": (IND,), "lmon": (IND, SET), "l1s": (UR, SET)}
        if var.sort not in ok[self.lang]:
            raise SortError(f"cannot quantify {var.sort} variable {var} in {self.lang}", pos)

    def primary(self):
        k, v, p = self.peek()
        if (k, v) == ("op", "("):
            self.i += 1
            inner = self.formula()
            self.expect("op", ")")
            return inner
        if (k, v) == ("kw", "true"):
            self.i += 1
            return Top()
        if (k, v) == ("kw", "false"):
            self.i += 1
            return Bottom()
        if (k, v) == ("kw", "S"):
            self.i += 1
            self.expect("op", "(")
            var, vp = self.var()
            self.expect("op", ")")
            return self.checked(S(var), p)
        if (k, v) == ("kw", "Atom"):
            if self.lang != "lbs":
                raise SortError("Atom(...) is only available in lbs", p)
            self.i += 1
            self.expect("op", "(")
            var, vp = self.var()
            self.expect("op", ")")
            return atom_formula(var)
        if k == "id":
            left, _ = self.var()
            k2, op, p2 = self.peek()
            if (k2, op) == ("kw", "in"):
                self.i += 1
                right, _ = self.var()
                return self.checked(In(left, right), p)
            if k2 == "op" and op in ("<", "=", "<="):
                self.i += 1
                right, _ = self.var()
                node = {"<": Less, "=": Eq, "<=": Subeq}[op](left, right)
                return self.checked(node, p)
            got = "end of input" if k2 is None else repr(op)
            raise FormulaSyntaxError(f"expected a relation symbol, found {got}", p2)
        got = "end of input" if k is None else repr(v)
        raise FormulaSyntaxError(f"expected a formula, found {got}", p)

    def checked(self, node, pos):
        if not _atom_sorts_ok(node, self.lang):
            raise SortError(f"atom is not well sorted in {self.lang}", pos)
        return node


def parse(text: str, lang: str):
    """Parse ``text`` as a formula of language ``lang``."""
    p = _Parser(text, lang)
    if not p.toks:
        raise FormulaSyntaxError("empty formula", 0)
    f = p.formula()
    k, v, pos = p.peek()
    if k is not None:
        raise FormulaSyntaxError(f"unexpected {v!r}", pos)
    return f
