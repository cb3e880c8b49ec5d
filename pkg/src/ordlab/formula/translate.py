"""Interpretations between the two-sorted set language and the algebra language.

``translate_plus`` sends an ``l1s`` formula to ``lbs``: urelement ``p_i``
becomes ``y_{2i}``, set ``x_j`` becomes ``y_{2j+1}``, membership becomes
"is an atom below", and urelement quantifiers are relativized to atoms.
``translate_prime`` goes back: inclusion unfolds to membership of every
urelement, algebra quantifiers become set quantifiers.
"""

from __future__ import annotations

import re
from typing import Dict

from .syntax import (IND, SET, UR, And, Bottom, Eq, Exists, Forall, Implies, In, Less,
                     Not, Or, S, Subeq, Top, Var, all_vars, atom_formula,
                     node_memo)

__all__ = ["translate_plus", "translate_prime", "TranslationError"]


class TranslationError(ValueError):
    pass


def _index_map(names, prefix: str) -> Dict[str, int]:
    """Index of each variable name: ``prefix<k>`` keeps ``k``, anything else
    gets the next unused index in order of first appearance."""
    out: Dict[str, int] = {}
    pattern = re.compile(re.escape(prefix) + r"(\d+)")
    for name in names:
        m = pattern.fullmatch(name)
        if m:
            out[name] = int(m.group(1))
    used = set(out.values())
    k = 0
    for name in names:
        if name not in out:
            while k in used:
                k += 1
            out[name] = k
            used.add(k)
    return out


_CANONICAL = {UR: re.compile(r"p(\d+)"), SET: re.compile(r"x(\d+)")}


def _canonical_y(v: Var) -> Var:
    k = int(_CANONICAL[v.sort].fullmatch(v.name).group(1))
    return Var(f"y{2 * k if v.sort == UR else 2 * k + 1}", IND)


def translate_plus(f):
    """``l1s`` formula to its ``lbs`` interpretation over the powerset algebra
    of the urelements."""
    names = sorted(all_vars(f), key=lambda v: v.name)
    others = [v for v in names if v.sort not in (UR, SET)]
    if others:
        raise TranslationError(f"{others[0]} is not an l1s variable")
    if all(_CANONICAL[v.sort].fullmatch(v.name) for v in names):
        # names already carry their indices, so subformulas translate alike
        # in every context and can be shared
        return _plus(f, _canonical_y, _plus_canonical)
    ur = _index_map([v.name for v in names if v.sort == UR], "p")
    sets = _index_map([v.name for v in names if v.sort == SET], "x")

    def y(v: Var) -> Var:
        k = 2 * ur[v.name] if v.sort == UR else 2 * sets[v.name] + 1
        return Var(f"y{k}", IND)

    def go(g):
        return _plus(g, y, go)

    return go(f)


def _plus_canonical(f):
    return node_memo(f, "_plus", lambda g: _plus(g, _canonical_y, _plus_canonical))


def _plus(g, y, go):
    if isinstance(g, (Top, Bottom)):
        return g
    if isinstance(g, Eq):
        return Eq(y(g.left), y(g.right))
    if isinstance(g, In):
        a = y(g.elem)
        return And(atom_formula(a), Subeq(a, y(g.set)))
    if isinstance(g, S):
        return S(y(g.arg))
    if isinstance(g, Not):
        return Not(go(g.body))
    if isinstance(g, (And, Or, Implies)):
        return type(g)(go(g.left), go(g.right))
    if isinstance(g, (Exists, Forall)):
        v = y(g.var)
        body = go(g.body)
        if g.var.sort == UR:
            guard = atom_formula(v)
            body = Implies(guard, body) if isinstance(g, Forall) else And(guard, body)
        return type(g)(v, body)
    raise TranslationError(f"{type(g).__name__} is not an l1s construct")


def translate_prime(f):
    """``lbs`` formula to its ``l1s`` reading on the two-sorted companion."""
    names = sorted(all_vars(f), key=lambda v: v.name)
    for v in names:
        if v.sort != IND:
            raise TranslationError(f"{v} is not an lbs variable")
    if not any(v.name[0] in "pq" for v in names):
        # every variable keeps its name, so subformulas translate alike in
        # every context and can be shared
        return _prime(f, _same_name, _prime_shared)
    mapping: Dict[Var, Var] = {}
    taken = {v.name for v in names if v.name[0] not in "pq"}
    k = 0
    for v in names:
        name = v.name
        if name[0] in "pq":
            # would read as an urelement in l1s
            while f"x{k}" in taken:
                k += 1
            name = f"x{k}"
            taken.add(name)
        mapping[v] = Var(name, SET)

    def go(g):
        return _prime(g, mapping.__getitem__, go)

    return go(f)


_P0 = Var("p0", UR)


def _same_name(v: Var) -> Var:
    return Var(v.name, SET)


def _prime_shared(f):
    return node_memo(f, "_prime", lambda g: _prime(g, _same_name, _prime_shared))


def _prime(g, y, go):
    if isinstance(g, (Top, Bottom)):
        return g
    if isinstance(g, Subeq):
        return Forall(_P0, Implies(In(_P0, y(g.left)), In(_P0, y(g.right))))
    if isinstance(g, Eq):
        return Eq(y(g.left), y(g.right))
    if isinstance(g, S):
        return S(y(g.arg))
    if isinstance(g, Not):
        return Not(go(g.body))
    if isinstance(g, (And, Or, Implies)):
        return type(g)(go(g.left), go(g.right))
    if isinstance(g, (Exists, Forall)):
        return type(g)(y(g.var), go(g.body))
    raise TranslationError(f"{type(g).__name__} is not an lbs construct")
