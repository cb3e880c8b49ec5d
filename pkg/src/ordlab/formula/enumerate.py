"""Exhaustive formula enumeration and Hintikka sentences.

Bound variables get canonical names from the number of variables of their
sort already in scope, so two enumerated formulas are alpha-equivalent only
if they are identical.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterator, List, Sequence, Tuple

from ..structures import FiniteStructure
from .checker import evaluate
from .syntax import (IND, SET, UR, And, Eq, Exists, Forall, Implies, In, Less, Not, Or,
                     S, Subeq, Var, conj, disj, to_text)

__all__ = ["enumerate_formulas", "hintikka_sentence", "CONNECTIVES"]

CONNECTIVES = ("~", "&", "|", "->")

_PREFIX = {IND: "x", UR: "p", SET: "X"}
_QUANT_SORTS = {"lord": (IND,), "lmon": (IND, SET), "lbs": (IND,), "l1s": (UR, SET)}


def _set_prefix(tag: str) -> str:
    return "x" if tag == "l1s" else "X"


def _atoms(tag: str, ctx: Tuple[Var, ...]) -> List:
    ind = [v for v in ctx if v.sort == IND]
    ur = [v for v in ctx if v.sort == UR]
    sets = [v for v in ctx if v.sort == SET]
    out: List = []
    if tag in ("lord", "lmon"):
        out += [Less(a, b) for a in ind for b in ind]
        out += [Eq(a, b) for a in ind for b in ind]
        if tag == "lmon":
            out += [In(a, s) for a in ind for s in sets]
    elif tag == "lbs":
        out += [Subeq(a, b) for a in ind for b in ind]
        out += [Eq(a, b) for a in ind for b in ind]
        out += [S(a) for a in ind]
    elif tag == "l1s":
        out += [Eq(a, b) for a in ur for b in ur]
        out += [In(a, s) for a in ur for s in sets]
        out += [S(s) for s in sets]
        out += [Eq(a, b) for a in sets for b in sets]
    else:
        raise ValueError(f"unknown language {tag!r}")
    return out


def _bind(tag: str, ctx: Tuple[Var, ...], sort: str) -> Var:
    prefix = _set_prefix(tag) if sort == SET else _PREFIX[sort]
    k = sum(1 for v in ctx if v.sort == sort)
    names = {v.name for v in ctx}
    while f"{prefix}{k}" in names:
        k += 1
    return Var(f"{prefix}{k}", sort)


def enumerate_formulas(tag: str, rank_bound: int, size_bound: int,
                       free: Sequence[Var] = (), set_quantifiers: bool = True,
                       connectives: Sequence[str] = CONNECTIVES) -> Iterator:
    """All formulas of ``tag`` with free variables among ``free``, quantifier
    rank at most ``rank_bound`` and at most ``size_bound`` nodes, in order of
    size.  Restartable and deterministic."""
    connectives = tuple(connectives)
    sorts = _QUANT_SORTS[tag]
    if not set_quantifiers:
        sorts = tuple(s for s in sorts if s != SET)

    def exact(n: int, r: int, ctx: Tuple[Var, ...]) -> Tuple:
        # formulas of size exactly n and rank at most r; a formula of size n
        # has rank below n, so clamping lets different bounds share objects
        return _exact(n, min(r, n - 1), ctx)

    @lru_cache(maxsize=None)
    def _exact(n: int, r: int, ctx: Tuple[Var, ...]) -> Tuple:
        if n < 1:
            return ()
        if n == 1:
            return tuple(_atoms(tag, ctx))
        out: List = []
        if "~" in connectives:
            out += [Not(g) for g in exact(n - 1, r, ctx)]
        for sym, op in (("&", And), ("|", Or), ("->", Implies)):
            if sym not in connectives:
                continue
            for k in range(1, n - 1):
                lefts = exact(k, r, ctx)
                if not lefts:
                    continue
                rights = exact(n - 1 - k, r, ctx)
                out += [op(a, b) for a in lefts for b in rights]
        if r > 0:
            for sort in sorts:
                v = _bind(tag, ctx, sort)
                bodies = exact(n - 1, r - 1, ctx + (v,))
                out += [Exists(v, b) for b in bodies]
                out += [Forall(v, b) for b in bodies]
        return tuple(out)

    ctx = tuple(free)
    for n in range(1, size_bound + 1):
        yield from exact(n, rank_bound, ctx)


# -- Hintikka sentences -----------------------------------------------------------

def _atomic_type(m: FiniteStructure, xs: Sequence[Var], values: Sequence[int]):
    lt = m.relations["lt"].tuples
    parts = []
    for i, j in permutations(range(len(xs)), 2):
        atom = Less(xs[i], xs[j])
        parts.append(atom if (values[i], values[j]) in lt else Not(atom))
    for i, j in combinations(range(len(xs)), 2):
        atom = Eq(xs[i], xs[j])
        parts.append(atom if values[i] == values[j] else Not(atom))
    return conj(parts)


def _dedup(formulas):
    seen, out = set(), []
    for f in formulas:
        key = to_text(f, abbreviate=False)
        if key not in seen:
            seen.add(key)
            out.append(f)
    return out


def hintikka_sentence(m: FiniteStructure, rank: int, values: Sequence[int] = ()):
    """The rank-``rank`` Hintikka formula of ``values`` in a linear order.

    With no values this is a sentence true exactly in the linear orders that
    agree with ``m`` on every sentence of quantifier rank at most ``rank``.
    Variables are ``x0, x1, ...`` in order of binding.
    """
    xs = [Var(f"x{i}", IND) for i in range(len(values) + 1)]
    if rank == 0:
        return _atomic_type(m, xs[:len(values)], values)
    x = xs[len(values)]
    children = _dedup(hintikka_sentence(m, rank - 1, tuple(values) + (b,))
                      for b in range(m.universe))
    forth = [Exists(x, c) for c in children]
    back = Forall(x, disj(children))
    return conj([_atomic_type(m, xs[:len(values)], values)] + forth + [back]) \
        if values else conj(forth + [back])


def agree_on(sentences, m: FiniteStructure, n: FiniteStructure) -> bool:
    return all(evaluate(f, m) == evaluate(f, n) for f in sentences)
