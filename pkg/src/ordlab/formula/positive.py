"""Positive formulas in a set variable and their prenex normal form.

A formula is positive in ``X`` when it is built from order formulas (anything
without set variables) and atoms ``t in X`` using only conjunction,
disjunction and first-order quantifiers.  An implication counts when its
antecedent is an order formula, which is the same as a disjunction with the
negated antecedent.

:func:`moschovakis_prenex` rewrites a positive formula into the shape
``Q w1 ... Q wk . A u. (theta -> u in X)`` with ``theta`` quantifier-free and
free of ``X``.  The rewrite is valid whenever ``X`` is a proper subset of a
non-empty universe.
"""

from __future__ import annotations

from itertools import count
from typing import List, Optional, Tuple

from .syntax import (IND, SET, And, Bottom, Eq, Exists, Forall, Implies, In, Less, Not,
                     Or, Top, Var, all_vars, free_vars, substitute, subformulas)
from .checker import is_normal

__all__ = ["is_positive", "negative_occurrence", "moschovakis_prenex",
           "UnsupportedFragment", "in_prenex_shape"]


class UnsupportedFragment(ValueError):
    def __init__(self, message: str, subformula=None):
        super().__init__(message)
        self.subformula = subformula


def _set_free(f) -> bool:
    return not any(v.sort == SET for v in all_vars(f))


def _target(f, X: Optional[Var]) -> Optional[Var]:
    sets = [v for v in free_vars(f) if v.sort == SET]
    if X is not None:
        return X
    if len(sets) == 1:
        return sets[0]
    return None


def _positive(f, X: Var) -> bool:
    if _set_free(f):
        return True
    if isinstance(f, In):
        return f.set == X and f.elem.sort == IND
    if isinstance(f, (And, Or)):
        return _positive(f.left, X) and _positive(f.right, X)
    if isinstance(f, Implies):
        return _set_free(f.left) and _positive(f.right, X)
    if isinstance(f, (Exists, Forall)):
        return f.var.sort == IND and _positive(f.body, X)
    return False


def is_positive(f, X: Optional[Var] = None) -> bool:
    """Membership in the positive class for ``X`` (the unique free set
    variable when ``X`` is not given)."""
    if not is_normal(f):
        return False
    sets = {v for v in free_vars(f) if v.sort == SET}
    if X is None:
        if len(sets) > 1:
            return False
        X = next(iter(sets), None)
    elif sets - {X}:
        return False
    if X is None:
        return _set_free(f)
    return _positive(f, X)


def negative_occurrence(f):
    """First membership atom under an odd number of negations (antecedents of
    implications count as negated), or ``None``."""

    def walk(g, neg):
        if isinstance(g, In):
            return g if neg else None
        if isinstance(g, Not):
            return walk(g.body, not neg)
        if isinstance(g, Implies):
            return walk(g.left, not neg) or walk(g.right, neg)
        if isinstance(g, (And, Or)):
            return walk(g.left, neg) or walk(g.right, neg)
        if isinstance(g, (Exists, Forall)):
            return walk(g.body, neg)
        return None

    return walk(f, False)


# -- prenex form --------------------------------------------------------------

def in_prenex_shape(f, X: Var) -> bool:
    g = f
    while isinstance(g, (Exists, Forall)) and not (
            isinstance(g, Forall) and _shape_tail(g, X)):
        if g.var.sort != IND:
            return False
        g = g.body
    return isinstance(g, Forall) and _shape_tail(g, X)


def _quantifier_free(f) -> bool:
    return not any(isinstance(g, (Exists, Forall)) for g in subformulas(f))


def _shape_tail(g, X: Var) -> bool:
    u = g.var
    body = g.body
    return (u.sort == IND and isinstance(body, Implies) and body.right == In(u, X)
            and _quantifier_free(body.left) and _set_free(body.left))


class _Prenexer:
    def __init__(self, f, X: Var):
        self.X = X
        used = {v.name for v in all_vars(f)} | {X.name}
        self.fresh_names = (f"w{k}" for k in count() if f"w{k}" not in used)
        u = "u"
        k = 0
        while u in used:
            k += 1
            u = f"u{k}"
        self.u = Var(u, IND)
        used.add(u)

    def fresh(self) -> Var:
        return Var(next(self.fresh_names), IND)

    def rename_bound(self, f):
        """Give every bound variable a fresh name."""
        if isinstance(f, (Exists, Forall)):
            v = self.fresh()
            return type(f)(v, self.rename_bound(substitute(f.body, {f.var: v})))
        if isinstance(f, Not):
            return Not(self.rename_bound(f.body))
        if isinstance(f, (And, Or, Implies)):
            return type(f)(self.rename_bound(f.left), self.rename_bound(f.right))
        return f

    @staticmethod
    def order_prenex(f, neg=False) -> Tuple[List[Tuple[type, Var]], object]:
        """Prenex form of a set-free formula whose bound names are distinct,
        with negations pushed to the atoms (valid on non-empty domains)."""
        if isinstance(f, Not):
            return _Prenexer.order_prenex(f.body, not neg)
        if isinstance(f, Implies):
            return _Prenexer.order_prenex(Or(Not(f.left), f.right), neg)
        if isinstance(f, (And, Or)):
            p1, m1 = _Prenexer.order_prenex(f.left, neg)
            p2, m2 = _Prenexer.order_prenex(f.right, neg)
            op = type(f)
            if neg:
                op = Or if op is And else And
            return p1 + p2, op(m1, m2)
        if isinstance(f, (Exists, Forall)):
            q = type(f)
            if neg:
                q = Forall if q is Exists else Exists
            p, m = _Prenexer.order_prenex(f.body, neg)
            return [(q, f.var)] + p, m
        return [], (Not(f) if neg else f)

    def nf(self, f) -> Tuple[List[Tuple[type, Var]], object]:
        """Prefix and theta with ``f`` equivalent to prefix A u.(theta -> u in X)."""
        X, u = self.X, self.u
        if _set_free(f):
            prefix, matrix = self.order_prenex(f)
            return prefix, _negate(matrix)
        if isinstance(f, In):
            return [], Eq(u, f.elem)
        if isinstance(f, And):
            p1, t1 = self.nf(f.left)
            p2, t2 = self.nf(f.right)
            return p1 + p2, Or(t1, t2)
        if isinstance(f, Implies):
            return self.nf(Or(Not(f.left), f.right))
        if isinstance(f, Or):
            p1, t1 = self.nf(f.left)
            p2, t2 = self.nf(f.right)
            v = self.fresh()
            t2v = substitute(t2, {u: v})
            # choosing v with theta2(v) selects the left disjunct, otherwise the right
            theta = Or(And(t1, t2v), And(t2, Not(t2v)))
            return p1 + p2 + [(Exists, v)], theta
        if isinstance(f, (Exists, Forall)):
            p, t = self.nf(f.body)
            return [(type(f), f.var)] + p, t
        raise UnsupportedFragment("not positive", f)


def _negate(f):
    if isinstance(f, Not):
        return f.body
    if isinstance(f, Top):
        return Bottom()
    if isinstance(f, Bottom):
        return Top()
    return Not(f)


def moschovakis_prenex(f, X: Optional[Var] = None):
    """Prenex form ``Q w. A u. (theta -> u in X)`` of a positive formula."""
    X = _target(f, X)
    if X is None:
        raise UnsupportedFragment("needs exactly one free set variable", f)
    if not is_positive(f, X):
        bad = negative_occurrence(f)
        if bad is None:
            bad = next((g for g in subformulas(f)
                        if not _set_free(g) and not _positive(g, X)
                        and not isinstance(g, (And, Or, Exists, Forall, Implies))), f)
        raise UnsupportedFragment("formula is not positive in " + X.name, bad)
    if in_prenex_shape(f, X):
        return f
    # small cases already of the shape up to notation
    g, prefix = f, []
    while isinstance(g, (Exists, Forall)):
        if isinstance(g, Forall) and isinstance(g.body, In) and g.body == In(g.var, X):
            out = Forall(g.var, Implies(Top(), g.body))
            for q, v in reversed(prefix):
                out = q(v, out)
            return out
        prefix.append((type(g), g.var))
        g = g.body
    p = _Prenexer(f, X)
    prefix, theta = p.nf(p.rename_bound(f))
    out = Forall(p.u, Implies(theta, In(p.u, X)))
    for q, v in reversed(prefix):
        out = q(v, out)
    return out
