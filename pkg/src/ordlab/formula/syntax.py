"""Formula AST shared by the four languages, plus the canonical printer."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, Iterator, Optional, Union

__all__ = [
    "IND", "UR", "SET", "LANGS", "Var", "Less", "Eq", "Subeq", "S", "In", "Top",
    "Bottom", "Not", "And", "Or", "Implies", "Exists", "Forall", "Formula",
    "free_vars", "all_vars", "size", "to_text", "substitute", "atom_formula",
    "match_atom", "conj", "disj",
]

IND, UR, SET = "ind", "ur", "set"
LANGS = ("lord", "lbs", "l1s", "lmon")


@dataclass(frozen=True)
class Var:
    name: str
    sort: str = IND

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Less:
    left: Var
    right: Var


@dataclass(frozen=True)
class Eq:
    left: Var
    right: Var


@dataclass(frozen=True)
class Subeq:
    left: Var
    right: Var


@dataclass(frozen=True)
class S:
    arg: Var


@dataclass(frozen=True)
class In:
    elem: Var
    set: Var


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: Var
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: Var
    body: "Formula"


Atomic = Union[Less, Eq, Subeq, S, In, Top, Bottom]
Formula = Union[Atomic, Not, And, Or, Implies, Exists, Forall]
ATOMS = (Less, Eq, Subeq, S, In, Top, Bottom)
BINARY = (And, Or, Implies)
QUANT = (Exists, Forall)


def _cached_hash(self):
    # formulas are hashed constantly as memo keys; the generated hash walks
    # the whole tree every time
    try:
        return self.__dict__["_h"]
    except KeyError:
        h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self.__dataclass_fields__))
        object.__setattr__(self, "_h", h)
        return h


for _cls in ATOMS + (Not,) + BINARY + QUANT:
    _cls.__hash__ = _cached_hash


def node_memo(f, key: str, compute):
    """Value of ``compute(f)`` stored on the node itself, so it lives exactly
    as long as the formula does."""
    d = f.__dict__
    if key not in d:
        object.__setattr__(f, key, compute(f))
    return d[key]


def _shared(key: str, compute):
    # the root's value is computed afresh, values for its subformulas are
    # stored on them: shared subtrees pay once, while roots held elsewhere
    # (say by an enumerator) do not accumulate cached data
    def inner(f):
        return node_memo(f, key, compute)

    def outer(f):
        d = f.__dict__
        return d[key] if key in d else compute(f)

    return outer, inner


def atom_vars(f) -> tuple:
    if isinstance(f, (Less, Eq, Subeq)):
        return (f.left, f.right)
    if isinstance(f, S):
        return (f.arg,)
    if isinstance(f, In):
        return (f.elem, f.set)
    return ()


def _free_vars(f) -> FrozenSet[Var]:
    if isinstance(f, ATOMS):
        return frozenset(atom_vars(f))
    if isinstance(f, Not):
        return _fv_sub(f.body)
    if isinstance(f, BINARY):
        return _fv_sub(f.left) | _fv_sub(f.right)
    return _fv_sub(f.body) - {f.var}


def _all_vars(f) -> FrozenSet[Var]:
    if isinstance(f, ATOMS):
        return frozenset(atom_vars(f))
    if isinstance(f, Not):
        return _av_sub(f.body)
    if isinstance(f, BINARY):
        return _av_sub(f.left) | _av_sub(f.right)
    return _av_sub(f.body) | {f.var}


free_vars, _fv_sub = _shared("_fv", _free_vars)
all_vars, _av_sub = _shared("_av", _all_vars)


def subformulas(f) -> Iterator:
    yield f
    if isinstance(f, Not) or isinstance(f, QUANT):
        yield from subformulas(f.body)
    elif isinstance(f, BINARY):
        yield from subformulas(f.left)
        yield from subformulas(f.right)


def size(f) -> int:
    """Number of AST nodes (variables are not counted)."""
    if isinstance(f, ATOMS):
        return 1
    if isinstance(f, (Not, Exists, Forall)):
        return 1 + size(f.body)
    return 1 + size(f.left) + size(f.right)


def conj(parts):
    parts = list(parts)
    if not parts:
        return Top()
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts):
    parts = list(parts)
    if not parts:
        return Bottom()
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def substitute(f, mapping):
    """Replace free variables by variables (capture is the caller's concern)."""
    if not mapping:
        return f
    if isinstance(f, ATOMS):
        if isinstance(f, (Top, Bottom)):
            return f
        args = [mapping.get(v, v) for v in atom_vars(f)]
        return type(f)(*args)
    if isinstance(f, Not):
        return Not(substitute(f.body, mapping))
    if isinstance(f, BINARY):
        return type(f)(substitute(f.left, mapping), substitute(f.right, mapping))
    inner = {k: v for k, v in mapping.items() if k != f.var}
    return type(f)(f.var, substitute(f.body, inner))


# -- Atom(y) macro ------------------------------------------------------------

@lru_cache(maxsize=256)
def atom_formula(y: Var, z: Optional[Var] = None, w: Optional[Var] = None):
    """``y`` is an atom of the algebra: non-zero, and everything below it is
    zero or ``y`` itself.  Zero is expressed as "below everything".

    Formulas are immutable, so the same expansion object is handed out for
    repeated requests."""
    z = z or Var("z" if y.name != "z" else "z1", y.sort)
    w = w or Var("w" if y.name not in ("w", z.name) else "w1", y.sort)
    nonzero = Not(Forall(w, Subeq(y, w)))
    below = Forall(z, Implies(Subeq(z, y), Or(Forall(w, Subeq(z, w)), Eq(z, y))))
    return And(nonzero, below)


def match_atom(f) -> Optional[Var]:
    """The ``y`` if ``f`` is an expansion of ``Atom(y)`` (up to bound names)."""
    if not isinstance(f, And):
        return None
    a, b = f.left, f.right
    if not (isinstance(a, Not) and isinstance(a.body, Forall)):
        return None
    w1 = a.body.var
    sub = a.body.body
    if not (isinstance(sub, Subeq) and sub.right == w1 and sub.left != w1):
        return None
    y = sub.left
    if not isinstance(b, Forall):
        return None
    z = b.var
    if z == y:
        return None
    body = b.body
    if not (isinstance(body, Implies) and body.left == Subeq(z, y)):
        return None
    rhs = body.right
    if not (isinstance(rhs, Or) and rhs.right == Eq(z, y) and isinstance(rhs.left, Forall)):
        return None
    w2 = rhs.left.var
    if w2 in (z, y) or rhs.left.body != Subeq(z, w2):
        return None
    return y


# -- printing ---------------------------------------------------------------

_LEVEL = {Implies: 1, Or: 2, And: 3}
_SYMBOL = {Implies: "->", Or: "|", And: "&"}


def _atom_text(f) -> str:
    if isinstance(f, Less):
        return f"{f.left} < {f.right}"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Subeq):
        return f"{f.left} <= {f.right}"
    if isinstance(f, S):
        return f"S({f.arg})"
    if isinstance(f, In):
        return f"{f.elem} in {f.set}"
    if isinstance(f, Top):
        return "true"
    return "false"


def to_text(f, abbreviate: bool = True) -> str:
    """Canonical text.  With ``abbreviate`` an inlined ``Atom(y)`` expansion
    prints as ``Atom(y)``; the parser reads it back into the same tree only
    when the bound names are the default ones."""

    def abbreviated(g) -> Optional[Var]:
        if not abbreviate:
            return None
        y = match_atom(g)
        return y if y is not None and g == atom_formula(y) else None

    def level(g) -> int:
        if abbreviated(g) is not None:
            return 5
        if isinstance(g, BINARY):
            return _LEVEL[type(g)]
        if isinstance(g, QUANT):
            return 0
        if isinstance(g, Not):
            return 4
        return 5

    def wrap(g, need: int) -> str:
        text = go(g)
        return f"({text})" if level(g) < need else text

    def go(g) -> str:
        y = abbreviated(g)
        if y is not None:
            return f"Atom({y})"
        if isinstance(g, ATOMS):
            return _atom_text(g)
        if isinstance(g, Not):
            return "~" + wrap(g.body, 4)
        if isinstance(g, QUANT):
            q = "A" if isinstance(g, Forall) else "E"
            return f"{q} {g.var}. {go(g.body)}"
        lv = _LEVEL[type(g)]
        if isinstance(g, Implies):
            left, right = wrap(g.left, lv + 1), wrap(g.right, lv)
        else:
            left, right = wrap(g.left, lv), wrap(g.right, lv + 1)
        return f"{left} {_SYMBOL[type(g)]} {right}"

    return go(f)
