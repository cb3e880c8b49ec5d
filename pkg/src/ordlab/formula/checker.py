"""Model checking on explicit finite structures, plus syntactic classification.

Evaluation works on truth tables: every subformula becomes a boolean array
with one axis per variable (length 1 where the variable is not free), so
connectives are broadcasting operations and quantifiers are ``any``/``all``
along an axis.

Variable domains: individual variables range over the universe, urelement and
set variables over the ``ur`` and ``set`` sorts of a two-sorted structure.
Without a ``set`` sort, set variables range over all subsets of the universe
(as bitmasks), or over the cofinal ones when ``cof`` is set.
"""

from __future__ import annotations

import weakref
from typing import Dict, Mapping, Optional

import numpy as np

from ..structures import FiniteStructure
from .syntax import (IND, SET, UR, And, Bottom, Eq, Exists, Forall, Implies, In, Less,
                     Not, Or, S, Subeq, Top, Var, all_vars, free_vars, subformulas)

__all__ = [
    "EvalError", "SignatureError", "evaluate", "evaluate_batch", "truth_table", "TableCache", "quantifier_rank",
    "is_normal", "classify", "cof_sets", "set_domain",
]


class EvalError(ValueError):
    pass


class SignatureError(EvalError):
    pass


def cof_sets(m: FiniteStructure):
    """Subsets (bitmasks) of a finite linear order that contain its maximum.

    On a finite order "unbounded" means "reaches the last element", so these
    are exactly the cofinal sets; the empty order has only the empty set.
    """
    n = m.universe
    if n == 0:
        return [0]
    top = _maximum(m)
    return [mask for mask in range(1 << n) if mask >> top & 1]


def _maximum(m: FiniteStructure) -> int:
    lt = m.relations.get("lt")
    if lt is None:
        raise SignatureError("cofinal sets need a linear order (relation 'lt')")
    for x in range(m.universe):
        if not any((x, y) in lt.tuples for y in range(m.universe)):
            return x
    raise EvalError("order has no maximum")


_CACHE: "weakref.WeakKeyDictionary[FiniteStructure, Dict]" = weakref.WeakKeyDictionary()


def _tables(m: FiniteStructure) -> Dict:
    t = _CACHE.get(m)
    if t is None:
        t = {}
        _CACHE[m] = t
    return t


def _relation_matrix(m: FiniteStructure, name: str) -> np.ndarray:
    tables = _tables(m)
    key = ("rel", name)
    if key not in tables:
        rel = m.relations.get(name)
        if rel is None or rel.arity != 2:
            raise SignatureError(f"structure has no binary relation {name!r}")
        mat = np.zeros((m.universe, m.universe), dtype=bool)
        if rel.tuples:
            idx = np.array(sorted(rel.tuples))
            mat[idx[:, 0], idx[:, 1]] = True
        tables[key] = mat
    return tables[key]


def _small_vector(m: FiniteStructure) -> np.ndarray:
    tables = _tables(m)
    if "S" not in tables:
        if not m.has_small_predicate():
            raise SignatureError("structure has no small-set predicate S")
        tables["S"] = np.array([m.in_ideal(e) for e in range(m.universe)], dtype=bool)
    return tables["S"]


def set_domain(m: FiniteStructure, cof: bool = False) -> np.ndarray:
    if m.sorts is not None and SET in m.sorts:
        return np.array(m.sorts[SET], dtype=np.int64)
    if cof:
        return np.array(cof_sets(m), dtype=np.int64)
    return np.arange(1 << m.universe, dtype=np.int64)


def _domain(m: FiniteStructure, var: Var, cof: bool) -> np.ndarray:
    if var.sort == IND:
        return np.arange(m.universe, dtype=np.int64)
    if var.sort == UR:
        if m.sorts is None or UR not in m.sorts:
            raise SignatureError("urelement variables need a two-sorted structure")
        return np.array(m.sorts[UR], dtype=np.int64)
    return set_domain(m, cof)


def _subset_sets(m: FiniteStructure) -> bool:
    # set variables are bitmasks rather than elements of a set sort
    return m.sorts is None or SET not in m.sorts


class TableCache:
    """Truth tables of formulas over one or several structures, shared across
    calls.

    Every variable seen gets a fixed axis counted from the end of the array,
    just before a final axis that runs over the structures, so a table
    computed for one formula broadcasts correctly inside any other.  With
    several structures, domains are padded to a common length and the padding
    is masked out by the quantifiers.  Pass the same cache to :func:`evaluate`
    (single structure) or :func:`evaluate_batch` when checking many formulas
    that share subformulas; ``max_entries`` bounds the memo, which is emptied
    whenever it fills up.
    """

    def __init__(self, m, cof: bool = False, max_entries: Optional[int] = None):
        self.structures = [m] if isinstance(m, FiniteStructure) else list(m)
        if not self.structures:
            raise ValueError("no structures to evaluate on")
        self.m = self.structures[0]
        self.cof = cof
        self.pos: Dict[Var, int] = {}
        # real domain of each variable in every structure
        self.doms: Dict[Var, list] = {}
        self.width: Dict[Var, int] = {}
        self.valid: Dict[Var, np.ndarray] = {}
        self.nonempty: Dict[Var, np.ndarray] = {}
        self.memo: Dict[object, np.ndarray] = {}
        self.max_entries = max_entries

    @property
    def domains(self) -> Dict[Var, np.ndarray]:
        """Domains in the first structure."""
        return {v: d[0] for v, d in self.doms.items()}

    def position(self, v: Var) -> int:
        k = self.pos.get(v)
        if k is None:
            if len(self.pos) >= 31:
                raise EvalError("too many distinct variables for table evaluation")
            doms = [_domain(m, v, self.cof) for m in self.structures]
            width = max(1, max(len(d) for d in doms))
            k = self.pos[v] = len(self.pos)
            self.doms[v] = doms
            self.width[v] = width
            mask = np.zeros((width, len(doms)), dtype=bool)
            for i, d in enumerate(doms):
                mask[:len(d), i] = True
            self.valid[v] = self.place(mask, [v])
            self.nonempty[v] = np.array([len(d) > 0 for d in doms])
        return k

    def place(self, arr: np.ndarray, vars_) -> np.ndarray:
        """Put the axes of ``arr`` (one per entry of ``vars_``, then one per
        structure) on their fixed axes."""
        ks = [self.position(v) for v in vars_]
        order = sorted(range(len(vars_)), key=lambda i: -ks[i])
        arr = arr.transpose(order + [len(vars_)])
        ndim = max(ks) + 2
        shape = [1] * ndim
        for i in order:
            shape[ndim - 2 - ks[i]] = self.width[vars_[i]]
        shape[-1] = arr.shape[-1]
        return arr.reshape(shape)

    def _stack(self, compute, vars_) -> np.ndarray:
        # compute(i, *domains) for each structure, padded and stacked last
        for v in vars_:
            self.position(v)
        out = np.zeros([self.width[v] for v in vars_] + [len(self.structures)], dtype=bool)
        for i, m in enumerate(self.structures):
            ds = [self.doms[v][i] for v in vars_]
            if all(len(d) for d in ds):
                out[tuple(slice(len(d)) for d in ds) + (i,)] = compute(m, *ds)
        return self.place(out, vars_)

    def binary(self, matrix_of, x: Var, y: Var) -> np.ndarray:
        if x == y:
            return self._stack(lambda m, a: np.diagonal(matrix_of(m, a, a)), [x])
        return self._stack(matrix_of, [x, y])

    def table(self, f, store: bool = True) -> np.ndarray:
        t = self.memo.get(f)
        if t is None:
            t = self._compute(f)
            if store:
                if self.max_entries is not None and len(self.memo) >= self.max_entries:
                    self.memo.clear()
                self.memo[f] = t
        return t

    def _compute(self, f) -> np.ndarray:
        # connectives first: they are the bulk of any large sweep
        kind = type(f)
        if kind is Not:
            return ~self.table(f.body)
        if kind is And:
            return self.table(f.left) & self.table(f.right)
        if kind is Or:
            return self.table(f.left) | self.table(f.right)
        if kind is Implies:
            return ~self.table(f.left) | self.table(f.right)
        if kind is Exists or kind is Forall:
            return self._quantify(f.var, self.table(f.body), kind is Exists)
        if kind is Top:
            return np.ones((1,), dtype=bool)
        if kind is Bottom:
            return np.zeros((1,), dtype=bool)
        if kind is Less:
            return self.binary(lambda m, a, b: _relation_matrix(m, "lt")[np.ix_(a, b)],
                               f.left, f.right)
        if kind is Subeq:
            return self.binary(lambda m, a, b: _relation_matrix(m, "sub")[np.ix_(a, b)],
                               f.left, f.right)
        if kind is Eq:
            return self.binary(lambda m, a, b: a[:, None] == b[None, :], f.left, f.right)
        if kind is S:
            for m in self.structures:
                if f.arg.sort == SET and _subset_sets(m):
                    raise SignatureError("S needs a set sort or a powerset algebra")
            return self._stack(lambda m, a: _small_vector(m)[a], [f.arg])
        if kind is In:
            return self.binary(_member, f.elem, f.set)
        raise TypeError(f"not a formula: {f!r}")

    def _quantify(self, v: Var, body: np.ndarray, exists: bool) -> np.ndarray:
        k = self.position(v)
        if body.ndim <= k + 1 or body.shape[body.ndim - 2 - k] == 1:
            # the variable does not occur free in the body
            if self.nonempty[v].all():
                return body
            return body & self.nonempty[v] if exists else body | ~self.nonempty[v]
        ax = body.ndim - 2 - k
        if exists:
            return np.any(body & self.valid[v], axis=ax, keepdims=True)
        return np.all(body | ~self.valid[v], axis=ax, keepdims=True)

    def lookup(self, f, indices: Dict[Var, int], structure: int = 0) -> bool:
        # the formula itself is not memoized, only its subformulas: callers
        # sweeping many formulas would otherwise keep every table alive
        t = self.table(f, store=False)
        t = t[..., structure if t.shape[-1] > 1 else 0]
        if not indices:
            return bool(t.flat[0])
        need = max(self.pos[v] for v in indices) + 1
        if t.ndim < need:
            t = t.reshape((1,) * (need - t.ndim) + t.shape)
        idx = [0] * t.ndim
        for v, i in indices.items():
            ax = t.ndim - 1 - self.pos[v]
            if t.shape[ax] > 1:
                idx[ax] = i
        return bool(t[tuple(idx)])


def _member(m: FiniteStructure, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if _subset_sets(m):
        return ((b[None, :] >> a[:, None]) & 1).astype(bool)
    return _relation_matrix(m, "in")[np.ix_(a, b)]


def truth_table(f, m: FiniteStructure, cof: bool = False, cache: Optional[TableCache] = None):
    """The satisfying table of ``f`` over its free variables.

    Returns ``(free, table, domains)``: free variables sorted by name, a
    boolean array with one axis per free variable, and the domain of each.
    """
    cache = _single_cache(m, cof, cache)
    free = sorted(free_vars(f), key=lambda v: (v.name, v.sort))
    for v in free:
        cache.position(v)
    t = cache.table(f)[..., 0]
    need = max((cache.pos[v] for v in free), default=-1) + 1
    if t.ndim < need:
        t = t.reshape((1,) * (need - t.ndim) + t.shape)
    # bring each free variable's axis to the front in name order, drop the rest
    axes = [t.ndim - 1 - cache.pos[v] for v in free]
    rest = [i for i in range(t.ndim) if i not in axes]
    t = t.transpose(axes + rest)
    t = t.reshape(t.shape[:len(axes)] + (-1,))[..., 0] if rest else t
    doms = [cache.doms[v][0] for v in free]
    t = np.broadcast_to(t, [cache.width[v] for v in free])
    t = t[tuple(slice(len(d)) for d in doms)].copy()
    return free, t, doms


def _single_cache(m, cof, cache):
    if cache is None:
        return TableCache(m, cof)
    if cache.structures != [m] or cache.cof != cof:
        raise ValueError("cache belongs to a different structure")
    return cache


def _value_index(var: Var, value, domain: np.ndarray) -> int:
    if var.sort == SET and not isinstance(value, (int, np.integer)):
        mask = 0
        for e in value:
            mask |= 1 << int(e)
        value = mask
    hits = np.nonzero(domain == int(value))[0]
    if len(hits) == 0:
        raise EvalError(f"value {value!r} is outside the domain of {var}")
    return int(hits[0])


def evaluate(f, m: FiniteStructure, assignment: Optional[Mapping] = None,
             cof: bool = False, cache: Optional[TableCache] = None) -> bool:
    """Truth of ``f`` in ``m`` under ``assignment`` (variable name -> value).

    Set variables over a structure without a set sort take a bitmask or an
    iterable of elements; everything else takes an element index.  A shared
    ``cache`` must have been built for the same structure and ``cof`` flag.
    """
    assignment = dict(assignment or {})
    cache = _single_cache(m, cof, cache)
    indices = {}
    for v in free_vars(f):
        if v.name not in assignment:
            raise EvalError(f"unbound variable {v.name}")
        cache.position(v)
        indices[v] = _value_index(v, assignment[v.name], cache.doms[v][0])
    return cache.lookup(f, indices)


def evaluate_batch(f, cache: TableCache) -> np.ndarray:
    """Truth of the sentence ``f`` in each structure of ``cache``."""
    free = free_vars(f)
    if free:
        raise EvalError(f"unbound variable {min(v.name for v in free)}")
    t = cache.table(f, store=False).reshape(-1)
    return t if len(t) > 1 else np.repeat(t, len(cache.structures))


# -- classification -----------------------------------------------------------

def quantifier_rank(f) -> int:
    if isinstance(f, (Exists, Forall)):
        return 1 + quantifier_rank(f.body)
    if isinstance(f, Not):
        return quantifier_rank(f.body)
    if isinstance(f, (And, Or, Implies)):
        return max(quantifier_rank(f.left), quantifier_rank(f.right))
    return 0


def is_normal(f) -> bool:
    """No quantified set variables."""
    return not any(isinstance(g, (Exists, Forall)) and g.var.sort == SET
                   for g in subformulas(f))


def classify(f) -> str:
    """``Normal``, ``Pi11`` (universal set block over a normal matrix),
    ``Sigma11`` (existential block) or ``Other``."""
    if is_normal(f):
        return "Normal"
    for quant, name in ((Forall, "Pi11"), (Exists, "Sigma11")):
        g = f
        while isinstance(g, quant) and g.var.sort == SET:
            g = g.body
        if g is not f and is_normal(g):
            return name
    return "Other"
