"""Finite experiments with segment ideals, access ideals and preorder surgery.

Subsets of the ground set ``{0, ..., n-1}`` are bitmasks.  A total preorder
is a boolean matrix ``rel[x, y]`` meaning ``x`` is below or level with ``y``.

Finite conventions:

* strict segments ``{y : y strictly below x}`` generate the segment ideal; the
  non-strict segments always contain the whole ground set, so that version is
  reported as improper;
* a witness preorder for an access ideal must have a top class that is a
  proper subset of the ground (the finite stand-in for "no last element").
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

__all__ = [
    "PreorderSpec", "IdealFamily", "SurgeryInstance", "IMPROPER", "BudgetExceeded",
    "InvalidInstance", "seg_ideal", "total_preorders", "is_access_ideal",
    "is_minimal_access", "surgery", "verify_surgery_claims", "cofinality",
    "AccessResult", "MinimalResult", "all_ideals", "random_instance",
]

ACCESS_LIMIT = 6
MINIMAL_LIMIT = 5


class BudgetExceeded(RuntimeError):
    pass


class InvalidInstance(ValueError):
    pass


def _mask(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << int(i)
    return m


def _items(mask: int) -> List[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _subsets(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass(frozen=True, eq=False)
class PreorderSpec:
    size: int
    rel: np.ndarray

    def __post_init__(self):
        rel = np.asarray(self.rel, dtype=bool)
        object.__setattr__(self, "rel", rel)
        if rel.shape != (self.size, self.size):
            raise ValueError("relation matrix has the wrong shape")
        if not rel.diagonal().all():
            raise ValueError("preorder is not reflexive")
        if not (rel | rel.T).all():
            raise ValueError("preorder is not total")
        if not _is_transitive(rel):
            raise ValueError("preorder is not transitive")

    def __eq__(self, other):
        return (isinstance(other, PreorderSpec) and self.size == other.size
                and bool((self.rel == other.rel).all()))

    def __hash__(self):
        return hash((self.size, self.rel.tobytes()))

    @classmethod
    def from_ranks(cls, ranks: Sequence[int]) -> "PreorderSpec":
        r = np.asarray(ranks)
        return cls(len(r), r[:, None] <= r[None, :])

    @classmethod
    def linear(cls, n: int) -> "PreorderSpec":
        return cls.from_ranks(range(n))

    def ranks(self) -> List[int]:
        """Class index of each element, counted from the bottom."""
        below = self.strict().sum(axis=0)  # number of elements strictly below
        levels = sorted(set(below.tolist()))
        return [levels.index(b) for b in below.tolist()]

    def strict(self) -> np.ndarray:
        return self.rel & ~self.rel.T

    def below(self, x: int) -> int:
        """The initial segment of elements below or level with ``x``."""
        return _mask(np.nonzero(self.rel[:, x])[0])

    def strictly_below(self, x: int) -> int:
        return _mask(np.nonzero(self.strict()[:, x])[0])

    def top_class(self) -> int:
        if self.size == 0:
            return 0
        return _mask(i for i in range(self.size) if self.rel[:, i].all())

    def is_cofinal(self, mask: int) -> bool:
        """Contains an element of the top class."""
        return bool(mask & self.top_class()) or self.size == 0

    def to_json(self) -> dict:
        return {"size": self.size, "rel": self.rel.tolist()}

    @classmethod
    def from_json(cls, data) -> "PreorderSpec":
        return cls(int(data["size"]), np.array(data["rel"], dtype=bool).reshape(
            int(data["size"]), int(data["size"])))


def _is_transitive(rel: np.ndarray) -> bool:
    if rel.size == 0:
        return True
    comp = (rel.astype(np.int64) @ rel.astype(np.int64)) > 0
    return not (comp & ~rel).any()


def _closure(rel: np.ndarray) -> np.ndarray:
    rel = rel.copy()
    n = rel.shape[0]
    rel[np.arange(n), np.arange(n)] = True
    for k in range(n):
        rel |= rel[:, k:k + 1] & rel[k:k + 1, :]
    return rel


@dataclass(frozen=True)
class IdealFamily:
    ground: int
    members: FrozenSet[int]

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        full = (1 << self.ground) - 1
        if 0 not in self.members:
            raise ValueError("an ideal contains the empty set")
        for m in self.members:
            if m & ~full:
                raise ValueError(f"member {_items(m)} leaves the ground set")
            for i in _items(m):
                if m & ~(1 << i) not in self.members:
                    raise ValueError("family is not downward closed")
        for a in self.members:
            for b in self.members:
                if a | b not in self.members:
                    raise ValueError("family is not closed under unions")
        if full in self.members:
            raise ValueError("family is improper (contains the ground set)")

    @classmethod
    def principal(cls, ground: int, mask: int) -> "IdealFamily":
        return cls(ground, frozenset(_subsets(mask)))

    def generator(self) -> int:
        """Union of all members; a finite ideal is the powerset of it."""
        out = 0
        for m in self.members:
            out |= m
        return out

    def __le__(self, other: "IdealFamily") -> bool:
        return self.members <= other.members

    def to_json(self) -> dict:
        return {"ground": self.ground, "members": [_items(m) for m in sorted(self.members)]}

    @classmethod
    def from_json(cls, data) -> "IdealFamily":
        return cls(int(data["ground"]), frozenset(_mask(m) for m in data["members"]))


class _Improper:
    def __repr__(self):
        return "IMPROPER"

    def __bool__(self):
        return False


IMPROPER = _Improper()


def seg_ideal(p: PreorderSpec, strict: bool = True):
    """All sets bounded by a segment of ``p``, or ``IMPROPER``."""
    segs = [p.strictly_below(x) if strict else p.below(x) for x in range(p.size)]
    full = (1 << p.size) - 1
    if not strict and p.size > 0 and full in segs:
        return IMPROPER
    members = {0}
    for s in segs:
        members.update(_subsets(s))
    try:
        return IdealFamily(p.size, frozenset(members))
    except ValueError:
        return IMPROPER


def total_preorders(n: int, min_classes: int = 1) -> Iterator[PreorderSpec]:
    """Every total preorder on ``n`` points, by number of classes and then by
    the lexicographic order of the rank vectors."""
    for k in range(max(min_classes, 1 if n else 0), n + 1):
        for ranks in product(range(k), repeat=n):
            if len(set(ranks)) == k:
                yield PreorderSpec.from_ranks(ranks)


@dataclass
class AccessResult:
    witness: Optional[PreorderSpec]
    examined: int

    def __bool__(self):
        return self.witness is not None

    def to_json(self) -> dict:
        if self.witness is None:
            return {"access": False, "examined": self.examined}
        return {"access": True, "examined": self.examined,
                "witness": {"ranks": self.witness.ranks(), **self.witness.to_json()}}


def is_access_ideal(i: IdealFamily, limit: int = ACCESS_LIMIT) -> AccessResult:
    """Search for a preorder whose strict segment ideal lies inside ``i``."""
    if i.ground > limit:
        raise BudgetExceeded(f"ground size {i.ground} exceeds the access search limit {limit}")
    examined = 0
    for p in total_preorders(i.ground, min_classes=2):
        examined += 1
        seg = seg_ideal(p, strict=True)
        if seg and seg.members <= i.members:
            return AccessResult(p, examined)
    return AccessResult(None, examined)


@dataclass
class MinimalResult:
    minimal: bool
    access: AccessResult
    blocking: Optional[IdealFamily] = None
    blocking_witness: Optional[PreorderSpec] = None
    checked: List[int] = field(default_factory=list)

    def __bool__(self):
        return self.minimal

    def to_json(self) -> dict:
        out = {"minimal": self.minimal, "access": self.access.to_json(),
               "checked_subideals": [_items(m) for m in self.checked]}
        if self.blocking is not None:
            out["blocking"] = self.blocking.to_json()
            out["blocking_witness"] = {"ranks": self.blocking_witness.ranks()}
        return out


def is_minimal_access(i: IdealFamily, limit: int = MINIMAL_LIMIT) -> MinimalResult:
    """Access, and no proper sub-ideal is access.

    Any witness for a sub-ideal also witnesses its own segment ideal, which is
    principal, so it is enough to try the principal sub-ideals.
    """
    if i.ground > limit:
        raise BudgetExceeded(f"ground size {i.ground} exceeds the minimality limit {limit}")
    access = is_access_ideal(i)
    if not access:
        return MinimalResult(False, access)
    checked = []
    for gen in sorted(i.members, key=lambda m: (bin(m).count("1"), m)):
        sub = IdealFamily.principal(i.ground, gen)
        if sub.members == i.members:
            continue
        checked.append(gen)
        res = is_access_ideal(sub)
        if res:
            return MinimalResult(False, access, sub, res.witness, checked)
    return MinimalResult(True, access, checked=checked)


def all_ideals(ground: int) -> List[IdealFamily]:
    """Every proper ideal on ``ground`` points, by brute force over families."""
    full = (1 << ground) - 1
    candidates = [m for m in range(1 << ground) if m != full]
    out = []
    for bits in range(1 << len(candidates)):
        members = frozenset(c for k, c in enumerate(candidates) if bits >> k & 1)
        try:
            out.append(IdealFamily(ground, members))
        except ValueError:
            pass
    return out


# -- surgery -----------------------------------------------------------------------

@dataclass(frozen=True)
class SurgeryInstance:
    base: PreorderSpec
    x0: int
    a: FrozenSet[int]
    b: FrozenSet[int]
    zip: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "a", frozenset(self.a))
        object.__setattr__(self, "b", frozenset(self.b))
        object.__setattr__(self, "zip", tuple(tuple(z) for z in self.zip))

    @property
    def y_set(self) -> FrozenSet[int]:
        """Elements strictly above ``x0``."""
        seg = self.base.below(self.x0)
        return frozenset(x for x in range(self.base.size) if not seg >> x & 1)

    def validate(self) -> None:
        base, n = self.base, self.base.size
        if not 0 <= self.x0 < n:
            raise InvalidInstance("x0 is outside the base")
        if any(not 0 <= x < n for x in self.a | self.b):
            raise InvalidInstance("a and b must be subsets of the base")
        if not base.is_cofinal(_mask(self.a)):
            raise InvalidInstance("a is not cofinal (no element of the top class)")
        seg = base.below(self.x0)
        if any(not seg >> z & 1 for z in self.b):
            raise InvalidInstance("b is not inside the segment of x0")
        a_star = self.a & self.y_set
        ys = [y for y, _ in self.zip]
        zs = [z for _, z in self.zip]
        if len(self.b) != len(a_star):
            raise InvalidInstance("|b| differs from |a above x0|")
        if sorted(ys) != sorted(a_star) or len(set(ys)) != len(ys):
            raise InvalidInstance("zip does not enumerate a above x0 exactly once")
        if sorted(zs) != sorted(self.b) or len(set(zs)) != len(zs):
            raise InvalidInstance("zip does not enumerate b exactly once")

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "x0": self.x0, "a": sorted(self.a),
                "b": sorted(self.b), "zip": [list(z) for z in self.zip]}

    @classmethod
    def from_json(cls, data) -> "SurgeryInstance":
        return cls(PreorderSpec.from_json(data["base"]), int(data["x0"]),
                   frozenset(data["a"]), frozenset(data["b"]),
                   tuple(tuple(z) for z in data["zip"]))


def surgery(inst: SurgeryInstance) -> PreorderSpec:
    """Cut ``b`` out of the preorder and glue each of its points level with its
    partner above ``x0``; return the reflexive-transitive closure."""
    inst.validate()
    n = inst.base.size
    keep = np.ones(n, dtype=bool)
    keep[list(inst.b)] = False
    rel = inst.base.rel & keep[:, None] & keep[None, :]
    for y, z in inst.zip:
        rel[y, z] = rel[z, y] = True
    return PreorderSpec(n, _closure(rel))


def verify_surgery_claims(inst: SurgeryInstance, p1: PreorderSpec) -> List[dict]:
    """Check the two finite claims about the result of :func:`surgery`.

    1. every strictly bounded set of ``p1`` lies in the ideal generated by
       the strict segments of the base and the segment of ``x0``;
    2. ``b`` contains a top element of ``p1``, so it is not strictly bounded.
    """
    base = inst.base
    old = seg_ideal(base, strict=True)
    new = seg_ideal(p1, strict=True)
    gen = base.below(inst.x0)
    for m in old.members:
        gen |= m
    outside = sorted(m for m in new.members if m & ~gen)
    claim1 = {"assertion": "seg_contained", "holds": not outside,
              "witness": {"generator": _items(gen),
                          "new_maximal": _items(new.generator()),
                          "counterexample": _items(outside[0]) if outside else None}}
    b = _mask(inst.b)
    tops = _items(b & p1.top_class())
    claim2 = {"assertion": "b_cofinal", "holds": bool(tops) and b not in new.members,
              "witness": {"b": sorted(inst.b), "top_elements_in_b": tops}}
    return [claim1, claim2]


def cofinality(p: PreorderSpec) -> int:
    """Least size of a cofinal subset on which the preorder is antisymmetric.

    Degenerate on finite preorders: one element of the top class suffices.
    """
    return 0 if p.size == 0 else 1


def random_instance(rng, max_size: int = 8) -> SurgeryInstance:
    """A valid instance with ``x0`` below the top class, so ``b`` is non-empty."""
    while True:
        n = rng.randint(2, max_size)
        k = rng.randint(2, n)
        ranks = [rng.randrange(k) for _ in range(n)]
        levels = sorted(set(ranks))
        if len(levels) < 2:
            continue
        base = PreorderSpec.from_ranks([levels.index(r) for r in ranks])
        top = base.top_class()
        candidates = [x for x in range(n) if not top >> x & 1]
        x0 = rng.choice(candidates)
        seg = _items(base.below(x0))
        y = [x for x in range(n) if not base.below(x0) >> x & 1]
        a_star = [t for t in y if top >> t & 1][:1]
        extra = [t for t in y if t not in a_star and rng.random() < 0.5]
        a_star = sorted(a_star + extra)
        if len(a_star) > len(seg):
            a_star = a_star[:len(seg)]
            if not any(top >> t & 1 for t in a_star):
                continue
        b = rng.sample(seg, len(a_star))
        a_low = [x for x in seg if rng.random() < 0.3]
        zs = b[:]
        rng.shuffle(zs)
        return SurgeryInstance(base, x0, frozenset(a_star + a_low), frozenset(b),
                               tuple(zip(a_star, zs)))


def dumps(obj) -> str:
    return json.dumps(obj.to_json() if hasattr(obj, "to_json") else obj,
                      separators=(",", ":"), sort_keys=True)
