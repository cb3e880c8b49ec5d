"""Explicit finite relational structures and a few standard builders.

A structure has a universe ``0..universe-1``, named relations given by their
tuples, and optionally an ``ideal``: a family of subsets of a ground set,
stored as bitmasks.  When an ideal is present the universe is the powerset of
that ground set (element ``e`` *is* the bitmask ``e``) and the unary predicate
``S`` holds of exactly the members of the family.

Two-sorted structures (urelements plus sets of urelements) keep both sorts in
one universe on disjoint index ranges and list them in ``sorts``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

__all__ = [
    "Relation", "FiniteStructure", "linear_order", "powerset_algebra",
    "two_sorted", "size_threshold_family", "parse_structure_spec",
]


@dataclass(frozen=True)
class Relation:
    arity: int
    tuples: FrozenSet[Tuple[int, ...]]

    def __contains__(self, item) -> bool:
        return item in self.tuples


@dataclass(frozen=True, eq=False)
class FiniteStructure:
    universe: int
    relations: Mapping[str, Relation] = field(default_factory=dict)
    ideal: Optional[FrozenSet[int]] = None
    sorts: Optional[Mapping[str, Tuple[int, ...]]] = None

    def __post_init__(self):
        if self.universe < 0:
            raise ValueError("universe size must be non-negative")
        for name, rel in self.relations.items():
            for tup in rel.tuples:
                if len(tup) != rel.arity:
                    raise ValueError(f"relation {name}: tuple {tup} has wrong arity")
                if any(not 0 <= x < self.universe for x in tup):
                    raise ValueError(f"relation {name}: tuple {tup} leaves the universe")
        if self.ideal is not None:
            ground = self.ground
            if ground is None:
                raise ValueError("an ideal needs a powerset universe (size 2**n)")
            top = (1 << ground) - 1
            for member in self.ideal:
                if not 0 <= member <= top:
                    raise ValueError(f"ideal member {member} is not a subset of the ground")
                # downward closure: dropping any single point stays inside
                for i in range(ground):
                    if member >> i & 1 and member & ~(1 << i) not in self.ideal:
                        raise ValueError("ideal family is not downward closed")
        if self.sorts is not None:
            for sort, elems in self.sorts.items():
                if any(not 0 <= x < self.universe for x in elems):
                    raise ValueError(f"sort {sort} leaves the universe")

    @property
    def ground(self) -> Optional[int]:
        """Size of the ground set when the universe is a powerset."""
        n = self.universe.bit_length() - 1
        return n if n >= 0 and 1 << n == self.universe else None

    def signature(self) -> Tuple[Tuple[Tuple[str, int], ...], bool]:
        rels = tuple(sorted((k, r.arity) for k, r in self.relations.items()))
        return rels, self.ideal is not None

    def in_ideal(self, element: int) -> bool:
        if self.ideal is not None:
            return element in self.ideal
        rel = self.relations.get("S")
        return rel is not None and (element,) in rel.tuples

    def has_small_predicate(self) -> bool:
        return self.ideal is not None or "S" in self.relations

    def elements(self, sort: Optional[str] = None) -> Tuple[int, ...]:
        if sort is None or self.sorts is None or sort not in self.sorts:
            return tuple(range(self.universe))
        return tuple(self.sorts[sort])

    def is_proper_ideal(self) -> bool:
        """Whether ``ideal`` satisfies all three ideal axioms (union closed,
        downward closed, top excluded)."""
        if self.ideal is None:
            return False
        top = self.universe - 1
        if top in self.ideal:
            return False
        return all(a | b in self.ideal for a in self.ideal for b in self.ideal)

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        out: dict = {
            "universe": self.universe,
            "relations": {k: sorted(list(t) for t in r.tuples)
                          for k, r in sorted(self.relations.items())},
        }
        if self.ideal is not None:
            out["ideal"] = [_mask_to_list(m) for m in sorted(self.ideal)]
        if self.sorts is not None:
            out["sorts"] = {k: list(v) for k, v in self.sorts.items()}
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "FiniteStructure":
        relations = {}
        for name, tuples in data.get("relations", {}).items():
            tuples = [tuple(t) for t in tuples]
            arity = len(tuples[0]) if tuples else 2
            relations[name] = Relation(arity, frozenset(tuples))
        ideal = data.get("ideal")
        if ideal is not None:
            ideal = frozenset(_list_to_mask(m) for m in ideal)
        sorts = data.get("sorts")
        if sorts is not None:
            sorts = {k: tuple(v) for k, v in sorts.items()}
        return cls(int(data["universe"]), relations, ideal, sorts)


def _mask_to_list(mask: int):
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _list_to_mask(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


def linear_order(n: int) -> FiniteStructure:
    """``0 < 1 < ... < n-1`` with relation ``lt``."""
    lt = frozenset((i, j) for i in range(n) for j in range(i + 1, n))
    return FiniteStructure(n, {"lt": Relation(2, lt)})


def size_threshold_family(ground: int, threshold: int) -> FrozenSet[int]:
    """All subsets of ``ground`` points with fewer than ``threshold`` members."""
    return frozenset(m for m in range(1 << ground) if bin(m).count("1") < threshold)


def powerset_algebra(ground: int, threshold: Optional[int] = None,
                     ideal: Optional[Iterable[int]] = None) -> FiniteStructure:
    """The algebra of subsets of ``ground`` points ordered by inclusion (``sub``).

    The small-set predicate is either the size-threshold family or an
    explicit family of bitmasks.
    """
    size = 1 << ground
    sub = frozenset((a, b) for a in range(size) for b in range(size) if a & ~b == 0)
    if threshold is not None:
        ideal = size_threshold_family(ground, threshold)
    elif ideal is not None:
        ideal = frozenset(ideal)
    return FiniteStructure(size, {"sub": Relation(2, sub)}, ideal)


def two_sorted(ground: int, threshold: int) -> FiniteStructure:
    """Urelements ``0..ground-1`` and every set of them, on disjoint indices.

    Set ``m`` (a bitmask) sits at index ``ground + m``; ``in`` is membership
    and ``S`` marks the sets with fewer than ``threshold`` members.
    """
    sets = range(ground, ground + (1 << ground))
    member = frozenset((p, ground + m) for m in range(1 << ground)
                       for p in range(ground) if m >> p & 1)
    small = frozenset((ground + m,) for m in size_threshold_family(ground, threshold))
    return FiniteStructure(
        ground + (1 << ground),
        {"in": Relation(2, member), "S": Relation(1, small)},
        sorts={"ur": tuple(range(ground)), "set": tuple(sets)},
    )


def parse_structure_spec(spec: str) -> FiniteStructure:
    """``lin:n``, ``pow:n`` / ``pow:n:t``, or a path to a JSON file."""
    if spec.startswith("lin:"):
        return linear_order(int(spec[4:]))
    if spec.startswith("pow:"):
        parts = spec.split(":")
        if len(parts) not in (2, 3):
            raise ValueError(f"bad structure spec {spec!r}")
        threshold = int(parts[2]) if len(parts) == 3 else None
        return powerset_algebra(int(parts[1]), threshold)
    if os.path.exists(spec):
        with open(spec) as fh:
            return FiniteStructure.from_json(json.load(fh))
    raise ValueError(f"bad structure spec {spec!r}")


def product_tuples(items, arity: int):
    return product(items, repeat=arity)
