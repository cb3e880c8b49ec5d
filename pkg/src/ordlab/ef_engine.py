"""Ehrenfeucht-Fraisse games on explicit finite structures.

Spoiler (player I) picks an element of either structure each round and
Duplicator (player II) answers in the other one.  Duplicator wins a play when
the chosen pairs form a partial embedding: injective both ways, every relation
and the small-set predicate preserved and reflected.

:func:`who_wins` solves ``G_n`` exactly by memoized minimax.  It is meant as a
ground-truth oracle for small structures, not as a scalable solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .structures import FiniteStructure

__all__ = [
    "Outcome", "Play", "ResourceLimitError", "IllegalMoveError",
    "is_partial_embedding", "who_wins", "ef_rank_distinguishing",
    "new_game", "step_game", "duplicator_reply", "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 10_000_000

Pair = Tuple[int, int]
Move = Tuple[str, int]


class ResourceLimitError(RuntimeError):
    """The position budget ran out; the instance is too large for brute force."""


class IllegalMoveError(ValueError):
    pass


@dataclass(frozen=True)
class Outcome:
    duplicator_wins: bool
    spoiler_move: Optional[Move] = None

    @property
    def winner(self) -> str:
        return "duplicator" if self.duplicator_wins else "spoiler"


def _check_signatures(m: FiniteStructure, n: FiniteStructure) -> None:
    if m.signature() != n.signature():
        raise ValueError("structures have different signatures")


def _consistent(m: FiniteStructure, n: FiniteStructure,
                pairs: Sequence[Pair], new: Pair) -> bool:
    """Whether ``pairs`` plus ``new`` is a partial embedding, given that
    ``pairs`` alone already is."""
    a, b = new
    for a2, b2 in pairs:
        if (a == a2) != (b == b2):
            return False
    if m.has_small_predicate() and m.in_ideal(a) != n.in_ideal(b):
        return False
    items = list(pairs) + [new]
    last = len(items) - 1
    for name, rel in m.relations.items():
        if name == "S" and m.ideal is None:
            continue  # handled above
        other = n.relations[name].tuples
        for idx in product(range(len(items)), repeat=rel.arity):
            if last not in idx:
                continue
            left = tuple(items[i][0] for i in idx)
            right = tuple(items[i][1] for i in idx)
            if (left in rel.tuples) != (right in other):
                return False
    return True


def is_partial_embedding(m: FiniteStructure, n: FiniteStructure,
                         pairs: Iterable[Pair]) -> bool:
    """Whether the finite map given by ``pairs`` is a partial embedding."""
    seen: List[Pair] = []
    for p in pairs:
        a, b = p
        if not (0 <= a < m.universe and 0 <= b < n.universe):
            return False
        if p in seen:
            continue
        if not _consistent(m, n, seen, p):
            return False
        seen.append(p)
    return True


class _Solver:
    def __init__(self, m: FiniteStructure, n: FiniteStructure, budget: int):
        _check_signatures(m, n)
        self.m, self.n = m, n
        self.budget = budget
        self.memo: Dict[Tuple[FrozenSet[Pair], int], Optional[Move]] = {}
        size = max(m.universe, n.universe)
        # ties: lowest element first, then side M before side N
        self.moves: List[Move] = [(side, e) for e in range(size) for side in ("M", "N")
                                  if e < (m.universe if side == "M" else n.universe)]

    def replies(self, pos: FrozenSet[Pair], move: Move) -> Iterable[Pair]:
        side, e = move
        pairs = sorted(pos)
        if side == "M":
            cands = ((e, d) for d in range(self.n.universe))
        else:
            cands = ((d, e) for d in range(self.m.universe))
        for pair in cands:
            if pair in pos or _consistent(self.m, self.n, pairs, pair):
                yield pair

    def spoiler_win(self, pos: FrozenSet[Pair], rounds: int) -> Optional[Move]:
        """A winning Spoiler move from a consistent position, or ``None``."""
        if rounds == 0:
            return None
        key = (pos, rounds)
        if key in self.memo:
            return self.memo[key]
        if len(self.memo) >= self.budget:
            raise ResourceLimitError(f"position budget {self.budget} exhausted")
        result = None
        for move in self.moves:
            if not any(self.spoiler_win(pos | {pair}, rounds - 1) is None
                       for pair in self.replies(pos, move)):
                result = move
                break
        self.memo[key] = result
        return result


def who_wins(m: FiniteStructure, n: FiniteStructure, rounds: int,
             budget: int = DEFAULT_BUDGET) -> Outcome:
    """Exact winner of ``G_rounds(m, n)``.

    A Spoiler win carries the first winning opening move, ordered by element
    index and then side ``M`` before ``N``.
    """
    if rounds < 0:
        raise ValueError("rounds must be >= 0")
    move = _Solver(m, n, budget).spoiler_win(frozenset(), rounds)
    return Outcome(move is None, move)


def ef_rank_distinguishing(m: FiniteStructure, n: FiniteStructure,
                           max_rounds: int, budget: int = DEFAULT_BUDGET) -> Optional[int]:
    """Least number of rounds in which Spoiler wins, or ``None`` if Duplicator
    survives every game up to ``max_rounds``."""
    solver = _Solver(m, n, budget)
    for r in range(max_rounds + 1):
        if solver.spoiler_win(frozenset(), r) is not None:
            return r
    return None


# -- stepping interface ---------------------------------------------------

@dataclass(frozen=True)
class Play:
    """A play of ``G_rounds(left, right)`` in progress."""

    left: FiniteStructure
    right: FiniteStructure
    rounds: int
    pairs: Tuple[Pair, ...] = ()
    pending: Optional[Move] = None
    transcript: Tuple[dict, ...] = field(default=())

    @property
    def rounds_remaining(self) -> int:
        return self.rounds - len(self.pairs)

    @property
    def finished(self) -> bool:
        return self.rounds_remaining == 0

    @property
    def whose_turn(self) -> Optional[str]:
        if self.finished:
            return None
        return "I" if self.pending is None else "II"

    @property
    def winner(self) -> Optional[str]:
        if not self.finished:
            return None
        ok = is_partial_embedding(self.left, self.right, self.pairs)
        return "duplicator" if ok else "spoiler"


def new_game(left: FiniteStructure, right: FiniteStructure, rounds: int) -> Play:
    _check_signatures(left, right)
    if rounds < 0:
        raise ValueError("rounds must be >= 0")
    return Play(left, right, rounds)


def duplicator_reply(state: Play, budget: int = DEFAULT_BUDGET) -> int:
    """Minimax answer to the pending Spoiler move.

    Prefers the lowest-index reply that keeps a winning position, then the
    lowest consistent one, then element 0.
    """
    if state.pending is None:
        raise IllegalMoveError("no pending Spoiler move to answer")
    solver = _Solver(state.left, state.right, budget)
    pos = frozenset(state.pairs)
    if not is_partial_embedding(state.left, state.right, state.pairs):
        return 0
    side, _ = state.pending
    fallback = None
    for pair in solver.replies(pos, state.pending):
        reply = pair[1] if side == "M" else pair[0]
        if fallback is None:
            fallback = reply
        if solver.spoiler_win(pos | {pair}, state.rounds_remaining - 1) is None:
            return reply
    return 0 if fallback is None else fallback


def step_game(state: Play, move=None) -> Play:
    """Apply one half-round.

    On Spoiler's turn ``move`` is ``(side, element)`` with side ``"M"`` or
    ``"N"``.  On Duplicator's turn it is an element of the other structure,
    or ``None`` to let minimax choose.
    """
    if state.finished:
        raise IllegalMoveError("game is over")
    k = len(state.pairs) + 1
    if state.pending is None:
        if move is None or not isinstance(move, tuple) or len(move) != 2:
            raise IllegalMoveError("Spoiler must move with (side, element)")
        side, e = move
        if side not in ("M", "N"):
            raise IllegalMoveError(f"side must be 'M' or 'N', not {side!r}")
        size = state.left.universe if side == "M" else state.right.universe
        if not isinstance(e, int) or not 0 <= e < size:
            raise IllegalMoveError(f"element {e!r} is not in structure {side}")
        rec = {"round": k, "side": side, "player": "I", "element": e}
        return replace(state, pending=(side, e), transcript=state.transcript + (rec,))
    side, e = state.pending
    other = "N" if side == "M" else "M"
    if move is None:
        move = duplicator_reply(state)
    size = state.right.universe if other == "N" else state.left.universe
    if isinstance(move, tuple) or not isinstance(move, int) or not 0 <= move < size:
        raise IllegalMoveError(f"Duplicator must answer with an element of {other}")
    pair = (e, move) if side == "M" else (move, e)
    rec = {"round": k, "side": other, "player": "II", "element": move}
    return replace(state, pairs=state.pairs + (pair,), pending=None,
                   transcript=state.transcript + (rec,))
