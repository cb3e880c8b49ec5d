"""Symbolic EF games between a set algebra with a size ideal and a class algebra.

Each side is a partition of its top element into atoms carrying size labels,
and atom ``i`` on the left is matched with atom ``i`` on the right.  A Spoiler
move names a side and, for every current atom, how the chosen element meets
it: wholly outside, wholly inside, or split into a part and a copart with
given labels.  Duplicator answers with the same shape on the other side, so
both sides keep the same number of atoms.

Labels: ``Fin(n)`` for an exact finite size, ``InfSmall`` for an infinite
member of the ideal, ``Large`` for anything outside the ideal.  A spec with
``inf_small_inhabited=False`` models an ideal consisting of the finite sets
only.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from .structures import FiniteStructure, powerset_algebra

__all__ = [
    "Label", "Fin", "INF_SMALL", "LARGE", "AlgebraSpec", "AtomPair", "Split",
    "SpoilerMove", "PartitionState", "IllegalMove", "StrategyBreakdown",
    "legal_splits", "is_legal_split", "initial_state", "finite_state",
    "duplicator_respond", "verify_state", "run_adversarial", "random_adversary",
    "singleton_extractor", "concretize", "DEFAULT_CAP", "play_move",
]

DEFAULT_CAP = 4


@dataclass(frozen=True, order=True)
class Label:
    kind: str          # "fin" | "infsmall" | "large"
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("fin", "infsmall", "large"):
            raise ValueError(f"unknown label kind {self.kind!r}")
        if self.kind == "fin" and self.n < 1:
            raise ValueError("Fin(n) needs n >= 1")

    @property
    def is_fin(self) -> bool:
        return self.kind == "fin"

    @property
    def is_small(self) -> bool:
        return self.kind != "large"

    def __str__(self):
        return {"fin": f"Fin:{self.n}", "infsmall": "InfSmall", "large": "Large"}[self.kind]

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> "Label":
        text = text.strip()
        if text == "InfSmall":
            return INF_SMALL
        if text == "Large":
            return LARGE
        if text.startswith("Fin:"):
            return Fin(int(text[4:]))
        raise ValueError(f"bad label {text!r}")


def Fin(n: int) -> Label:
    return Label("fin", n)


INF_SMALL = Label("infsmall")
LARGE = Label("large")


@dataclass(frozen=True)
class AlgebraSpec:
    name: str
    inf_small_inhabited: bool

    def small_labels_ok(self, label: Label) -> bool:
        return label.kind != "infsmall" or self.inf_small_inhabited

    @classmethod
    def from_json(cls, data) -> "AlgebraSpec":
        return cls(str(data["name"]), bool(data["inf_small_inhabited"]))

    def to_json(self) -> dict:
        return {"name": self.name, "inf_small_inhabited": self.inf_small_inhabited}


@dataclass(frozen=True)
class AtomPair:
    left: Label
    right: Label

    def on(self, side: str) -> Label:
        return self.left if side == "L" else self.right


@dataclass(frozen=True)
class Split:
    """How the chosen element meets one atom.

    ``part`` is the piece inside the element and ``copart`` the piece outside;
    ``None`` means that piece is empty, so ``Split(None, x)`` keeps the atom
    whole and outside, ``Split(x, None)`` whole and inside.
    """

    part: Optional[Label]
    copart: Optional[Label]

    @property
    def proper(self) -> bool:
        return self.part is not None and self.copart is not None

    def __str__(self):
        if self.copart is None:
            return "in"
        if self.part is None:
            return "out"
        return f"{self.part}/{self.copart}"

    @classmethod
    def parse(cls, text: str) -> "Split":
        text = text.strip()
        if text == "in":
            return WHOLE_IN
        if text == "out":
            return WHOLE_OUT
        left, sep, right = text.partition("/")
        if not sep:
            raise ValueError(f"bad split {text!r}")
        return cls(Label.parse(left), Label.parse(right))


WHOLE_IN = Split(LARGE, None)   # labels of whole pieces are not consulted
WHOLE_OUT = Split(None, LARGE)


@dataclass(frozen=True)
class SpoilerMove:
    side: str                  # "L" (set side) or "R" (class side)
    splits: Tuple[Split, ...]

    def __str__(self):
        return self.side + " " + " ".join(map(str, self.splits))

    @classmethod
    def parse(cls, text: str, atoms: int) -> "SpoilerMove":
        """``"L in Fin:1/Large out"``; missing trailing atoms default to ``out``."""
        words = text.split()
        if not words or words[0] not in ("L", "R"):
            raise IllegalMove("a move starts with the side, L or R")
        splits = [Split.parse(w) for w in words[1:]]
        if len(splits) > atoms:
            raise IllegalMove(f"move describes {len(splits)} atoms, state has {atoms}")
        splits += [WHOLE_OUT] * (atoms - len(splits))
        return cls(words[0], tuple(splits))


@dataclass(frozen=True)
class PartitionState:
    """Matched atoms plus the elements chosen so far.

    ``chosen[k]`` is the set of atom indices making up the element picked in
    round ``k`` (the same index set on both sides).  ``horizon`` is the total
    number of rounds, or ``None`` for unbounded play.
    """

    atoms: Tuple[AtomPair, ...]
    left_spec: AlgebraSpec
    right_spec: AlgebraSpec
    round: int = 0
    horizon: Optional[int] = None
    history: Tuple[Tuple[SpoilerMove, Tuple[Split, ...]], ...] = ()
    chosen: Tuple[frozenset, ...] = ()
    cap: int = DEFAULT_CAP

    def spec(self, side: str) -> AlgebraSpec:
        return self.left_spec if side == "L" else self.right_spec

    def labels(self) -> List[List[str]]:
        return [[str(a.left), str(a.right)] for a in self.atoms]

    @property
    def all_finite(self) -> bool:
        return all(a.left.is_fin and a.right.is_fin for a in self.atoms)


class IllegalMove(ValueError):
    pass


class StrategyBreakdown(RuntimeError):
    """Duplicator cannot keep condition (*) with the exact-size rule."""

    def __init__(self, message: str, transcript: Optional[list] = None):
        super().__init__(message)
        self.transcript = transcript or []


# -- split rules ------------------------------------------------------------

def is_legal_split(label: Label, part: Label, copart: Label, spec: AlgebraSpec) -> bool:
    if not (spec.small_labels_ok(part) and spec.small_labels_ok(copart)):
        return False
    if label.is_fin:
        return part.is_fin and copart.is_fin and part.n + copart.n == label.n
    if label.kind == "infsmall":
        if not spec.inf_small_inhabited:
            return False
        # at least one infinite piece, neither piece large
        return part.is_small and copart.is_small and (not part.is_fin or not copart.is_fin)
    # Large: some piece stays large (two small pieces cannot make a large one)
    return part.kind == "large" or copart.kind == "large"


def legal_splits(label: Label, spec: AlgebraSpec, max_fin: int = 3) -> List[Tuple[Label, Label]]:
    """All legal ``(part, copart)`` label pairs, with Fin pieces of unbounded
    parents listed up to ``max_fin``."""
    if label.is_fin:
        return [(Fin(i), Fin(label.n - i)) for i in range(1, label.n)]
    small = [Fin(i) for i in range(1, max_fin + 1)]
    if label.kind == "infsmall":
        if not spec.inf_small_inhabited:
            return []
        out = [(f, INF_SMALL) for f in small] + [(INF_SMALL, f) for f in small]
        return out + [(INF_SMALL, INF_SMALL)]
    if spec.inf_small_inhabited:
        small = small + [INF_SMALL]
    out = [(LARGE, LARGE)]
    out += [(s, LARGE) for s in small] + [(LARGE, s) for s in small]
    return out


# -- states -----------------------------------------------------------------

def initial_state(left_spec: AlgebraSpec, right_spec: AlgebraSpec,
                  horizon: Optional[int] = None, cap: int = DEFAULT_CAP) -> PartitionState:
    """Start of play: both top elements, neither in its ideal."""
    return PartitionState((AtomPair(LARGE, LARGE),), left_spec, right_spec,
                          horizon=horizon, cap=cap)


def finite_state(sizes: Sequence[int], horizon: Optional[int] = None) -> PartitionState:
    """An all-finite arena whose matched atoms have the given sizes."""
    spec = AlgebraSpec("finite", False)
    atoms = tuple(AtomPair(Fin(n), Fin(n)) for n in sizes)
    return PartitionState(atoms, spec, spec, horizon=horizon)


def verify_state(state: PartitionState) -> bool:
    """Condition (*), exact finite matching, and the large-pair requirement."""
    if not state.atoms:
        return False
    for pair in state.atoms:
        left, right = pair.left, pair.right
        if not (state.left_spec.small_labels_ok(left) and state.right_spec.small_labels_ok(right)):
            return False
        if left.is_small != right.is_small:
            return False
        if left.is_fin and right.is_fin and left.n != right.n:
            return False
        # a finite atom against an infinite small one is only allowed where the
        # finite side has no infinite small sets at all (horizon pairs)
        if left.is_fin and right.kind == "infsmall" and state.left_spec.inf_small_inhabited:
            return False
        if right.is_fin and left.kind == "infsmall" and state.right_spec.inf_small_inhabited:
            return False
    if not state.all_finite and not any(p.left.kind == p.right.kind == "large"
                                        for p in state.atoms):
        return False
    n = len(state.atoms)
    return all(all(0 <= i < n for i in c) for c in state.chosen)


def _horizon_size(state: PartitionState) -> int:
    if state.horizon is None:
        r = state.cap
    else:
        r = max(state.horizon - state.round, 1)
    return 2 ** r


def _respond_atom(state: PartitionState, side: str, pair: AtomPair, split: Split) -> Split:
    other_side = "R" if side == "L" else "L"
    mine, theirs = pair.on(side), pair.on(other_side)
    other_spec = state.spec(other_side)
    if not split.proper:
        return split
    p, q = split.part, split.copart

    def answer_small(label: Label) -> Label:
        # case 2 answer for a small piece cut from a large atom
        if label.is_fin or other_spec.inf_small_inhabited:
            return label
        return Fin(_horizon_size(state))

    if mine.kind == "large":
        # cases 1 and 2: theirs is Large as well
        return Split(LARGE if p.kind == "large" else answer_small(p),
                     LARGE if q.kind == "large" else answer_small(q))
    if mine.is_fin and theirs.is_fin:
        return split  # case 3, exact sizes
    if mine.kind == "infsmall" and theirs.kind == "infsmall":
        return split  # both sides admit infinite small pieces
    if mine.is_fin and theirs.kind == "infsmall":
        # Spoiler cuts the finite side of a horizon pair: match the smaller
        # piece exactly and keep the larger one against the infinite remainder
        if p.n <= q.n:
            return Split(p, INF_SMALL)
        return Split(INF_SMALL, q)
    if mine.kind == "infsmall" and theirs.is_fin:
        m = theirs.n
        if p.is_fin and q.is_fin:
            raise IllegalMove("an infinite atom cannot split into two finite pieces")
        if p.is_fin:
            if p.n >= m:
                raise StrategyBreakdown(f"cannot extract {p} from {theirs}")
            return Split(p, Fin(m - p.n))
        if q.is_fin:
            if q.n >= m:
                raise StrategyBreakdown(f"cannot extract {q} from {theirs}")
            return Split(Fin(m - q.n), q)
        if m < 2:
            raise StrategyBreakdown(f"cannot split {theirs} into two non-empty pieces")
        return Split(Fin(m // 2), Fin(m - m // 2))
    raise IllegalMove(f"atom pair {mine}/{theirs} violates condition (*)")


def duplicator_respond(state: PartitionState,
                       move: SpoilerMove) -> Tuple[Tuple[Split, ...], PartitionState]:
    """Answer ``move`` with the strategy's per-atom splits on the other side.

    Raises :class:`IllegalMove` for a malformed move and
    :class:`StrategyBreakdown` when no answer keeps the invariants.
    """
    if move.side not in ("L", "R"):
        raise IllegalMove(f"side must be 'L' or 'R', not {move.side!r}")
    if len(move.splits) != len(state.atoms):
        raise IllegalMove(f"move has {len(move.splits)} splits, state has {len(state.atoms)} atoms")
    if state.horizon is not None and state.round >= state.horizon:
        raise IllegalMove("the game is over")
    spec = state.spec(move.side)
    for i, (pair, split) in enumerate(zip(state.atoms, move.splits)):
        if split.part is None and split.copart is None:
            raise IllegalMove(f"atom {i}: both pieces empty")
        if split.proper and not is_legal_split(pair.on(move.side), split.part, split.copart, spec):
            raise IllegalMove(f"atom {i}: {split} is not a legal split of {pair.on(move.side)}")
    response = tuple(_respond_atom(state, move.side, pair, split)
                     for pair, split in zip(state.atoms, move.splits))

    atoms: List[AtomPair] = []
    remap: List[List[int]] = []
    element = set()
    for pair, mine, theirs in zip(state.atoms, move.splits, response):
        left, right = (mine, theirs) if move.side == "L" else (theirs, mine)
        if not mine.proper:
            remap.append([len(atoms)])
            if mine.copart is None:
                element.add(len(atoms))
            atoms.append(pair)
            continue
        part_idx, copart_idx = len(atoms), len(atoms) + 1
        atoms.append(AtomPair(left.part, right.part))
        atoms.append(AtomPair(left.copart, right.copart))
        remap.append([part_idx, copart_idx])
        element.add(part_idx)
    chosen = tuple(frozenset(j for i in c for j in remap[i]) for c in state.chosen)
    new = replace(state, atoms=tuple(atoms), round=state.round + 1,
                  history=state.history + ((move, response),),
                  chosen=chosen + (frozenset(element),))
    return response, new


def play_move(state: PartitionState, move: SpoilerMove) -> PartitionState:
    return duplicator_respond(state, move)[1]


# -- adversaries --------------------------------------------------------------

Adversary = Callable[[PartitionState, random.Random], SpoilerMove]


def random_adversary(state: PartitionState, rng: random.Random, max_fin: int = 3,
                     max_cuts: int = 2) -> SpoilerMove:
    """Split one or two random atoms; every other atom goes in or out at random."""
    side = rng.choice("LR")
    spec = state.spec(side)
    options = [legal_splits(pair.on(side), spec, max_fin) for pair in state.atoms]
    cuttable = [i for i, o in enumerate(options) if o]
    cuts = set(rng.sample(cuttable, min(len(cuttable), rng.randint(1, max_cuts))))
    splits = []
    for i, opts in enumerate(options):
        if i in cuts:
            p, q = rng.choice(opts)
            splits.append(Split(p, q))
        else:
            splits.append(rng.choice((WHOLE_IN, WHOLE_OUT)))
    return SpoilerMove(side, tuple(splits))


def singleton_extractor(side: str) -> Adversary:
    """Keep carving one-point pieces out of an infinite small atom on ``side``,
    creating such an atom from a large one first if there is none."""

    def adversary(state: PartitionState, rng: random.Random) -> SpoilerMove:
        spec = state.spec(side)
        splits = [WHOLE_OUT] * len(state.atoms)
        for i, pair in enumerate(state.atoms):
            if pair.on(side).kind == "infsmall":
                splits[i] = Split(Fin(1), INF_SMALL)
                return SpoilerMove(side, tuple(splits))
        for i, pair in enumerate(state.atoms):
            if pair.on(side).kind == "large":
                piece = INF_SMALL if spec.inf_small_inhabited else Fin(1)
                splits[i] = Split(piece, LARGE)
                return SpoilerMove(side, tuple(splits))
        return SpoilerMove(side, tuple(splits))

    return adversary


def _state_record(state: PartitionState) -> dict:
    return {"round": state.round, "atoms": state.labels(), "verified": verify_state(state)}


def run_adversarial(left_spec: AlgebraSpec, right_spec: AlgebraSpec, rounds: int,
                    adversary: Adversary = random_adversary, seed: int = 0,
                    horizon: Optional[int] = -1, cap: int = DEFAULT_CAP,
                    start: Optional[PartitionState] = None) -> List[dict]:
    """Play ``rounds`` moves of ``adversary`` against the built-in strategy.

    ``horizon=-1`` (default) sets the horizon to ``rounds``; ``None`` plays
    unbounded, answering with ``Fin(2**cap)`` where a horizon size is needed.
    The transcript has one record per state, starting with the initial one.
    A breakdown is re-raised with the transcript so far attached.
    """
    if horizon == -1:
        horizon = rounds
    rng = random.Random(seed)
    state = start if start is not None else initial_state(left_spec, right_spec, horizon, cap)
    transcript = [_state_record(state)]
    for _ in range(rounds):
        move = adversary(state, rng)
        try:
            response, state = duplicator_respond(state, move)
        except StrategyBreakdown as exc:
            transcript.append({"round": state.round + 1, "move": str(move),
                               "breakdown": str(exc)})
            raise StrategyBreakdown(str(exc), transcript) from None
        rec = _state_record(state)
        rec["move"] = str(move)
        rec["response"] = " ".join(map(str, response))
        transcript.append(rec)
    return transcript


def replay(state: PartitionState, moves: Sequence[SpoilerMove]) -> Iterator[PartitionState]:
    for move in moves:
        state = play_move(state, move)
        yield state


# -- concretization -----------------------------------------------------------

def concretize(state: PartitionState, threshold: int = 2
               ) -> Tuple[FiniteStructure, FiniteStructure, List[Tuple[int, int]]]:
    """Explicit powerset algebras realizing an all-finite state.

    Left atoms occupy consecutive blocks of points in atom order, right atoms
    in reverse order, so the induced map is not the identity.  Both algebras
    use the size-threshold ideal.  Returns the two algebras and the chosen
    elements as ``(left mask, right mask)`` pairs.
    """
    if not state.all_finite:
        raise ValueError("concretize needs every label to be Fin(n)")
    if not verify_state(state):
        raise ValueError("state fails verify_state")
    sizes = [p.left.n for p in state.atoms]
    ground = sum(sizes)

    def blocks(order):
        masks, pos = {}, 0
        for i in order:
            masks[i] = ((1 << sizes[i]) - 1) << pos
            pos += sizes[i]
        return masks

    left_blocks = blocks(range(len(sizes)))
    right_blocks = blocks(reversed(range(len(sizes))))
    pairs = []
    for c in state.chosen:
        lm = rm = 0
        for i in c:
            lm |= left_blocks[i]
            rm |= right_blocks[i]
        pairs.append((lm, rm))
    algebra = powerset_algebra(ground, threshold)
    return algebra, powerset_algebra(ground, threshold), pairs


def transcript_jsonl(transcript: List[dict]) -> str:
    return "\n".join(json.dumps(rec, separators=(",", ":")) for rec in transcript)
