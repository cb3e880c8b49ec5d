import json
from itertools import product

from hypothesis import given, settings, strategies as st
import pytest

from ordlab.ef_engine import (IllegalMoveError, ResourceLimitError, ef_rank_distinguishing,
                              is_partial_embedding, new_game, step_game, who_wins)
from ordlab.structures import (FiniteStructure, Relation, linear_order, parse_structure_spec,
                               powerset_algebra, two_sorted)


# -- oracle: the game unfolded straight from its definition -------------------

def partial_iso(m, n, pairs):
    for (a, b), (c, d) in product(pairs, repeat=2):
        if (a == c) != (b == d):
            return False
    for name, rel in m.relations.items():
        for idx in product(range(len(pairs)), repeat=rel.arity):
            left = tuple(pairs[i][0] for i in idx)
            right = tuple(pairs[i][1] for i in idx)
            if (left in rel.tuples) != (right in n.relations[name].tuples):
                return False
    if m.ideal is not None:
        if any((a in m.ideal) != (b in n.ideal) for a, b in pairs):
            return False
    return True


def naive_duplicator_wins(m, n, rounds, pairs=()):
    if not partial_iso(m, n, list(pairs)):
        return False
    if rounds == 0:
        return True
    for a in range(m.universe):
        if not any(naive_duplicator_wins(m, n, rounds - 1, pairs + ((a, b),))
                   for b in range(n.universe)):
            return False
    for b in range(n.universe):
        if not any(naive_duplicator_wins(m, n, rounds - 1, pairs + ((a, b),))
                   for a in range(m.universe)):
            return False
    return True


@st.composite
def graphs(draw, max_size=3):
    n = draw(st.integers(1, max_size))
    edges = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))
    return FiniteStructure(n, {"E": Relation(2, frozenset(edges))})


# -- structures ------------------------------------------------------------------

def test_linear_order_relation():
    m = linear_order(3)
    assert m.relations["lt"].tuples == {(0, 1), (0, 2), (1, 2)}


def test_powerset_algebra_ideal_and_json_round_trip(tmp_path):
    a = powerset_algebra(2, threshold=2)
    assert a.ideal == {0, 1, 2}
    assert a.is_proper_ideal() is False  # {0} | {1} is the top
    assert powerset_algebra(3, threshold=2).in_ideal(0b001)
    data = a.to_json()
    assert data["ideal"] == [[], [0], [1]]
    path = tmp_path / "a.json"
    path.write_text(json.dumps(data))
    b = parse_structure_spec(str(path))
    assert b.to_json() == data


def test_ideal_must_be_downward_closed():
    with pytest.raises(ValueError):
        powerset_algebra(2, ideal=[0b11])


def test_two_sorted_layout():
    m = two_sorted(2, 2)
    assert m.sorts["ur"] == (0, 1) and m.sorts["set"] == (2, 3, 4, 5)
    assert (0, 2 + 0b01) in m.relations["in"] and (1, 2 + 0b01) not in m.relations["in"]
    assert m.in_ideal(2 + 0b10) and not m.in_ideal(2 + 0b11)


# -- partial embeddings ---------------------------------------------------------------

def test_partial_embedding_examples():
    l3 = linear_order(3)
    assert is_partial_embedding(l3, l3, [(0, 0), (2, 2)])
    assert not is_partial_embedding(l3, l3, [(0, 1), (1, 0)])
    a = powerset_algebra(2, ideal=[0, 1, 2])
    assert not is_partial_embedding(a, a, [(0b01, 0b11)])
    assert not partial_iso(a, a, [(0b01, 0b11)])


@settings(max_examples=200)
@given(graphs(), graphs(), st.data())
def test_partial_embedding_matches_oracle(m, n, data):
    k = data.draw(st.integers(0, 3))
    pairs = [(data.draw(st.integers(0, m.universe - 1)), data.draw(st.integers(0, n.universe - 1)))
             for _ in range(k)]
    assert is_partial_embedding(m, n, pairs) == partial_iso(m, n, pairs)


# -- solving ------------------------------------------------------------------------

def test_who_wins_examples():
    assert who_wins(linear_order(3), linear_order(4), 2).duplicator_wins
    out = who_wins(linear_order(3), linear_order(4), 3)
    assert out.winner == "spoiler" and out.spoiler_move == ("M", 0)
    for k in range(1, 5):
        for r in range(4):
            assert who_wins(linear_order(k), linear_order(k), r).duplicator_wins


def test_classical_criterion_for_linear_orders():
    for m in range(1, 6):
        for k in range(1, 6):
            for r in range(4):
                expected = m == k or min(m, k) >= 2 ** r - 1
                assert who_wins(linear_order(m), linear_order(k), r).duplicator_wins == expected
                if r <= 2:
                    assert naive_duplicator_wins(linear_order(m), linear_order(k), r) == expected


def test_rank_examples():
    assert ef_rank_distinguishing(linear_order(3), linear_order(4), 5) == 3
    assert ef_rank_distinguishing(linear_order(2), linear_order(2), 5) is None
    # one pebble cannot tell one point from two; two pebbles can
    assert ef_rank_distinguishing(linear_order(1), linear_order(2), 5) == 2


@settings(max_examples=60, deadline=None)
@given(graphs(), graphs(), st.integers(0, 2))
def test_solver_matches_naive_game(m, n, r):
    assert who_wins(m, n, r).duplicator_wins == naive_duplicator_wins(m, n, r)


@settings(max_examples=60, deadline=None)
@given(graphs(), graphs(), st.integers(0, 2))
def test_symmetry_monotonicity_determinism(m, n, r):
    out = who_wins(m, n, r)
    assert who_wins(n, m, r).duplicator_wins == out.duplicator_wins
    assert who_wins(m, n, r) == out
    if out.duplicator_wins:
        assert all(who_wins(m, n, s).duplicator_wins for s in range(r))


def test_budget_is_enforced():
    with pytest.raises(ResourceLimitError):
        who_wins(linear_order(6), linear_order(7), 3, budget=5)


def test_signature_mismatch_is_rejected():
    with pytest.raises(ValueError):
        who_wins(linear_order(2), powerset_algebra(1), 1)


# -- stepping ---------------------------------------------------------------------------

def test_step_game_play():
    state = new_game(linear_order(3), linear_order(4), 2)
    state = step_game(state, ("N", 2))
    assert state.pending == ("N", 2) and state.whose_turn == "II"
    state = step_game(state)
    assert state.pending is None and is_partial_embedding(state.left, state.right, state.pairs)
    state = step_game(step_game(state, ("M", 0)))
    assert state.finished and state.winner == "duplicator"
    assert [r["player"] for r in state.transcript] == ["I", "II", "I", "II"]
    assert state.transcript[0] == {"round": 1, "side": "N", "player": "I", "element": 2}


def test_step_game_rejects_bad_moves():
    state = new_game(linear_order(2), linear_order(2), 1)
    with pytest.raises(IllegalMoveError):
        step_game(state, ("M", 5))
    with pytest.raises(IllegalMoveError):
        step_game(state, ("X", 0))
    state = step_game(step_game(state, ("M", 0)), 1)
    assert state.winner == "duplicator"
    with pytest.raises(IllegalMoveError):
        step_game(state, ("M", 0))


def test_minimax_duplicator_survives_any_spoiler_when_winning():
    m, n = linear_order(3), linear_order(4)
    for first in [("M", e) for e in range(3)] + [("N", e) for e in range(4)]:
        for second in [("M", e) for e in range(3)] + [("N", e) for e in range(4)]:
            state = new_game(m, n, 2)
            state = step_game(step_game(state, first))
            state = step_game(step_game(state, second))
            assert state.winner == "duplicator"
