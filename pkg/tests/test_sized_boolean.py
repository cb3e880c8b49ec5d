import json
import random

from hypothesis import given, settings, strategies as st
import pytest

from ordlab.ef_engine import is_partial_embedding
from ordlab.sized_boolean import (INF_SMALL, LARGE, WHOLE_IN, WHOLE_OUT, AlgebraSpec, AtomPair,
                                  Fin, IllegalMove, Label, PartitionState, Split, SpoilerMove,
                                  StrategyBreakdown, concretize, duplicator_respond,
                                  finite_state, initial_state, legal_splits, random_adversary,
                                  run_adversarial, singleton_extractor, transcript_jsonl,
                                  verify_state)

INF = AlgebraSpec("P(kappa)", True)
CLASS = AlgebraSpec("C(V)", True)
FIN = AlgebraSpec("P(kappa), finite ideal", False)


def labels():
    return st.one_of(st.integers(1, 6).map(Fin), st.just(INF_SMALL), st.just(LARGE))


def rejoin(part: Label, copart: Label) -> str:
    # the kind of label a parent made of these two pieces must carry
    if LARGE in (part, copart):
        return "large"
    if part.is_fin and copart.is_fin:
        return f"fin{part.n + copart.n}"
    return "infsmall"


def parent_kind(label: Label) -> str:
    return f"fin{label.n}" if label.is_fin else label.kind


# -- labels and split rules -------------------------------------------------------

def test_label_text_round_trip():
    for label in (Fin(3), INF_SMALL, LARGE):
        assert Label.parse(str(label)) == label
    assert str(Fin(3)) == "Fin:3"


def test_legal_split_examples():
    assert legal_splits(Fin(3), FIN) == [(Fin(1), Fin(2)), (Fin(2), Fin(1))]
    assert (INF_SMALL, LARGE) in legal_splits(LARGE, INF)
    assert all(s.is_fin or s == LARGE for pair in legal_splits(LARGE, FIN) for s in pair)


@given(labels(), st.booleans())
def test_split_labels_rejoin_to_the_parent(label, inhabited):
    spec = AlgebraSpec("s", inhabited)
    if label == INF_SMALL and not inhabited:
        assert legal_splits(label, spec) == []
        return
    for part, copart in legal_splits(label, spec, max_fin=4):
        assert rejoin(part, copart) == parent_kind(label)
        assert (part, copart) != (INF_SMALL, INF_SMALL) or label != LARGE


# -- states ---------------------------------------------------------------------------

def test_verify_state_examples():
    assert verify_state(initial_state(INF, CLASS))
    bad = PartitionState((AtomPair(Fin(2), Fin(3)),), FIN, FIN)
    assert not verify_state(bad)
    assert verify_state(finite_state([1, 2]))


def test_case_responses():
    # a set-sized small piece carved from the large atom is answered in kind
    move = SpoilerMove("L", (Split(INF_SMALL, LARGE),))
    response, state = duplicator_respond(initial_state(INF, CLASS), move)
    assert response == (Split(INF_SMALL, LARGE),)
    assert verify_state(state)
    # exact cardinalities inside finite atoms
    move = SpoilerMove("L", (Split(Fin(1), Fin(2)),))
    response, _ = duplicator_respond(finite_state([3]), move)
    assert response == (Split(Fin(1), Fin(2)),)
    # a large piece cut on the class side is met by a large piece
    move = SpoilerMove("R", (Split(LARGE, LARGE),))
    response, _ = duplicator_respond(initial_state(INF, CLASS), move)
    assert response == (Split(LARGE, LARGE),)


def test_horizon_rule_answers_with_a_power_of_two():
    state = initial_state(FIN, CLASS, horizon=5)
    move = SpoilerMove("R", (Split(INF_SMALL, LARGE),))
    response, new = duplicator_respond(state, move)
    assert response == (Split(Fin(2 ** 5), LARGE),)
    assert verify_state(new)


def test_illegal_moves_are_rejected():
    state = initial_state(INF, CLASS)
    with pytest.raises(IllegalMove):
        duplicator_respond(state, SpoilerMove("L", (Split(Fin(1), Fin(1)),)))
    with pytest.raises(IllegalMove):
        duplicator_respond(state, SpoilerMove("X", (WHOLE_IN,)))
    with pytest.raises(IllegalMove):
        SpoilerMove.parse("L in out", 1)
    assert SpoilerMove.parse("R Fin:1/Large", 2).splits == (Split(Fin(1), LARGE), WHOLE_OUT)


def test_chosen_elements_follow_the_splits():
    state = finite_state([2, 1])
    _, state = duplicator_respond(state, SpoilerMove("L", (Split(Fin(1), Fin(1)), WHOLE_IN)))
    assert state.chosen == (frozenset({0, 2}),)
    _, state = duplicator_respond(state, SpoilerMove("R", (WHOLE_OUT, WHOLE_OUT, WHOLE_IN)))
    assert state.chosen == (frozenset({0, 2}), frozenset({2}))


# -- adversarial runs ---------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_random_adversary_never_breaks_the_invariants(seed):
    transcript = run_adversarial(INF, CLASS, 20, random_adversary, seed)
    assert all(rec["verified"] for rec in transcript)
    for rec in transcript:
        for left, right in rec["atoms"]:
            if left.startswith("Fin"):
                assert left == right


def test_singleton_extraction_within_the_horizon():
    transcript = run_adversarial(INF, CLASS, 12, singleton_extractor("L"), seed=1)
    assert all(rec["verified"] for rec in transcript)
    transcript = run_adversarial(FIN, CLASS, 6, singleton_extractor("R"), seed=1)
    assert all(rec["verified"] for rec in transcript)


def test_unbounded_extraction_breaks_down_after_the_cap():
    with pytest.raises(StrategyBreakdown) as err:
        run_adversarial(FIN, CLASS, 40, singleton_extractor("R"), seed=0, horizon=None, cap=3)
    records = err.value.transcript
    assert "breakdown" in records[-1]
    assert all(rec["verified"] for rec in records[:-1])
    # the finite answer has 2**3 points: one round creates it, eight extractions fit
    assert records[-1]["round"] == 1 + 2 ** 3


def test_transcript_is_json_lines():
    transcript = run_adversarial(INF, CLASS, 3, random_adversary, seed=7)
    lines = transcript_jsonl(transcript).splitlines()
    assert len(lines) == 4
    assert json.loads(lines[1])["round"] == 1
    assert transcript == run_adversarial(INF, CLASS, 3, random_adversary, seed=7)


# -- concretization -------------------------------------------------------------------

def test_concretize_example():
    left, right, pairs = concretize(finite_state([1, 2]))
    assert left.universe == right.universe == 2 ** 3
    assert pairs == []


def test_concretize_rejects_symbolic_states():
    with pytest.raises(ValueError):
        concretize(initial_state(INF, CLASS))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_finite_games_concretize_to_partial_embeddings(seed):
    rng = random.Random(seed)
    sizes = [rng.randint(1, 3) for _ in range(rng.randint(1, 2))]
    start = finite_state(sizes, horizon=4)
    state = start
    for _ in range(4):
        _, state = duplicator_respond(state, random_adversary(state, rng))
        assert verify_state(state)
        left, right, pairs = concretize(state)
        assert is_partial_embedding(left, right, pairs)
