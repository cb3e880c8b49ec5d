import itertools
import random

from hypothesis import given, settings, strategies as st
import pytest

from ordlab.formula import (IND, SET, UR, And, Eq, Exists, Forall, FormulaSyntaxError, Implies,
                           In, Less, Not, Or, S, SortError, Subeq, TableCache, Top, Var,
                           UnsupportedFragment, atom_formula, check_language, classify,
                           cof_sets, enumerate_formulas, evaluate, evaluate_batch, free_vars,
                           hintikka_sentence, is_normal, is_positive, moschovakis_prenex,
                           negative_occurrence, parse, quantifier_rank, size, to_text,
                           translate_plus, translate_prime, truth_table)
from ordlab.formula.checker import EvalError, SignatureError
from ordlab.formula.positive import in_prenex_shape
from ordlab.structures import linear_order, powerset_algebra, two_sorted

x0, x1, y0, y1, y2, y3 = (Var(n) for n in ("x0", "x1", "y0", "y1", "y2", "y3"))
p0, p1 = Var("p0", UR), Var("p1", UR)
s0, s1 = Var("x0", SET), Var("x1", SET)
X = Var("X", SET)


# -- oracle: evaluation straight from the satisfaction clauses -----------------

def domain(m, v, cof=False):
    if m.sorts is not None:
        return list(m.sorts["ur" if v.sort == UR else "set"]) if v.sort != IND \
            else list(range(m.universe))
    if v.sort == SET:
        return cof_sets(m) if cof else list(range(1 << m.universe))
    return list(range(m.universe))


def naive(f, m, env, cof=False):
    if isinstance(f, Top):
        return True
    if isinstance(f, Less):
        return (env[f.left], env[f.right]) in m.relations["lt"].tuples
    if isinstance(f, Subeq):
        return (env[f.left], env[f.right]) in m.relations["sub"].tuples
    if isinstance(f, Eq):
        return env[f.left] == env[f.right]
    if isinstance(f, S):
        return m.in_ideal(env[f.arg])
    if isinstance(f, In):
        if m.sorts is None:
            return bool(env[f.set] >> env[f.elem] & 1)
        return (env[f.elem], env[f.set]) in m.relations["in"].tuples
    if isinstance(f, Not):
        return not naive(f.body, m, env, cof)
    if isinstance(f, And):
        return naive(f.left, m, env, cof) and naive(f.right, m, env, cof)
    if isinstance(f, Or):
        return naive(f.left, m, env, cof) or naive(f.right, m, env, cof)
    if isinstance(f, Implies):
        return not naive(f.left, m, env, cof) or naive(f.right, m, env, cof)
    values = (naive(f.body, m, {**env, f.var: d}, cof) for d in domain(m, f.var, cof))
    return any(values) if isinstance(f, Exists) else all(values)


def random_formula(rng, lang, depth, ctx):
    sorts = {"lord": [IND], "lbs": [IND], "lmon": [IND, SET], "l1s": [UR, SET]}[lang]
    if depth == 0 or rng.random() < 0.25:
        atoms = [a for a in itertools.islice(enumerate_formulas(lang, 0, 1, free=ctx), 50)]
        return rng.choice(atoms) if atoms else Top()
    k = rng.randrange(6)
    if k == 0:
        return Not(random_formula(rng, lang, depth - 1, ctx))
    if k in (1, 2, 3):
        op = (And, Or, Implies)[k - 1]
        return op(random_formula(rng, lang, depth - 1, ctx),
                  random_formula(rng, lang, depth - 1, ctx))
    sort = rng.choice(sorts)
    prefix = {IND: "x", UR: "p", SET: "x" if lang == "l1s" else "X"}[sort]
    v = Var(f"{prefix}{len([c for c in ctx if c.sort == sort]) + 7}", sort)
    q = Exists if k == 4 else Forall
    return q(v, random_formula(rng, lang, depth - 1, ctx + (v,)))


# -- parsing and printing ----------------------------------------------------------

def test_parse_examples():
    assert parse("A x. E y. x < y", "lord") == Forall(Var("x"), Exists(Var("y"), Less(Var("x"), Var("y"))))
    assert parse("S(x0) & x0 <= x1", "lbs") == And(S(x0), Subeq(x0, x1))
    assert parse("p0 in x0 -> S(x0)", "l1s") == Implies(In(p0, s0), S(s0))


def test_precedence_and_associativity():
    f = parse("~a < b & c < d | e < f -> g < h -> a = b", "lord")
    assert isinstance(f, Implies) and isinstance(f.right, Implies)
    assert isinstance(f.left, Or) and isinstance(f.left.left, And)
    assert isinstance(f.left.left.left, Not)
    assert parse(to_text(f), "lord") == f


def test_atom_macro_expands_in_lbs():
    f = parse("Atom(y0)", "lbs")
    assert f == atom_formula(y0)
    assert to_text(f) == "Atom(y0)"
    assert "Atom" not in to_text(f, abbreviate=False)


@pytest.mark.parametrize("text, lang", [("x < ", "lord"), ("A x x < y", "lord"),
                                        ("(x < y", "lord"), ("x # y", "lord")])
def test_syntax_errors(text, lang):
    with pytest.raises(FormulaSyntaxError) as err:
        parse(text, lang)
    assert 0 <= err.value.position <= len(text)


def test_sort_errors():
    with pytest.raises(SortError):
        parse("x0 <= x1", "lord")
    with pytest.raises(SortError):
        parse("p0 in p1", "l1s")
    with pytest.raises(SortError):
        parse("S(p0)", "l1s")
    assert check_language(parse("x in X & x < y", "lmon"), "lmon")


@settings(max_examples=200)
@given(st.integers(0, 10**9), st.sampled_from(["lord", "lbs", "lmon", "l1s"]))
def test_print_parse_round_trip(seed, lang):
    f = random_formula(random.Random(seed), lang, 4, ())
    assert parse(to_text(f), lang) == f
    assert parse(to_text(f, abbreviate=False), lang) == f


# -- classification ------------------------------------------------------------------

def test_classify_examples():
    assert classify(parse("A X. A x. x in X | ~x in X", "lmon")) == "Pi11"
    f = parse("E x. x < x", "lmon")
    assert classify(f) == "Normal" and quantifier_rank(f) == 1
    assert classify(parse("A X. E Y. A x. x in X -> x in Y", "lmon")) == "Other"
    assert classify(parse("E X. E x. x in X", "lmon")) == "Sigma11"
    assert size(parse("A x. x < x", "lord")) == 2


# -- model checking --------------------------------------------------------------------

def test_evaluate_examples():
    assert not evaluate(parse("A x. E y. x < y", "lord"), linear_order(3))
    alg = powerset_algebra(3, threshold=2)
    assert evaluate(S(y0), alg, {"y0": 0b001})
    assert not evaluate(S(y0), alg, {"y0": 0b011})
    assert evaluate(parse("u in X", "lmon"), linear_order(3), {"u": 1, "X": [1, 2]})


def test_cofinal_sets():
    assert cof_sets(linear_order(3)) == [m for m in range(8) if m & 0b100]
    assert cof_sets(linear_order(1)) == [1]
    for n in range(1, 6):
        brute = [m for m in range(1 << n) if all(any(m >> j & 1 for j in range(i, n))
                                                 for i in range(n))]
        assert cof_sets(linear_order(n)) == brute
        assert len(brute) == 2 ** (n - 1)


def test_cof_range_for_set_quantifiers():
    m = linear_order(4)
    f = parse("A X. E u. u in X & A v. v < u | v = u", "lmon")
    assert evaluate(f, m, cof=True)
    assert not evaluate(f, m)
    assert evaluate(f, m, cof=True) == naive(f, m, {}, cof=True)


def test_evaluation_errors():
    with pytest.raises(EvalError):
        evaluate(Less(x0, x1), linear_order(2), {"x0": 0})
    with pytest.raises(SignatureError):
        evaluate(Exists(x0, Less(x0, x0)), powerset_algebra(1))
    with pytest.raises(EvalError):
        evaluate_batch(Less(x0, x1), TableCache(linear_order(2)))
    with pytest.raises(ValueError):
        evaluate(Top(), linear_order(2), cache=TableCache(linear_order(2)))


STRUCTURES = {
    "lord": [linear_order(n) for n in range(0, 4)],
    "lmon": [linear_order(n) for n in range(1, 4)],
    "lbs": [powerset_algebra(g, threshold=t) for g in range(0, 3) for t in (1, 2)],
    "l1s": [two_sorted(g, t) for g in range(1, 3) for t in (1, 2)],
}


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(sorted(STRUCTURES)))
def test_checker_matches_naive_semantics(seed, lang):
    rng = random.Random(seed)
    f = random_formula(rng, lang, 3, ())
    for m in STRUCTURES[lang]:
        assert evaluate(f, m) == naive(f, m, {})


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_batch_and_truth_tables_agree_with_single_evaluation(seed):
    rng = random.Random(seed)
    ms = STRUCTURES["l1s"]
    cache = TableCache(ms)
    f = random_formula(rng, "l1s", 3, ())
    assert list(evaluate_batch(f, cache)) == [evaluate(f, m) for m in ms]
    g = random_formula(rng, "lord", 3, (x0, x1))
    m = linear_order(3)
    free, table, doms = truth_table(g, m)
    for idx in itertools.product(*(range(len(d)) for d in doms)):
        env = {v: int(d[i]) for v, d, i in zip(free, doms, idx)}
        assert bool(table[idx]) == naive(g, m, env)


# -- translations ----------------------------------------------------------------------------

def test_translate_plus_examples():
    assert translate_plus(Eq(p0, p1)) == Eq(y0, y2)
    assert translate_plus(In(p0, s0)) == And(atom_formula(y0), Subeq(y0, y1))
    assert to_text(translate_plus(In(p0, s0))) == "Atom(y0) & y0 <= y1"
    assert translate_plus(S(s1)) == S(y3)


def test_translate_plus_relativizes_urelement_quantifiers():
    f = translate_plus(parse("A p0. E x0. p0 in x0", "l1s"))
    assert f == Forall(y0, Implies(atom_formula(y0), Exists(y1, And(atom_formula(y0),
                                                                    Subeq(y0, y1)))))


def test_translate_prime_examples():
    f = translate_prime(Subeq(x0, x1))
    assert f == Forall(p0, Implies(In(p0, s0), In(p0, s1)))
    assert translate_prime(S(x0)) == S(s0)
    assert translate_prime(Eq(x0, x1)) == Eq(s0, s1)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_translations_preserve_truth(seed):
    rng = random.Random(seed)
    f = random_formula(rng, "l1s", 3, ())
    g = random_formula(rng, "lbs", 3, ())
    for ground in (1, 2):
        for t in (1, 2, 3):
            m, a = two_sorted(ground, t), powerset_algebra(ground, threshold=t)
            assert evaluate(f, m) == evaluate(translate_plus(f), a)
            assert evaluate(g, a) == evaluate(translate_prime(g), m)


def test_translation_renames_clashing_variables():
    f = parse("A p. p <= q", "lbs")
    assert free_vars(translate_prime(f)) == {Var("x1", SET)}
    g = parse("E pa. pa in zz", "l1s")
    assert free_vars(translate_plus(g)) == {y1}


# -- positivity and prenex form ----------------------------------------------------------------

def test_positivity_examples():
    assert is_positive(parse("A u. u in X", "lmon"))
    assert not is_positive(parse("~u in X", "lmon"))
    assert is_positive(parse("E w. A u. ~u < w | u in X", "lmon"))
    assert is_positive(parse("A u. u < w -> u in X", "lmon"))
    assert not is_positive(parse("A u. u in X -> u < w", "lmon"))
    assert negative_occurrence(parse("A u. u in X -> u < w", "lmon")) == In(Var("u"), X)


def test_prenex_examples():
    f = parse("A u. u in X", "lmon")
    assert moschovakis_prenex(f) == Forall(Var("u"), Implies(Top(), In(Var("u"), X)))
    g = parse("E w. A u. u < w -> u in X", "lmon")
    assert moschovakis_prenex(g) == g
    with pytest.raises(UnsupportedFragment):
        moschovakis_prenex(parse("~u in X", "lmon"))


def test_prenex_of_free_atom():
    f = parse("u0 in X", "lmon")
    g = moschovakis_prenex(f)
    assert in_prenex_shape(g, X)
    for n in range(1, 5):
        m = linear_order(n)
        for mask in range((1 << n) - 1):
            for u in range(n):
                env = {"u0": u, "X": mask}
                assert evaluate(f, m, env) == evaluate(g, m, env)


def positive_formulas(limit):
    out = []
    for f in enumerate_formulas("lmon", 3, 6, free=(X,), set_quantifiers=False):
        if X in free_vars(f) and is_positive(f, X):
            out.append(f)
            if len(out) == limit:
                break
    return out


def test_positive_formulas_are_monotone():
    for f in positive_formulas(150):
        for n in range(1, 4):
            m = linear_order(n)
            cache = TableCache(m)
            full = (1 << n) - 1
            for a in range(1 << n):
                if not evaluate(f, m, {"X": a}, cache=cache):
                    continue
                sup = full & ~a
                b = sup
                while True:
                    assert evaluate(f, m, {"X": a | b}, cache=cache)
                    if b == 0:
                        break
                    b = (b - 1) & sup


def test_positivity_agrees_with_polarity():
    for f in itertools.islice(enumerate_formulas("lmon", 2, 5, free=(X,),
                                                 set_quantifiers=False), 3000):
        # the class is syntactic, so polarity alone is necessary but not sufficient
        if is_positive(f, X):
            assert negative_occurrence(f) is None
        if negative_occurrence(f) is not None:
            assert not is_positive(f, X)
    assert not is_positive(parse("~~E u. u in X", "lmon"))
    assert negative_occurrence(parse("~~E u. u in X", "lmon")) is None


def test_prenex_is_equivalent_on_proper_subsets():
    for f in positive_formulas(60):
        g = moschovakis_prenex(f)
        assert in_prenex_shape(g, X)
        free = sorted(free_vars(f) - {X}, key=lambda v: v.name)
        for n in range(1, 4):
            m = linear_order(n)
            for mask in range((1 << n) - 1):
                for vals in itertools.product(range(n), repeat=len(free)):
                    env = {"X": mask, **{v.name: val for v, val in zip(free, vals)}}
                    assert evaluate(f, m, env) == evaluate(g, m, env)


# -- enumeration -------------------------------------------------------------------------------

def test_enumeration_examples():
    sentences = list(enumerate_formulas("lord", 1, 4))
    assert Forall(x0, Less(x0, x0)) in sentences and Exists(x0, Less(x0, x0)) in sentences
    assert len(sentences) == len(list(enumerate_formulas("lord", 1, 4)))
    assert len(set(sentences)) == len(sentences)
    for f in sentences:
        assert parse(to_text(f), "lord") == f
        assert quantifier_rank(f) <= 1 and size(f) <= 4 and not free_vars(f)


def test_enumerated_formulas_respect_languages():
    for lang in ("lord", "lbs", "lmon", "l1s"):
        for f in itertools.islice(enumerate_formulas(lang, 2, 5), 2000):
            assert check_language(f, lang)


def test_hintikka_sentences_characterize_rank_equivalence():
    for n in range(1, 5):
        for r in range(3):
            h = hintikka_sentence(linear_order(n), r)
            assert quantifier_rank(h) == r or r == 0
            for k in range(1, 5):
                same = k == n or min(k, n) >= 2 ** r - 1
                assert evaluate(h, linear_order(k)) == same
