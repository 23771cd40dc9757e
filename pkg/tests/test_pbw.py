from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from affvir.affine import AffVir, dd, ge
from affvir.lie import load_algebra
from affvir.pbw import PBWEngine, PositiveFactorInNegativeMode, UEnvElement

F = Fraction


@pytest.fixture(scope="module")
def eng():
    return PBWEngine(AffVir(load_algebra("sl2")))


def uel(eng, *pairs):
    return UEnvElement(eng, [(eng.monomial(tuple(w)), F(c)) for w, c in pairs])


def test_straighten_two_virasoro(eng):
    # one transposition: [d(-1), d(-2)] = -d(-3)
    out = eng.straighten((dd(-1), dd(-2)), negative=True)
    assert out == uel(eng, ((dd(-2), dd(-1)), 1), ((dd(-3),), -1))


def test_straighten_already_canonical(eng):
    out = eng.straighten((dd(-2), dd(-1)), negative=True)
    assert out == uel(eng, ((dd(-2), dd(-1)), 1))


def test_straighten_loop_pair(eng):
    # same loop degree sorts by basis index, so f(-1) moves past e(-1) and
    # picks up [f(-1), e(-1)] = -h(-2); the central term drops since -2 != 0
    E, H, Fi = (eng.av.alg.index[n] for n in "ehf")
    out = eng.straighten((ge(Fi, -1), ge(E, -1)), negative=True)
    assert out == uel(eng, ((ge(E, -1), ge(Fi, -1)), 1), ((ge(H, -2),), -1))


def test_negative_mode_rejects_positive(eng):
    with pytest.raises(PositiveFactorInNegativeMode):
        eng.straighten((dd(-1), dd(2)), negative=True)


def test_multiply_unit(eng):
    one = UEnvElement.one(eng)
    q = eng.straighten((dd(-2), dd(-1)), negative=True)
    assert eng.multiply(one, q) == q
    assert eng.multiply(q, one) == q


def test_multiply_power(eng):
    p = uel(eng, ((dd(-1),), 1))
    out = eng.multiply(p, p)
    (mono, coeff), = out.terms.items()
    assert coeff == 1
    assert mono.factors == ((dd(-1), 2),)


def test_multiply_against_straighten_oracle(eng):
    # d(-1) * (d(-2)d(-1)) re-straightened from the flat 3-letter word
    p = uel(eng, ((dd(-1),), 1))
    q = uel(eng, ((dd(-2), dd(-1)), 1))
    out = eng.multiply(p, q)
    oracle = eng.straighten((dd(-1), dd(-2), dd(-1)))
    assert out == oracle
    assert out == uel(eng, ((dd(-2), dd(-1), dd(-1)), 1), ((dd(-3), dd(-1)), -1))


def _neg_gens(eng, max_depth=4):
    alg = eng.av.alg
    gens = []
    for m in range(-max_depth, 0):
        gens.append(dd(m))
        for b in range(alg.dim):
            gens.append(ge(b, m))
    for b in alg.neg_roots:
        gens.append(ge(b, 0))
    return gens


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_multiply_associative(eng, data):
    gens = _neg_gens(eng)
    words = [tuple(data.draw(st.lists(st.sampled_from(gens), max_size=2)))
             for _ in range(3)]
    a, b, c = (eng.straighten(w, negative=True) for w in words)
    assert eng.multiply(a, eng.multiply(b, c)) == eng.multiply(eng.multiply(a, b), c)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_degree_additive_under_multiply(eng, data):
    gens = _neg_gens(eng)
    w1 = tuple(data.draw(st.lists(st.sampled_from(gens), max_size=3)))
    w2 = tuple(data.draw(st.lists(st.sampled_from(gens), max_size=3)))
    p = eng.straighten(w1, negative=True)
    q = eng.straighten(w2, negative=True)
    d1 = next(iter(p.terms)).depth
    d2 = next(iter(q.terms)).depth
    out = eng.multiply(p, q)
    assert out.terms  # products of PBW monomials never vanish
    for mono in out.terms:
        assert mono.depth == d1 + d2


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_straighten_drop_invariant(eng, data):
    # the weight drop is additive and preserved by rewriting
    gens = _neg_gens(eng)
    word = tuple(data.draw(st.lists(st.sampled_from(gens), min_size=1, max_size=4)))
    drop = tuple(sum(col) for col in zip(*(eng.av.drop_of_gen(g) for g in word)))
    out = eng.straighten(word, negative=True)
    for mono in out.terms:
        assert mono.drop == drop
