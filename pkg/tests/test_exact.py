from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from affvir.exact import (
    EmptyMatrix,
    GaussRat,
    NuPoly,
    SparseMatrix,
    parse_scalar,
    rank_and_kernel,
    rank_over_function_field,
    scalar_str,
)


def F(x):
    return Fraction(x)


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)


# --- scalars ---------------------------------------------------------------

@given(rationals, rationals, rationals)
def test_rational_field_axioms(a, b, c):
    # exactness smoke test: these fail for floats on e.g. (1/3, 1/3, 1/3)
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c


@given(rationals, rationals, rationals, rationals)
def test_gaussian_arithmetic(ar, ai, br, bi):
    a = GaussRat(ar, ai)
    b = GaussRat(br, bi)
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b).conj() == a.conj() * b.conj()
    if b:
        assert (a / b) * b == a


def test_parse_scalar_rational():
    assert parse_scalar("3/4") == F("3/4")
    assert parse_scalar("-7") == F(-7)
    assert scalar_str(parse_scalar("-2/6")) == "-1/3"
    with pytest.raises(ValueError):
        parse_scalar("0.5")


def test_parse_scalar_gaussian():
    assert parse_scalar("1/2+1/3i", gaussian=True) == GaussRat(F("1/2"), F("1/3"))
    assert parse_scalar("-i", gaussian=True) == GaussRat(F(0), F(-1))
    assert parse_scalar("5/3", gaussian=True) == GaussRat(F("5/3"))
    v = parse_scalar("2-3/4i", gaussian=True)
    assert v == GaussRat(F(2), F("-3/4"))
    assert parse_scalar(scalar_str(v), gaussian=True) == v


# --- polynomials -----------------------------------------------------------

def test_poly_basics():
    nu = NuPoly.nu()
    p = (nu - 1) * (2 * nu - 3)
    assert p.eval(F(1)) == 0
    assert p.eval(F("3/2")) == 0
    assert p.eval(F(0)) == 3
    assert p.degree == 2
    q, r = p.divmod(nu - 1)
    assert r.is_zero() and q == 2 * nu - 3


def test_poly_rational_roots():
    nu = NuPoly.nu()
    p = nu * (nu - 2) * (3 * nu + 1) * (nu * nu + 1)
    assert p.rational_roots() == [Fraction(-1, 3), F(0), F(2)]
    assert p.has_nonrational_factor()
    assert not ((nu - 5) * (nu + 5)).has_nonrational_factor()


def test_poly_gaussian_roots():
    nu = NuPoly.nu()
    i = GaussRat(F(0), F(1))
    p = (nu - 2) * (nu - NuPoly.const(i))
    assert p.rational_roots() == [F(2)]


@given(st.lists(rationals, max_size=5), st.lists(rationals, max_size=5), rationals)
def test_poly_mul_eval_compatible(a, b, x):
    p, q = NuPoly(a), NuPoly(b)
    assert (p * q).eval(x) == p.eval(x) * q.eval(x)
    assert (p + q).eval(x) == p.eval(x) + q.eval(x)


# --- scalar rank/kernel ----------------------------------------------------

def test_rank_identity():
    m = SparseMatrix.from_rows([[1, 0], [0, 1]])
    rank, ker = rank_and_kernel(m)
    assert rank == 2 and ker == []


def test_rank_zero_matrix():
    m = SparseMatrix(3, 4)
    rank, ker = rank_and_kernel(m)
    assert rank == 0 and len(ker) == 4


def test_rank_one_kernel():
    # hand elimination: r2 <- r2 - 2*r1 wipes the second row, so rank 1 and
    # the kernel is cut out by x + 2y = 0
    m = SparseMatrix.from_rows([[1, 2], [2, 4]])
    rank, ker = rank_and_kernel(m)
    assert rank == 1
    assert len(ker) == 1
    x, y = ker[0]
    assert x + 2 * y == 0 and (x, y) != (0, 0)
    assert [x * F(-2) / x, y * F(-2) / x] == [F(-2), F(1)]


def _mat_strategy():
    return st.lists(
        st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=3), min_size=1, max_size=5),
        min_size=1, max_size=5,
    ).filter(lambda rows: len({len(r) for r in rows}) == 1)


@settings(max_examples=60)
@given(_mat_strategy())
def test_rank_pivot_rule_independent(rows):
    m = SparseMatrix.from_rows(rows)
    r1, k1 = rank_and_kernel(m, pivot_rule="markowitz")
    r2, k2 = rank_and_kernel(m, pivot_rule="first")
    assert r1 == r2
    assert len(k1) == len(k2) == m.cols - r1


@settings(max_examples=60)
@given(_mat_strategy())
def test_kernel_annihilated(rows):
    m = SparseMatrix.from_rows(rows)
    rank, ker = rank_and_kernel(m)
    assert rank + len(ker) == m.cols
    for vec in ker:
        for i in range(m.rows):
            assert sum(m[i, j] * vec[j] for j in range(m.cols)) == 0


# --- rank over Q(nu) -------------------------------------------------------

def test_ff_rank_single_nu():
    m = SparseMatrix(1, 1)
    m[0, 0] = NuPoly.nu()
    res = rank_over_function_field(m)
    assert res.generic_rank == 1
    assert res.exceptional == [F(0)]


def test_ff_rank_diag():
    # det = nu - 1, dropping rank exactly at nu = 1
    nu = NuPoly.nu()
    m = SparseMatrix(2, 2)
    m[0, 0] = nu - 1
    m[1, 1] = NuPoly.const(F(1))
    res = rank_over_function_field(m)
    assert res.generic_rank == 2
    assert res.exceptional == [F(1)]


def test_ff_rank_proportional_rows():
    # all 2x2 minors vanish identically; the constant 1x1 minor keeps rank 1
    nu = NuPoly.nu()
    m = SparseMatrix(2, 2)
    m[0, 0] = nu
    m[0, 1] = nu
    m[1, 0] = NuPoly.const(F(1))
    m[1, 1] = NuPoly.const(F(1))
    res = rank_over_function_field(m)
    assert res.generic_rank == 1
    assert res.exceptional == []


def test_ff_rank_empty_matrix():
    with pytest.raises(EmptyMatrix):
        rank_over_function_field(SparseMatrix(0, 3))


@settings(max_examples=40)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)),
                min_size=1, max_size=6),
       st.integers(2, 4), st.integers(2, 4))
def test_ff_exceptional_substitution(coeffs, nr, nc):
    # random small polynomial matrices: every reported exceptional value must
    # actually drop the rank, and a non-exceptional integer must not
    m = SparseMatrix(nr, nc)
    for idx, (a, b, pos) in enumerate(coeffs):
        m[pos % nr, idx % nc] = NuPoly((F(a), F(b)))
    if not m.entries:
        return
    res = rank_over_function_field(m)
    for root in res.exceptional:
        r_at, _ = rank_and_kernel(m.subs(root))
        assert r_at < res.generic_rank
    probe = 10**6 + 7
    while any(root == probe for root in res.exceptional):
        probe += 1
    r_probe, _ = rank_and_kernel(m.subs(F(probe)))
    assert r_probe == res.generic_rank
