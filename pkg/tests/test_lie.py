import itertools
from fractions import Fraction

import pytest

from affvir.lie import (
    GWeight,
    JacobiViolation,
    NonIntegerDualCoxeter,
    SL2_CONFIG,
    casimir_eigenvalue,
    dual_coxeter,
    is_dominant,
    load_algebra,
)


F = Fraction


@pytest.fixture(scope="module")
def sl2():
    return load_algebra("sl2")


def eps(i):
    # i-th multiple of the fundamental weight of sl2, as coroot values
    return GWeight((F(i),))


def test_sl2_form_values(sl2):
    e, h, f = (sl2.index[n] for n in "ehf")
    # normalized so (theta|theta)=2, which for sl2 is the trace form of the
    # defining representation: (e|f)=1, (h|h)=2, mixed pairs vanish
    assert sl2.form(e, f) == 1
    assert sl2.form(h, h) == 2
    assert sl2.form(e, e) == 0
    assert sl2.form(e, h) == 0
    assert sl2.dim == 3 and sl2.rank == 1


def test_sl2_theta_rho(sl2):
    assert sl2.theta == eps(2)
    assert sl2.rho == eps(1)


def test_sl2_jacobi_and_invariance_brute_force(sl2):
    dim = sl2.dim
    for i, j, k in itertools.product(range(dim), repeat=3):
        jac = {}
        for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
            t = sl2.bracket_elem(sl2.bracket(a, b), {c: F(1)})
            for idx, v in t.items():
                jac[idx] = jac.get(idx, F(0)) + v
        assert not any(jac.values())
        lhs = sl2.form_elem(sl2.bracket(i, j), {k: F(1)})
        rhs = sl2.form_elem({i: F(1)}, sl2.bracket(j, k))
        assert lhs == rhs


def test_dual_basis_completeness(sl2):
    # x = sum_i (x|y_i) x_i for every basis element x
    for b in range(sl2.dim):
        recon = {}
        for i in range(sl2.dim):
            coef = sl2.form_elem({b: F(1)}, sl2.dual_basis[i])
            if coef:
                recon[i] = recon.get(i, F(0)) + coef
        assert recon == {b: F(1)}


def test_corrupted_constants_rejected():
    bad = {
        "name": "bad",
        "basis": ["e", "h", "f"],
        "cartan": ["h"],
        "simple": ["e"],
        "brackets": {
            "e f": {"e": "1"},  # [e,f]=e breaks Jacobi with h
            "h e": {"e": "2"},
            "h f": {"f": "-2"},
        },
    }
    with pytest.raises(JacobiViolation):
        load_algebra(bad)


def test_casimir_values(sl2):
    # c_{i*eps} = (i^2 + 2i)/2 for sl2
    assert casimir_eigenvalue(sl2, eps(2)) == 4
    assert casimir_eigenvalue(sl2, eps(0)) == 0
    assert casimir_eigenvalue(sl2, eps(3)) == F(15, 2)
    assert casimir_eigenvalue(sl2, eps(1)) == F(3, 2)


def test_dual_coxeter(sl2):
    g = dual_coxeter(sl2)
    assert g == 2
    assert casimir_eigenvalue(sl2, sl2.theta) / 2 == g


def test_dual_coxeter_rejects_bad_normalization(sl2):
    import copy

    hacked = copy.copy(sl2)
    hacked.form_matrix = [[2 * v for v in row] for row in sl2.form_matrix]
    hacked._finish()
    with pytest.raises(NonIntegerDualCoxeter):
        dual_coxeter(hacked)


def test_dominance(sl2):
    assert is_dominant(sl2, eps(2), 2)
    assert is_dominant(sl2, eps(0), 0)
    assert not is_dominant(sl2, eps(2), 1)  # <2eps, theta-check> = 2 > 1
    assert not is_dominant(sl2, GWeight((F(1, 3),)), 5)
    assert not is_dominant(sl2, eps(1), F(3, 2))


def test_weight_form(sl2):
    assert sl2.weight_form(eps(1), eps(1)) == F(1, 2)
    assert sl2.pair_theta_check(eps(2)) == 2
    assert sl2.weight_hvals(eps(3)) == {sl2.index["h"]: F(3)}


def test_root_classification(sl2):
    e, h, f = (sl2.index[n] for n in "ehf")
    assert sl2.pos_roots == [e]
    assert sl2.neg_roots == [f]
    assert sl2.root_coords[e] == (1,)
    assert sl2.root_coords[f] == (-1,)
    assert sl2.theta_idx == e


def test_config_roundtrip(tmp_path):
    import json

    path = tmp_path / "sl2.json"
    path.write_text(json.dumps(SL2_CONFIG))
    alg = load_algebra(str(path))
    assert alg.dim == 3
    assert dual_coxeter(alg) == 2
