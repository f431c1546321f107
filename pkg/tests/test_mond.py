from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import prod
import random

import pytest
from hypothesis import given, strategies as st

from ssmthom import fixtures as fx
from ssmthom.mond import (KPolynomialSet, MondError, WeightData, complete, elementary, evaluation_point,
                          image_milnor, image_milnor_l_form, k_polynomials, mond_substitution,
                          pp_crosscheck, reconstruct)
from ssmthom.series import C, Ring, S, c_var, s_var, series_exp


@pytest.fixture(scope="module")
def kset(master):
    return k_polynomials(master, 15)


@pytest.fixture(scope="module")
def lpolys():
    return fx.l_polynomials()


def test_low_k_polynomials(kset):
    r = Ring(1)
    s0, c1, c2 = r.s(), r.c(1), r.c(2)
    assert kset[1].with_truncation(None) == s0
    assert kset[2].with_truncation(None) == Fraction(1, 2) * s0 * (-c1 - s0)
    assert kset[3].with_truncation(None) == Fraction(1, 6) * s0 * (-7 * c2 + 2 * c1 * c1 + 3 * c1 * s0 + s0 * s0)


def test_k_polynomials_match_bundled(kset):
    printed = fx.printed_k_polynomials()
    for d in range(1, 7):
        assert kset[d].with_truncation(None) == printed[d], d


def test_k15_term_count(kset):
    assert len(kset[15]) == 508


def test_k_structure(kset):
    for d in range(1, 16):
        p = kset[d]
        assert p.is_homogeneous() and p.min_degree() == d
        for mono in p.terms:
            assert dict(mono).get(s_var(()), 0) >= 1
            assert all(v[0] in (C, S) for v, _ in mono)


def test_reconstruct_matches_substituted_exponential(master, kset):
    k = 8
    one_minus = Ring(1, k).one() - series_exp(master.truncate(k), k)
    assert mond_substitution(one_minus) == reconstruct(k_polynomials(master, k))


def test_truncation_guard(master):
    with pytest.raises(MondError):
        k_polynomials(master.truncate(5), 6)


def test_example_germ(kset):
    w = WeightData((1, 1, 2, 2, 3, 4, 4, 5, 5, 5), (1, 2, 2, 3, 4, 4, 5, 5, 6, 7, 10))
    res = image_milnor(w, kset)
    assert res.value == 34938044 and res.valid and res.verdict == "valid"


def test_nonexistent_germ(kset):
    w = WeightData((1, 1, 2, 2, 3, 4, 4, 5, 5, 5), (1, 2, 2, 3, 4, 4, 5, 5, 6, 7, 11))
    res = image_milnor(w, kset)
    assert not res.valid and res.verdict == "Rejected"


def test_cusp_and_immersion(kset):
    assert image_milnor(WeightData((1,), (2, 3)), kset).value == 1
    assert image_milnor(WeightData((1,), (1, 1)), kset).value == 0


def test_cusp_by_hand():
    # s_0 = 6, c_1 = 5 - 1 = 4; K_1 = s_0, K_2 = s_0(-c_1 - s_0)/2
    s0, c1 = Fraction(6), Fraction(4)
    k1, k2 = s0, s0 * (-c1 - s0) / 2
    rhs = (k1 * 5 + k2 * 1) / 6
    assert -(rhs - 1) == 1


def test_evaluation_point_values():
    vals = evaluation_point(WeightData((1,), (2, 3)), 2)
    assert vals[s_var(())] == 6
    # c(t) = (1+2t)(1+3t)/(1+t) = 1 + 4t + 2t^2 + ...
    assert vals[c_var(1)] == 4 and vals[c_var(2)] == 2


def test_symmetric_functions_brute():
    xs = (1, 2, 2, 5)
    for k in range(0, 6):
        assert elementary(k, xs) == sum(prod(c) for c in combinations(xs, k))
        assert complete(k, xs) == sum(prod(c) for c in combinations_with_replacement(xs, k))


def test_weight_data_validation():
    with pytest.raises(MondError):
        WeightData((1, 2), (1, 2))
    with pytest.raises(MondError):
        WeightData((0,), (1, 1))
    with pytest.raises(MondError):
        WeightData(tuple([1] * 15), tuple([1] * 16))


def test_kset_too_short(master):
    with pytest.raises(MondError):
        image_milnor(WeightData((1, 1, 1), (1, 1, 1, 2)), k_polynomials(master, 3))


def test_pp_crosscheck(kset, lpolys):
    assert pp_crosscheck(kset, lpolys)
    s0 = Ring(1).s()
    assert (s0 * lpolys[0]) == kset[1].with_truncation(None)


def test_pp_crosscheck_detects_perturbation(kset, lpolys):
    bad = list(lpolys)
    bad[2] = bad[2] + Fraction(1, 6) * Ring(1).c(2)
    assert not pp_crosscheck(kset, bad)


def test_printed_k5_sign_fails_crosscheck(kset, lpolys):
    raw = {item["d"]: item for item in fx.load_raw("kpoly")["polynomials"]}
    assert raw[5]["correction"] and raw[6]["correction"]
    r = Ring(1)
    as_printed = kset[5].with_truncation(None) - Fraction(70, 120) * r.c(1) ** 2 * r.s() ** 3
    polys = list(kset.polys)
    polys[4] = as_printed
    assert not pp_crosscheck(KPolynomialSet(tuple(polys)), lpolys)


weights = st.integers(1, 6)


@st.composite
def weight_data(draw, max_m=5):
    m = draw(st.integers(1, max_m))
    alpha = tuple(draw(weights) for _ in range(m))
    beta = tuple(draw(st.integers(1, 12)) for _ in range(m + 1))
    return WeightData(alpha, beta)


@given(weight_data(), st.integers(2, 4))
def test_homogeneity_invariance(kset, w, lam):
    scaled = WeightData(tuple(lam * a for a in w.alpha), tuple(lam * b for b in w.beta))
    assert image_milnor(w, kset).value == image_milnor(scaled, kset).value


@given(weight_data(), st.randoms())
def test_permutation_invariance(kset, w, rnd):
    a, b = list(w.alpha), list(w.beta)
    rnd.shuffle(a)
    rnd.shuffle(b)
    assert image_milnor(w, kset).value == image_milnor(WeightData(tuple(a), tuple(b)), kset).value


def test_l_form_agrees_on_random_inputs(kset, lpolys):
    rng = random.Random(20240611)
    for _ in range(100):
        m = rng.randint(1, 5)
        w = WeightData(tuple(rng.randint(1, 6) for _ in range(m)),
                       tuple(rng.randint(1, 12) for _ in range(m + 1)))
        assert image_milnor(w, kset).value == image_milnor_l_form(w, lpolys).value, w
