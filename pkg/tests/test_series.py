from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ssmthom.series import (GradedSeries, Partition, Ring, SeriesError, c_var, graded_component,
                            graded_upto, loads, dumps, parse_rational, partitions, render, s_var,
                            series_exp, series_from_json, series_log, series_to_json, substitute,
                            substitute_s, truncated_product)

R1 = Ring(1, 6)


def test_difference_of_squares():
    r = Ring(1, 2)
    assert (r.one() + r.c(1)) * (r.one() - r.c(1)) == r.one() - r.c(1) ** 2


def test_total_chern_inverse_pair():
    r = Ring(1, 3)
    total = r.one() + r.c(1) + r.c(2) + r.c(3)
    inv = r.one() - r.c(1) + (r.c(1) ** 2 - r.c(2)) + (-r.c(1) ** 3 + 2 * r.c(1) * r.c(2) - r.c(3))
    assert total * inv == r.one()
    assert total.inverse(3) == inv


def test_truncation_drops_high_degree():
    r = Ring(1, 1)
    assert r.s() * r.s() == r.zero()


def test_degrees_of_variables():
    r = Ring(2)
    assert (r.s(3, 1)).min_degree() == 2 + 4
    assert r.c(3).min_degree() == 3
    assert r.x(0).min_degree() == 1


def test_exp_of_zero_and_log_of_one():
    assert series_exp(R1.zero(), 6) == R1.one()
    assert series_log(R1.one(), 6) == R1.zero()


def test_one_minus_exp_of_master_prefix():
    r = Ring(1, 3)
    ms = -r.s() + Fraction(1, 2) * r.s(1) + Fraction(1, 6) * (7 * r.s(2) - 2 * r.s(1, 1))
    expected = (r.s() + Fraction(1, 2) * (-r.s(1) - r.s() ** 2)
                + Fraction(1, 6) * (-7 * r.s(2) + 2 * r.s(1, 1) + 3 * r.s(1) * r.s() + r.s() ** 3))
    assert r.one() - series_exp(ms, 3) == expected


def test_log_of_truncated_exponential():
    # exp(-s_0 + s_1/2) = 1 - s_0 + (s_1/2 + s_0^2/2) + ...
    r = Ring(1, 2)
    p = r.one() - r.s() + Fraction(1, 2) * r.s(1) + Fraction(1, 2) * r.s() ** 2
    assert series_log(p, 2) == -r.s() + Fraction(1, 2) * r.s(1)


def test_graded_component_and_reconstruction():
    r = Ring(1)
    p = r.one() + r.s() + r.s(1)
    assert graded_component(p, 2) == r.s(1)
    assert sum((graded_component(p, d) for d in range(0, 3)), Ring(1).zero()) == p
    assert graded_upto(p, 1) == r.one() + r.s()


def test_substitute_s_single_variable():
    r = Ring(1)
    beta = r.x(0)
    assert substitute_s(r.s(1), {Partition((1,)): beta ** 2}, None) == beta ** 2


def test_inverse_requires_unit_constant():
    with pytest.raises(SeriesError):
        (Ring(1, 3).c(1)).inverse(3)


def test_partitions_count():
    # p(n) for n = 0..10
    assert [len(partitions(n)) for n in range(11)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def test_partition_rendering():
    r = Ring(1)
    assert render(r.s(3, 1, 1)) == "s_{311}"
    assert render(r.s(3, 1, 1), compress=True) == "s_{31^2}"
    assert render(r.s(2, 3, 3)) == "s_{332}"
    assert render(r.s(10, 1)) == "s_{10,1}"
    assert render(r.s()) == "s_0"
    assert render(Fraction(1, 2) * r.s(1) - r.s()) == "-s_0 + 1/2 s_1"


@pytest.mark.parametrize("text", ["1/0", "2/4", "1/-3", "x", "1.5", ""])
def test_parse_rational_rejects(text):
    with pytest.raises(SeriesError):
        parse_rational(text)


def test_parse_rational_accepts():
    assert parse_rational("-7/6") == Fraction(-7, 6)
    assert parse_rational("12") == 12


def test_json_round_trip_exact():
    r = Ring(1, 5)
    p = Fraction(-7, 6) * r.s(2) + r.c(1) * r.s() ** 2 + Fraction(1, 3)
    assert loads(dumps(p)) == p
    assert loads(dumps(p)).truncation == 5


def test_json_rejects_duplicates_and_zero():
    obj = series_to_json(Ring(1).s(1))
    obj["terms"].append(obj["terms"][0])
    with pytest.raises(SeriesError):
        series_from_json(obj)
    obj = series_to_json(Ring(1).s(1))
    obj["terms"][0]["coeff"] = "0"
    with pytest.raises(SeriesError):
        series_from_json(obj)


# --- properties -------------------------------------------------------------------

S_VARS = [s_var(()), s_var((1,)), s_var((2,)), s_var((1, 1)), c_var(1), c_var(2)]
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def series_no_constant(draw, k=4):
    terms = {}
    for _ in range(draw(st.integers(1, 5))):
        mono = []
        for v in draw(st.lists(st.sampled_from(S_VARS), min_size=1, max_size=3)):
            mono.append(v)
        key = tuple(sorted(((v, mono.count(v)) for v in set(mono))))
        terms[key] = draw(coeffs)
    return GradedSeries(1, terms, k).truncate(k)


@given(series_no_constant())
def test_log_exp_round_trip(p):
    assert series_log(series_exp(p, 4), 4) == p


@given(series_no_constant())
def test_exp_log_round_trip(p):
    q = Ring(1, 4).one() + p
    assert series_exp(series_log(q, 4), 4) == q


@given(series_no_constant(), series_no_constant())
def test_exp_is_multiplicative(p, q):
    assert series_exp(p + q, 4) == truncated_product(series_exp(p, 4), series_exp(q, 4), 4)


@given(series_no_constant(), series_no_constant())
def test_substitution_is_a_ring_map(p, q):
    r = Ring(1)
    a, b = r.x(0), r.x(1)
    images = {s_var(()): a, s_var((1,)): a * b, s_var((2,)): b ** 3 - a * a * b,
              s_var((1, 1)): a ** 3, c_var(1): a + b, c_var(2): a * b}
    lhs = substitute(truncated_product(p, q, 4), images, 4, check_degrees=True)
    rhs = truncated_product(substitute(p, images, 4), substitute(q, images, 4), 4)
    assert lhs == rhs


@given(series_no_constant())
def test_components_reconstruct(p):
    total = Ring(1, 4).zero()
    for d in range(0, 5):
        total = total + p.component(d).with_truncation(4)
    assert total == p
