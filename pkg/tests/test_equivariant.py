from fractions import Fraction

from hypothesis import given, strategies as st

from ssmthom.equivariant import (euler_ratio, evaluate_at_prototype, relative_chern, ssm_origin,
                                 total_chern)
from ssmthom.prototype import build_prototype
from ssmthom.series import GradedSeries, Ring, c_var, s_var, truncated_product


def test_i22_relative_chern():
    p = build_prototype("I22", 1)
    r = Ring(1, 2)
    a, b, c = r.x(0), r.x(1), r.x(2)
    expected = r.one() + (a + b + c) + (-a * a - b * b + a * b + a * c + b * c)
    assert relative_chern(p, 2) == expected


def test_euler_ratios():
    r = Ring(1)
    assert euler_ratio(build_prototype("I22", 1)) == 4 * r.x(2)
    assert euler_ratio(build_prototype("A1", 1)) == 2 * r.x(1)
    r2 = Ring(2)
    assert euler_ratio(build_prototype("A0", 2), 2) == r2.x(0) * r2.x(1)


def test_s211_at_i22():
    p = build_prototype("I22", 1)
    r = Ring(1)
    a, b, c = r.x(0), r.x(1), r.x(2)
    expected = 4 * c * (-a * a - b * b + a * b + a * c + b * c) * (a + b + c) ** 2
    assert evaluate_at_prototype(r.s(2, 1, 1), p, 6) == expected.with_truncation(6)


def test_a0_values():
    p = build_prototype("A0", 1)
    r = Ring(1, 3)
    beta = r.x(0)
    assert relative_chern(p, 3) == r.one() + beta
    assert evaluate_at_prototype(r.s(1), p, 3) == beta * beta
    assert evaluate_at_prototype(r.one(), p, 3) == r.one()


def test_ssm_origin():
    r = Ring(1, 3)
    beta = r.x(0)
    assert ssm_origin(1, [(1,)], 3) == beta - beta ** 2 + beta ** 3
    r2 = Ring(2, 3)
    b1, b2 = r2.x(0), r2.x(1)
    expected = b1 * b2 * (r2.one() - b1 - b2)
    assert ssm_origin(2, [(1, 0), (0, 1)], 3) == expected


def test_chern_is_multiplicative():
    w1, w2 = [(1, 0), (1, -1)], [(0, 2)]
    assert total_chern(w1 + w2, 1, 4) == total_chern(w1, 1, 4) * total_chern(w2, 1, 4)


VARS = [s_var(()), s_var((1,)), s_var((2,)), s_var((1, 1)), s_var((2, 1)), c_var(1), c_var(2)]


@st.composite
def polys(draw):
    terms = {}
    for _ in range(draw(st.integers(1, 4))):
        vs = draw(st.lists(st.sampled_from(VARS), min_size=1, max_size=2))
        key = tuple(sorted(((v, vs.count(v)) for v in set(vs))))
        terms[key] = Fraction(draw(st.integers(-4, 4)))
    return GradedSeries(1, terms, 6).truncate(6)


@given(polys(), polys(), st.sampled_from(["A0", "A1", "A2", "I22"]))
def test_evaluation_is_a_ring_map(p, q, name):
    proto = build_prototype(name, 1)
    lhs = evaluate_at_prototype(truncated_product(p, q, 6), proto, 6)
    rhs = truncated_product(evaluate_at_prototype(p, proto, 6), evaluate_at_prototype(q, proto, 6), 6)
    assert lhs == rhs
