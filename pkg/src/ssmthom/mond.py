"""Image Milnor numbers of quasihomogeneous germs C^m -> C^(m+1) from the l = 1 master series."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import prod
from typing import Sequence

from .series import (C, S, GradedSeries, SeriesError, c_var, format_rational, mono_from, s_var,
                     series_exp, substitute, truncated_product)

MAX_M = 14
S0 = s_var(())


class MondError(ValueError):
    pass


@dataclass(frozen=True)
class WeightData:
    alpha: tuple
    beta: tuple

    def __post_init__(self):
        m = len(self.alpha)
        if not 1 <= m <= MAX_M:
            raise MondError(f"source dimension must be between 1 and {MAX_M}, got {m}")
        if len(self.beta) != m + 1:
            raise MondError(f"expected {m + 1} degrees for {m} weights, got {len(self.beta)}")
        if any(int(w) <= 0 for w in self.alpha + self.beta):
            raise MondError("weights and degrees must be positive integers")

    @property
    def m(self) -> int:
        return len(self.alpha)


@dataclass(frozen=True)
class KPolynomialSet:
    polys: tuple  # K_1 .. K_D
    source: str = ""

    @property
    def max_degree(self) -> int:
        return len(self.polys)

    def __getitem__(self, d: int) -> GradedSeries:
        if not 1 <= d <= len(self.polys):
            raise MondError(f"K_{d} not available (have K_1..K_{len(self.polys)})")
        return self.polys[d - 1]


@dataclass(frozen=True)
class MilnorResult:
    value: Fraction
    valid: bool

    @property
    def verdict(self) -> str:
        return "valid" if self.valid else "Rejected"

    def __str__(self) -> str:
        return f"{format_rational(self.value)} ({self.verdict})"


def mond_substitution(p: GradedSeries) -> GradedSeries:
    """s_λ -> s_0 · c_{λ_1} ··· c_{λ_r} (l = 1)."""
    images = {}
    for v in p.variables():
        if v[0] == S:
            images[v] = GradedSeries(p.l, {mono_from([(S0, 1)] + [(c_var(i), 1) for i in v[2]]):
                                           Fraction(1)})
        elif v[0] == C:
            images[v] = GradedSeries.variable(v, p.l)
        else:
            raise SeriesError("mond substitution expects s- and c-variables only")
    return substitute(p, images, p.truncation)


def k_polynomials(master: GradedSeries, D: int = 15, source: str = "") -> KPolynomialSet:
    """Graded parts K_1..K_D of 1 - exp(master) after the s_λ -> s_0 c_λ substitution.

    The substitution is a ring map, so it is applied before exponentiating; this
    keeps the exponential in the much smaller ring Q[s_0, c_1, c_2, ...].
    """
    if master.l != 1:
        raise MondError("K-polynomials are defined for l = 1")
    if master.truncation is not None and master.truncation < D:
        raise MondError(f"master series is truncated at degree {master.truncation} < {D}")
    if not 1 <= D <= MAX_M + 1:
        raise MondError(f"D must be between 1 and {MAX_M + 1}")
    image = mond_substitution(master.truncate(D))
    one_minus = GradedSeries.const(1, 1, D) - series_exp(image, D)
    return KPolynomialSet(tuple(one_minus.component(d) for d in range(1, D + 1)), source)


# --- symmetric functions -----------------------------------------------------------

def elementary(k: int, xs: Sequence) -> Fraction:
    """e_k(xs) via the product generating function."""
    if k < 0:
        return Fraction(0)
    coeffs = [Fraction(1)]
    for x in xs:
        coeffs = [a + Fraction(x) * b for a, b in zip(coeffs + [Fraction(0)], [Fraction(0)] + coeffs)]
    return coeffs[k] if k < len(coeffs) else Fraction(0)


def complete(k: int, xs: Sequence) -> Fraction:
    """h_k(xs), the sum of all degree-k monomials."""
    if k < 0:
        return Fraction(0)
    return sum((Fraction(prod(c)) for c in combinations_with_replacement(xs, k)), Fraction(0)) \
        if k else Fraction(1)


def _complete_all(n: int, xs: Sequence) -> list[Fraction]:
    # h_0..h_n by the recurrence h_k = Σ_j (-1)^(j+1) e_j h_{k-j}
    e = [elementary(j, xs) for j in range(n + 1)]
    h = [Fraction(1)]
    for k in range(1, n + 1):
        h.append(sum((((-1) ** (j + 1)) * e[j] * h[k - j] for j in range(1, k + 1)), Fraction(0)))
    return h


def evaluation_point(w: WeightData, n: int) -> dict:
    """s_0 = e_{m+1}(β)/e_m(α) and c_k = Σ_i (-1)^(k-i) e_i(β) h_{k-i}(α), k = 1..n."""
    m = w.m
    s0 = elementary(m + 1, w.beta) / elementary(m, w.alpha)
    eb = [elementary(i, w.beta) for i in range(n + 1)]
    ha = _complete_all(n, w.alpha)
    values = {S0: s0}
    for k in range(1, n + 1):
        values[c_var(k)] = sum((((-1) ** (k - i)) * eb[i] * ha[k - i] for i in range(k + 1)),
                               Fraction(0))
    return values


def image_milnor(w: WeightData, kset: KPolynomialSet) -> MilnorResult:
    """μ_I = (-1)^m (RHS - 1), RHS = Σ_{i=1}^{m+1} K_i e_{m+1-i}(β) / e_{m+1}(β).

    Valid only for A-finite quasihomogeneous germs; a value that is not a
    non-negative integer shows that no such germ exists.
    """
    m = w.m
    if kset.max_degree < m + 1:
        raise MondError(f"need K_1..K_{m + 1}, have K_1..K_{kset.max_degree}")
    values = evaluation_point(w, m + 1)
    total = sum((kset[i].evaluate(values) * elementary(m + 1 - i, w.beta) for i in range(1, m + 2)),
                Fraction(0))
    rhs = total / elementary(m + 1, w.beta)
    mu = (-1) ** m * (rhs - 1)
    return MilnorResult(mu, mu.denominator == 1 and mu >= 0)


def image_milnor_l_form(w: WeightData, lpolys: Sequence[GradedSeries]) -> MilnorResult:
    """The same number from L_0..L_m: (-1)^m μ_I + 1 = Σ_i L_i e_{m-i}(α) / e_m(α)."""
    m = w.m
    if len(lpolys) < m + 1:
        raise MondError(f"need L_0..L_{m}, have {len(lpolys)} polynomials")
    values = evaluation_point(w, m)
    total = sum((lpolys[i].evaluate(values) * elementary(m - i, w.alpha) for i in range(m + 1)),
                Fraction(0))
    mu = (-1) ** m * (total / elementary(m, w.alpha) - 1)
    return MilnorResult(mu, mu.denominator == 1 and mu >= 0)


# --- comparison with the L-polynomials ------------------------------------------------

def pp_crosscheck(kset: KPolynomialSet, lpolys: Sequence[GradedSeries], order: int = 5) -> bool:
    """s_0 Σ L_i t^i == (Σ K_{i+1} t^i)(1 + Σ c_i t^i) through t^order.

    Both sides are homogeneous of degree i + 1 in the t^i slot, so comparing
    graded components is the same as comparing t-coefficients.
    """
    if kset.max_degree < order + 1 or len(lpolys) < order + 1:
        raise MondError(f"pp_crosscheck needs K_1..K_{order + 1} and L_0..L_{order}")
    s0 = GradedSeries.variable(S0, 1)
    for i in range(order + 1):
        left = (s0 * lpolys[i]).with_truncation(None)
        right = GradedSeries.zero(1)
        for j in range(i + 1):
            cj = GradedSeries.const(1, 1) if j == 0 else GradedSeries.variable(c_var(j), 1)
            right = right + truncated_product(kset[i - j + 1], cj, None)
        if left != right:
            return False
    return True


def reconstruct(kset: KPolynomialSet) -> GradedSeries:
    """Σ_d K_d; equals the substituted 1 - exp(master) up to degree D."""
    out = GradedSeries.zero(1, kset.max_degree)
    for p in kset.polys:
        out = out + p.with_truncation(kset.max_degree)
    return out
