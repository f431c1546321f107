"""Characteristic classes of prototypes in the torus-character polynomial ring."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Iterable, Sequence

from .prototype import PrototypeModel
from .series import C, S, GradedSeries, Partition, SeriesError, mono_from, substitute, x_var


class NonDivisible(ArithmeticError):
    pass


class ZeroWeight(ValueError):
    pass


def linear_form(w: Sequence[int], l: int, k: int | None = None) -> GradedSeries:
    """The character ``w`` as a degree-1 polynomial in the x-variables."""
    terms = {((x_var(j), 1),): Fraction(c) for j, c in enumerate(w) if c}
    return GradedSeries(l, terms, k)


def _product(forms: Iterable[GradedSeries], l: int, k: int | None) -> GradedSeries:
    out = GradedSeries.const(l, 1, k)
    for f in forms:
        out = out * f
    return out


def _cancel(target: Sequence, source: Sequence) -> tuple[list, list]:
    t, s = Counter(target), Counter(source)
    common = t & s
    return list((t - common).elements()), list((s - common).elements())


def total_chern(weights: Sequence[Sequence[int]], l: int, k: int) -> GradedSeries:
    """prod (1 + w) truncated at k."""
    one = GradedSeries.const(l, 1, k)
    return _product((one + linear_form(w, l, k) for w in weights), l, k)


def inverse_total_chern(weights: Sequence[Sequence[int]], l: int, k: int) -> GradedSeries:
    one = GradedSeries.const(l, 1, k)
    return _product(((one + linear_form(w, l, k)).inverse(k) for w in weights), l, k)


def relative_chern(p: PrototypeModel, k: int, l: int | None = None) -> GradedSeries:
    """c(target) / c(source), with shared weights cancelled before dividing."""
    l = p.l if l is None else l
    num, den = _cancel(p.target, p.source)
    return total_chern(num, l, k) * inverse_total_chern(den, l, k)


def target_chern(p: PrototypeModel, k: int, l: int | None = None) -> GradedSeries:
    return total_chern(p.target, p.l if l is None else l, k)


def divide_exact(num: GradedSeries, w: Sequence[int]) -> GradedSeries:
    """Exact division of a polynomial by the linear form ``w``."""
    lead = max((j for j, c in enumerate(w) if c), default=None)
    if lead is None:
        raise ZeroWeight("division by the zero character")
    lead_var = x_var(lead)
    a = Fraction(w[lead])
    form = linear_form(w, num.l)
    rest = dict(num.terms)
    quot: dict = {}

    def lead_exp(mono):
        return dict(mono).get(lead_var, 0)

    while True:
        candidates = [m for m in rest if lead_exp(m) > 0]
        if not candidates:
            break
        m = max(candidates, key=lambda mm: (lead_exp(mm), mm))
        c = rest[m]
        q_mono = mono_from((v, e - (v == lead_var)) for v, e in m)
        q = c / a
        quot[q_mono] = quot.get(q_mono, 0) + q
        for fm, fc in form.terms.items():
            prod = mono_from(list(q_mono) + list(fm))
            nv = rest.get(prod, 0) - q * fc
            if nv:
                rest[prod] = nv
            else:
                rest.pop(prod, None)
    if rest:
        raise NonDivisible("Euler class of the source does not divide that of the target")
    return GradedSeries(num.l, quot, None)


def euler_ratio(p: PrototypeModel, l: int | None = None) -> GradedSeries:
    """prod(target weights) / prod(source weights) as an exact polynomial."""
    l = p.l if l is None else l
    num, den = _cancel(p.target, p.source)
    zero = (0,) * p.rank
    if any(tuple(w) == zero for w in den):
        raise ZeroWeight(f"{p.name}: zero source weight")
    out = _product((linear_form(w, l) for w in num), l, None)
    for w in den:
        out = divide_exact(out, w)
    return out


def evaluate_at_prototype(series: GradedSeries, p: PrototypeModel, k: int) -> GradedSeries:
    """Substitute c_i -> c_i(f) and s_λ -> eu(f) * prod c_{λ_i}(f)."""
    l = series.l
    if p.tcodim - p.scodim != l:
        raise SeriesError(f"prototype {p.name} has relative dimension {p.tcodim - p.scodim}, series has {l}")
    if any(v[0] not in (C, S) for v in series.variables()):
        raise SeriesError("only c- and s-variables can be evaluated at a prototype")
    rc = relative_chern(p, k, l)
    parts = {i: rc.component(i) for i in range(1, k + 1)}
    eu = euler_ratio(p, l)
    images: dict = {}
    for v in series.variables():
        if v[0] == C:
            images[v] = parts.get(v[2], GradedSeries.zero(l, k))
        else:
            lam: Partition = v[2]
            img = eu.truncate(k)
            for part in lam:
                img = img * parts.get(part, GradedSeries.zero(l, k))
            images[v] = img
    return substitute(series, images, k, check_degrees=False)


def ssm_origin(l: int, weights: Sequence[Sequence[int]], k: int) -> GradedSeries:
    """prod w / prod (1 + w): the ssm class of the origin of a representation."""
    zero_len = len(weights[0]) if weights else 0
    if any(tuple(w) == (0,) * zero_len for w in weights):
        raise ZeroWeight("ssm of the origin needs nonzero weights")
    eu = _product((linear_form(w, l, k) for w in weights), l, k)
    return eu * inverse_total_chern(weights, l, k)

