"""Truncated graded power series over the rationals.

Variables come in four kinds:

* ``c_i``  Chern-type variables, cohomological degree ``i``;
* ``s_λ``  Landweber-Novikov variables indexed by partitions, degree ``l + |λ|``;
* ``t_η``  bookkeeping variables indexed by monosingularity names, degree 0;
* ``x_j``  torus characters, degree 1.

A series stores a mapping from canonical monomials to :class:`fractions.Fraction`
coefficients.  Nothing above the truncation degree is ever stored and zero
coefficients are dropped eagerly, so two equal series compare equal as dicts.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping

C, S, T, X = 0, 1, 2, 3
KIND_NAMES = {C: "c", S: "s", T: "t", X: "x"}
KIND_CODES = {v: k for k, v in KIND_NAMES.items()}

# torus characters render as a, b, c, ... (no clash: torus series never hold c_i)
_CHAR_LETTERS = "abcdefghijklmnopqrstuvwyz"


class SeriesError(ValueError):
    pass


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(sorted((int(p) for p in parts), reverse=True))
        if any(p <= 0 for p in parts):
            raise SeriesError(f"partition parts must be positive: {parts}")
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def multiplicities(self) -> dict[int, int]:
        """Multiplicity form {i: a_i}, e.g. (4,3,3,1) -> {1: 1, 3: 2, 4: 1}."""
        out: dict[int, int] = {}
        for p in self:
            out[p] = out.get(p, 0) + 1
        return dict(sorted(out.items()))

    def render(self, compress: bool = False) -> str:
        if not self:
            return "0"
        if compress:
            chunks = []
            for part, mult in sorted(self.multiplicities().items(), reverse=True):
                chunks.append(str(part) if mult == 1 else f"{part}^{mult}")
            sep = "," if max(self) >= 10 else ""
            return sep.join(chunks)
        if max(self) >= 10:
            return ",".join(str(p) for p in self)
        return "".join(str(p) for p in self)

    def __repr__(self) -> str:
        return f"Partition({list(self)})"


def partitions(n: int, max_part: int | None = None) -> list[Partition]:
    """All partitions of ``n`` in reverse-lexicographic order."""
    return [Partition(p) for p in _partitions(n, n if max_part is None else max_part)]


@lru_cache(maxsize=None)
def _partitions(n: int, max_part: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


# --- variables and monomials ------------------------------------------------
# A variable is (kind, weight, payload); tuple order gives the canonical
# order C < S < T < X, then graded-lex inside a kind.

def c_var(i: int) -> tuple:
    if i <= 0:
        raise SeriesError(f"c-variable index must be positive, got {i}")
    return (C, i, i)


def s_var(parts: Iterable[int] = ()) -> tuple:
    lam = Partition(parts)
    return (S, lam.weight, lam)


def t_var(name: str) -> tuple:
    return (T, 0, str(name))


def x_var(j: int) -> tuple:
    if j < 0:
        raise SeriesError(f"character index must be non-negative, got {j}")
    return (X, j, j)


Monomial = tuple  # tuple of (var, exponent) sorted by var
ONE: Monomial = ()


def var_degree(var: tuple, l: int) -> int:
    kind = var[0]
    if kind == C:
        return var[1]
    if kind == S:
        return l + var[1]
    if kind == T:
        return 0
    return 1


@lru_cache(maxsize=1 << 18)
def mono_degree(mono: Monomial, l: int) -> int:
    return sum(var_degree(v, l) * e for v, e in mono)


def mono_s_degree(mono: Monomial) -> int:
    return sum(e for v, e in mono if v[0] == S)


@lru_cache(maxsize=1 << 20)
def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for v, e in b:
        merged[v] = merged.get(v, 0) + e
    return tuple(sorted(merged.items()))


def mono_from(pairs: Iterable[tuple[tuple, int]]) -> Monomial:
    merged: dict[tuple, int] = {}
    for v, e in pairs:
        if e < 0:
            raise SeriesError("negative exponent")
        if e:
            merged[v] = merged.get(v, 0) + e
    return tuple(sorted(merged.items()))


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise SeriesError(f"coefficients must be exact, got {type(value).__name__}")


class GradedSeries:
    """Immutable truncated series.  ``truncation=None`` means an exact polynomial."""

    __slots__ = ("l", "truncation", "terms", "_by_degree")

    def __init__(self, l: int, terms: Mapping[Monomial, Fraction] | None = None,
                 truncation: int | None = None, *, _trusted: bool = False):
        if l < 0:
            raise SeriesError("relative dimension must be non-negative")
        self.l = l
        self.truncation = truncation
        if _trusted:
            self.terms = terms
        else:
            clean: dict[Monomial, Fraction] = {}
            for mono, coeff in (terms or {}).items():
                coeff = _as_fraction(coeff)
                if coeff == 0:
                    continue
                if truncation is not None and mono_degree(mono, l) > truncation:
                    continue
                clean[mono] = coeff
            self.terms = clean
        self._by_degree = None

    # construction helpers
    @classmethod
    def const(cls, l: int, value=1, truncation: int | None = None) -> "GradedSeries":
        return cls(l, {ONE: _as_fraction(value)}, truncation)

    @classmethod
    def zero(cls, l: int, truncation: int | None = None) -> "GradedSeries":
        return cls(l, {}, truncation, _trusted=True)

    @classmethod
    def variable(cls, var: tuple, l: int, truncation: int | None = None,
                 coeff=1) -> "GradedSeries":
        return cls(l, {((var, 1),): _as_fraction(coeff)}, truncation)

    # basic protocol
    def __eq__(self, other) -> bool:
        if isinstance(other, GradedSeries):
            return self.l == other.l and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({ONE: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash((self.l, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(sorted(self.terms.items()))

    def __repr__(self) -> str:
        return f"GradedSeries(l={self.l}, k={self.truncation}, {render(self)})"

    def __str__(self) -> str:
        return render(self)

    def coeff(self, mono: Monomial) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get(ONE, Fraction(0))

    def degree_of(self, mono: Monomial) -> int:
        return mono_degree(mono, self.l)

    def by_degree(self) -> dict[int, dict[Monomial, Fraction]]:
        if self._by_degree is None:
            groups: dict[int, dict[Monomial, Fraction]] = defaultdict(dict)
            for mono, coeff in self.terms.items():
                groups[mono_degree(mono, self.l)][mono] = coeff
            self._by_degree = dict(groups)
        return self._by_degree

    def degrees(self) -> list[int]:
        return sorted(self.by_degree())

    def min_degree(self) -> int | None:
        degs = self.degrees()
        return degs[0] if degs else None

    def max_degree(self) -> int | None:
        degs = self.degrees()
        return degs[-1] if degs else None

    def variables(self) -> set[tuple]:
        return {v for mono in self.terms for v, _ in mono}

    def kinds(self) -> set[int]:
        return {v[0] for v in self.variables()}

    def s_degrees(self) -> set[int]:
        return {mono_s_degree(m) for m in self.terms}

    def is_s_linear(self) -> bool:
        return all(mono_s_degree(m) == 1 for m in self.terms)

    def is_homogeneous(self) -> bool:
        return len(self.by_degree()) <= 1

    # truncation and projection
    def truncate(self, k: int | None) -> "GradedSeries":
        if k is None:
            return self
        new_k = k if self.truncation is None else min(k, self.truncation)
        if self.max_degree() is not None and self.max_degree() <= new_k:
            return GradedSeries(self.l, self.terms, new_k, _trusted=True)
        terms = {m: c for m, c in self.terms.items() if mono_degree(m, self.l) <= new_k}
        return GradedSeries(self.l, terms, new_k, _trusted=True)

    def with_truncation(self, k: int | None) -> "GradedSeries":
        """Relabel the truncation bound (terms above ``k`` are dropped)."""
        if k is None:
            return GradedSeries(self.l, self.terms, None, _trusted=True)
        terms = {m: c for m, c in self.terms.items() if mono_degree(m, self.l) <= k}
        return GradedSeries(self.l, terms, k, _trusted=True)

    def component(self, r: int) -> "GradedSeries":
        return GradedSeries(self.l, dict(self.by_degree().get(r, {})), self.truncation,
                            _trusted=True)

    def upto(self, r: int) -> "GradedSeries":
        terms = {m: c for m, c in self.terms.items() if mono_degree(m, self.l) <= r}
        return GradedSeries(self.l, terms, self.truncation, _trusted=True)

    def below(self, r: int) -> "GradedSeries":
        return self.upto(r - 1)

    def filter(self, keep: Callable[[Monomial], bool]) -> "GradedSeries":
        terms = {m: c for m, c in self.terms.items() if keep(m)}
        return GradedSeries(self.l, terms, self.truncation, _trusted=True)

    # arithmetic
    def _check(self, other: "GradedSeries") -> None:
        if self.l != other.l:
            raise SeriesError(f"mismatched relative dimension: {self.l} vs {other.l}")

    def _coerce(self, other) -> "GradedSeries":
        if isinstance(other, GradedSeries):
            self._check(other)
            return other
        return GradedSeries.const(self.l, _as_fraction(other))

    def __add__(self, other) -> "GradedSeries":
        other = self._coerce(other)
        k = _min_trunc(self.truncation, other.truncation)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m, 0) + c
            if v:
                terms[m] = v
            else:
                terms.pop(m, None)
        return GradedSeries(self.l, terms, k) if k is not None else \
            GradedSeries(self.l, terms, None, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "GradedSeries":
        return GradedSeries(self.l, {m: -c for m, c in self.terms.items()},
                            self.truncation, _trusted=True)

    def __sub__(self, other) -> "GradedSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "GradedSeries":
        return (-self) + other

    def scale(self, factor) -> "GradedSeries":
        factor = _as_fraction(factor)
        if factor == 0:
            return GradedSeries.zero(self.l, self.truncation)
        return GradedSeries(self.l, {m: c * factor for m, c in self.terms.items()},
                            self.truncation, _trusted=True)

    def __mul__(self, other) -> "GradedSeries":
        if isinstance(other, GradedSeries):
            return truncated_product(self, other, _min_trunc(self.truncation, other.truncation))
        return self.scale(other)

    def __rmul__(self, other) -> "GradedSeries":
        return self.scale(other)

    def __truediv__(self, other) -> "GradedSeries":
        if isinstance(other, GradedSeries):
            raise SeriesError("use inverse() for series division")
        return self.scale(1 / _as_fraction(other))

    def __pow__(self, n: int) -> "GradedSeries":
        if n < 0:
            raise SeriesError("negative powers: use inverse()")
        result = GradedSeries.const(self.l, 1, self.truncation)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self, k: int | None = None) -> "GradedSeries":
        """Multiplicative inverse; requires constant term 1 and degree-0 part constant."""
        k = _min_trunc(k, self.truncation)
        if k is None:
            raise SeriesError("inverse of an untruncated series needs an explicit k")
        if self.constant_term != 1 or any(
                m != ONE for m in self.by_degree().get(0, {})):
            raise SeriesError("inverse requires constant term 1 and no other degree-0 terms")
        parts = self.by_degree()
        inv: dict[int, dict[Monomial, Fraction]] = {0: {ONE: Fraction(1)}}
        for n in range(1, k + 1):
            acc: dict[Monomial, Fraction] = defaultdict(Fraction)
            for j in range(1, n + 1):
                pj = parts.get(j)
                rest = inv.get(n - j)
                if not pj or not rest:
                    continue
                _accumulate(acc, pj, rest, -1)
            inv[n] = {m: c for m, c in acc.items() if c}
        terms = {m: c for comp in inv.values() for m, c in comp.items()}
        return GradedSeries(self.l, terms, k, _trusted=True)

    def map_coefficients(self, fn: Callable[[Fraction], Fraction]) -> "GradedSeries":
        return GradedSeries(self.l, {m: fn(c) for m, c in self.terms.items()}, self.truncation)

    # evaluation
    def evaluate(self, values: Mapping[tuple, Fraction]) -> Fraction:
        """Evaluate at rational values for every variable occurring."""
        total = Fraction(0)
        for mono, coeff in self.terms.items():
            term = coeff
            for v, e in mono:
                if v not in values:
                    raise SeriesError(f"no value for variable {render_var(v)}")
                term *= _as_fraction(values[v]) ** e
            total += term
        return total


def _min_trunc(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _accumulate(acc, left: Mapping, right: Mapping, sign=1, keep=None) -> None:
    for ma, ca in left.items():
        for mb, cb in right.items():
            m = mono_mul(ma, mb)
            if keep is not None and not keep(m):
                continue
            acc[m] += sign * ca * cb


def truncated_product(a: GradedSeries, b: GradedSeries, k: int | None,
                      keep: Callable[[Monomial], bool] | None = None) -> GradedSeries:
    """Product of ``a`` and ``b`` keeping only terms of degree <= k.

    ``keep`` optionally filters monomials (used to bound t-variables).
    """
    if a.l != b.l:
        raise SeriesError(f"mismatched relative dimension: {a.l} vs {b.l}")
    acc: dict[Monomial, Fraction] = defaultdict(Fraction)
    pa, pb = a.by_degree(), b.by_degree()
    for da, ta in pa.items():
        for db, tb in pb.items():
            if k is not None and da + db > k:
                continue
            _accumulate(acc, ta, tb, 1, keep)
    return GradedSeries(a.l, {m: c for m, c in acc.items() if c}, k, _trusted=True)


def _graded_parts(p: GradedSeries, k: int) -> dict[int, dict[Monomial, Fraction]]:
    return {d: t for d, t in p.by_degree().items() if d <= k}


def series_exp(p: GradedSeries, k: int | None = None,
               keep: Callable[[Monomial], bool] | None = None) -> GradedSeries:
    """exp(p) truncated at degree k.

    Uses ``n E_n = sum_j j P_j E_{n-j}`` when ``p`` has no degree-0 terms;
    otherwise falls back to the power sum, which must terminate through ``keep``.
    """
    if p.constant_term != 0:
        raise SeriesError("series_exp requires zero constant term")
    k = _min_trunc(k, p.truncation)
    if k is None:
        raise SeriesError("series_exp needs a truncation degree")
    parts = _graded_parts(p, k)
    if 0 in parts:
        return _exp_by_powers(p.truncate(k), k, keep)
    exp_parts: dict[int, dict[Monomial, Fraction]] = {0: {ONE: Fraction(1)}}
    for n in range(1, k + 1):
        acc: dict[Monomial, Fraction] = defaultdict(Fraction)
        for j in range(1, n + 1):
            pj = parts.get(j)
            rest = exp_parts.get(n - j)
            if not pj or not rest:
                continue
            scaled = {m: c * j for m, c in pj.items()}
            _accumulate(acc, scaled, rest, 1, keep)
        exp_parts[n] = {m: c / n for m, c in acc.items() if c}
    terms = {m: c for comp in exp_parts.values() for m, c in comp.items()}
    return GradedSeries(p.l, terms, k, _trusted=True)


def _exp_by_powers(p: GradedSeries, k: int, keep, max_terms: int = 10_000) -> GradedSeries:
    result = GradedSeries.const(p.l, 1, k)
    power = GradedSeries.const(p.l, 1, k)
    for n in range(1, max_terms):
        power = truncated_product(power, p, k, keep).scale(Fraction(1, n))
        if not power:
            return result
        result = result + power
    raise SeriesError("series_exp did not terminate: degree-0 terms need a nilpotency bound")


def series_log(p: GradedSeries, k: int | None = None) -> GradedSeries:
    """log(p) for p with constant term 1, truncated at degree k."""
    if p.constant_term != 1:
        raise SeriesError("series_log requires constant term 1")
    k = _min_trunc(k, p.truncation)
    if k is None:
        raise SeriesError("series_log needs a truncation degree")
    parts = _graded_parts(p, k)
    if any(m != ONE for m in parts.get(0, {})):
        raise SeriesError("series_log: degree-0 terms other than the constant are unsupported")
    log_parts: dict[int, dict[Monomial, Fraction]] = {}
    for n in range(1, k + 1):
        acc: dict[Monomial, Fraction] = defaultdict(Fraction)
        for m, c in parts.get(n, {}).items():
            acc[m] += c
        for j in range(1, n):
            lj = log_parts.get(j)
            rest = parts.get(n - j)
            if not lj or not rest:
                continue
            scaled = {m: -c * Fraction(j, n) for m, c in lj.items()}
            _accumulate(acc, scaled, rest)
        log_parts[n] = {m: c for m, c in acc.items() if c}
    terms = {m: c for comp in log_parts.values() for m, c in comp.items()}
    return GradedSeries(p.l, terms, k, _trusted=True)


def graded_component(p: GradedSeries, r: int) -> GradedSeries:
    return p.component(r)


def graded_upto(p: GradedSeries, r: int) -> GradedSeries:
    return p.upto(r)


def substitute(p: GradedSeries, images: Mapping[tuple, GradedSeries], k: int | None,
               *, l: int | None = None, check_degrees: bool = True,
               passthrough: Iterable[int] = ()) -> GradedSeries:
    """Ring-homomorphic substitution of variables by series, truncated at k.

    Variables whose kind is in ``passthrough`` map to themselves.  Every other
    variable needs an image; with ``check_degrees`` each image must be
    homogeneous of the variable's cohomological degree.
    """
    target_l = p.l if l is None else l
    passthrough = set(passthrough)
    needed = p.variables()
    for v in needed:
        if v[0] in passthrough:
            continue
        if v not in images:
            raise SeriesError(f"missing image for {render_var(v)}")
        if check_degrees:
            img = images[v]
            want = var_degree(v, p.l)
            degs = img.degrees()
            if degs and degs != [want]:
                raise SeriesError(
                    f"image of {render_var(v)} must be homogeneous of degree {want}, got {degs}")
    power_cache: dict[tuple[tuple, int], GradedSeries] = {}

    def image_power(v: tuple, e: int) -> GradedSeries:
        key = (v, e)
        if key not in power_cache:
            if v[0] in passthrough:
                base = GradedSeries.variable(v, target_l, k)
            else:
                base = images[v]
            if e == 1:
                power_cache[key] = base.truncate(k) if k is not None else base
            else:
                power_cache[key] = truncated_product(image_power(v, e - 1), base, k)
        return power_cache[key]

    acc: dict[Monomial, Fraction] = defaultdict(Fraction)
    for mono, coeff in p.terms.items():
        if k is not None and check_degrees and mono_degree(mono, p.l) > k:
            continue
        term = GradedSeries.const(target_l, coeff, k)
        for v, e in mono:
            term = truncated_product(term, image_power(v, e), k)
            if not term:
                break
        for m, c in term.terms.items():
            acc[m] += c
    return GradedSeries(target_l, {m: c for m, c in acc.items() if c}, k, _trusted=True)


def substitute_s(p: GradedSeries, images: Mapping[Partition, GradedSeries], k: int | None,
                 c_images: Mapping[int, GradedSeries] | None = None) -> GradedSeries:
    """Substitute s_λ (and optionally c_i) by homogeneous series."""
    table: dict[tuple, GradedSeries] = {s_var(lam): img for lam, img in images.items()}
    passthrough = {T, X}
    if c_images is not None:
        table.update({c_var(i): img for i, img in c_images.items()})
    else:
        passthrough.add(C)
    return substitute(p, table, k, passthrough=passthrough)


# --- rendering --------------------------------------------------------------

def render_var(v: tuple, compress: bool = False) -> str:
    kind = v[0]
    if kind == C:
        return f"c_{v[2]}"
    if kind == S:
        lam: Partition = v[2]
        body = lam.render(compress)
        return f"s_{body}" if len(body) == 1 else f"s_{{{body}}}"
    if kind == T:
        return f"t_{v[2]}"
    j = v[2]
    return _CHAR_LETTERS[j] if j < len(_CHAR_LETTERS) else f"x_{j}"


def render_monomial(mono: Monomial, compress: bool = False) -> str:
    out = []
    for v, e in mono:
        name = render_var(v, compress)
        out.append(name if e == 1 else f"{name}^{e}")
    return " ".join(out)


def render(p: GradedSeries, compress: bool = False) -> str:
    if not p.terms:
        return "0"
    pieces = []
    ordered = sorted(p.terms.items(), key=lambda mc: (mono_degree(mc[0], p.l), _render_key(mc[0])))
    for i, (mono, coeff) in enumerate(ordered):
        sign = "-" if coeff < 0 else "+"
        mag = abs(coeff)
        body = render_monomial(mono, compress)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag} {body}"
        if i == 0:
            pieces.append(text if sign == "+" else f"-{text}")
        else:
            pieces.append(f"{sign} {text}")
    return " ".join(pieces)


def _render_key(mono: Monomial):
    # s_5 before s_41 before s_32 ...: reverse-lex inside each kind
    return tuple((v[0], v[1], tuple(-x for x in v[2]) if v[0] == S else v[2], -e)
                 for v, e in mono)


# --- serialization ----------------------------------------------------------

def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(text) -> Fraction:
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise SeriesError(f"rational must be a string, got {text!r}")
    body = text.strip()
    num, _, den = body.partition("/")
    try:
        n = int(num)
        d = int(den) if den else 1
    except ValueError as exc:
        raise SeriesError(f"malformed rational {text!r}") from exc
    if d <= 0:
        raise SeriesError(f"malformed rational {text!r}: denominator must be positive")
    q = Fraction(n, d)
    if den and math.gcd(n, d) != 1:
        raise SeriesError(f"rational {text!r} is not reduced")
    return q


def _var_to_json(v: tuple) -> dict:
    kind = v[0]
    if kind == C:
        return {"kind": "c", "index": v[2]}
    if kind == S:
        return {"kind": "s", "partition": list(v[2])}
    if kind == T:
        return {"kind": "t", "name": v[2]}
    return {"kind": "x", "index": v[2]}


def _var_from_json(obj: Mapping) -> tuple:
    kind = obj.get("kind")
    if kind == "c":
        return c_var(int(obj["index"]))
    if kind == "s":
        parts = obj["partition"]
        if list(parts) != sorted(parts, reverse=True):
            raise SeriesError(f"partition {parts} not weakly decreasing")
        return s_var(parts)
    if kind == "t":
        return t_var(obj["name"])
    if kind == "x":
        return x_var(int(obj["index"]))
    raise SeriesError(f"unknown variable kind {kind!r}")


def series_to_json(p: GradedSeries) -> dict:
    terms = []
    for mono, coeff in sorted(p.terms.items(), key=lambda mc: (mono_degree(mc[0], p.l), mc[0])):
        entries = []
        for v, e in mono:
            item = _var_to_json(v)
            if e != 1:
                item["power"] = e
            entries.append(item)
        terms.append({"monomial": entries, "coeff": format_rational(coeff)})
    return {"l": p.l, "truncation": p.truncation, "terms": terms}


def series_from_json(obj: Mapping) -> GradedSeries:
    try:
        l = obj["l"]
        truncation = obj.get("truncation")
        raw_terms = obj["terms"]
    except (KeyError, TypeError) as exc:
        raise SeriesError(f"series JSON missing field: {exc}") from exc
    if not isinstance(l, int) or l < 0:
        raise SeriesError(f"field 'l' must be a non-negative integer, got {l!r}")
    if truncation is not None and not isinstance(truncation, int):
        raise SeriesError(f"field 'truncation' must be an integer or null, got {truncation!r}")
    terms: dict[Monomial, Fraction] = {}
    for idx, term in enumerate(raw_terms):
        try:
            mono = mono_from((_var_from_json(v), int(v.get("power", 1)))
                             for v in term["monomial"])
            coeff = parse_rational(term["coeff"])
        except (KeyError, TypeError) as exc:
            raise SeriesError(f"terms[{idx}]: missing field {exc}") from exc
        except SeriesError as exc:
            raise SeriesError(f"terms[{idx}]: {exc}") from exc
        if coeff == 0:
            raise SeriesError(f"terms[{idx}]: zero coefficient stored")
        if mono in terms:
            raise SeriesError(f"terms[{idx}]: duplicate monomial")
        if truncation is not None and mono_degree(mono, l) > truncation:
            raise SeriesError(f"terms[{idx}]: degree exceeds truncation {truncation}")
        terms[mono] = coeff
    return GradedSeries(l, terms, truncation, _trusted=True)


def dumps(p: GradedSeries) -> str:
    return json.dumps(series_to_json(p), indent=1, sort_keys=True)


def loads(text: str) -> GradedSeries:
    return series_from_json(json.loads(text))


class Ring:
    """Shorthand for building series with a fixed ``l`` and truncation."""

    def __init__(self, l: int, truncation: int | None = None):
        self.l = l
        self.truncation = truncation

    def one(self) -> GradedSeries:
        return GradedSeries.const(self.l, 1, self.truncation)

    def zero(self) -> GradedSeries:
        return GradedSeries.zero(self.l, self.truncation)

    def const(self, value) -> GradedSeries:
        return GradedSeries.const(self.l, value, self.truncation)

    def c(self, i: int) -> GradedSeries:
        return GradedSeries.variable(c_var(i), self.l, self.truncation)

    def s(self, *parts: int) -> GradedSeries:
        return GradedSeries.variable(s_var(parts), self.l, self.truncation)

    def t(self, name: str) -> GradedSeries:
        return GradedSeries.variable(t_var(name), self.l, self.truncation)

    def x(self, j: int) -> GradedSeries:
        return GradedSeries.variable(x_var(j), self.l, self.truncation)

    def c_mono(self, parts: Iterable[int]) -> GradedSeries:
        out = self.one()
        for p in parts:
            out = out * self.c(p)
        return out
