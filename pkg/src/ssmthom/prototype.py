"""Torus-weighted prototypes of quasihomogeneous genotypes.

The stable unfolding of a genotype ``g`` is ``(x, u) -> (g(x) + sum u_i v_i, u)``
where the ``v_i`` span a complement ``V`` of ``t_g(theta) + g^*(m) theta_g``
inside ``m theta_g``.  Everything is graded, so the complement is found one
weighted degree at a time with exact linear algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import sympy

from .linalg import EchelonBasis
from .singularities import LocalAlgebra, Monosingularity, local_algebra, monosingularity

Vector = tuple  # integer character vector


class PrototypeError(ArithmeticError):
    pass


class NonFinite(PrototypeError):
    pass


class ZeroSourceWeight(PrototypeError):
    pass


@dataclass(frozen=True)
class PrototypeModel:
    name: str
    l: int
    rank: int
    source: tuple  # sorted character vectors
    target: tuple
    unfolding: tuple
    generator_weights: tuple
    component_weights: tuple
    complement: tuple = ()  # ((exponents, component), ...)
    local_dim: int | None = None

    @property
    def scodim(self) -> int:
        return len(self.source)

    @property
    def tcodim(self) -> int:
        return len(self.target)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.scodim, self.tcodim)

    def to_json(self) -> dict:
        return {
            "name": self.name, "l": self.l, "rank": self.rank,
            "dims": list(self.dims),
            "source_weights": [list(w) for w in self.source],
            "target_weights": [list(w) for w in self.target],
            "unfolding_weights": [list(w) for w in self.unfolding],
            "local_algebra_dim": self.local_dim,
        }

    def describe(self) -> str:
        return "\n".join([
            f"{self.name} (l={self.l}): scodim {self.scodim}, tcodim {self.tcodim}",
            "source: " + ", ".join(render_character(w) for w in self.source),
            "target: " + ", ".join(render_character(w) for w in self.target),
        ])


_LETTERS = "abcdefghijklmnopqrstuvwyz"


def render_character(w: Sequence[int]) -> str:
    out = ""
    for j, c in enumerate(w):
        if not c:
            continue
        letter = _LETTERS[j]
        sign = "-" if c < 0 else ("+" if out else "")
        mag = "" if abs(c) == 1 else str(abs(c))
        out += f"{sign}{mag}{letter}"
    return out or "0"


def _vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _char(exps: Sequence[int], gen_weights: Sequence[Vector], rank: int) -> Vector:
    out = (0,) * rank
    for e, w in zip(exps, gen_weights):
        if e:
            out = _vec_add(out, tuple(e * x for x in w))
    return out


def grading_torus(genotype: list[list], a: int) -> tuple[list[Vector], list[Vector | None], list[int]]:
    """Generator characters, component characters and a positive integer grading.

    Generator characters come from a primitive integer basis of the solutions
    of the homogeneity constraints; zero components get fresh characters
    afterwards.
    """
    constraints = []
    for comp in genotype:
        if len(comp) > 1:
            first = comp[0][1]
            for _, exps in comp[1:]:
                constraints.append([e - f for e, f in zip(exps, first)])
    if constraints:
        basis = sympy.Matrix(constraints).nullspace()
    else:
        basis = [sympy.eye(a)[:, i] for i in range(a)]
    cols = []
    for vec in basis:
        den = math.lcm(*[int(sympy.fraction(x)[1]) for x in vec])
        ints = [int(x * den) for x in vec]
        g = math.gcd(*ints)
        ints = [x // g for x in ints]
        if sum(ints) < 0:
            ints = [-x for x in ints]
        cols.append(ints)
    r = len(cols)
    gen = [tuple(cols[j][i] for j in range(r)) for i in range(a)]
    grading = [sum(w) for w in gen]
    if any(g <= 0 for g in grading):
        raise PrototypeError("genotype admits no positive quasihomogeneous grading from its torus basis")
    comps: list[Vector | None] = []
    for comp in genotype:
        comps.append(_char(comp[0][1], gen, r) if comp else None)
    return gen, comps, grading


def _monomials_of_degree(weights: Sequence[int], degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors with weighted degree exactly ``degree``."""
    if degree < 0:
        return []
    out = []

    def rec(i, left, acc):
        if i == len(weights) - 1:
            if left % weights[i] == 0:
                out.append(tuple(acc + [left // weights[i]]))
            return
        for e in range(left // weights[i] + 1):
            rec(i + 1, left - e * weights[i], acc + [e])

    rec(0, degree, [])
    return out


def _poly_mul_mono(poly: list, exps: tuple) -> list:
    return [(c, tuple(x + y for x, y in zip(e, exps))) for c, e in poly]


def _poly_diff(poly: list, k: int) -> list:
    out = []
    for c, e in poly:
        if e[k]:
            new = list(e)
            new[k] -= 1
            out.append((c * e[k], tuple(new)))
    return out


def _graded_lex_key(item):
    exps, j = item
    return (sum(exps), tuple(-e for e in exps), j)


def build_prototype(algebra: LocalAlgebra | str, l: int, jet_bound: int | None = None
                    ) -> PrototypeModel:
    if isinstance(algebra, str):
        algebra = local_algebra(algebra)
    return _build(algebra, l, jet_bound)


@lru_cache(maxsize=None)
def _build(algebra: LocalAlgebra, l: int, jet_bound: int | None) -> PrototypeModel:
    if algebra.name == "A0":
        # the point germ: no source directions, l free target directions
        chars = tuple(tuple(int(i == j) for i in range(l)) for j in range(l))
        return PrototypeModel("A0", l, l, (), chars, (), (), chars, (), 1)
    a = algebra.generators
    genotype = algebra.genotype(l)
    width = len(genotype)
    gen_chars, comp_chars, grading = grading_torus(genotype, a)
    base_rank = len(gen_chars[0]) if gen_chars else 0
    fresh = sum(1 for c in comp_chars if c is None)
    rank = base_rank + fresh
    gen_chars = [w + (0,) * fresh for w in gen_chars]
    chars: list[Vector] = []
    next_fresh = base_rank
    for c in comp_chars:
        if c is None:
            v = [0] * rank
            v[next_fresh] = 1
            next_fresh += 1
            chars.append(tuple(v))
        else:
            chars.append(c + (0,) * fresh)

    # integer degrees of components (0 for zero components)
    comp_deg = []
    for comp in genotype:
        if comp:
            e = comp[0][1]
            comp_deg.append(sum(x * w for x, w in zip(e, grading)))
        else:
            comp_deg.append(0)

    max_w, min_d = max(grading), min(comp_deg)
    max_d = max(comp_deg)
    dim_q = _local_dimension(genotype, grading, jet_bound)
    bound = jet_bound if jet_bound is not None else 2 * dim_q * max_w + max_d + max_w
    complement: list[tuple[tuple, int]] = []
    saturated = 0
    start = 1 - max_d
    D = start
    while True:
        if D > bound:
            raise NonFinite(f"{algebra.name}: tangent space did not stabilise by jet degree {bound}")
        # ambient monomial fields x^I e_j, |I| >= 1, with wt(I) - d_j = D
        ambient = []
        for j in range(width):
            for exps in _monomials_of_degree(grading, D + comp_deg[j]):
                if sum(exps) >= 1:
                    ambient.append((exps, j))
        ambient.sort(key=_graded_lex_key)
        order = {m: i for i, m in enumerate(ambient)}
        basis = EchelonBasis(order)
        # t_g(x^I d/dx_k): degree wt(I) - w_k
        for k in range(a):
            partials = [_poly_diff(comp, k) for comp in genotype]
            for exps in _monomials_of_degree(grading, D + grading[k]):
                row = {}
                for j, poly in enumerate(partials):
                    for c, e in _poly_mul_mono(poly, exps):
                        key = (e, j)
                        row[key] = row.get(key, 0) + Fraction(c)
                basis.add({kk: v for kk, v in row.items() if v})
        # g_i x^I e_j: degree d_i + wt(I) - d_j
        for i, gi in enumerate(genotype):
            if not gi:
                continue
            for j in range(width):
                for exps in _monomials_of_degree(grading, D + comp_deg[j] - comp_deg[i]):
                    row = {}
                    for c, e in _poly_mul_mono(gi, exps):
                        key = (e, j)
                        row[key] = row.get(key, 0) + Fraction(c)
                    basis.add({kk: v for kk, v in row.items() if v})
        new = []
        for mono in ambient:
            if basis.add({mono: Fraction(1)}):
                new.append(mono)
        complement.extend(new)
        # certified stop: O-module span, a full window of saturated degrees
        if D > max_w - min_d:
            saturated = saturated + 1 if not new else 0
            if saturated >= max_w:
                break
        D += 1

    unfolding = []
    for exps, j in complement:
        w = _vec_sub(chars[j], _char(exps, gen_chars, rank))
        unfolding.append(w)
    zero = (0,) * rank
    if any(w == zero for w in unfolding) or any(w == zero for w in gen_chars):
        raise ZeroSourceWeight(f"{algebra.name}: a source weight vanishes")
    source = tuple(sorted(list(gen_chars) + unfolding))
    target = tuple(sorted(list(chars) + unfolding))
    return PrototypeModel(algebra.name, l, rank, source, target, tuple(sorted(unfolding)),
                          tuple(gen_chars), tuple(chars), tuple(complement), dim_q)


def _local_dimension(genotype: list[list], grading: Sequence[int], jet_bound: int | None) -> int:
    """dim of C[x]/(g), counted degree by degree with the same saturation test."""
    nonzero = [comp for comp in genotype if comp]
    comp_deg = [sum(x * w for x, w in zip(comp[0][1], grading)) for comp in nonzero]
    max_w = max(grading)
    bound = jet_bound if jet_bound is not None else 64 * max_w * max(comp_deg, default=1)
    dim = 0
    saturated = 0
    D = 0
    while True:
        if D > bound:
            raise NonFinite("local algebra is not finite within the jet bound")
        monos = sorted(_monomials_of_degree(grading, D), key=lambda e: tuple(-x for x in e))
        order = {m: i for i, m in enumerate(monos)}
        basis = EchelonBasis(order)
        for gi, di in zip(nonzero, comp_deg):
            for exps in _monomials_of_degree(grading, D - di):
                row = {}
                for c, e in _poly_mul_mono(gi, exps):
                    row[e] = row.get(e, 0) + Fraction(c)
                basis.add({kk: v for kk, v in row.items() if v})
        missing = len(monos) - len(basis)
        dim += missing
        saturated = saturated + 1 if missing == 0 else 0
        if saturated >= max_w and D > 0:
            return dim
        D += 1


def closed_form_check(mono: Monosingularity) -> tuple[bool, str]:
    proto = build_prototype(mono.algebra, mono.l)
    expected = mono.algebra.closed_form_scodim(mono.l)
    ok = proto.scodim == expected and proto.tcodim == expected + mono.l
    msg = f"{mono.name} l={mono.l}: built dims {proto.dims}, closed form ({expected}, {expected + mono.l})"
    return ok, msg


def prototype_for(name: str, l: int) -> PrototypeModel:
    return build_prototype(monosingularity(name, l).algebra, l)


def custom_algebra(name: str, generators: int, relations: Sequence[Sequence[tuple[int, Sequence[int]]]]
                   ) -> LocalAlgebra:
    """A local algebra from explicit relations (used for catalog exploration)."""
    rels = tuple(tuple((int(c), tuple(e)) for c, e in r) for r in relations)
    return LocalAlgebra(name, generators, rels)
