"""Interpolation solver for the kernel series S_Ψ, one degree at a time.

At degree d the only unknowns are the degree-d parts of the S_Ψ: every other
contribution to A_Ψ|_d is a product of at least two lower-degree pieces.  The
known part is evaluated at each prototype first and exponentiated in the torus
ring, which keeps the systems small.  :func:`verify_table` takes the other
route (assemble in s-variables, then evaluate) and is used as a cross-check.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .equivariant import euler_ratio, evaluate_at_prototype, relative_chern, ssm_origin, target_chern
from .linalg import SolveResult, rank, solve_affine
from .prototype import PrototypeModel, build_prototype
from .series import GradedSeries, Partition, partitions, s_var, truncated_product
from .singularities import (Catalog, Monosingularity, Multisingularity, SingularityError, catalog,
                            local_algebra, parse_multisingularity, sub_multisingularities, tcodim)
from .structure import SeriesTable, assemble_target, exp_generating


class SolverError(ArithmeticError):
    pass


class Underdetermined(SolverError):
    def __init__(self, degree: int, nullity: int, psi: Multisingularity | None = None):
        self.degree, self.nullity, self.psi = degree, nullity, psi
        where = f" for {psi}" if psi is not None else ""
        super().__init__(f"degree {degree}{where}: system has a {nullity}-dimensional kernel "
                         f"(catalog too small for this degree)")


class Inconsistent(SolverError):
    def __init__(self, degree: int, rows: list, psi: Multisingularity | None = None):
        self.degree, self.rows, self.psi = degree, rows, psi
        where = f" for {psi}" if psi is not None else ""
        super().__init__(f"degree {degree}{where}: inconsistent conditions {rows[:5]}")


@dataclass
class DegreeReport:
    degree: int
    unknowns: int
    rows: int
    rank: int
    nullity: int
    vanishing_rows: int
    vanishing_rank_gain: int
    seconds: float

    def to_json(self, timing: bool = True) -> dict:
        out = dict(self.__dict__)
        if not timing:
            del out["seconds"]
        return out


@dataclass
class SolveReport:
    l: int
    k: int
    psi0: str
    catalog: list
    degrees: list = field(default_factory=list)

    def to_json(self, timing: bool = True) -> dict:
        return {"l": self.l, "k": self.k, "psi0": self.psi0, "catalog": self.catalog,
                "degrees": [d.to_json(timing) for d in self.degrees]}


class _Point:
    """Cached data of one prototype: s-class values and the target Chern class."""

    def __init__(self, proto: PrototypeModel, l: int, k: int):
        self.proto = proto
        self.l = l
        self.k = k
        rc = relative_chern(proto, k, l)
        self.parts = {i: rc.component(i) for i in range(1, k + 1)}
        self.eu = euler_ratio(proto, l).truncate(k)
        self.ctn = target_chern(proto, k, l)
        self._cache: dict[Partition, GradedSeries] = {}

    def s_value(self, lam: Partition) -> GradedSeries:
        if lam not in self._cache:
            val = self.eu
            for part in lam:
                val = truncated_product(val, self.parts[part], self.k)
            self._cache[lam] = val
        return self._cache[lam]

    def evaluate(self, p: GradedSeries) -> GradedSeries:
        """Value of an s-linear series; linear, so no substitution machinery is needed."""
        terms: dict = {}
        for mono, coeff in p.terms.items():
            ((var, _),) = mono
            for m, c in self.s_value(var[2]).terms.items():
                terms[m] = terms.get(m, 0) + coeff * c
        return GradedSeries(self.l, terms, self.k)


def _normalize(psi0: Multisingularity | str) -> Multisingularity:
    if isinstance(psi0, str):
        psi0 = parse_multisingularity(psi0)
    if psi0.distinguished is not None:
        raise SingularityError("the solver works with target multisingularities")
    if any(name != "A0" for name, _ in psi0.entries):
        raise SingularityError("only Ψ0 = ∅ or A0^j towers are supported by the solver")
    return psi0


def solve(psi0: Multisingularity | str, l: int, k: int, cat: Catalog | None = None
          ) -> tuple[SeriesTable, SolveReport]:
    """Solve S_Ψ for all Ψ ⊆ psi0 through degree k."""
    psi0 = _normalize(psi0)
    cat = catalog(l, k) if cat is None else cat
    subs = sub_multisingularities(psi0)
    points = {e.name: _Point(build_prototype(e.mono.algebra, l), l, k) for e in cat}
    if "A0" not in points:
        raise SolverError("catalog must contain A0")
    tc = {e.name: e.tcodim for e in cat}
    origin = ssm_origin(l, points["A0"].proto.target, k)
    solved = {sub: GradedSeries.zero(l, k) for sub in subs}
    report = SolveReport(l, k, psi0.render(), cat.names())

    for d in range(l, k + 1):
        start = time.perf_counter()
        lams = partitions(d - l)
        active = [n for n in cat.names() if tc[n] <= d]
        # known parts of A_Ψ at every active prototype
        known = {}
        for name in active:
            pt = points[name]
            values = {sub: pt.evaluate(solved[sub]) for sub in subs}
            known[name] = exp_generating(values, psi0, d)
        n_rows = n_unknowns = n_vanish = gain = 0
        total_rank = total_null = 0
        for sub in subs:
            unknowns = [(sub, lam) for lam in lams]
            rows, consts = [], []
            for name in active:
                if sub == Multisingularity.of(name):
                    continue
                pt = points[name]
                const = truncated_product(known[name][sub], pt.ctn, d).component(d)
                _add_rows(rows, consts, unknowns, pt, const, d)
            if sub == Multisingularity.of("A0"):
                pt = points["A0"]
                const = (known["A0"][sub] - origin.truncate(d)).component(d)
                _add_rows(rows, consts, unknowns, pt, const, d)
            base_rank = rank(rows)
            vanish = []
            if not sub.is_empty and d < tcodim(sub, l):
                vanish = [{u: Fraction(1)} for u in unknowns]
            all_rows = rows + vanish
            result: SolveResult = solve_affine(all_rows, unknowns, consts + [Fraction(0)] * len(vanish))
            if result.inconsistent_rows:
                raise Inconsistent(d, result.inconsistent_rows, sub)
            if result.nullity:
                raise Underdetermined(d, result.nullity, sub)
            n_rows += len(all_rows)
            n_unknowns += len(unknowns)
            n_vanish += len(vanish)
            gain += result.rank - base_rank
            total_rank += result.rank
            total_null += result.nullity
            terms = {((s_var(lam), 1),): v for (_, lam), v in result.solution.items() if v}
            solved[sub] = solved[sub] + GradedSeries(l, terms, k)
        report.degrees.append(DegreeReport(d, n_unknowns, n_rows, total_rank, total_null,
                                           n_vanish, gain, time.perf_counter() - start))
    table = SeriesTable(l, k, "S", {}, "solved",
                        f"interpolation over {', '.join(cat.names())}")
    for sub in subs:
        table[sub] = solved[sub]
    return table, report


def _add_rows(rows: list, consts: list, unknowns: list, pt: _Point, const: GradedSeries,
              d: int) -> None:
    """One row per torus monomial of Σ x_λ s_λ(p) + const = 0 in degree d."""
    per_monomial: dict = {}
    for u in unknowns:
        for m, c in pt.s_value(u[1]).component(d).terms.items():
            per_monomial.setdefault(m, {})[u] = c
    monos = set(per_monomial) | set(const.terms)
    for m in sorted(monos):
        rows.append(per_monomial.get(m, {}))
        consts.append(const.terms.get(m, Fraction(0)))


# --- verification (s-variables first, then evaluation) -----------------------

def condition2_residual(table: SeriesTable, psi: Multisingularity | str,
                        zeta: Monosingularity | PrototypeModel | str, k: int) -> GradedSeries:
    """(A_Ψ(p_ζ) · c(TN_ζ)) truncated at k; should vanish from tcodim(ζ) on."""
    if isinstance(psi, str):
        psi = parse_multisingularity(psi)
    if isinstance(zeta, PrototypeModel):
        proto = zeta
    else:
        algebra = local_algebra(zeta) if isinstance(zeta, str) else zeta.algebra
        proto = build_prototype(algebra, table.l)
    if psi.underlying() == Multisingularity.of(proto.name):
        raise SingularityError(f"the interpolation condition excludes Ψ = {{{proto.name}}}")
    a = assemble_target(table, psi, k).entries[psi.underlying()]
    value = evaluate_at_prototype(a, proto, k)
    return truncated_product(value, target_chern(proto, k, table.l), k)


def condition1_residual_A0(table: SeriesTable, k: int) -> GradedSeries:
    """A_{A0}(p_{A0}) minus the ssm class of the origin of the A0 target."""
    l = table.l
    proto = build_prototype("A0", l)
    a = assemble_target(table, Multisingularity.of("A0"), k).entries[Multisingularity.of("A0")]
    return evaluate_at_prototype(a, proto, k) - ssm_origin(l, proto.target, k)


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


def verify_table(table: SeriesTable, k: int | None = None, cat: Catalog | None = None
                 ) -> list[Check]:
    """Check interpolation, vanishing and normalisation conditions of an S-table."""
    l = table.l
    k = table.truncation if k is None else k
    cat = catalog(l, k) if cat is None else cat
    checks: list[Check] = []
    for psi, p in table.items():
        if not psi.is_empty:
            low = tcodim(psi, l)
            bad = [r for r in range(l, min(low, k + 1)) if p.component(r)]
            checks.append(Check(f"vanishing {psi}", not bad,
                                f"nonzero below tcodim {low} in degrees {bad}" if bad else ""))
        for entry in cat:
            if psi == Multisingularity.of(entry.name):
                continue
            proto = build_prototype(entry.mono.algebra, l)
            res = condition2_residual(table, psi, proto, k)
            bad = [r for r in range(entry.tcodim, k + 1) if res.component(r)]
            checks.append(Check(f"interpolation {psi} at {entry.name}", not bad,
                                f"residual in degrees {bad}" if bad else ""))
    a0 = Multisingularity.of("A0")
    if a0 in table:
        res = condition1_residual_A0(table, k)
        checks.append(Check("normalisation A0", not res, "" if not res else "nonzero residual"))
    return checks
