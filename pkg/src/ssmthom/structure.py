"""Assembly of Thom polynomials from kernel series, and the F / FF pushforwards."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .series import (C, S, T, GradedSeries, Monomial, Partition, SeriesError, c_var, mono_from,
                     s_var, series_exp, series_from_json, series_to_json, t_var, truncated_product)
from .singularities import (EMPTY, Multisingularity, aut_order, parse_multisingularity,
                            sub_multisingularities)

FLAVORS = ("S", "R", "thom-target", "thom-source")


class MissingEntry(KeyError):
    def __str__(self):
        return self.args[0] if self.args else "missing entry"


@dataclass
class SeriesTable:
    l: int
    truncation: int
    flavor: str
    entries: dict = field(default_factory=dict)  # Multisingularity -> GradedSeries
    provenance: str = "solved"
    source: str = ""

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise SeriesError(f"unknown table flavor {self.flavor!r}")
        for m, p in self.entries.items():
            self._check(m, p)

    def _check(self, m: Multisingularity, p: GradedSeries) -> None:
        if p.l != self.l:
            raise SeriesError(f"entry {m}: relative dimension {p.l}, table has {self.l}")
        if self.flavor == "S" and p and not p.is_s_linear():
            raise SeriesError(f"entry {m} is not s-linear")
        if self.flavor == "R" and p.kinds() - {C}:
            raise SeriesError(f"entry {m} contains non-Chern variables")

    def __getitem__(self, m: Multisingularity | str) -> GradedSeries:
        if isinstance(m, str):
            m = parse_multisingularity(m)
        if m not in self.entries:
            raise MissingEntry(f"table has no entry for {m}")
        return self.entries[m]

    def __setitem__(self, m: Multisingularity | str, p: GradedSeries) -> None:
        if isinstance(m, str):
            m = parse_multisingularity(m)
        self._check(m, p)
        self.entries[m] = p

    def __contains__(self, m) -> bool:
        if isinstance(m, str):
            m = parse_multisingularity(m)
        return m in self.entries

    def keys(self) -> list[Multisingularity]:
        return sorted(self.entries, key=Multisingularity.sort_key)

    def items(self):
        return [(m, self.entries[m]) for m in self.keys()]

    def __len__(self) -> int:
        return len(self.entries)

    def series_truncation(self) -> int:
        """Truncation of the stored series (R-tables live l degrees lower)."""
        return self.truncation - self.l if self.flavor == "R" else self.truncation

    def to_json(self) -> dict:
        return {
            "l": self.l, "truncation": self.truncation, "flavor": self.flavor,
            "provenance": self.provenance, "source": self.source,
            "entries": [{"multisingularity": m.render(), "series": series_to_json(p)}
                        for m, p in self.items()],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "SeriesTable":
        try:
            table = cls(obj["l"], obj["truncation"], obj["flavor"], {},
                        obj.get("provenance", "imported"), obj.get("source", ""))
            raw = obj["entries"]
        except (KeyError, TypeError) as exc:
            raise SeriesError(f"table JSON missing field {exc}") from exc
        for idx, item in enumerate(raw):
            try:
                m = parse_multisingularity(item["multisingularity"])
                p = series_from_json(item["series"])
            except (KeyError, TypeError) as exc:
                raise SeriesError(f"entries[{idx}]: missing field {exc}") from exc
            except ValueError as exc:
                raise SeriesError(f"entries[{idx}]: {exc}") from exc
            if m in table.entries:
                raise SeriesError(f"entries[{idx}]: duplicate multisingularity {m}")
            table[m] = p
        return table


# --- target assembly ----------------------------------------------------------

def t_monomial(m: Multisingularity) -> Monomial:
    return mono_from((t_var(name), mult) for name, mult in m.entries)


def _t_part(mono: Monomial) -> dict[str, int]:
    return {v[2]: e for v, e in mono if v[0] == T}


def _within(psi0: Multisingularity):
    bound = psi0.counts

    def keep(mono: Monomial) -> bool:
        return all(bound.get(name, 0) >= e for name, e in _t_part(mono).items())

    return keep


def _split_t(p: GradedSeries) -> dict[Monomial, GradedSeries]:
    """Group a series by its t-monomial: {t-part: coefficient series}."""
    groups: dict[Monomial, dict] = {}
    for mono, coeff in p.terms.items():
        tpart = tuple((v, e) for v, e in mono if v[0] == T)
        rest = tuple((v, e) for v, e in mono if v[0] != T)
        groups.setdefault(tpart, {})[rest] = coeff
    return {t: GradedSeries(p.l, terms, p.truncation) for t, terms in groups.items()}


def _require(table: SeriesTable, m: Multisingularity) -> GradedSeries:
    if m not in table.entries:
        raise MissingEntry(f"missing table entry for {m}")
    p = table.entries[m]
    if p and not p.is_s_linear():
        raise SeriesError(f"entry {m} is not s-linear")
    return p


def exp_generating(entries: Mapping[Multisingularity, GradedSeries], psi0: Multisingularity,
                   k: int) -> dict[Multisingularity, GradedSeries]:
    """A_Ψ = |Aut Ψ| [t^Ψ] exp(Σ entries[Φ] t^Φ / |Aut Φ|) for every Ψ ⊆ psi0.

    ``entries`` may hold s-series or their values in a torus ring; only
    t-monomials inside psi0 are ever formed.
    """
    psi0 = psi0.underlying()
    keep = _within(psi0)
    subs = sub_multisingularities(psi0)
    if EMPTY not in entries:
        raise MissingEntry("missing table entry for 1")
    master = entries[EMPTY].truncate(k)
    l = master.l
    rest_terms: dict = {}
    for sub in subs:
        if sub.is_empty:
            continue
        if sub not in entries:
            raise MissingEntry(f"missing table entry for {sub}")
        tm = t_monomial(sub)
        w = Fraction(1, aut_order(sub))
        for mono, coeff in entries[sub].truncate(k).terms.items():
            key = mono_from(list(mono) + list(tm))
            rest_terms[key] = rest_terms.get(key, 0) + coeff * w
    rest = GradedSeries(l, rest_terms, k)
    # exp of the t-part terminates: every term carries a nonempty t-monomial
    power = GradedSeries.const(l, 1, k)
    exp_rest = GradedSeries.const(l, 1, k)
    for n in range(1, psi0.size + 1):
        power = truncated_product(power, rest, k, keep).scale(Fraction(1, n))
        if not power:
            break
        exp_rest = exp_rest + power
    groups = _split_t(exp_rest)
    base = series_exp(master, k)
    out = {}
    for sub in subs:
        coeff = groups.get(t_monomial(sub))
        if coeff is None:
            out[sub] = GradedSeries.zero(l, k)
        else:
            out[sub] = truncated_product(base, coeff, k).scale(aut_order(sub)).with_truncation(k)
    return out


def assemble_target(table: SeriesTable, psi0: Multisingularity, k: int) -> SeriesTable:
    """Target Thom polynomials A_Ψ for every Ψ ⊆ psi0."""
    if table.flavor != "S":
        raise SeriesError("assemble_target needs an S-table")
    entries = {}
    for sub in sub_multisingularities(psi0.underlying()):
        entries[sub] = _require(table, sub)
    out = SeriesTable(table.l, k, "thom-target", {}, table.provenance, table.source)
    out.entries.update(exp_generating(entries, psi0, k))
    return out


def assemble_one(table: SeriesTable, psi: Multisingularity, k: int) -> GradedSeries:
    return assemble_target(table, psi, k).entries[psi.underlying()]


# --- source assembly ----------------------------------------------------------

def assemble_source(r_table: SeriesTable, s_table: SeriesTable, psi: Multisingularity,
                    k: int) -> GradedSeries:
    """Th^S of an S-multisingularity, truncated at k - l in source degrees.

    Sum over Ψ1 ∋ η, Ψ1 + Ψ2 = Ψ of multiset-weighted R_{Ψ1} · A_{Ψ2}.
    """
    if psi.distinguished is None:
        raise SeriesError("assemble_source needs a distinguished element")
    l = s_table.l
    ks = k - l
    targets = assemble_target(s_table, psi.underlying(), k)
    total = GradedSeries.zero(l, ks)
    big = aut_order(psi)
    for psi1 in sub_multisingularities(psi):
        psi2 = psi.underlying() - psi1.underlying()
        r = _r_entry(r_table, psi1)
        a = targets.entries[psi2].truncate(ks)
        weight = Fraction(big, aut_order(psi1) * aut_order(psi2))
        total = total + truncated_product(r.truncate(ks), a, ks).scale(weight)
    return total


def _r_entry(r_table: SeriesTable, psi1: Multisingularity) -> GradedSeries:
    # R does not depend on the distinguished element
    if psi1 in r_table.entries:
        return r_table.entries[psi1]
    for name, _ in psi1.entries:
        alt = psi1.with_distinguished(name)
        if alt in r_table.entries:
            return r_table.entries[alt]
    under = psi1.underlying()
    if under in r_table.entries:
        return r_table.entries[under]
    raise MissingEntry(f"missing R entry for {psi1}")


# --- F, FF and the inverse -----------------------------------------------------

def _c_partition(mono: Monomial) -> tuple[Partition, Monomial]:
    parts = []
    rest = []
    for v, e in mono:
        if v[0] == C:
            parts.extend([v[2]] * e)
        else:
            rest.append((v, e))
    return Partition(parts), tuple(rest)


def f_map(p: GradedSeries) -> GradedSeries:
    """c_λ · m(s) -> s_λ · m(s); a c-free term m(s) goes to s_∅ · m(s)."""
    terms: dict = {}
    for mono, coeff in p.terms.items():
        lam, rest = _c_partition(mono)
        new = mono_from(list(rest) + [(s_var(lam), 1)])
        terms[new] = terms.get(new, 0) + coeff
    k = None if p.truncation is None else p.truncation + p.l
    return GradedSeries(p.l, terms, k)


def total_chern_series(l: int, k: int) -> GradedSeries:
    terms = {(): Fraction(1)}
    for i in range(1, k + 1):
        terms[((c_var(i), 1),)] = Fraction(1)
    return GradedSeries(l, terms, k)


def ff_map(p: GradedSeries, k: int) -> GradedSeries:
    """F(W / (1 + c_1 + c_2 + ...)); input read to k - l, output valid to k."""
    ks = k - p.l
    inv = total_chern_series(p.l, ks).inverse(ks)
    return f_map(truncated_product(p.truncate(ks), inv, ks)).with_truncation(k)


def f_inverse_linear(p: GradedSeries) -> GradedSeries:
    """Σ a_λ s_λ -> Σ a_λ c_λ for s-linear, c-free input."""
    terms: dict = {}
    for mono, coeff in p.terms.items():
        if len(mono) != 1 or mono[0][1] != 1 or mono[0][0][0] != S:
            raise SeriesError("r_from_s needs an s-linear series in s-variables only")
        lam = mono[0][0][2]
        cm = mono_from((c_var(part), 1) for part in lam)
        terms[cm] = terms.get(cm, 0) + coeff
    k = None if p.truncation is None else p.truncation - p.l
    return GradedSeries(p.l, terms, k)


def r_from_s(s_series: GradedSeries, k: int) -> GradedSeries:
    """R = (Σ a_λ c_λ) · (1 + c_1 + c_2 + ...) truncated at k - l."""
    ks = k - s_series.l
    base = f_inverse_linear(s_series.truncate(k))
    return truncated_product(base.with_truncation(ks), total_chern_series(s_series.l, ks), ks)


def r_table_from_s(s_table: SeriesTable, k: int | None = None) -> SeriesTable:
    k = s_table.truncation if k is None else k
    out = SeriesTable(s_table.l, k, "R", {}, s_table.provenance, s_table.source)
    for m, p in s_table.items():
        if m.is_empty:
            continue
        out.entries[m] = r_from_s(p, k)
    return out


# --- oracle forms -------------------------------------------------------------

def _set_partitions(items: list) -> Iterable[list[list]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def assemble_target_by_set_partitions(table: SeriesTable, psi: Multisingularity,
                                      k: int) -> GradedSeries:
    """A_Ψ = exp(S_∅) · Σ over set partitions of the labelled Ψ of Π S_block."""
    members = psi.underlying().members()
    l = table.l
    total = GradedSeries.zero(l, k)
    for blocks in _set_partitions(list(range(len(members)))):
        term = GradedSeries.const(l, 1, k)
        for block in blocks:
            sub = Multisingularity.of(*[members[i] for i in block])
            term = truncated_product(term, table[sub].truncate(k), k)
        total = total + term
    return truncated_product(series_exp(table[EMPTY].truncate(k), k), total, k)


def labelled_count(psi: Multisingularity, psi1: Multisingularity) -> int:
    """Number of labelled sub-blocks containing the distinguished slot with content psi1."""
    counts, sub = psi.counts, psi1.counts
    out = 1
    for name, mult in counts.items():
        take = sub.get(name, 0)
        if name == psi.distinguished:
            out *= math.comb(mult - 1, take - 1)
        else:
            out *= math.comb(mult, take)
    return out
