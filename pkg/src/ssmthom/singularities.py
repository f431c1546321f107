"""Local algebras, mono- and multisingularities, and the bundled catalog."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import product

Term = tuple  # (coeff, exponent tuple)


class SingularityError(ValueError):
    pass


class ParseError(SingularityError):
    pass


class Unrealizable(SingularityError):
    pass


class CatalogIncomplete(SingularityError):
    def __init__(self, l: int, k: int, covered: int):
        self.l, self.k, self.covered = l, k, covered
        super().__init__(
            f"bundled catalog for l={l} is complete only through tcodim {covered}; "
            f"monosingularities with tcodim {covered + 1}..{k} are missing")


class BeyondMatherBound(SingularityError):
    pass


_TOKEN = re.compile(r"^(III|I|A)(\d+)$")
_FAMILY_RANK = {"A": 0, "I": 1, "III": 2}


def mather_bound(l: int) -> int:
    if l < 1:
        raise SingularityError("Mather bound is defined for l >= 1")
    return 6 * l + 8 if l <= 3 else 6 * l + 7


@dataclass(frozen=True)
class LocalAlgebra:
    """A named finite local algebra with a fixed genotype presentation.

    ``relations`` holds the nonzero genotype components as lists of
    ``(coeff, exponents)`` terms; padding with zeros to ``a + l`` components
    happens in :meth:`genotype`.
    """

    name: str
    generators: int
    relations: tuple

    @property
    def family(self) -> str:
        return parse_token(self.name)[0]

    @property
    def indices(self) -> tuple[int, ...]:
        return parse_token(self.name)[1]

    def genotype(self, l: int) -> list[list[Term]]:
        width = self.generators + l
        if len(self.relations) > width:
            raise Unrealizable(f"{self.name} needs l >= {len(self.relations) - self.generators}")
        return [list(r) for r in self.relations] + [[] for _ in range(width - len(self.relations))]

    def min_l(self) -> int:
        return max(0, len(self.relations) - self.generators)

    def closed_form_scodim(self, l: int) -> int:
        fam, idx = self.family, self.indices
        if fam == "A":
            (k,) = idx
            return k * l + k
        a, b = idx
        if fam == "I":
            return (a + b - 1) * l + (a + b)
        return (a + b - 2) * l + (a + b)

    def to_json(self) -> dict:
        return {"name": self.name, "generators": self.generators,
                "genotype": [[[c, list(e)] for c, e in r] for r in self.relations]}


def parse_token(token: str) -> tuple[str, tuple[int, ...]]:
    m = _TOKEN.match(token)
    if not m:
        raise ParseError(f"unknown algebra token {token!r}")
    fam, digits = m.groups()
    if fam == "A":
        return fam, (int(digits),)
    if len(digits) != 2:
        raise ParseError(f"token {token!r}: expected two single-digit indices")
    a, b = sorted(int(ch) for ch in digits)
    if a < 2:
        raise ParseError(f"token {token!r}: indices must be at least 2")
    return fam, (a, b)


def canonical_token(token: str) -> str:
    fam, idx = parse_token(token)
    return fam + "".join(str(i) for i in idx)


def token_sort_key(token: str) -> tuple:
    fam, idx = parse_token(token)
    return (_FAMILY_RANK[fam], sum(idx), idx)


@lru_cache(maxsize=None)
def local_algebra(token: str) -> LocalAlgebra:
    fam, idx = parse_token(token)
    name = canonical_token(token)
    if fam == "A":
        (k,) = idx
        return LocalAlgebra(name, 1, (((1, (k + 1,)),),))
    a, b = idx
    if fam == "I":
        if (a, b) == (2, 2):
            # the diagonal presentation carries a rank-2 grading torus
            return LocalAlgebra(name, 2, (((1, (2, 0)),), ((1, (0, 2)),)))
        return LocalAlgebra(name, 2, (((1, (1, 1)),), ((1, (a, 0)), (1, (0, b)))))
    return LocalAlgebra(name, 2, (((1, (a, 0)),), ((1, (1, 1)),), ((1, (0, b)),)))


@dataclass(frozen=True)
class Monosingularity:
    algebra: LocalAlgebra
    l: int

    @property
    def name(self) -> str:
        return self.algebra.name

    @property
    def scodim(self) -> int:
        if self.l < self.algebra.min_l():
            raise Unrealizable(f"{self.name} is not realizable for l={self.l}")
        return self.algebra.closed_form_scodim(self.l)

    @property
    def tcodim(self) -> int:
        return self.scodim + self.l


def monosingularity(token: str, l: int) -> Monosingularity:
    return Monosingularity(local_algebra(token), l)


@dataclass(frozen=True)
class Multisingularity:
    """Multiset of algebra names, optionally with a distinguished member."""

    entries: tuple = ()  # sorted tuple of (name, multiplicity)
    distinguished: str | None = None

    def __post_init__(self):
        if self.distinguished is not None and self.distinguished not in dict(self.entries):
            raise SingularityError(
                f"distinguished element {self.distinguished} does not occur in the multiset")

    @classmethod
    def from_counts(cls, counts: dict[str, int], distinguished: str | None = None
                    ) -> "Multisingularity":
        merged: dict[str, int] = {}
        for name, mult in counts.items():
            if mult < 0:
                raise SingularityError("negative multiplicity")
            if mult:
                key = canonical_token(name)
                merged[key] = merged.get(key, 0) + mult
        entries = tuple(sorted(merged.items(), key=lambda nm: token_sort_key(nm[0])))
        dist = canonical_token(distinguished) if distinguished is not None else None
        return cls(entries, dist)

    @classmethod
    def of(cls, *names: str, distinguished: str | None = None) -> "Multisingularity":
        counts: dict[str, int] = {}
        for n in names:
            counts[n] = counts.get(n, 0) + 1
        return cls.from_counts(counts, distinguished)

    @property
    def counts(self) -> dict[str, int]:
        return dict(self.entries)

    @property
    def is_empty(self) -> bool:
        return not self.entries

    @property
    def is_source(self) -> bool:
        return self.distinguished is not None

    @property
    def size(self) -> int:
        return sum(m for _, m in self.entries)

    def members(self) -> list[str]:
        return [n for n, m in self.entries for _ in range(m)]

    def underlying(self) -> "Multisingularity":
        return Multisingularity(self.entries, None)

    def with_distinguished(self, name: str) -> "Multisingularity":
        return Multisingularity(self.entries, canonical_token(name))

    def __add__(self, other: "Multisingularity") -> "Multisingularity":
        counts = self.counts
        for n, m in other.entries:
            counts[n] = counts.get(n, 0) + m
        dist = self.distinguished or other.distinguished
        return Multisingularity.from_counts(counts, dist)

    def __sub__(self, other: "Multisingularity") -> "Multisingularity":
        counts = self.counts
        for n, m in other.entries:
            if counts.get(n, 0) < m:
                raise SingularityError(f"{other} is not contained in {self}")
            counts[n] -= m
        return Multisingularity.from_counts(counts)

    def contains(self, other: "Multisingularity") -> bool:
        mine = self.counts
        return all(mine.get(n, 0) >= m for n, m in other.entries)

    def render(self) -> str:
        if self.is_empty:
            return "1"
        body = "*".join(n if m == 1 else f"{n}^{m}" for n, m in self.entries)
        return f"{self.distinguished}:{body}" if self.distinguished else body

    def __str__(self) -> str:
        return self.render()

    def sort_key(self) -> tuple:
        return (self.size, tuple((token_sort_key(n), -m) for n, m in self.entries),
                self.distinguished or "")


EMPTY = Multisingularity()


def parse_multisingularity(expr: str) -> Multisingularity:
    text = re.sub(r"\s+", "", expr)
    if text in ("", "1"):
        return EMPTY
    dist = None
    if ":" in text:
        dist_text, _, text = text.partition(":")
        if ":" in text:
            raise ParseError(f"more than one ':' in {expr!r}")
        dist = canonical_token(dist_text)
    counts: dict[str, int] = {}
    for factor in text.split("*"):
        m = re.fullmatch(r"([A-Z]+\d+)(?:\^(\d+))?", factor)
        if not m:
            raise ParseError(f"malformed factor {factor!r} in {expr!r}")
        token = canonical_token(m.group(1))
        power = int(m.group(2)) if m.group(2) else 1
        if power < 1:
            raise ParseError(f"exponent must be positive in {factor!r}")
        counts[token] = counts.get(token, 0) + power
    if dist is not None and dist not in counts:
        raise ParseError(f"distinguished element {dist} does not occur in {expr!r}")
    return Multisingularity.from_counts(counts, dist)


@dataclass(frozen=True)
class Codims:
    scodim: int | None
    tcodim: int
    empty: bool = False


def codims(m: Multisingularity, l: int) -> Codims:
    if m.is_empty:
        return Codims(None, 0, True)
    total = 0
    for name in m.members():
        total += monosingularity(name, l).scodim
    scodim = total + (m.size - 1) * l
    return Codims(scodim, scodim + l)


def tcodim(m: Multisingularity, l: int) -> int:
    return codims(m, l).tcodim


def aut_order(m: Multisingularity) -> int:
    out = 1
    for name, mult in m.entries:
        if name == m.distinguished:
            mult -= 1
        out *= math.factorial(mult)
    return out


def sub_multisingularities(m: Multisingularity) -> list[Multisingularity]:
    names = [n for n, _ in m.entries]
    ranges = [range(mult + 1) for _, mult in m.entries]
    out = []
    for choice in product(*ranges):
        counts = dict(zip(names, choice))
        if m.distinguished is not None:
            if counts[m.distinguished] == 0:
                continue
            out.append(Multisingularity.from_counts(counts, m.distinguished))
        else:
            out.append(Multisingularity.from_counts(counts))
    return sorted(out, key=Multisingularity.sort_key)


# --- catalog ----------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    mono: Monosingularity
    torus_certified: bool = True
    note: str = ""

    @property
    def name(self) -> str:
        return self.mono.name

    @property
    def tcodim(self) -> int:
        return self.mono.tcodim


@dataclass(frozen=True)
class Catalog:
    l: int
    k: int
    mather_bound: int
    entries: tuple = field(default_factory=tuple)

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@lru_cache(maxsize=None)
def _catalog_data() -> dict:
    text = resources.files("ssmthom.data").joinpath("catalog.json").read_text()
    return json.loads(text)


def catalog(l: int, k: int) -> Catalog:
    """Bundled monosingularities with tcodim <= k, ordered by tcodim."""
    bound = mather_bound(l)
    if k > bound + l:
        raise BeyondMatherBound(f"degree {k} exceeds M({l}) + {l} = {bound + l}")
    data = _catalog_data()
    block = data["coverage"].get(str(l))
    if block is None:
        raise CatalogIncomplete(l, k, 0)
    covered = block["complete_through_tcodim"]
    if k > covered:
        raise CatalogIncomplete(l, k, covered)
    entries = []
    for item in block["algebras"]:
        mono = monosingularity(item["name"], l)
        if mono.tcodim > k:
            continue
        # a prototype built from a non-maximal torus would give too few conditions
        if not item.get("torus_certified", False):
            raise SingularityError(f"catalog entry {item['name']} has no certified maximal torus")
        entries.append(CatalogEntry(mono, True, item.get("note", "")))
    entries.sort(key=lambda e: (e.tcodim, token_sort_key(e.name)))
    return Catalog(l, k, bound, tuple(entries))
