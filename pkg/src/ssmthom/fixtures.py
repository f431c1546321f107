"""Bundled data files, the fixture directory override, and load/store helpers."""

from __future__ import annotations

import json
import math
import os
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

from .series import GradedSeries, SeriesError, series_from_json, series_to_json
from .structure import SeriesTable

ENV_VAR = "SSMTHOM_FIXTURES"

FILES = {
    "master": "master_l1_deg14.json",
    "prefixes": "master_prefixes.json",
    "sl1": "fig_sl1.json",
    "rl1": "fig_rl1.json",
    "source": "source_examples.json",
    "kpoly": "k_polys_printed.json",
    "lpoly": "pp_L_polynomials.json",
    "norlund": "norlund.json",
    "linfinity": "master_l_infinity.json",
    "catalog": "catalog.json",
}


class FixtureError(ValueError):
    pass


def fixture_dir() -> Path | None:
    """The override directory, if SSMTHOM_FIXTURES is set."""
    value = os.environ.get(ENV_VAR)
    return Path(value) if value else None


def _read_text(filename: str) -> tuple[str, str]:
    override = fixture_dir()
    if override is not None and (override / filename).is_file():
        path = override / filename
        return path.read_text(), str(path)
    res = resources.files("ssmthom.data").joinpath(filename)
    return res.read_text(), f"ssmthom.data/{filename}"


def _parse(text: str, where: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FixtureError(f"{where}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


@lru_cache(maxsize=None)
def _load_cached(filename: str, override: str | None) -> Any:
    text, where = _read_text(filename)
    return _parse(text, where)


def load_raw(key: str) -> Any:
    filename = FILES.get(key, key)
    override = os.environ.get(ENV_VAR)
    return _load_cached(filename, override)


def _series(obj: Any, where: str) -> GradedSeries:
    try:
        return series_from_json(obj)
    except (SeriesError, KeyError, TypeError) as exc:
        raise FixtureError(f"{where}: {exc}") from exc


def master_l1() -> GradedSeries:
    """The bundled degree-14 master series for l = 1 (stored truncation 15)."""
    return _series(load_raw("master")["series"], FILES["master"])


def master_prefix(l: int) -> GradedSeries:
    prefixes = load_raw("prefixes")["prefixes"]
    if str(l) not in prefixes:
        raise FixtureError(f"no bundled master prefix for l={l}")
    return _series(prefixes[str(l)]["series"], FILES["prefixes"])


def _table(key: str) -> SeriesTable:
    try:
        return SeriesTable.from_json(load_raw(key))
    except SeriesError as exc:
        raise FixtureError(f"{FILES[key]}: {exc}") from exc


def sl1_table() -> SeriesTable:
    return _table("sl1")


def rl1_table() -> SeriesTable:
    return _table("rl1")


def source_examples() -> list[dict]:
    return load_raw("source")["thom_source"]


def f_map_example() -> tuple[GradedSeries, GradedSeries]:
    raw = load_raw("source")["f_map"]
    return _series(raw["input"], "f_map input"), _series(raw["output"], "f_map output")


def printed_k_polynomials() -> dict[int, GradedSeries]:
    return {item["d"]: _series(item["series"], f"K_{item['d']}")
            for item in load_raw("kpoly")["polynomials"]}


def l_polynomials() -> list[GradedSeries]:
    items = sorted(load_raw("lpoly")["polynomials"], key=lambda it: it["i"])
    return [_series(item["series"], f"L_{item['i']}") for item in items]


def norlund_denominators() -> list[int]:
    return [int(x) for x in load_raw("norlund")["denominators"]]


def l_infinity_master() -> dict:
    return load_raw("linfinity")


# --- generic load/store -----------------------------------------------------------

def to_json(obj: GradedSeries | SeriesTable) -> dict:
    if isinstance(obj, SeriesTable):
        return {"kind": "table", **obj.to_json()}
    if isinstance(obj, GradedSeries):
        return {"kind": "series", **series_to_json(obj)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: GradedSeries | SeriesTable) -> str:
    """Canonical JSON: stable key order, one trailing newline."""
    return json.dumps(to_json(obj), indent=1, sort_keys=True) + "\n"


def store(obj: GradedSeries | SeriesTable, path: str | Path) -> None:
    Path(path).write_text(dumps(obj))


def from_json(obj: Any, where: str = "<json>") -> GradedSeries | SeriesTable:
    if not isinstance(obj, dict):
        raise FixtureError(f"{where}: top level must be an object")
    kind = obj.get("kind")
    if kind is None:
        kind = "table" if "entries" in obj else "series"
    body = {k: v for k, v in obj.items() if k != "kind"}
    try:
        if kind == "table":
            return SeriesTable.from_json(body)
        if kind == "series":
            return series_from_json(body)
    except (SeriesError, KeyError, TypeError) as exc:
        raise FixtureError(f"{where}: {exc}") from exc
    raise FixtureError(f"{where}: unknown kind {kind!r}")


def load_store(path: str | Path, schema: str | None = None) -> GradedSeries | SeriesTable:
    """Load a series or table file; ``schema`` ('series' or 'table') is enforced if given."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FixtureError(f"{path}: {exc.strerror}") from exc
    obj = _parse(text, str(path))
    out = from_json(obj, str(path))
    if schema == "series" and not isinstance(out, GradedSeries):
        raise FixtureError(f"{path}: expected a series, found a table")
    if schema == "table" and not isinstance(out, SeriesTable):
        raise FixtureError(f"{path}: expected a table, found a series")
    return out


def common_denominator(p: GradedSeries) -> int:
    return math.lcm(1, *(Fraction(c).denominator for c in p.terms.values()))
