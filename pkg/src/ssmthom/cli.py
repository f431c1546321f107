"""Command-line interface: ``ssmthom <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 computation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import fixtures as fx
from .equivariant import NonDivisible, ZeroWeight
from .interpolation import SolverError, solve, verify_table
from .mond import KPolynomialSet, MondError, WeightData, image_milnor, k_polynomials
from .prototype import PrototypeError, build_prototype
from .series import SeriesError, format_rational, render, series_to_json
from .singularities import (BeyondMatherBound, CatalogIncomplete, Multisingularity,
                            SingularityError, parse_multisingularity)
from .structure import (MissingEntry, SeriesTable, assemble_source, assemble_target, ff_map,
                        r_table_from_s)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2, 3
MASTER_PREFIX = 6


@dataclass
class CommandResult:
    code: int
    stdout: str = ""
    files: list = field(default_factory=list)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ssmthom", description="Exact SSM-Thom polynomial engine.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt=True):
        sp.add_argument("--out", help="write canonical JSON to this file")
        if fmt:
            sp.add_argument("--format", choices=["tpp", "json"], default="tpp",
                            help="stdout format (default: tpp, partition notation)")
            sp.add_argument("--compress", action="store_true",
                            help="print repeated parts with exponents, e.g. s_{31^2}")

    sp = sub.add_parser("master", help="solve the master series S_∅")
    sp.add_argument("--l", type=int, default=1)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--report", action="store_true", help="print the per-degree solver report")
    common(sp)

    sp = sub.add_parser("tower", help="solve S_{A0^i} for i <= j")
    sp.add_argument("--l", type=int, default=1)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--report", action="store_true")
    common(sp)

    sp = sub.add_parser("thom", help="assemble a target (or source, with 'η:') Thom polynomial")
    sp.add_argument("--psi", required=True, help="e.g. A0^2*A1 or A0:A0*A1")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--table", help="S-table JSON (default: bundled l=1 table)")
    sp.add_argument("--r-table", help="R-table JSON for source polynomials (default: FF image)")
    common(sp)

    sp = sub.add_parser("milnor", help="image Milnor number of a quasihomogeneous germ")
    sp.add_argument("--weights", type=_int_list, required=True)
    sp.add_argument("--degrees", type=_int_list, required=True)
    sp.add_argument("--no-prefix-check", action="store_true",
                    help="skip re-solving the master prefix against the bundled series")
    common(sp, fmt=False)

    sp = sub.add_parser("kpoly", help="K-polynomials from the bundled l=1 master series")
    sp.add_argument("--max-degree", type=int, default=15)
    sp.add_argument("--no-prefix-check", action="store_true")
    common(sp)

    sp = sub.add_parser("prototype", help="torus weights of a prototype")
    sp.add_argument("--algebra", required=True, help="A0, A1, I22, III23, ...")
    sp.add_argument("--l", type=int, default=1)
    common(sp)

    sp = sub.add_parser("verify", help="check the interpolation conditions of an S-table")
    sp.add_argument("--table", required=True)
    sp.add_argument("--degree", type=int)
    common(sp)

    sp = sub.add_parser("fixtures", help="list or self-test the bundled fixtures")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--selftest", action="store_true")
    g.add_argument("--list", action="store_true")
    return p


# --- helpers -------------------------------------------------------------------------

def _emit(args, payload: dict, text: str) -> CommandResult:
    files = []
    body = json.dumps(payload, indent=1, sort_keys=True) + "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(body)
        files.append(args.out)
    if getattr(args, "format", "tpp") == "json":
        return CommandResult(EXIT_OK, body, files)
    return CommandResult(EXIT_OK, text, files)


def _render_table(table: SeriesTable, compress: bool) -> str:
    return "".join(f"{m}: {render(p, compress)}\n" for m, p in table.items())


def _load_table(path: str | None) -> SeriesTable:
    if path is None:
        return fx.sl1_table()
    out = fx.load_store(path, "table")
    assert isinstance(out, SeriesTable)
    return out


def _checked_master(skip: bool):
    master = fx.master_l1()
    if not skip:
        solved, _ = solve(Multisingularity(), 1, MASTER_PREFIX)
        if solved[Multisingularity()] != master.truncate(MASTER_PREFIX):
            raise SolverError("bundled master series disagrees with the solved prefix")
    return master


# --- commands --------------------------------------------------------------------------

def cmd_master(args) -> CommandResult:
    table, report = solve(Multisingularity(), args.l, args.degree)
    p = table[Multisingularity()]
    payload = {"kind": "series", **series_to_json(p), "report": report.to_json(timing=False)}
    text = render(p, args.compress) + "\n"
    if args.report:
        text += json.dumps(report.to_json(), indent=1) + "\n"
    return _emit(args, payload, text)


def cmd_tower(args) -> CommandResult:
    if args.j < 0:
        raise UsageError("--j must be non-negative")
    psi0 = Multisingularity.from_counts({"A0": args.j})
    table, report = solve(psi0, args.l, args.degree)
    payload = {"kind": "table", **table.to_json(), "report": report.to_json(timing=False)}
    text = _render_table(table, args.compress)
    if args.report:
        text += json.dumps(report.to_json(), indent=1) + "\n"
    return _emit(args, payload, text)


def cmd_thom(args) -> CommandResult:
    psi = parse_multisingularity(args.psi)
    s_table = _load_table(args.table)
    k = args.degree
    if psi.is_source:
        if args.r_table:
            r_table = fx.load_store(args.r_table, "table")
        else:
            r_table = r_table_from_s(s_table, k)
        p = assemble_source(r_table, s_table, psi, k)
    else:
        p = assemble_target(s_table, psi, k).entries[psi]
    payload = {"kind": "series", "multisingularity": psi.render(), **series_to_json(p)}
    return _emit(args, payload, render(p, args.compress) + "\n")


def cmd_milnor(args) -> CommandResult:
    w = WeightData(args.weights, args.degrees)
    master = _checked_master(args.no_prefix_check)
    kset = k_polynomials(master, w.m + 1, fx.FILES["master"])
    res = image_milnor(w, kset)
    payload = {"m": w.m, "weights": list(w.alpha), "degrees": list(w.beta),
               "value": format_rational(res.value), "verdict": res.verdict}
    return _emit(args, payload, f"{res}\n")


def cmd_kpoly(args) -> CommandResult:
    master = _checked_master(args.no_prefix_check)
    kset: KPolynomialSet = k_polynomials(master, args.max_degree, fx.FILES["master"])
    payload = {"kind": "kpolynomials", "source": kset.source,
               "polynomials": [{"d": d, "terms": len(kset[d]), "series": series_to_json(kset[d])}
                               for d in range(1, kset.max_degree + 1)]}
    text = "".join(f"K_{d} = {render(kset[d], args.compress)}\n"
                   for d in range(1, kset.max_degree + 1))
    return _emit(args, payload, text)


def cmd_prototype(args) -> CommandResult:
    proto = build_prototype(args.algebra, args.l)
    return _emit(args, proto.to_json(), proto.describe() + "\n")


def cmd_verify(args) -> CommandResult:
    table = _load_table(args.table)
    checks = verify_table(table, args.degree)
    failed = [c for c in checks if not c.ok]
    payload = {"checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in checks],
               "passed": not failed}
    lines = [f"{'PASS' if c.ok else 'FAIL'} {c.name}" + (f": {c.detail}" if c.detail else "")
             for c in checks]
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    out = _emit(args, payload, "\n".join(lines) + "\n")
    out.code = EXIT_FAIL if failed else EXIT_OK
    return out


def selftest() -> list[tuple[str, bool]]:
    results = []
    s_table, r_table = fx.sl1_table(), fx.rl1_table()
    ok = all(ff_map(r_table[m], s_table.truncation) == s_table[m].truncate(s_table.truncation)
             for m in r_table.keys())
    results.append(("FF of the bundled R-table reproduces the S-table rows", ok))
    results.append(("interpolation conditions hold on the bundled S-table",
                    all(c.ok for c in verify_table(s_table))))
    master = fx.master_l1()
    solved, _ = solve(Multisingularity(), 1, MASTER_PREFIX)
    results.append((f"solved master prefix (degree {MASTER_PREFIX}) equals the bundled master",
                    solved[Multisingularity()] == master.truncate(MASTER_PREFIX)))
    dens = [fx.common_denominator(master.component(d)) for d in range(1, 16)]
    results.append(("reduced denominators of the bundled master", dens == fx.norlund_denominators()))
    for l in (2, 3, 4):
        pre = fx.master_prefix(l)
        table, _ = solve(Multisingularity(), l, pre.truncation)
        results.append((f"solved l={l} prefix equals the bundled prefix",
                        table[Multisingularity()].truncate(pre.truncation) == pre))
    return results


def cmd_fixtures(args) -> CommandResult:
    if args.list:
        lines = []
        for key, name in fx.FILES.items():
            raw = fx.load_raw(key)
            lines.append(f"{key:10s} {name}: {raw.get('source', raw.get('description', ''))}")
        return CommandResult(EXIT_OK, "\n".join(lines) + "\n")
    results = selftest()
    lines = [f"{'PASS' if ok else 'FAIL'} {name}" for name, ok in results]
    code = EXIT_OK if all(ok for _, ok in results) else EXIT_FAIL
    return CommandResult(code, "\n".join(lines) + "\n")


COMMANDS = {
    "master": cmd_master, "tower": cmd_tower, "thom": cmd_thom, "milnor": cmd_milnor,
    "kpoly": cmd_kpoly, "prototype": cmd_prototype, "verify": cmd_verify,
    "fixtures": cmd_fixtures,
}

USAGE_ERRORS = (UsageError, SeriesError, SingularityError, fx.FixtureError, MissingEntry,
                MondError)
COMPUTE_ERRORS = (SolverError, NonDivisible, ZeroWeight, PrototypeError, ArithmeticError)


def run_command(argv: Sequence[str]) -> CommandResult:
    try:
        args = build_parser().parse_args(list(argv))
        return COMMANDS[args.command](args)
    except (CatalogIncomplete, BeyondMatherBound) as exc:
        return CommandResult(EXIT_COMPUTE, f"error: {exc}\n")
    except COMPUTE_ERRORS as exc:
        return CommandResult(EXIT_COMPUTE, f"error: {exc}\n")
    except USAGE_ERRORS as exc:
        return CommandResult(EXIT_USAGE, f"{exc}\n")
    except SystemExit as exc:  # --help
        return CommandResult(int(exc.code or 0))


def main(argv: Sequence[str] | None = None) -> int:
    result = run_command(sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if result.code in (EXIT_OK, EXIT_FAIL) else sys.stderr
    stream.write(result.stdout)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
