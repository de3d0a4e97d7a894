"""Command line: ``orthlmov {unknot,pipeline,verify}``.

Exit statuses: 0 pass, 1 verification failure, 2 inconclusive at this
truncation, 3 input or configuration error.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .characters import assemble_partition_function, assembly_coverage, load_brauer_table
from .io import InputError, coefficient_map_json, read_json, read_pbseries, read_w_data, write_json
from .lmov import (
    BpsTable,
    VerificationReport,
    free_energy,
    numeric_product_check,
    run_pipeline,
    unknot_free_energy,
    verify_product,
    verify_q_inversion,
)
from .qt import parse_fraction
from .synthetic import forward_free_energy, random_n_table

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3
REGIME_FLAGS = ("qlt1", "qgt1")


@dataclass
class RunConfig:
    command: str
    degree: int = 6
    order: int = 40
    regime: str = "qlt1"
    seed: int = 0
    tolerance: float = 1e-12
    inp: Path | None = None
    out: Path = Path("out")
    fmt: str = "json"
    characters: list[Path] = field(default_factory=list)
    n_path: Path | None = None
    f_path: Path | None = None
    numeric: str | None = None
    m_max: int = 25
    d_max: int = 25
    synthetic: int = 0

    def validate(self) -> None:
        if self.degree < 1:
            raise InputError("--degree must be >= 1")
        if self.order < 2 * self.degree + 2:
            raise InputError(f"--order must be >= 2*degree + 2 = {2 * self.degree + 2}, got {self.order}")
        if not self.tolerance > 0:
            raise InputError("--tolerance must be positive")
        if self.regime not in REGIME_FLAGS:
            raise InputError(f"--regime must be one of {REGIME_FLAGS}")


def _status(reports: Sequence[VerificationReport]) -> int:
    statuses = {r.status for r in reports}
    if "fail" in statuses:
        return EXIT_FAIL
    if "inconclusive" in statuses:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


def _render_table(table: BpsTable) -> str:
    rows = [("mu", "g", "beta", "value")]
    rows += [(str([list(c) for c in mu]), str(g), str(b), str(table.entries[(mu, g, b)])) for mu, g, b in table.keys()]
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    lines = [f"{table.kind} table (integral: {table.integral})"]
    lines += ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)) for r in rows]
    return "\n".join(lines)


def _render_reports(reports: Sequence[VerificationReport]) -> str:
    width = max(len(r.check) for r in reports)
    return "\n".join(f"{r.check.ljust(width)}  {r.status:<12}  discrepancies={len(r.discrepancies)}" for r in reports)


def _emit(config: RunConfig, tables: Sequence[BpsTable], reports: Sequence[VerificationReport]) -> None:
    if config.fmt == "text":
        for t in tables:
            print(_render_table(t))
            print()
        print(_render_reports(reports))
    else:
        print(f"wrote {config.out}/  status={['pass', 'fail', 'inconclusive', 'input-error'][_status(reports)]}")


def _write_reports(out: Path, reports: Sequence[VerificationReport], extra: dict | None = None) -> None:
    data = {"status": ["pass", "fail", "inconclusive"][_status(reports)], "reports": [r.to_json() for r in reports]}
    if extra:
        data.update(extra)
    write_json(out / "report.json", data)


def cmd_unknot(config: RunConfig) -> int:
    F = unknot_free_energy(config.degree)
    res = run_pipeline(F=F, order=config.order, regime=config.regime)
    n = res["n"]
    reports = list(res["reports"])
    reports.append(verify_product(F, n, config.degree, config.order, config.regime))
    reports.append(verify_q_inversion(n, config.degree, config.order, L=1))
    write_json(config.out / "F.json", F.to_json())
    write_json(config.out / "N.json", res["N"].to_json())
    write_json(config.out / "n.json", n.to_json())
    _write_reports(config.out, reports)
    _emit(config, [res["N"], n], reports)
    return _status(reports)


def _load_input(config: RunConfig):
    if config.inp is None:
        raise InputError("pipeline needs --in PATH")
    data = read_json(config.inp)
    if isinstance(data, dict) and "reps" in data:
        L, W = read_w_data(data)
        tables = {}
        for path in config.characters:
            try:
                table = load_brauer_table(read_json(path))
            except ValueError as exc:
                raise InputError(f"{path}: {exc}") from None
            tables[table.n] = table
        try:
            Z = assemble_partition_function(W, tables, config.degree, L)
        except ValueError as exc:
            raise InputError(f"assembly: {exc}") from None
        return Z, None, {"input": "W", "characters": assembly_coverage(tables, config.degree)}
    series = read_pbseries(data)
    if series.D > config.degree:
        series = series.truncate(config.degree)
    const = series.constant_term()
    if const.is_zero():
        return None, series, {"input": "F"}
    try:
        free_energy(series)
    except ValueError:
        raise InputError("input series has constant term neither 0 (free energy) nor 1 (partition function)") from None
    return series, None, {"input": "Z"}


def cmd_pipeline(config: RunConfig) -> int:
    Z, F, meta = _load_input(config)
    res = run_pipeline(Z=Z, F=F, order=config.order, regime=config.regime)
    F = res["F"]
    if Z is not None:
        write_json(config.out / "Z.json", Z.to_json())
    write_json(config.out / "F.json", F.to_json())
    if res["g"]:
        write_json(config.out / "g.json", coefficient_map_json(res["g"], F.L, F.D))
        write_json(config.out / "lhs.json", coefficient_map_json(res["lhs"], F.L, F.D))
    write_json(config.out / "N.json", res["N"].to_json())
    write_json(config.out / "n.json", res["n"].to_json())
    reports = res["reports"]
    _write_reports(config.out, reports, meta)
    if config.fmt == "text" and Z is not None and meta.get("input") == "W":
        print(f"Z = {Z!r}")
    _emit(config, [res["N"], res["n"]], reports)
    return _status(reports)


def _parse_sample(text: str) -> dict:
    out: dict = {}
    for item in text.split(","):
        key, _, val = item.partition("=")
        key = key.strip()
        if key not in ("q", "t", "z"):
            raise InputError(f"--numeric: unknown sample key {key!r}")
        try:
            num = float(parse_fraction(val.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"--numeric: bad value for {key}: {exc}") from None
        if key == "z":
            out.setdefault("z", []).append(num)
        else:
            out[key] = num
    if not {"q", "t", "z"} <= set(out):
        raise InputError("--numeric needs q=..., t=... and at least one z=...")
    return out


def _synthetic_suite(config: RunConfig) -> list[VerificationReport]:
    rng = random.Random(config.seed)
    D, O = config.degree, config.order
    suite = VerificationReport("synthetic_suite", {"D": D, "O": O, "regime": config.regime})
    suite.notes["seed"] = config.seed
    for i in range(config.synthetic):
        n = random_n_table(rng, D)
        F = forward_free_energy(n, D, rng=rng)
        res = run_pipeline(F=F)
        if res["n"] != n:
            suite.fail(case=i, reason="pipeline did not recover the table")
        if not verify_product(F, n, D, O, config.regime).passed:
            suite.fail(case=i, reason="verify_product failed")
        if not verify_q_inversion(random_n_table(rng, D, recoverable=False), D, O).passed:
            suite.fail(case=i, reason="verify_q_inversion failed")
        key = rng.choice(n.keys())
        corrupted = BpsTable("n", {**n.entries, key: n.entries[key] + rng.choice([-1, 1])})
        if verify_product(F, corrupted, D, O, config.regime).passed:
            suite.fail(case=i, reason="corrupted table was not detected", key=key)
    suite.notes["cases"] = config.synthetic
    return [suite]


def cmd_verify(config: RunConfig) -> int:
    reports: list[VerificationReport] = []
    n_path = config.n_path or (config.inp / "n.json" if config.inp else None)
    f_path = config.f_path or (config.inp / "F.json" if config.inp else None)
    if n_path is not None:
        try:
            n = BpsTable.from_json(read_json(n_path))
        except ValueError as exc:
            raise InputError(f"{n_path}: {exc}") from None
        if n.kind != "n":
            raise InputError(f"{n_path}: expected an n table, got kind {n.kind}")
        L = n.L or 1
        if f_path is not None:
            F = read_pbseries(read_json(f_path))
            if not F.constant_term().is_zero():
                raise InputError(f"{f_path}: reference free energy must have zero constant term")
            L = F.L
            reports.append(verify_product(F, n, min(config.degree, F.D), config.order, config.regime))
        reports.append(verify_q_inversion(n, config.degree, config.order, L=L))
        if config.numeric:
            try:
                reports.append(numeric_product_check(n, _parse_sample(config.numeric), config.m_max,
                                                     config.d_max, config.tolerance))
            except ValueError as exc:
                raise InputError(f"--numeric: {exc}") from None
    if config.synthetic:
        reports.extend(_synthetic_suite(config))
    if not reports:
        raise InputError("verify needs --in DIR, --n PATH or --synthetic COUNT")
    _write_reports(config.out, reports)
    _emit(config, [], reports)
    return _status(reports)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degree", "-D", type=int, default=6, help="total pb-degree bound D")
    common.add_argument("--order", "-O", type=int, default=40, help="q-order of truncated series")
    common.add_argument("--regime", choices=REGIME_FLAGS, default="qlt1")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tolerance", type=float, default=1e-12)
    common.add_argument("--in", dest="inp", type=Path)
    common.add_argument("--out", type=Path, default=Path("out"))
    common.add_argument("--format", dest="fmt", choices=("json", "text"), default="json")

    parser = argparse.ArgumentParser(prog="orthlmov", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("unknot", parents=[common], help="unknot free energy, BPS tables and checks")
    p = sub.add_parser("pipeline", parents=[common], help="run Z/F/W input through the pipeline")
    p.add_argument("--characters", type=Path, action="append", default=[],
                   help="Brauer character table JSON (repeatable)")
    v = sub.add_parser("verify", parents=[common], help="product and q-inversion checks")
    v.add_argument("--n", dest="n_path", type=Path)
    v.add_argument("--F", dest="f_path", type=Path)
    v.add_argument("--numeric", metavar="q=..,t=..,z=..", help="also run the numeric product check")
    v.add_argument("--m-max", type=int, default=25)
    v.add_argument("--d-max", type=int, default=25)
    v.add_argument("--synthetic", type=int, default=0, metavar="COUNT", help="seeded random roundtrip suite")
    return parser


COMMANDS = {"unknot": cmd_unknot, "pipeline": cmd_pipeline, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    config = RunConfig(**vars(args))
    try:
        config.validate()
        return COMMANDS[config.command](config)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
