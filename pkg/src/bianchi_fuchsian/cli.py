"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .circles import families_for, family_c, family_form
from .counting import asymptotic_report, estimate_C
from .covolume import covolume_local
from .exact_arith import format_rational
from .orders import local_data, nrd_image_mod8, reduced_discriminant, theorem1_order
from .verify import SUITES, run_suite

log = logging.getLogger("bianchi_fuchsian")


@dataclass
class RunConfig:
    command: str
    d_max: int = 100
    D: int | None = None
    x_values: list[Fraction] = field(default_factory=lambda: [Fraction(10) ** e for e in (3, 4, 5, 6)])
    prime_bound: int = 10**6
    height: int = 30
    suite: str = "all"
    output_format: str = "csv"
    output_path: Path | None = None
    threads: int = 1


def classify_records(D: int) -> list[dict]:
    """One record per family admitting D."""
    out = []
    for k in families_for(D):
        c = family_c(k, D)
        F = family_form(k, c)
        M = theorem1_order(k, D)
        N = reduced_discriminant(M)
        ld2 = local_data(M, 2) if N % 2 == 0 else None
        vol = covolume_local(M, family=k)
        out.append({
            "D": D,
            "family": k,
            "c_param": c,
            "form": F.to_json(),
            "order_basis": M.lattice.serialize(),
            "N": N,
            "eichler_2": None if ld2 is None else ld2.eichler,
            "norm_index_2": nrd_image_mod8(M)[1],
            "vol_over_pi": format_rational(vol.vol_over_pi),
            "vol": vol.vol_decimal(),
        })
    return out


def _flatten(rec: dict) -> dict:
    row = {}
    for key, v in rec.items():
        if key == "form":
            row.update({f"form_{n}": x for n, x in v.items()})
        elif key == "order_basis":
            row[key] = ";".join(",".join(r) for r in v)
        else:
            row[key] = "" if v is None else v
    return row


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    flat = [_flatten(r) for r in rows]
    if not flat:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(flat[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(flat)
    return buf.getvalue()


def emit(text: str, cfg: RunConfig):
    if cfg.output_path is None:
        sys.stdout.write(text)
        return
    try:
        cfg.output_path.parent.mkdir(parents=True, exist_ok=True)
        cfg.output_path.write_text(text)
    except OSError as e:
        # a bad --out path is a usage problem, not a verification failure
        print(f"error: cannot write {cfg.output_path}: {e.strerror or e}", file=sys.stderr)
        raise SystemExit(2)
    log.info("wrote %s", cfg.output_path)


def run_classify(cfg: RunConfig) -> int:
    emit(render(classify_records(cfg.D), cfg.output_format), cfg)
    return 0


def run_table(cfg: RunConfig) -> int:
    rows = [r for D in range(1, cfg.d_max + 1) for r in classify_records(D)]
    emit(render(rows, cfg.output_format), cfg)
    return 0


def run_count(cfg: RunConfig) -> int:
    reports = asymptotic_report(cfg.x_values, cfg.prime_bound, threads=cfg.threads)
    emit(render([r.row() for r in reports], cfg.output_format), cfg)
    return 0


def run_constant(cfg: RunConfig) -> int:
    est = estimate_C(cfg.prime_bound)
    row = est.to_json()
    if row["exact"] is None:
        row["exact"] = ""
    emit(render([row], cfg.output_format), cfg)
    return 0


def run_verify(cfg: RunConfig) -> int:
    results = run_suite(cfg.suite, cfg.d_max, cfg.height, cfg.threads)
    if cfg.output_format == "json":
        text = json.dumps([{"suite": r.name, "cases": r.cases, "ok": r.ok,
                            "counterexamples": r.failures[:10]} for r in results], indent=2) + "\n"
    else:
        lines = []
        for r in results:
            lines.append(r.summary())
            lines += [f"  {f}" for f in r.failures[:10]]
        text = "\n".join(lines) + "\n"
    emit(text, cfg)
    return 0 if all(r.ok for r in results) else 1


COMMANDS = {
    "classify": run_classify,
    "table": run_table,
    "count": run_count,
    "constant": run_constant,
    "verify": run_verify,
}


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _x_list(s: str) -> list[Fraction]:
    try:
        xs = [Fraction(t) for t in s.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"cannot parse x values {s!r}")
    if not xs or any(x <= 0 for x in xs):
        raise argparse.ArgumentTypeError("x values must be positive")
    return xs


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", type=Path, default=None)
    common.add_argument("--threads", type=_positive_int, default=1)

    p = argparse.ArgumentParser(prog="bianchi-fuchsian", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="classes with a given discriminant")
    s.add_argument("--D", type=_positive_int, required=True)

    s = sub.add_parser("table", parents=[common], help="classification table for D <= dmax")
    s.add_argument("--dmax", type=_positive_int, required=True)

    s = sub.add_parser("count", parents=[common], help="Pi(x) against the asymptotic prediction")
    s.add_argument("--x", type=_x_list, default="1000,10000,100000,1000000")
    s.add_argument("--pmax", type=_positive_int, default=10**6)

    s = sub.add_parser("constant", parents=[common], help="estimate the Euler product C")
    s.add_argument("--pmax", type=_positive_int, default=10**6)

    s = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    s.add_argument("--suite", choices=SUITES + ("all",), default="all")
    s.add_argument("--dmax", type=_positive_int, default=500)
    s.add_argument("--height", type=_positive_int, default=30)
    return p


def parse_config(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    cfg = RunConfig(command=ns.command, output_format=ns.format, output_path=ns.out, threads=ns.threads)
    if ns.command == "classify":
        cfg.D = ns.D
    if ns.command in ("table", "verify"):
        cfg.d_max = ns.dmax
    if ns.command == "count":
        cfg.x_values = ns.x if isinstance(ns.x, list) else _x_list(ns.x)
    if ns.command in ("count", "constant"):
        if ns.pmax < 3:
            build_parser().error("--pmax must be at least 3")
        cfg.prime_bound = ns.pmax
    if ns.command == "verify":
        cfg.suite, cfg.height = ns.suite, ns.height
    return cfg


def main(argv=None) -> int:
    cfg = parse_config(argv)
    return COMMANDS[cfg.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
