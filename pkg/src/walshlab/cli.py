"""Command-line front end: ``python -m walshlab <subcommand> ...``.

Reports are CSV (canonical, ``# schema=1`` header line) or JSON with the same records.
Exact values are printed as reduced fractions. Output depends only on the arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from walshlab.counterexample import (
    ALTERNATING,
    GROWTH_COLUMNS,
    BlockParameter,
    growth_csv_rows,
    growth_run,
    rational_sweep,
)
from walshlab.dyadic import ConjugateParameter
from walshlab.kernels import KINDS, KernelSpec, min_depth
from walshlab.lebesgue import LOWER_CONSTANTS, TOLEDO_SUP, lebesgue_exact, scan, toledo_scan
from walshlab.spectral import EXACT, FLOAT, depth_cap

SCHEMA = 1
AUTO = "auto"
CHECKS = ("ts", "mtk", "sws", "toledo")

_FRACTION = re.compile(r"^\s*(\d+)\s*/\s*(\d+)\s*$")
_BITS = re.compile(r"^bits:([01]*)(?:\(([01]*)\))?$")


def parse_t(spec: str) -> ConjugateParameter:
    """``"p/q"``, ``"bits:PRE(PERIOD)"`` or ``"0"``."""
    s = spec.strip()
    if s == "0":
        return ConjugateParameter()
    m = _FRACTION.match(s)
    if m:
        p, q = int(m.group(1)), int(m.group(2))
        if q == 0:
            raise ValueError("denominator must be nonzero")
        if p >= q:
            raise ValueError(f"t = {p}/{q} is outside [0, 1)")
        return ConjugateParameter.from_fraction(Fraction(p, q))
    m = _BITS.match(s)
    if m:
        pre = tuple(int(b) for b in m.group(1))
        per = tuple(int(b) for b in (m.group(2) or ""))
        return ConjugateParameter(pre, per)
    raise ValueError(f"cannot parse t spec {spec!r}; use p/q, bits:PRE(PERIOD) or 0")


def parse_pattern(spec: str) -> BlockParameter:
    """``alternating`` or ``offset,width,gap``."""
    if spec == "alternating":
        return ALTERNATING
    try:
        offset, width, gap = (int(x) for x in spec.split(","))
    except ValueError:
        raise ValueError(f"pattern must be 'alternating' or 'offset,width,gap', got {spec!r}") from None
    return BlockParameter(offset, width, gap)


def resolve_backend(backend: str, depth: int) -> str:
    if backend == AUTO:
        return EXACT if depth <= depth_cap(EXACT) else FLOAT
    return backend


@dataclass
class CommandConfig:
    command: str
    n: int | None = None
    t: str = "0"
    depth: int | None = None
    exp_min: int = 1
    exp_max: int = 8
    samples: int = 0
    seed: int = 0
    out: str | None = None
    format: str = "csv"
    backend: str = AUTO
    checks: tuple[str, ...] = CHECKS
    A_max: int = 5
    pattern: str = "alternating"
    kind: str = "conj-dirichlet"


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def render(columns: Sequence[str], rows: list[list], fmt: str, meta: dict | None = None) -> str:
    rows = [[_fmt(v) for v in r] for r in rows]
    if fmt == "json":
        doc = {"schema": SCHEMA, **(meta or {}), "records": [dict(zip(columns, r)) for r in rows]}
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(f"# schema={SCHEMA}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, cfg: CommandConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_lebesgue(cfg: CommandConfig) -> int:
    if cfg.n is None:
        raise ValueError("--n is required")
    t = parse_t(cfg.t)
    b = lebesgue_exact(cfg.n, t)
    if cfg.format == "json":
        doc = {"schema": SCHEMA, "n": cfg.n, "t": t.spec(), "L": str(b.total),
               "J1": str(b.J1), "J2": str(b.J2), "J3": str(b.J3)}
        _emit(json.dumps(doc, indent=1) + "\n", cfg)
    else:
        _emit(f"{b.total}\nJ1={b.J1}\nJ2={b.J2}\nJ3={b.J3}\n", cfg)
    return 0


SCAN_COLUMNS = ("n", "N", "t_bits", "m", "V_n", "V_m", "T_nm", "T_mn", "L_num", "L_den",
                "upper_margin", "lower_margin_C1", "lower_margin_C2", "mtk_ok", "sws_ok")


def cmd_scan(cfg: CommandConfig) -> int:
    sampling = "random" if cfg.samples else "exhaustive"
    records, summary = scan(cfg.exp_min, cfg.exp_max, sampling, cfg.samples, cfg.seed)
    rows = [[r.n, r.N, r.t_bits, r.m, r.V_n, r.V_m, r.T_nm, r.T_mn, r.L.numerator, r.L.denominator,
             r.upper_margin, r.lower_margin(1), r.lower_margin(2), r.mtk_ok, r.sws_ok]
            for r in records]
    bad = 0
    if "ts" in cfg.checks:
        bad += summary.upper_violations + summary.lower_violations[("ts", LOWER_CONSTANTS[-1])]
    if "mtk" in cfg.checks:
        bad += summary.mtk_violations
    if "sws" in cfg.checks:
        bad += summary.sws_violations
    notes = summary.lines()
    if "toledo" in cfg.checks:
        n_max = 1 << min(cfg.exp_max + 1, 14)
        best, arg, over = toledo_scan(n_max)
        notes.append(f"toledo_max={best} at n={arg} (n <= {n_max}); over_17/15={over}")
        bad += over
    meta = {"summary": notes} if cfg.format == "json" else None
    _emit(render(SCAN_COLUMNS, rows, cfg.format, meta), cfg)
    if cfg.format == "csv":
        sys.stderr.write("".join(f"# {line}\n" for line in notes))
    return 1 if bad else 0


SWEEP_COLUMNS = ("t", "N", "count", "max_l1", "argmax", "max_exact", "over_toledo")


def cmd_fejer_norms(cfg: CommandConfig) -> int:
    t = parse_t(cfg.t)
    samples = cfg.samples or 64
    rows_out, bad = [], 0
    rows = rational_sweep(t, cfg.exp_min, cfg.exp_max, samples, cfg.seed, cfg.backend)
    for r in rows:
        over = ""
        if t.to_fraction() == 0 and r.max_exact is not None:
            over = r.max_exact > TOLEDO_SUP
            bad += over
        rows_out.append([t.spec(), r.N, r.count, r.max_l1, r.argmax,
                         "" if r.max_exact is None else r.max_exact, over])
    _emit(render(SWEEP_COLUMNS, rows_out, cfg.format), cfg)
    return 1 if bad else 0


def cmd_counterexample(cfg: CommandConfig) -> int:
    pattern = parse_pattern(cfg.pattern)
    rows = growth_run(cfg.A_max, pattern)
    bad = sum(1 for r in rows if r.shadow_rel_err is not None and r.shadow_rel_err > 1e-9)
    _emit(render(GROWTH_COLUMNS, growth_csv_rows(rows), cfg.format), cfg)
    return 1 if bad else 0


def cmd_kernel(cfg: CommandConfig) -> int:
    if cfg.n is None:
        raise ValueError("--n is required")
    depth = cfg.depth if cfg.depth is not None else max(min_depth(cfg.n), 1)
    backend = resolve_backend(cfg.backend, depth)
    K = KernelSpec(cfg.kind, cfg.n, parse_t(cfg.t), depth).build(backend)
    vals = K.reduced().values() if backend == EXACT else K.values()
    rows = [[c, v] for c, v in enumerate(vals)]
    _emit(render(("cell", "value"), rows, cfg.format,
                 {"kind": cfg.kind, "n": cfg.n, "depth": depth} if cfg.format == "json" else None), cfg)
    return 0


def cmd_selftest(cfg: CommandConfig) -> int:
    from walshlab.selftest import run_selftest

    results = run_selftest(seed=cfg.seed)
    rows = [[name, ok, detail] for name, ok, detail in results]
    _emit(render(("check", "ok", "detail"), rows, cfg.format), cfg)
    return 0 if all(ok for _, ok, _ in results) else 1


COMMANDS = {
    "lebesgue": cmd_lebesgue,
    "scan": cmd_scan,
    "fejer-norms": cmd_fejer_norms,
    "counterexample": cmd_counterexample,
    "kernel": cmd_kernel,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="walshlab", description="Walsh-Paley conjugate kernel experiments")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--n", type=int)
    ap.add_argument("--t", default="0", help="p/q, bits:PRE(PERIOD) or 0")
    ap.add_argument("--depth", type=int)
    ap.add_argument("--exp-min", type=int, default=1)
    ap.add_argument("--exp-max", type=int, default=8)
    ap.add_argument("--samples", type=int, default=0, help="0 means exhaustive where applicable")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--backend", choices=(EXACT, FLOAT, AUTO), default=AUTO)
    ap.add_argument("--checks", default=",".join(CHECKS), help="comma list of ts,mtk,sws,toledo")
    ap.add_argument("--A-max", dest="A_max", type=int, default=5)
    ap.add_argument("--pattern", default="alternating", help="alternating or offset,width,gap")
    ap.add_argument("--kind", choices=KINDS, default="conj-dirichlet")
    return ap


def config_from_args(argv: Sequence[str] | None = None) -> CommandConfig:
    ns = build_parser().parse_args(argv)
    checks = tuple(c for c in ns.checks.split(",") if c)
    unknown = set(checks) - set(CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    return CommandConfig(
        command=ns.command, n=ns.n, t=ns.t, depth=ns.depth, exp_min=ns.exp_min, exp_max=ns.exp_max,
        samples=ns.samples, seed=ns.seed, out=ns.out, format=ns.format, backend=ns.backend,
        checks=checks, A_max=ns.A_max, pattern=ns.pattern, kind=ns.kind,
    )


def run(cfg: CommandConfig) -> int:
    return COMMANDS[cfg.command](cfg)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        return run(config_from_args(argv))
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
