"""Per-octave maxima of conjugate Fejer kernel norms for several parameters t."""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from walshlab.cli import SWEEP_COLUMNS, parse_t, render
from walshlab.counterexample import rational_sweep


@dataclass
class SweepConfig:
    ts: list[str] = field(default_factory=lambda: ["0", "1/2", "3/8", "5/8", "1/3"])
    N_min: int = 4
    N_max: int = 18
    samples: int = 64
    seed: int = 909
    out: Path = Path("results/sweep.csv")


def run(cfg: SweepConfig) -> None:
    rows = []
    for spec in cfg.ts:
        t = parse_t(spec)
        for r in rational_sweep(t, cfg.N_min, cfg.N_max, cfg.samples, cfg.seed):
            rows.append([t.spec(), r.N, r.count, r.max_l1, r.argmax, r.max_exact if r.max_exact is not None else "", ""])
            print(f"t={spec:>4} N={r.N:2d} max={r.max_l1:.6f} at n={r.argmax}")
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    cfg.out.write_text(render(SWEEP_COLUMNS, rows, "csv"))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t", nargs="+", default=SweepConfig().ts)
    ap.add_argument("--N-min", dest="N_min", type=int, default=SweepConfig.N_min)
    ap.add_argument("--N-max", dest="N_max", type=int, default=SweepConfig.N_max)
    ap.add_argument("--samples", type=int, default=SweepConfig.samples)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    ap.add_argument("--out", type=Path, default=SweepConfig.out)
    a = ap.parse_args()
    run(SweepConfig(a.t, a.N_min, a.N_max, a.samples, a.seed, a.out))


if __name__ == "__main__":
    main()
