"""Exhaustive and sampled verification of the two-sided conjugate Lebesgue-constant bounds."""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

from walshlab.cli import SCAN_COLUMNS, render
from walshlab.lebesgue import scan


@dataclass
class ScanConfig:
    exhaustive_max: int = 8
    random_min: int = 0
    random_max: int = 16
    samples: int = 100_000
    seed: int = 2024
    workers: int = 1
    out_dir: Path = Path("results")


def run(cfg: ScanConfig) -> None:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    for label, (records, summary) in (
        ("exhaustive", scan(0, cfg.exhaustive_max, workers=cfg.workers)),
        ("random", scan(cfg.random_min, cfg.random_max, "random", cfg.samples, cfg.seed, cfg.workers)),
    ):
        rows = [[r.n, r.N, r.t_bits, r.m, r.V_n, r.V_m, r.T_nm, r.T_mn, r.L.numerator, r.L.denominator,
                 r.upper_margin, r.lower_margin(1), r.lower_margin(2), r.mtk_ok, r.sws_ok] for r in records]
        (cfg.out_dir / f"scan_{label}.csv").write_text(render(SCAN_COLUMNS, rows, "csv"))
        print(f"[{label}]")
        for line in summary.lines():
            print("  " + line)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--exhaustive-max", type=int, default=ScanConfig.exhaustive_max)
    ap.add_argument("--random-max", type=int, default=ScanConfig.random_max)
    ap.add_argument("--samples", type=int, default=ScanConfig.samples)
    ap.add_argument("--seed", type=int, default=ScanConfig.seed)
    ap.add_argument("--workers", type=int, default=ScanConfig.workers)
    ap.add_argument("--out-dir", type=Path, default=ScanConfig.out_dir)
    a = ap.parse_args()
    run(ScanConfig(a.exhaustive_max, 0, a.random_max, a.samples, a.seed, a.workers, a.out_dir))


if __name__ == "__main__":
    main()
