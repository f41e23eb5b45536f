"""Exact L1 norms of Walsh-Fejer kernels up to 2^14 and the running maximum."""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

from walshlab.lebesgue import TOLEDO_SUP, fejer_norms


@dataclass
class FejerNormConfig:
    n_max: int = 1 << 14
    out: Path = Path("results/fejer_norms.csv")


def run(cfg: FejerNormConfig) -> None:
    norms = fejer_norms(cfg.n_max)
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    lines = ["# schema=1", "n,norm,norm_float"]
    best, arg = norms[0], 1
    for n, v in enumerate(norms, start=1):
        lines.append(f"{n},{v},{float(v):.12g}")
        if v > best:
            best, arg = v, n
            print(f"new max at n={n} ({n:b}): {float(v):.9f}")
    cfg.out.write_text("\n".join(lines) + "\n")
    print(f"max {best} = {float(best):.9f} at n={arg}; gap to 17/15: {float(TOLEDO_SUP - best):.3e}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=FejerNormConfig.n_max)
    ap.add_argument("--out", type=Path, default=FejerNormConfig.out)
    a = ap.parse_args()
    run(FejerNormConfig(a.n_max, a.out))


if __name__ == "__main__":
    main()
