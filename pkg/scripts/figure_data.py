"""Regenerate the CSV data behind the three figures through the CLI.

    python3 scripts/figure_data.py --out results/figures
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

from ginibre3d.cli import main as cli_main


@dataclass
class FigureConfig:
    out: Path = Path("results/figures")
    grid: int = 401
    bulk_n: int = 2000


def run(cfg: FigureConfig):
    cfg.out.mkdir(parents=True, exist_ok=True)
    for which in ("1", "2", "3"):
        path = cfg.out / f"figure{which}.csv"
        argv = ["figures", "--which", which, "--grid", str(cfg.grid), "--out", str(path)]
        if which == "3":
            argv += ["--n", str(cfg.bulk_n)]
        code = cli_main(argv)
        if code:
            raise SystemExit(code)
        print(f"wrote {path}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", type=Path, default=FigureConfig.out)
    p.add_argument("--grid", type=int, default=FigureConfig.grid)
    a = p.parse_args()
    run(FigureConfig(out=a.out, grid=a.grid))
