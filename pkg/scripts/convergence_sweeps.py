"""Finite-n convergence sweeps for the large-n approximations.

Writes one CSV per regime to the output directory:

    python3 scripts/convergence_sweeps.py --out results/
"""
from __future__ import annotations

import argparse
import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ginibre3d import asymptotics as asy
from ginibre3d import verify


@dataclass
class SweepConfig:
    density_ns: list = field(default_factory=lambda: [250, 500, 1000, 2000, 4000, 8000])
    bulk_ns: list = field(default_factory=lambda: [250, 500, 1000, 2000, 4000])
    center_ns: list = field(default_factory=lambda: [250, 500, 1000, 2000, 4000])
    hermite_ns: list = field(default_factory=lambda: [200, 400, 800, 1600])
    mainterm_ns: list = field(default_factory=lambda: [250, 500, 1000, 2000, 4000, 8000])
    out: Path = Path("results")


def write(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([f"{x:.12g}" if isinstance(x, float) else x for x in r])
    print(f"wrote {path}")


def fitted_slope(ns, errs):
    return float(np.polyfit(np.log(ns), np.log(errs), 1)[0])


def mainterm_errors(n, phi, psi):
    r = 2 * math.sqrt(n + 1.5)
    s, t = r * np.cos(phi), r * np.cos(psi)
    exact = asy.exact_rho_weighted(n, s, t)
    scale = np.abs(asy.bulk_rho_prefactor(n, phi, psi))
    fixed = np.max(np.abs(asy.bulk_rho_mainterm(n, s, t) - exact) / scale)
    printed = np.max(np.abs(asy.bulk_rho_mainterm(n, s, t, as_printed=True) - exact) / scale)
    return float(fixed), float(printed)


def run(cfg: SweepConfig):
    cfg.out.mkdir(parents=True, exist_ok=True)

    errs = [verify.density_sup_error(n) for n in cfg.density_ns]
    write(cfg.out / "density_limit.csv", ["n", "sup_rel_err"], zip(cfg.density_ns, errs))
    print(f"  density limit slope {fitted_slope(cfg.density_ns, errs):.3f}")

    bulk = [verify.bulk_errors(n) for n in cfg.bulk_ns]
    write(cfg.out / "bulk_kernel.csv", ["n", "kk_err", "max_delta"],
          [(n, e, d) for n, (e, d) in zip(cfg.bulk_ns, bulk)])
    print(f"  bulk kernel slope {fitted_slope(cfg.bulk_ns, [b[0] for b in bulk]):.3f}, "
          f"delta slope {fitted_slope(cfg.bulk_ns, [b[1] for b in bulk]):.3f}")

    center = [verify.center_residual(n) for n in cfg.center_ns]
    write(cfg.out / "center_kernel.csv", ["n", "residual"], zip(cfg.center_ns, center))
    print(f"  center residual slope {fitted_slope(cfg.center_ns, center):.3f}")

    rows = []
    for n in cfg.hermite_ns:
        rows.append((n, verify.pr_error(n), verify.center_hermite_error(n), verify.center_hermite_error(n + 1)))
    write(cfg.out / "hermite.csv", ["n", "pr_err", "center_even_err", "center_odd_err"], rows)

    phi = np.array([0.7, 0.9, 1.1, 1.3])
    psi = np.array([0.9, 1.2, 0.8, 1.0])
    rows = [(n, *mainterm_errors(n, phi, psi)) for n in cfg.mainterm_ns]
    write(cfg.out / "bulk_mainterm.csv", ["n", "corrected_err", "printed_sign_err"], rows)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", type=Path, default=Path("results"))
    args = p.parse_args()
    run(SweepConfig(out=args.out))


if __name__ == "__main__":
    main()
