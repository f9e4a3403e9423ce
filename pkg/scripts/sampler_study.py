"""Monte Carlo study of the small-N field: acceptance, radial and angular statistics.

    python3 scripts/sampler_study.py --count 100000 --workers 4
"""
from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ginibre3d import sampler


@dataclass
class StudyConfig:
    count: int = 100_000
    seed: int = 20240601
    workers: int = 2
    out: Path = Path("results/sampler.json")


def summarize(cfg: StudyConfig, n: int) -> dict:
    t0 = time.perf_counter()
    samples = sampler.rejection_sample(
        sampler.SamplerConfig(n=n, count=cfg.count, seed=cfg.seed, workers=cfg.workers)
    )
    radial = sampler.estimate_radial(samples)
    out = {
        "n": n,
        "acceptance_rate": samples.acceptance_rate,
        "max_ratio": samples.max_ratio,
        "radial_ks": radial.ks,
        "radial_max_z": radial.max_z,
        "radial_counts": radial.counts.tolist(),
    }
    if n == 1:
        ang = sampler.estimate_angular(samples)
        out.update(angular_max_z=ang.max_z, mean_cos=ang.mean, exact_mean_cos=ang.extra["exact_mean"],
                   angular_counts=ang.counts.tolist(), angular_expected=np.round(ang.expected, 6).tolist())
    out["seconds"] = time.perf_counter() - t0
    return out


def run(cfg: StudyConfig):
    results = [summarize(cfg, n) for n in (0, 1, 2)]
    for r in results:
        print({k: v for k, v in r.items() if not isinstance(v, list)})
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    payload = {"config": {k: str(v) for k, v in asdict(cfg).items()}, "results": results}
    cfg.out.write_text(json.dumps(payload, indent=1))
    print(f"wrote {cfg.out}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--count", type=int, default=StudyConfig.count)
    p.add_argument("--seed", type=int, default=StudyConfig.seed)
    p.add_argument("--workers", type=int, default=StudyConfig.workers)
    p.add_argument("--out", type=Path, default=StudyConfig.out)
    a = p.parse_args()
    run(StudyConfig(count=a.count, seed=a.seed, workers=a.workers, out=a.out))
