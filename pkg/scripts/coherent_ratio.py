"""Coherent-state norm ratio along rays (compact suite) and along witness sequences (unbounded suite).

Emits a long-format CSV: suite, name, ray, radius, ratio.
"""

import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from bargmann_pullback.decision import find_witness
from bargmann_pullback.kernels import coherent_norm_ratio, ray_directions
from bargmann_pullback.suites import compact_suite, unbounded_suite


@dataclass
class Config:
    seed: int = 0
    rays: int = 8
    r_max: float = 50.0
    radii: int = 26


def run(cfg: Config, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["suite", "name", "ray", "radius", "ratio"])
    radii = np.linspace(0, cfg.r_max, cfg.radii)
    for name, phi1, phi2, phi in compact_suite(cfg.seed):
        for k, u in enumerate(ray_directions(phi.n2, cfg.rays, cfg.seed)):
            for r in radii:
                writer.writerow(["compact", name, k, r, coherent_norm_ratio(phi1, phi2, phi, r * u)])
    for name, phi1, phi2, phi in unbounded_suite(cfg.seed):
        for w, ratio in find_witness(phi1, phi2, phi):
            writer.writerow(["witness", name, 0, float(np.linalg.norm(w)), ratio])


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--rays", type=int, default=Config.rays)
    p.add_argument("--r-max", type=float, default=Config.r_max)
    a = p.parse_args()
    run(Config(a.seed, a.rays, a.r_max), sys.stdout)


if __name__ == "__main__":
    main()
