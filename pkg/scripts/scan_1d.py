"""Phase diagram of the one-dimensional example.

For a grid of ratios t1 = |s1|/r1 and t2 = |s2|/r2 records whether some
affine map is bounded or compact (closed form) and whether a search over
a in (0, 3] with b = 0 finds one through the general engine.
"""

import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from bargmann_pullback.decision import AffineMap, Class1D, engine_class, exists_bounded_1d, exists_compact_1d
from bargmann_pullback.qform import QuadraticWeight


@dataclass
class Config:
    points: int = 21
    t_max: float = 2.5
    a_points: int = 120


def run(cfg: Config, out) -> int:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["t1", "t2", "exists_bounded", "exists_compact", "search_bounded", "search_compact"])
    disagreements = 0
    ts = np.linspace(0, cfg.t_max, cfg.points)
    amps = np.linspace(0.02, 3.0, cfg.a_points)
    for t1 in ts:
        for t2 in ts:
            phi1 = QuadraticWeight.from_1d(1.0, t1)
            phi2 = QuadraticWeight.from_1d(1.0, t2)
            found = {engine_class(phi1, phi2, AffineMap.from_1d(a)) for a in amps}
            sb = bool(found & {Class1D.BOUNDED, Class1D.COMPACT})
            sc = Class1D.COMPACT in found
            eb, ec = exists_bounded_1d(1, t1, 1, t2), exists_compact_1d(1, t1, 1, t2)
            # the search can miss isolated good values of a; it must never find one that cannot exist
            disagreements += (sb and not eb) + (sc and not ec)
            writer.writerow([f"{t1:.4f}", f"{t2:.4f}", eb, ec, sb, sc])
    print(f"contradictions between search and existence criteria: {disagreements}", file=sys.stderr)
    return disagreements


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--points", type=int, default=Config.points)
    p.add_argument("--t-max", type=float, default=Config.t_max)
    p.add_argument("--a-points", type=int, default=Config.a_points)
    a = p.parse_args()
    sys.exit(1 if run(Config(a.points, a.t_max, a.a_points), sys.stdout) else 0)


if __name__ == "__main__":
    main()
