"""Singular-value decay of C_phi and of the shrunk-weight inclusion over the compact suite.

Writes one CSV per instance plus fits.json into --out.
"""

import argparse
import json
import logging
from dataclasses import asdict, dataclass
from pathlib import Path

from bargmann_pullback.decision import shrink_weight
from bargmann_pullback.spectra import (IllConditionedGram, decay_fit, default_degree, inclusion_spectrum,
                                       operator_matrix, singular_value_csv, singular_values)
from bargmann_pullback.qform import realify
from bargmann_pullback.suites import compact_suite, margin

log = logging.getLogger("svd_decay")


@dataclass
class Config:
    out: Path = Path("results/svd_decay")
    seed: int = 0
    count: int = 12
    min_margin: float = 0.05


def spectrum(phi1, phi2, phi):
    D1, D2 = default_degree(phi1.n), default_degree(phi2.n)
    while True:
        try:
            return singular_values(operator_matrix(phi1, phi2, phi, D1, D2)), (D1, D2)
        except IllConditionedGram as exc:
            log.info("degree lowered to %d", exc.max_safe_degree)
            if exc.max_safe_degree < 1:
                raise
            D1 = D2 = min(D1, D2, exc.max_safe_degree)


def run(cfg: Config) -> list[dict]:
    cfg.out.mkdir(parents=True, exist_ok=True)
    rows = []
    for name, phi1, phi2, phi in compact_suite(cfg.seed, cfg.count, cfg.min_margin):
        if min(realify(phi1).eigvals[0], realify(phi2).eigvals[0]) > 0:
            s, degrees = spectrum(phi1, phi2, phi)
            (cfg.out / f"{name}.csv").write_text(singular_value_csv(s, phi2.n))
            fit = decay_fit(s, phi2.n).to_json(list(degrees))
        else:
            # polynomials are not in a space whose weight is not positive definite
            fit = None
        phi3, delta = shrink_weight(phi1, phi2, phi)
        _, prefix, D = inclusion_spectrum(phi3, phi2)
        inc = decay_fit(prefix, phi2.n)
        rows.append({"name": name, "n1": phi1.n, "n2": phi2.n, "margin": margin(phi1, phi2, phi),
                     "operator": fit, "delta": delta,
                     "inclusion": inc.to_json(D)})
        op = f"slope {fit['slope']:.3f} R2 {fit['r2']:.3f}" if fit else "operator skipped"
        log.info("%-16s %s | inclusion slope %.3f R2 %.3f", name, op, inc.slope, inc.r2)
    (cfg.out / "fits.json").write_text(json.dumps({"config": {k: str(v) for k, v in asdict(cfg).items()},
                                                   "instances": rows}, indent=2))
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", type=Path, default=Config.out)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--count", type=int, default=Config.count)
    p.add_argument("--min-margin", type=float, default=Config.min_margin)
    a = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    run(Config(a.out, a.seed, a.count, a.min_margin))


if __name__ == "__main__":
    main()
