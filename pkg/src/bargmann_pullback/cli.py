"""Command line front end: ``bargmann-pullback {analyze,svd,scan1d,verify,witness}``.

Exit codes: 0 decided, 1 input error, 2 a Boundary verdict is present,
3 (verify only) at least one check failed.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import logging
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import decision as dec
from .decision import AffineMap, Class1D
from .fio import graph_mapping_report
from .kernels import (coherent_norm_ratio, project_polynomial, ray_directions,
                      schur_row_col_bounds)
from .poly import Poly, monomials_up_to
from .qform import DEFAULT_TOL, QuadraticWeight, fundamental_gap, is_strictly_psh, realify
from .spectra import (IllConditionedGram, NoDecay, decay_fit, default_degree,
                      operator_matrix, singular_value_csv, singular_values)
from .verdict import Decision, _jsonable

log = logging.getLogger("bargmann_pullback")

EXIT_OK, EXIT_INPUT, EXIT_BOUNDARY, EXIT_FAILED = 0, 1, 2, 3


class InputError(Exception):
    pass


@dataclass
class Problem:
    phi1: QuadraticWeight
    phi2: QuadraticWeight
    map: AffineMap
    tol: float = DEFAULT_TOL
    D1: int | None = None
    D2: int | None = None

    @classmethod
    def from_json(cls, data: dict) -> "Problem":
        try:
            phi1 = QuadraticWeight.from_json(data["phi1"])
            phi2 = QuadraticWeight.from_json(data["phi2"])
            phi = AffineMap.from_json(data["map"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed problem: {exc}") from exc
        if phi.A.shape != (phi1.n, phi2.n):
            raise InputError(f"map matrix has shape {phi.A.shape}, weights need ({phi1.n}, {phi2.n})")
        opts = data.get("options", {}) or {}
        return cls(phi1, phi2, phi, float(opts.get("tol", DEFAULT_TOL)),
                   opts.get("D1"), opts.get("D2"))

    def to_json(self) -> dict:
        return {"phi1": self.phi1.to_json(), "phi2": self.phi2.to_json(),
                "map": self.map.to_json(),
                "options": {"tol": self.tol, "D1": self.D1, "D2": self.D2}}


def load_problem(path: str) -> Problem:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    return Problem.from_json(data)


def _weight_status(problem: Problem) -> dict[str, Decision]:
    status = {}
    for name, phi in (("phi1", problem.phi1), ("phi2", problem.phi2)):
        v = is_strictly_psh(phi, problem.tol)
        if v.decision is Decision.NO:
            raise InputError(f"{name} is not strictly plurisubharmonic "
                             f"(lambda_min(H) = {v.certificate.extra['lambda_min']:.3e})")
        status[name] = v.decision
    return status


def _dump(obj, out=None):
    out = sys.stdout if out is None else out
    json.dump(_jsonable(obj), out, indent=2)
    out.write("\n")


# ---------------------------------------------------------------------------

def analyze(problem: Problem) -> tuple[dict, int]:
    status = _weight_status(problem)
    if Decision.BOUNDARY in status.values():
        report = {"bounded": "boundary", "compact": "boundary",
                  "weights": {k: v.value for k, v in status.items()},
                  "reason": "a weight lies inside the plurisubharmonicity tolerance band"}
        return report, EXIT_BOUNDARY
    args = (problem.phi1, problem.phi2, problem.map, problem.tol)
    bounded = dec.is_bounded(*args)
    compact = dec.is_compact(*args)
    report = {"bounded": bounded.decision.value, "compact": compact.decision.value,
              "verdicts": {"bounded": bounded.to_json(), "compact": compact.to_json()}}
    if bounded.decision is Decision.NO:
        report["witness"] = bounded.certificate.witness
    code = EXIT_BOUNDARY if Decision.BOUNDARY in (bounded.decision, compact.decision) else EXIT_OK
    return report, code


def svd_report(problem: Problem, degree: int | None = None) -> tuple[np.ndarray, dict]:
    _weight_status(problem)
    n2 = problem.phi2.n
    D1 = degree or problem.D1 or default_degree(problem.phi1.n)
    D2 = degree or problem.D2 or default_degree(n2)
    compact = dec.is_compact(problem.phi1, problem.phi2, problem.map, problem.tol)
    if compact.decision is not Decision.YES:
        log.warning("C_phi is not compact (%s); no decay is expected", compact.decision.value)
    s = singular_values(operator_matrix(problem.phi1, problem.phi2, problem.map, D1, D2))
    try:
        fit = decay_fit(s, n2)
        if fit.slope >= 0:
            log.warning("fitted slope %.3g is not negative: no decay", fit.slope)
        fit_json = fit.to_json(degree=D1 if D1 == D2 else [D1, D2])
    except NoDecay as exc:
        log.warning("decay fit refused: %s", exc)
        fit_json = {"slope": None, "intercept": None, "r2": None,
                    "degree": D1 if D1 == D2 else [D1, D2], "refused": str(exc)}
    return s, fit_json


# ---------------------------------------------------------------------------

DEFAULT_GRID = {
    "r1": [0.25, 1.0],
    "s1": [0.0, 0.5, 2.0],
    "r2": [0.25, 1.0],
    "s2": [0.0, 0.5, 1.5],
    "a": [0.0, 0.5, [0.0, 1.0], 1.0, 2.0],
    "b": [0.0, [1.0, -1.0]],
}


def _scalar(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise InputError(f"complex values must be [re, im], got {v}")
        return complex(v[0], v[1])
    return complex(v)


def scan_1d(grid: dict, tol: float = DEFAULT_TOL) -> list[dict]:
    keys = ("r1", "s1", "r2", "s2", "a", "b")
    if not grid:
        return []
    try:
        axes = [[_scalar(v) for v in grid.get(k, DEFAULT_GRID[k])] for k in keys]
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad grid: {exc}") from exc
    rows = []
    for r1, s1, r2, s2, a, b in itertools.product(*axes):
        if r1.imag or r2.imag or r1.real <= 0 or r2.real <= 0:
            raise InputError("r1 and r2 must be positive reals")
        closed = dec.classify_1d(r1.real, s1, r2.real, s2, a, b, tol)
        engine = dec.engine_class(QuadraticWeight.from_1d(r1.real, s1),
                                  QuadraticWeight.from_1d(r2.real, s2),
                                  AffineMap.from_1d(a, b), tol)
        rows.append({"r1": r1.real, "s1": s1, "r2": r2.real, "s2": s2, "a": a, "b": b,
                     "closed_form": closed.value, "engine": engine.value,
                     "agree": closed is engine})
    return rows


def _fmt(z) -> str:
    z = complex(z)
    return repr(z.real) if z.imag == 0 else f"{z.real!r}{z.imag:+}j"


def write_scan(rows: list[dict], out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["r1", "s1", "r2", "s2", "a", "b", "closed_form", "engine", "agree"])
    for r in rows:
        writer.writerow([r["r1"], _fmt(r["s1"]), r["r2"], _fmt(r["s2"]), _fmt(r["a"]),
                         _fmt(r["b"]), r["closed_form"], r["engine"], str(r["agree"]).lower()])


# ---------------------------------------------------------------------------

def _check(name, ok, detail=None, skipped=False) -> dict:
    status = "skip" if skipped else ("pass" if ok else "fail")
    return {"name": name, "status": status, "detail": detail}


def verify(problem: Problem, seed: int = 0) -> list[dict]:
    """Run the invariant checks that apply to this problem."""
    _weight_status(problem)
    rng = np.random.default_rng(seed)
    phi1, phi2, phi, tol = problem.phi1, problem.phi2, problem.map, problem.tol
    checks = []

    worst = 0.0
    for w in (phi1, phi2):
        z = rng.standard_normal((100, w.n)) + 1j * rng.standard_normal((100, w.n))
        y = rng.standard_normal((100, w.n)) + 1j * rng.standard_normal((100, w.n))
        err = np.abs(fundamental_gap(w, z, y) + w.herm(z - y))
        worst = max(worst, float(err.max() / (w.scale() * max(1.0, np.abs(z - y).max()) ** 2)))
    checks.append(_check("fundamental_gap", worst <= 1e-12, {"max_rel_residual": worst}))

    for label, w in (("reproducing_phi1", phi1), ("reproducing_phi2", phi2)):
        if realify(w).eigvals[0] <= 0:
            checks.append(_check(label, True, "weight not positive definite; monomials not in H_Phi",
                                 skipped=True))
            continue
        basis = monomials_up_to(w.n, 4)
        p = Poly(w.n, {a: complex(*rng.standard_normal(2)) for a in basis})
        err = 0.0
        for pt in rng.standard_normal((10, w.n)) + 1j * rng.standard_normal((10, w.n)):
            ref = p(pt)
            err = max(err, abs(project_polynomial(w, p, pt) - ref) / max(1.0, abs(ref)))
        checks.append(_check(label, err <= 1e-8, {"max_rel_error": err}))

    bounded = dec.is_bounded(phi1, phi2, phi, tol)
    compact = dec.is_compact(phi1, phi2, phi, tol)
    rays = ray_directions(phi.n2, 8, seed)
    if compact.decision is Decision.YES:
        worst_ratio = max(coherent_norm_ratio(phi1, phi2, phi, 50.0 * u) for u in rays)
        checks.append(_check("coherent_ratio_decay", worst_ratio < 1e-6,
                             {"max_ratio_at_radius_50": worst_ratio}))
    elif bounded.decision is Decision.YES:
        radii = np.linspace(0, 50, 26)
        vals = [coherent_norm_ratio(phi1, phi2, phi, r * u) for u in rays for r in radii]
        checks.append(_check("coherent_ratio_bounded", bool(np.isfinite(max(vals))),
                             {"max_ratio": max(vals)}))
    elif bounded.decision is Decision.NO:
        seq = dec.find_witness(phi1, phi2, phi, "unbounded", tol=tol)
        ratios = [r for _, r in seq]
        if bounded.certificate.violated == "kernel":
            ok = all(b >= a * (1 - 1e-12) for a, b in zip(ratios, ratios[1:]))
            checks.append(_check("witness_nondecreasing", ok, {"violated": "kernel"}))
        else:
            checks.append(_check("witness_growth", max(ratios) > 1e6,
                                 {"max_ratio": max(ratios)}))

    q = realify(phi2)
    try:
        split = dec.complete_square(q, q.m // 2)
    except ValueError as exc:
        checks.append(_check("complete_square", True, str(exc), skipped=True))
    else:
        X = rng.standard_normal((100, q.m))
        k = q.m - q.m // 2
        xp, xpp = X[:, :k], X[:, k:]
        rhs = split.core(xpp) + split.residual(xp - xpp @ split.critical.T)
        err = float(np.abs(q(X) - rhs).max() / max(q.scale(), 1e-300))
        checks.append(_check("complete_square", err <= 1e-10, {"max_rel_residual": err}))

    if bounded.decision is Decision.YES:
        sb = schur_row_col_bounds(phi1, phi2, phi, seed=seed, tol=tol)
        checks.append(_check("schur_bounds", sb.finite and sb.row_grid_max <= sb.row_sup * (1 + 1e-9)
                             and sb.col_grid_max <= sb.col_sup * (1 + 1e-9), sb.to_json()))
    else:
        checks.append(_check("schur_bounds", True, "operator not bounded", skipped=True))

    if phi.n1 == phi.n2 and np.linalg.cond(phi.A) < 1e12:
        rep = graph_mapping_report(phi1, phi, seed=seed)
        checks.append(_check("graph_mapping", rep.passed, rep.to_json()))
    else:
        checks.append(_check("graph_mapping", True, "A not square invertible", skipped=True))
    return checks


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bargmann-pullback",
                                     description="Pullback operators between Bargmann spaces.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, problem=True):
        if problem:
            p.add_argument("problem", help="problem JSON file")
        p.add_argument("--tol", type=float, default=None, help="relative tolerance (default 1e-9)")
        p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
        return p

    common(sub.add_parser("analyze", help="decide boundedness and compactness"))
    p = common(sub.add_parser("svd", help="singular values of a truncated operator matrix"))
    p.add_argument("--degree", type=int, default=None, help="truncation degree D1 = D2")
    p.add_argument("--csv", default=None, help="write singular values CSV here")
    p = common(sub.add_parser("scan1d", help="closed-form vs engine on a 1-D grid"), problem=False)
    p.add_argument("--grid", default=None, help="JSON grid file {r1, s1, r2, s2, a, b: [...]}")
    common(sub.add_parser("verify", help="run invariant checks"))
    p = common(sub.add_parser("witness", help="print a witness sequence"))
    p.add_argument("--mode", choices=("unbounded", "noncompact"), default="unbounded")
    p.add_argument("--max-m", type=int, default=10_000)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return _run(args)
    except (InputError, IllConditionedGram) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def _run(args) -> int:
    if args.command == "scan1d":
        grid = DEFAULT_GRID
        if args.grid:
            try:
                with open(args.grid) as fh:
                    grid = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise InputError(f"cannot read grid {args.grid}: {exc}") from exc
        rows = scan_1d(grid, args.tol or DEFAULT_TOL)
        write_scan(rows, sys.stdout)
        agree = sum(r["agree"] for r in rows)
        decided = sum(1 for r in rows if r["closed_form"] != Class1D.BOUNDARY.value)
        print(f"{agree}/{len(rows)} cells agree ({decided} decided by the closed form)",
              file=sys.stderr)
        return EXIT_OK

    problem = load_problem(args.problem)
    if args.tol is not None:
        problem.tol = args.tol

    if args.command == "analyze":
        report, code = analyze(problem)
        _dump(report)
        return code

    if args.command == "svd":
        s, fit = svd_report(problem, args.degree)
        if args.csv:
            with open(args.csv, "w") as fh:
                fh.write(singular_value_csv(s, problem.phi2.n))
            _dump(fit)
        else:
            _dump({"singular_values": s.tolist(), "fit": fit})
        return EXIT_OK

    if args.command == "verify":
        checks = verify(problem, args.seed)
        _dump({"checks": checks})
        return EXIT_FAILED if any(c["status"] == "fail" for c in checks) else EXIT_OK

    if args.command == "witness":
        _weight_status(problem)
        steps = dec.default_witness_steps(args.max_m)
        seq = dec.find_witness(problem.phi1, problem.phi2, problem.map, args.mode,
                               steps=steps, tol=problem.tol)
        for m, (w, ratio) in zip(steps, seq):
            print(json.dumps({"m": int(m), "w": _jsonable(w),
                              "ratio": ratio if math.isfinite(ratio) else "inf"}))
        return EXIT_OK

    raise InputError(f"unknown command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
