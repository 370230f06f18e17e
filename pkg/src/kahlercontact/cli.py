"""``verify`` command: run named verification suites and print reports.

Reports are newline-delimited JSON (or CSV with ``--format csv``).  Exit
codes: 0 all pass, 1 some check failed, 2 usage error, 3 bad parameters.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from . import contact_core as cc
from .curvature import curvature_selftest, ricci_operator
from .errors import GeometryError, ParameterError
from .immersion_lab import (
    CONVERGENCE_KEYS,
    SPHERE_BOUNDS,
    c2_tube_check,
    quadratic_curve,
    sphere_check,
)
from .model_frame import AmbientSpec, make_model_frame
from .singular_normals import NormalKind, classify_normal, jn_eigen_defect, normal_at_angle
from .tube_builder import (
    FOCAL_RADIUS_QN,
    PrincipalProfile,
    core_model,
    dual_complex_core_data,
    focal_distances,
    jacobi_ode_oracle,
    jacobi_solution,
    profile_shape_operator,
    sphere_core_data,
    tube_profile_theorem1,
    tube_profile_theorem2,
    weingarten_curvatures,
)

SUITES = (
    "curvature-selftest",
    "einstein",
    "theorem1",
    "theorem2",
    "singular-sweep",
    "jacobi-oracle",
    "sphere",
    "c2-tube",
    "focal",
    "all",
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_PARAM = 0, 1, 2, 3

CSV_FIELDS = ("check_name", "params", "residuals", "tolerance", "pass", "runtime_ms")


@dataclass
class CheckReport:
    check_name: str
    params: Dict[str, object]
    residuals: Dict[str, float]
    tolerance: float
    passed: bool = field(init=False)
    runtime_ms: int = 0

    def __post_init__(self):
        self.residuals = {k: float(v) for k, v in self.residuals.items()}
        if any(not v >= 0 for v in self.residuals.values()):
            raise ValueError(f"residuals must be nonnegative: {self.residuals}")
        if self.runtime_ms < 0:
            raise ValueError("runtime_ms must be >= 0")
        self.passed = all(v < self.tolerance for v in self.residuals.values())

    def to_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "params": self.params,
            "residuals": self.residuals,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "runtime_ms": self.runtime_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "CheckReport":
        rep = cls(d["check_name"], dict(d["params"]), dict(d["residuals"]), float(d["tolerance"]), runtime_ms=int(d["runtime_ms"]))
        if rep.passed != bool(d["pass"]):
            raise ValueError("pass flag inconsistent with residuals and tolerance")
        return rep

    @classmethod
    def from_json(cls, text: str) -> "CheckReport":
        return cls.from_dict(json.loads(text))

    def sort_key(self):
        return self.check_name, json.dumps(self.params, sort_keys=True)


class _Collector:
    """Time checks and gather reports, honouring a tolerance override."""

    def __init__(self, tol: Optional[float]):
        self.tol = tol
        self.reports: List[CheckReport] = []

    def run(self, name: str, params: dict, tolerance: float, fn: Callable[[], Dict[str, float]]):
        t0 = time.perf_counter()
        residuals = fn()
        ms = int(round(1000 * (time.perf_counter() - t0)))
        tol = tolerance if self.tol is None else self.tol
        self.reports.append(CheckReport(name, params, residuals, tol, runtime_ms=ms))


# -- suites -----------------------------------------------------------------

def _suite_selftest(col, p):
    ns = [p["n"]] if p.get("n") is not None else list(range(3, 9))
    for n in ns:
        frame = make_model_frame(n, True)
        flat = make_model_frame(n, False)
        for c in (-4.0, 0.0, 4.0):
            spec = AmbientSpec.csf(flat, c)
            col.run("curvature-selftest", {"ambient": "csf", "c": c, "n": n, "seed": p["seed"]}, 1e-12,
                    lambda s=spec: _selftest_residuals(s, p["seed"]))
        for eps in (1, -1):
            spec = AmbientSpec.quadric(frame, eps)
            col.run("curvature-selftest", {"ambient": "quadric", "eps": eps, "n": n, "seed": p["seed"]}, 1e-12,
                    lambda s=spec: _selftest_residuals(s, p["seed"]))


def _selftest_residuals(spec, seed):
    rep = curvature_selftest(spec, trials=1000, seed=seed)
    return {
        "pair_symmetry": rep.residual_pair_symmetry,
        "bianchi": rep.residual_bianchi,
        "kahler_invariance": rep.residual_kahler_invariance,
        "skew": rep.residual_skew,
    }


def _suite_einstein(col, p):
    ns = [p["n"]] if p.get("n") is not None else list(range(3, 9))
    for n in ns:
        frame = make_model_frame(n, True)
        flat = make_model_frame(n, False)
        cases = [("quadric", AmbientSpec.quadric(frame, e), 2 * n * e, {"eps": e}) for e in (1, -1)]
        cases += [("csf", AmbientSpec.csf(flat, c), (n + 1) * c / 2, {"c": c}) for c in (-4.0, 0.0, 4.0)]
        for kind, spec, value, extra in cases:
            col.run("einstein", {"ambient": kind, "n": n, **extra}, 1e-12,
                    lambda s=spec, v=value: {"ricci": float(np.abs(ricci_operator(s) - v * np.eye(s.frame.dim)).max())})


def _profile_checks(col, prof: PrincipalProfile, name: str, params: dict):
    cs, sd = profile_shape_operator(prof)
    spec = prof.ambient

    def identities():
        tr = cc.trace_identities(cs, sd, spec)
        out = {
            "contact_defect": cc.contact_defect(cs, sd),
            "pairing": cc.pairing_check(cs, sd),
            "trace_mean_curvature": tr.mean_curvature,
            "trace_squared_norm": tr.squared_norm,
        }
        if prof.label == "theorem2-case2":
            out["trace_value"] = abs(np.trace(sd.S) - prof.n * math.sqrt(2))
        return out

    def exact():
        kind = classify_normal(spec.frame, cs.N).kind
        return {
            "alpha_rho": abs(sd.alpha * sd.rho + spec.eps),
            "hopf": cc.hopf_data(cs, sd)[1],
            "asquared": cc.asquared_residual(cs, sd, spec),
            "not_a_principal": 0.0 if kind is NormalKind.A_PRINCIPAL else 1.0,
        }

    def jacobi():
        values = prof.principal_curvatures()
        got = weingarten_curvatures(prof)
        return {f"weingarten_{k}": abs(got[k] - values[k]) / max(1.0, abs(values[k])) for k in values}

    col.run(f"{name}.identities", params, 1e-10, identities)
    col.run(f"{name}.exact", params, 1e-12, exact)
    col.run(f"{name}.jacobi", params, 1e-10, jacobi)


def _rk4_agreement(prof: PrincipalProfile):
    # closed form vs RK4 for every Jacobi field underlying the profile
    _, dirs = core_model(prof)
    worst = 0.0
    for _, kappa, s0 in dirs:
        f0, f0p = (0.0, 1.0) if s0 is None else (1.0, -s0)
        a = jacobi_solution(kappa, f0, f0p, prof.r)
        b = jacobi_ode_oracle(kappa, f0, f0p, prof.r)
        worst = max(worst, abs(a[0] - b[0]), abs(a[1] - b[1]))
    return {"rk4": worst}


def _suite_theorem1(col, p):
    ns = [p["n"]] if p.get("n") is not None else [3, 4, 5]
    radii = [p["r"]] if p.get("r") is not None else list(np.linspace(0.05, FOCAL_RADIUS_QN - 0.05, 20))
    for n in ns:
        for r in radii:
            prof = tube_profile_theorem1(n, float(r))
            params = {"n": n, "r": float(r)}
            _profile_checks(col, prof, "theorem1", params)
            col.run("theorem1.rk4", params, 1e-8, lambda pr=prof: _rk4_agreement(pr))


def _suite_theorem2(col, p):
    ns = [p["n"]] if p.get("n") is not None else [3, 4]
    cases = [p["case"]] if p.get("case") is not None else [1, 2, 3]
    radii = [p["r"]] if p.get("r") is not None else [0.5, 1.0, 2.0]
    for case in cases:
        for n in ns:
            for r in ([None] if case == 2 else radii):
                prof = tube_profile_theorem2(case, n, r)
                params = {"n": n, "case": case}
                if r is not None:
                    params["r"] = float(r)
                _profile_checks(col, prof, "theorem2", params)
                if r is not None:
                    col.run("theorem2.rk4", params, 1e-8, lambda pr=prof: _rk4_agreement(pr))


def _suite_singular(col, p):
    n = p["n"] if p.get("n") is not None else 3
    grid = p["grid"] if p.get("grid") is not None else 100
    if grid < 2:
        raise ParameterError(f"grid must be >= 2, got {grid}")
    frame = make_model_frame(n, True)
    spec = AmbientSpec.quadric(frame, 1)

    def sweep():
        # random orthonormal Z1, Z2 in V(A)
        rng = np.random.default_rng(p["seed"])
        Q, _ = np.linalg.qr(rng.standard_normal((n, 2)))
        Z1 = frame.V @ Q[:, 0]
        Z2 = frame.V @ Q[:, 1]
        ts = np.linspace(0.0, np.pi / 4, grid)
        err = 0.0
        wrong = 0
        for k, t in enumerate(ts):
            N = normal_at_angle(frame, t, Z1, Z2)
            N = N / np.linalg.norm(N)
            err = max(err, abs(jn_eigen_defect(spec, N) - abs(np.sin(4 * t))))
            kind = classify_normal(frame, N, tol_t=1e-8).kind
            expected = NormalKind.A_PRINCIPAL if k == 0 else NormalKind.A_ISOTROPIC if k == grid - 1 else NormalKind.GENERIC
            wrong += kind is not expected
        return {"defect_vs_sin4t": err, "misclassified": float(wrong)}

    col.run("singular-sweep", {"n": n, "grid": grid, "seed": p["seed"]}, 1e-10, sweep)


def _suite_jacobi(col, p):
    grid = p["grid"] if p.get("grid") is not None else 100

    def run():
        rng = np.random.default_rng(p["seed"])
        worst = 0.0
        for _ in range(grid):
            kappa = rng.uniform(-4, 4)
            f0, f0p = rng.uniform(-1, 1, 2)
            r = rng.uniform(0, 3) or 3.0
            a = jacobi_solution(kappa, f0, f0p, r)
            b = jacobi_ode_oracle(kappa, f0, f0p, r, step=1e-4)
            worst = max(worst, abs(a[0] - b[0]), abs(a[1] - b[1]))
        return {"closed_form_vs_rk4": worst}

    col.run("jacobi-oracle", {"grid": grid, "seed": p["seed"]}, 1e-8, run)


def _suite_sphere(col, p):
    n = p["n"] if p.get("n") is not None else 3
    r = p["r"] if p.get("r") is not None else 2.0
    h = p["h"] if p.get("h") is not None else 1e-3
    params = {"n": n, "r": r, "h": h}
    coarse = sphere_check(n, r, h)
    for key, bound in SPHERE_BOUNDS.items():
        col.run(f"sphere.{key}", params, bound, lambda k=key: {k: coarse.residuals[k]})

    def convergence():
        fine = sphere_check(n, r, h / 2).residuals
        return {f"inverse_ratio_{k}": fine[k] / coarse.residuals[k] for k in CONVERGENCE_KEYS}

    # halving h must shrink every residual by at least 3.5x
    col.run("sphere.convergence", params, 1 / 3.5, convergence)


def _suite_c2(col, p):
    r = p["r"] if p.get("r") is not None else 0.5
    h = p["h"] if p.get("h") is not None else 1e-3
    params = {"r": r, "h": h, "curve": "z^2/2"}
    check = c2_tube_check(quadratic_curve(), r, h)
    theta0 = float(quadratic_curve().theta(0.0))
    target = sorted([1 / (theta0 - r), -1 / (theta0 + r)], reverse=True)

    col.run("c2-tube.centre_curvatures", params, 1e-4,
            lambda: {"centre_curvatures": max(abs(a - b) for a, b in zip(check.extras["centre_curvatures"], target))})
    col.run("c2-tube.patch", params, 1e-4, lambda: {
        "principal_curvatures": check.residuals["principal_curvatures"],
        "contact_defect": check.residuals["contact_defect"],
    })
    # passes iff rho varies by more than 0.01 over the patch
    col.run("c2-tube.rho_variation", params, 1.0,
            lambda: {"inverse_variation_over_0.01": 0.01 / check.extras["rho_variation"]})
    col.run("c2-tube.dim2_contact", params, 0.5, lambda: {"failures": check.residuals["not_dim2_contact"]})


def _suite_focal(col, p):
    n = p["n"] if p.get("n") is not None else 3
    Qn = AmbientSpec.quadric(make_model_frame(n, True), 1)
    Qd = AmbientSpec.quadric(make_model_frame(n, True), -1)

    def sphere_core():
        roots = focal_distances(Qn, sphere_core_data(), 2.0)
        return {"first_focal_error": abs(roots[0] - FOCAL_RADIUS_QN) if roots else math.inf}

    col.run("focal.sphere-core", {"n": n}, 1e-10, sphere_core)
    col.run("focal.dual-core", {"n": n, "r_max": 10.0}, 0.5,
            lambda: {"focal_count": float(len(focal_distances(Qd, dual_complex_core_data(), 10.0)))})


_RUNNERS = {
    "curvature-selftest": _suite_selftest,
    "einstein": _suite_einstein,
    "theorem1": _suite_theorem1,
    "theorem2": _suite_theorem2,
    "singular-sweep": _suite_singular,
    "jacobi-oracle": _suite_jacobi,
    "sphere": _suite_sphere,
    "c2-tube": _suite_c2,
    "focal": _suite_focal,
}


def run_suite(name: str, params: Optional[dict] = None) -> List[CheckReport]:
    """Run a suite and return its reports in canonical order.

    ``params`` may hold ``n, r, case, h, grid, seed, tol``; missing keys use
    each suite's default grid.

    Raises
    ------
    KeyError
        For an unknown suite name.
    GeometryError
        For parameters outside a suite's domain.
    """
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    p = {"seed": 0, **{k: v for k, v in (params or {}).items() if v is not None}}
    if p.get("h") is not None and not p["h"] > 0:
        raise ParameterError(f"h must be positive, got {p['h']}")
    col = _Collector(p.get("tol"))
    for suite in (list(_RUNNERS) if name == "all" else [name]):
        _RUNNERS[suite](col, p)
    return sorted(col.reports, key=CheckReport.sort_key)


def emit(reports: List[CheckReport], fmt: str = "json") -> str:
    if fmt == "json":
        return "".join(rep.to_json() + "\n" for rep in reports)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for rep in reports:
        row = rep.to_dict()
        row["params"] = json.dumps(row["params"], sort_keys=True)
        row["residuals"] = json.dumps(row["residuals"], sort_keys=True)
        w.writerow(row)
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="verify", description="Run geometric verification suites.")
    ap.add_argument("suite", choices=SUITES)
    ap.add_argument("--n", type=int)
    ap.add_argument("--r", type=float)
    ap.add_argument("--case", type=int, choices=(1, 2, 3))
    ap.add_argument("--h", type=float)
    ap.add_argument("--grid", type=int)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--tol", type=float)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)  # exits with 2 on usage errors
    params = {k: getattr(args, k) for k in ("n", "r", "case", "h", "grid", "seed", "tol")}
    try:
        reports = run_suite(args.suite, params)
    except GeometryError as exc:
        print(f"verify: parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    sys.stdout.write(emit(reports, args.format))
    return EXIT_PASS if all(rep.passed for rep in reports) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
