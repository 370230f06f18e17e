"""Contact hypersurfaces of the quadric and its dual realized at one point.

Each hypersurface is homogeneous, so a single tangent-space model carries all
of its invariants.  The normal is ``N = e_1`` (A-principal), the Reeb vector
is ``xi = -JN`` and the principal curvature spaces are

    R JN              -> alpha
    JV(A) cap C       -> lambda = 0
    V(A) cap C        -> mu = 2 rho

Jacobi fields along normal geodesics split along eigenvectors of the normal
Jacobi operator, so every check reduces to the scalar equation
``f'' + kappa f = 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect

from .contact_core import ContactStructure, ShapeData, induce_contact_structure, make_shape_data
from .curvature import normal_jacobi_operator
from .errors import FocalRangeError, InvalidDimensionError, ParameterError
from .model_frame import AmbientSpec, make_model_frame

SQRT2 = math.sqrt(2.0)
#: First focal distance of a real form S^n in Q^n.
FOCAL_RADIUS_QN = math.pi / (2.0 * SQRT2)
PROFILE_TOL = 1e-12
BRACKET_WIDTH = 1e-3
ROOT_XTOL = 1e-12


def jacobi_solution(kappa: float, f0: float, f0p: float, r: float) -> Tuple[float, float]:
    """Closed-form solution of ``f'' + kappa f = 0`` at ``r``; returns ``(f, f')``."""
    if kappa > 0:
        w = math.sqrt(kappa)
        c, s = math.cos(w * r), math.sin(w * r)
        return f0 * c + f0p * s / w, -f0 * w * s + f0p * c
    if kappa < 0:
        w = math.sqrt(-kappa)
        x = w * r
        if abs(x) < 0.5:
            c, s = math.cosh(x), math.sinh(x)
            sw = r if x == 0 else s / w
            return f0 * c + f0p * sw, f0 * w * s + f0p * c
        # growing and decaying modes separately; avoids cosh - sinh cancellation
        a, b = 0.5 * (f0 + f0p / w), 0.5 * (f0 - f0p / w)
        up, down = math.exp(x), math.exp(-x)
        return a * up + b * down, w * (a * up - b * down)
    return f0 + f0p * r, f0p


def jacobi_ode_oracle(kappa: float, f0: float, f0p: float, r: float, step: float = 1e-4) -> Tuple[float, float]:
    """Classical RK4 integration of ``f'' = -kappa f`` from 0 to ``r``.

    Uses ``ceil(|r|/step)`` equal steps so the last step lands on ``r``.
    """
    if step <= 0:
        raise ParameterError(f"step must be positive, got {step}")
    nsteps = max(1, math.ceil(abs(r) / step))
    dt = r / nsteps
    half = 0.5 * dt
    f, g = float(f0), float(f0p)  # g = f'
    cf = cg = 0.0  # compensated (Kahan) summation of the increments
    for _ in range(nsteps):
        k1f, k1g = g, -kappa * f
        k2f, k2g = g + half * k1g, -kappa * (f + half * k1f)
        k3f, k3g = g + half * k2g, -kappa * (f + half * k2f)
        k4f, k4g = g + dt * k3g, -kappa * (f + dt * k3f)
        df = dt / 6.0 * (k1f + 2 * k2f + 2 * k3f + k4f) - cf
        dg = dt / 6.0 * (k1g + 2 * k2g + 2 * k3g + k4g) - cg
        tf, tg = f + df, g + dg
        cf, cg = (tf - f) - df, (tg - g) - dg
        f, g = tf, tg
    return f, g


@dataclass(frozen=True, eq=False)
class PrincipalProfile:
    """Shape-operator spectrum of a contact hypersurface with A-principal normal."""

    ambient: AmbientSpec
    n: int
    r: Optional[float]
    alpha: float
    lam: float
    mu: float
    rho: float
    label: str

    def __post_init__(self):
        eps = self.ambient.eps
        if abs(self.mu - 2 * self.rho) > PROFILE_TOL * max(1.0, abs(self.mu)):
            raise ParameterError("profile violates mu = 2 rho")
        if abs(self.alpha * self.rho + eps) > PROFILE_TOL:
            raise ParameterError("profile violates alpha * rho = -eps")

    @property
    def eps(self) -> int:
        return self.ambient.eps

    def multiplicities(self) -> Dict[str, int]:
        return {"alpha": 1, "lambda": self.n - 1, "mu": self.n - 1}

    def principal_curvatures(self) -> Dict[str, float]:
        return {"alpha": self.alpha, "lambda": self.lam, "mu": self.mu}

    def mean_curvature(self) -> float:
        return self.alpha + (self.n - 1) * (self.lam + self.mu)

    def eigenspaces(self) -> Dict[str, np.ndarray]:
        """Columns spanning R JN, JV(A) cap C and V(A) cap C."""
        F = self.ambient.frame
        return {
            "alpha": (F.J @ F.e(0))[:, None],
            "lambda": F.JV[:, 1:],
            "mu": F.V[:, 1:],
        }


def _quadric(n: int, eps: int) -> AmbientSpec:
    if n < 3:
        raise InvalidDimensionError(f"quadric classification needs n >= 3, got {n}")
    return AmbientSpec.quadric(make_model_frame(n, True), eps)


def tube_profile_theorem1(n: int, r: float) -> PrincipalProfile:
    """Contact tube in Q^n with ``rho = tan(sqrt2 r)/sqrt2``.

    Raises
    ------
    FocalRangeError
        Unless ``0 < r < pi/(2 sqrt2)``.
    """
    if not 0.0 < r < FOCAL_RADIUS_QN:
        raise FocalRangeError(f"radius {r} outside (0, pi/(2 sqrt2))")
    spec = _quadric(n, +1)
    t = math.tan(SQRT2 * r)
    return PrincipalProfile(
        ambient=spec,
        n=n,
        r=float(r),
        alpha=-SQRT2 / t,
        lam=0.0,
        mu=SQRT2 * t,
        rho=t / SQRT2,
        label="theorem1",
    )


def tube_profile_theorem2(case: int, n: int, r: Optional[float] = None) -> PrincipalProfile:
    """Contact hypersurfaces of Q^n*.

    ``case`` 1: tube around Q^{n-1}*; 2: horosphere (``r`` ignored);
    3: tube around the real form RH^n.
    """
    if case not in (1, 2, 3):
        raise ParameterError(f"case must be 1, 2 or 3, got {case}")
    spec = _quadric(n, -1)
    if case == 2:
        return PrincipalProfile(
            ambient=spec, n=n, r=None, alpha=SQRT2, lam=0.0, mu=SQRT2,
            rho=1 / SQRT2, label="theorem2-case2",
        )
    if r is None or not r > 0:
        raise ParameterError(f"radius must be positive, got {r}")
    th = math.tanh(SQRT2 * r)
    if case == 1:
        alpha, mu = SQRT2 / th, SQRT2 * th
    else:
        alpha, mu = SQRT2 * th, SQRT2 / th
    return PrincipalProfile(
        ambient=spec, n=n, r=float(r), alpha=alpha, lam=0.0, mu=mu,
        rho=mu / 2, label=f"theorem2-case{case}",
    )


def profile_shape_operator(p: PrincipalProfile) -> Tuple[ContactStructure, ShapeData]:
    """Assemble ``S`` on the model tangent space with ``N = e_1``."""
    F = p.ambient.frame
    cs = induce_contact_structure(F, F.e(0))
    S = p.alpha * np.outer(cs.xi, cs.xi)
    spaces = p.eigenspaces()
    for key, value in (("lambda", p.lam), ("mu", p.mu)):
        B = spaces[key]
        S = S + value * (B @ B.T)
    return cs, make_shape_data(cs, S, rho=p.rho)


# Jacobi-field reconstruction from the focal/core geometry.
#
# Each eigendirection is described by (label, kappa, s0) where s0 is the
# core shape-operator eigenvalue for directions tangent to the core and None
# for directions normal to it.  The tube curvature with respect to the
# outward normal is -f'(r)/f(r); ``sign`` converts to the profile normal.

def core_model(p: PrincipalProfile):
    if p.label == "theorem1":
        # totally geodesic Q^{n-1} at distance r along -N
        return +1, [("alpha", 2.0, None), ("mu", 2.0, 0.0), ("lambda", 0.0, 0.0)]
    if p.label == "theorem2-case1":
        # totally geodesic Q^{n-1}* at distance r along N
        return -1, [("alpha", -2.0, None), ("mu", -2.0, 0.0), ("lambda", 0.0, 0.0)]
    if p.label == "theorem2-case3":
        # real form RH^n at distance r along N
        return -1, [("alpha", -2.0, 0.0), ("mu", -2.0, None), ("lambda", 0.0, 0.0)]
    raise ParameterError(f"no core model for {p.label}")


def tube_curvature(kappa: float, r: float, s0: Optional[float] = None) -> float:
    """Principal curvature (outward normal) of a tube of radius ``r``.

    ``s0`` is the core principal curvature for a core-tangent direction;
    ``None`` marks a direction normal to the core.
    """
    if s0 is None:
        f, fp = jacobi_solution(kappa, 0.0, 1.0, r)
    else:
        f, fp = jacobi_solution(kappa, 1.0, -s0, r)
    return -fp / f


def weingarten_curvatures(p: PrincipalProfile, s: float = 1.0) -> Dict[str, float]:
    """Principal curvatures of ``p`` recomputed from Jacobi fields.

    Tubes use their core; the horosphere, which has no core, is checked
    through its equidistant hypersurface at distance ``s`` along ``N``.
    """
    if p.label == "theorem2-case2":
        out = {}
        for key, value in p.principal_curvatures().items():
            kappa = -2.0 if key in ("alpha", "mu") else 0.0
            f, fp = jacobi_solution(kappa, 1.0, -value, s)
            out[key] = -fp / f
        return out
    sign, dirs = core_model(p)
    return {key: sign * tube_curvature(kappa, p.r, s0) for key, kappa, s0 in dirs}


def _normal_jacobi_spectrum(ambient: AmbientSpec) -> np.ndarray:
    F = ambient.frame
    return np.linalg.eigvalsh(normal_jacobi_operator(ambient, F.e(0)))


def focal_distances(
    ambient: AmbientSpec,
    core_principal_data: Sequence[Tuple[float, float]],
    r_max: float,
) -> List[float]:
    """Zeros in ``(0, r_max]`` of the core Jacobi fields ``f(0)=1, f'(0)=-s0``.

    Each ``kappa`` must be an eigenvalue of the normal Jacobi operator of
    ``ambient`` at an A-principal (quadric) or arbitrary (CSF) unit normal.
    Zeros are bracketed on a 1e-3 grid and refined by bisection.
    """
    if not r_max > 0:
        raise ParameterError(f"r_max must be positive, got {r_max}")
    spectrum = _normal_jacobi_spectrum(ambient)
    roots: List[float] = []
    nodes = np.arange(1, math.ceil(r_max / BRACKET_WIDTH) + 1) * BRACKET_WIDTH
    nodes[-1] = r_max
    for kappa, s0 in core_principal_data:
        if np.min(np.abs(spectrum - kappa)) > 1e-9:
            raise ParameterError(f"kappa={kappa} is not a normal Jacobi eigenvalue of {ambient.describe()}")
        f = lambda x, k=kappa, s=s0: jacobi_solution(k, 1.0, -s, x)[0]  # noqa: E731
        vals = np.array([f(x) for x in nodes])
        prev_x, prev_v = 0.0, 1.0
        for x, v in zip(nodes, vals):
            if v == 0.0:
                roots.append(float(x))
            elif prev_v != 0.0 and np.sign(v) != np.sign(prev_v):
                roots.append(float(bisect(f, prev_x, x, xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps)))
            prev_x, prev_v = x, v
    roots.sort()
    merged: List[float] = []
    for x in roots:
        if not merged or x - merged[-1] > 1e-9:
            merged.append(x)
    return merged


def sphere_core_data() -> List[Tuple[float, float]]:
    """Core-tangent directions of a real form S^n in Q^n (totally geodesic)."""
    return [(2.0, 0.0), (0.0, 0.0)]


def dual_complex_core_data() -> List[Tuple[float, float]]:
    """Core-tangent directions of a totally geodesic Q^{n-1}* in Q^n*."""
    return [(-2.0, 0.0), (0.0, 0.0)]
