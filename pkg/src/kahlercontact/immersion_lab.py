"""Finite-difference extrinsic geometry of hypersurfaces in flat C^n.

A chart is a map from a box in R^{2n-1} into R^{2n} = C^n (coordinates
ordered ``x_1..x_n, y_1..y_n`` so that ``J`` is multiplication by ``i``).
Everything is second-order central differences:

* tangent frame ``f_i`` from one difference level,
* unit normal as the orthogonal complement of the frame,
* shape operator from differencing the normal and solving
  ``N_i = -sum_k S^k_i f_k`` in the frame,
* exterior derivatives from one more difference level of form components.

All kernels are vectorized over leading axes of the parameter array.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Optional

import numpy as np

from .contact_core import (
    ContactStructure,
    ShapeData,
    contact_defect,
    contact_eigenpairs,
    contact_rho,
    dim2_contact_check,
    induce_contact_structure,
    make_shape_data,
)
from .errors import BoundaryError, ChartSingularityError, FocalRangeError, ParameterError
from .model_frame import AmbientSpec, ModelFrame, make_model_frame

DEFAULT_H = 1e-3
MAX_CONDITION = 1e8
FOCAL_SAFETY = 0.9
#: Hopf tolerance for the n = 2 test on difference data (truncation ~1e-7).
FD_HOPF_TOL = 1e-5
#: Step for differentiating curvature-derived scalars (e.g. tr S).  These
#: already carry two difference levels; a third level at step ``h`` would
#: amplify rounding like ``h**-3``.
DEFAULT_OUTER_STEP = 0.05


@dataclass(frozen=True, eq=False)
class Chart:
    """Evaluable immersion of a parameter box into C^n."""

    name: str
    n: int
    func: Callable[[np.ndarray], np.ndarray]
    lower: np.ndarray
    upper: np.ndarray
    normal_hint: Optional[Callable[[np.ndarray], np.ndarray]] = None
    params: dict = field(default_factory=dict)

    @property
    def pdim(self) -> int:
        return 2 * self.n - 1

    def __call__(self, U) -> np.ndarray:
        return self.func(np.asarray(U, dtype=float))

    def check_domain(self, U) -> None:
        U = np.asarray(U)
        if np.any(U < self.lower) or np.any(U > self.upper):
            raise BoundaryError(f"stencil leaves the domain of chart {self.name!r}")


# -- chart families ---------------------------------------------------------

def _hyperspherical(angles: np.ndarray, r: float) -> np.ndarray:
    d = angles.shape[-1]
    out = np.empty(angles.shape[:-1] + (d + 1,))
    s = np.full(angles.shape[:-1], float(r))
    for k in range(d):
        out[..., k] = s * np.cos(angles[..., k])
        s = s * np.sin(angles[..., k])
    out[..., d] = s
    return out


def sphere_chart(n: int, r: float, warp: float = 0.008, freq: float = 10.0) -> Chart:
    """Hyperspherical chart of S^{2n-1}(r), centred at angles ``pi/2``.

    Each angle is reparametrized as ``u + warp*sin(freq*u)/freq``.  With
    ``warp = 0`` the difference normal is exact to O(h^4) and the shape
    operator is exact up to rounding, which hides the second-order behaviour
    of the scheme; the warp makes the O(h^2) term visible.  The normal hint
    is the outward position vector.
    """
    if r <= 0:
        raise ParameterError(f"sphere radius must be positive, got {r}")
    d = 2 * n - 1

    def func(U):
        ang = np.pi / 2 + U + warp * np.sin(freq * U) / freq
        return _hyperspherical(ang, r)

    return Chart(
        name="sphere",
        n=n,
        func=func,
        lower=np.full(d, -1.2),
        upper=np.full(d, 1.2),
        normal_hint=func,
        params={"r": r, "warp": warp, "freq": freq},
    )


def hyperplane_chart(n: int) -> Chart:
    """The real hyperplane ``y_n = 0``."""
    d = 2 * n - 1

    def func(U):
        return np.concatenate([U, np.zeros(U.shape[:-1] + (1,))], axis=-1)

    return Chart("hyperplane", n, func, np.full(d, -10.0), np.full(d, 10.0))


def cylinder_chart(n: int, r: float) -> Chart:
    """S^1(r) in the ``z_1`` line times R^{2n-2}, outward normal."""
    if r <= 0:
        raise ParameterError(f"cylinder radius must be positive, got {r}")
    d = 2 * n - 1

    def func(U):
        out = np.zeros(U.shape[:-1] + (2 * n,))
        out[..., 0] = r * np.cos(U[..., 0])
        out[..., n] = r * np.sin(U[..., 0])
        rest = [k for k in range(2 * n) if k not in (0, n)]
        out[..., rest] = U[..., 1:]
        return out

    def hint(U):
        out = np.zeros(U.shape[:-1] + (2 * n,))
        out[..., 0] = np.cos(U[..., 0])
        out[..., n] = np.sin(U[..., 0])
        return out

    return Chart("cylinder", n, func, np.full(d, -10.0), np.full(d, 10.0), hint, {"r": r})


@dataclass(frozen=True, eq=False)
class HolomorphicCurve:
    """Graph ``w = F(z)`` in C^2 with its first two derivatives."""

    F: Callable
    dF: Callable
    d2F: Callable
    name: str = "curve"

    def theta(self, z) -> np.ndarray:
        """Reciprocal principal curvature ``(1 + |F'|^2)^{3/2} / |F''|``."""
        z = np.asarray(z, dtype=complex)
        return (1 + np.abs(self.dF(z)) ** 2) ** 1.5 / np.abs(self.d2F(z))


def quadratic_curve() -> HolomorphicCurve:
    return HolomorphicCurve(
        F=lambda z: 0.5 * z * z,
        dF=lambda z: z,
        d2F=lambda z: np.ones_like(z),
        name="z^2/2",
    )


def _c2_to_real(p1, p2):
    return np.stack([p1.real, p2.real, p1.imag, p2.imag], axis=-1)


def holomorphic_tube_chart(curve: HolomorphicCurve, r: float) -> Chart:
    """Tube of radius ``r``: ``(x, y, s) -> c(z) + r e^{is} nu(z)``.

    ``nu`` is the Hermitian unit normal ``(-conj F', 1)/sqrt(1+|F'|^2)``; the
    normal hint ``e^{is} nu`` points away from the curve.
    """
    if r <= 0:
        raise ParameterError(f"tube radius must be positive, got {r}")

    def parts(U):
        z = U[..., 0] + 1j * U[..., 1]
        fp = curve.dF(z)
        scale = 1 / np.sqrt(1 + np.abs(fp) ** 2)
        rot = np.exp(1j * U[..., 2])
        return z, curve.F(z), rot * (-np.conj(fp)) * scale, rot * scale

    def func(U):
        z, w, v1, v2 = parts(U)
        return _c2_to_real(z + r * v1, w + r * v2)

    def hint(U):
        _, _, v1, v2 = parts(U)
        return _c2_to_real(v1, v2)

    return Chart(
        "holomorphic-tube", 2, func,
        np.array([-1.0, -1.0, -20.0]), np.array([1.0, 1.0, 20.0]),
        hint, {"r": r, "curve": curve.name},
    )


# -- difference kernels -----------------------------------------------------

def _stencil(chart: Chart, U: np.ndarray, h: float):
    E = np.eye(chart.pdim)
    P = U[..., None, :] + h * E
    M = U[..., None, :] - h * E
    chart.check_domain(P)
    chart.check_domain(M)
    return P, M


def _partials(chart: Chart, U: np.ndarray, h: float) -> np.ndarray:
    """Tangent frame, shape ``(..., 2n, 2n-1)``."""
    P, M = _stencil(chart, U, h)
    return np.swapaxes((chart(P) - chart(M)) / (2 * h), -1, -2)


def _normals(chart: Chart, U: np.ndarray, h: float, orientation: int):
    F = _partials(chart, U, h)
    Q, sv, _ = np.linalg.svd(F, full_matrices=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = sv[..., 0] / sv[..., -1]
    if np.any(~np.isfinite(cond)) or np.any(cond > MAX_CONDITION):
        raise ChartSingularityError(f"tangent frame of {chart.name!r} is degenerate")
    N = Q[..., :, -1]
    if chart.normal_hint is not None:
        sgn = np.sign(np.einsum("...i,...i", N, chart.normal_hint(U)))
    else:
        sgn = np.sign(np.linalg.det(np.concatenate([F, N[..., None]], axis=-1)))
    return N * (orientation * sgn)[..., None], F


def _shape(chart: Chart, U: np.ndarray, h: float, orientation: int):
    """Normal, frame, metric, shape operator in coordinates and ambient form."""
    N, F = _normals(chart, U, h, orientation)
    P, M = _stencil(chart, U, h)
    Np, _ = _normals(chart, P, h, orientation)
    Nm, _ = _normals(chart, M, h, orientation)
    dN = np.swapaxes((Np - Nm) / (2 * h), -1, -2)
    Ft = np.swapaxes(F, -1, -2)
    G = Ft @ F
    Sc = -np.linalg.solve(G, Ft @ dN)
    pinv = np.linalg.solve(G, Ft)
    return N, F, G, Sc, F @ Sc @ pinv


@dataclass(frozen=True, eq=False)
class PointGeometry:
    u: np.ndarray
    position: np.ndarray
    frame: np.ndarray
    metric: np.ndarray
    normal: np.ndarray
    shape_coords: np.ndarray
    shape_raw: np.ndarray  # ambient, before symmetrization
    contact: ContactStructure

    @property
    def shape(self) -> np.ndarray:
        return 0.5 * (self.shape_raw + self.shape_raw.T)

    @property
    def asymmetry(self) -> float:
        return float(np.abs(self.shape_raw - self.shape_raw.T).max())

    def shape_data(self, rho: Optional[float] = None) -> ShapeData:
        return make_shape_data(self.contact, self.shape, rho)

    def normal_orthogonality(self) -> float:
        return float(np.abs(self.normal @ self.frame).max())


class ImmersedPatch:
    """A chart sampled on a grid, with per-point extrinsic data."""

    def __init__(self, chart: Chart, grid, h: float = DEFAULT_H, orientation: int = 1):
        if not h > 0:
            raise ParameterError(f"difference step must be positive, got {h}")
        if orientation not in (1, -1):
            raise ParameterError("orientation must be +1 or -1")
        self.chart = chart
        self.grid = np.atleast_2d(np.asarray(grid, dtype=float))
        self.h = float(h)
        self.orientation = orientation
        self.frame: ModelFrame = make_model_frame(chart.n, with_real_structure=False)
        self.ambient = AmbientSpec.csf(self.frame, 0.0)

    def __len__(self):
        return len(self.grid)

    @cached_property
    def _arrays(self):
        return _shape(self.chart, self.grid, self.h, self.orientation)

    @cached_property
    def points(self):
        N, F, G, Sc, S = self._arrays
        X = self.chart(self.grid)
        return [
            PointGeometry(
                u=self.grid[i], position=X[i], frame=F[i], metric=G[i], normal=N[i],
                shape_coords=Sc[i], shape_raw=S[i],
                contact=induce_contact_structure(self.frame, N[i]),
            )
            for i in range(len(self.grid))
        ]

    def shape_data(self, rho=None):
        """ShapeData per point; ``rho`` may be a scalar, an array or None."""
        rhos = np.broadcast_to(np.array(rho, dtype=object), (len(self),))
        return [p.shape_data(None if r is None else float(r)) for p, r in zip(self.points, rhos)]

    def rho_field(self) -> np.ndarray:
        """Pointwise ``rho`` recovered from the trace identity."""
        return np.array([contact_rho(sd, self.chart.n) for sd in self.shape_data()])

    def mean_curvature(self, U=None) -> np.ndarray:
        U = self.grid if U is None else U
        Sc = _shape(self.chart, U, self.h, self.orientation)[3]
        return np.trace(Sc, axis1=-2, axis2=-1)

    def trace_gradient(self, step: float = DEFAULT_OUTER_STEP) -> np.ndarray:
        """Coordinate gradient of ``tr S`` on the grid (central differences)."""
        P, M = _stencil(self.chart, self.grid, step)
        return (self.mean_curvature(P) - self.mean_curvature(M)) / (2 * step)

    def trace_derivative_on_contact(self, step: float = DEFAULT_OUTER_STEP) -> np.ndarray:
        """``max_X |d(tr S)(X)|`` over an orthonormal basis of C, per point."""
        grad = self.trace_gradient(step)
        out = []
        for g, p in zip(grad, self.points):
            coords = np.linalg.solve(p.metric, p.frame.T @ p.contact.contact_basis)
            out.append(np.abs(g @ coords).max())
        return np.array(out)

    # forms in chart coordinates
    def differential(self, g: Callable[[np.ndarray], np.ndarray]) -> "FormField":
        """Difference one-form ``dg`` of a scalar function on the chart."""
        def comps(U):
            P, M = _stencil(self.chart, U, self.h)
            return (g(P) - g(M)) / (2 * self.h)

        return FormField(1, self.chart, comps)

    def eta_form(self) -> "FormField":
        def comps(U):
            N, F = _normals(self.chart, U, self.h, self.orientation)
            xi = -(N @ self.frame.J.T)
            return np.einsum("...ak,...a->...k", F, xi)

        return FormField(1, self.chart, comps)

    def omega_form(self) -> "FormField":
        J = self.frame.J

        def comps(U):
            F = _partials(self.chart, U, self.h)
            W = np.einsum("...ai,...aj->...ij", J @ F, F)
            return 0.5 * (W - np.swapaxes(W, -1, -2))

        return FormField(2, self.chart, comps)


def extrinsic_geometry(chart: Chart, point, h: float = DEFAULT_H, orientation: int = 1) -> PointGeometry:
    """Finite-difference geometry record at a single chart point."""
    return ImmersedPatch(chart, [point], h, orientation).points[0]


@dataclass(frozen=True, eq=False)
class FormField:
    """Differential form given by its chart components.

    ``components(U)`` returns shape ``(..., d)`` for a one-form and
    ``(..., d, d)`` (antisymmetric) for a two-form, ``d`` the chart dimension.
    """

    degree: int
    chart: Chart
    components: Callable[[np.ndarray], np.ndarray]

    def __call__(self, U) -> np.ndarray:
        return self.components(np.asarray(U, dtype=float))


def _difference(form: FormField, U, h) -> np.ndarray:
    # D[..., i, rest] = d_i of the components
    P, M = _stencil(form.chart, np.asarray(U, dtype=float), h)
    return (form(P) - form(M)) / (2 * h)


def exterior_derivative_oneform(patch: ImmersedPatch, eta_field: FormField, h: Optional[float] = None) -> FormField:
    """``(d eta)_{ij} = d_i eta_j - d_j eta_i``."""
    if eta_field.degree != 1:
        raise ParameterError("expected a one-form")
    h = patch.h if h is None else h

    def comps(U):
        D = _difference(eta_field, U, h)
        return D - np.swapaxes(D, -1, -2)

    return FormField(2, patch.chart, comps)


def exterior_derivative_twoform(patch: ImmersedPatch, omega_field: FormField, h: Optional[float] = None) -> FormField:
    """``(d w)_{ijk} = d_i w_jk + d_j w_ki + d_k w_ij``."""
    if omega_field.degree != 2:
        raise ParameterError("expected a two-form")
    h = patch.h if h is None else h

    def comps(U):
        D = _difference(omega_field, U, h)
        return D + np.einsum("...jki->...ijk", D) + np.einsum("...kij->...ijk", D)

    return FormField(3, patch.chart, comps)


# -- checks -----------------------------------------------------------------

@dataclass
class LabCheck:
    name: str
    params: dict
    residuals: Dict[str, float]
    bounds: Dict[str, float]
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.residuals[k] < b for k, b in self.bounds.items())

    def failures(self) -> Dict[str, float]:
        return {k: self.residuals[k] for k, b in self.bounds.items() if not self.residuals[k] < b}


def pairing_spectrum_defect(cs: ContactStructure, sd: ShapeData) -> float:
    """Distance between the C-spectrum and its image under ``l -> 2 rho - l``."""
    w, _ = contact_eigenpairs(cs, sd)
    return float(np.abs(np.sort(w) - np.sort(2 * sd.rho - w)).max())


def sphere_grid(n: int, spacing: float = np.pi / 10, points_per_axis: int = 3) -> np.ndarray:
    """Tensor grid centred at the chart origin.

    The default spacing puts every sample at a zero of the warp's sine term.
    """
    k = (points_per_axis - 1) / 2
    axis = (np.arange(points_per_axis) - k) * spacing
    return np.array(list(itertools.product(axis, repeat=2 * n - 1)))


SPHERE_BOUNDS = {
    "xi": 1e-8,
    "shape": 1e-5,
    "contact_defect": 1e-5,
    "rho_variation": 1e-6,
    "rho_error": 1e-6,
    "dtrS_contact": 1e-4,
    "d_eta_relative": 1e-5,
    "d_omega": 1e-4,
}


def sphere_check(
    n: int,
    r: float,
    h: float = DEFAULT_H,
    orientation: int = 1,
    outer_step: float = DEFAULT_OUTER_STEP,
    points_per_axis: int = 3,
) -> LabCheck:
    """Sphere S^{2n-1}(r) in C^n against its exact geometry.

    With the outward normal: ``xi = -iz/r``, ``S = -(1/r) Id``,
    ``rho = -1/r`` and ``d eta = -(2/r) omega``.  For the inward normal
    every signed quantity flips.
    """
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}")
    if r <= 0:
        raise ParameterError(f"radius must be positive, got {r}")
    chart = sphere_chart(n, r)
    patch = ImmersedPatch(chart, sphere_grid(n, points_per_axis=points_per_axis), h, orientation)
    J = patch.frame.J
    o = orientation
    rho_exact = -o / r

    xi_err = shape_err = defect = 0.0
    sds = patch.shape_data(rho_exact)
    for p, sd in zip(patch.points, sds):
        xi_err = max(xi_err, np.abs(p.contact.xi - (-o * J @ p.position / r)).max())
        shape_err = max(shape_err, np.linalg.norm(p.contact.restrict(p.shape + (o / r) * np.eye(2 * n)), 2))
        defect = max(defect, contact_defect(p.contact, sd))
    rho = patch.rho_field()

    U = patch.grid
    omega = patch.omega_form()(U)
    d_eta = exterior_derivative_oneform(patch, patch.eta_form())(U)
    ref = 2 * rho_exact * omega
    d_omega = exterior_derivative_twoform(patch, patch.omega_form())(U)

    residuals = {
        "xi": float(xi_err),
        "shape": float(shape_err),
        "contact_defect": float(defect),
        "rho_variation": float(rho.max() - rho.min()),
        "rho_error": float(np.abs(rho - rho_exact).max()),
        "dtrS_contact": float(patch.trace_derivative_on_contact(outer_step).max()),
        "d_eta_relative": float(np.abs(d_eta - ref).max() / np.abs(ref).max()),
        "d_omega": float(np.abs(d_omega).max()),
        "normal_orthogonality": float(max(p.normal_orthogonality() for p in patch.points)),
        "asymmetry": float(max(p.asymmetry for p in patch.points)),
        "pairing": float(max(pairing_spectrum_defect(p.contact, sd) for p, sd in zip(patch.points, patch.shape_data()))),
    }
    bounds = dict(SPHERE_BOUNDS)
    bounds["normal_orthogonality"] = 1e-8
    bounds["asymmetry"] = 10 * h * h
    bounds["pairing"] = 5 * h * h
    extras = {"points": len(patch), "rho_mean": float(rho.mean())}
    if n == 2:
        extras["dim2_contact"] = all(dim2_contact_check(p.contact, sd, hopf_tol=FD_HOPF_TOL) for p, sd in zip(patch.points, patch.shape_data()))
    return LabCheck("sphere", {"n": n, "r": r, "h": h, "orientation": orientation}, residuals, bounds, extras)


#: Residuals whose O(h^2) convergence is asserted by halving ``h``.
CONVERGENCE_KEYS = ("d_eta_relative", "shape", "rho_variation", "d_omega", "dtrS_contact")


def halving_ratios(n: int, r: float, h: float = DEFAULT_H, **kwargs) -> Dict[str, float]:
    """``residual(h) / residual(h/2)`` for the sphere check."""
    coarse = sphere_check(n, r, h, **kwargs).residuals
    fine = sphere_check(n, r, h / 2, **kwargs).residuals
    return {k: coarse[k] / fine[k] if fine[k] > 0 else np.inf for k in CONVERGENCE_KEYS}


def c2_grid(patch_radius: float = 0.3, spacing: float = 0.1, angles: int = 4) -> np.ndarray:
    """Parameter grid ``(x, y, s)`` with ``|x + iy| <= patch_radius``."""
    m = int(round(patch_radius / spacing))
    ax = np.arange(-m, m + 1) * spacing
    zs = [(x, y) for x in ax for y in ax if x * x + y * y <= patch_radius ** 2 + 1e-12]
    ss = 2 * np.pi * np.arange(angles) / angles
    return np.array([(x, y, s) for (x, y) in zs for s in ss])


def c2_tube_check(
    curve: HolomorphicCurve,
    r: float,
    h: float = DEFAULT_H,
    patch_radius: float = 0.3,
    spacing: float = 0.1,
    angles: int = 4,
) -> LabCheck:
    """Tube of radius ``r`` around a holomorphic graph in C^2.

    Expected principal curvatures on C are ``1/(theta - r)`` and
    ``-1/(theta + r)``, so the contact function is ``r/(theta^2 - r^2)``.

    Raises
    ------
    FocalRangeError
        If ``r >= 0.9 * min(theta)`` on the patch.
    """
    grid = c2_grid(patch_radius, spacing, angles)
    z = grid[:, 0] + 1j * grid[:, 1]
    if np.any(np.abs(curve.d2F(z)) == 0):
        raise ParameterError("curve has vanishing second fundamental form on the patch")
    theta = curve.theta(z)
    if r >= FOCAL_SAFETY * theta.min():
        raise FocalRangeError(f"radius {r} too close to focal distance {theta.min():.4g}")
    chart = holomorphic_tube_chart(curve, r)
    patch = ImmersedPatch(chart, grid, h)
    rho_pred = r / (theta ** 2 - r ** 2)

    sds = patch.shape_data(rho_pred)
    defects = np.array([contact_defect(p.contact, sd) for p, sd in zip(patch.points, sds)])
    curv_err = 0.0
    for p, sd, t in zip(patch.points, sds, theta):
        w, _ = contact_eigenpairs(p.contact, sd)
        expected = np.sort([1 / (t - r), -1 / (t + r)])
        curv_err = max(curv_err, np.abs(np.sort(w) - expected).max())
    centre = np.abs(z) < 1e-12
    w0, _ = contact_eigenpairs(patch.points[int(np.argmax(centre))].contact, sds[int(np.argmax(centre))])
    rho_fd = patch.rho_field()
    free = patch.shape_data()
    dim2 = [dim2_contact_check(p.contact, sd, hopf_tol=FD_HOPF_TOL) for p, sd in zip(patch.points, free)]

    residuals = {
        "principal_curvatures": float(curv_err),
        "contact_defect": float(defects.max()),
        "rho_recovery": float(np.abs(rho_fd - rho_pred).max()),
        "pairing": float(max(pairing_spectrum_defect(p.contact, sd) for p, sd in zip(patch.points, free))),
        "not_dim2_contact": float(len(dim2) - sum(dim2)),
    }
    bounds = {
        "principal_curvatures": 1e-4,
        "contact_defect": 1e-4,
        "rho_recovery": 1e-4,
        "pairing": 5 * h * h,
        "not_dim2_contact": 0.5,
    }
    extras = {
        "centre_curvatures": [float(x) for x in np.sort(w0)[::-1]],
        "rho_variation": float(rho_fd.max() - rho_fd.min()),
        "rho_predicted_variation": float(rho_pred.max() - rho_pred.min()),
        "theta_min": float(theta.min()),
        "points": len(patch),
    }
    return LabCheck("c2-tube", {"r": r, "h": h, "curve": curve.name, "patch_radius": patch_radius}, residuals, bounds, extras)
