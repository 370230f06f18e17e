"""Almost contact metric structure on a hypersurface tangent space.

Operators on ``T_pM = N^perp`` are stored as ambient ``2n x 2n`` matrices
that annihilate ``N`` and take values in ``N^perp``.  The shape operator
follows ``S X = -(ambient derivative of N along X)``, so a round sphere with
outward normal has ``S = -(1/r) Id``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

import numpy as np

from .curvature import curvature, ricci_operator
from .errors import (
    InvalidDimensionError,
    NormalizationError,
    ParameterError,
    PreconditionError,
)
from .model_frame import AmbientSpec, ModelFrame, orthonormal_complement

UNIT_TOL = 1e-12
SYMMETRY_TOL = 1e-10
EIGEN_MERGE_TOL = 1e-9
PAIRING_PRECONDITION = 1e-8
HOPF_TOL = 1e-8
DIM2_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ContactStructure:
    frame: ModelFrame
    N: np.ndarray
    xi: np.ndarray
    phi: np.ndarray
    omega: np.ndarray  # omega(X, Y) = X @ omega @ Y
    tangent_basis: np.ndarray  # columns: xi, then an orthonormal basis of C
    projector: np.ndarray  # orthogonal projection onto T_pM

    @property
    def contact_basis(self) -> np.ndarray:
        return self.tangent_basis[:, 1:]

    @property
    def contact_projector(self) -> np.ndarray:
        C = self.contact_basis
        return C @ C.T

    def eta(self, X) -> float:
        return float(np.dot(X, self.xi))

    def restrict(self, M: np.ndarray) -> np.ndarray:
        """``M`` sandwiched between tangent projections."""
        return self.projector @ M @ self.projector


def induce_contact_structure(frame: ModelFrame, N) -> ContactStructure:
    """Structure (phi, xi, eta, omega) induced by the unit normal ``N``."""
    N = np.asarray(N, dtype=float)
    if abs(np.linalg.norm(N) - 1.0) > UNIT_TOL:
        raise NormalizationError(f"|N| = {np.linalg.norm(N)!r} is not 1")
    J = frame.J
    xi = -(J @ N)
    P = np.eye(frame.dim) - np.outer(N, N)
    phi = P @ J @ P
    C = orthonormal_complement(frame, [N, J @ N])
    basis = np.column_stack([xi, C])
    return ContactStructure(
        frame=frame, N=N, xi=xi, phi=phi, omega=phi.T.copy(), tangent_basis=basis, projector=P
    )


@dataclass(frozen=True, eq=False)
class ShapeData:
    S: np.ndarray
    rho: float
    alpha: float


def make_shape_data(cs: ContactStructure, S, rho: Optional[float] = None) -> ShapeData:
    """Wrap a shape operator; ``rho`` defaults to the trace-identity value."""
    S = cs.restrict(np.asarray(S, dtype=float))
    asym = np.abs(S - S.T).max()
    if asym > SYMMETRY_TOL:
        raise ParameterError(f"shape operator not symmetric (|S - S^T| = {asym:.2e})")
    S = 0.5 * (S + S.T)
    alpha = float(cs.xi @ S @ cs.xi)
    if rho is None:
        rho = (np.trace(S) - alpha) / (2 * (cs.frame.n - 1))
    return ShapeData(S=S, rho=float(rho), alpha=alpha)


def _opnorm(M) -> float:
    return float(np.linalg.norm(M, 2))


def contact_defect(cs: ContactStructure, sd: ShapeData) -> float:
    """Operator norm of ``S phi + phi S - 2 rho phi`` on T_pM."""
    M = sd.S @ cs.phi + cs.phi @ sd.S - 2.0 * sd.rho * cs.phi
    return _opnorm(cs.restrict(M))


def hopf_data(cs: ContactStructure, sd: ShapeData) -> Tuple[float, float]:
    """Return ``(alpha, |S xi - alpha xi|)``."""
    Sxi = sd.S @ cs.xi
    alpha = float(Sxi @ cs.xi)
    return alpha, float(np.linalg.norm(Sxi - alpha * cs.xi))


def contact_rho(sd: ShapeData, n: int) -> float:
    """The ``rho`` forced by ``tr S = alpha + 2(n-1) rho``."""
    if n < 2:
        raise InvalidDimensionError(f"n must be >= 2, got {n}")
    return float((np.trace(sd.S) - sd.alpha) / (2 * (n - 1)))


def contact_eigenpairs(cs: ContactStructure, sd: ShapeData):
    """Eigenvalues and ambient eigenvectors (columns) of S compressed to C."""
    C = cs.contact_basis
    w, v = np.linalg.eigh(C.T @ sd.S @ C)
    return w, C @ v


def contact_eigenspaces(cs: ContactStructure, sd: ShapeData, tol: float = EIGEN_MERGE_TOL) -> List[Tuple[float, np.ndarray]]:
    """Group eigenvalues on C within ``tol`` into eigenspaces.

    Returns a list of ``(eigenvalue, basis columns)`` sorted by eigenvalue.
    """
    w, V = contact_eigenpairs(cs, sd)
    groups: List[List[int]] = []
    for i in range(len(w)):
        if groups and w[i] - w[groups[-1][-1]] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return [(float(np.mean(w[g])), V[:, g]) for g in groups]


def pairing_check(cs: ContactStructure, sd: ShapeData) -> float:
    """Max of ``|S phi X - (2 rho - lambda) phi X|`` over eigenpairs on C."""
    defect = contact_defect(cs, sd)
    if defect >= PAIRING_PRECONDITION:
        raise PreconditionError(f"pairing needs contact data (defect {defect:.2e})")
    w, V = contact_eigenpairs(cs, sd)
    worst = 0.0
    for lam, X in zip(w, V.T):
        pX = cs.phi @ X
        worst = max(worst, float(np.linalg.norm(sd.S @ pX - (2 * sd.rho - lam) * pX)))
    return worst


def asquared_residual(cs: ContactStructure, sd: ShapeData, spec: AmbientSpec) -> float:
    """Max over a basis of C of ``|2(S^2 - 2 rho S + alpha rho)X - (R(JN,N)JX)_C|``."""
    N, J = cs.N, cs.frame.J
    C = cs.contact_basis
    PC = cs.contact_projector
    S = sd.S
    worst = 0.0
    for X in C.T:
        lhs = 2.0 * (S @ (S @ X) - 2 * sd.rho * (S @ X) + sd.alpha * sd.rho * X)
        rhs = PC @ curvature(spec, J @ N, N, J @ X)
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst


@dataclass(frozen=True)
class TraceResiduals:
    mean_curvature: float  # |tr S - alpha - 2(n-1) rho|
    squared_norm: float  # |tr S^2 - (...)|

    def max(self) -> float:
        return max(self.mean_curvature, self.squared_norm)


def trace_identities(cs: ContactStructure, sd: ShapeData, spec: AmbientSpec, n: Optional[int] = None) -> TraceResiduals:
    n = cs.frame.n if n is None else n
    N, J = cs.N, cs.frame.J
    S = sd.S
    a, rho = sd.alpha, sd.rho
    r1 = abs(np.trace(S) - a - 2 * (n - 1) * rho)
    ric_NN = N @ ricci_operator(spec) @ N
    jn_term = curvature(spec, J @ N, N, N) @ (J @ N)
    expected = a * a + 2 * (n - 1) * rho * (2 * rho - a) - ric_NN + jn_term
    r2 = abs(np.trace(S @ S) - expected)
    return TraceResiduals(float(r1), float(r2))


def dim2_contact_check(
    cs: ContactStructure, sd: ShapeData, hopf_tol: float = HOPF_TOL, tol: float = DIM2_TOL
) -> bool:
    """Pointwise test of the complex-surface characterization.

    For ``n = 2`` a hypersurface is contact iff it is Hopf and
    ``tr S != alpha``.  A non-Hopf input therefore returns ``False``.
    Finite-difference data should pass a ``hopf_tol`` matched to its
    truncation error.
    """
    if cs.frame.n != 2:
        raise InvalidDimensionError(f"dimension-two test needs n = 2, got n = {cs.frame.n}")
    alpha, hopf = hopf_data(cs, sd)
    if hopf >= hopf_tol:
        return False
    return bool(abs(np.trace(sd.S) - alpha) > tol)


@dataclass(frozen=True)
class ContactVerdict:
    is_contact: bool
    reason: str  # "contact", "rho-zero" or "defect"
    defect: float
    rho: float


def verify_contact(cs: ContactStructure, sd: ShapeData, tol: float = 1e-8, rho_tol: float = 1e-12) -> ContactVerdict:
    """Classify the data as contact or not, without raising.

    A vanishing ``rho`` is reported as ``"rho-zero"``: the contact equation
    requires an everywhere nonzero function.
    """
    defect = contact_defect(cs, sd)
    if abs(sd.rho) <= rho_tol:
        return ContactVerdict(False, "rho-zero", defect, sd.rho)
    if defect >= tol:
        return ContactVerdict(False, "defect", defect, sd.rho)
    return ContactVerdict(True, "contact", defect, sd.rho)


def flip_orientation(cs: ContactStructure, sd: ShapeData) -> Tuple[ContactStructure, ShapeData]:
    """Replace ``N`` by ``-N``: ``xi, S, rho, alpha`` change sign, ``phi`` does not."""
    flipped = replace(cs, N=-cs.N, xi=-cs.xi, tangent_basis=np.column_stack([-cs.xi, cs.contact_basis]))
    return flipped, ShapeData(S=-sd.S, rho=-sd.rho, alpha=-sd.alpha)
