"""Position of a unit vector relative to the circle of real structures.

Every unit ``N`` can be written ``N = cos(t) Z1 + sin(t) J Z2`` with ``Z1, Z2``
orthonormal in ``V(A_s)`` for a suitable member ``A_s = cos(s)A + sin(s)JA``
and ``t`` in ``[0, pi/4]``.  ``t = 0`` is A-principal, ``t = pi/4``
A-isotropic.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .curvature import curvature
from .errors import NoRealStructureError, NormalizationError, WrongAmbientError
from .model_frame import AmbientSpec, ModelFrame, rotate_real_structure

UNIT_TOL = 1e-12
DEFAULT_TOL_T = 1e-8


@dataclass(frozen=True, eq=False)
class NormalDecomposition:
    A_adapted: np.ndarray
    s: float
    t: float
    Z1: np.ndarray
    Z2: Optional[np.ndarray]
    z2_completed: bool = False  # Z2 chosen arbitrarily because t ~ 0

    def reconstruct(self, J: np.ndarray) -> np.ndarray:
        v = np.cos(self.t) * self.Z1
        if self.Z2 is not None:
            v = v + np.sin(self.t) * (J @ self.Z2)
        return v


class NormalKind(enum.Enum):
    A_PRINCIPAL = "APrincipal"
    A_ISOTROPIC = "AIsotropic"
    GENERIC = "Generic"


@dataclass(frozen=True)
class SingularType:
    kind: NormalKind
    t: float

    @property
    def is_singular(self) -> bool:
        return self.kind is not NormalKind.GENERIC


def _check_unit(N):
    N = np.asarray(N, dtype=float)
    if abs(np.linalg.norm(N) - 1.0) > UNIT_TOL:
        raise NormalizationError(f"|N| = {np.linalg.norm(N)!r} is not 1")
    return N


def _completion(A: np.ndarray, Z1: np.ndarray) -> np.ndarray:
    # deterministic unit vector of V(A) orthogonal to Z1
    P = 0.5 * (np.eye(len(Z1)) + A)
    best = None
    for col in P.T:
        w = col - (col @ Z1) * Z1
        w = w - (w @ Z1) * Z1
        if best is None or np.linalg.norm(w) > np.linalg.norm(best) + 1e-12:
            best = w
    return best / np.linalg.norm(best)


def adapted_decomposition(frame: ModelFrame, N, tol_t: float = DEFAULT_TOL_T) -> NormalDecomposition:
    """Adapted real structure, angle ``t`` and vectors ``Z1, Z2`` for ``N``.

    The adapted member maximizes ``<A_s N, N>`` over the circle, which has the
    closed form ``s = atan2(<JAN, N>, <AN, N>)``.  The angle is taken from
    ``|N + A_s N| = 2 cos t`` and ``|N - A_s N| = 2 sin t``.
    """
    if frame.A is None:
        raise NoRealStructureError("frame carries no real structure")
    N = _check_unit(N)
    J, A = frame.J, frame.A
    a = N @ A @ N
    b = N @ (J @ A) @ N
    s = float(np.arctan2(b, a))
    As = rotate_real_structure(frame, s)
    plus = N + As @ N
    minus = N - As @ N
    t = float(np.arctan2(np.linalg.norm(minus), np.linalg.norm(plus)))
    t = min(max(t, 0.0), np.pi / 4)
    # cos(t) >= 1/sqrt(2) on [0, pi/4], so Z1 is always well defined
    Z1 = plus / np.linalg.norm(plus)
    if t > tol_t:
        Z2 = -(J @ minus)
        Z2 = Z2 / np.linalg.norm(Z2)
        completed = False
    else:
        Z2 = _completion(As, Z1)
        completed = True
    return NormalDecomposition(A_adapted=As, s=s, t=t, Z1=Z1, Z2=Z2, z2_completed=completed)


def normal_angle(frame: ModelFrame, N) -> float:
    """Angle ``t`` in ``[0, pi/4]``; ``cos(2t) = max_s <A_s N, N>``."""
    return adapted_decomposition(frame, N).t


def classify_normal(frame: ModelFrame, N, tol_t: float = DEFAULT_TOL_T) -> SingularType:
    t = adapted_decomposition(frame, N, tol_t).t
    if t < tol_t:
        return SingularType(NormalKind.A_PRINCIPAL, t)
    if abs(t - np.pi / 4) < tol_t:
        return SingularType(NormalKind.A_ISOTROPIC, t)
    return SingularType(NormalKind.GENERIC, t)


def jn_eigen_defect(spec: AmbientSpec, N) -> float:
    """Distance of ``R_N(JN)`` from the line through ``JN``; equals ``|sin 4t|``."""
    if not spec.is_quadric:
        raise WrongAmbientError("singular-normal analysis applies to quadric ambients")
    N = _check_unit(N)
    JN = spec.frame.J @ N
    v = curvature(spec, JN, N, N)
    return float(np.linalg.norm(v - (v @ JN) * JN))


def normal_at_angle(frame: ModelFrame, t: float, Z1=None, Z2=None) -> np.ndarray:
    """``cos(t) Z1 + sin(t) J Z2``; defaults to ``Z1 = e_1``, ``Z2 = e_2``."""
    Z1 = frame.e(0) if Z1 is None else np.asarray(Z1, dtype=float)
    Z2 = frame.e(1) if Z2 is None else np.asarray(Z2, dtype=float)
    return np.cos(t) * Z1 + np.sin(t) * (frame.J @ Z2)
