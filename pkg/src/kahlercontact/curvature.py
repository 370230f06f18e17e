"""Curvature tensors of the Kähler model spaces.

All tensor evaluations broadcast over leading axes: ``X``, ``Y``, ``Z`` may be
arrays of shape ``(..., 2n)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NormalizationError, NoRealStructureError, WrongAmbientError
from .model_frame import AmbientSpec

UNIT_TOL = 1e-12
SELFTEST_TOL = 1e-12


def _g(X, Y):
    return np.sum(X * Y, axis=-1)[..., None]


def _op(M, X):
    # M applied to every vector in the trailing axis
    return X @ M.T


def kahler_part(J, X, Y, Z):
    """g(Y,Z)X - g(X,Z)Y + g(JY,Z)JX - g(JX,Z)JY - 2g(JX,Y)JZ."""
    JX, JY, JZ = _op(J, X), _op(J, Y), _op(J, Z)
    return (
        _g(Y, Z) * X
        - _g(X, Z) * Y
        + _g(JY, Z) * JX
        - _g(JX, Z) * JY
        - 2.0 * _g(JX, Y) * JZ
    )


def real_structure_part(J, A, X, Y, Z):
    """g(AY,Z)AX - g(AX,Z)AY + g(JAY,Z)JAX - g(JAX,Z)JAY."""
    JA = J @ A
    AX, AY = _op(A, X), _op(A, Y)
    JAX, JAY = _op(JA, X), _op(JA, Y)
    return _g(AY, Z) * AX - _g(AX, Z) * AY + _g(JAY, Z) * JAX - _g(JAX, Z) * JAY


def csf_curvature(spec: AmbientSpec, X, Y, Z) -> np.ndarray:
    """R(X,Y)Z for constant holomorphic sectional curvature ``c``."""
    if spec.kind != "csf":
        raise WrongAmbientError(f"csf_curvature called on {spec.describe()}")
    X, Y, Z = (np.asarray(v, dtype=float) for v in (X, Y, Z))
    return 0.25 * spec.c * kahler_part(spec.frame.J, X, Y, Z)


def quadric_curvature(spec: AmbientSpec, X, Y, Z, A: Optional[np.ndarray] = None) -> np.ndarray:
    """R(X,Y)Z on Q^n (``eps=+1``) or Q^n* (``eps=-1``).

    ``A`` may replace the frame's base real structure by any other member of
    the circle; the tensor does not depend on the choice.
    """
    if spec.kind != "quadric":
        raise WrongAmbientError(f"quadric_curvature called on {spec.describe()}")
    if A is None:
        A = spec.frame.A
    if A is None:
        raise NoRealStructureError("quadric curvature needs a real structure")
    J = spec.frame.J
    X, Y, Z = (np.asarray(v, dtype=float) for v in (X, Y, Z))
    return spec.eps * (kahler_part(J, X, Y, Z) + real_structure_part(J, A, X, Y, Z))


def curvature(spec: AmbientSpec, X, Y, Z) -> np.ndarray:
    if spec.is_quadric:
        return quadric_curvature(spec, X, Y, Z)
    return csf_curvature(spec, X, Y, Z)


def normal_jacobi_operator(spec: AmbientSpec, N) -> np.ndarray:
    """Matrix of ``X -> R(X,N)N``; ``N`` must be a unit vector."""
    N = np.asarray(N, dtype=float)
    if abs(np.linalg.norm(N) - 1.0) > UNIT_TOL:
        raise NormalizationError(f"|N| = {np.linalg.norm(N)!r} is not 1")
    E = np.eye(spec.frame.dim)
    cols = curvature(spec, E, np.broadcast_to(N, E.shape), np.broadcast_to(N, E.shape))
    return cols.T


def ricci_operator(spec: AmbientSpec) -> np.ndarray:
    """Ricci operator from the Kähler frame sum ``sum_k R(e_k, Je_k) J X``."""
    F = spec.frame
    dim = F.dim
    E = np.eye(dim)
    JE = E @ F.J.T
    Ric = np.zeros((dim, dim))
    for k in range(F.n):
        ek = np.broadcast_to(F.e(k), E.shape)
        jek = np.broadcast_to(F.je(k), E.shape)
        Ric += curvature(spec, ek, jek, JE).T
    return Ric


@dataclass(frozen=True)
class CurvatureReport:
    residual_pair_symmetry: float
    residual_bianchi: float
    residual_kahler_invariance: float
    residual_skew: float
    trials: int

    @property
    def max_residual(self) -> float:
        return max(
            self.residual_pair_symmetry,
            self.residual_bianchi,
            self.residual_kahler_invariance,
            self.residual_skew,
        )

    @property
    def passed(self) -> bool:
        return self.max_residual < SELFTEST_TOL


def identity_residuals(spec: AmbientSpec, X, Y, Z, W):
    """Residuals of the four classical identities for (batched) quadruples.

    Returns ``(pair_symmetry, bianchi, kahler_invariance, skew)`` arrays.
    """
    J = spec.frame.J
    R = lambda a, b, c: curvature(spec, a, b, c)  # noqa: E731
    RXYZ = R(X, Y, Z)
    pair = np.abs(_g(RXYZ, W) - _g(R(Z, W, X), Y))[..., 0]
    bianchi = np.linalg.norm(RXYZ + R(Y, Z, X) + R(Z, X, Y), axis=-1)
    kahler = np.linalg.norm(R(_op(J, X), _op(J, Y), Z) - RXYZ, axis=-1)
    skew = np.linalg.norm(RXYZ + R(Y, X, Z), axis=-1)
    return pair, bianchi, kahler, skew


def curvature_selftest(spec: AmbientSpec, trials: int = 1000, seed: int = 0) -> CurvatureReport:
    """Check pair symmetry, first Bianchi, J-invariance and skew symmetry.

    Vectors have components uniform in [-1, 1] and are normalized; the
    generator is seeded so reports are reproducible.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    V = rng.uniform(-1.0, 1.0, size=(4, trials, spec.frame.dim))
    V /= np.linalg.norm(V, axis=-1, keepdims=True)
    res = identity_residuals(spec, *V)
    return CurvatureReport(*(float(r.max()) for r in res), trials=trials)
