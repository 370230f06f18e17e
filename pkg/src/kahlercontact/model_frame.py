"""Point models of the tangent space of a Kähler model space.

A tangent space is modelled as R^{2n} with the Euclidean inner product and
ordered basis ``e_1, ..., e_n, Je_1, ..., Je_n``.  In this basis

* ``J`` maps ``e_k -> Je_k`` and ``Je_k -> -e_k``;
* the base real structure ``A`` (quadrics only) fixes every ``e_k`` and
  negates every ``Je_k``, so ``V(A) = span(e_k)`` and ``JV(A) = span(Je_k)``.

Identifying ``z_k = x_k + i y_k`` this is C^n with ``J`` multiplication by
``i`` and ``A`` complex conjugation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DegenerateInputError,
    InvalidDimensionError,
    NoRealStructureError,
    WrongAmbientError,
)

STRUCTURE_TOL = 1e-12
DEPENDENCE_TOL = 1e-10


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ModelFrame:
    """Tangent-space model with complex structure and optional real structure."""

    n: int
    J: np.ndarray
    A: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "J", _readonly(self.J))
        if self.A is not None:
            object.__setattr__(self, "A", _readonly(self.A))

    @property
    def dim(self) -> int:
        return 2 * self.n

    @property
    def has_real_structure(self) -> bool:
        return self.A is not None

    def e(self, k: int) -> np.ndarray:
        """Basis vector ``e_{k+1}`` (zero-based ``k``)."""
        v = np.zeros(self.dim)
        v[k] = 1.0
        return v

    def je(self, k: int) -> np.ndarray:
        """Basis vector ``Je_{k+1}`` (zero-based ``k``)."""
        v = np.zeros(self.dim)
        v[self.n + k] = 1.0
        return v

    @property
    def V(self) -> np.ndarray:
        """Columns spanning V(A)."""
        return np.eye(self.dim)[:, : self.n]

    @property
    def JV(self) -> np.ndarray:
        """Columns spanning JV(A)."""
        return np.eye(self.dim)[:, self.n :]

    def structure_residuals(self) -> dict:
        """Operator-norm residuals of every structural invariant."""
        I = np.eye(self.dim)
        J = self.J
        out = {
            "J_squared": np.linalg.norm(J @ J + I, 2),
            "J_isometry": np.linalg.norm(J.T @ J - I, 2),
            # <JX, Y> = 0 for X, Y in V(A)
            "totally_real": np.abs(self.V.T @ J @ self.V).max(),
        }
        if self.A is not None:
            out.update(real_structure_residuals(self, self.A))
        return out


def real_structure_residuals(frame: ModelFrame, A: np.ndarray) -> dict:
    I = np.eye(frame.dim)
    return {
        "A_involution": np.linalg.norm(A @ A - I, 2),
        "A_symmetric": np.linalg.norm(A - A.T, 2),
        "A_isometry": np.linalg.norm(A.T @ A - I, 2),
        "A_anticommutes": np.linalg.norm(A @ frame.J + frame.J @ A, 2),
    }


def make_model_frame(n: int, with_real_structure: bool = True) -> ModelFrame:
    """Standard frame of complex dimension ``n``.

    Parameters
    ----------
    n : int
        Complex dimension, at least 2.
    with_real_structure : bool
        Attach the base real structure ``A`` (needed for quadric ambients).

    Raises
    ------
    InvalidDimensionError
        If ``n < 2``.
    """
    if int(n) != n or n < 2:
        raise InvalidDimensionError(f"complex dimension must be an integer >= 2, got {n}")
    n = int(n)
    Z = np.zeros((n, n))
    I = np.eye(n)
    J = np.block([[Z, -I], [I, Z]])
    A = np.block([[I, Z], [Z, -I]]) if with_real_structure else None
    return ModelFrame(n=n, J=J, A=A)


@dataclass(frozen=True, eq=False)
class AmbientSpec:
    """Which curvature tensor applies on a model frame.

    ``kind`` is ``"csf"`` (constant holomorphic sectional curvature ``c``) or
    ``"quadric"`` (``eps = +1`` for Q^n, ``-1`` for the noncompact dual).
    Use :meth:`csf` / :meth:`quadric` rather than the raw constructor.
    """

    kind: str
    frame: ModelFrame
    c: float = 0.0
    eps: int = 1

    def __post_init__(self):
        if self.kind == "csf":
            if self.frame.has_real_structure:
                raise WrongAmbientError("CSF ambient must be built on a frame without A")
        elif self.kind == "quadric":
            if not self.frame.has_real_structure:
                raise NoRealStructureError("quadric ambient requires a real structure A")
            if self.eps not in (1, -1) or isinstance(self.eps, bool):
                raise WrongAmbientError(f"quadric sign must be +1 or -1, got {self.eps!r}")
        else:
            raise WrongAmbientError(f"unknown ambient kind {self.kind!r}")

    @classmethod
    def csf(cls, frame: ModelFrame, c: float) -> "AmbientSpec":
        return cls(kind="csf", frame=frame, c=float(c))

    @classmethod
    def quadric(cls, frame: ModelFrame, eps: int) -> "AmbientSpec":
        return cls(kind="quadric", frame=frame, eps=eps)

    @property
    def is_quadric(self) -> bool:
        return self.kind == "quadric"

    @property
    def n(self) -> int:
        return self.frame.n

    def describe(self) -> str:
        if self.is_quadric:
            return "Q^%d" % self.n if self.eps == 1 else "Q^%d*" % self.n
        return "CSF(c=%g, n=%d)" % (self.c, self.n)


def rotate_real_structure(frame: ModelFrame, s: float) -> np.ndarray:
    """Element ``cos(s) A + sin(s) JA`` of the circle of real structures."""
    if frame.A is None:
        raise NoRealStructureError("frame carries no real structure")
    return np.cos(s) * frame.A + np.sin(s) * (frame.J @ frame.A)


def gram_schmidt(vectors, passes: int = 2) -> np.ndarray:
    """Orthonormalize the rows of ``vectors`` (classical GS, iterated ``passes`` times).

    Returns the orthonormal vectors as rows.  Raises
    :class:`DegenerateInputError` if a vector is numerically dependent on its
    predecessors.
    """
    V = np.array(vectors, dtype=float, ndmin=2)
    Q = np.zeros_like(V)
    for i, v in enumerate(V):
        w = v.copy()
        for _ in range(passes):
            w -= Q[:i].T @ (Q[:i] @ w)
        nrm = np.linalg.norm(w)
        if nrm < DEPENDENCE_TOL * max(1.0, np.linalg.norm(v)):
            raise DegenerateInputError(f"vector {i} is dependent on its predecessors")
        Q[i] = w / nrm
    return Q


def orthonormal_complement(frame: ModelFrame, vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Orthonormal basis (as columns) of the complement of ``span(vectors)``.

    Candidates are the standard basis vectors, chosen greedily by largest
    residual after projection; every projection is applied twice.

    Raises
    ------
    DegenerateInputError
        If the smallest singular value of the input is below 1e-10.
    """
    dim = frame.dim
    if len(vectors) == 0:
        return np.eye(dim)
    V = np.array(vectors, dtype=float, ndmin=2)
    if V.shape[1] != dim:
        raise ValueError(f"vectors must have length {dim}")
    if V.shape[0] > dim:
        raise DegenerateInputError("more vectors than dimensions")
    smin = np.linalg.svd(V, compute_uv=False).min()
    if smin < DEPENDENCE_TOL:
        raise DegenerateInputError(f"input nearly dependent (sigma_min={smin:.3e})")
    Q = gram_schmidt(V)

    m = dim - Q.shape[0]
    R = np.eye(dim)
    for _ in range(2):
        R = R - Q.T @ (Q @ R)
    basis = []
    for _ in range(m):
        k = int(np.argmax(np.linalg.norm(R, axis=0)))
        w = R[:, k].copy()
        B = np.array(basis).reshape(-1, dim)
        for _ in range(2):
            w -= Q.T @ (Q @ w)
            w -= B.T @ (B @ w)
        w /= np.linalg.norm(w)
        basis.append(w)
        R = R - np.outer(w, w @ R)
    return np.array(basis).T
