"""Closed-form linear algebra for real 2x2 matrices.

Matrices are plain ``numpy`` arrays of shape ``(2, 2)``.  The validators
:func:`mat2` and :func:`spd2` return read-only float copies so that values
can be shared freely.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

__all__ = [
    "DomainError",
    "EigenPair2",
    "mat2",
    "spd2",
    "det2",
    "inv2",
    "invariants",
    "mat_sqrt_pos",
    "mat_inv_sqrt_pos",
    "sym_eig2",
]


class DomainError(ValueError):
    """Input outside the domain where an operation is defined."""


class EigenPair2(NamedTuple):
    S: np.ndarray
    lambda1: float
    lambda2: float


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def mat2(x) -> np.ndarray:
    """Validate ``x`` as a finite real 2x2 matrix."""
    a = np.array(x, dtype=float)
    if a.shape != (2, 2):
        raise DomainError(f"expected a 2x2 matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix entries must be finite")
    return _frozen(a)


def spd2(x) -> np.ndarray:
    """Validate ``x`` as symmetric positive-definite.

    The checks are exact on the stored values: ``a12 == a21``, ``det > 0``
    and ``trace > 0``.
    """
    a = mat2(x)
    if a[0, 1] != a[1, 0]:
        raise DomainError(f"matrix is not symmetric: a12={a[0, 1]!r}, a21={a[1, 0]!r}")
    d = det2(a)
    if d <= 0:
        raise DomainError(f"matrix is not positive-definite: det={d!r} <= 0")
    t = a[0, 0] + a[1, 1]
    if t <= 0:
        raise DomainError(f"matrix is not positive-definite: trace={t!r} <= 0")
    return a


def det2(a: np.ndarray) -> float:
    return float(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])


def inv2(a: np.ndarray) -> np.ndarray:
    """Adjugate inverse; raises :class:`DomainError` on a zero determinant."""
    d = det2(a)
    if d == 0:
        raise DomainError("matrix is singular")
    return np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]]) / d


def invariants(x) -> tuple[float, float, float]:
    """Return ``(Tr X, Tr X^2, det X)``.

    ``det X`` is the direct 2x2 determinant; it agrees with
    ``(tr**2 - tr_sq) / 2`` up to rounding.
    """
    a = mat2(x)
    tr = float(a[0, 0] + a[1, 1])
    tr_sq = float(a[0, 0] ** 2 + 2.0 * a[0, 1] * a[1, 0] + a[1, 1] ** 2)
    return tr, tr_sq, det2(a)


def _sqrt_parts(y: np.ndarray) -> tuple[float, float]:
    root_det = math.sqrt(det2(y))
    norm = math.sqrt(float(y[0, 0] + y[1, 1]) + 2.0 * root_det)
    return root_det, norm


def mat_sqrt_pos(y) -> np.ndarray:
    """Principal square root of a positive-definite 2x2 matrix.

    Uses ``sqrt(Y) = (Y + sqrt(det Y) I) / sqrt(Tr Y + 2 sqrt(det Y))``.
    """
    y = spd2(y)
    root_det, norm = _sqrt_parts(y)
    r = (y + root_det * np.eye(2)) / norm
    r[1, 0] = r[0, 1]
    return _frozen(r)


def mat_inv_sqrt_pos(y) -> np.ndarray:
    """``Y^(-1/2) = (sqrt(det Y) Y^-1 + I) / sqrt(Tr Y + 2 sqrt(det Y))``."""
    y = spd2(y)
    root_det, norm = _sqrt_parts(y)
    # sqrt(det Y) * Y^-1 == adj(Y) / sqrt(det Y)
    adj = np.array([[y[1, 1], -y[0, 1]], [-y[0, 1], y[0, 0]]])
    r = (adj / root_det + np.eye(2)) / norm
    return _frozen(r)


def sym_eig2(y) -> EigenPair2:
    """Eigendecomposition ``Y = S diag(l1, l2) S^T`` with ``l1 >= l2``.

    Columns of ``S`` are unit eigenvectors.  A repeated eigenvalue gives
    ``S = I``.
    """
    y = spd2(y)
    p, q, r = float(y[0, 0]), float(y[0, 1]), float(y[1, 1])
    if q == 0.0:
        if p >= r:
            return EigenPair2(_frozen(np.eye(2)), p, r)
        return EigenPair2(_frozen(np.array([[0.0, 1.0], [1.0, 0.0]])), r, p)
    mid = 0.5 * (p + r)
    rad = math.hypot(0.5 * (p - r), q)
    l1 = mid + rad
    # smaller root via det / l1 avoids cancellation
    l2 = (p * r - q * q) / l1
    # Jacobi rotation angle, tan(2 theta) = 2q / (p - r)
    theta = 0.5 * math.atan2(2.0 * q, p - r)
    c, s = math.cos(theta), math.sin(theta)
    S = np.array([[c, -s], [s, c]])
    return EigenPair2(_frozen(S), l1, l2)
