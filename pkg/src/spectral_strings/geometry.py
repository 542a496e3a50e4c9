"""Zweibeins, metrics and the transition matrix between two frames.

A zweibein is stored as the matrix ``K[mu, a] = e^mu_a``: rows are the
coordinate index, columns the frame index.  The inverse metric is then
``g^{mu nu} = (K K^T)^{mu nu}`` and the norm of a covector is
``|xi|_g^2 = xi^T K K^T xi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg2 import DomainError, det2, inv2, mat2, spd2

__all__ = [
    "SingularZweibeinError",
    "MIN_ABS_DET",
    "zweibein",
    "MetricPair",
    "TransitionData",
    "metric_from_zweibein",
    "transition",
    "det_relation",
]

MIN_ABS_DET = 1e-12


class SingularZweibeinError(DomainError):
    """Zweibein matrix is (numerically) singular."""


def zweibein(k) -> np.ndarray:
    """Validate an invertible zweibein matrix."""
    k = mat2(k)
    d = det2(k)
    if abs(d) < MIN_ABS_DET:
        raise SingularZweibeinError(f"zweibein is singular: det={d!r}")
    return k


@dataclass(frozen=True)
class MetricPair:
    g_inv: np.ndarray
    g: np.ndarray


@dataclass(frozen=True)
class TransitionData:
    X: np.ndarray
    XtX: np.ndarray
    det_sign: int


def metric_from_zweibein(k) -> MetricPair:
    """Inverse metric ``K K^T`` and metric ``(K K^T)^-1``.

    The metric is assembled from the explicit entry formula
    ``g = [[b^2+c^2, -(ac+bd)], [-(ac+bd), a^2+d^2]] / (ab-cd)^2`` for
    ``K = [[a, d], [c, b]]``.
    """
    k = zweibein(k)
    a, d = k[0]
    c, b = k[1]
    off = a * c + b * d
    g_inv = np.array([[a * a + d * d, off], [off, b * b + c * c]])
    det_k = a * b - c * d
    g = np.array([[b * b + c * c, -off], [-off, a * a + d * d]]) / det_k**2
    return MetricPair(g_inv=spd2(g_inv), g=spd2(g))


def transition(k, l) -> TransitionData:
    """``X = L K^-1`` together with ``X^T X`` and the sign of ``det X``."""
    k = zweibein(k)
    l = zweibein(l)
    x = l @ inv2(k)
    xtx = x.T @ x
    xtx[1, 0] = xtx[0, 1]
    det_sign = 1 if det2(l) * det2(k) > 0 else -1
    return TransitionData(X=mat2(x), XtX=spd2(xtx), det_sign=det_sign)


def det_relation(k) -> tuple[float, float]:
    """Return ``(det K, sqrt(det(K K^T)))``.

    The second value equals ``|det K|``; both are returned so the sign is
    visible for negatively oriented frames.
    """
    k = zweibein(k)
    pair = metric_from_zweibein(k)
    return det2(k), math.sqrt(det2(pair.g_inv))
