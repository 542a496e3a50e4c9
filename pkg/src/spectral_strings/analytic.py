"""Closed-form spectral-action terms of the doubled two-dimensional model.

Index convention: the symbols contract the frame as ``xi_mu K^mu_a``, i.e.
the vector ``K^T xi``.  The change-of-variables derivation is written for a
matrix acting directly on ``xi``, so every closed form below is evaluated on
the contracted frames ``K^T`` and ``L^T``.  The transition matrix entering
the potential is therefore ``X = L^T K^-T``.  It has the same trace and
determinant as ``L K^-1``, but ``Tr(X^T X)`` differs for non-symmetric
frames.

Volume factors use ``|det|`` by default, since the underlying integrals are
positive for either orientation.  ``strict=True`` keeps signed determinants
and reproduces the literal formulas for positively oriented frames.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import transition, zweibein
from .linalg2 import DomainError, det2, inv2, invariants, sym_eig2
from .quadrature import QuadratureConfig, integrate_plane

__all__ = [
    "DiagonalizationData",
    "contracted_transition",
    "cosmological_term",
    "mass_correction",
    "I1",
    "I1_closed",
    "I1_quadrature",
    "I1_pair",
    "diagonalization",
    "v1_from_diagonalization",
    "v1_via_diagonalization",
    "v1_invariant",
    "v_int",
    "v_int_diagonal",
    "v_metric_diagonal",
]

# relative gap below which c ~ a or b ~ d counts as the removable singularity
I1_GAP = 1e-6
I1_QUAD = QuadratureConfig(rel_tol=1e-12, abs_tol=1e-15)


def _vol(det: float, strict: bool) -> float:
    return det if strict else abs(det)


def contracted_transition(k, l):
    """Transition data for the contracted frames, ``X = L^T K^-T``."""
    return transition(zweibein(k).T, zweibein(l).T)


def cosmological_term(k, l, *, strict: bool = False) -> float:
    """``2 pi (1/|det K| + 1/|det L|)``."""
    dk = _vol(det2(zweibein(k)), strict)
    dl = _vol(det2(zweibein(l)), strict)
    return 2.0 * math.pi * (1.0 / dk + 1.0 / dl)


def mass_correction(k, l, phi, kappa: int, *, strict: bool = False) -> float:
    """``-kappa |phi|^2`` times the cosmological term."""
    return -kappa * abs(phi) ** 2 * cosmological_term(k, l, strict=strict)


def _check_positive(*args):
    for x in args:
        if not x > 0:
            raise DomainError(f"I1 arguments must be positive, got {args!r}")


def I1_closed(a: float, b: float, c: float, d: float) -> float:
    """Closed form of ``int xi1^2 / ((a^2 xi1^2 + b^2 xi2^2 + 1)^2 (c^2 xi1^2 + d^2 xi2^2 + 1))``.

    Real on the two branches where ``c^2 - a^2`` and ``b^2 - d^2`` share a
    sign.  The branch ``c < a, b < d`` is the continuation in which every
    square root acquires a factor ``i`` and the factors cancel.
    """
    _check_positive(a, b, c, d)
    s1 = c * c - a * a
    s2 = b * b - d * d
    if s1 == 0 or s2 == 0 or (s1 > 0) != (s2 > 0):
        raise DomainError(f"I1 closed form is not real for {(a, b, c, d)!r}")
    den = abs(b * b * c * c - a * a * d * d)
    root = math.sqrt(abs(s2) / den)
    first = (c / a) * math.pi / (s1 * (b * c + a * d))
    second = math.pi / (abs(s1) ** 1.5 * math.sqrt(abs(s2)))
    # clip rounding excursions past 1
    u = min(a * root, 1.0)
    v = min(c * root, 1.0)
    return first + second * (math.asin(u) - math.asin(v))


def I1_quadrature(a: float, b: float, c: float, d: float, cfg: QuadratureConfig = I1_QUAD):
    _check_positive(a, b, c, d)

    def f(p):
        x2 = p[:, 0] ** 2
        y2 = p[:, 1] ** 2
        return x2 / ((a * a * x2 + b * b * y2 + 1) ** 2 * (c * c * x2 + d * d * y2 + 1))

    return integrate_plane(f, cfg, half_plane=True)


def _closed_form_ok(a, b, c, d) -> bool:
    s1 = c * c - a * a
    s2 = b * b - d * d
    return (abs(s1) > I1_GAP * max(a * a, c * c)
            and abs(s2) > I1_GAP * max(b * b, d * d)
            and (s1 > 0) == (s2 > 0))


def I1(a: float, b: float, c: float, d: float) -> float:
    """The integral ``I1(a, b, c, d)``; quadrature near and across branch boundaries."""
    _check_positive(a, b, c, d)
    if _closed_form_ok(a, b, c, d):
        return I1_closed(a, b, c, d)
    return I1_quadrature(a, b, c, d).value


def I1_pair(lam1: float, lam2: float) -> float:
    """``I1(1, 1, l1, l2) + I1(l1, l2, 1, 1) = pi / ((l1 + l2) l1)``."""
    _check_positive(lam1, lam2)
    return math.pi / ((lam1 + lam2) * lam1)


@dataclass(frozen=True)
class DiagonalizationData:
    S: np.ndarray
    Lambda1: float
    Lambda2: float
    W: np.ndarray
    P: np.ndarray


def diagonalization(k, l) -> DiagonalizationData:
    """Orthogonal ``S`` with ``S^T X^T X S = diag(Lambda1^2, Lambda2^2)``.

    Here ``X = L^T K^-T``; ``P = K^-T S`` is the substitution ``xi = P eta``
    that turns the first frame into the identity, and ``W = S - X S``.
    """
    td = contracted_transition(k, l)
    eig = sym_eig2(td.XtX)
    S = eig.S
    W = S - td.X @ S
    P = inv2(zweibein(k).T) @ S
    return DiagonalizationData(S=S, Lambda1=math.sqrt(eig.lambda1),
                               Lambda2=math.sqrt(eig.lambda2), W=W, P=P)


def v1_from_diagonalization(data: DiagonalizationData, phi, kappa: int,
                            *, strict: bool = False) -> float:
    wtw = data.W.T @ data.W
    l1, l2 = data.Lambda1, data.Lambda2
    jac = _vol(det2(data.P), strict)
    if strict:
        # S counted as a proper rotation, det(K^-1 S) -> 1/det K
        jac = abs(jac) * (1.0 if det2(data.P) * det2(data.S) > 0 else -1.0)
    inner = wtw[0, 0] * I1_pair(l1, l2) + wtw[1, 1] * I1_pair(l2, l1)
    return 2.0 * kappa * abs(phi) ** 2 * jac * inner


def v1_via_diagonalization(k, l, phi, kappa: int, *, strict: bool = False) -> float:
    """V1 by the change of variables that diagonalises ``X^T X``.

    Only for frames of equal orientation; :func:`v1_invariant` covers both.
    """
    if contracted_transition(k, l).det_sign < 0:
        raise DomainError("det X < 0: use v1_invariant")
    return v1_from_diagonalization(diagonalization(k, l), phi, kappa, strict=strict)


def _x_invariants(k, l):
    td = contracted_transition(k, l)
    tr, _, det = invariants(td.X)
    tr_xtx = float(np.sum(td.X * td.X))
    return tr, tr_xtx, det


def v1_invariant(k, l, phi, kappa: int, *, strict: bool = False) -> float:
    """V1 from the invariants of ``X``.

    For ``det X > 0``: ``pref (1 + 1/det X - 4 Tr X / (Tr(X^T X) + 2 det X))``;
    for ``det X < 0`` the cross term drops and ``pref (1 + 1/|det X|)`` is left,
    with ``pref = 2 pi kappa |phi|^2 / |det K|``.
    """
    tr, tr_xtx, det = _x_invariants(k, l)
    pref = 2.0 * math.pi * kappa * abs(phi) ** 2 / _vol(det2(zweibein(k)), strict)
    if det > 0:
        return pref * (1.0 + 1.0 / det - 4.0 * tr / (tr_xtx + 2.0 * det))
    return pref * (1.0 + 1.0 / _vol(det, strict))


def v_int(k, l, phi, kappa: int, *, strict: bool = False) -> float:
    """Interaction potential ``-8 pi kappa |phi|^2 / |det K| * Tr X / (Tr(X^T X) + 2 det X)``.

    Exactly zero when the frames have opposite orientation.
    """
    tr, tr_xtx, det = _x_invariants(k, l)
    if det <= 0:
        return 0.0
    dk = _vol(det2(zweibein(k)), strict)
    return -8.0 * math.pi * kappa * abs(phi) ** 2 / dk * (tr / (tr_xtx + 2.0 * det))


def v_int_diagonal(a1, b1, a2, b2, phi, kappa: int, *, strict: bool = False) -> float:
    """``v_int`` for ``K = diag(a1, b1)``, ``L = diag(a2, b2)``."""
    if 0.0 in (a1, b1, a2, b2):
        raise DomainError("diagonal zweibein entries must be nonzero")
    if (a2 * b2) / (a1 * b1) <= 0:
        return 0.0
    # the |det K| convention leaves a factor sign(a1 b1)
    orient = 1.0 if strict or a1 * b1 > 0 else -1.0
    return -8.0 * math.pi * kappa * abs(phi) ** 2 * orient / (a1 * b2 + a2 * b1)


def v_metric_diagonal(g, h, phi, kappa: int) -> float:
    """``-8 pi kappa |phi|^2 sqrt(det g) xy/(x+y)``, ``x, y`` the eigenvalues of ``sqrt(g^-1 h)``.

    Metrics must be diagonal; the zweibeins are then taken positively oriented.
    """
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    for m in (g, h):
        if m.shape != (2, 2) or m[0, 1] != 0 or m[1, 0] != 0 or not np.all(np.diag(m) > 0):
            raise DomainError("v_metric_diagonal needs diagonal positive-definite metrics")
    x = math.sqrt(h[0, 0] / g[0, 0])
    y = math.sqrt(h[1, 1] / g[1, 1])
    return -8.0 * math.pi * kappa * abs(phi) ** 2 * math.sqrt(g[0, 0] * g[1, 1]) * x * y / (x + y)
