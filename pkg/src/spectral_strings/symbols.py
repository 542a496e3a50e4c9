"""Pseudodifferential symbols of D^2 and D^-2 for the doubled model.

The Dirac operator on the two sheets (constant frames, derivative terms of
the zweibeins dropped) is ``D = i sigma^a A^mu_a d_mu + sigma F`` with

    A^mu_a = diag(K[mu, a], L[mu, a]),   F = [[0, phi], [conj(phi), 0]],

acting on (spinor C^2) x (sheet C^2).  Every 4x4 matrix here is built as
``kron(spinor_part, sheet_part)``, so the Clifford trace acts on the first
factor and the sheet trace on the second; ``Tr Tr_Cl`` is the full trace.

All evaluators accept ``xi`` of shape ``(2,)`` or ``(n, 2)`` and return
``(4, 4)`` or ``(n, 4, 4)`` complex arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import zweibein

__all__ = [
    "PAULI",
    "CliffordRep",
    "DoubledGeometry",
    "SymbolSet",
    "Integrands",
    "clifford_rep",
    "build_symbols",
    "integrands",
    "scalar_integrands",
]

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

IMAG_TOL = 1e-12


@dataclass(frozen=True)
class CliffordRep:
    sigma1: np.ndarray
    sigma2: np.ndarray
    sigma: np.ndarray
    chi: complex
    kappa: int


def _check_kappa(kappa) -> int:
    if kappa not in (1, -1):
        raise ValueError(f"kappa must be +1 or -1, got {kappa!r}")
    return int(kappa)


def clifford_rep(kappa: int) -> CliffordRep:
    """Pauli generators and the grading-like ``sigma = chi sigma^3``.

    ``chi`` is 1 for ``kappa = +1`` and ``i`` for ``kappa = -1`` so that
    ``sigma^2 = kappa``.
    """
    kappa = _check_kappa(kappa)
    chi = 1.0 + 0j if kappa == 1 else 1j
    return CliffordRep(PAULI[0], PAULI[1], chi * PAULI[2], chi, kappa)


@dataclass(frozen=True)
class DoubledGeometry:
    """Two constant zweibeins ``K``, ``L`` coupled by a constant field ``phi``."""

    K: np.ndarray
    L: np.ndarray
    phi: complex = 1.0
    kappa: int = 1

    def __post_init__(self):
        object.__setattr__(self, "K", zweibein(self.K))
        object.__setattr__(self, "L", zweibein(self.L))
        object.__setattr__(self, "phi", complex(self.phi))
        object.__setattr__(self, "kappa", _check_kappa(self.kappa))

    @property
    def phi_sq(self) -> float:
        return abs(self.phi) ** 2


Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SymbolSet:
    a2: Evaluator
    a1: Evaluator
    a0: np.ndarray
    b0: Evaluator
    b2: Evaluator


@dataclass(frozen=True)
class Integrands:
    f_cosmo: Evaluator
    f_mass: Evaluator
    f_int: Evaluator


def _sheet_ops(geom: DoubledGeometry):
    """Sheet-space matrices ``A^mu_a`` (indexed [mu][a]) and ``F``."""
    A = [[np.diag([geom.K[mu, a], geom.L[mu, a]]).astype(complex) for a in range(2)]
         for mu in range(2)]
    F = np.array([[0, geom.phi], [np.conj(geom.phi), 0]], dtype=complex)
    return A, F


def _as_points(xi) -> tuple[np.ndarray, bool]:
    xi = np.asarray(xi, dtype=float)
    single = xi.ndim == 1
    return np.atleast_2d(xi), single


def _linear_symbol(coeffs: list[np.ndarray]) -> Evaluator:
    """``xi -> sum_mu coeffs[mu] * xi_mu``."""
    stack = np.stack(coeffs)

    def ev(xi):
        pts, single = _as_points(xi)
        out = np.einsum("nm,mij->nij", pts.astype(complex), stack)
        return out[0] if single else out

    return ev


def build_symbols(geom: DoubledGeometry) -> SymbolSet:
    """Symbols ``a2, a1, a0`` of ``D^2`` and ``b0, b2`` of ``D^-2``.

    ``a2`` is the principal part ``sigma^a sigma^b (x) A^mu_a A^nu_b xi_mu xi_nu``,
    ``a1 = sigma^a sigma (x) [F, A^mu_a] xi_mu`` and ``a0 = sigma^2 (x) F^2``.
    Then ``b0 = (a2 + 1)^-1`` and ``b2 = -b0 a0 b0 + b0 a1 b0 a1 b0``.
    """
    cl = clifford_rep(geom.kappa)
    gens = (cl.sigma1, cl.sigma2)
    A, F = _sheet_ops(geom)

    # quadratic coefficient tensor Q[mu, nu] = sum_ab kron(s^a s^b, A^mu_a A^nu_b)
    Q = np.zeros((2, 2, 4, 4), dtype=complex)
    for mu in range(2):
        for nu in range(2):
            for a in range(2):
                for b in range(2):
                    Q[mu, nu] += np.kron(gens[a] @ gens[b], A[mu][a] @ A[nu][b])

    def a2(xi):
        pts, single = _as_points(xi)
        p = pts.astype(complex)
        out = np.einsum("nm,nk,mkij->nij", p, p, Q)
        return out[0] if single else out

    a1 = _linear_symbol([
        sum(np.kron(gens[a] @ cl.sigma, F @ A[mu][a] - A[mu][a] @ F) for a in range(2))
        for mu in range(2)
    ])
    a0 = np.kron(cl.sigma @ cl.sigma, F @ F)
    a0.setflags(write=False)
    eye4 = np.eye(4, dtype=complex)

    def b0(xi):
        return np.linalg.inv(a2(xi) + eye4)

    def b2(xi):
        m0 = b0(xi)
        m1 = a1(xi)
        return -m0 @ a0 @ m0 + m0 @ m1 @ m0 @ m1 @ m0

    return SymbolSet(a2=a2, a1=a1, a0=a0, b0=b0, b2=b2)


def _real_trace(m: np.ndarray, single: bool):
    tr = np.trace(m, axis1=-2, axis2=-1)
    scale = np.maximum(1.0, np.abs(tr.real))
    bad = np.abs(tr.imag) > IMAG_TOL * scale
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ArithmeticError(f"trace has a non-negligible imaginary part {tr.imag[i]!r}")
    return float(tr.real[0]) if single else tr.real


def integrands(geom: DoubledGeometry) -> Integrands:
    """Scalar integrands ``Tr Tr_Cl`` of ``b0^2``, ``-b0 a0 b0`` and ``b0 a1 b0 a1 b0``."""
    sym = build_symbols(geom)

    def f_cosmo(xi):
        pts, single = _as_points(xi)
        m = sym.b0(pts)
        return _real_trace(m @ m, single)

    def f_mass(xi):
        pts, single = _as_points(xi)
        m = sym.b0(pts)
        return _real_trace(-(m @ sym.a0 @ m), single)

    def f_int(xi):
        pts, single = _as_points(xi)
        m0 = sym.b0(pts)
        m1 = sym.a1(pts)
        return _real_trace(m0 @ m1 @ m0 @ m1 @ m0, single)

    return Integrands(f_cosmo=f_cosmo, f_mass=f_mass, f_int=f_int)


def scalar_integrands(geom: DoubledGeometry) -> Integrands:
    """The same three integrands written as sheet-scalar closed forms.

    With ``p = xi^T K K^T xi`` and ``q = xi^T L L^T xi``:
    ``f_cosmo = 2 (1/(p+1)^2 + 1/(q+1)^2)``, ``f_mass = -kappa |phi|^2 f_cosmo``
    and ``f_int = 2 kappa |phi|^2 det(b0) Tr(b0) xi^T (K-L)(K-L)^T xi``.
    """
    gk = geom.K @ geom.K.T
    gl = geom.L @ geom.L.T
    dk = (geom.K - geom.L) @ (geom.K - geom.L).T
    c = geom.kappa * geom.phi_sq

    def quad(m, xi):
        pts, single = _as_points(xi)
        v = np.einsum("ni,ij,nj->n", pts, m, pts)
        return v, single

    def f_cosmo(xi):
        p, single = quad(gk, xi)
        q, _ = quad(gl, xi)
        v = 2.0 * (1.0 / (p + 1.0) ** 2 + 1.0 / (q + 1.0) ** 2)
        return float(v[0]) if single else v

    def f_mass(xi):
        v = -c * np.asarray(f_cosmo(xi))
        return float(v) if v.ndim == 0 else v

    def f_int(xi):
        p, single = quad(gk, xi)
        q, _ = quad(gl, xi)
        w, _ = quad(dk, xi)
        bp, bq = 1.0 / (p + 1.0), 1.0 / (q + 1.0)
        v = 2.0 * c * bp * bq * (bp + bq) * w
        return float(v[0]) if single else v

    return Integrands(f_cosmo=f_cosmo, f_mass=f_mass, f_int=f_int)
