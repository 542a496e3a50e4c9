"""Action terms of a doubled geometry, from closed forms or from quadrature."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import analytic
from .linalg2 import mat_inv_sqrt_pos, spd2
from .quadrature import IntegralResult, QuadratureConfig, integrate_plane
from .symbols import DoubledGeometry, integrands

__all__ = ["Term", "ActionTerms", "analytic_terms", "numeric_terms", "whitening"]

TERM_NAMES = ("cosmological", "mass_correction", "v1", "v_int")

# condition number of K K^T + L L^T beyond which the oracle whitens first
WHITEN_ABOVE = 1e3


@dataclass(frozen=True)
class Term:
    value: float
    provenance: str  # "analytic" or "numeric"
    error_estimate: float | None = None
    converged: bool = True


@dataclass(frozen=True)
class ActionTerms:
    cosmological: Term
    mass_correction: Term
    v1: Term
    v_int: Term

    def values(self) -> dict[str, float]:
        return {name: getattr(self, name).value for name in TERM_NAMES}


def analytic_terms(geom: DoubledGeometry, *, strict: bool = False) -> ActionTerms:
    K, L, phi, kappa = geom.K, geom.L, geom.phi, geom.kappa
    return ActionTerms(
        cosmological=Term(analytic.cosmological_term(K, L, strict=strict), "analytic"),
        mass_correction=Term(analytic.mass_correction(K, L, phi, kappa, strict=strict), "analytic"),
        v1=Term(analytic.v1_invariant(K, L, phi, kappa, strict=strict), "analytic"),
        v_int=Term(analytic.v_int(K, L, phi, kappa, strict=strict), "analytic"),
    )


def whitening(geom: DoubledGeometry, threshold: float = WHITEN_ABOVE):
    """``(K K^T + L L^T)^-1/2`` when that sum is badly conditioned, else ``None``."""
    s = geom.K @ geom.K.T + geom.L @ geom.L.T
    s[1, 0] = s[0, 1]
    if np.linalg.cond(s) <= threshold:
        return None
    return mat_inv_sqrt_pos(spd2(s))


def _term(res: IntegralResult) -> Term:
    return Term(res.value, "numeric", res.error_estimate, res.converged)


def numeric_terms(geom: DoubledGeometry, cfg: QuadratureConfig | None = None) -> ActionTerms:
    """Integrate the symbol traces over the plane.

    ``v_int`` is derived as ``V1 + mass_correction``, i.e. what survives once
    the volume-like part of V1 cancels the mass correction.
    """
    f = integrands(geom)
    M = whitening(geom)
    cosmo = integrate_plane(f.f_cosmo, cfg, transform=M)
    mass = integrate_plane(f.f_mass, cfg, transform=M)
    v1 = integrate_plane(f.f_int, cfg, transform=M)
    vint = Term(
        v1.value + mass.value,
        "numeric",
        v1.error_estimate + mass.error_estimate,
        v1.converged and mass.converged,
    )
    return ActionTerms(_term(cosmo), _term(mass), _term(v1), vint)
