"""Spectral interaction of two constant zweibeins coupled by a constant scalar field."""

from .analytic import (
    I1,
    I1_pair,
    cosmological_term,
    mass_correction,
    v1_invariant,
    v1_via_diagonalization,
    v_int,
    v_int_diagonal,
    v_metric_diagonal,
)
from .geometry import metric_from_zweibein, transition
from .quadrature import IntegralResult, QuadratureConfig, integrate_plane
from .symbols import DoubledGeometry, build_symbols, integrands
from .terms import ActionTerms, analytic_terms, numeric_terms

__version__ = "0.1.0"
