"""Numerical toolkit for pseudosymmetry-type curvature conditions.

Metric components are written in a small expression language, differentiated
with second-order jets, and turned into Riemann, Ricci, Weyl and related
tensors at a point.  On top of that sit pointwise classifications
(Einstein, quasi-Einstein, Roter, ...), least-squares fits of curvature
conditions against Tachibana-tensor bases, a catalog of parameterized
spacetimes with closed-form oracles, and a command-line front end.
"""
from . import catalog, classify, curvature, expr_dsl, jets, pseudosym, tensors
from .catalog import build
from .curvature import curvature_pack, full_chart, warped_chart, warped_components
from .expr_dsl import parse, evaluate

__version__ = "0.1.0"

__all__ = [
    "catalog", "classify", "curvature", "expr_dsl", "jets", "pseudosym", "tensors",
    "build", "curvature_pack", "full_chart", "warped_chart", "warped_components",
    "parse", "evaluate", "__version__",
]
