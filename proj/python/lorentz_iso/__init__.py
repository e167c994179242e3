"""Isothermic surfaces in the conformal 4-sphere of signature (3,1).

Thin layer over the C++ core: charts, invariants, polar, spectral and
Darboux transforms, and the permutability verifications.
"""

import json

from ._core import (
    Chart,
    Error,
    analyze,
    darboux,
    from_samples,
    integrability_residuals,
    isothermic_check,
    load_csv,
    null_graph,
    polar,
    rotational,
    spectral,
    structure_residuals,
    theorem_ids,
    torus,
    two_step_polar,
    verify_json,
)

__all__ = [
    "Chart",
    "Error",
    "analyze",
    "darboux",
    "from_samples",
    "integrability_residuals",
    "isothermic_check",
    "load_csv",
    "null_graph",
    "polar",
    "rotational",
    "spectral",
    "structure_residuals",
    "theorem_ids",
    "torus",
    "two_step_polar",
    "verify",
    "verify_json",
]


def verify(theorem, chart, parameter=1.0, tolerances=None, reproducible=False):
    """Run one verification; returns the report as a dict."""
    return json.loads(verify_json(theorem, chart, parameter, tolerances or {}, reproducible))
