"""Kernel analysis for permanental vectors.

Thin Python surface over the C++ core: 3x3 kernel classification,
M-matrix and series divisibility certificates, spectral structure checks,
and Monte Carlo validation against the analytic Laplace transform.
"""

from ._permkit import (
    PermkitError,
    adjugate,
    certify_all_beta,
    char_poly,
    check_necessary,
    classify,
    cycle_condition,
    det,
    eigenvalues,
    empirical_laplace,
    independence_report,
    inverse,
    is_class1,
    is_class2,
    is_mmatrix,
    is_psd,
    log_det_series,
    metric_table,
    modified_resolvent,
    reduce_kernel,
    sample_moments,
    spectral_radius,
    symmetrize,
    symmetrized_psd_check,
    vere_jones_sweep,
)

__all__ = [
    "PermkitError",
    "adjugate",
    "certify_all_beta",
    "char_poly",
    "check_necessary",
    "classify",
    "cycle_condition",
    "det",
    "eigenvalues",
    "empirical_laplace",
    "independence_report",
    "inverse",
    "is_class1",
    "is_class2",
    "is_mmatrix",
    "is_psd",
    "log_det_series",
    "metric_table",
    "modified_resolvent",
    "reduce_kernel",
    "sample_moments",
    "spectral_radius",
    "symmetrize",
    "symmetrized_psd_check",
    "vere_jones_sweep",
]

__version__ = "0.1.0"
