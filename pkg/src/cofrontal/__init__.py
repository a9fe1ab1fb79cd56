"""Exact tools for frontal and cofrontal polynomial map-germs."""

from .germ import (
    GermError,
    JacobiReport,
    KernelField,
    MapGerm,
    Verdict,
    classify_germ,
    jacobi_minors,
    kernel_cofactor_field,
    pluecker_section,
    principality_report,
    reduce_adapted,
)
from .local_algebra import FinitenessReport, fiber_count_bound, k_finiteness, quotient_dimension_profile
from .poly import Polynomial, PolyMatrix, determinant, gcd_many, parse_polynomial, render
from .symmetry import (
    GermDiffeo,
    SymmetryCertificate,
    check_right_symmetry,
    conjugate_symmetry,
    diffeo_order,
    symmetry_catalog,
)
from .torus import (
    FiberCensus,
    MappingTorusCofrontal,
    TorusError,
    assemble,
    census_vs_construction,
    evaluate_point,
    fiber_census,
)
from .flow import ChartedManifold, ReturnMapSample, numeric_return_map

__all__ = [
    "ChartedManifold", "FiberCensus", "FinitenessReport", "GermDiffeo", "GermError",
    "JacobiReport", "KernelField", "MapGerm", "MappingTorusCofrontal", "PolyMatrix",
    "Polynomial", "ReturnMapSample", "SymmetryCertificate", "TorusError", "Verdict",
    "assemble", "census_vs_construction", "check_right_symmetry", "classify_germ",
    "conjugate_symmetry", "determinant", "diffeo_order", "evaluate_point", "fiber_census",
    "fiber_count_bound", "gcd_many", "jacobi_minors", "k_finiteness", "kernel_cofactor_field",
    "numeric_return_map", "parse_polynomial", "pluecker_section", "principality_report",
    "quotient_dimension_profile", "reduce_adapted", "render", "symmetry_catalog",
]
