"""Exact integer linear algebra: Smith normal form, kernels, homology over Z."""
from ._backend import active as active_backend, available as available_backends, set_backend
from .core import (
    ZERO,
    AbelianGroup,
    ChainComplex,
    HomologyBasis,
    LatticeCoordinates,
    SnfResult,
    check_subcomplex,
    determinant,
    format_groups,
    homology,
    homology_basis,
    invariant_factors,
    is_unimodular,
    kernel_basis,
    matrix_rank,
    relative_homology,
    smith_normal_form,
)

__all__ = [
    "ZERO",
    "AbelianGroup",
    "ChainComplex",
    "HomologyBasis",
    "LatticeCoordinates",
    "SnfResult",
    "active_backend",
    "available_backends",
    "check_subcomplex",
    "determinant",
    "format_groups",
    "homology",
    "homology_basis",
    "invariant_factors",
    "is_unimodular",
    "kernel_basis",
    "matrix_rank",
    "relative_homology",
    "set_backend",
    "smith_normal_form",
]
