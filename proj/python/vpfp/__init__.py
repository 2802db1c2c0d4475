"""Python bindings for the vpfp core library."""

from ._vpfp import (
    NumericalError,
    UsageError,
    assemble_green,
    basis_dimension,
    basis_manifest_hash,
    cutoff_chi,
    eval_G1,
    eval_G1_hat,
    fit_decay,
    kernel_normalization,
    operator_matrix,
    radial_reconstruct,
    semigroup,
    simulate,
    spectral_gap,
    spectrum,
    variance_D,
)

__all__ = [
    "NumericalError",
    "UsageError",
    "assemble_green",
    "basis_dimension",
    "basis_manifest_hash",
    "cutoff_chi",
    "eval_G1",
    "eval_G1_hat",
    "fit_decay",
    "kernel_normalization",
    "operator_matrix",
    "radial_reconstruct",
    "semigroup",
    "simulate",
    "spectral_gap",
    "spectrum",
    "variance_D",
]
