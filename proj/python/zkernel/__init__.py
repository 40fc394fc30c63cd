"""z-measures on partitions and their correlation kernel."""

from ._zkernel import (
    AccuracyError,
    ConfigurationError,
    DomainError,
    Error,
    InvalidParameters,
    PoleError,
    SizeLimitError,
    ZParams,
    brute_corr,
    classify,
    corr,
    kernel_json,
    kernel_matrix,
    psi,
    run_cli,
    sample,
    total_mass,
    verify,
    weight,
)

__all__ = [
    "AccuracyError",
    "ConfigurationError",
    "DomainError",
    "Error",
    "InvalidParameters",
    "PoleError",
    "SizeLimitError",
    "ZParams",
    "brute_corr",
    "classify",
    "corr",
    "kernel_json",
    "kernel_matrix",
    "psi",
    "run_cli",
    "sample",
    "total_mass",
    "verify",
    "weight",
]
