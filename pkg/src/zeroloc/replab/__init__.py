"""Reproduction of the worked examples: the sign-kernel matrix, its limits,
and the small-N positivity scans."""

from .fixtures import FixtureReport
from .appendix_a import (
    MU_TABLE_N4,
    appendix_a_fixtures,
    appendix_limits,
    mu_matrix,
    simple_distribution,
)
from .appendix_b import (
    appendix_b_fixtures,
    matrix_mc,
    monic_nonneg_roots_check,
    n2_positivity_scan,
    odd_kernel_scan,
)

__all__ = [
    "FixtureReport",
    "MU_TABLE_N4",
    "appendix_a_fixtures",
    "appendix_limits",
    "mu_matrix",
    "simple_distribution",
    "appendix_b_fixtures",
    "matrix_mc",
    "monic_nonneg_roots_check",
    "n2_positivity_scan",
    "odd_kernel_scan",
]
