"""Numerical toolkit for nested Euler sums, confluent hypergeometric
kernels, oscillatory divisor sums, and the identities connecting them.
"""
from __future__ import annotations

from mczeta.arith import (
    IndexTuple,
    divisor_sigma,
    divisor_sigma_ez,
    divisor_sigma_gcd,
    divisor_sigma_prefix,
    divisors,
)
from mczeta.funceq import (
    FEReport,
    fe_carrier_from_definition,
    fe_carrier_from_osc_sums,
    osc_divisor_sum,
    osc_divisor_sum_alt,
    osc_divisor_sum_continued,
    verify_carrier_two_route,
    verify_functional_equation,
    verify_odd_weight_hyperplane,
    verify_reflection_r2,
)
from mczeta.mchf import (
    PsiMultiArgs,
    asymptotic_tail_bound,
    lauricella_fd,
    lauricella_integral_identity,
    psi_multi_asymptotic,
    psi_multi_quadrature,
    psi_multi_reduced,
)
from mczeta.mzv import (
    ArgPoint,
    SigmaGcdWeight,
    zeta_ez2_continued,
    zeta_ez_direct,
    zeta_ez_weighted,
    zeta_riemann,
)
from mczeta.numkernel import (
    DEFAULT_BUDGET,
    CompensatedSum,
    DomainError,
    EvalBudget,
    Evaluation,
    PoleError,
    bernoulli,
    bernoulli_ratio,
    em_tail,
    gamma,
    kummer_1f1,
    log_gamma,
    pochhammer,
    principal_power,
    psi_u,
    psi_u_asymptotic,
    psi_u_family,
    rgamma,
)

__version__ = "0.1.0"

__all__ = [
    "ArgPoint",
    "CompensatedSum",
    "DEFAULT_BUDGET",
    "DomainError",
    "EvalBudget",
    "Evaluation",
    "FEReport",
    "IndexTuple",
    "PoleError",
    "PsiMultiArgs",
    "SigmaGcdWeight",
    "asymptotic_tail_bound",
    "bernoulli",
    "bernoulli_ratio",
    "divisor_sigma",
    "divisor_sigma_ez",
    "divisor_sigma_gcd",
    "divisor_sigma_prefix",
    "divisors",
    "em_tail",
    "fe_carrier_from_definition",
    "fe_carrier_from_osc_sums",
    "gamma",
    "kummer_1f1",
    "lauricella_fd",
    "lauricella_integral_identity",
    "log_gamma",
    "osc_divisor_sum",
    "osc_divisor_sum_alt",
    "osc_divisor_sum_continued",
    "pochhammer",
    "principal_power",
    "psi_multi_asymptotic",
    "psi_multi_quadrature",
    "psi_multi_reduced",
    "psi_u",
    "psi_u_asymptotic",
    "psi_u_family",
    "rgamma",
    "verify_carrier_two_route",
    "verify_functional_equation",
    "verify_odd_weight_hyperplane",
    "verify_reflection_r2",
    "zeta_ez2_continued",
    "zeta_ez_direct",
    "zeta_ez_weighted",
    "zeta_riemann",
    "__version__",
]
