"""Exact convergence-rate fractions and Kolmogorov distances for sums of discrete random variables."""

from .clt_engine import SumDistribution, SupportTooLarge, convolve, delta_n, kolmogorov_delta, normal_cdf
from .distributions import (
    DiscreteDistribution,
    EmptyAtomList,
    NonUnitMass,
    NonZeroMean,
    make_discrete,
    moment_g,
    truncated_second,
    truncated_third_abs,
    truncated_third_alg,
    two_point,
    variance,
)
from .fractions import (
    FractionParams,
    FractionResult,
    SumContext,
    Witness,
    esseen_fraction,
    iid_context,
    katz_petrov_fraction,
    lindeberg_L,
    Lambda,
    M,
    make_context,
    osipov_fraction,
    rozovskii_fraction,
    sup_zL,
)
from .gclass import (
    ClipAbove,
    ClipBelow,
    ConstantOne,
    GFunction,
    Identity,
    Power,
    Scaled,
    Tabulated,
    envelope_check,
    parse_gspec,
    parse_member,
    validate_gclass,
)

__version__ = "0.1.0"
