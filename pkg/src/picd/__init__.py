"""Interval catch digraphs over two-class 1-D data.

One point class carries digraph vertices, the other partitions the line;
arcs follow parameterized proximity regions. The package computes domination
numbers (with a brute-force cross-check), the exact and asymptotic
distribution of the domination number under uniformity, uniformity and
goodness-of-fit tests built on it, and a Monte Carlo harness for size and
power studies. The ``picd`` console script exposes all of it.
"""
from .core import (
    CicdParams,
    Intervalization,
    PicdParams,
    TwoClassSample,
    anchor_point,
    intervalize,
    read_points,
)
from .digraph import (
    Digraph,
    arc_density,
    brute_force_domination,
    build_cicd,
    build_picd,
    edge_list,
)
from .domination import (
    DominationResult,
    GammaOneRegion,
    domination_number,
    gamma_one_region,
    interval_gamma,
)
from .exactdist import (
    BranchId,
    Pmf,
    asymptotic_pmf_multi,
    compositions,
    exact_pmf_conditional,
    exact_pmf_uniform,
    expected_gamma_uniform,
    p_asymptotic,
    p_limit_general_f,
    p_limit_product,
    p_u,
    r_star,
)
from .gof import (
    CriticalValues,
    TestReport,
    arc_density_test,
    chisq_test,
    default_subintervals,
    dom_test_binomial,
    dom_test_mc,
    g_statistic,
    gof_via_transform,
    ks_test,
    partition_points,
)
from .mc import (
    ExperimentPlan,
    ResultTable,
    StudyRow,
    calibrate_statistic,
    estimate_critical_values,
    estimate_p2,
    run_power_study,
    run_size_study,
)
from .proximity import Region, cicd_region, picd_region, transformed_region
from .sampling import (
    AlternativeSpec,
    RngStream,
    parse_alternative,
    sample_f1,
    sample_f2,
    sample_f3,
    sample_f4,
    sample_f5,
    sample_from,
    sample_uniform,
)

__version__ = "0.1.0"

__all__ = [
    "AlternativeSpec",
    "BranchId",
    "CicdParams",
    "CriticalValues",
    "Digraph",
    "DominationResult",
    "ExperimentPlan",
    "GammaOneRegion",
    "Intervalization",
    "PicdParams",
    "Pmf",
    "Region",
    "ResultTable",
    "RngStream",
    "StudyRow",
    "TestReport",
    "TwoClassSample",
    "anchor_point",
    "arc_density",
    "arc_density_test",
    "asymptotic_pmf_multi",
    "brute_force_domination",
    "build_cicd",
    "build_picd",
    "calibrate_statistic",
    "chisq_test",
    "cicd_region",
    "compositions",
    "default_subintervals",
    "dom_test_binomial",
    "dom_test_mc",
    "domination_number",
    "edge_list",
    "estimate_critical_values",
    "estimate_p2",
    "exact_pmf_conditional",
    "exact_pmf_uniform",
    "expected_gamma_uniform",
    "g_statistic",
    "gamma_one_region",
    "gof_via_transform",
    "interval_gamma",
    "intervalize",
    "ks_test",
    "p_asymptotic",
    "p_limit_general_f",
    "p_limit_product",
    "p_u",
    "parse_alternative",
    "partition_points",
    "picd_region",
    "r_star",
    "read_points",
    "run_power_study",
    "run_size_study",
    "sample_f1",
    "sample_f2",
    "sample_f3",
    "sample_f4",
    "sample_f5",
    "sample_from",
    "sample_uniform",
    "transformed_region",
]
