"""Exact kernel for F_q-linear series over perfected Laurent series fields."""

from .errors import (
    ComputationError,
    DivisionByZero,
    KernelError,
    NeedsFieldExtension,
    NonConvergent,
    NotSolvable,
    NotAUnit,
    OutsideConvergenceDomain,
    ParseError,
    PerfectionDepthExceeded,
    PrecisionExhausted,
    PreconditionError,
    ResidualCheckFailed,
    ValidationError,
    ZeroDenominator,
    ZeroInput,
)
from .fields import (
    INF,
    FieldConfig,
    FieldElem,
    PerfExp,
    PerfSeries,
    Valuation,
    is_inf,
    valuation,
)
from .series import (
    CompSeries,
    GrowthCertificate,
    cs_add,
    cs_compose,
    cs_eval,
    cs_self_power,
    growth_certificate,
    multinomial_coeff,
)
from .carlitz import bracket, carlitz_d, carlitz_delta, tau_power
from .ore import (
    FractionNormalForm,
    OreFraction,
    UnitFactorization,
    factor_unit,
    fraction_normalize,
    invert_unit,
    ore_left_multiple,
)
from .solvers import (
    ImplicitProblem,
    OdeProblem,
    RiccatiProblem,
    normalize_time_change,
    residual,
    riccati_series,
    solve_implicit,
    solve_ode,
    solve_riccati,
    untransform_ode_solution,
)
from .textio import (
    emit_comp_series,
    emit_perf_series,
    emit_series,
    parse_comp_series,
    parse_perf_series,
    parse_series,
)

__all__ = [
    "emit_comp_series",
    "emit_perf_series",
    "emit_series",
    "parse_comp_series",
    "parse_perf_series",
    "parse_series",
    "ImplicitProblem",
    "OdeProblem",
    "RiccatiProblem",
    "normalize_time_change",
    "residual",
    "riccati_series",
    "solve_implicit",
    "solve_ode",
    "solve_riccati",
    "untransform_ode_solution",
    "FractionNormalForm",
    "OreFraction",
    "UnitFactorization",
    "factor_unit",
    "fraction_normalize",
    "invert_unit",
    "ore_left_multiple",
    "CompSeries",
    "GrowthCertificate",
    "cs_add",
    "cs_compose",
    "cs_eval",
    "cs_self_power",
    "bracket",
    "carlitz_d",
    "carlitz_delta",
    "growth_certificate",
    "multinomial_coeff",
    "tau_power",
    "ComputationError",
    "DivisionByZero",
    "FieldConfig",
    "FieldElem",
    "INF",
    "KernelError",
    "NeedsFieldExtension",
    "NonConvergent",
    "NotSolvable",
    "NotAUnit",
    "OutsideConvergenceDomain",
    "ParseError",
    "PerfExp",
    "PerfSeries",
    "PerfectionDepthExceeded",
    "PrecisionExhausted",
    "PreconditionError",
    "ResidualCheckFailed",
    "Valuation",
    "ValidationError",
    "ZeroDenominator",
    "ZeroInput",
    "is_inf",
    "valuation",
]
