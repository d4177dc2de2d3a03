"""Generalized Fresnel integrals int_0^u p(x) exp(i*phi(x)) dx for polynomial p, phi."""
from __future__ import annotations

from .config import EvalConfig, load_config_file, resolve_config
from .exceptions import (
    ConfigError,
    ConvergenceError,
    DomainError,
    OscintError,
    PolynomialError,
)
from .general_kernel import (
    IntegralResult,
    ProblemSpec,
    complete_general,
    evaluate,
    laurent_coeffs,
    laurent_series,
    match_infinity,
    ode_residual,
    q_iterate,
    reduce,
)
from .poly_core import ComplexSeries, Polynomial, Series, parse_polynomial
from .power_kernel import PowerKernelSpec, complete_power, power_integral
from .quadrature_oracle import oracle_integrate

__version__ = "1.0.0"

__all__ = [
    "ComplexSeries",
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "EvalConfig",
    "IntegralResult",
    "OscintError",
    "Polynomial",
    "PolynomialError",
    "PowerKernelSpec",
    "ProblemSpec",
    "Series",
    "complete_general",
    "complete_power",
    "evaluate",
    "laurent_coeffs",
    "laurent_series",
    "load_config_file",
    "match_infinity",
    "ode_residual",
    "oracle_integrate",
    "parse_polynomial",
    "power_integral",
    "q_iterate",
    "reduce",
    "resolve_config",
]
