"""Evaluation routes for the pure-power kernels int x^m exp(i*c*x^n) dx.

Routes: Taylor series, the Kummer auxiliary V, the Neumann (Bessel)
expansion with exact coefficients, the incomplete-gamma continued
fraction and the closed-form complete integrals.
"""
from __future__ import annotations

import cmath
import logging
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import mpmath
from scipy import special

from .const import (
    BESSEL_MAX_ARG,
    CF_MAX_ITER,
    CF_TINY,
    CF_TOL,
    DEFAULT_MAX_ITER,
    DEFAULT_POWER_THRESHOLD,
)
from .exceptions import ConvergenceError, DomainError

_LOGGER = logging.getLogger(__name__)

_EPS = 2.220446049250313e-16

# xi_{n,s} = rho_n * R_{n,s}; d_n * rho_n = 2^nu Gamma(nu)
NEUMANN_NORMALISATION: Dict[int, Fraction] = {
    2: Fraction(2),
    3: Fraction(4, 9),
    4: Fraction(1, 2),
    5: Fraction(2, 5),
}

_NEUMANN_LOCK = threading.Lock()
_NEUMANN_CACHE: Dict[Tuple[int, int], NeumannExpansion] = {}


@dataclass(frozen=True)
class PowerKernelSpec:
    """The kernel x^m exp(i*c*x^n)."""

    m: int
    n: int
    c: float = 1.0

    def __post_init__(self) -> None:
        """Validate the kernel parameters."""
        if self.m < 0:
            raise DomainError(f"Kernel power m must be >= 0, got {self.m}")
        if self.n < 1:
            raise DomainError(f"Phase power n must be >= 1, got {self.n}")
        if self.c == 0:
            raise DomainError("Phase scale c must be nonzero")

    @property
    def a(self) -> float:
        """Gamma-function argument (m+1)/n."""
        return (self.m + 1) / self.n


@dataclass(frozen=True)
class KernelValue:
    """A route result: value, error estimate and number of terms used."""

    value: complex
    error_estimate: float
    terms: int
    route: str = ""


@dataclass(frozen=True)
class NeumannExpansion:
    """int_0^x sin(t^n) dt = d_n sum_s xi_s J_{2s+nu}(x^n)."""

    n: int
    d_n: float
    xi: Tuple[Fraction, ...]
    nu: Fraction


@dataclass(frozen=True)
class PowerReduction:
    """int_0^u x^m e^{icx^n} = weight * residual + boundary terms.

    Each boundary entry ``(b, k)`` stands for ``b * u^k * exp(i*c*u^n)``;
    all of them vanish at the origin.
    """

    spec: PowerKernelSpec
    residual: PowerKernelSpec
    weight: complex
    boundary: Tuple[Tuple[complex, int], ...] = field(default_factory=tuple)

    def boundary_value(self, u: float) -> complex:
        """Boundary terms at the upper limit ``u``."""
        if u == 0 or not self.boundary:
            return 0j
        phasor = cmath.exp(1j * self.spec.c * u**self.spec.n)
        return sum(b * u**k for b, k in self.boundary) * phasor

    def assemble(self, residual_value: complex, u: float) -> complex:
        """Rebuild the original integral from the residual integral."""
        return self.weight * residual_value + self.boundary_value(u)


def gamma_fn(a: float) -> float:
    """Gamma function.

    Raises:
        DomainError: ``a`` is a pole (zero or a negative integer)
    """
    if a <= 0 and float(a).is_integer():
        raise DomainError(f"Gamma has a pole at {a}")
    return float(special.gamma(a))


def log_gamma(a: float) -> float:
    """Logarithm of |Gamma(a)|.

    Raises:
        DomainError: ``a`` is a pole (zero or a negative integer)
    """
    if a <= 0 and float(a).is_integer():
        raise DomainError(f"Gamma has a pole at {a}")
    return float(special.gammaln(a))


def taylor_partial(spec: PowerKernelSpec, u: float, L: int) -> KernelValue:
    """Taylor partial sum of int_0^u x^m exp(icx^n) dx through l = L.

    The error estimate is the first omitted term.

    Raises:
        DomainError: ``L < 1`` or ``u < 0``
        ConvergenceError: Terms overflow, u is too large for this route
    """
    if L < 1:
        raise DomainError(f"Taylor order must be >= 1, got {L}")
    if u < 0:
        raise DomainError(f"Upper limit must be >= 0, got {u}")
    if u == 0:
        return KernelValue(0j, 0.0, 0, "taylor")

    z = 1j * spec.c * u**spec.n
    power: complex = u ** (spec.m + 1) + 0j  # u^{m+1} z^l / l!
    total = 0j
    for l in range(L + 1):
        if l:
            power *= z / l
        term = power / (spec.m + spec.n * l + 1)
        if not cmath.isfinite(term):
            raise ConvergenceError(
                f"Taylor terms overflow at u={u}", {"terms": l, "z": abs(z)}
            )
        total += term
    omitted = power * z / (L + 1) / (spec.m + spec.n * (L + 1) + 1)
    if not cmath.isfinite(total):
        raise ConvergenceError(f"Taylor sum overflow at u={u}", {"terms": L})
    return KernelValue(total, abs(omitted), L + 1, "taylor")


def _unit_hypergeometric(
    z: complex, lower: Sequence[float], max_terms: int
) -> Tuple[complex, int, float]:
    """Sum z^k / prod_i (b_i)_k, the pFq with a single upper parameter 1."""
    term = 1 + 0j
    total = 1 + 0j
    for k in range(max_terms):
        denominator = 1.0
        for b in lower:
            denominator *= b + k
        term *= z / denominator
        total += term
        shrinking = abs(z) < math.prod(b + k + 1 for b in lower)
        if shrinking and abs(term) <= _EPS * abs(total):
            return total, k + 1, abs(term)
    raise ConvergenceError(
        f"Hypergeometric series did not converge in {max_terms} terms",
        {"z": abs(z), "terms": max_terms},
    )


def kummer_V(spec: PowerKernelSpec, u: float, L: int = DEFAULT_MAX_ITER) -> KernelValue:
    """Kummer auxiliary V with int_0^u x^m e^{icx^n} dx = V(u) e^{icu^n}.

    V(u) = u^{m+1}/(m+1) 1F1(1; 1+(m+1)/n; -icu^n), summed directly.

    Raises:
        ConvergenceError: Series not converged within ``L`` terms
    """
    if u < 0:
        raise DomainError(f"Upper limit must be >= 0, got {u}")
    if u == 0:
        return KernelValue(0j, 0.0, 0, "kummer")
    prefactor = u ** (spec.m + 1) / (spec.m + 1)
    z = -1j * spec.c * u**spec.n
    total, terms, last = _unit_hypergeometric(z, (1 + spec.a,), L)
    return KernelValue(prefactor * total, prefactor * last, terms, "kummer")


def kummer_V_parts(
    n: int, m: int, u: float, L: int = DEFAULT_MAX_ITER
) -> Tuple[float, float]:
    """Real and imaginary part of V_{n,m}(u) from their 1F2 series."""
    if u == 0:
        return 0.0, 0.0
    half = (m + 1) / (2 * n)
    w = -(u ** (2 * n)) / 4
    even, _, _ = _unit_hypergeometric(w, (0.5 + half, 1 + half), L)
    odd, _, _ = _unit_hypergeometric(w, (1 + half, 1.5 + half), L)
    real = u ** (m + 1) / (m + 1) * even.real
    imag = -(u ** (m + n + 1)) / ((m + 1) * (1 + (m + 1) / n)) * odd.real
    return real, imag


def gamma_cf(
    s: float, z: complex, max_iter: int = CF_MAX_ITER, tol: float = CF_TOL
) -> complex:
    """Upper incomplete gamma Gamma(s, z) by the modified Lentz algorithm.

    Uses Gamma(s,z) = z^s e^{-z} / (1+z-s - 1(1-s)/(3+z-s - 2(2-s)/(5+z-s - ...))).

    Raises:
        DomainError: ``z == 0``
        ConvergenceError: No convergence within ``max_iter`` steps
    """
    z = complex(z)
    if z == 0:
        raise DomainError("Continued fraction needs z != 0")
    b = z + 1 - s
    c = 1 / CF_TINY
    d = 1 / b if abs(b) > CF_TINY else 1 / CF_TINY
    h = d
    for i in range(1, max_iter + 1):
        an = -i * (i - s)
        b += 2
        d = an * d + b
        if abs(d) < CF_TINY:
            d = CF_TINY
        c = b + an / c
        if abs(c) < CF_TINY:
            c = CF_TINY
        d = 1 / d
        delta = d * c
        h *= delta
        if abs(delta - 1) < tol:
            _LOGGER.debug("Gamma CF s=%s |z|=%.3g converged in %d steps", s, abs(z), i)
            return cmath.exp(s * cmath.log(z) - z) * h
    raise ConvergenceError(
        f"Incomplete gamma continued fraction did not converge for |z|={abs(z):.3g}",
        {"iterations": max_iter, "z": abs(z)},
    )


def lower_gamma(s: float, z: complex) -> complex:
    """gamma(s, z) = Gamma(s) - Gamma(s, z)."""
    return gamma_fn(s) - gamma_cf(s, z)


def _branch_factor(spec: PowerKernelSpec) -> complex:
    """(1/n) (i/c)^a on the principal branch."""
    angle = math.copysign(math.pi / 2, spec.c) * spec.a
    return abs(spec.c) ** (-spec.a) * complex(math.cos(angle), math.sin(angle)) / spec.n


def complete_power(spec: PowerKernelSpec) -> complex:
    """int_0^inf x^m exp(icx^n) dx = (1/n) (i/c)^{(m+1)/n} Gamma((m+1)/n).

    For n = 1 this is the Abel-regularised value.
    """
    return _branch_factor(spec) * gamma_fn(spec.a)


def gamma_route(spec: PowerKernelSpec, u: float) -> KernelValue:
    """Finite-u kernel integral from the incomplete gamma function."""
    if u == 0:
        return KernelValue(0j, 0.0, 0, "gamma")
    z = -1j * spec.c * u**spec.n
    tail = _branch_factor(spec) * gamma_cf(spec.a, z)
    complete = complete_power(spec)
    error = CF_TOL * abs(tail) + 4 * _EPS * (abs(complete) + abs(tail))
    return KernelValue(complete - tail, error, 0, "gamma")


def power_integral(
    spec: PowerKernelSpec, u: float, threshold: float = DEFAULT_POWER_THRESHOLD
) -> KernelValue:
    """int_0^u x^m exp(icx^n) dx with route dispatch on |c| u^n.

    Series for |c|u^n <= threshold, the gamma continued fraction above.
    ``u`` may be ``math.inf``.
    """
    if u < 0:
        raise DomainError(f"Upper limit must be >= 0, got {u}")
    if math.isinf(u):
        value = complete_power(spec)
        return KernelValue(value, 4 * _EPS * abs(value), 0, "complete")
    size = abs(spec.c) * u**spec.n
    if size <= threshold:
        order = 40 + int(4 * size)
        result = taylor_partial(spec, u, order)
        scale = u ** (spec.m + 1) * math.exp(size)
        return KernelValue(
            result.value,
            result.error_estimate + 8 * _EPS * scale,
            result.terms,
            result.route,
        )
    return gamma_route(spec, u)


def reduce_power_m(spec: PowerKernelSpec) -> PowerReduction:
    """Lower m below n by partial integration.

    icn int x^m e^{icx^n} = x^{m-n+1} e^{icx^n} - (m-n+1) int x^{m-n} e^{icx^n},
    applied until the residual kernel has m < n.
    """
    weight = 1 + 0j
    boundary: List[Tuple[complex, int]] = []
    m = spec.m
    factor = 1 / (1j * spec.c * spec.n)
    while m >= spec.n:
        k = m - spec.n + 1
        boundary.append((weight * factor, k))
        weight *= -k * factor
        m -= spec.n
    return PowerReduction(
        spec, PowerKernelSpec(m, spec.n, spec.c), weight, tuple(boundary)
    )


def linear_phase_closed_form(m: int, a: float, u: float) -> complex:
    """int_0^u x^m e^{iax} dx by repeated partial integration.

    Raises:
        DomainError: ``a == 0``
    """
    if a == 0:
        raise DomainError("Linear phase needs a nonzero slope")

    def antiderivative(x: float) -> complex:
        total = 0j
        for k in range(m + 1):
            total += 1j**k * math.perm(m, k) * (a * x) ** (m - k)
        return cmath.exp(1j * a * x) * total / (1j * a ** (m + 1))

    return antiderivative(u) - antiderivative(0.0)


def _pochhammer(x: Fraction, k: int) -> Fraction:
    result = Fraction(1)
    for j in range(k):
        result *= x + j
    return result


def _neumann_raw(n: int, s: int, nu: Fraction) -> Fraction:
    total = Fraction(0)
    for m in range(s + 1):
        r = s - m
        total += Fraction(
            4**r * (-1) ** r, (2 * n * r + n + 1) * math.factorial(2 * r + 1)
        ) * (_pochhammer(nu, 2 * s - m) / math.factorial(m))
    return (nu + 2 * s) * total


def neumann_prefactor(n: int) -> float:
    """d_n of the sine-integral Neumann expansion."""
    if n == 2:
        return math.sqrt(2 * math.pi) / 2
    if n == 3:
        return 2 ** (1 / 3) * math.pi * math.sqrt(3) / gamma_fn(2 / 3)
    if n == 4:
        return 2 ** (3 / 4) * math.pi / gamma_fn(3 / 4)
    if n == 5:
        return 2 ** (1 / 5) * math.pi / (math.sin(math.pi / 5) * gamma_fn(4 / 5))
    raise DomainError(f"Neumann expansion available for n = 2..5, not {n}")


def neumann_prefactor_mp(n: int, digits: int) -> mpmath.mpf:
    """d_n to ``digits`` significant digits with mpmath."""
    if n not in NEUMANN_NORMALISATION:
        raise DomainError(f"Neumann expansion available for n = 2..5, not {n}")
    with mpmath.workdps(digits + 10):
        nu = 1 + mpmath.mpf(1) / n
        rho = NEUMANN_NORMALISATION[n]
        return mpmath.power(2, nu) * mpmath.gamma(nu) * rho.denominator / rho.numerator


def neumann_limit(n: int) -> float:
    """Large-s limit of xi_{n,s} d_n, (2/n) Gamma(1/n) sin(pi/(2n))."""
    return 2 / n * gamma_fn(1 / n) * math.sin(math.pi / (2 * n))


def neumann_coeffs(n: int, S: int) -> NeumannExpansion:
    """Exact coefficients xi_{n,0..S} with their prefactor d_n.

    Results are cached; the cache is filled under a lock.

    Raises:
        DomainError: ``n`` outside 2..5 or ``S < 0``
    """
    if n not in NEUMANN_NORMALISATION:
        raise DomainError(f"Neumann expansion available for n = 2..5, not {n}")
    if S < 0:
        raise DomainError(f"Number of Neumann terms must be >= 0, got {S}")
    key = (n, S)
    with _NEUMANN_LOCK:
        cached = _NEUMANN_CACHE.get(key)
        if cached is None:
            nu = 1 + Fraction(1, n)
            rho = NEUMANN_NORMALISATION[n]
            xi = tuple(rho * _neumann_raw(n, s, nu) for s in range(S + 1))
            cached = NeumannExpansion(n, neumann_prefactor(n), xi, nu)
            _NEUMANN_CACHE[key] = cached
            _LOGGER.debug("Computed %d Neumann coefficients for n=%d", S + 1, n)
    return cached


def bessel_j(order: float, z: float) -> float:
    """Bessel J of real order from the ascending series.

    Raises:
        DomainError: ``z`` outside [0, 30]
        ConvergenceError: Series not settled
    """
    if order < 0:
        raise DomainError(f"Bessel order must be >= 0, got {order}")
    if z < 0 or z > BESSEL_MAX_ARG:
        raise DomainError(f"Ascending Bessel series used for 0 <= z <= 30, got {z}")
    if z == 0:
        return 1.0 if order == 0 else 0.0
    log_half = math.log(z / 2)
    total = 0.0
    for k in range(DEFAULT_MAX_ITER):
        magnitude = math.exp(
            (2 * k + order) * log_half
            - float(special.gammaln(k + 1))
            - log_gamma(k + order + 1)
        )
        total += -magnitude if k % 2 else magnitude
        if k > z / 2 and magnitude <= _EPS * abs(total):
            return total
    raise ConvergenceError(f"Bessel series J_{order}({z}) not converged")


def neumann_eval(expansion: NeumannExpansion, u: float) -> float:
    """int_0^u sin(x^n) dx = d_n sum_s xi_s J_{2s+nu}(u^n).

    Raises:
        ConvergenceError: Last retained term still significant
    """
    if u < 0:
        raise DomainError(f"Upper limit must be >= 0, got {u}")
    if u == 0:
        return 0.0
    z = u**expansion.n
    nu = float(expansion.nu)
    total = 0.0
    term = 0.0
    for s, xi in enumerate(expansion.xi):
        term = float(xi) * bessel_j(2 * s + nu, z)
        total += term
    if abs(term) > 1e-13 * max(abs(total), 1e-300) and abs(term) > 1e-300:
        raise ConvergenceError(
            f"Neumann expansion with {len(expansion.xi)} terms not converged at u={u}",
            {"last_term": abs(term), "terms": len(expansion.xi)},
        )
    return expansion.d_n * total
