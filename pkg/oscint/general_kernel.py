"""Generalized Fresnel integrals int_0^u p(x) exp(i*phi(x)) dx.

The evaluation pipeline first reduces the problem (constant phase,
parity substitution, division by phi', completing the square), then
evaluates every irreducible piece with one of: the pure-power kernel,
the q-iteration about the origin, the asymptotic series at infinity
matched against the complete integral, or q-iteration on short
segments of bounded phase.
"""
from __future__ import annotations

import cmath
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Deque, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import special

from .config import EvalConfig
from .const import (
    DEFAULT_J,
    DEFAULT_TOL,
    DEFAULT_WINDOW_POINTS,
    DIVERGENCE_RUN,
    METHOD_ASYMPTOTIC_MATCH,
    METHOD_COMPLETE_CLOSED_FORM,
    METHOD_REDUCED_COMPOSITE,
    METHOD_TAYLOR_Q,
)
from .exceptions import ConvergenceError, DomainError, PolynomialError
from .poly_core import ComplexSeries, Polynomial, VariableKind, phase_breakpoints
from .power_kernel import PowerKernelSpec, power_integral

_LOGGER = logging.getLogger(__name__)

_EPS = 2.220446049250313e-16

# (-i)^k for k mod 4
_MINUS_I_POWERS = (1 + 0j, -1j, -1 + 0j, 1j)


@dataclass(frozen=True)
class ProblemSpec:
    """The integral of p(x) exp(i*phi(x)) from 0 to u (u may be inf)."""

    p: Polynomial
    phi: Polynomial
    u: float

    def __post_init__(self) -> None:
        """Validate the problem."""
        if self.p.is_zero:
            raise PolynomialError("Amplitude polynomial is identically zero")
        if self.phi.degree is None or self.phi.degree < 1:
            raise DomainError(f"Phase must have degree >= 1, got {self.phi}")
        u = float(self.u)
        if math.isnan(u) or u < 0:
            raise DomainError(f"Upper limit must be >= 0, got {self.u}")
        object.__setattr__(self, "u", u)

    @property
    def is_complete(self) -> bool:
        """True for the integral over [0, inf)."""
        return math.isinf(self.u)

    def describe(self) -> Dict[str, Any]:
        """JSON friendly description."""
        return {"p": str(self.p), "phi": str(self.phi), "u": self.u}


@dataclass(frozen=True)
class ReducedProblem:
    """prefactor * (sum weight_i * I(sub_i) + boundary)."""

    prefactor: complex
    terms: Tuple[Tuple[ProblemSpec, complex], ...]
    boundary: complex
    steps: Tuple[str, ...] = ()

    def assemble(self, values: Sequence[complex]) -> complex:
        """Combine the subproblem values into the original integral."""
        if len(values) != len(self.terms):
            raise ValueError(
                f"Expected {len(self.terms)} subproblem values, got {len(values)}"
            )
        total = sum((w * v for (_, w), v in zip(self.terms, values)), 0j)
        return self.prefactor * (total + self.boundary)


@dataclass(frozen=True)
class QEvaluation:
    """A q-series summed at one point."""

    value: complex
    last_term: float
    rounding: float
    diverged: bool

    @property
    def error_estimate(self) -> float:
        """Last-term truncation indicator plus rounding."""
        return self.last_term + self.rounding


@dataclass(frozen=True)
class QSeries:
    """Partial sums of q = sum_k q_{2k+1} with q_{2k+1} = (-i)^k r_k.

    ``terms`` holds the real polynomials r_k; r_0 is the antiderivative
    of p (or the seed constant) and r_k = int_0^x r_{k-1} phi'.
    """

    terms: Tuple[Polynomial, ...]
    phi: Polynomial

    @property
    def K(self) -> int:
        """Number of iterations performed."""
        return len(self.terms) - 1

    def partial(self, k: int) -> ComplexSeries:
        """q_{2k+1} as an exact complex polynomial."""
        r = self.terms[k]
        order = max(r.degree or 0, 0)
        negated = tuple(-c for c in r.coeffs)
        re, im = {
            0: (r.coeffs, ()),
            1: ((), negated),
            2: (negated, ()),
            3: ((), r.coeffs),
        }[k % 4]
        return ComplexSeries(re, im, VariableKind.POWER_OF_X, order)

    def total(self) -> ComplexSeries:
        """Sum of all partials as one complex polynomial."""
        order = max((r.degree or 0) for r in self.terms)
        re: List[Any] = [Fraction(0)] * (order + 1)
        im: List[Any] = [Fraction(0)] * (order + 1)
        for k in range(len(self.terms)):
            part = self.partial(k)
            for j in range(part.truncation_order + 1):
                re[j] += part.re[j]
                im[j] += part.im[j]
        return ComplexSeries(tuple(re), tuple(im), VariableKind.POWER_OF_X, order)

    @cached_property
    def _arrays(self) -> List[np.ndarray]:
        return [r.to_numpy() if not r.is_zero else np.zeros(1) for r in self.terms]

    def evaluate(self, x: float) -> QEvaluation:
        """Sum the series at ``x`` with truncation and rounding indicators."""
        magnitudes: List[float] = []
        value = 0j
        rounding = 0.0
        for k, coeffs in enumerate(self._arrays):
            term = float(npoly.polyval(x, coeffs))
            value += _MINUS_I_POWERS[k % 4] * term
            magnitudes.append(abs(term))
            rounding += float(npoly.polyval(abs(x), np.abs(coeffs)))
        return QEvaluation(
            value,
            magnitudes[-1],
            4 * _EPS * rounding,
            _is_diverging(magnitudes),
        )


@dataclass(frozen=True)
class AsymptoticSeries:
    """h(x) = sum_j h_j x^-j with I(x) = I(inf) + exp(i*phi(x)) h(x)."""

    p: Polynomial
    phi: Polynomial
    h: ComplexSeries

    @property
    def truncation_order(self) -> int:
        """Highest computed index."""
        return self.h.truncation_order

    def nonzero_indices(self) -> List[int]:
        """Indices j >= 1 with h_j != 0."""
        return [
            j
            for j in range(1, self.truncation_order + 1)
            if self.h.re[j] != 0 or self.h.im[j] != 0
        ]

    def evaluate(self, x: float, indices: Optional[Sequence[int]] = None) -> complex:
        """Sum h_j x^-j over ``indices`` (all computed terms by default)."""
        if indices is None:
            return self.h.evaluate(x)
        return sum((self.h.coefficient(j) * x ** (-j) for j in indices), 0j)

    def term(self, j: int, x: float) -> float:
        """|h_j x^-j|."""
        return abs(self.h.coefficient(j)) * x ** (-j)


@dataclass(frozen=True)
class CompleteIntegral:
    """I(inf) with the number of terms used and a tail estimate."""

    value: complex
    terms_used: int
    tail_estimate: float
    diagnostics: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class IntegralResult:
    """Outcome of evaluate()."""

    value: complex
    error_estimate: float
    method: str
    diagnostics: Dict[str, Any] = field(default_factory=dict)


def _is_diverging(magnitudes: Sequence[float]) -> bool:
    """Last DIVERGENCE_RUN terms each larger than the one before."""
    if len(magnitudes) <= DIVERGENCE_RUN:
        return False
    tail = magnitudes[-DIVERGENCE_RUN - 1 :]
    return all(b > a for a, b in zip(tail, tail[1:]))


def _to_float(p: Polynomial) -> Polynomial:
    return Polynomial(tuple(float(c) for c in p.coeffs))


def _phasor(phi: Polynomial, x: float) -> complex:
    return cmath.exp(1j * float(phi(x)))


# Reduction


def _division_boundary(quotient: Polynomial, phi: Polynomial, u: float) -> complex:
    """-i [quotient * exp(i*phi)]_0^u with the term at infinity dropped."""
    upper = 0j if math.isinf(u) else float(quotient(u)) * _phasor(phi, u)
    return -1j * (upper - float(quotient(0)))


def _reduce_into(
    p: Polynomial,
    phi: Polynomial,
    u: float,
    weight: complex,
    pieces: Dict[Tuple[Polynomial, Polynomial, float], complex],
    boundary: List[complex],
    steps: List[str],
) -> None:
    if p.is_zero:
        return
    degree = phi.degree or 0

    if degree >= 2 and phi.is_even() and p.is_odd():
        steps.append("parity")
        _reduce_into(
            p.decimate(1), phi.decimate(0), u * u, weight / 2, pieces, boundary, steps
        )
        return

    dphi = phi.derivative()
    if (p.degree or 0) >= (dphi.degree or 0):
        steps.append("division")
        quotient, remainder = p.divmod(dphi)
        boundary.append(weight * _division_boundary(quotient, phi, u))
        _reduce_into(
            quotient.derivative(), phi, u, weight * 1j, pieces, boundary, steps
        )
        _reduce_into(remainder, phi, u, weight, pieces, boundary, steps)
        return

    if degree == 2 and phi.coefficient(1) != 0:
        # p is constant here
        steps.append("square")
        a2 = float(phi.coefficient(2))
        shift = float(phi.coefficient(1)) / (2 * a2)
        kernel = Polynomial.monomial(phi.coefficient(2), 2)
        phase = cmath.exp(-1j * a2 * shift * shift)
        upper = u + shift
        for limit, sign in ((upper, 1), (shift, -1)):
            if limit == 0:
                continue
            key = (p, kernel, abs(limit))
            pieces[key] = pieces.get(key, 0j) + sign * math.copysign(
                1.0, limit
            ) * weight * phase
        return

    key = (p, phi, u)
    pieces[key] = pieces.get(key, 0j) + weight


def reduce(spec: ProblemSpec) -> ReducedProblem:
    """Reduce a problem to irreducible pieces.

    Each remaining piece has phi(0) = 0 and deg p < deg phi - 1, is not
    an odd amplitude under an even phase and, for quadratic phases, has
    no linear phase term.
    """
    alpha0 = spec.phi.coefficient(0)
    prefactor = cmath.exp(1j * float(alpha0))
    phi = spec.phi.without_constant()

    pieces: Dict[Tuple[Polynomial, Polynomial, float], complex] = {}
    boundary: List[complex] = []
    steps: List[str] = ["constant_phase"] if alpha0 != 0 else []
    _reduce_into(spec.p, phi, spec.u, 1 + 0j, pieces, boundary, steps)

    terms = tuple(
        (ProblemSpec(p, kernel, u), weight)
        for (p, kernel, u), weight in pieces.items()
        if weight != 0
    )
    _LOGGER.debug(
        "Reduced %s to %d pieces via %s", spec.describe(), len(terms), steps or "none"
    )
    return ReducedProblem(prefactor, terms, sum(boundary, 0j), tuple(steps))


# q-iteration about the origin


def q_iterate(
    p: Polynomial, phi: Polynomial, K: int, seed: Optional[Any] = None
) -> QSeries:
    """Run K steps of q_{2k+1} = -i int_0^x q_{2k-1} phi'.

    With exact inputs the partials are exact. ``seed`` replaces the
    first partial int_0^x p by a constant, which makes the partial sums
    approach seed * exp(-i*(phi(x) - phi(0))).
    """
    if phi.degree is None or phi.degree < 1:
        raise DomainError(f"Phase must have degree >= 1, got {phi}")
    if K < 0:
        raise DomainError(f"Iteration count must be >= 0, got {K}")

    dphi = phi.derivative()
    first = Polynomial((seed,)) if seed is not None else p.antiderivative()
    if first.is_exact and dphi.is_exact:
        terms = [first]
        for _ in range(K):
            terms.append((terms[-1] * dphi).antiderivative())
        return QSeries(tuple(terms), phi)

    derivative = dphi.to_numpy()
    current = first.to_numpy() if not first.is_zero else np.zeros(1)
    arrays = [current]
    for _ in range(K):
        current = npoly.polyint(npoly.polymul(current, derivative))
        arrays.append(current)
    return QSeries(tuple(Polynomial(tuple(a)) for a in arrays), phi)


def ode_residual(q: ComplexSeries, p: Polynomial, phi: Polynomial) -> ComplexSeries:
    """Residual p - i*q*phi' - q' of the first-order equation.

    For power-of-x q the residual is an exact polynomial. For an
    inverse-power q (q(inf) = 0) the residual is returned multiplied by
    x^-(l-1), l = deg phi, as a series in 1/x of the same order as q; it
    vanishes through that order when q is the asymptotic series.

    Raises:
        DomainError: Inverse-power q with deg p >= deg phi - 1
    """
    dphi = phi.derivative()
    if q.variable_kind is VariableKind.POWER_OF_X:
        re = Polynomial(q.re)
        im = Polynomial(q.im)
        res_re = p + im * dphi - re.derivative()
        res_im = -(re * dphi) - im.derivative()
        order = max(res_re.degree or 0, res_im.degree or 0)
        return ComplexSeries(
            res_re.coeffs, res_im.coeffs, VariableKind.POWER_OF_X, order
        )

    degree = phi.degree or 0
    lower = degree - 1
    if p.degree is not None and p.degree >= lower:
        raise DomainError(
            f"Asymptotic residual needs deg p < {lower}, got deg p = {p.degree}"
        )
    order = q.truncation_order
    re: List[Any] = []
    im: List[Any] = []
    for t in range(order + 1):
        a: Any = p.coefficient(lower - t) if t <= lower else Fraction(0)
        b: Any = Fraction(0)
        back = t - lower - 1
        if back >= 1:
            a += back * q.re[back]
            b += back * q.im[back]
        for j in range(1, degree + 1):
            index = t - degree + j
            if 1 <= index <= order:
                factor = j * phi.coefficient(j)
                # -i * (x + iy) = y - ix
                a += factor * q.im[index]
                b -= factor * q.re[index]
        re.append(a)
        im.append(b)
    return ComplexSeries(tuple(re), tuple(im), VariableKind.POWER_OF_INVERSE_X, order)


# Asymptotic series at infinity


def laurent_series(p: Polynomial, phi: Polynomial, T: int) -> AsymptoticSeries:
    """Coefficients h_1..h_T of the asymptotic series of I(x) - I(inf).

    With L = l - 1 and h_t = 0 for t <= 0 the recurrence is
    i*l*a_l*h_t = p_{L-t} + (t-L-1) h_{t-L-1} - i sum_{j<l} j*a_j h_{t-l+j}.

    Raises:
        DomainError: deg phi < 2 or deg p >= deg phi - 1
    """
    degree = phi.degree or 0
    if degree < 2:
        raise DomainError(f"Asymptotic series needs deg phi >= 2, got {phi}")
    lower = degree - 1
    if p.degree is not None and p.degree >= lower:
        raise DomainError(
            f"Asymptotic series needs deg p < {lower}, got deg p = {p.degree}"
        )
    if T < 1:
        raise DomainError(f"Truncation order must be >= 1, got {T}")

    lead = degree * phi.coefficient(degree)
    re: List[Any] = [Fraction(0)] * (T + 1)
    im: List[Any] = [Fraction(0)] * (T + 1)
    for t in range(1, T + 1):
        a: Any = p.coefficient(lower - t) if t <= lower else Fraction(0)
        b: Any = Fraction(0)
        back = t - lower - 1
        if back >= 1:
            a += back * re[back]
            b += back * im[back]
        for j in range(1, degree):
            index = t - degree + j
            if index >= 1:
                factor = j * phi.coefficient(j)
                a += factor * im[index]
                b -= factor * re[index]
        # h_t = (a + ib) / (i*lead) = (b - ia) / lead
        re[t] = b / lead
        im[t] = -a / lead
    h = ComplexSeries(tuple(re), tuple(im), VariableKind.POWER_OF_INVERSE_X, T)
    return AsymptoticSeries(p, phi, h)


def laurent_coeffs(m: int, phi: Polynomial, T: int) -> AsymptoticSeries:
    """Asymptotic series for the monomial amplitude x^m (m < deg phi - 1)."""
    if m < 0:
        raise DomainError(f"Amplitude power must be >= 0, got {m}")
    return laurent_series(Polynomial.monomial(1, m), phi, T)


# Complete integral


def complete_general(
    p: Polynomial, phi: Polynomial, J: int = DEFAULT_J, tol: float = DEFAULT_TOL
) -> CompleteIntegral:
    """I(inf) by expanding the lower phase terms into a power series.

    With E(x) = exp(i*g(x)), g = phi - a_l x^l, and p*E = sum t_j x^j,
    l*I = sum_j t_j Gamma((1+j)/l) (i/a_l)^((1+j)/l).

    Raises:
        DomainError: Constant phase
        ConvergenceError: The terms have not decayed below tol within J
    """
    degree = phi.degree
    if degree is None or degree < 1:
        raise DomainError(f"Phase must have degree >= 1, got {phi}")
    if p.is_zero:
        return CompleteIntegral(0j, 0, 0.0)
    lead = float(phi.coefficient(degree))
    lower = [float(phi.coefficient(k)) for k in range(degree)]

    exp_series = [cmath.exp(1j * lower[0])]
    for n in range(1, J + 1):
        acc = sum(
            (
                k * lower[k] * exp_series[n - k]
                for k in range(1, min(n, degree - 1) + 1)
            ),
            0j,
        )
        exp_series.append(1j * acc / n)

    amplitude = [float(c) for c in p.coeffs]
    products = np.convolve(np.array(amplitude, dtype=complex), np.array(exp_series))
    products = products[: J + 1]

    rotation = math.copysign(math.pi / 2, lead)
    log_lead = math.log(abs(lead))
    total = 0j
    magnitude_sum = 0.0
    recent: Deque[float] = deque(maxlen=degree + 1)
    used = 0
    converged = False
    for j, coefficient in enumerate(products):
        used = j + 1
        if coefficient == 0:
            recent.append(0.0)
        else:
            a = (1 + j) / degree
            log_size = math.log(abs(coefficient)) + special.gammaln(a) - a * log_lead
            if log_size > 700:
                raise ConvergenceError(
                    f"Complete integral terms overflow for p={p}, phi={phi}",
                    {"terms": used, "log_size": float(log_size)},
                )
            angle = cmath.phase(coefficient) + rotation * a
            size = math.exp(log_size)
            total += size * complex(math.cos(angle), math.sin(angle))
            magnitude_sum += size
            recent.append(size)
        if j >= 2 * degree and max(recent) <= _EPS * max(abs(total), 1e-300):
            converged = True
            break

    tail = (0.0 if converged else max(recent)) + 8 * _EPS * magnitude_sum
    diagnostics = {"terms": used, "tail": tail / degree}
    if not converged and tail / degree > tol:
        raise ConvergenceError(
            f"Complete integral for p={p}, phi={phi} did not converge in {J} terms",
            diagnostics,
        )
    return CompleteIntegral(total / degree, used, tail / degree, diagnostics)


def match_infinity(
    p: Polynomial,
    phi: Polynomial,
    K: int,
    T: int,
    window: Tuple[float, float],
    points: int = DEFAULT_WINDOW_POINTS,
) -> CompleteIntegral:
    """I(inf) as the gap exp(i*phi(x)) [q(x) - h(x)] inside a window.

    q uses K iterations and h the first T nonzero asymptotic terms. Each
    grid point gets the error estimate |last q term| + rounding + |first
    omitted h term|; the point of least error wins and the spread of the
    gap over points within twice that error is folded into the tail.

    Raises:
        DomainError: Invalid window
        ConvergenceError: q diverges at every grid point
    """
    lo, hi = window
    if not 0 < lo < hi:
        raise DomainError(f"Window must satisfy 0 < lo < hi, got {window}")
    if points < 2:
        raise DomainError(f"Need at least 2 window points, got {points}")

    p_float = _to_float(p)
    phi_float = _to_float(phi)
    degree = phi.degree or 0
    asymptotic = laurent_series(p_float, phi_float, (T + 1) * degree + degree)
    indices = asymptotic.nonzero_indices()
    used = indices[:T]
    following = indices[T] if len(indices) > T else None
    series = q_iterate(p_float, phi_float, K)

    candidates: List[Tuple[float, complex, float]] = []
    for x in np.geomspace(lo, hi, points):
        x = float(x)
        q_value = series.evaluate(x)
        if q_value.diverged:
            continue
        omitted = asymptotic.term(following, x) if following is not None else 0.0
        error = q_value.error_estimate + omitted
        gap = _phasor(phi_float, x) * (q_value.value - asymptotic.evaluate(x, used))
        if math.isfinite(error):
            candidates.append((error, gap, x))

    if not candidates:
        raise ConvergenceError(
            f"q-series diverges across the window {window} with K={K}",
            {"K": K, "T": T, "window": list(window)},
        )
    best_error, best_gap, best_x = min(candidates, key=lambda item: item[0])
    spread = max(
        (
            abs(gap - best_gap)
            for error, gap, _ in candidates
            if error <= 2 * best_error
        ),
        default=0.0,
    )
    _LOGGER.debug("Matched at x=%s with error %.3g", best_x, best_error)
    return CompleteIntegral(
        complex(best_gap),
        len(used),
        max(best_error, spread),
        {"x": best_x, "error": best_error, "spread": spread, "q_terms": K + 1},
    )


# Evaluation routes


def _power_piece(
    spec: ProblemSpec, c: Any, n: int, config: EvalConfig
) -> IntegralResult:
    value = 0j
    error = 0.0
    routes = []
    for m, coefficient in enumerate(spec.p.coeffs):
        if coefficient == 0:
            continue
        kernel = power_integral(
            PowerKernelSpec(m, n, float(c)), spec.u, config.power_threshold
        )
        value += float(coefficient) * kernel.value
        error += abs(float(coefficient)) * kernel.error_estimate
        routes.append(kernel.route)
    closed = spec.is_complete or any(route != "taylor" for route in routes)
    method = METHOD_COMPLETE_CLOSED_FORM if closed else METHOD_TAYLOR_Q
    return IntegralResult(value, error, method, {"kernel": "power", "routes": routes})


def _complete_piece(spec: ProblemSpec, config: EvalConfig) -> IntegralResult:
    try:
        result = complete_general(spec.p, spec.phi, config.J, config.tol)
        return IntegralResult(
            result.value,
            result.tail_estimate,
            METHOD_COMPLETE_CLOSED_FORM,
            dict(result.diagnostics),
        )
    except ConvergenceError as err:
        _LOGGER.warning("Closed form failed (%s), matching at finite x", err)
        failure = err.diagnostics

    matched = match_infinity(
        spec.p,
        spec.phi,
        config.K,
        config.T,
        (config.window_lo, config.window_hi),
        config.window_points,
    )
    diagnostics = {"closed_form": failure, **matched.diagnostics}
    if matched.tail_estimate > config.tol:
        raise ConvergenceError(
            f"I(inf) for p={spec.p}, phi={spec.phi} reached only "
            f"{matched.tail_estimate:.3g}, tolerance {config.tol:.3g}",
            diagnostics,
        )
    return IntegralResult(
        matched.value, matched.tail_estimate, METHOD_ASYMPTOTIC_MATCH, diagnostics
    )


def _segment(
    p: Polynomial, phi: Polynomial, a: float, b: float, K: int, tol: float
) -> Tuple[complex, float, bool]:
    """Integral over [a, b] via q-iteration anchored at the midpoint c.

    int_a^b p e^{i*phi} = exp(i*phi(b)) Q(h) - exp(i*phi(a)) Q(-h) with
    h = (b - a)/2 and Q the q-series of the problem shifted to c.
    """
    half = 0.5 * (b - a)
    centre = a + half
    shifted_phase = phi.shift(centre).without_constant()
    derivative = shifted_phase.derivative().to_numpy()
    current = npoly.polyint(p.shift(centre).to_numpy())
    right = 0j
    left = 0j
    rounding = 0.0
    magnitudes: List[float] = []
    for k in range(K + 1):
        if k:
            current = npoly.polyint(npoly.polymul(current, derivative))
        term_right = float(npoly.polyval(half, current))
        term_left = float(npoly.polyval(-half, current))
        right += _MINUS_I_POWERS[k % 4] * term_right
        left += _MINUS_I_POWERS[k % 4] * term_left
        rounding += 2 * float(npoly.polyval(half, np.abs(current)))
        magnitudes.append(max(abs(term_right), abs(term_left)))
        if k >= 2 and max(magnitudes[-2:]) <= tol:
            break
    converged = max(magnitudes[-2:]) <= tol and not _is_diverging(magnitudes)
    error = magnitudes[-1] + 4 * _EPS * rounding
    value = _phasor(phi, b) * right - _phasor(phi, a) * left
    return value, error, converged


def _segmented(
    spec: ProblemSpec, config: EvalConfig
) -> Tuple[complex, float, Dict[str, Any]]:
    p = _to_float(spec.p)
    phi = _to_float(spec.phi)
    u = spec.u
    points = phase_breakpoints(phi, 0.0, u, config.phase_step, config.max_segments)
    pending: Deque[Tuple[float, float]] = deque(zip(points, points[1:]))
    total = 0j
    error = 0.0
    done = 0
    splits = 0
    while pending:
        a, b = pending.popleft()
        if b <= a:
            continue
        value, segment_error, converged = _segment(
            p, phi, a, b, config.K, 0.5 * config.tol * (b - a) / u
        )
        if not converged:
            if done + len(pending) + 2 > config.max_segments or b - a <= 1e-12 * u:
                raise ConvergenceError(
                    f"Segmented q-iteration did not converge on [{a}, {b}]",
                    {"segments": done, "splits": splits, "K": config.K},
                )
            middle = 0.5 * (a + b)
            pending.appendleft((middle, b))
            pending.appendleft((a, middle))
            splits += 1
            continue
        total += value
        error += segment_error
        done += 1
    return total, error, {"route": "segments", "segments": done, "splits": splits}


def _finite_piece(spec: ProblemSpec, config: EvalConfig) -> IntegralResult:
    p = _to_float(spec.p)
    phi = _to_float(spec.phi)
    u = spec.u
    attempts: Dict[str, Any] = {}

    origin = q_iterate(p, phi, config.K).evaluate(u)
    if not origin.diverged and origin.error_estimate <= config.tol:
        return IntegralResult(
            _phasor(phi, u) * origin.value,
            origin.error_estimate,
            METHOD_TAYLOR_Q,
            {"route": "origin", "terms": config.K + 1},
        )
    attempts["origin"] = {
        "diverged": origin.diverged,
        "error": origin.error_estimate,
    }

    try:
        complete = complete_general(p, phi, config.J, config.tol)
        degree = phi.degree or 0
        asymptotic = laurent_series(p, phi, config.T + degree)
        kept = range(1, config.T + 1)
        omitted = max(
            asymptotic.term(j, u) for j in range(config.T + 1, config.T + degree + 1)
        )
        error = omitted + complete.tail_estimate
        if error <= config.tol:
            value = complete.value + _phasor(phi, u) * asymptotic.evaluate(u, kept)
            return IntegralResult(
                value,
                error,
                METHOD_ASYMPTOTIC_MATCH,
                {
                    "route": "infinity",
                    "T": config.T,
                    "complete_terms": complete.terms_used,
                },
            )
        attempts["infinity"] = {"error": error}
    except ConvergenceError as err:
        attempts["infinity"] = err.diagnostics

    _LOGGER.debug("Falling back to segmented q-iteration for %s", spec.describe())
    try:
        value, error, diagnostics = _segmented(spec, config)
    except (ConvergenceError, DomainError) as err:
        raise ConvergenceError(
            f"No route reached tolerance {config.tol:.3g} for {spec.describe()}: {err}",
            {**attempts, "segments": getattr(err, "diagnostics", {})},
        ) from err
    if error > config.tol:
        raise ConvergenceError(
            f"Segmented q-iteration reached only {error:.3g} for {spec.describe()}",
            {**attempts, "segments": diagnostics},
        )
    return IntegralResult(value, error, METHOD_TAYLOR_Q, {**diagnostics, **attempts})


def _evaluate_piece(spec: ProblemSpec, config: EvalConfig) -> IntegralResult:
    monomial = spec.phi.as_monomial()
    if monomial is not None:
        c, n = monomial
        return _power_piece(spec, c, n, config)
    if spec.is_complete:
        return _complete_piece(spec, config)
    return _finite_piece(spec, config)


def evaluate(spec: ProblemSpec, config: Optional[EvalConfig] = None) -> IntegralResult:
    """Evaluate int_0^u p(x) exp(i*phi(x)) dx.

    Raises:
        ConvergenceError: No route reached ``config.tol`` (the segment
            budget counts as a route failure)
    """
    config = config or EvalConfig()
    if spec.u == 0:
        return IntegralResult(0j, 0.0, METHOD_TAYLOR_Q, {"route": "empty"})

    reduced = reduce(spec)
    results = [_evaluate_piece(piece, config) for piece, _ in reduced.terms]
    value = reduced.assemble([result.value for result in results])
    error = sum(
        abs(weight) * result.error_estimate
        for (_, weight), result in zip(reduced.terms, results)
    ) + 8 * _EPS * abs(reduced.boundary)

    if len(results) == 1 and reduced.boundary == 0:
        diagnostics = dict(results[0].diagnostics)
        if reduced.steps:
            diagnostics["steps"] = list(reduced.steps)
        return IntegralResult(value, error, results[0].method, diagnostics)

    diagnostics = {
        "steps": list(reduced.steps),
        "boundary": [reduced.boundary.real, reduced.boundary.imag],
        "pieces": [
            {**piece.describe(), "method": result.method}
            for (piece, _), result in zip(reduced.terms, results)
        ],
    }
    return IntegralResult(value, error, METHOD_REDUCED_COMPOSITE, diagnostics)
