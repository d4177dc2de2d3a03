"""Adaptive Gauss-Kronrod quadrature used to cross-check the evaluator.

Brute force on purpose: the interval is pre-split at the critical points
of phi and wherever phi crosses a multiple of pi, then the 7/15-point
embedded pair bisects the worst interval until the summed error drops
below the tolerance.
"""
from __future__ import annotations

import heapq
import itertools
import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from .const import ORACLE_DEFAULT_TOL, ORACLE_MAX_MILESTONES, ORACLE_MAX_SUBDIV
from .exceptions import DomainError
from .general_kernel import ProblemSpec
from .poly_core import phase_breakpoints

_LOGGER = logging.getLogger(__name__)

_EPS = 2.220446049250313e-16

# Kronrod abscissae on [0, 1], descending; odd indices are the Gauss nodes
_XGK = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
_WGK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
_WG = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_WEIGHTS = np.zeros(15)
_GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
_GAUSS_WEIGHTS[[13, 11, 9]] = _WG[:3]
_GAUSS_WEIGHTS[7] = _WG[3]


@dataclass(frozen=True)
class OracleResult:
    """Quadrature value with its reported absolute error."""

    value: complex
    abs_error: float
    subdivisions: int
    converged: bool = True


@dataclass(frozen=True)
class _Panel:
    lo: float
    hi: float
    value: complex
    error: float
    floor: float


def _kronrod(p: np.ndarray, phi: np.ndarray, lo: float, hi: float) -> _Panel:
    """One G7/K15 panel; the error never drops below the rounding floor."""
    half = 0.5 * (hi - lo)
    centre = lo + half
    x = centre + half * _NODES
    f = npoly.polyval(x, p) * np.exp(1j * npoly.polyval(x, phi))
    kronrod = half * complex(np.dot(_KRONROD_WEIGHTS, f))
    gauss = half * complex(np.dot(_GAUSS_WEIGHTS, f))
    floor = 50 * _EPS * half * float(np.dot(_KRONROD_WEIGHTS, np.abs(f)))
    return _Panel(lo, hi, kronrod, max(abs(kronrod - gauss), floor), floor)


def oracle_integrate(
    spec: ProblemSpec,
    tol: float = ORACLE_DEFAULT_TOL,
    max_subdiv: int = ORACLE_MAX_SUBDIV,
) -> OracleResult:
    """Integrate p(x) exp(i*phi(x)) over [0, u] by adaptive bisection.

    Args:
        spec: Problem with a finite upper limit
        tol: Target for the summed absolute error
        max_subdiv: Maximum number of panels

    Returns:
        The estimate; ``converged`` is False when the panel budget ran out

    Raises:
        DomainError: Infinite u or too many phase milestones
    """
    if spec.is_complete:
        raise DomainError("The quadrature oracle needs a finite upper limit")
    if spec.u == 0:
        return OracleResult(0j, 0.0, 0)

    p = spec.p.to_numpy()
    phi = spec.phi.to_numpy()
    points = phase_breakpoints(spec.phi, 0.0, spec.u, math.pi, ORACLE_MAX_MILESTONES)

    counter = itertools.count()
    heap: List[Tuple[float, int, _Panel]] = []
    for lo, hi in zip(points, points[1:]):
        if hi > lo:
            panel = _kronrod(p, phi, lo, hi)
            heapq.heappush(heap, (-panel.error, next(counter), panel))

    converged = True
    total_error = sum(-item[0] for item in heap)
    while total_error > tol:
        _, _, worst = heap[0]
        if worst.error <= worst.floor:
            # every panel is at its rounding floor
            break
        if len(heap) >= max_subdiv:
            converged = False
            _LOGGER.warning(
                "Oracle budget of %d panels exhausted for %s",
                max_subdiv,
                spec.describe(),
            )
            break
        heapq.heappop(heap)
        total_error -= worst.error
        middle = 0.5 * (worst.lo + worst.hi)
        for lo, hi in ((worst.lo, middle), (middle, worst.hi)):
            panel = _kronrod(p, phi, lo, hi)
            heapq.heappush(heap, (-panel.error, next(counter), panel))
            total_error += panel.error

    panels = sorted((item[2] for item in heap), key=lambda panel: panel.lo)
    value = sum((panel.value for panel in panels), 0j)
    error = sum(panel.error for panel in panels)
    _LOGGER.debug("Oracle used %d panels, error %.3g", len(panels), error)
    return OracleResult(value, error, len(panels), converged)
