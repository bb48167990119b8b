"""Special functions, adaptive quadrature and a monotone root solver.

The exponential integral E1 and its overflow-safe product e^x E1(x) are
implemented directly (power series below 1, continued fraction above);
quadrature delegates to QUADPACK's adaptive Gauss-Kronrod scheme with
semi-infinite intervals mapped through t -> a + t/(1-t).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy import special as _sp

from .errors import BracketError, NumericError, ParameterError

__all__ = [
    "QuadratureResult",
    "exp_integral_e1",
    "f_exp_e1",
    "erfc_scaled",
    "quad_adaptive",
    "solve_monotone",
]

_EULER_GAMMA = 0.5772156649015328606


def _e1_series(x: float) -> float:
    # E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!), for small x
    total = 0.0
    term = 1.0
    for k in range(1, 60):
        term *= x / k
        contrib = term / k if k % 2 == 1 else -term / k
        total += contrib
        if abs(contrib) < 1e-18 * max(abs(total), 1e-300):
            break
    return -_EULER_GAMMA - math.log(x) + total


def _f_continued_fraction(x: float) -> float:
    # e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- 9/(...)))), modified Lentz
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for n in range(1, 400):
        a = -(n * n)
        b += 2.0
        d = b + a * d
        if abs(d) < tiny:
            d = tiny
        c = b + a / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    raise NumericError(f"continued fraction for e^x E1(x) did not converge at x={x}")


def exp_integral_e1(x: float) -> float:
    """E1(x) = integral_1^inf e^(-t x)/t dt for x > 0."""
    if not x > 0:
        raise ParameterError(f"E1 requires x > 0, got {x}")
    if x <= 1.0:
        return _e1_series(x)
    if x > 700.0:
        return 0.0  # below smallest double
    return math.exp(-x) * _f_continued_fraction(x)


def f_exp_e1(x: float) -> float:
    """Overflow-safe e^x E1(x); strictly decreasing from +inf to 0 on (0, inf)."""
    if not x > 0:
        raise ParameterError(f"f(x) = e^x E1(x) requires x > 0, got {x}")
    if x <= 1.0:
        return math.exp(x) * _e1_series(x)
    return _f_continued_fraction(x)


def erfc_scaled(x):
    """erfcx(x) = e^(x^2) erfc(x)."""
    return _sp.erfcx(x)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int


def quad_adaptive(f, a: float, b: float, tol: float = 1e-9,
                  limit: int = 200) -> QuadratureResult:
    """Adaptive quadrature of f on [a, b]; b may be +inf.

    Raises NumericError when the error estimate cannot be brought near tol.
    """
    if b == math.inf:
        def h(t):
            u = 1.0 - t
            if u <= 1e-14:
                return 0.0
            return f(a + t / u) / (u * u)

        return quad_adaptive(h, 0.0, 1.0, tol=tol, limit=limit)
    if not b >= a:
        raise ParameterError(f"need b >= a, got [{a}, {b}]")
    with np.errstate(all="ignore"):
        value, abserr, info = integrate.quad(
            f, a, b, epsabs=tol, epsrel=max(1e-12, tol), limit=limit, full_output=1)[:3]
    neval = int(info.get("neval", 0)) if isinstance(info, dict) else 0
    if abserr > 100.0 * max(tol, 1e-13 * abs(value)):
        raise NumericError(
            f"quadrature failed on [{a}, {b}]: estimate {value} with error {abserr} "
            f"after {neval} evaluations (tol {tol})")
    return QuadratureResult(float(value), float(abserr), neval)


def solve_monotone(f, target: float, lo: float, hi: float,
                   tol: float = 1e-10) -> float:
    """Bisection for f(x) = target with f monotone on [lo, hi].

    The interval must bracket the target; the returned x is within tol of the
    crossing.
    """
    if not hi > lo:
        raise ParameterError(f"need hi > lo, got [{lo}, {hi}]")
    flo = f(lo) - target
    fhi = f(hi) - target
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise BracketError(
            f"target {target} not bracketed on [{lo}, {hi}] (f(lo)-t={flo:g}, f(hi)-t={fhi:g})")
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol:
            return mid
        fm = f(mid) - target
        if fm == 0.0:
            return mid
        if (fm > 0) == (fhi > 0):
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)
