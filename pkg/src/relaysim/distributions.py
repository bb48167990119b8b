"""Closed-form and quadrature-based CQI distributions and selection probabilities.

Conventions: ``intensity`` is the mean relay count per unit area, ``half_distance``
the geometry parameter d, and ``gamma`` a selection-metric value. Every cdf is 0
below its support minimum; laws driven by a finite-mean point count are
defective (total mass < 1), the missing mass being the no-relay event.

Numerical notes: arcsec(x) is evaluated as arccos(1/x) and arccsc(x) as
arcsin(1/x); scaled erfc avoids overflow in the sufficiency probability; the
benchmark-policy integrals run over x = psi^2 with a further square-root shift
that removes the integrable endpoint singularity of the density integrand.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NumericError, ParameterError, UnsupportedOperationError
from .model import PathLoss
from .numerics import erfc_scaled, quad_adaptive, solve_monotone

__all__ = [
    "best_cqi_cdf", "best_cqi_pdf", "best_cqi_log_pdf", "best_cqi_mean",
    "disc_point_metric_cdf", "best_cqi_cdf_finite",
    "annulus_metric_ccdf",
    "midpoint_cqi_cdf", "midpoint_cqi_pdf",
    "closest_to_destination_cqi_cdf", "closest_to_destination_cqi_pdf",
    "prob_sufficient", "prob_midpoint_optimal", "midpoint_displacement_exponent",
    "received_snr_cdf", "received_snr_pdf",
    "best_received_snr_cdf", "best_received_snr_pdf",
    "isotropic_best_cqi_cdf", "isotropic_best_cqi_pdf",
    "exclusion_cqi_cdf", "ring_cqi_cdf", "gaussian_cqi_cdf",
    "unequal_snr_cqi_cdf", "unequal_snr_support_min",
    "CqiLaw", "best_cqi_law", "best_cqi_law_finite",
    "midpoint_cqi_law", "closest_to_destination_cqi_law", "unequal_snr_cqi_law",
    "nearest_neighbor_pdf", "nearest_neighbor_cdf",
]


def _check_positive(**kwargs):
    for name, v in kwargs.items():
        if not v > 0:
            raise ParameterError(f"{name} must be positive, got {v}")


def _vectorized(gamma, fn):
    g = np.asarray(gamma, dtype=float)
    out = fn(np.atleast_1d(g).astype(float))
    return float(out[0]) if g.ndim == 0 else out.reshape(g.shape)


def _lens_shape(x: np.ndarray) -> np.ndarray:
    # area of {metric <= gamma} equals 2 d^2 * _lens_shape(gamma/d); zero at x=1
    xs = np.maximum(x, 1.0)
    return xs * xs * np.arccos(1.0 / xs) - np.sqrt(xs * xs - 1.0)


def _lens_area(separation: float, r1: float, r2: float) -> float:
    """Intersection area of discs with the given center separation and radii."""
    if r1 + r2 <= separation:
        return 0.0
    if abs(r1 - r2) >= separation:
        r = min(r1, r2)
        return math.pi * r * r
    c1 = (separation ** 2 + r1 ** 2 - r2 ** 2) / (2.0 * separation * r1)
    c2 = (separation ** 2 + r2 ** 2 - r1 ** 2) / (2.0 * separation * r2)
    k = ((r1 + r2 - separation) * (separation + r1 - r2)
         * (separation - r1 + r2) * (separation + r1 + r2))
    return (r1 * r1 * math.acos(min(1.0, max(-1.0, c1)))
            + r2 * r2 * math.acos(min(1.0, max(-1.0, c2)))
            - 0.5 * math.sqrt(max(k, 0.0)))


# ---------------------------------------------------------------------------
# best (optimum-policy) CQI over an unbounded homogeneous Poisson field

def best_cqi_cdf(gamma, intensity: float, half_distance: float):
    """cdf of the minimal selection metric; support starts at the half distance."""
    _check_positive(intensity=intensity, half_distance=half_distance)
    d, lam = half_distance, intensity

    def fn(g):
        out = np.zeros_like(g)
        on = g >= d
        fin = on & np.isfinite(g)
        out[fin] = -np.expm1(-2.0 * lam * d * d * _lens_shape(g[fin] / d))
        out[on & ~np.isfinite(g)] = 1.0
        return out

    return _vectorized(gamma, fn)


def best_cqi_pdf(gamma, intensity: float, half_distance: float):
    _check_positive(intensity=intensity, half_distance=half_distance)
    d, lam = half_distance, intensity

    def fn(g):
        out = np.zeros_like(g)
        on = (g >= d) & np.isfinite(g)
        x = g[on] / d
        out[on] = (4.0 * lam * g[on] * np.arccos(1.0 / x)
                   * np.exp(-2.0 * lam * d * d * _lens_shape(x)))
        return out

    return _vectorized(gamma, fn)


def best_cqi_log_pdf(gamma, intensity: float, half_distance: float):
    """Natural log of the best-CQI density; stays finite deep into the tail,
    where the density itself underflows doubles (exponent ~ -pi * intensity *
    gamma^2)."""
    _check_positive(intensity=intensity, half_distance=half_distance)
    d, lam = half_distance, intensity

    def fn(g):
        out = np.full_like(g, -np.inf)
        on = (g > d) & np.isfinite(g)
        x = g[on] / d
        out[on] = (np.log(4.0 * lam * g[on] * np.arccos(1.0 / x))
                   - 2.0 * lam * d * d * _lens_shape(x))
        return out

    return _vectorized(gamma, fn)


def best_cqi_mean(intensity: float, half_distance: float, tol: float = 1e-8) -> float:
    """Mean of the best CQI: the support bound d plus the integrated tail."""
    _check_positive(intensity=intensity, half_distance=half_distance)
    d, lam = half_distance, intensity
    c = 2.0 * lam * d * d
    tail = quad_adaptive(lambda x: math.exp(-c * _lens_shape(np.asarray(x))),
                         1.0, math.inf, tol=tol)
    return d + d * tail.value


# ---------------------------------------------------------------------------
# finite simulation window

def disc_point_metric_cdf(gamma, window_radius: float, half_distance: float):
    """cdf of the metric at a single point uniform on the disc of the given radius."""
    _check_positive(window_radius=window_radius, half_distance=half_distance)
    d, tau = half_distance, window_radius

    def fn(g):
        out = np.zeros_like(g)
        mid = (g >= d) & (g <= math.hypot(tau, d))
        x = g[mid]
        out[mid] = (2.0 / (math.pi * tau * tau)) * (
            x * x * np.arccos(np.minimum(d / x, 1.0)) - d * np.sqrt(np.maximum(x * x - d * d, 0.0)))
        rim = (g > math.hypot(tau, d)) & (g <= tau + d)
        x = g[rim]
        q = tau * tau + d * d - x * x  # negative on this branch
        root = np.sqrt(np.maximum(4.0 * d * d * tau * tau - q * q, 0.0))
        t1 = (2.0 * x * x / (math.pi * tau * tau)) * (
            np.arccos(np.clip(q / (-2.0 * d * tau), -1.0, 1.0))
            - np.arctan2(root, tau * tau - d * d + x * x))
        t2 = -(2.0 / math.pi) * np.arcsin(np.clip(q / (2.0 * d * tau), -1.0, 1.0))
        t3 = -np.sqrt(np.maximum(
            (tau - d + x) * (tau + d - x) * (d - tau + x) * (tau + d + x), 0.0)) / (math.pi * tau * tau)
        out[rim] = t1 + t2 + t3
        out[g > tau + d] = 1.0
        return out

    return _vectorized(gamma, fn)


def best_cqi_cdf_finite(gamma, intensity: float, half_distance: float,
                        window_radius: float):
    """Best-CQI cdf when relays are confined to a disc; defective by the
    no-relay mass exp(-intensity * pi * window_radius^2)."""
    _check_positive(intensity=intensity)
    lam, tau = intensity, window_radius

    def fn(g):
        base = np.atleast_1d(disc_point_metric_cdf(g, window_radius, half_distance))
        return -np.expm1(-lam * math.pi * tau * tau * base)

    return _vectorized(gamma, fn)


# ---------------------------------------------------------------------------
# metric of a uniform point on an annulus (feeds the optimality probability)

def annulus_metric_ccdf(t, inner_radius: float, outer_radius: float,
                        half_distance: float):
    """P(metric > t) for a point uniform on the annulus between the two radii.

    Requires outer_radius >= sqrt(inner^2 + 2 d inner) so the five-branch
    closed form applies.
    """
    d, psi, tau = half_distance, inner_radius, outer_radius
    _check_positive(outer_radius=outer_radius, half_distance=half_distance)
    if psi < 0:
        raise ParameterError(f"inner_radius must be non-negative, got {psi}")
    if tau < math.sqrt(psi * psi + 2.0 * d * psi):
        raise ParameterError(
            f"need outer_radius >= sqrt(inner^2 + 2 d inner) = "
            f"{math.sqrt(psi * psi + 2 * d * psi):g}, got {tau}")
    area2 = tau * tau - psi * psi

    def p_term(tv, y):
        rem = np.sqrt(np.maximum(tv * tv - y * y, 0.0))
        return (2.0 * y * rem + 2.0 * tv * tv * np.arctan2(y, rem)) / (math.pi * area2)

    def fn(tv):
        out = np.zeros_like(tv)
        out[tv < math.hypot(psi, d)] = 1.0
        near = (tv >= math.hypot(psi, d)) & (tv < psi + d)
        if near.any():
            x = tv[near]
            a = np.arccos(np.clip((x * x - psi * psi - d * d) / (2.0 * d * psi), -1.0, 1.0))
            out[near] = ((tau * tau - x * x) / area2
                         + (2.0 * a * (x * x - psi * psi) + d * d * np.sin(2.0 * a))
                         / (math.pi * area2)
                         + p_term(x, d) - p_term(x, d * np.sin(a)))
        mid = (tv >= psi + d) & (tv < math.hypot(tau, d))
        if mid.any():
            x = tv[mid]
            out[mid] = (tau * tau - x * x) / area2 + p_term(x, d)
        far = (tv >= math.hypot(tau, d)) & (tv < tau + d)
        if far.any():
            x = tv[far]
            b = np.arccos(np.clip((x * x - tau * tau - d * d) / (2.0 * d * tau), -1.0, 1.0))
            out[far] = ((2.0 * b * (tau * tau - x * x) - d * d * np.sin(2.0 * b))
                        / (math.pi * area2)
                        + p_term(x, d * np.sin(b)))
        return out

    return _vectorized(t, fn)


# ---------------------------------------------------------------------------
# benchmark policies: mid-point and closest-to-destination

def nearest_neighbor_pdf(psi, intensity: float):
    """Distance from the origin to the nearest point of the Poisson field."""
    p = np.asarray(psi, dtype=float)
    out = np.where(p >= 0, 2.0 * intensity * math.pi * p
                   * np.exp(-intensity * math.pi * p * p), 0.0)
    return float(out) if out.ndim == 0 else out


def nearest_neighbor_cdf(psi, intensity: float):
    p = np.asarray(psi, dtype=float)
    out = np.where(p >= 0, -np.expm1(-intensity * math.pi * p * p), 0.0)
    return float(out) if out.ndim == 0 else out


def _mid_cdf_scalar(g: float, lam: float, d: float, tol: float) -> float:
    if g <= d:
        return 0.0
    if not math.isfinite(g):
        return 1.0
    lo, hi = (g - d) ** 2, g * g - d * d

    def integrand(x):
        arg = (g * g - x - d * d) / (2.0 * d * math.sqrt(x))
        return math.exp(-lam * math.pi * x) * math.acos(min(1.0, max(-1.0, arg)))

    q = quad_adaptive(integrand, lo, hi, tol=tol)
    return nearest_neighbor_cdf(math.sqrt(hi), lam) - 2.0 * lam * q.value


def midpoint_cqi_cdf(gamma, intensity: float, half_distance: float, tol: float = 1e-10):
    """cdf of the metric at the relay nearest to the mid-point."""
    _check_positive(intensity=intensity, half_distance=half_distance)
    return _vectorized(gamma, lambda g: np.array(
        [_mid_cdf_scalar(v, intensity, half_distance, tol) for v in g]))


def _sqrt_shift_quad(lam: float, lo: float, span: float, far: float, tol: float) -> float:
    # integral of exp(-lam pi x)/sqrt((x - lo)(lo + far - x)) over [lo, lo + span]
    # via x = lo + u^2, which removes the lower-endpoint singularity
    def integrand(u):
        return 2.0 * math.exp(-lam * math.pi * (lo + u * u)) / math.sqrt(far - u * u)

    return quad_adaptive(integrand, 0.0, math.sqrt(span), tol=tol).value


def _mid_pdf_scalar(g: float, lam: float, d: float, tol: float) -> float:
    if g <= d or not math.isfinite(g):
        return 0.0
    lo, hi = (g - d) ** 2, g * g - d * d
    far = (g + d) ** 2 - lo
    return 4.0 * lam * g * _sqrt_shift_quad(lam, lo, hi - lo, far, tol)


def midpoint_cqi_pdf(gamma, intensity: float, half_distance: float, tol: float = 1e-10):
    _check_positive(intensity=intensity, half_distance=half_distance)
    return _vectorized(gamma, lambda g: np.array(
        [_mid_pdf_scalar(v, intensity, half_distance, tol) for v in g]))


def _c2d_cdf_scalar(g: float, lam: float, d: float, tol: float) -> float:
    if g <= d:
        return 0.0
    if not math.isfinite(g):
        return 1.0
    lo, hi = (g - 2.0 * d) ** 2, g * g

    def integrand(x):
        arg = (x + 4.0 * d * d - g * g) / (4.0 * d * math.sqrt(x))
        return math.exp(-lam * math.pi * x) * math.acos(min(1.0, max(-1.0, arg)))

    q = quad_adaptive(integrand, lo, hi, tol=tol)
    return nearest_neighbor_cdf(g - 2.0 * d, lam) + lam * q.value


def closest_to_destination_cqi_cdf(gamma, intensity: float, half_distance: float,
                                   tol: float = 1e-10):
    """cdf of the metric at the relay nearest to the destination."""
    _check_positive(intensity=intensity, half_distance=half_distance)
    return _vectorized(gamma, lambda g: np.array(
        [_c2d_cdf_scalar(v, intensity, half_distance, tol) for v in g]))


def _c2d_pdf_scalar(g: float, lam: float, d: float, tol: float) -> float:
    if g <= d or not math.isfinite(g):
        return 0.0
    lo, hi = (g - 2.0 * d) ** 2, g * g
    far = (g + 2.0 * d) ** 2 - lo
    atom = math.acos(min(1.0, d / g)) * math.exp(-lam * math.pi * g * g)
    return 2.0 * lam * g * (atom + _sqrt_shift_quad(lam, lo, hi - lo, far, tol))


def closest_to_destination_cqi_pdf(gamma, intensity: float, half_distance: float,
                                   tol: float = 1e-10):
    _check_positive(intensity=intensity, half_distance=half_distance)
    return _vectorized(gamma, lambda g: np.array(
        [_c2d_pdf_scalar(v, intensity, half_distance, tol) for v in g]))


# ---------------------------------------------------------------------------
# mid-point optimality

def prob_sufficient(intensity: float, half_distance: float) -> float:
    """Probability of the sufficiency certificate for mid-point optimality.

    Evaluated through the scaled complementary error function, so large
    intensity * d^2 cannot overflow.
    """
    _check_positive(intensity=intensity, half_distance=half_distance)
    return float(erfc_scaled(math.sqrt(intensity * math.pi) * half_distance))


def midpoint_displacement_exponent(psi: float, theta: float, half_distance: float) -> float:
    """Area-type exponent P(psi, theta) controlling how likely a relay beats
    the mid-point selection from norm psi and angle theta in [0, pi/2]."""
    d = half_distance
    s2 = psi * psi + 2.0 * d * psi * math.cos(theta) + d * d

    def v_term(y):
        rem = math.sqrt(max(s2 - y * y, 0.0))
        return 2.0 * y * rem + 2.0 * s2 * math.atan2(y, rem)

    return ((s2 - psi * psi) * (math.pi - 2.0 * theta)
            - d * d * math.sin(2.0 * theta)
            - v_term(d) + v_term(d * math.sin(theta)))


def prob_midpoint_optimal(intensity: float, half_distance: float,
                          tol: float = 1e-8) -> float:
    """Probability that the mid-point policy picks the overall best relay."""
    _check_positive(intensity=intensity, half_distance=half_distance)
    lam, d = intensity, half_distance
    scale = 1.0 / math.sqrt(lam)

    def inner(theta):
        def f(psi):
            return (math.exp(-lam * midpoint_displacement_exponent(psi, theta, d))
                    * nearest_neighbor_pdf(psi, lam))

        # nearest-neighbor weight dies off within a few 1/sqrt(lam)
        return quad_adaptive(f, 0.0, 8.0 * scale, tol=tol * 0.05).value

    outer = quad_adaptive(inner, 0.0, math.pi / 2.0, tol=tol * 0.5)
    return (2.0 / math.pi) * outer.value


# ---------------------------------------------------------------------------
# received SNR factor S = snr * G(CQI)

def received_snr_cdf(s, law: "CqiLaw", snr: float, path_loss: PathLoss):
    """cdf of the post-path-loss link SNR under the given CQI law."""
    _check_positive(snr=snr)

    def fn(sv):
        out = np.empty_like(sv)
        for i, v in enumerate(sv):
            if v <= 0:
                out[i] = 0.0
                continue
            x = path_loss.gain_inverse(v / snr)
            out[i] = 1.0 - law.cdf(x) if math.isfinite(x) else 1.0 - law.total_mass
        return out

    return _vectorized(s, fn)


def received_snr_pdf(s, law: "CqiLaw", snr: float, path_loss: PathLoss):
    """Density of the link SNR; needs a smooth path loss and a law density."""
    _check_positive(snr=snr)
    if not path_loss.smooth:
        raise UnsupportedOperationError(
            f"received-SNR density undefined for non-smooth path loss '{path_loss.name}'")
    if law.pdf is None:
        raise UnsupportedOperationError(f"law '{law.name}' has no density")

    def fn(sv):
        out = np.zeros_like(sv)
        top = snr * path_loss.gain(law.support_min)
        for i, v in enumerate(sv):
            if v <= 0 or v >= top:
                continue
            x = path_loss.gain_inverse(v / snr)
            out[i] = law.pdf(x) / (snr * abs(path_loss.gain_derivative(x)))
        return out

    return _vectorized(s, fn)


def best_received_snr_cdf(s, intensity, half_distance, snr, path_loss):
    return received_snr_cdf(s, best_cqi_law(intensity, half_distance), snr, path_loss)


def best_received_snr_pdf(s, intensity, half_distance, snr, path_loss):
    return received_snr_pdf(s, best_cqi_law(intensity, half_distance), snr, path_loss)


# ---------------------------------------------------------------------------
# isotropic (non-homogeneous) fields

def _reach(g: float, d: float, theta: np.ndarray) -> np.ndarray:
    # radius of the centered ball swept at angle theta for metric level g
    return np.sqrt(g * g - (d * np.sin(theta)) ** 2) - d * np.cos(theta)


def isotropic_best_cqi_cdf(gamma, mean_measure: Callable[[float], float],
                           half_distance: float, tol: float = 1e-9):
    """Best-CQI cdf for a rotation-invariant Poisson field.

    ``mean_measure(r)`` is the expected point count in the centered ball of
    radius r (non-decreasing, 0 at 0).
    """
    _check_positive(half_distance=half_distance)
    d = half_distance

    def one(g: float) -> float:
        if g < d:
            return 0.0
        if not math.isfinite(g):
            g = 1e300

        def f(theta):
            return mean_measure(float(_reach(g, d, np.asarray(theta))))

        q = quad_adaptive(f, 0.0, math.pi / 2.0, tol=tol)
        return -math.expm1(-(2.0 / math.pi) * q.value)

    return _vectorized(gamma, lambda gs: np.array([one(v) for v in gs]))


def isotropic_best_cqi_pdf(gamma, radial_intensity: Callable[[float], float],
                           half_distance: float,
                           mean_measure: Callable[[float], float] | None = None,
                           tol: float = 1e-9):
    """Best-CQI density for an isotropic field with continuous radial intensity.

    ``mean_measure`` may be passed when a closed form exists; otherwise it is
    recovered from the radial intensity by quadrature.
    """
    _check_positive(half_distance=half_distance)
    d = half_distance

    if mean_measure is None:
        def mean_measure(r):  # noqa: F811 - deliberate default
            if r <= 0:
                return 0.0
            q = quad_adaptive(lambda p: radial_intensity(p) * p, 0.0, r, tol=tol)
            return 2.0 * math.pi * q.value

    def one(g: float) -> float:
        if g < d or not math.isfinite(g):
            return 0.0

        def front(theta):
            th = np.asarray(theta)
            r = float(_reach(g, d, th))
            denom = math.sqrt(g * g - (d * math.sin(float(th))) ** 2)
            return g * r / denom * radial_intensity(r)

        pre = quad_adaptive(front, 0.0, math.pi / 2.0, tol=tol).value
        surv = 1.0 - isotropic_best_cqi_cdf(g, mean_measure, d, tol=tol)
        return 4.0 * pre * surv

    return _vectorized(gamma, lambda gs: np.array([one(v) for v in gs]))


def exclusion_cqi_cdf(gamma, intensity: float, exclusion_radius: float,
                      half_distance: float):
    """Best-CQI cdf with a central exclusion disc of the given radius."""
    _check_positive(intensity=intensity, half_distance=half_distance)
    if exclusion_radius < 0:
        raise ParameterError("exclusion_radius must be non-negative")
    lam, r, d = intensity, exclusion_radius, half_distance
    if r == 0.0:
        return best_cqi_cdf(gamma, intensity, half_distance)

    def one(g: float) -> float:
        if g <= math.hypot(r, d):
            return 0.0
        if not math.isfinite(g):
            return 1.0
        if g > r + d:
            return -math.expm1(-2.0 * lam * d * d * float(_lens_shape(np.asarray(g / d)))
                               + lam * math.pi * r * r)
        x = g / d
        cos_star = (g * g - d * d - r * r) / (2.0 * d * r)
        cos_star = min(1.0, max(-1.0, cos_star))
        b = math.sqrt(max((d + r - g) * (d + r + g) * (g + d - r) * (g + r - d), 0.0)) / (2.0 * d * r)
        # arccsc((g/d)/b) = arcsin(b d / g); b <= g/d always holds here
        i_term = (x * x * (math.acos(1.0 / x) + math.asin(min(1.0, b / x))
                           - math.acos(cos_star))
                  + b * (math.sqrt(max(x * x - b * b, 0.0)) - cos_star)
                  - math.sqrt(x * x - 1.0))
        return -math.expm1(-2.0 * lam * d * d * i_term
                           + 2.0 * lam * r * r * math.asin(cos_star))

    return _vectorized(gamma, lambda gs: np.array([one(v) for v in gs]))


def ring_cqi_cdf(gamma, intensity: float, ring_radius: float, half_distance: float):
    """Best-CQI cdf when relays live on a circle line; defective law."""
    _check_positive(intensity=intensity, ring_radius=ring_radius, half_distance=half_distance)
    lam, r, d = intensity, ring_radius, half_distance

    def one(g: float) -> float:
        if g <= math.hypot(r, d):
            return 0.0
        if g > r + d:
            return -math.expm1(-2.0 * lam * math.pi * r)
        arg = min(1.0, max(-1.0, (g * g - d * d - r * r) / (2.0 * d * r)))
        return -math.expm1(-4.0 * lam * r * math.asin(arg))

    return _vectorized(gamma, lambda gs: np.array([one(v) for v in gs]))


def gaussian_cqi_cdf(gamma, mean_count: float, spread: float, half_distance: float,
                     tol: float = 1e-9):
    """Best-CQI cdf for the Gaussian cluster; defective law with mass
    1 - exp(-mean_count)."""
    _check_positive(mean_count=mean_count, spread=spread, half_distance=half_distance)
    n, sig, d = mean_count, spread, half_distance
    two_sig2 = 2.0 * sig * sig

    def one(g: float) -> float:
        if g < d:
            return 0.0
        if not math.isfinite(g):
            return -math.expm1(-n)

        def f(theta):
            r = float(_reach(g, d, np.asarray(theta)))
            return math.exp(-r * r / two_sig2)

        q = quad_adaptive(f, 0.0, math.pi / 2.0, tol=tol)
        return -math.expm1(-n + (2.0 * n / math.pi) * q.value)

    return _vectorized(gamma, lambda gs: np.array([one(v) for v in gs]))


# ---------------------------------------------------------------------------
# unequal per-hop SNR

def unequal_snr_support_min(half_distance: float, scale_source: float,
                            scale_destination: float) -> float:
    _check_positive(half_distance=half_distance, scale_source=scale_source,
                    scale_destination=scale_destination)
    return (2.0 * half_distance * scale_source * scale_destination
            / (scale_source + scale_destination))


def unequal_snr_cqi_cdf(gamma, intensity: float, half_distance: float,
                        scale_source: float, scale_destination: float):
    """cdf of the minimal weighted metric with per-hop scales snr_i^(-1/alpha).

    The sub-level set of the weighted metric is the intersection of a disc
    around the source (radius gamma / scale_source) and one around the
    destination (radius gamma / scale_destination): the cdf is one minus the
    void probability of that lens.
    """
    _check_positive(intensity=intensity)
    bound = unequal_snr_support_min(half_distance, scale_source, scale_destination)
    lam, d = intensity, half_distance

    def one(g: float) -> float:
        if g < bound:
            return 0.0
        if not math.isfinite(g):
            return 1.0
        area = _lens_area(2.0 * d, g / scale_source, g / scale_destination)
        return -math.expm1(-lam * area)

    return _vectorized(gamma, lambda gs: np.array([one(v) for v in gs]))


# ---------------------------------------------------------------------------
# bundled cdf/pdf evaluators

@dataclass(frozen=True)
class CqiLaw:
    """A named CQI distribution: cdf, optional pdf, support bound, total mass."""

    name: str
    cdf: Callable
    pdf: Callable | None
    support_min: float
    total_mass: float = 1.0

    def quantile(self, p: float) -> float:
        """Smallest x with cdf(x) >= p; +inf beyond the law's total mass."""
        if not 0.0 <= p <= 1.0:
            raise ParameterError(f"quantile level must be in [0, 1], got {p}")
        if p >= self.total_mass:
            return math.inf
        if p <= 0.0:
            return self.support_min
        lo = self.support_min
        step = max(lo, 1.0)
        hi = lo + step
        for _ in range(200):
            if self.cdf(hi) >= p:
                break
            hi = lo + (hi - lo) * 2.0
        else:
            raise NumericError(f"quantile search for {self.name} did not bracket p={p}")
        return solve_monotone(self.cdf, p, lo, hi, tol=1e-12 * max(1.0, hi))


def best_cqi_law(intensity: float, half_distance: float) -> CqiLaw:
    return CqiLaw(
        "best-cqi",
        lambda g: best_cqi_cdf(g, intensity, half_distance),
        lambda g: best_cqi_pdf(g, intensity, half_distance),
        support_min=half_distance,
    )


def best_cqi_law_finite(intensity: float, half_distance: float,
                        window_radius: float) -> CqiLaw:
    mass = -math.expm1(-intensity * math.pi * window_radius ** 2)
    return CqiLaw(
        f"best-cqi-window({window_radius:g})",
        lambda g: best_cqi_cdf_finite(g, intensity, half_distance, window_radius),
        None,
        support_min=half_distance,
        total_mass=mass,
    )


def midpoint_cqi_law(intensity: float, half_distance: float) -> CqiLaw:
    return CqiLaw(
        "midpoint-cqi",
        lambda g: midpoint_cqi_cdf(g, intensity, half_distance),
        lambda g: midpoint_cqi_pdf(g, intensity, half_distance),
        support_min=half_distance,
    )


def closest_to_destination_cqi_law(intensity: float, half_distance: float) -> CqiLaw:
    return CqiLaw(
        "closest-to-destination-cqi",
        lambda g: closest_to_destination_cqi_cdf(g, intensity, half_distance),
        lambda g: closest_to_destination_cqi_pdf(g, intensity, half_distance),
        support_min=half_distance,
    )


def unequal_snr_cqi_law(intensity: float, half_distance: float,
                        scale_source: float, scale_destination: float) -> CqiLaw:
    return CqiLaw(
        "best-cqi-unequal-snr",
        lambda g: unequal_snr_cqi_cdf(g, intensity, half_distance,
                                      scale_source, scale_destination),
        None,
        support_min=unequal_snr_support_min(half_distance, scale_source, scale_destination),
    )
