"""Rate and outage metrics, with and without selective feedback.

Rates are half-duplex (a single 1/2 factor); the Rayleigh branch averages over
unit-mean exponential fading through e^x E1(x). All integrals are adaptive
quadrature so every figure is deterministic for fixed inputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from . import distributions as dist
from .errors import ParameterError
from .model import Fading, PathLoss
from .numerics import f_exp_e1, quad_adaptive, solve_monotone

__all__ = [
    "RateResult", "OutageRegime",
    "conditional_rate", "average_rate", "average_rate_optimum",
    "s_star", "outage", "outage_for_law",
    "mean_feedback_load", "threshold_for_load",
    "average_rate_feedback", "outage_feedback",
    "optimality_rate_gap", "midpoint_rate_upper_bound",
    "full_duplex_rate", "outage_decay_slope",
]

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class RateResult:
    """A non-negative rate in bits/s/Hz plus the fading model it assumed."""

    value: float
    fading: Fading

    def __float__(self) -> float:
        return self.value


class OutageRegime(Enum):
    FEEDBACK_LIMITED = "feedback-limited"
    RATE_LIMITED = "rate-limited"
    ALWAYS_OUTAGE = "always-outage"


def _rate_from_link_snr(link_snr: float, fading: Fading) -> float:
    if link_snr <= 0.0:
        return 0.0
    if fading is Fading.NONE:
        return 0.5 * math.log2(1.0 + link_snr)
    return f_exp_e1(1.0 / link_snr) / (2.0 * _LN2)


def conditional_rate(gamma: float, snr: float, path_loss: PathLoss,
                     fading: Fading) -> RateResult:
    """Rate given the selected relay's metric value."""
    return RateResult(_rate_from_link_snr(snr * path_loss.gain(gamma), fading), fading)


def average_rate(law: dist.CqiLaw, snr: float, path_loss: PathLoss,
                 fading: Fading, tol: float = 1e-9) -> RateResult:
    """Rate averaged over relay positions under the given CQI law.

    The integration horizon is where the law keeps all but 1e-10 of its mass.
    """
    if law.pdf is None:
        raise ParameterError(f"law '{law.name}' has no density to integrate against")
    hi = law.quantile(min(law.total_mass, 1.0) - 1e-10)

    def f(g):
        return _rate_from_link_snr(snr * path_loss.gain(g), fading) * law.pdf(g)

    q = quad_adaptive(f, law.support_min, hi, tol=tol)
    return RateResult(q.value, fading)


def average_rate_optimum(intensity: float, half_distance: float, snr: float,
                         path_loss: PathLoss, fading: Fading) -> RateResult:
    return average_rate(dist.best_cqi_law(intensity, half_distance),
                        snr, path_loss, fading)


def s_star(target_rate: float) -> float:
    """Link-SNR level whose Rayleigh-averaged rate equals the target."""
    if target_rate < 0:
        raise ParameterError(f"target_rate must be non-negative, got {target_rate}")
    if target_rate == 0.0:
        return 0.0

    def averaged(s):
        return f_exp_e1(1.0 / s) / (2.0 * _LN2)

    lo, hi = 1e-12, 1.0
    while averaged(hi) < target_rate:
        hi *= 2.0
        if hi > 1e12:
            break
    return solve_monotone(averaged, target_rate, lo, hi, tol=1e-12)


def outage_for_law(law: dist.CqiLaw, target_rate: float, snr: float,
                   path_loss: PathLoss, fading: Fading) -> float:
    """P(rate <= target) for a policy whose CQI follows ``law``."""
    if target_rate < 0:
        raise ParameterError("target_rate must be non-negative")
    top = snr * path_loss.gain(law.support_min)
    level = (2.0 ** (2.0 * target_rate) - 1.0 if fading is Fading.NONE
             else s_star(target_rate))
    if level >= top:
        return 1.0
    return float(dist.received_snr_cdf(level, law, snr, path_loss))


def outage(target_rate: float, intensity: float, half_distance: float,
           snr: float, path_loss: PathLoss, fading: Fading) -> float:
    """Minimal outage probability (optimum relay selection, all feedback)."""
    return outage_for_law(dist.best_cqi_law(intensity, half_distance),
                          target_rate, snr, path_loss, fading)


# ---------------------------------------------------------------------------
# selective threshold feedback

def mean_feedback_load(threshold: float, intensity: float, half_distance: float) -> float:
    """Mean number of relays whose metric clears the feedback threshold.

    The count itself is Poisson with this mean.
    """
    if threshold < 0:
        raise ParameterError(f"threshold must be non-negative, got {threshold}")
    d, lam, t = half_distance, intensity, threshold
    if t <= d:
        return 0.0
    root = math.sqrt(t * t - d * d)
    return (lam * math.pi * t * t - 2.0 * d * lam * root
            - 2.0 * t * t * lam * math.atan(d / root))


def threshold_for_load(load: float, intensity: float, half_distance: float) -> float:
    """Threshold whose mean feedback load equals ``load`` (monotone inverse)."""
    if load < 0:
        raise ParameterError(f"load must be non-negative, got {load}")
    if load == 0.0:
        return half_distance
    hi = half_distance * 2.0
    while mean_feedback_load(hi, intensity, half_distance) < load:
        hi *= 2.0
    return solve_monotone(lambda t: mean_feedback_load(t, intensity, half_distance),
                          load, half_distance, hi, tol=1e-10 * max(1.0, hi))


def average_rate_feedback(threshold: float, intensity: float, half_distance: float,
                          snr: float, path_loss: PathLoss, fading: Fading,
                          tol: float = 1e-9) -> RateResult:
    """Average rate of threshold feedback; zero rate when nobody reports."""
    if threshold < half_distance:
        raise ParameterError(
            f"threshold {threshold} below the metric floor {half_distance}")
    law = dist.best_cqi_law(intensity, half_distance)
    if threshold == half_distance:
        return RateResult(0.0, fading)

    def f(g):
        return _rate_from_link_snr(snr * path_loss.gain(g), fading) * law.pdf(g)

    q = quad_adaptive(f, half_distance, threshold, tol=tol)
    return RateResult(q.value, fading)


def outage_feedback(threshold: float, target_rate: float, intensity: float,
                    half_distance: float, snr: float, path_loss: PathLoss,
                    fading: Fading) -> tuple[float, OutageRegime]:
    """Outage of threshold feedback plus the operating regime it falls in.

    Feedback-limited: the threshold is so tight that any reporter clears the
    target, so outage is the no-reporter probability (fading-independent).
    Rate-limited: outage matches the all-feedback case and no longer depends
    on the threshold. Ties resolve to the branch listed first.
    """
    if threshold < half_distance:
        raise ParameterError(
            f"threshold {threshold} below the metric floor {half_distance}")
    law = dist.best_cqi_law(intensity, half_distance)
    level = (2.0 ** (2.0 * target_rate) - 1.0 if fading is Fading.NONE
             else s_star(target_rate))
    at_threshold = snr * path_loss.gain(threshold)
    at_floor = snr * path_loss.gain(half_distance)
    if level <= at_threshold:
        mu = mean_feedback_load(threshold, intensity, half_distance)
        return math.exp(-mu), OutageRegime.FEEDBACK_LIMITED
    if level < at_floor:
        return (float(dist.received_snr_cdf(level, law, snr, path_loss)),
                OutageRegime.RATE_LIMITED)
    return 1.0, OutageRegime.ALWAYS_OUTAGE


# ---------------------------------------------------------------------------
# analytical upper bound on the optimum rate via the mid-point policy

def optimality_rate_gap(intensity: float, half_distance: float, snr: float,
                        path_loss: PathLoss, fading: Fading,
                        tol: float = 1e-7) -> float:
    """Bound on the rate the mid-point policy can lose to the optimum one.

    Averages, over the nearest relay's position, the chance that a better
    relay exists times the rate spread between the hyperplane bound and the
    actual metric at the nearest relay.
    """
    lam, d = intensity, half_distance
    scale = 1.0 / math.sqrt(lam)

    def spread(psi, theta):
        s = math.sqrt(psi * psi + 2.0 * d * psi * math.cos(theta) + d * d)
        best = snr * path_loss.gain(math.hypot(psi, d))
        actual = snr * path_loss.gain(s)
        if fading is Fading.NONE:
            return 0.5 * (math.log2(1.0 + best) - math.log2(1.0 + actual))
        hi = f_exp_e1(1.0 / best) if best > 0 else 0.0
        lo = f_exp_e1(1.0 / actual) if actual > 0 else 0.0
        return (hi - lo) / (2.0 * _LN2)

    def inner(theta):
        def f(psi):
            p = dist.midpoint_displacement_exponent(psi, theta, d)
            return (-math.expm1(-lam * p)) * spread(psi, theta) * dist.nearest_neighbor_pdf(psi, lam)

        return quad_adaptive(f, 0.0, 8.0 * scale, tol=tol * 0.05).value

    outer = quad_adaptive(inner, 0.0, math.pi / 2.0, tol=tol * 0.5)
    return (2.0 / math.pi) * outer.value


def midpoint_rate_upper_bound(intensity: float, half_distance: float, snr: float,
                              path_loss: PathLoss, fading: Fading) -> RateResult:
    """Mid-point average rate plus the optimality gap: upper-bounds the optimum rate."""
    base = average_rate(dist.midpoint_cqi_law(intensity, half_distance),
                        snr, path_loss, fading)
    gap = optimality_rate_gap(intensity, half_distance, snr, path_loss, fading)
    return RateResult(base.value + gap, fading)


def full_duplex_rate(rate: RateResult) -> RateResult:
    """Full-duplex scaling of a half-duplex rate (severely shadowed direct link)."""
    return RateResult(2.0 * rate.value, rate.fading)


def outage_decay_slope(policy: str, target_rate: float, half_distance: float,
                       snr: float, path_loss: PathLoss, fading: Fading,
                       intensities=None) -> float:
    """Diagnostic: least-squares slope of log10(outage) vs intensity.

    The log-outage curves are only near-linear, so the fitted value depends on
    the window; the default fits intensities 1..4. Reported, never gated.
    """
    import numpy as np

    if intensities is None:
        intensities = np.linspace(1.0, 4.0, 13)
    laws = {
        "optimum": dist.best_cqi_law,
        "mid-point": dist.midpoint_cqi_law,
        "closest-to-destination": dist.closest_to_destination_cqi_law,
    }
    if policy not in laws:
        raise ParameterError(f"no analytic outage curve for policy {policy!r}")
    lams = np.asarray(intensities, dtype=float)
    logs = np.array([math.log10(outage_for_law(laws[policy](lam, half_distance),
                                               target_rate, snr, path_loss, fading))
                     for lam in lams])
    slope, _ = np.polyfit(lams, logs, 1)
    return float(-slope)
