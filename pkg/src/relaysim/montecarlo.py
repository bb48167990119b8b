"""Monte Carlo harness: batched trials, empirical laws, analytic comparisons.

Seed-splitting rule (fixed, so parallel executions can reproduce the serial
stream): all randomness comes from Philox keyed by the master seed, with the
128-bit counter partitioned into blocks of 2^64 draws. Block 0 holds the
per-trial point counts in trial order, block 1 the radial uniforms for all
points in trial order, block 2 the angle uniforms. A worker owning trials
[i, j) can therefore advance each block stream to its slice and generate
byte-identical results; records always merge in trial order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as _stats

from .errors import ParameterError
from .kernels import disc_batch_stats
from .pointprocess import default_window_radius

__all__ = ["MonteCarloConfig", "TrialBatch", "ComparisonReport",
           "run_trials", "compare_to_analytic", "batch_to_csv",
           "empirical_cdf", "ks_statistic"]


@dataclass(frozen=True)
class MonteCarloConfig:
    """Field model plus the per-trial quantities to record.

    ``threshold`` enables feedback counting; the SNR scales enable the
    weighted-metric minimum. ``window_radius`` defaults to a disc large enough
    that truncation is invisible to the recorded laws.
    """

    intensity: float
    half_distance: float
    window_radius: float | None = None
    threshold: float | None = None
    scale_source: float = 1.0
    scale_destination: float = 1.0

    def __post_init__(self):
        if not self.intensity > 0 or not self.half_distance > 0:
            raise ParameterError("intensity and half_distance must be positive")
        if self.window_radius is None:
            object.__setattr__(self, "window_radius",
                               default_window_radius(self.intensity, self.half_distance))
        if not self.window_radius > 0:
            raise ParameterError("window_radius must be positive")
        if self.threshold is not None and self.threshold < 0:
            raise ParameterError("threshold must be non-negative")
        if not (self.scale_source > 0 and self.scale_destination > 0):
            raise ParameterError("SNR scales must be positive")


@dataclass(frozen=True)
class TrialBatch:
    """Per-trial records; reproducible from (config, n_trials, seed)."""

    config: MonteCarloConfig
    n_trials: int
    seed: int
    counts: np.ndarray = field(repr=False)
    gamma_opt: np.ndarray = field(repr=False)
    gamma_mid: np.ndarray = field(repr=False)
    gamma_c2d: np.ndarray = field(repr=False)
    gamma_csrc: np.ndarray = field(repr=False)
    gamma_diff: np.ndarray = field(repr=False)
    psi_mid: np.ndarray = field(repr=False)
    psi_second: np.ndarray = field(repr=False)
    n_feedback: np.ndarray = field(repr=False)
    sufficient: np.ndarray = field(repr=False)
    mid_is_opt: np.ndarray = field(repr=False)


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.uint64(seed),
                                                counter=block << 64))


def run_trials(config: MonteCarloConfig, n_trials: int, seed: int) -> TrialBatch:
    """Sample ``n_trials`` homogeneous fields and reduce each one."""
    if not n_trials >= 1:
        raise ParameterError(f"n_trials must be >= 1, got {n_trials}")
    lam = config.intensity
    tau = config.window_radius
    counts = _block_rng(seed, 0).poisson(lam * math.pi * tau * tau, size=n_trials)
    offsets = np.zeros(n_trials + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    total = int(offsets[-1])
    u_radius = _block_rng(seed, 1).random(total)
    u_angle = _block_rng(seed, 2).random(total)

    threshold = math.inf if config.threshold is None else config.threshold
    st = disc_batch_stats(u_radius, u_angle, offsets, tau, config.half_distance,
                          threshold, config.scale_source, config.scale_destination)

    d = config.half_distance
    sufficient = st.gamma_mid <= np.hypot(d, st.psi_second)
    sufficient[counts == 0] = True  # vacuously certified, matches the 1-point case
    mid_is_opt = st.idx_mid == st.idx_opt  # both -1 on empty fields
    n_fb = st.n_feedback if config.threshold is not None else counts.astype(np.int64)

    return TrialBatch(
        config=config, n_trials=n_trials, seed=int(seed),
        counts=counts.astype(np.int64),
        gamma_opt=st.gamma_opt, gamma_mid=st.gamma_mid, gamma_c2d=st.gamma_c2d,
        gamma_csrc=st.gamma_csrc, gamma_diff=st.gamma_diff,
        psi_mid=st.psi_mid, psi_second=st.psi_second,
        n_feedback=n_fb, sufficient=sufficient, mid_is_opt=mid_is_opt,
    )


def empirical_cdf(samples: np.ndarray, x) -> np.ndarray:
    """Right-continuous empirical cdf of the samples at the points x."""
    s = np.sort(np.asarray(samples, dtype=float))
    return np.searchsorted(s, np.asarray(x, dtype=float), side="right") / s.size


def ks_statistic(samples: np.ndarray, cdf) -> float:
    """One-sample Kolmogorov-Smirnov distance against a cdf callable.

    Compares the right-continuous empirical values, so it is exact (zero) when
    ``cdf`` is the batch's own empirical cdf and within 1/n of the two-sided
    statistic otherwise. Infinite samples are mass the law must also place
    beyond every finite point (defective laws); the tail term accounts for it.
    """
    s = np.sort(np.asarray(samples, dtype=float))
    n = s.size
    sf = s[np.isfinite(s)]
    d_tail = abs(sf.size / n - float(cdf(np.inf)))
    if sf.size == 0:
        return d_tail
    f = np.asarray(cdf(sf), dtype=float)
    emp = np.searchsorted(s, sf, side="right") / n  # tie groups share one height
    return float(max(np.max(np.abs(emp - f)), d_tail))


@dataclass(frozen=True)
class ComparisonReport:
    """Empirical-vs-analytic summary for one recorded quantity.

    ``ks_threshold`` is the acceptance band the comparison was run with
    (band / sqrt(n); the default band 1.63 is the 99% two-sided level).
    """

    quantity: str
    n_samples: int
    ks_statistic: float
    chi2_pvalue: float
    mean_abs_error: float
    grid: list
    ks_threshold: float = math.nan

    @property
    def ks_pass(self) -> bool:
        return bool(self.ks_statistic < self.ks_threshold)


_QUANTITIES = ("gamma_opt", "gamma_mid", "gamma_c2d", "gamma_csrc",
               "gamma_diff", "n_feedback")


def _poisson_chi2(samples: np.ndarray, mean: float, min_expected: float = 5.0):
    """Chi-square goodness of fit against Poisson(mean) with pooled tail bins."""
    n = samples.size
    kmax = int(samples.max())
    observed = np.bincount(samples, minlength=kmax + 1).astype(float)
    expected = n * _stats.poisson.pmf(np.arange(kmax + 1), mean)
    expected = np.append(expected, n * _stats.poisson.sf(kmax, mean))
    observed = np.append(observed, 0.0)
    # pool adjacent cells until each expected count is large enough
    obs_bins, exp_bins = [], []
    o_acc = e_acc = 0.0
    for o, e in zip(observed, expected):
        o_acc += o
        e_acc += e
        if e_acc >= min_expected:
            obs_bins.append(o_acc)
            exp_bins.append(e_acc)
            o_acc = e_acc = 0.0
    if o_acc or e_acc:
        if exp_bins:
            obs_bins[-1] += o_acc
            exp_bins[-1] += e_acc
        else:
            obs_bins, exp_bins = [o_acc], [e_acc]
    chi2 = float(np.sum((np.array(obs_bins) - np.array(exp_bins)) ** 2 / np.array(exp_bins)))
    dof = max(len(obs_bins) - 1, 1)
    return float(_stats.chi2.sf(chi2, dof))


def compare_to_analytic(batch: TrialBatch, evaluator, quantity: str = "gamma_opt",
                        grid_size: int = 33, ks_band: float = 1.63) -> ComparisonReport:
    """Compare one recorded quantity with its analytic law.

    ``evaluator`` is a ``CqiLaw`` (or bare cdf callable) for metric
    quantities, or the Poisson mean (float) for ``n_feedback``. ``ks_band``
    scales the acceptance threshold ks_band / sqrt(n).
    """
    if quantity not in _QUANTITIES:
        raise ParameterError(f"unknown quantity {quantity!r}; one of {_QUANTITIES}")
    threshold = ks_band / math.sqrt(batch.n_trials)
    if quantity == "n_feedback":
        mean = float(evaluator)
        samples = batch.n_feedback
        pvalue = _poisson_chi2(samples, mean)
        ks = ks_statistic(samples.astype(float),
                          lambda x: _stats.poisson.cdf(np.floor(x), mean))
        kgrid = np.arange(0, max(int(samples.max()) + 1, 2))
        emp = empirical_cdf(samples.astype(float), kgrid)
        ana = _stats.poisson.cdf(kgrid, mean)
        grid = [(float(k), float(a), float(e)) for k, a, e in zip(kgrid, ana, emp)]
        mae = float(np.mean(np.abs(ana - emp)))
        return ComparisonReport("n_feedback", samples.size, ks, pvalue, mae, grid,
                                threshold)

    cdf = evaluator.cdf if hasattr(evaluator, "cdf") else evaluator
    samples = getattr(batch, quantity)
    ks = ks_statistic(samples, cdf)
    finite = np.sort(samples[np.isfinite(samples)])
    if finite.size == 0:
        return ComparisonReport(quantity, samples.size, ks, 1.0, 0.0, [], threshold)
    qs = np.quantile(finite, np.linspace(0.01, 0.99, grid_size))
    ana = np.asarray(cdf(qs), dtype=float)
    # infinite samples (defective laws) sit beyond every grid point
    emp = np.searchsorted(finite, qs, side="right") / samples.size
    grid = [(float(x), float(a), float(e)) for x, a, e in zip(qs, ana, emp)]
    mae = float(np.mean(np.abs(ana - emp)))
    # chi-square over equal-occupancy bins, mass at infinity folded into the tail
    n_bins = min(20, max(finite.size // 25, 2))
    edges = np.quantile(finite, np.linspace(0.0, 1.0, n_bins + 1))[1:-1]
    observed = np.diff(np.concatenate(
        ([0], np.searchsorted(finite, edges, side="right"), [samples.size]))).astype(float)
    cum = np.concatenate(([0.0], np.asarray(cdf(edges), dtype=float), [1.0]))
    expected = samples.size * np.diff(cum)
    keep = expected > 0
    chi2 = float(np.sum((observed[keep] - expected[keep]) ** 2 / expected[keep]))
    pvalue = float(_stats.chi2.sf(chi2, max(int(keep.sum()) - 1, 1)))
    return ComparisonReport(quantity, samples.size, ks, pvalue, mae, grid, threshold)


def batch_to_csv(batch: TrialBatch, path) -> None:
    """One row per trial, stable format for diffing."""
    cols = ("trial", "n_points", "gamma_opt", "gamma_mid", "gamma_c2d",
            "gamma_csrc", "gamma_diff", "psi_mid", "psi_second",
            "n_feedback", "sufficient", "mid_is_opt")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(cols) + "\n")
        for t in range(batch.n_trials):
            row = (t, batch.counts[t],
                   f"{batch.gamma_opt[t]:.12g}", f"{batch.gamma_mid[t]:.12g}",
                   f"{batch.gamma_c2d[t]:.12g}", f"{batch.gamma_csrc[t]:.12g}",
                   f"{batch.gamma_diff[t]:.12g}",
                   f"{batch.psi_mid[t]:.12g}", f"{batch.psi_second[t]:.12g}",
                   batch.n_feedback[t], int(batch.sufficient[t]), int(batch.mid_is_opt[t]))
            fh.write(",".join(str(v) for v in row) + "\n")
