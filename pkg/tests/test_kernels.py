import math
import os
import subprocess
import sys

import numpy as np
import pytest

from relaysim import kernels


def _random_batch(seed, n_trials=300, mean_pts=40):
    rng = np.random.default_rng(seed)
    counts = rng.poisson(mean_pts, size=n_trials)
    counts[rng.integers(0, n_trials, 5)] = 0  # force empty fields
    offsets = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    total = int(offsets[-1])
    xs = rng.uniform(-8, 8, total)
    ys = rng.uniform(-8, 8, total)
    u1 = rng.random(total)
    u2 = rng.random(total)
    return xs, ys, u1, u2, offsets


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_backends_bit_identical_xy(seed):
    xs, ys, _, _, offsets = _random_batch(seed)
    a = kernels.field_stats_numpy(xs, ys, offsets, 1.0, 2.5, 1.0, 1.4)
    b = kernels.field_stats_numba(xs, ys, offsets, 1.0, 2.5, 1.0, 1.4)
    for key in a:
        assert np.array_equal(a[key], b[key]), key


@pytest.mark.parametrize("seed", [3, 4])
def test_backends_bit_identical_disc(seed):
    _, _, u1, u2, offsets = _random_batch(seed)
    a = kernels.disc_batch_stats_numpy(u1, u2, offsets, 7.0, 1.0, 3.0, 1.0, 1.0)
    b = kernels.disc_batch_stats_numba(u1, u2, offsets, 7.0, 1.0, 3.0, 1.0, 1.0)
    for key in a:
        assert np.array_equal(a[key], b[key]), key


def test_against_bruteforce_reference():
    xs, ys, _, _, offsets = _random_batch(7, n_trials=50, mean_pts=12)
    st = kernels.field_stats(xs, ys, offsets, 1.0, 2.5, 1.0, 1.4)
    for t in range(50):
        sl = slice(offsets[t], offsets[t + 1])
        x, y = xs[sl], ys[sl]
        if x.size == 0:
            assert st.idx_opt[t] == -1
            assert math.isinf(st.gamma_opt[t])
            assert st.n_feedback[t] == 0
            continue
        ds = np.hypot(x + 1.0, y)
        dd = np.hypot(x - 1.0, y)
        s = np.maximum(ds, dd)
        norm = np.hypot(x, y)
        assert st.gamma_opt[t] == pytest.approx(s.min(), rel=1e-12)
        assert st.idx_opt[t] - offsets[t] == int(np.argmin(s))
        assert st.psi_mid[t] == pytest.approx(norm.min(), rel=1e-12)
        assert st.gamma_mid[t] == pytest.approx(s[np.argmin(norm)], rel=1e-12)
        assert st.gamma_c2d[t] == pytest.approx(s[np.argmin(dd)], rel=1e-12)
        assert st.gamma_csrc[t] == pytest.approx(s[np.argmin(ds)], rel=1e-12)
        assert st.n_feedback[t] == int((s <= 2.5).sum())
        if x.size >= 2:
            assert st.psi_second[t] == pytest.approx(np.partition(norm, 1)[1], rel=1e-12)
        diff = np.maximum(1.0 * ds, 1.4 * dd)
        assert st.gamma_diff[t] == pytest.approx(diff.min(), rel=1e-12)


def test_tie_breaks_to_lowest_index():
    xs = np.array([0.5, -0.5, 0.5])  # first and second have equal metric
    ys = np.zeros(3)
    st = kernels.field_stats(xs, ys, np.array([0, 3], dtype=np.int64), 1.0)
    assert st.idx_opt[0] == 0
    assert st.idx_mid[0] == 0


def test_empty_batch():
    st = kernels.field_stats(np.empty(0), np.empty(0),
                             np.zeros(4, dtype=np.int64), 1.0)
    assert np.all(st.idx_opt == -1)
    assert np.all(np.isinf(st.gamma_opt))


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, RELAYSIM_NO_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c",
         "from relaysim.kernels import kernel_backend; print(kernel_backend())"],
        capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "numpy"


def test_default_backend_is_numba_when_available():
    if kernels.HAS_NUMBA and not os.environ.get("RELAYSIM_NO_NUMBA"):
        assert kernels.kernel_backend() == "numba"
