import numpy as np
import pytest

from relaysim.montecarlo import MonteCarloConfig, run_trials


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile (or load cached) numba kernels before any timed test runs."""
    run_trials(MonteCarloConfig(1.0, 1.0, window_radius=3.0, threshold=2.0,
                                scale_source=1.0, scale_destination=1.2), 8, 1)
    from relaysim.kernels import field_stats
    field_stats(np.zeros(4), np.zeros(4), np.array([0, 4], dtype=np.int64), 1.0)
