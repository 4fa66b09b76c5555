"""The JIT kernels and their pure fallbacks must agree exactly."""

import numpy as np

from maghardy import _kernels


def test_inertia_paths_agree():
    rng = np.random.default_rng(3)
    for _ in range(40):
        n = int(rng.integers(3, 400))
        d = rng.normal(size=n)
        e = rng.normal(size=n - 1)
        fast = _kernels.tridiag_inertia(d, e, 1e-290)
        slow = _kernels.tridiag_inertia_py(d, e, 1e-290)
        assert fast == slow


def test_shifted_inertia_paths_agree():
    rng = np.random.default_rng(4)
    for _ in range(40):
        n = int(rng.integers(3, 300))
        kd = rng.normal(size=n) + 2.0
        e = rng.normal(size=n - 1)
        md = rng.uniform(0.1, 2.0, size=n)
        mu = float(rng.uniform(0.0, 3.0))
        fast = _kernels.tridiag_inertia_shifted(kd, e, md, mu, 1e-290)
        slow = _kernels.tridiag_inertia_shifted_py(kd, e, md, mu, 1e-290)
        assert fast == slow
        base = _kernels.tridiag_inertia_py(kd - mu * md, e, 1e-290)
        assert fast[0] == base[0]


def test_zero_pivot_counted_nonnegative():
    # matrix diag(0): the zero pivot is perturbed positive and reported
    d = np.zeros(3)
    e = np.zeros(2)
    neg, zero_pivots = _kernels.tridiag_inertia_py(d, e, 1e-290)
    assert neg == 0 and zero_pivots == 3


def test_prufer_paths_agree():
    tq = np.linspace(-5.0, 5.0, 2000)
    qq = 3.0 * np.sin(tq) - 2.0
    fast = _kernels.prufer_sweep(tq, qq, -5.0, 5.0, 1e-6, 0.01, 1e-12)
    slow = _kernels.prufer_sweep_py(tq, qq, -5.0, 5.0, 1e-6, 0.01, 1e-12)
    assert fast[1] == slow[1] == 0
    assert abs(fast[0] - slow[0]) < 1e-12


def test_prufer_harmonic_oscillator_node_count():
    # -u'' = k^2 u on (0, L): theta(L) = k L exactly for Q = -k^2
    k = 3.0
    L = np.pi
    tq = np.linspace(0.0, L, 100)
    qq = np.full_like(tq, -(k**2))
    theta, fail = _kernels.prufer_sweep_py(tq, qq, 0.0, L, 1e-9, 0.01, 1e-14)
    assert fail == 0
    assert abs(theta - k * L) < 1e-6
    assert int(np.floor(theta / np.pi)) == 2  # sin(3t) has nodes at pi/3, 2pi/3
