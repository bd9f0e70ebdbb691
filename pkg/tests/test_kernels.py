import math

import numpy as np
import pytest

from multiwp import kernels
from multiwp.kernels import kahan_cumsum, lattice_sorted, ordered_sum


def test_lattice_sorted_order():
    tau = 0.3 + 1.1j
    w, pos0 = lattice_sorted(tau, 3, 5)
    assert len(w) == 5 * 9
    assert w[pos0] == 0
    # strictly increasing in the (m, n) lexicographic order
    m = np.round(w.imag / tau.imag).astype(int)
    n = np.round(w.real - m * tau.real).astype(int)
    keys = list(zip(m.tolist(), n.tolist()))
    assert keys == sorted(keys)


def test_ordered_sum_depth1_matches_plain_sum():
    tau = 2j
    w, pos0 = lattice_sorted(tau, 8, 50)
    region = w[pos0 + 1:]
    got = ordered_sum(region, [0.0], [3])
    want = np.sum((0.0 - region) ** -3.0)
    assert abs(got - want) < 1e-14


def test_ordered_sum_depth2_matches_double_loop():
    tau = 1j
    w, pos0 = lattice_sorted(tau, 3, 6)
    region = w[pos0 + 1:]
    z = 0.3 + 0.2j
    got = ordered_sum(region, [z, z], [3, 4])
    vals1 = (z - region) ** -3.0
    vals2 = (z - region) ** -4.0
    want = sum(vals1[i] * vals2[j] for i in range(len(region))
               for j in range(i + 1, len(region)))
    assert abs(got - want) < 1e-13


def test_split_matches_plain_in_the_limit():
    # trailing-2 split evaluates the same inner limit, much faster in N
    tau = 2j
    vals = {}
    for N, split in [(400, True), (400, False), (40000, True)]:
        w, pos0 = lattice_sorted(tau, 6, N)
        region = w[pos0 + 1:]
        vals[(N, split)] = ordered_sum(region, [0.0, 0.0], [3, 2],
                                       split_last=split, boundary_prev=None)
    limit = vals[(40000, True)]
    assert abs(vals[(400, True)] - limit) < 5e-5
    assert abs(vals[(400, True)] - limit) < abs(vals[(400, False)] - limit)


@pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba unavailable")
def test_numba_and_numpy_paths_agree():
    tau = 0.5 + 1.3j
    w, pos0 = lattice_sorted(tau, 6, 200)
    region = np.ascontiguousarray(w[pos0 + 1:])
    shifts = np.array([0.31 + 0.17j, -0.2 + 0.05j], dtype=np.complex128)
    exps = np.array([2, 2], dtype=np.int64)
    for split in (False, True):
        a = kernels._ordered_sum_numba(region, shifts, exps, split)
        b = kernels._ordered_sum_numpy(region, shifts, exps, split)
        assert abs(a - b) < 1e-12 * (1 + abs(a))


def test_kahan_cumsum_matches_fsum():
    # decaying positive terms, the MZV partial-sum shape
    n = np.arange(1.0, 2e5 + 1)
    y = n ** -2.0
    out = kahan_cumsum(y)
    assert abs(out[-1] - math.fsum(y)) < 5e-16
    mid = len(y) // 2
    assert abs(out[mid] - math.fsum(y[:mid + 1])) < 5e-16
    # mixed signs: error stays at the fsum scale relative to sum |y|
    rng = np.random.default_rng(1)
    y = rng.standard_normal(20000)
    out = kahan_cumsum(y)
    assert abs(out[-1] - math.fsum(y)) < 1e-13 * np.sum(np.abs(y))


def test_env_flag_reported():
    assert isinstance(kernels.USING_NUMBA, bool)
    if kernels.PURE_NUMPY:
        assert not kernels.USING_NUMBA
