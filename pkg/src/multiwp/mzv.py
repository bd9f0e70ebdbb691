"""Numerical multiple zeta values and Hurwitz multiple zeta values.

Convention (as used throughout this package):

    zeta(k_1, ..., k_r) = sum_{0 < n_1 < ... < n_r} n_1^{-k_1} ... n_r^{-k_r},

convergent iff the last entry satisfies k_r >= 2.  Values are computed by
direct lexicographic summation up to a cutoff T driven by the requested
precision; the truncated tails are *corrected* level by level with
Euler-Maclaurin power expansions (not merely bounded), and the reported
error bound covers the neglected expansion orders plus float rounding.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .core import Index, bernoulli
from .kernels import kahan_cumsum, kahan_cumsum_complex


@dataclass(frozen=True)
class MzvValue:
    value: complex
    err: float
    index: Index

    @property
    def real(self) -> float:
        return float(self.value.real) if isinstance(self.value, complex) else float(self.value)


def _em_power_list(gamma: int) -> list[tuple[float, int]]:
    """H(gamma, n) = sum_{m >= n} m^-gamma  ~=  sum_j c_j n^-beta_j."""
    g = float(gamma)
    return [
        (1.0 / (g - 1.0), gamma - 1),
        (0.5, gamma),
        (g / 12.0, gamma + 1),
        (-g * (g + 1) * (g + 2) / 720.0, gamma + 3),
        (g * (g + 1) * (g + 2) * (g + 3) * (g + 4) / 30240.0, gamma + 5),
    ]


def _plist_eval(plist, x: complex) -> complex:
    return sum(c * x ** float(-b) for c, b in plist)


def _plist_apply(a: int, plist, beta_cap: int):
    """sum_{m >= n} m^-a * t(m) where t is a power list; result truncated."""
    out: dict[int, float] = {}
    for c, b in plist:
        for c2, b2 in _em_power_list(a + b):
            if b2 <= beta_cap:
                out[b2] = out.get(b2, 0.0) + c * c2
    return sorted(out.items(), key=lambda t: t[0])  # [(beta, coef)] -> fix order below


def _tail_T(digits: int) -> int:
    return int(min(2e5, max(2e4, 10.0 ** ((digits + 2) / 3.0))))


def mzv(index, digits: int = 12) -> MzvValue:
    """zeta(k_1,...,k_r) with an honest propagated error bound."""
    index = Index(index)
    if index.depth == 0:
        return MzvValue(1.0, 0.0, index)
    if any(k < 1 for k in index):
        raise ValueError("parts must be >= 1")
    if index[-1] < 2:
        raise ValueError(f"non-admissible index {index}: last part must be >= 2")
    if 1 in index:
        # divergent prefixes grow like powers of log n; the power-sum tail
        # machinery below does not apply, so extrapolate over T, 2T, 4T, ...
        return _mzv_interior_one(tuple(index), int(digits))
    return _mzv_cached(tuple(index), int(digits))


@lru_cache(maxsize=None)
def _mzv_interior_one(index: tuple, digits: int) -> MzvValue:
    p = sum(1 for k in index if k == 1)
    T0 = int(min(1e6, max(1e5, 10.0 ** ((digits + 3) / 3.0))))
    npts = p + 2
    Ts = [T0 * 2**j for j in range(npts)]

    def partial(T: int) -> float:
        n = np.arange(0, T + 1, dtype=float)
        Z = np.ones(T + 1)
        for k in index:
            y = np.zeros(T + 1)
            y[1:] = n[1:] ** float(-k) * Z[1:]
            cums = kahan_cumsum(y)
            Z = np.concatenate(([0.0], cums[:-1]))
        return float(cums[-1])

    # model: v(T) = V + (a_0 + a_1 log T + ... + a_p log^p T) / T
    A = np.zeros((npts, npts))
    b = np.zeros(npts)
    for i, T in enumerate(Ts):
        A[i, 0] = 1.0
        for j in range(p + 1):
            A[i, 1 + j] = np.log(float(T)) ** j / T
        b[i] = partial(T)
    sol = np.linalg.solve(A, b)
    V = float(sol[0])
    err = 100.0 * np.log(float(Ts[0])) ** p / Ts[0] ** 2 + 1e-14 * abs(V)
    return MzvValue(V, err, Index(index))


@lru_cache(maxsize=None)
def _mzv_cached(index: tuple, digits: int) -> MzvValue:
    T = _tail_T(digits)
    beta_cap = sum(index) + 8
    n = np.arange(0, T + 1, dtype=float)
    Zprev = np.ones(T + 1)
    c_prev = 1.0
    err = 0.0
    tail_prev: list[tuple[float, int]] | None = None  # t_{s-1}(n) power list
    x0 = float(T + 1)
    for s, k in enumerate(index):
        y = np.zeros(T + 1)
        y[1:] = n[1:] ** float(-k) * Zprev[1:]
        cums = kahan_cumsum(y)
        partial = float(cums[-1])
        if s == 0:
            tail = float(_plist_eval(_em_power_list(k), x0).real)
            tail_list = _em_power_list(k)
            tail_err = 2.0 * abs(_em_power_list(k)[-1][0]) * x0 ** float(-k - 5)
        else:
            corr = _plist_apply(k, tail_prev, beta_cap)
            corr_list = [(c, b) for b, c in corr]
            tail = c_prev * float(_plist_eval(_em_power_list(k), x0).real) \
                - float(_plist_eval(corr_list, x0).real)
            # t_s(n) = c_{s-1} H(k, n) - sum_{m>=n} m^-k t_{s-1}(m)
            tl: dict[int, float] = {}
            for c, b in _em_power_list(k):
                tl[b] = tl.get(b, 0.0) + c_prev * c
            for c, b in corr_list:
                tl[b] = tl.get(b, 0.0) - c
            tail_list = [(c, b) for b, c in sorted(tl.items())]
            tail_err = err * abs(_plist_eval(_em_power_list(k), x0).real) \
                + 4.0 * x0 ** float(-(k + 6))
        c_s = partial + tail
        err = tail_err + 8e-16 * (abs(partial) + len(index) * abs(c_s))
        c_prev = c_s
        tail_prev = tail_list
        Zprev = np.concatenate(([0.0], cums[:-1]))  # Z_s(n) = sum_{m<n}
    return MzvValue(c_prev, err, Index(index))


def mzv_value(index, digits: int = 12) -> float:
    """Plain float value of a real MZV."""
    return mzv(index, digits).real


def zeta_even_exact(k: int) -> Fraction:
    """zeta(k) = c * pi^k for even k; returns the exact rational c.

    Euler: zeta(k) = -(2 pi i)^k B_k / (2 k!).
    """
    if k < 2 or k % 2 == 1:
        raise ValueError("zeta_even_exact needs even k >= 2")
    return Fraction((-1) ** (k // 2 + 1) * 2 ** (k - 1), factorial(k)) * bernoulli(k)


def hurwitz_mzv(index, z: complex, digits: int = 12) -> MzvValue:
    """zeta^{(z)}(k_1,...,k_r) = sum_{0<n_1<...<n_r} prod (z + n_i)^{-k_i}."""
    index = Index(index)
    if index.depth == 0:
        return MzvValue(1.0, 0.0, index)
    if index[-1] < 2:
        raise ValueError("non-admissible index: last part must be >= 2")
    z = complex(z)
    if z.imag == 0 and z.real <= -1 and abs(z.real - round(z.real)) < 1e-12:
        raise ZeroDivisionError("pole: z + n vanishes for a positive integer n")
    T = _tail_T(digits)
    if abs(z) > T / 4:
        raise ValueError("shift too large for the tail expansion")
    beta_cap = sum(index) + 8
    base = z + np.arange(0, T + 1, dtype=complex)  # base[n] = z + n
    Zprev = np.ones(T + 1, dtype=complex)
    c_prev: complex = 1.0
    err = 0.0
    tail_prev = None
    x0 = z + (T + 1)
    ax0 = abs(x0)
    for s, k in enumerate(index):
        y = np.zeros(T + 1, dtype=complex)
        y[1:] = base[1:] ** float(-k) * Zprev[1:]
        cums = kahan_cumsum_complex(y)
        partial = complex(cums[-1])
        if s == 0:
            tail = _plist_eval(_em_power_list(k), x0)
            tail_list = _em_power_list(k)
            tail_err = 2.0 * abs(_em_power_list(k)[-1][0]) * ax0 ** float(-k - 5)
        else:
            corr = _plist_apply(k, tail_prev, beta_cap)
            corr_list = [(c, b) for b, c in corr]
            tail = c_prev * _plist_eval(_em_power_list(k), x0) - _plist_eval(corr_list, x0)
            tl: dict[int, complex] = {}
            for c, b in _em_power_list(k):
                tl[b] = tl.get(b, 0.0) + c_prev * c
            for c, b in corr_list:
                tl[b] = tl.get(b, 0.0) - c
            tail_list = [(c, b) for b, c in sorted(tl.items())]
            tail_err = err * abs(_plist_eval(_em_power_list(k), x0)) \
                + 4.0 * ax0 ** float(-(k + 6))
        c_s = partial + tail
        err = tail_err + 8e-16 * (abs(partial) + len(index) * abs(c_s))
        c_prev = c_s
        tail_prev = tail_list
        Zprev = np.concatenate(([0.0 + 0.0j], cums[:-1]))
    return MzvValue(c_prev, err, Index(index))
