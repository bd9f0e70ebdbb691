"""Multiple Eisenstein series: the slow direct lattice oracle and the fast
Fourier (q-expansion) pipeline.

The q-pipeline decomposes the ordered sum over 0 < w_1 < ... < w_r by which
consecutive run of indices shares each tau-coefficient m: a (possibly empty)
m = 0 prefix contributes a multiple zeta value, and each m > 0 block
contributes a multitangent value Psi_block(m tau).  Every multitangent of
admissible index reduces to monotangents with multiple-zeta coefficients,
and monotangents at m tau are geometric q-series by Lipschitz summation

    Psi_k(x) = sum_{n in Z} (x+n)^-k = (-2 pi i)^k/(k-1)! sum_{d>0} d^{k-1} e^{2 pi i d x}

for Im(x) > 0 (the sign is pinned by the direct-sum oracle in the tests).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, log

import numpy as np

from .core import DEFAULT_CONFIG, EvalConfig, Index, compositions_fixed
from .kernels import lattice_sorted, ordered_sum
from .mzv import mzv
from .weier import TWO_PI_I, _check_tau, _em_tail, lipschitz_psi

__all__ = [
    "QOrderError", "MultitangentReduction", "WordDecomposition", "word_splittings",
    "monotangent", "multitangent_reduce", "multitangent_direct",
    "meis_direct", "meis_direct_error", "meis_qexp", "g_function",
    "g_function_direct",
]


class QOrderError(ValueError):
    """q-truncation order too small for the requested tolerance."""


def _require_admissible(index: Index):
    if not index.admissible:
        raise ValueError(f"index {tuple(index)} not admissible: all parts must be >= 2")


# ---------------------------------------------------------------------------
# monotangents and multitangents
# ---------------------------------------------------------------------------

def monotangent(k: int, z: complex, method: str = "auto", N: int = 2000) -> complex:
    """Psi_k(z) = sum_{n in Z} (z+n)^-k for k >= 2, z not an integer.

    "direct" uses the symmetric sum with Euler-Maclaurin tails (any z off Z);
    "qexp" the Lipschitz series (requires Im z != 0).
    """
    if k < 2:
        raise ValueError("monotangent needs k >= 2")
    z = complex(z)
    if method == "qexp" or (method == "auto" and abs(z.imag) > 0.05):
        if z.imag > 0:
            return lipschitz_psi(k, z)
        if z.imag < 0:
            return (-1) ** k * lipschitz_psi(k, -z)
        raise ValueError("qexp path needs Im(z) != 0")
    n = np.arange(-N, N + 1, dtype=float)
    vals = (z + n) ** float(-k)
    return complex(np.sum(vals)) + _em_tail(z, N + 1, k) + (-1) ** k * _em_tail(-z, N + 1, k)


def multitangent_direct(index, z: complex, N: int = 30000) -> complex:
    """Truncated nested sum over n_1 < ... < n_r (oracle for the reduction)."""
    index = Index(index)
    w = np.arange(-N, N + 1, dtype=float)
    suffix = None
    for s in range(index.depth - 1, -1, -1):
        vals = (z + w) ** float(-index[s])
        if suffix is None:
            acc = vals
        else:
            nxt = np.empty(len(w), dtype=complex)
            nxt[:-1] = suffix[1:]
            nxt[-1] = 0.0
            acc = vals * nxt
        suffix = np.cumsum(acc[::-1])[::-1]
    return complex(suffix[0])


@dataclass(frozen=True)
class MultitangentReduction:
    """Psi_index = sum over terms coeff * zeta(za) * zeta(zb) * Psi_n.

    Every term satisfies weight(za) + weight(zb) + n = weight(index).
    """

    index: Index
    terms: tuple[tuple[Fraction, Index, Index, int], ...]

    def coefficients(self, digits: int = 12) -> dict[int, complex]:
        """Numeric map n -> coefficient of Psi_n."""
        out: dict[int, complex] = {}
        for c, za, zb, n in self.terms:
            v = float(c) * mzv(za, digits).value * mzv(zb, digits).value
            out[n] = out.get(n, 0.0) + v
        return out

    def evaluate(self, z: complex, digits: int = 12, method: str = "auto") -> complex:
        return sum(c * monotangent(n, z, method)
                   for n, c in self.coefficients(digits).items())


@lru_cache(maxsize=None)
def multitangent_reduce(index) -> MultitangentReduction:
    """Exact reduction of a multitangent to monotangents (depth-1 tangents).

    Boundary parts must be >= 2.  The reduction identity addresses the
    reversed index Psi_{k_r,...,k_1}, so reverse first.
    """
    index = Index(index)
    if index.depth == 0:
        raise ValueError("empty multitangent")
    if index[0] < 2 or index[-1] < 2:
        raise ValueError("boundary parts must be >= 2")
    ks = index.reversed()
    r, k = ks.depth, ks.weight
    terms = []
    for i in range(1, r + 1):
        for ns in compositions_fixed(k, r, 2):
            c = 1
            for j in range(1, r + 1):
                if j != i:
                    c *= comb(ns[j - 1] - 1, ks[j - 1] - 1) if ns[j - 1] >= ks[j - 1] else 0
            if c == 0:
                continue
            sgn = (-1) ** ((ks[i - 1] + sum(ns[i - 1:])) % 2)
            za = Index(ns[:i - 1][::-1])
            zb = Index(ns[i:])
            terms.append((Fraction(sgn * c), za, zb, ns[i - 1]))
    return MultitangentReduction(index, tuple(terms))


# ---------------------------------------------------------------------------
# word decomposition of the ordered lattice sum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WordDecomposition:
    """One way of grouping (k_1..k_r) into an m=0 prefix and m>0 blocks.

    boundaries are the appendix-style cut positions t_0 = 1 < t_1 < ... <
    t_h = r+1 over the block part of the index.
    """

    mzv_prefix: Index
    blocks: tuple[Index, ...]

    @property
    def boundaries(self) -> tuple[int, ...]:
        out = [1]
        for b in self.blocks:
            out.append(out[-1] + len(b))
        return tuple(out)


def word_splittings(index):
    """All splittings of an index into m=0 prefix + ordered positive-m blocks."""
    index = Index(index)
    r = index.depth
    for j in range(r + 1):
        prefix, rest = Index(index[:j]), index[j:]
        n = len(rest)
        if n == 0:
            yield WordDecomposition(prefix, ())
            continue
        for mask in range(1 << (n - 1)):
            blocks = []
            cur = [rest[0]]
            for i in range(1, n):
                if mask >> (i - 1) & 1:
                    blocks.append(Index(cur))
                    cur = [rest[i]]
                else:
                    cur.append(rest[i])
            blocks.append(Index(cur))
            yield WordDecomposition(prefix, tuple(blocks))


# ---------------------------------------------------------------------------
# direct (slow) evaluation
# ---------------------------------------------------------------------------

def _meis_once(index: Index, tau: complex, cfg: EvalConfig) -> complex:
    w, pos0 = lattice_sorted(tau, cfg.M, cfg.N)
    region = w[pos0 + 1:]
    split = index[-1] == 2
    val = ordered_sum(region, [0.0] * index.depth, list(index),
                      split_last=split, boundary_prev=0.0)
    return (-1) ** (index.weight % 2) * val


def meis_direct(index, tau: complex, cfg: EvalConfig | None = None) -> complex:
    """Multiple Eisenstein series by the truncated iterated lattice sum
    (inner n-limits before outer m-limits; trailing-2 telescoping split)."""
    index = Index(index)
    _require_admissible(index)
    tau = _check_tau(tau)
    return _meis_once(index, tau, cfg if cfg is not None else DEFAULT_CONFIG)


def meis_direct_error(index, tau: complex,
                      cfg: EvalConfig | None = None) -> tuple[complex, float]:
    """(refined value, Cauchy-difference error estimate)."""
    index = Index(index)
    _require_admissible(index)
    tau = _check_tau(tau)
    cfg = cfg if cfg is not None else DEFAULT_CONFIG
    v1 = _meis_once(index, tau, cfg)
    v2 = _meis_once(index, tau, cfg.refined())
    return v2, abs(v2 - v1)


# ---------------------------------------------------------------------------
# q-expansion pipeline
# ---------------------------------------------------------------------------

def _p_matrix(exponents, q: complex, mmax: int, dmax: int) -> dict[int, np.ndarray]:
    """P_n(q^m) = sum_{d=1}^{dmax} d^{n-1} q^{m d} for each n, m = 1..mmax."""
    d = np.arange(1.0, dmax + 1)
    x = q ** np.arange(1, mmax + 1)
    xpow = x[None, :] ** d[:, None]  # (dmax, mmax)
    out = {}
    for n in set(exponents):
        out[n] = (d ** (n - 1)) @ xpow
    return out


def _ordered_m_dp(pvals: list[np.ndarray]) -> complex:
    """sum over 0 < m_1 < ... < m_h of prod_i pvals[i][m_i - 1]."""
    mmax = len(pvals[0])
    A = np.ones(mmax + 1, dtype=complex)  # A_0(m) = 1
    for P in pvals:
        run = 0.0 + 0.0j
        Anew = np.zeros(mmax + 1, dtype=complex)
        for m in range(1, mmax + 1):
            run += P[m - 1] * A[m - 1]
            Anew[m] = run
        A = Anew
    return complex(A[mmax])


@lru_cache(maxsize=None)
def _meis_qexp_cached(index: tuple, tau: complex, q_order: int, digits: int) -> complex:
    idx = Index(index)
    q = complex(np.exp(TWO_PI_I * tau))
    aq = abs(q)
    need = int(np.ceil(log(1e-18) / log(aq))) + idx.depth + 1
    if need > q_order:
        raise QOrderError(
            f"q_order={q_order} too small: tail ~ |q|^{q_order + 1} = "
            f"{aq ** (q_order + 1):.2e} exceeds the target precision; need ~{need}")
    mmax = min(q_order, need)
    dmax = min(q_order, max(need, 8))
    pmat = _p_matrix(range(2, idx.weight + 1), q, mmax, dmax)
    total = 0.0 + 0.0j
    for sp in word_splittings(idx):
        pre = mzv(sp.mzv_prefix, digits).value if sp.mzv_prefix.depth else 1.0
        if not sp.blocks:
            total += pre
            continue
        reds = [multitangent_reduce(b).coefficients(digits) for b in sp.blocks]

        def rec(i: int, coeff: complex, chosen: list):
            nonlocal total
            if i == len(reds):
                amp = 1.0 + 0.0j
                for nn in chosen:
                    amp *= (-TWO_PI_I) ** nn / factorial(nn - 1)
                total += pre * coeff * amp * _ordered_m_dp([pmat[nn] for nn in chosen])
                return
            for nn, c in reds[i].items():
                rec(i + 1, coeff * c, chosen + [nn])

        rec(0, 1.0, [])
    return total


def meis_qexp(index, tau: complex, q_order: int = 64, digits: int = 12) -> complex:
    """Multiple Eisenstein series via the Fourier / multitangent pipeline.

    Fast and accurate for Im(tau) bounded away from 0; raises QOrderError
    when q_order cannot reach ~1e-15 relative truncation."""
    index = Index(index)
    _require_admissible(index)
    tau = _check_tau(tau)
    if index.depth == 0:
        return 1.0 + 0.0j
    return _meis_qexp_cached(tuple(index), tau, int(q_order), int(digits))


# ---------------------------------------------------------------------------
# g-functions (positive-m half-lattice sums with free integer parts)
# ---------------------------------------------------------------------------

def g_function(index, z: complex, tau: complex, q_order: int = 64) -> complex:
    """g_{k_1..k_r}(z) = sum over 0<m_1<...<m_r, n_i in Z of
    prod (z + m_i tau + n_i)^{-k_i}, via its xi, q double series.

    Valid in the strip |Im z| < Im tau (the empty index gives 1)."""
    index = Index(index)
    _require_admissible(index)
    tau = _check_tau(tau)
    if index.depth == 0:
        return 1.0 + 0.0j
    z = complex(z)
    q = complex(np.exp(TWO_PI_I * tau))
    xi = complex(np.exp(TWO_PI_I * z))
    if abs(xi * q) >= 1:
        raise ValueError("strip violated: need Im(z) > -Im(tau)")
    aq = abs(xi * q)
    need = int(np.ceil(log(1e-18) / log(max(aq, abs(q))))) + index.depth + 1
    if need > q_order:
        raise QOrderError(f"q_order={q_order} too small for the strip point; need ~{need}")
    mmax = min(q_order, need)
    dmax = min(4 * q_order, 4 * need)
    d = np.arange(1.0, dmax + 1)
    x = xi * q ** np.arange(1, mmax + 1)
    xpow = x[None, :] ** d[:, None]
    pvals = []
    amp = 1.0 + 0.0j
    for k in index:
        pvals.append((d ** (k - 1)) @ xpow)
        amp *= (-TWO_PI_I) ** k / factorial(k - 1)
    return amp * _ordered_m_dp(pvals)


def g_function_direct(index, z: complex, tau: complex, mmax: int = 40,
                      N: int = 4000) -> complex:
    """Direct-sum oracle for g_function (rows via monotangent direct sums)."""
    index = Index(index)
    _require_admissible(index)
    if index.depth == 0:
        return 1.0 + 0.0j
    rows = {}

    def row(k, m):
        if (k, m) not in rows:
            rows[(k, m)] = monotangent(k, z + m * tau, method="direct", N=N)
        return rows[(k, m)]

    def rec(i, mprev):
        if i == index.depth:
            return 1.0 + 0.0j
        acc = 0.0 + 0.0j
        for m in range(mprev + 1, mmax + 1):
            acc += row(index[i], m) * rec(i + 1, m)
        return acc

    return rec(0, 0)
