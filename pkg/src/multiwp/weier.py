"""Depth-one analytic layer: Eisenstein series G_k, the (modified)
Weierstrass sigma / zeta / wp functions and their normalized derivatives
wp_k, Laurent-coefficient extraction, even-derivative polynomials, and the
closed forms for repeated-index lattice sums.

Conventions.  The lattice is L = Z*tau + Z with Im(tau) > 0 and lattice
sums are Eisenstein-ordered (inner limit over n, outer over m).  sigma and
zeta carry the extra exp(-G_2 z^2 / 2) normalization, so that

    zeta(z)  = 1/z - sum_{k even >= 2} G_k z^{k-1},
    eta_1    = zeta(z+1) - zeta(z)   = 0,
    eta_tau  = zeta(z+tau) - zeta(z) = -2 pi i,

and Legendre's relation reads eta_1 * tau - eta_tau = 2 pi i.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, lgamma, log, pi

import numpy as np

from .core import (DEFAULT_CONFIG, EvalConfig, beta, beta_prime,
                   partition_trace, phi_log)
from .qmod import QuasiModular, WpPolynomial

TWO_PI_I = 2j * pi


def _as_cfg(cfg) -> EvalConfig:
    return cfg if cfg is not None else DEFAULT_CONFIG


class ModularPoint:
    """A point tau of the upper half-plane with its nome q = e^{2 pi i tau}."""

    __slots__ = ("tau",)

    def __init__(self, tau: complex):
        tau = complex(getattr(tau, "tau", tau))
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half-plane")
        self.tau = tau

    @property
    def q(self) -> complex:
        return complex(np.exp(TWO_PI_I * self.tau))

    def __complex__(self) -> complex:
        return self.tau

    def __repr__(self) -> str:
        return f"ModularPoint({self.tau})"


def _check_tau(tau) -> complex:
    tau = complex(getattr(tau, "tau", tau))
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    return tau


def min_lattice_norm(tau: complex) -> float:
    """Length of the shortest nonzero vector of Z*tau + Z."""
    tau = complex(tau)
    best = float("inf")
    for m in range(-2, 3):
        for n in range(-2, 3):
            if m == 0 and n == 0:
                continue
            best = min(best, abs(m * tau + n))
    return best


def lattice_reduce(z: complex, tau: complex) -> tuple[complex, int, int]:
    """Write z = z0 + a*tau + b with z0 in the centered fundamental cell."""
    z, tau = complex(z), complex(tau)
    x = z.imag / tau.imag
    y = z.real - x * tau.real
    a, b = round(x), round(y)
    return z - a * tau - b, a, b


# ---------------------------------------------------------------------------
# Eisenstein series
# ---------------------------------------------------------------------------

_GVEC_CACHE: dict = {}


def _g_even_qexp(k: int, tau: complex) -> complex:
    """Even G_k by the sigma_{k-1} q-series (k <= 40)."""
    q = np.exp(TWO_PI_I * tau)
    aq = abs(q)
    # smallest n with amp * n^{k-1} |q|^n < 1e-18 for all even k <= 40
    nmax = 16
    while nmax < 4096:
        worst = 40 * log(2 * pi) - lgamma(40) + 39 * log(nmax) + nmax * log(aq)
        if worst < log(1e-19):
            break
        nmax *= 2
    n = np.arange(1, nmax + 1)
    sig = np.zeros(nmax + 1)
    for d in range(1, nmax + 1):
        sig[d::d] += np.exp((k - 1) * np.log(d))
    amp = np.exp(k * log(2 * pi) - lgamma(k)) * (-1.0) ** (k // 2)
    zk = float(zeta_real(k))
    return 2 * zk + 2 * amp * complex(np.sum(sig[1:] * q**n))


def _g_ball(k: int, tau: complex, B: int = 18) -> complex:
    """G_k by a small direct lattice ball (high k: brutal |w|^-k decay)."""
    m = np.arange(-B, B + 1)
    w = (m[:, None] * tau + m[None, :] * 0 + np.arange(-B, B + 1)[None, :]).ravel()
    w = w[np.abs(w) > 1e-12]
    return complex(np.sum(w ** float(-k)))


@lru_cache(maxsize=64)
def zeta_real(k: int) -> float:
    """Riemann zeta at integer k >= 2 (direct sum + Euler-Maclaurin tail)."""
    n = np.arange(1, 20001, dtype=float)
    s = float(np.sum(n ** float(-k)))
    x = 20001.0
    return s + x ** (1 - k) / (k - 1) + x ** (-k) / 2 + k / 12 * x ** (-k - 1)


def eisenstein_G(k: int, tau: complex, cfg: EvalConfig | None = None,
                 method: str = "auto") -> complex:
    """Eisenstein-ordered G_k(tau); zero for odd k >= 3.

    method: "auto"/"qexp" uses the q-series (small lattice ball for large k),
    "lattice" the truncated double sum with Euler-Maclaurin row tails.
    """
    if k < 2:
        raise ValueError("eisenstein_G needs k >= 2")
    tau = _check_tau(tau)
    if method == "lattice":
        return _eisenstein_G_lattice(k, tau, _as_cfg(cfg))
    if k % 2 == 1:
        return 0.0 + 0.0j
    key = (tau, k)
    hit = _GVEC_CACHE.get(key)
    if hit is None:
        hit = _g_even_qexp(k, tau) if k <= 40 else _g_ball(k, tau)
        if len(_GVEC_CACHE) > 40000:
            _GVEC_CACHE.clear()
        _GVEC_CACHE[key] = hit
    return hit


def _em_tail(x: complex, N: int, k: int) -> complex:
    """sum_{n >= N} (x + n)^-k by Euler-Maclaurin (5 correction terms)."""
    y = x + N
    out = y ** (1 - k) / (k - 1) + 0.5 * y ** float(-k) + k / 12.0 * y ** float(-k - 1)
    out -= k * (k + 1) * (k + 2) / 720.0 * y ** float(-k - 3)
    out += k * (k + 1) * (k + 2) * (k + 3) * (k + 4) / 30240.0 * y ** float(-k - 5)
    return out


def _row_sum(x: complex, N: int, k: int) -> complex:
    """sum_{n in Z} (x + n)^-k, exact row value via symmetric sum + EM tails."""
    n = np.arange(-N + 1, N, dtype=float)
    s = complex(np.sum((x + n) ** float(-k)))
    s += _em_tail(x, N, k)
    s += (-1) ** k * _em_tail(-x, N, k)
    return s


def _eisenstein_G_lattice(k: int, tau: complex, cfg: EvalConfig) -> complex:
    total = 0.0 + 0.0j
    # m = 0 row: n != 0
    n = np.arange(1, cfg.N, dtype=float)
    total += (1 + (-1) ** k) * (complex(np.sum(n ** float(-k))) + _em_tail(0.0, cfg.N, k))
    for m in range(1, cfg.M):
        total += _row_sum(m * tau, cfg.N, k)
        total += _row_sum(-m * tau, cfg.N, k)
    return total


def lipschitz_psi(k: int, x: complex, eps: float = 1e-17) -> complex:
    """Psi_k(x) = sum_{n in Z} (x+n)^-k = (-2 pi i)^k/(k-1)! sum_{d>0} d^{k-1} xi^d
    for Im(x) > 0 (sign convention fixed against the direct sum)."""
    xi = np.exp(TWO_PI_I * complex(x))
    if abs(xi) >= 1:
        raise ValueError("lipschitz_psi needs Im(x) > 0")
    D = max(8, int(np.ceil(log(1e-18) / log(abs(xi)))) + k * 8)
    D = min(D, 40000)
    d = np.arange(1, D + 1, dtype=float)
    series = complex(np.sum(d ** (k - 1) * xi**d))
    return (-TWO_PI_I) ** k / factorial(k - 1) * series


# ---------------------------------------------------------------------------
# wp_k, wp, sigma, zeta
# ---------------------------------------------------------------------------

def wp_k(k: int, z: complex, tau: complex, cfg: EvalConfig | None = None,
         method: str = "auto") -> complex:
    """wp_k(z; tau): 1/z^k plus the (-1)^k/(k-1)! normalized (k-2)-th
    derivative structure; wp_2 = wp + G_2.  Fully periodic, poles on L."""
    if k < 2:
        raise ValueError("wp_k needs k >= 2")
    tau = _check_tau(tau)
    cfg = _as_cfg(cfg)
    z0, _, _ = lattice_reduce(z, tau)
    if z0 == 0:
        raise ZeroDivisionError("wp_k pole: z is a lattice point")
    if method == "lattice":
        return _wp_k_rows(k, z0, tau, cfg)
    rmin = min_lattice_norm(tau)
    if abs(z0) <= 0.72 * rmin:
        return _wp_k_series(k, z0, tau)
    return _wp_k_rows(k, z0, tau, cfg)


def _wp_k_series(k: int, z0: complex, tau: complex, eps: float = 1e-17) -> complex:
    out = z0 ** float(-k)
    acc = 0.0 + 0.0j
    m = k % 2  # first m with m+k even (the m=0 term is (-1)^k G_k)
    last_small = 0
    while m <= 400:
        g = eisenstein_G(m + k, tau)
        t = comb(m + k - 1, k - 1) * g * z0**m
        acc += t
        last_small = last_small + 1 if abs(t) < eps * (1 + abs(acc)) else 0
        if last_small >= 3:
            break
        m += 2
    return out + (-1) ** k * acc


def _wp_k_rows(k: int, z0: complex, tau: complex, cfg: EvalConfig) -> complex:
    """Eisenstein-ordered row sums: wp_k(z) = sum_m Psi_k(z - m tau)."""
    total = _row_sum(z0, cfg.N, k)
    for m in range(1, cfg.M):
        t1 = _row_sum(z0 - m * tau, cfg.N, k)
        t2 = _row_sum(z0 + m * tau, cfg.N, k)
        total += t1 + t2
        if abs(t1) + abs(t2) < 1e-18 * (1 + abs(total)):
            break
    return total


def wp(z: complex, tau: complex, cfg: EvalConfig | None = None) -> complex:
    """Classical Weierstrass wp = wp_2 - G_2."""
    return wp_k(2, z, tau, cfg) - eisenstein_G(2, tau)


def wp_prime(z: complex, tau: complex, cfg: EvalConfig | None = None) -> complex:
    """wp'(z) = -2 wp_3(z)."""
    return -2.0 * wp_k(3, z, tau, cfg)


def sigma(z: complex, tau: complex, cfg: EvalConfig | None = None,
          method: str = "auto") -> complex:
    """Modified Weierstrass sigma; sigma(0) = 0, odd, entire.

    "auto": quasi-period reduction plus the exponential-of-series core (with
    recursive halving sigma(2u) = -wp'(u) sigma(u)^4 outside its disc);
    "product": the truncated Weierstrass product over the (M, N) rectangle;
    "series": the series core without reduction (raises outside its disc).
    """
    tau = _check_tau(tau)
    cfg = _as_cfg(cfg)
    z = complex(z)
    if method == "product":
        return _sigma_product(z, tau, cfg)
    if method == "series":
        rmin = min_lattice_norm(tau)
        if abs(z) > 0.8 * rmin:
            raise ValueError("series form of sigma requested outside its disc")
        return _sigma_core(z, tau, rmin)
    z0, a, b = lattice_reduce(z, tau)
    rmin = min_lattice_norm(tau)
    if a == 0 and b == 0:
        return _sigma_core(z0, tau, rmin)
    # sigma(z0 + w) = eps(w) sigma(z0) exp(eta(w) (z0 + w/2)), eta(w) = -2 pi i a
    w = a * tau + b
    eps_w = float((-1) ** (a + b + a * b))
    return eps_w * _sigma_core(z0, tau, rmin) * np.exp(-TWO_PI_I * a * (z0 + w / 2.0))


def _sigma_core(z0: complex, tau: complex, rmin: float) -> complex:
    if z0 == 0:
        return 0.0 + 0.0j
    if abs(z0) > 0.72 * rmin:
        u = z0 / 2.0
        return -wp_prime(u, tau) * _sigma_core(u, tau, rmin) ** 4
    acc = 0.0 + 0.0j
    k = 2
    small = 0
    while k <= 400:
        t = eisenstein_G(k, tau) * z0**k / k
        acc += t
        small = small + 1 if abs(t) < 1e-18 * (1 + abs(acc)) else 0
        if small >= 3:
            break
        k += 2
    return z0 * np.exp(-acc)


def _sigma_product(z: complex, tau: complex, cfg: EvalConfig) -> complex:
    from .kernels import lattice_sorted

    w, pos0 = lattice_sorted(tau, cfg.M, cfg.N)
    w = np.delete(w, pos0)
    g2 = eisenstein_G(2, tau)
    logs = np.log1p(-z / w) + z / w + 0.5 * (z / w) ** 2
    return z * np.exp(-0.5 * g2 * z * z + complex(np.sum(logs)))


def weier_zeta(z: complex, tau: complex, cfg: EvalConfig | None = None) -> complex:
    """Modified Weierstrass zeta = sigma'/sigma, Laurent 1/z - sum G_{n+2} z^{n+1}."""
    tau = _check_tau(tau)
    z0, a, b = lattice_reduce(z, tau)
    if z0 == 0:
        raise ZeroDivisionError("weier_zeta pole: z on the lattice")
    core = _zeta_core(z0, tau, min_lattice_norm(tau))
    if a == 0:
        return core
    return core + a * (-TWO_PI_I)  # eta_1 = 0, eta_tau = -2 pi i


def _zeta_core(z0: complex, tau: complex, rmin: float) -> complex:
    if abs(z0) > 0.72 * rmin:
        u = z0 / 2.0
        # zeta(2u) = 2 zeta(u) + wp''(u) / (2 wp'(u))
        wpp = wp_prime(u, tau)
        wp2d = 6.0 * wp(u, tau) ** 2 - 30.0 * eisenstein_G(4, tau)
        return 2.0 * _zeta_core(u, tau, rmin) + wp2d / (2.0 * wpp)
    acc = 0.0 + 0.0j
    k = 2
    small = 0
    while k <= 400:
        t = eisenstein_G(k, tau) * z0 ** (k - 1)
        acc += t
        small = small + 1 if abs(t) < 1e-18 * (1 + abs(acc)) else 0
        if small >= 3:
            break
        k += 2
    return 1.0 / z0 - acc


def quasi_periods(tau: complex, cfg: EvalConfig | None = None) -> tuple[complex, complex]:
    """(eta_1, eta_tau) computed honestly as zeta differences."""
    tau = _check_tau(tau)
    z = -0.25 - 0.15j + 0.1 * tau
    eta1 = weier_zeta(z + 1, tau, cfg) - weier_zeta(z, tau, cfg)
    etat = weier_zeta(z + tau, tau, cfg) - weier_zeta(z, tau, cfg)
    return eta1, etat


# ---------------------------------------------------------------------------
# Laurent / Taylor extraction by Cauchy integrals
# ---------------------------------------------------------------------------

def laurent_coefficients(f, orders, radius: float, nodes: int | None = None):
    """Coefficients c_j of f(z) = sum c_j z^j for j in ``orders``.

    Trapezoidal Cauchy integrals on |z| = radius; spectrally accurate for f
    meromorphic with no singularity on or inside the circle except 0.
    """
    orders = list(orders)
    Q = nodes or 4 * (max(abs(o) for o in orders) + 8)
    th = 2 * pi * np.arange(Q) / Q
    ring = radius * np.exp(1j * th)
    vals = np.array([f(complex(p)) for p in ring])
    out = {}
    for j in orders:
        out[j] = complex(np.mean(vals * np.exp(-1j * j * th))) * radius ** float(-j)
    return out


# ---------------------------------------------------------------------------
# derivative polynomials and trace forms
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def wp_deriv_poly(k: int) -> WpPolynomial:
    """wp_2^{(2k-2)} as a degree-k polynomial in wp over Q[G_4, G_6] (+G_2 at k=1).

    Recursion: if wp_2^{(2k-2)} = sum_q a_q wp^q then
    wp_2^{(2k)} = sum_q a_q (2q(2q+1) wp^{q+1} - 30q(2q-1) G_4 wp^{q-1}
                            - 140 q(q-1) G_6 wp^{q-2}).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return WpPolynomial({(1, 0): QuasiModular.const(1), (0, 0): QuasiModular.gen(2)})
    prev = wp_deriv_poly(k - 1)
    G4, G6 = QuasiModular.gen(4), QuasiModular.gen(6)
    out = WpPolynomial()
    for (q, t), c in prev.coeffs.items():
        if t != 0:
            raise AssertionError("even derivatives stay in Q[wp]")
        if q == 0:
            continue
        out = out + WpPolynomial({(q + 1, 0): c * (2 * q * (2 * q + 1))})
        out = out + WpPolynomial({(q - 1, 0): c * (-30 * q * (2 * q - 1)) * G4})
        if q >= 2:
            out = out + WpPolynomial({(q - 2, 0): c * (-140 * q * (q - 1)) * G6})
    return out


@lru_cache(maxsize=None)
def wp2_deriv(n: int) -> WpPolynomial:
    """wp_2^{(n)} for any n >= 0 (odd orders via d/dz of the even ones)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n % 2 == 0:
        return wp_deriv_poly(n // 2 + 1)
    return wp2_deriv(n - 1).dz()


def phi_exp(lam) -> Fraction:
    """prod 1/m_k!, the exponential-formula partition weight."""
    out = Fraction(1)
    for m in lam.mult.values():
        out /= factorial(m)
    return out


@lru_cache(maxsize=None)
def f_coeff(r: int) -> QuasiModular:
    """f_r with wp_{2^r} = f_r wp_2 + g_r: the signed partition Eisenstein trace

    f_r = (-1)^{r-1} Tr_{r-1}(beta; -G_2, -G_4, ..., -G_{2(r-1)}).

    The signs are calibrated against the direct lattice sums: f_2 = G_2 and
    f_3 = (G_2^2 - G_4)/2.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    X = [-QuasiModular.gen(2 * j) for j in range(1, r)]
    tr = partition_trace(beta, X, r - 1)
    tr = QuasiModular.const(tr) if isinstance(tr, (int, Fraction)) else tr
    return (-1) ** (r - 1) * tr


@lru_cache(maxsize=None)
def g_coeff(r: int) -> QuasiModular:
    """g_r = sum_{t=0}^{r} (-1)^{r-t} (2(r-t)-1) G_{2(r-t)} f_{t+1}, G_0 = -1."""
    out = QuasiModular()
    for t in range(0, r + 1):
        j = r - t
        Gj = QuasiModular.const(-1) if j == 0 else QuasiModular.gen(2 * j)
        out = out + (-1) ** j * (2 * j - 1) * Gj * f_coeff(t + 1)
    return out


@lru_cache(maxsize=None)
def g_hat_coeff(r: int) -> QuasiModular:
    """g_hat_r = f_{r+1} + sum_{t=0}^{r-2} (-1)^{r-t} (2(r-t)-1) G_{2(r-t)} f_{t+1}."""
    out = f_coeff(r + 1)
    for t in range(0, r - 1):
        j = r - t
        out = out + (-1) ** j * (2 * j - 1) * QuasiModular.gen(2 * j) * f_coeff(t + 1)
    return out


def multi_to_deriv_form(h: int, r: int) -> WpPolynomial:
    """wp_{h^r} via the harmonic-product exponential:

    wp_{h^r} = (-1)^r sum_{lam |- r} prod_k (1/m_k!) (c_{hk} wp_2^{(hk-2)})^{m_k},
    c_j = (-1)^{j-1} h / j!.
    """
    if r == 0:
        return WpPolynomial.const(1)
    X = []
    for j in range(1, r + 1):
        c = Fraction((-1) ** (h * j - 1) * h, factorial(h * j))
        X.append(c * wp2_deriv(h * j - 2))
    tr = partition_trace(phi_exp, X, r)
    tr = WpPolynomial.const(tr) if isinstance(tr, (int, Fraction)) else tr
    return (-1) ** r * tr


def repeated_index_closed_form(h: int, r: int) -> WpPolynomial:
    """Closed form of wp_{h,...,h} (r copies) as a wp-polynomial.

    h = 2 uses the f_r/g_hat_r traces; h = 3 with odd r uses the beta' trace
    (signed: Tr_{(r-1)/2}(beta'; -G_6, ..., -G_{3(r-1)}) * wp_3, fixed by the
    r = 1 case); anything else routes through the derivative polynomials.
    """
    if h < 2 or r < 1:
        raise ValueError("need h >= 2 and r >= 1")
    if h == 2:
        fr, gr = f_coeff(r), g_hat_coeff(r)
        return WpPolynomial({(1, 0): fr, (0, 0): gr})
    if h == 3 and r % 2 == 1:
        X = [-QuasiModular.gen(6 * j) for j in range(1, (r - 1) // 2 + 1)]
        tr = partition_trace(beta_prime, X, (r - 1) // 2)
        tr = QuasiModular.const(tr) if isinstance(tr, (int, Fraction)) else tr
        # wp_3 = -wp'/2
        return WpPolynomial({(0, 1): tr * Fraction(-1, 2)})
    return multi_to_deriv_form(h, r)


def wp_deriv_trace_form(k: int) -> dict[str, WpPolynomial]:
    """Both partition-trace expressions for wp_2^{(2k-2)}.

    "multi_wp":  k (2k-1)! Tr_k(phi_log; wp_2, -wp_{2,2}, ..., (-1)^{k+1} wp_{2^k})
    (the overall sign is pinned by the k = 1 case, which must give wp_2), and
    "classical": (2k-1)! (G_{2k} + k Tr_k(phi_log; wp, -3 G_4, ..., -(2k-1) G_{2k})).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    X1 = [(-1) ** (j + 1) * repeated_index_closed_form(2, j) for j in range(1, k + 1)]
    t1 = partition_trace(phi_log, X1, k)
    t1 = WpPolynomial.const(t1) if isinstance(t1, (int, Fraction)) else t1
    form1 = k * factorial(2 * k - 1) * t1

    X2: list = [WpPolynomial.wp()]
    for j in range(2, k + 1):
        X2.append(WpPolynomial.const(-(2 * j - 1) * QuasiModular.gen(2 * j)))
    t2 = partition_trace(phi_log, X2, k)
    t2 = WpPolynomial.const(t2) if isinstance(t2, (int, Fraction)) else t2
    form2 = factorial(2 * k - 1) * (WpPolynomial.const(QuasiModular.gen(2 * k)) + k * t2)
    return {"multi_wp": form1, "classical": form2}


def g_value_fn(tau: complex, cfg: EvalConfig | None = None):
    """Evaluator for QuasiModular generators at tau."""
    def g(k: int) -> complex:
        return eisenstein_G(k, tau, cfg)
    return g


def eval_wp_polynomial(p: WpPolynomial, z: complex, tau: complex,
                       cfg: EvalConfig | None = None) -> complex:
    return p.evaluate(wp(z, tau, cfg), wp_prime(z, tau, cfg), g_value_fn(tau, cfg))
