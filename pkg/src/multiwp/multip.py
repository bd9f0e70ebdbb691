"""Multiple wp-functions: direct lattice evaluation, the restricted
multivariable variants with their Taylor data, the reduction to single
wp-functions with multiple-Eisenstein coefficients, and the Fourier /
modular properties of the repeated-2 family.

The full-lattice ordered sum is evaluated by splitting the chain
w_1 < ... < w_r at 0 (an exact regrouping of the truncated sum): each piece
factors into two restricted sums over w > 0, which converge fast under the
trailing-2 telescoping of the kernel.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial


from .core import DEFAULT_CONFIG, EvalConfig, Index, compositions_fixed, stuffle
from .kernels import lattice_sorted, ordered_sum
from .meisen import g_function, meis_qexp, monotangent
from .weier import TWO_PI_I, _check_tau, wp_k

__all__ = [
    "multiwp_tilde", "multiwp_direct", "multiwp_direct_error", "multiwp_raw",
    "multiwp_multivar", "ReducedForm", "multiwp_reduce", "QFactor",
    "multiwp_tilde_fourier",
    "antipode_residual", "multiwp22_fourier", "modular_transform_check",
    "fourier_c",
]


def _as_cfg(cfg) -> EvalConfig:
    return cfg if cfg is not None else DEFAULT_CONFIG


def _require_admissible(index: Index):
    if not index.admissible:
        raise ValueError(f"index {tuple(index)} not admissible: all parts must be >= 2")


# ---------------------------------------------------------------------------
# restricted multivariable wp
# ---------------------------------------------------------------------------

def _tilde_kernel(index: Index, xs, tau: complex, cfg: EvalConfig) -> complex:
    if index.depth == 0:
        return 1.0 + 0.0j
    w, pos0 = lattice_sorted(tau, cfg.M, cfg.N)
    region = w[pos0 + 1:]
    return ordered_sum(region, [complex(x) for x in xs], list(index),
                       split_last=index[-1] == 2, boundary_prev=0.0)


def _tilde_taylor(index: Index, xs, tau: complex, q_order: int, digits: int,
                  tol: float, max_order: int = 26) -> complex:
    r = index.depth
    total = 0.0 + 0.0j
    small = 0
    for p in range(0, max_order + 1):
        shell = 0.0 + 0.0j
        for ns in compositions_fixed(p, r, 0):
            c = 1.0
            for n_j, k_j, x_j in zip(ns, index, xs):
                c *= (-1) ** k_j * comb(n_j + k_j - 1, k_j - 1) * complex(x_j) ** n_j
            gt = meis_qexp(Index(n + k for n, k in zip(ns, index)), tau, q_order, digits)
            shell += c * gt
        total += shell
        small = small + 1 if abs(shell) <= tol * (1.0 + abs(total)) else 0
        if small >= 2 and p >= 4:
            break
    return total


def multiwp_tilde(index, xs, tau: complex, cfg: EvalConfig | None = None,
                  method: str = "auto") -> complex:
    """Restricted multivariable wp: sum over 0 < w_1 < ... < w_r of
    prod (x_s - w_s)^{-k_s}; depth 0 gives 1.

    "direct" uses the truncated ordered lattice kernel; "taylor" the
    Eisenstein Taylor expansion (small |x_i| only, but far more accurate).
    """
    index = Index(index)
    _require_admissible(index)
    tau = _check_tau(tau)
    cfg = _as_cfg(cfg)
    xs = [complex(x) for x in xs]
    if len(xs) != index.depth:
        raise ValueError("one argument per index part")
    from .weier import lattice_reduce
    for x in xs:
        z0, a, b = lattice_reduce(x, tau)
        if abs(z0) < 1e-12 and (a > 0 or (a == 0 and b > 0)):
            raise ZeroDivisionError("restricted wp pole: argument on the positive lattice")
    if index.depth == 0:
        return 1.0 + 0.0j
    small = all(abs(x) <= 0.45 for x in xs)
    if method == "taylor" or (method == "auto" and small and index.depth <= 3):
        if not small:
            raise ValueError("taylor path needs all |x_i| <= 0.45")
        return _tilde_taylor(index, xs, tau, cfg.q_order, 13, cfg.tol * 1e-4)
    return _tilde_kernel(index, xs, tau, cfg)


# ---------------------------------------------------------------------------
# full-lattice multiple wp
# ---------------------------------------------------------------------------

def _multivar_split(index: Index, zs, tau: complex, cfg: EvalConfig,
                    tilde_method: str = "direct") -> complex:
    """Exact split of the ordered full-lattice sum at 0 (prefix below 0 /
    member at 0 / suffix above 0); each factor is a restricted sum."""
    r = index.depth
    K = [0]
    for k in index:
        K.append(K[-1] + k)

    def tilde(idx, args):
        idx = Index(idx)
        if idx.depth == 0:
            return 1.0 + 0.0j
        if tilde_method == "taylor":
            return multiwp_tilde(idx, args, tau, cfg, method="taylor")
        return _tilde_kernel(idx, args, tau, cfg)

    total = 0.0 + 0.0j
    for i in range(r + 1):
        a = tilde(index[:i][::-1], [-zs[j] for j in range(i - 1, -1, -1)])
        b = tilde(index[i:], [zs[j] for j in range(i, r)])
        total += (-1) ** (K[i] % 2) * a * b
    for i in range(1, r + 1):
        a = tilde(index[:i - 1][::-1], [-zs[j] for j in range(i - 2, -1, -1)])
        b = tilde(index[i:], [zs[j] for j in range(i, r)])
        total += zs[i - 1] ** float(-index[i - 1]) * (-1) ** (K[i - 1] % 2) * a * b
    return total


def _split_extrapolated(index: Index, zs, tau: complex, cfg: EvalConfig) -> complex:
    """Richardson-extrapolated inner limit of the split evaluator.

    The fixed-M truncation error is an asymptotic series a/N + b/N^2 + ...
    (slot tails against the nonvanishing rows-above suffix constants give the
    1/N term); three evaluations at N, 2N, 4N remove both leading orders.
    """
    v1 = _multivar_split(index, zs, tau, cfg)
    v2 = _multivar_split(index, zs, tau, cfg.with_(N=2 * cfg.N))
    v4 = _multivar_split(index, zs, tau, cfg.with_(N=4 * cfg.N))
    return (8.0 * v4 - 6.0 * v2 + v1) / 3.0


def multiwp_direct(index, z: complex, tau: complex,
                   cfg: EvalConfig | None = None) -> complex:
    """Multiple wp-function: iterated Eisenstein-ordered lattice sum over
    w_1 < ... < w_r of prod (z - w_s)^{-k_s} (inner n-limits accelerated by
    Richardson extrapolation over cfg.N, 2 cfg.N, 4 cfg.N)."""
    index = Index(index)
    _require_admissible(index)
    tau = _check_tau(tau)
    cfg = _as_cfg(cfg)
    z = complex(z)
    from .weier import lattice_reduce
    if abs(lattice_reduce(z, tau)[0]) < 1e-12:
        raise ZeroDivisionError("multiwp pole: z on the lattice")
    return _split_extrapolated(index, [z] * index.depth, tau, cfg)


def multiwp_direct_error(index, z: complex, tau: complex,
                         cfg: EvalConfig | None = None) -> tuple[complex, float]:
    """(value at cfg, Cauchy-difference estimate against the half-N run)."""
    cfg = _as_cfg(cfg)
    lo = cfg.with_(N=max(cfg.M, cfg.N // 2))
    v1 = multiwp_direct(index, z, tau, lo)
    v2 = multiwp_direct(index, z, tau, cfg)
    return v2, abs(v2 - v1)


def multiwp_raw(index, z: complex, tau: complex,
                cfg: EvalConfig | None = None) -> complex:
    """Plain single-pass truncated sum over the whole rectangle (slowly
    convergent; kept as an independent cross-check of the split evaluator)."""
    index = Index(index)
    _require_admissible(index)
    tau = _check_tau(tau)
    cfg = _as_cfg(cfg)
    w, _ = lattice_sorted(tau, cfg.M, cfg.N)
    return ordered_sum(w, [complex(z)] * index.depth, list(index),
                       split_last=index[-1] == 2)


def multiwp_multivar(index, zs, tau: complex,
                     cfg: EvalConfig | None = None) -> complex:
    """Multivariable wp: sum over w_1 < ... < w_r of prod (z_s - w_s)^{-k_s}."""
    index = Index(index)
    _require_admissible(index)
    tau = _check_tau(tau)
    zs = [complex(z) for z in zs]
    if len(zs) != index.depth:
        raise ValueError("one z per index part")
    from .weier import lattice_reduce
    if any(abs(lattice_reduce(z, tau)[0]) < 1e-12 for z in zs):
        raise ZeroDivisionError("multiwp pole: some z_i on the lattice")
    return _split_extrapolated(index, zs, tau, _as_cfg(cfg))


# ---------------------------------------------------------------------------
# reduction to single wp-functions
# ---------------------------------------------------------------------------

Term = tuple[Fraction, tuple[Index, ...]]


@dataclass(frozen=True)
class ReducedForm:
    """wp_{k_1..k_r}(z) = sum_n coeff_n * wp_n(z) + const, with coefficients
    stored as exact rational combinations of products of multiple-Eisenstein
    symbols.  Symbol tuples keep the two-sided orientation (left blocks appear
    reversed); ``natural_terms`` exposes the un-reversed view.
    """

    index: Index
    wp_terms: tuple[tuple[int, tuple[Term, ...]], ...]  # (n, terms)
    const_terms: tuple[Term, ...]

    def wp_map(self) -> dict[int, tuple[Term, ...]]:
        return dict(self.wp_terms)

    def coeff_value(self, n: int, tau: complex, q_order: int = 64,
                    digits: int = 12) -> complex:
        terms = self.wp_map().get(n, ())
        return _terms_value(terms, tau, q_order, digits)

    def const_value(self, tau: complex, q_order: int = 64, digits: int = 12) -> complex:
        return _terms_value(self.const_terms, tau, q_order, digits)

    def evaluate(self, z: complex, tau: complex, cfg: EvalConfig | None = None,
                 q_order: int = 64, digits: int = 12) -> complex:
        cfg = _as_cfg(cfg)
        out = self.const_value(tau, q_order, digits)
        for n, _ in self.wp_terms:
            out += self.coeff_value(n, tau, q_order, digits) * wp_k(n, z, tau, cfg)
        return out

    def coeff_combination(self, n: int) -> dict[Index, Fraction]:
        """Stuffle-expanded single-symbol combination of the wp_n coefficient."""
        return _terms_combination(self.wp_map().get(n, ()))

    def const_combination(self) -> dict[Index, Fraction]:
        return _terms_combination(self.const_terms)

    def natural_terms(self) -> dict:
        """Same data with every symbol re-reversed into increasing-m order."""
        flip = lambda terms: tuple((c, tuple(ix.reversed() for ix in t)) for c, t in terms)
        return {"wp": {n: flip(t) for n, t in self.wp_terms}, "const": flip(self.const_terms)}


def _terms_value(terms, tau, q_order, digits) -> complex:
    out = 0.0 + 0.0j
    for c, idxs in terms:
        v = complex(Fraction(c))
        for ix in idxs:
            v *= meis_qexp(ix, tau, q_order, digits) if ix.depth else 1.0
        out += v
    return out


def _terms_combination(terms) -> dict[Index, Fraction]:
    out: dict[Index, Fraction] = {}
    for c, idxs in terms:
        comb_cur: dict[Index, Fraction] = {Index(): Fraction(1)}
        for ix in idxs:
            nxt: dict[Index, Fraction] = {}
            for left, cl in comb_cur.items():
                for word, mult in stuffle(left, ix).items():
                    nxt[word] = nxt.get(word, Fraction(0)) + cl * mult
            comb_cur = nxt
        for word, cw in comb_cur.items():
            s = out.get(word, Fraction(0)) + Fraction(c) * cw
            if s:
                out[word] = s
            elif word in out:
                del out[word]
    return out


@lru_cache(maxsize=None)
def multiwp_reduce(index) -> ReducedForm:
    """Exact reduction of wp_{k_1..k_r} to single wp_n's.

    Three groups of terms: shifted Taylor couplings against (wp_n - G_n),
    the n_i = 0 boundary couplings, and the pure two-sided products of
    multiple-Eisenstein symbols.
    """
    index = Index(index)
    _require_admissible(index)
    r, k = index.depth, index.weight
    wp_terms: dict[int, list[Term]] = {}
    const_terms: list[Term] = []

    def bin_or_zero(n, kk):
        return comb(n - 1, kk - 1) if n >= kk else 0

    # (wp_{n_i} - G_{n_i}) couplings: n_j >= 2, sum n = k
    for i in range(1, r + 1):
        for ns in compositions_fixed(k, r, 2):
            c = 1
            for j in range(1, r + 1):
                if j != i:
                    c *= bin_or_zero(ns[j - 1], index[j - 1])
            if c == 0:
                continue
            sgn = (-1) ** ((index[i - 1] + sum(ns[i - 1:])) % 2)
            a = Index(ns[:i - 1][::-1])
            b = Index(ns[i:])
            n_i = ns[i - 1]
            wp_terms.setdefault(n_i, []).append((Fraction(sgn * c), (a, b)))
            if n_i % 2 == 0:  # -G_{n_i} = -2 Gt_{n_i}
                const_terms.append((Fraction(-2 * sgn * c), (a, b, Index((n_i,)))))
    # n_i = 0 boundary couplings
    for i in range(1, r + 1):
        for ns in compositions_fixed(k, r, 0):
            if ns[i - 1] != 0:
                continue
            c = 1
            for j in range(1, r + 1):
                if j != i:
                    c *= bin_or_zero(ns[j - 1], index[j - 1])
            if c == 0:
                continue
            sgn = (-1) ** ((index[i - 1] + sum(ns[i:])) % 2)
            const_terms.append((Fraction(sgn * c), (Index(ns[:i - 1][::-1]), Index(ns[i:]))))
    # pure two-sided products
    for i in range(0, r + 1):
        sgn = (-1) ** (sum(index[i:]) % 2)
        const_terms.append((Fraction(sgn), (Index(index[:i][::-1]), Index(index[i:]))))

    for n, terms in wp_terms.items():
        for _, idxs in terms:
            assert all(p >= 2 for ix in idxs for p in ix)
    merged = tuple(sorted((n, tuple(t)) for n, t in wp_terms.items()))
    return ReducedForm(index, merged, tuple(const_terms))


# ---------------------------------------------------------------------------
# antipode residual (vanishing derivative sum of the Q-factors)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QFactor:
    """Q_{r,i}(z; tau; x) = tilde_{2^{r-i}}(z - x_{i+1}, ..., z - x_r) *
    tilde_{2^{i-1}}(x_{i-1} - z, ..., x_1 - z).

    Q_{r,1} and Q_{r,r} degenerate to a single restricted-wp factor.
    """

    r: int
    i: int
    xs: tuple[complex, ...]
    tau: complex

    def value(self, z: complex, cfg: EvalConfig | None = None,
              method: str = "taylor") -> complex:
        cfg = _as_cfg(cfg)
        r, i, xs = self.r, self.i, self.xs
        idx1 = Index((2,) * (r - i))
        idx2 = Index((2,) * (i - 1))
        a = multiwp_tilde(idx1, [z - xs[j] for j in range(i, r)], self.tau, cfg,
                          method=method) if idx1.depth else 1.0
        b = multiwp_tilde(idx2, [xs[j] - z for j in range(i - 2, -1, -1)], self.tau,
                          cfg, method=method) if idx2.depth else 1.0
        return a * b

    def dz(self, z: complex, cfg: EvalConfig | None = None) -> complex:
        """Derivative by the 4th-order central stencil, h = tol^(1/3) max(1,|z|)."""
        cfg = _as_cfg(cfg)
        h = cfg.tol ** (1.0 / 3.0) * max(1.0, abs(z))
        f = lambda u: self.value(u, cfg)
        return (-f(z + 2 * h) + 8 * f(z + h) - 8 * f(z - h) + f(z - 2 * h)) / (12 * h)


def antipode_residual(r: int, xs, tau: complex,
                      cfg: EvalConfig | None = None) -> complex:
    """sum_i d/dx_i [ Q_{r,i}(x_i; tau; x) ], which vanishes identically;
    the returned value is the numerical residual."""
    if r < 1:
        raise ValueError("r must be >= 1")
    xs = [complex(x) for x in xs]
    if len(xs) != r:
        raise ValueError("need r sample points")
    if len({round(x.real, 9) + 1j * round(x.imag, 9) for x in xs}) != r:
        raise ValueError("points must be distinct")
    tau = _check_tau(tau)
    cfg = _as_cfg(cfg)
    total = 0.0 + 0.0j
    for i in range(1, r + 1):
        total += QFactor(r, i, tuple(xs), tau).dz(xs[i - 1], cfg)
    return total


# ---------------------------------------------------------------------------
# Fourier expansion of the restricted wp at a reflected argument
# ---------------------------------------------------------------------------

def multiwp_tilde_fourier(index, z: complex, tau: complex, q_order: int = 64,
                          digits: int = 12) -> complex:
    """tilde wp_{k_1..k_r}(-z, ..., -z) in the strip 0 < Im z < Im tau via its
    Fourier structure: the m = 0 block gives a Hurwitz multiple zeta value,
    each run of positive rows a multitangent reduced to monotangents, and the
    ordered monotangent products over 0 < m_1 < ... < m_h are g-functions:

        (-1)^k sum over splittings  zeta^(z)(prefix) *
            sum over block reductions  prod coeff * g_{n_1..n_h}(z).

    Numeric spot-check, depth <= 2.
    """
    index = Index(index)
    _require_admissible(index)
    tau = _check_tau(tau)
    z = complex(z)
    if index.depth > 2:
        raise ValueError("spot-check supports depth <= 2 only")
    if not (0 < z.imag < tau.imag):
        raise ValueError("strip violated: need 0 < Im z < Im tau")
    from .meisen import multitangent_reduce, word_splittings
    from .mzv import hurwitz_mzv

    total = 0.0 + 0.0j
    for sp in word_splittings(index):
        pre = hurwitz_mzv(sp.mzv_prefix, z, digits).value if sp.mzv_prefix.depth else 1.0
        if not sp.blocks:
            total += pre
            continue
        reds = [multitangent_reduce(b).coefficients(digits) for b in sp.blocks]

        def rec(j: int, coeff: complex, ns: list):
            nonlocal total
            if j == len(reds):
                total += pre * coeff * g_function(Index(ns), z, tau, q_order)
                return
            for n, c in reds[j].items():
                rec(j + 1, coeff * c, ns + [n])

        rec(0, 1.0, [])
    return (-1) ** (index.weight % 2) * total


# ---------------------------------------------------------------------------
# Fourier expansion and modular transformation of wp_{2^r}
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def fourier_c(r: int, j: int) -> tuple[Fraction, int]:
    """c_{r,j} as (rational, e) with c = rational * (2 pi i)^e.

    c_{r,j} = (-1)^{r-j} 2^j (2 pi i)^{2r-2j} / (2r)! *
              sum_{m_1+..+m_j = r, m_i > 0} multinomial(2r; 2m_1..2m_j).

    (The (2 pi i)-power belongs in the numerator: both the closed forms of
    zeta({2}^l) behind the multitangent blocks and the r = 1, 2 cross-checks
    against the direct sum pin it there.)
    """
    if not (0 <= j <= r):
        raise ValueError("need 0 <= j <= r")
    tot = 0
    for ms in compositions_fixed(r, j, 1):
        mult = factorial(2 * r)
        for m in ms:
            mult //= factorial(2 * m)
        tot += mult
    frac = Fraction((-1) ** (r - j) * 2**j * tot, factorial(2 * r))
    return frac, 2 * r - 2 * j


def multiwp22_fourier(r: int, z: complex, tau: complex, q_order: int = 64) -> complex:
    """wp_{2,...,2} (r copies) in the strip 0 < Im z < Im tau via g-functions:

    sum_{0<=i<=j<=r} c_{r,j} g_{2^i}(z) (g_{2^{j-i}}(-z) + Psi_2(z) g_{2^{j-i-1}}(-z)).
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    tau = _check_tau(tau)
    z = complex(z)
    if not (0 < z.imag < tau.imag):
        raise ValueError("strip violated: need 0 < Im z < Im tau")
    psi2 = monotangent(2, z, method="qexp")
    gz = {i: g_function(Index((2,) * i), z, tau, q_order) for i in range(r + 1)}
    gm = {i: g_function(Index((2,) * i), -z, tau, q_order) for i in range(r + 1)}
    total = 0.0 + 0.0j
    for j in range(r + 1):
        frac, e = fourier_c(r, j)
        if frac == 0:
            continue
        c = complex(frac) * TWO_PI_I ** e
        for i in range(j + 1):
            inner = gm[j - i]
            if j - i - 1 >= 0:
                inner = inner + psi2 * gm[j - i - 1]
            total += c * gz[i] * inner
    return total


def modular_transform_check(r: int, mat, z: complex, tau: complex,
                            cfg: EvalConfig | None = None) -> float:
    """|LHS - RHS| of the weight-2r modular transformation law

    (c tau + d)^{-2r} wp_{2^r}(z/(c tau+d); (a tau+b)/(c tau+d))
        = sum_j (1/(r-j)!) (-2 pi i c/(c tau+d))^{r-j} wp_{2^j}(z; tau).
    """
    a, b, c, d = (int(v) for v in mat)
    if a * d - b * c != 1:
        raise ValueError("matrix must have determinant 1")
    if r < 0:
        raise ValueError("r must be >= 0")
    tau = _check_tau(tau)
    cfg = _as_cfg(cfg)
    z = complex(z)
    if r == 0:
        return 0.0
    cz = c * tau + d
    lhs = cz ** (-2 * r) * multiwp_direct((2,) * r, z / cz, (a * tau + b) / cz, cfg)
    rhs = 0.0 + 0.0j
    for j in range(r + 1):
        term = (-TWO_PI_I * c / cz) ** (r - j) / factorial(r - j)
        if j > 0:
            term *= multiwp_direct((2,) * j, z, tau, cfg)
        rhs += term
    return abs(lhs - rhs)
