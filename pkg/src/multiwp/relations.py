"""Formal relation engine over multiple-Eisenstein symbols.

A SymbolicCombination is an exact rational linear combination of admissible
indices (all parts >= 2) of one common weight, the carrier of linear
relations among multiple Eisenstein series.  The antipode relations come
from the vanishing derivative sum of the restricted-wp product factors;
their stuffle closure is spanned, by bilinearity and associativity, by
products with single indices, and exact integer row reduction gives the
rank of the relation space in each weight.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, pi

from .core import (Index, TruncatedSeries, bernoulli, compositions_fixed,
                   compositions_ge2, stuffle)
from .mzv import mzv
from .meisen import meis_qexp
from .weier import eisenstein_G

__all__ = [
    "SymbolicCombination", "RelationMatrix", "antipode_relation", "relation_rows", "relation_rank",
    "conjectured_dim", "conjectured_rel", "relation_table",
    "mzv_relation_residual", "eisenstein_relation_residual", "combination_residual",
]


class SymbolicCombination:
    """Weight-homogeneous rational combination of admissible indices."""

    __slots__ = ("terms", "weight")

    def __init__(self, terms: dict | None = None):
        self.terms: dict[Index, Fraction] = {}
        w = None
        for ix, c in (terms or {}).items():
            ix = Index(ix)
            c = Fraction(c)
            if not c:
                continue
            if not ix.admissible:
                raise ValueError(f"non-admissible symbol {tuple(ix)}")
            if w is None:
                w = ix.weight
            elif ix.weight != w:
                raise ValueError("mixed weights in one combination")
            self.terms[ix] = c
        self.weight = w

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "SymbolicCombination") -> "SymbolicCombination":
        out = dict(self.terms)
        for ix, c in other.terms.items():
            s = out.get(ix, Fraction(0)) + c
            if s:
                out[ix] = s
            elif ix in out:
                del out[ix]
        return SymbolicCombination(out)

    def scale(self, c) -> "SymbolicCombination":
        c = Fraction(c)
        return SymbolicCombination({ix: c * v for ix, v in self.terms.items()})

    def stuffle_mul(self, u: Index) -> "SymbolicCombination":
        """Multiply by the symbol of index u (quasi-shuffle expansion)."""
        out: dict[Index, Fraction] = {}
        for ix, c in self.terms.items():
            for word, m in stuffle(u, ix).items():
                s = out.get(word, Fraction(0)) + c * m
                if s:
                    out[word] = s
                elif word in out:
                    del out[word]
        return SymbolicCombination(out)

    def evaluate(self, tau: complex, q_order: int = 64, digits: int = 12) -> complex:
        return sum(complex(c) * meis_qexp(ix, tau, q_order, digits)
                   for ix, c in self.terms.items())

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = [f"({c})*Gt{tuple(ix)}" for ix, c in sorted(self.terms.items())]
        return " + ".join(bits)


@lru_cache(maxsize=None)
def antipode_relation(source) -> SymbolicCombination:
    """The weight-(k-1) relation attached to a source index of weight k:

    sum over i and n-vectors with n_i = 1 of
    (-1)^{k_i + n_i + ... + n_r} prod_{p != i} C(n_p - 1, k_p - 1)
        Gt_{n_{i-1},..,n_1} * Gt_{n_{i+1},..,n_r},

    with each two-symbol product expanded by the stuffle.  Evaluates to the
    zero function; depth-1 sources give the empty combination.
    """
    source = Index(source)
    if not source.admissible:
        raise ValueError("source parts must be >= 2")
    r = source.depth
    out: dict[Index, Fraction] = {}
    for i in range(1, r + 1):
        k_i = source[i - 1]
        others = [source[p] for p in range(r) if p != i - 1]
        # nonvanishing binomials force n_p = k_p + m_p with sum m_p = k_i - 1
        for ms in compositions_fixed(k_i - 1, r - 1, 0):
            ns = [kp + mp for kp, mp in zip(others, ms)]
            ns.insert(i - 1, 1)
            c = 1
            for p in range(1, r + 1):
                if p != i:
                    c *= comb(ns[p - 1] - 1, source[p - 1] - 1)
            sgn = (-1) ** ((k_i + sum(ns[i - 1:])) % 2)
            a = Index(ns[:i - 1][::-1])
            b = Index(ns[i:])
            for word, m in stuffle(a, b).items():
                s = out.get(word, Fraction(0)) + sgn * c * m
                if s:
                    out[word] = s
                elif word in out:
                    del out[word]
    return SymbolicCombination(out)


def relation_rows(weight: int, products: bool = True):
    """Generate the antipode relations of the given weight and (optionally)
    their stuffle products with all admissible single indices."""
    if weight < 2:
        raise ValueError("weight must be >= 2")
    for source in compositions_ge2(weight + 1):
        rel = antipode_relation(source)
        if rel:
            yield rel
    if not products:
        return
    for uw in range(2, weight - 1):
        base_rows = [antipode_relation(s) for s in compositions_ge2(weight - uw + 1)]
        base_rows = [r for r in base_rows if r]
        if not base_rows:
            continue
        for u in compositions_ge2(uw):
            for rel in base_rows:
                yield rel.stuffle_mul(u)


class _IntEchelon:
    """Incremental exact row echelon over the integers (gcd-normalized)."""

    def __init__(self, col_of: dict):
        self.col_of = col_of
        self.pivots: dict[int, dict[int, int]] = {}

    @staticmethod
    def _normalize(row: dict[int, int]) -> dict[int, int]:
        from math import gcd
        g = 0
        for v in row.values():
            g = gcd(g, v)
        if g > 1:
            row = {c: v // g for c, v in row.items()}
        lead = row[min(row)]
        if lead < 0:
            row = {c: -v for c, v in row.items()}
        return row

    def insert(self, comb: SymbolicCombination) -> bool:
        """Reduce a combination against the basis; True if it adds rank."""
        den = 1
        for c in comb.terms.values():
            den = den * c.denominator // __import__("math").gcd(den, c.denominator)
        row = {self.col_of[ix]: int(c * den) for ix, c in comb.terms.items()}
        from math import gcd
        while row:
            p = min(row)
            piv = self.pivots.get(p)
            if piv is None:
                row = self._normalize(row)
                self.pivots[p] = row
                return True
            a, b = piv[p], row[p]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            new = {}
            for c in set(row) | set(piv):
                v = fa * row.get(c, 0) - fb * piv.get(c, 0)
                if v:
                    new[c] = v
            row = new
        return False

    @property
    def rank(self) -> int:
        return len(self.pivots)


class RelationMatrix:
    """Rows = weight-homogeneous combinations over the ordered basis of
    admissible compositions; the rank comes from exact integer elimination
    and is independent of row order and duplicates."""

    def __init__(self, weight: int):
        self.weight = weight
        self.basis = compositions_ge2(weight)
        self._ech = _IntEchelon({ix: i for i, ix in enumerate(self.basis)})
        self.rows: list[SymbolicCombination] = []

    def add(self, comb: SymbolicCombination) -> bool:
        if comb and comb.weight != self.weight:
            raise ValueError("row weight mismatch")
        self.rows.append(comb)
        return self._ech.insert(comb) if comb else False

    @property
    def rank(self) -> int:
        return self._ech.rank


@lru_cache(maxsize=None)
def relation_rank(weight: int) -> int:
    """Exact rank of the antipode + stuffle-product relation span."""
    mat = RelationMatrix(weight)
    for row in relation_rows(weight):
        mat.add(row)
    return mat.rank


# ---------------------------------------------------------------------------
# conjectured dimensions
# ---------------------------------------------------------------------------

_DIM_DEN = [1, 0, -1, -1, -1, -1, 0, 0, 1, 1, 1, 1, 1]  # 1 - X^2..X^5 + X^8..X^12


@lru_cache(maxsize=None)
def _dim_series(order: int) -> TruncatedSeries:
    den = TruncatedSeries([Fraction(c) for c in (_DIM_DEN + [0] * order)[:order + 1]], var="X")
    return den.inverse()


def conjectured_dim(weight: int) -> int:
    """Coefficient of X^weight in 1/(1 - X^2 - X^3 - X^4 - X^5 + X^8 + ... + X^12)."""
    if weight < 0:
        raise ValueError("weight must be >= 0")
    c = _dim_series(max(weight, 16))[weight]
    assert c.denominator == 1
    return int(c)


def conjectured_rel(weight: int) -> int:
    """Candidate count minus conjectured dimension."""
    return len(compositions_ge2(weight)) - conjectured_dim(weight)


def relation_table(max_weight: int = 12, min_weight: int = 2,
                   with_rank: bool = True) -> list[dict]:
    rows = []
    for w in range(min_weight, max_weight + 1):
        row = {
            "weight": w,
            "dim_conj": conjectured_dim(w),
            "rel_conj": conjectured_rel(w),
        }
        if with_rank:
            row["rel_anti"] = relation_rank(w)
            row["deficit"] = row["rel_conj"] - row["rel_anti"]
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# numeric residuals of the analytic relations
# ---------------------------------------------------------------------------

def combination_residual(comb: SymbolicCombination, tau: complex,
                         q_order: int = 64, digits: int = 12) -> float:
    return abs(comb.evaluate(tau, q_order, digits)) if comb else 0.0


def mzv_relation_residual(index, digits: int = 12) -> float:
    """|LHS - RHS| of the two-sided multiple-zeta identity

    sum_{i=0}^r (-1)^{k_{i+1}+..+k_r} zeta(k_i..k_1) zeta(k_{i+1}..k_r)
      = - sum_{i, n_i even} (-1)^{k_i+n_{i+1}+..+n_r} prod_{j != i} C(n_j-1, k_j-1)
          (2 pi i)^{n_i} B_{n_i} / n_i! zeta(n_{i-1}..n_1) zeta(n_{i+1}..n_r).
    """
    index = Index(index)
    if not index.admissible:
        raise ValueError("parts must be >= 2")
    r, k = index.depth, index.weight

    def zv(ix) -> float:
        return mzv(Index(ix), digits).real

    lhs = 0.0
    for i in range(0, r + 1):
        sgn = (-1) ** (sum(index[i:]) % 2)
        lhs += sgn * zv(index[:i][::-1]) * zv(index[i:])
    rhs = 0.0
    from math import factorial
    for i in range(1, r + 1):
        for ns in compositions_fixed(k, r, 0):
            if ns[i - 1] % 2 == 1:
                continue
            c = 1
            for j in range(1, r + 1):
                if j != i:
                    c *= comb(ns[j - 1] - 1, index[j - 1] - 1) \
                        if ns[j - 1] >= index[j - 1] else 0
            if c == 0:
                continue
            n_i = ns[i - 1]
            sgn = (-1) ** ((index[i - 1] + sum(ns[i:])) % 2)
            # (2 pi i)^{n_i} B_{n_i} / n_i!  is real for even n_i
            euler = (-1) ** (n_i // 2) * (2 * pi) ** n_i * float(bernoulli(n_i)) / factorial(n_i)
            rhs -= sgn * c * euler * zv(ns[:i - 1][::-1]) * zv(ns[i:])
    return abs(lhs - rhs)


def eisenstein_relation_residual(index, m: int, tau: complex, q_order: int = 64,
                                 digits: int = 12) -> float:
    """|LHS - RHS| of the z^m Taylor-coefficient relation among multiple
    Eisenstein series (m > 0).

    The right side carries a factor (-1)^m (pinned by the depth-one case,
    where both sides are classical Eisenstein data), and the boundary sum
    runs over i = 1..r.
    """
    index = Index(index)
    if not index.admissible:
        raise ValueError("parts must be >= 2")
    if m <= 0:
        raise ValueError("m must be positive")
    r, k = index.depth, index.weight

    def gt(ix) -> complex:
        ix = Index(ix)
        return meis_qexp(ix, tau, q_order, digits) if ix.depth else 1.0

    lhs = 0.0 + 0.0j
    for i in range(1, r + 1):
        for ns in compositions_fixed(m + k, r, 0):
            n_i = ns[i - 1]
            if n_i % 2 == 1:
                continue  # odd Eisenstein values vanish
            c = comb(n_i - 1, m) if n_i >= m + 1 else 0
            for j in range(1, r + 1):
                if j != i:
                    c *= comb(ns[j - 1] - 1, index[j - 1] - 1) \
                        if ns[j - 1] >= index[j - 1] else 0
            if c == 0:
                continue
            sgn = (-1) ** ((index[i - 1] + sum(ns[i:])) % 2)
            lhs += sgn * c * gt(ns[:i - 1][::-1]) * gt(ns[i:]) * eisenstein_G(n_i, tau)
    rhs = 0.0 + 0.0j
    for i in range(0, r + 1):
        for ns in compositions_fixed(m + k, r, 0):
            c = 1
            for j in range(1, r + 1):
                c *= comb(ns[j - 1] - 1, index[j - 1] - 1) \
                    if ns[j - 1] >= index[j - 1] else 0
            if c == 0:
                continue
            sgn = (-1) ** (sum(ns[i:]) % 2)
            rhs += sgn * c * gt(ns[:i][::-1]) * gt(ns[i:])
    for i in range(1, r + 1):
        for ns in compositions_fixed(m + k, r, 0):
            if ns[i - 1] != 0:
                continue
            c = 1
            for j in range(1, r + 1):
                if j != i:
                    c *= comb(ns[j - 1] - 1, index[j - 1] - 1) \
                        if ns[j - 1] >= index[j - 1] else 0
            if c == 0:
                continue
            sgn = (-1) ** ((index[i - 1] + sum(ns[i:])) % 2)
            rhs += sgn * c * gt(ns[:i - 1][::-1]) * gt(ns[i:])
    return abs(lhs - (-1) ** m * rhs)
