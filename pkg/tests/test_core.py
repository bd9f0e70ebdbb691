from fractions import Fraction

import pytest

from multiwp.core import (EvalConfig, Index, Partition, TruncatedSeries, bernoulli,
                          beta, beta_prime, compositions_ge2, partition_trace,
                          partitions, phi_log, series_mul, stuffle,
                          stuffle_combination)
from multiwp.weier import phi_exp


def test_index_basics():
    ix = Index((2, 3))
    assert ix.weight == 5 and ix.depth == 2 and ix.admissible
    assert ix.reversed() == Index((3, 2))
    assert Index(()).weight == 0 and Index(()).depth == 0
    assert not Index((2, 1)).admissible
    with pytest.raises(ValueError):
        Index((0, 2))


def test_partitions_enumeration():
    assert [p.parts for p in partitions(0)] == [()]
    assert [p.parts for p in partitions(1)] == [(1,)]
    assert [p.parts for p in partitions(4)] == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    # p(r) for r = 0..9
    assert [len(partitions(r)) for r in range(10)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30]
    lam = Partition((3, 1, 1))
    assert lam.size == 5 and lam.length == 3 and lam.mult == {3: 1, 1: 2}


def test_trace_weights():
    lam2 = Partition((2,))
    lam11 = Partition((1, 1))
    assert beta(lam2) == Fraction(1, 2)
    assert beta(lam11) == Fraction(1, 2)
    assert beta_prime(lam2) == Fraction(1, 4)
    assert beta_prime(lam11) == Fraction(1, 8)
    assert phi_log(lam2) == 1
    assert phi_log(lam11) == Fraction(1, 2)
    assert phi_exp(lam11) == Fraction(1, 2)


def test_partition_trace_examples():
    assert partition_trace(beta, [], 0) == 1
    X1, X2 = Fraction(3, 7), Fraction(-2, 5)
    assert partition_trace(beta, [X1], 1) == X1
    assert partition_trace(beta, [X1, X2], 2) == X1 * X1 / 2 + X2 / 2
    with pytest.raises(ValueError):
        partition_trace(beta, [X1], 2)
    with pytest.raises(ValueError):
        partition_trace(beta, [X1], -1)


def test_exponential_formula():
    # coefficient of Y^r in exp(sum x_k Y^k) is Tr_r(phi_exp; x)
    xs = [Fraction(n, d) for n, d in [(1, 2), (-2, 3), (1, 5), (3, 7), (-1, 2),
                                      (2, 9), (1, 3), (-3, 4), (1, 7), (2, 5)]]
    T = 10
    s = TruncatedSeries([Fraction(0)] + xs[:T], var="Y")
    e = s.exp()
    for r in range(T + 1):
        assert e[r] == partition_trace(phi_exp, xs, r)


def test_girard_newton_sign():
    # log(1 - sum x_r Y^r) = -sum_r Tr_r(phi_log; x) Y^r: the stated identity
    # needs this leading minus (at r = 2 the unsigned version is wrong).
    xs = [Fraction(1, 2), Fraction(1, 3), Fraction(-2, 7), Fraction(1, 4),
          Fraction(2, 5), Fraction(-1, 6), Fraction(1, 8), Fraction(3, 5)]
    T = 8
    u = TruncatedSeries([Fraction(1)] + [-x for x in xs[:T]], var="Y")
    lg = u.log()
    for r in range(1, T + 1):
        assert lg[r] == -partition_trace(phi_log, xs, r)
    assert lg[2] != partition_trace(phi_log, xs, 2)  # printed sign fails


def test_stuffle_examples():
    assert stuffle((2,), (3,)) == {Index((2, 3)): 1, Index((3, 2)): 1, Index((5,)): 1}
    assert stuffle((), (2, 7)) == {Index((2, 7)): 1}
    assert stuffle((2,), (2,)) == {Index((2, 2)): 2, Index((4,)): 1}


def _compositions(w):
    if w == 0:
        return [()]
    return [(f,) + r for f in range(1, w + 1) for r in _compositions(w - f)]


def test_stuffle_commutative_small():
    for w1 in range(1, 5):
        for w2 in range(1, 5):
            for a in _compositions(w1):
                for b in _compositions(w2):
                    assert stuffle(a, b) == stuffle(b, a)


def test_stuffle_associative_small():
    for w1 in range(1, 4):
        for w2 in range(1, 4):
            for w3 in range(1, 4):
                for a in _compositions(w1):
                    for b in _compositions(w2):
                        for c in _compositions(w3):
                            lhs = stuffle_combination(stuffle(a, b), {Index(c): 1})
                            rhs = stuffle_combination({Index(a): 1}, stuffle(b, c))
                            assert lhs == rhs


def test_stuffle_weight_graded():
    for word, c in stuffle((2, 4), (3,)).items():
        assert word.weight == 9 and c > 0


def test_bernoulli():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(3) == 0
    assert bernoulli(12) == Fraction(-691, 2730)


def test_compositions_ge2():
    assert compositions_ge2(0) == (Index(()),)
    assert compositions_ge2(2) == (Index((2,)),)
    assert compositions_ge2(3) == (Index((3,)),)
    assert set(compositions_ge2(6)) == {Index(c) for c in
                                        [(6,), (2, 4), (4, 2), (3, 3), (2, 2, 2)]}
    assert list(compositions_ge2(7)) == sorted(compositions_ge2(7))
    # a(k) = sum_{j >= 2} a(k - j)
    a = [len(compositions_ge2(k)) for k in range(15)]
    for k in range(2, 15):
        assert a[k] == sum(a[k - j] for j in range(2, k + 1))
    assert a[9] == 21


def test_series_arithmetic():
    one = TruncatedSeries([1, 0, 0], var="Y")
    s = TruncatedSeries([2, -1, 3], var="Y")
    assert series_mul(one, s) == s
    a = TruncatedSeries([1, 1, 0], var="Y")
    b = TruncatedSeries([1, -1, 0], var="Y")
    assert series_mul(a, b).coeffs == [1, 0, -1]
    with pytest.raises(ValueError):
        series_mul(a, TruncatedSeries([1, 0], var="q"))
    # truncation to min order
    assert series_mul(TruncatedSeries([1, 2], var="Y"), s).order == 1


def test_series_exp_log_roundtrip():
    xs = [Fraction(0), Fraction(1, 2), Fraction(-1, 3), Fraction(1, 7),
          Fraction(2, 5), Fraction(-3, 4), Fraction(1, 9), Fraction(1, 2),
          Fraction(-2, 7)]
    s = TruncatedSeries(xs, var="Y")
    back = s.exp().log()
    assert back == s
    inv = s.exp().inverse()
    assert (s.exp() * inv).coeffs[0] == 1
    assert all(c == 0 for c in (s.exp() * inv).coeffs[1:])


def test_eval_config_validation():
    cfg = EvalConfig()
    assert cfg.M == 80 and cfg.N == 800 and cfg.q_order == 64
    assert cfg.refined().M == 160 and cfg.refined().N == 1600
    with pytest.raises(ValueError):
        EvalConfig(M=10, N=5)
    with pytest.raises(ValueError):
        EvalConfig(tol=0.0)
    with pytest.raises(ValueError):
        EvalConfig(precision=10)
