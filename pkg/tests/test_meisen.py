import math

import pytest

from multiwp.core import EvalConfig, Index, compositions_ge2
from multiwp.mzv import mzv_value
from multiwp.weier import eisenstein_G
from multiwp.meisen import (QOrderError, WordDecomposition, g_function,
                            g_function_direct, meis_direct, meis_direct_error,
                            meis_qexp, monotangent, multitangent_direct,
                            multitangent_reduce, word_splittings)

TAU = 2j


def test_monotangent_exact_point():
    # sum over n of (1/2 + n)^-2 = pi^2 / sin^2(pi/2)
    assert abs(monotangent(2, 0.5, method="direct") - math.pi**2) < 1e-12


def test_monotangent_dual_and_periodic():
    z = 0.3 + 0.7j
    d = monotangent(3, z, method="direct", N=40000)
    q = monotangent(3, z, method="qexp")
    assert abs(d - q) < 1e-9
    assert abs(monotangent(2, z) - monotangent(2, z + 1)) < 1e-14
    assert abs(monotangent(2, z) - monotangent(2, z - 5)) < 1e-14
    with pytest.raises(ValueError):
        monotangent(2, 0.5, method="qexp")
    with pytest.raises(ValueError):
        monotangent(1, 0.5)


def test_multitangent_reduction_known_coefficients():
    # Psi_{2,2} = 2 zeta(2) Psi_2 ; Psi_{2,3} = 3 zeta(3) Psi_2 + zeta(2) Psi_3
    red = multitangent_reduce((2, 2)).coefficients()
    assert set(red) == {2}
    assert abs(red[2] - 2 * mzv_value((2,))) < 1e-12
    red = multitangent_reduce((2, 3)).coefficients()
    assert abs(red[2] - 3 * mzv_value((3,))) < 1e-12
    assert abs(red[3] - mzv_value((2,))) < 1e-12
    red = multitangent_reduce((3, 2)).coefficients()
    assert abs(red[2] + 3 * mzv_value((3,))) < 1e-12
    assert abs(red[3] - mzv_value((2,))) < 1e-12


def test_multitangent_weight_bookkeeping():
    for ix in [(2, 2), (2, 3), (2, 2, 2), (4, 2), (2, 3, 2)]:
        red = multitangent_reduce(ix)
        assert red.terms, ix
        for c, za, zb, n in red.terms:
            assert za.weight + zb.weight + n == sum(ix)
            assert n >= 2


def test_multitangent_depth1_and_errors():
    red = multitangent_reduce((5,))
    assert red.coefficients() == {5: 1.0}
    with pytest.raises(ValueError):
        multitangent_reduce((1, 2))
    with pytest.raises(ValueError):
        multitangent_reduce((2, 1))


def test_multitangent_reduction_vs_direct_sum():
    z = 0.3 + 0.6j
    for ix in [(2, 2), (2, 3), (3, 2), (2, 2, 2)]:
        red = multitangent_reduce(ix).evaluate(z)
        direct = multitangent_direct(ix, z, N=60000)
        assert abs(red - direct) < 2e-4, ix


def test_word_splittings():
    sps = list(word_splittings(Index((2, 3, 4))))
    assert all(isinstance(s, WordDecomposition) for s in sps)
    # prefix length j leaves 2^{(3-j)-1} block cuts (1 when empty)
    assert len(sps) == 4 + 2 + 1 + 1
    full = [s for s in sps if s.mzv_prefix.depth == 3]
    assert len(full) == 1 and not full[0].blocks
    two_blocks = [s for s in sps if s.mzv_prefix.depth == 0 and len(s.blocks) == 2]
    assert {tuple(map(tuple, s.blocks)) for s in two_blocks} == \
        {((2,), (3, 4)), ((2, 3), (4,))}
    assert sps[0].boundaries[0] == 1 and sps[0].boundaries[-1] == \
        sum(len(b) for b in sps[0].blocks) + 1


def test_meis_direct_even_depth1():
    # Gt_k = G_k / 2 for even k
    got = meis_direct((4,), 1j, EvalConfig(M=24, N=6000))
    assert abs(got - eisenstein_G(4, 1j) / 2) < 1e-8


def test_meis_direct_odd_depth1_stability():
    v1 = meis_direct((3,), TAU, EvalConfig(M=50, N=500))
    v2 = meis_direct((3,), TAU, EvalConfig(M=100, N=1000))
    assert v1.imag != 0
    # truncated-sum refinement stability (the plain sum converges ~ M^2/N^3)
    assert abs(v1 - v2) < 5e-5
    assert abs(v2 - meis_qexp((3,), TAU)) < abs(v1 - meis_qexp((3,), TAU))


def test_meis_qexp_constant_term():
    # q -> 0: the multiple Eisenstein series tends to the multiple zeta value
    for ix in [(3,), (2, 2), (2, 3), (3, 2, 2)]:
        assert abs(meis_qexp(ix, 60j) - mzv_value(ix)) < 1e-13, ix


def test_meis_dual_pipeline():
    cfg = EvalConfig(M=80, N=800)
    for tau in (1j, TAU, 0.5 + 2j):
        for w in range(2, 8):
            for ix in compositions_ge2(w):
                qe = meis_qexp(ix, tau)
                de, est = meis_direct_error(ix, tau, cfg)
                assert abs(qe - de) <= 3 * est + 1e-8 * (1 + abs(qe)), (ix, tau)


def test_meis_qexp_q_order_guard():
    with pytest.raises(QOrderError):
        meis_qexp((2,), 0.05j, q_order=16)
    with pytest.raises(ValueError):
        meis_qexp((1, 2), TAU)


def test_g_function_dual():
    for ix, z in [((2,), 0.2 + 0.5j), ((2, 2), 0.2 + 0.5j), ((3, 2), 0.1 + 0.9j)]:
        gq = g_function(ix, z, TAU)
        gd = g_function_direct(ix, z, TAU)
        assert abs(gq - gd) < 1e-10, ix
    assert g_function((), 0.1 + 0.5j, TAU) == 1.0
    # reflected argument stays inside the strip condition
    gq = g_function((2,), -(0.2 + 0.5j), TAU)
    gd = g_function_direct((2,), -(0.2 + 0.5j), TAU)
    assert abs(gq - gd) < 1e-10
    with pytest.raises(ValueError):
        g_function((2,), -0.2 - 2.5j, TAU)


def test_word_decomposition_completeness():
    # wp_{k_r..k_1}(z) = sum over words of ordered m-sums of multitangent blocks
    from multiwp.multip import multiwp_direct
    from multiwp.meisen import word_splittings

    z = 0.23 + 0.31j
    MW = 12
    for ix in [(2, 2), (3, 2), (2, 2, 2)]:
        ix = Index(ix)
        total = 0.0 + 0.0j
        # all cuts of (k_1..k_r) into h >= 1 consecutive blocks, each block
        # summed over -MW < m_1 < ... < m_h < MW (the appendix ws-display)
        rest = tuple(ix)
        n = len(rest)
        for mask in range(1 << (n - 1)):
            blocks = []
            cur = [rest[0]]
            for i in range(1, n):
                if mask >> (i - 1) & 1:
                    blocks.append(tuple(cur))
                    cur = [rest[i]]
                else:
                    cur.append(rest[i])
            blocks.append(tuple(cur))
            reds = [multitangent_reduce(b).coefficients() for b in blocks]

            def block_val(bi, m):
                return sum(c * monotangent(nn, z + m * TAU, method="direct", N=4000)
                           for nn, c in reds[bi].items())

            def rec(bi, mprev):
                if bi == len(blocks):
                    return 1.0
                return sum(block_val(bi, m) * rec(bi + 1, m)
                           for m in range(mprev + 1, MW))

            total += rec(0, -MW)
        want = multiwp_direct(ix.reversed(), z, TAU, EvalConfig(M=14, N=2000))
        assert abs(total - want) < 2e-5, ix
