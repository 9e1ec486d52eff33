import math

import numpy as np
import pytest

from scbell import entanglement as ent
from scbell import states
from scbell.qmat import DensityMatrix
from scbell.states import SC2Params, SC3Params


def h2(p):
    return -sum(x * math.log2(x) for x in (p, 1 - p) if x > 0)


def block_ree_oracle(a1, a4, a2):
    """Tr rho log2 rho - Tr rho log2 sigma from the 2x2 block on span{|000>, |111>}."""
    w = np.linalg.eigvalsh(np.array([[a1, a2], [np.conj(a2), a4]]))
    neg_s = sum(x * math.log2(x) for x in w if x > 1e-15)
    cross = sum(x * math.log2(x) for x in (a1, a4) if x > 0)
    return neg_s - cross


def test_entropies():
    assert ent.von_neumann_entropy(states.bell_state()) == pytest.approx(0, abs=1e-12)
    assert ent.von_neumann_entropy(DensityMatrix.maximally_mixed(1)) == pytest.approx(1)
    assert ent.von_neumann_entropy(DensityMatrix(np.diag([0.75, 0.25]))) == pytest.approx(0.811278, abs=1e-6)
    assert ent.shannon_entropy([0.5, 0.5, 0]) == pytest.approx(1)


def test_wootters_examples():
    assert ent.concurrence_wootters(states.bell_state()) == pytest.approx(1, abs=1e-12)
    for b in ([1, 0, 0, 0], [0.4, 0.1, 0.2, 0.3], [0.25] * 4):
        assert ent.concurrence_wootters(DensityMatrix(np.diag(b))) == pytest.approx(0, abs=1e-12)
    assert ent.concurrence_wootters(states.build_sc2(SC2Params(0.5, 0.5, 0.3))) == pytest.approx(0.6, abs=1e-12)
    with pytest.raises(ValueError):
        ent.concurrence_wootters(states.ghz_state())


def test_wootters_x_state_oracle():
    """Concurrence of an X state: 2 max(0, |c| - sqrt(b2 b3))."""
    from scbell.verify import random_sc2_diag_params

    rng = np.random.default_rng(5)
    for _ in range(200):
        p = random_sc2_diag_params(rng)
        expect = 2 * max(0.0, abs(p.c1) - math.sqrt(p.b2 * p.b3))
        assert ent.concurrence_wootters(states.build_sc2_diag(p)) == pytest.approx(expect, abs=1e-9)


def test_closed_concurrences():
    assert ent.concurrence_sc2(SC2Params(0.5, 0.5, 0)) == 0
    assert ent.concurrence_sc2(SC2Params(0.5, 0.5, 0.5)) == 1
    assert ent.concurrence_sc2(SC2Params(0.5, 0.5, 0.1 + 0.2j)) == pytest.approx(0.447214, abs=1e-6)
    assert ent.gen_concurrence_sc3(SC3Params(0.5, 0.5, 0)) == 0
    assert ent.gen_concurrence_sc3(SC3Params(0.5, 0.5, 0.5)) == pytest.approx(1.224745, abs=1e-6)


def test_relative_entropy_examples():
    ghz = states.ghz_state()
    assert ent.relative_entropy(ghz, ghz) == pytest.approx(0, abs=1e-12)
    sigma = states.build_sc3(SC3Params(0.5, 0.5, 0))
    assert ent.relative_entropy(ghz, sigma) == pytest.approx(1, abs=1e-12)
    zero = DensityMatrix(np.diag([1.0, 0, 0, 0]))
    one = DensityMatrix(np.diag([0, 0, 0, 1.0]))
    assert ent.relative_entropy(zero, one) == math.inf
    with pytest.raises(ValueError):
        ent.relative_entropy(zero, ghz)


def test_relative_entropy_diagonal_oracle():
    """Commuting states reduce to the classical Kullback-Leibler divergence."""
    rng = np.random.default_rng(6)
    for _ in range(50):
        p, q = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(4))
        kl = float(np.sum(p * np.log2(p / q)))
        got = ent.relative_entropy(DensityMatrix(np.diag(p)), DensityMatrix(np.diag(q)))
        assert got == pytest.approx(kl, abs=1e-10)


@pytest.mark.parametrize("a1, a4, a2", [(0.5, 0.5, 0.5), (0.6, 0.4, 0.4), (0.7, 0.3, 0.2), (0.5, 0.5, 0)])
def test_ree_direct(a1, a4, a2):
    got = ent.ree_sc3_direct(SC3Params(a1, a4, a2))
    assert got == pytest.approx(block_ree_oracle(a1, a4, a2), abs=1e-10)


def test_ree_direct_limits():
    assert ent.ree_sc3_direct(SC3Params(0.5, 0.5, 0.5)) == pytest.approx(1, abs=1e-9)
    for a1 in (0.0, 0.2, 1.0):
        assert ent.ree_sc3_direct(SC3Params(a1, 1 - a1, 0)) == pytest.approx(0, abs=1e-12)


def test_ree_closed_corrected_matches_direct():
    for a1, a4, a2 in [(0.5, 0.5, 0.5), (0.6, 0.4, 0.4), (0.7, 0.3, 0.2), (0.9, 0.1, 0.05j), (0.5, 0.5, 0)]:
        p = SC3Params(a1, a4, a2)
        assert ent.ree_sc3_closed(p, corrected=True) == pytest.approx(ent.ree_sc3_direct(p), abs=1e-10)
        assert ent.ree_sc3_closed(p, corrected=True, via_smax=True) == pytest.approx(
            ent.ree_sc3_direct(p), abs=1e-10
        )


def test_ree_closed_printed_is_undefined_where_expected():
    # the literal second term takes x log2 x of a negative eigenvalue
    assert math.isnan(ent.ree_sc3_closed(SC3Params(0.5, 0.5, 0.5)))
    assert math.isnan(ent.ree_sc3_closed(SC3Params(0.5, 0.5, 0)))


def test_dense_coding():
    assert ent.dense_coding_capacity(states.bell_state()) == pytest.approx(2, abs=1e-12)
    assert ent.dense_coding_capacity(DensityMatrix(np.diag([1.0, 0, 0, 0]))) == pytest.approx(1, abs=1e-12)
    # nonzero eigenvalues of rho1(0.5, 0.5, 0.3) are 0.8 and 0.2; the marginal is I/2
    oracle = 1 + 1 - h2(0.8)
    got = ent.dense_coding_capacity(states.build_sc2(SC2Params(0.5, 0.5, 0.3)))
    assert got == pytest.approx(oracle, abs=1e-12)
    assert got == pytest.approx(1.278072, abs=1e-6)


def test_fmax_from_concurrence():
    assert ent.fmax_from_concurrence(0) == 2
    assert ent.fmax_from_concurrence(1) == pytest.approx(2 * math.sqrt(2))
    from scbell.bell import fmax_sc2

    assert ent.fmax_from_concurrence(0.6) == pytest.approx(fmax_sc2(SC2Params(0.5, 0.5, 0.3)), abs=1e-15)


def test_f_pair_g_pair_agree():
    """g with x3 = S_max^2 matches f with x3 x4 = |a2|^2."""
    for a1, a2 in [(0.6, 0.3), (0.5, 0.5), (0.8, 0.1)]:
        smax2 = (8 * math.sqrt(2) * a2) ** 2
        assert ent.g_pair(a1, 1 - a1, smax2) == pytest.approx(ent.f_pair(a1, 1 - a1, a2, a2), abs=1e-14)
