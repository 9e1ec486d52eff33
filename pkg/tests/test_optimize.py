import math

import numpy as np
import pytest

from scbell import bell, optimize, states
from scbell.optimize import MaximizerConfig, maximize_chsh, maximize_svetlichny
from scbell.qmat import DensityMatrix
from scbell.states import SC2Params, SC3Params


def test_config_validation():
    with pytest.raises(ValueError):
        MaximizerConfig(restarts=0)
    with pytest.raises(ValueError):
        MaximizerConfig(tolerance=0)
    with pytest.raises(ValueError):
        MaximizerConfig(seed=-1)


def test_streams_are_keyed():
    a = optimize.stream(3, 1).random(4)
    np.testing.assert_array_equal(a, optimize.stream(3, 1).random(4))
    assert not np.array_equal(a, optimize.stream(3, 2).random(4))
    assert not np.array_equal(a, optimize.stream(4, 1).random(4))


def test_nelder_mead_quadratic():
    f = lambda x: ((x - np.array([1.0, -2.0, 0.5])) ** 2).sum(axis=1)  # noqa: E731
    x0 = np.zeros((3, 3)) + np.arange(3)[:, None]
    x, fx = optimize.nelder_mead_batch(f, x0, np.full((3, 3), 0.5), 2000, 1e-16)
    np.testing.assert_allclose(x, np.tile([1.0, -2.0, 0.5], (3, 1)), atol=1e-6)
    assert fx.max() < 1e-12


@pytest.mark.parametrize(
    "rho, value, tol",
    [
        (states.bell_state(), 2 * math.sqrt(2), 1e-6),
        (DensityMatrix.maximally_mixed(2), 0.0, 1e-6),
        (states.build_sc2(SC2Params(0.5, 0.5, 0.3)), 2.332381, 1e-5),
    ],
)
def test_maximize_chsh(rho, value, tol):
    got, s = maximize_chsh(rho)
    assert got == pytest.approx(value, abs=tol)
    assert bell.chsh_expectation(rho, s) == pytest.approx(got, abs=1e-9)


@pytest.mark.parametrize(
    "rho, value, tol",
    [
        (states.ghz_state(), 4 * math.sqrt(2), 1e-5),
        (states.build_sc3(SC3Params(1, 0, 0)), 4.0, 1e-5),
        (states.build_sc3(SC3Params(0.5, 0.5, 0.3)), 3.394113, 1e-4),
    ],
)
def test_maximize_svetlichny(rho, value, tol):
    got, s = maximize_svetlichny(rho)
    assert got == pytest.approx(value, abs=tol)
    assert bell.svetlichny_expectation(rho, s) == pytest.approx(got, abs=1e-9)


def test_seed_determinism():
    rho = states.build_sc2(SC2Params(0.6, 0.4, 0.2 - 0.1j))
    cfg = MaximizerConfig(restarts=8, seed=42)
    a = maximize_chsh(rho, cfg)
    b = maximize_chsh(rho, cfg)
    assert a[0] == b[0] and a[1] == b[1]


def test_wrong_qubit_count():
    with pytest.raises(ValueError):
        maximize_chsh(states.ghz_state())
    with pytest.raises(ValueError):
        maximize_svetlichny(states.bell_state())


def test_separable_stays_classical():
    for a1 in (0.0, 0.3, 0.8):
        v, _ = maximize_chsh(states.build_sc2(SC2Params(a1, 1 - a1, 0)), MaximizerConfig(restarts=8))
        assert v <= 2 + 1e-6
