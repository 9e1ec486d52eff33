import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from scbell import bell, states
from scbell.bell import CHSHSettings, MeasurementDirection, SvetlichnySettings
from scbell.qmat import PAULI_X, PAULI_Y, PAULI_Z, DensityMatrix
from scbell.states import SC2DiagParams, SC2Params, SC3DiagParams, SC3Params

S2 = math.sqrt(2)
Z = MeasurementDirection(0.0)


def test_observable_examples():
    np.testing.assert_allclose(bell.observable(MeasurementDirection(0.0)), PAULI_Z)
    np.testing.assert_allclose(bell.observable(MeasurementDirection(math.pi / 2, 0)), PAULI_X, atol=1e-16)
    np.testing.assert_allclose(bell.observable(MeasurementDirection(math.pi / 2, math.pi / 2)), PAULI_Y, atol=1e-16)


@given(st.floats(-20, 20), st.floats(-20, 20))
def test_wrap_preserves_vector(theta, phi):
    d = MeasurementDirection(theta, phi)
    raw = np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])
    np.testing.assert_allclose(d.vector, raw, atol=1e-12)
    assert 0 <= d.theta <= math.pi and 0 <= d.phi < 2 * math.pi
    w = np.linalg.eigvalsh(bell.observable(d))
    np.testing.assert_allclose(w, [-1, 1], atol=1e-12)


def test_from_vector():
    d = MeasurementDirection.from_vector([0, 0, -2])
    assert d.theta == pytest.approx(math.pi)
    with pytest.raises(ValueError):
        MeasurementDirection.from_vector([0, 0, 0])
    with pytest.raises(ValueError):
        MeasurementDirection(math.nan)


def test_chsh_operator_examples():
    all_z = CHSHSettings(Z, Z, Z, Z)
    np.testing.assert_allclose(bell.chsh_operator(all_z), 2 * np.kron(PAULI_Z, PAULI_Z))
    b = MeasurementDirection(math.pi / 4, 0)
    bp = MeasurementDirection(-math.pi / 4, 0)
    op = bell.chsh_operator(CHSHSettings(Z, bell.X_DIR, b, bp))
    assert np.linalg.eigvalsh(op)[-1] == pytest.approx(2 * S2, abs=1e-12)
    x = bell.X_DIR
    np.testing.assert_allclose(
        bell.chsh_operator(CHSHSettings(x, x, b, b)), 2 * np.kron(bell.observable(x), bell.observable(b))
    )


def test_expectation_examples():
    mixed = DensityMatrix.maximally_mixed(2)
    rng = np.random.default_rng(0)
    for _ in range(5):
        s = bell.settings_from_angles(rng.uniform(-4, 4, 8))
        assert bell.chsh_expectation(mixed, s) == pytest.approx(0, abs=1e-15)
    bell_rho = states.bell_state()
    s = bell.optimal_chsh_settings(SC2Params(0.5, 0.5, 0.5))
    assert bell.chsh_expectation(bell_rho, s) == pytest.approx(2 * S2, abs=1e-12)
    rho1 = states.build_sc2(SC2Params(0.5, 0.5, 0.3))
    for _ in range(50):
        s = bell.settings_from_angles(rng.uniform(-4, 4, 8))
        assert bell.chsh_expectation(rho1, s) <= 2 * math.sqrt(1.36) + 1e-12
    with pytest.raises(ValueError):
        bell.chsh_expectation(states.ghz_state(), s)


def test_svetlichny_expectation_examples():
    mixed = DensityMatrix.maximally_mixed(3)
    s = bell.settings_from_angles(np.linspace(0.1, 2.0, 12))
    assert bell.svetlichny_expectation(mixed, s) == pytest.approx(0, abs=1e-15)
    ghz = states.ghz_state()
    s = bell.optimal_svetlichny_settings(SC3Params(0.5, 0.5, 0.5))
    assert bell.svetlichny_expectation(ghz, s) == pytest.approx(4 * S2, abs=1e-12)
    zero = states.build_sc3(SC3Params(1, 0, 0))
    s = SvetlichnySettings(Z, Z, Z, Z, Z, bell.MINUS_Z_DIR)
    assert bell.svetlichny_expectation(zero, s) == pytest.approx(4)


def test_tensor_contraction_matches_operator():
    """Expectation from the operator trace equals the correlation-tensor contraction."""
    rng = np.random.default_rng(4)
    from scbell.qmat import random_density_matrix

    for n, k in ((2, 8), (3, 12)):
        rho = random_density_matrix(n, rng)
        t = bell.correlation_tensor(rho)
        s = bell.settings_from_angles(rng.uniform(0, 6, k))
        v = [d.vector for d in s.directions()]
        if n == 2:
            direct = bell.chsh_expectation(rho, s)
            contracted = sum(
                bell.CHSH_SIGNS[i, j] * v[i] @ t @ v[2 + j] for i in range(2) for j in range(2)
            )
        else:
            direct = bell.svetlichny_expectation(rho, s)
            contracted = sum(
                bell.SVETLICHNY_SIGNS[i, j, l] * np.einsum("abc,a,b,c", t, v[i], v[2 + j], v[4 + l])
                for i in range(2)
                for j in range(2)
                for l in range(2)
            )
        assert direct == pytest.approx(contracted, abs=1e-12)


@pytest.mark.parametrize("a2, value", [(0, 2.0), (0.5, 2 * S2), (0.3, 2 * math.sqrt(1.36))])
def test_fmax_sc2(a2, value):
    p = SC2Params(0.5, 0.5, a2)
    assert bell.fmax_sc2(p) == pytest.approx(value, abs=1e-12)
    assert bell.fmax_horodecki(states.build_sc2(p)) == pytest.approx(value, abs=1e-12)


def test_fmax_horodecki_examples():
    assert bell.fmax_horodecki(states.bell_state()) == pytest.approx(2 * S2, abs=1e-12)
    assert bell.fmax_horodecki(DensityMatrix.maximally_mixed(2)) == pytest.approx(0, abs=1e-12)
    np.testing.assert_allclose(bell.correlation_tensor(states.bell_state()), np.diag([1, -1, 1]), atol=1e-15)


def test_fmax_sc2_diag_examples():
    assert bell.fmax_sc2_diag(SC2DiagParams(0.5, 0, 0, 0.5, 0.5)) == pytest.approx(2 * S2)
    # the four-population form is not clamped at the classical bound
    assert bell.fmax_sc2_diag(SC2DiagParams(0.25, 0.25, 0.25, 0.25, 0)) == 0
    assert bell.fmax_sc2_diag(states.rho3_params(1.0)) == pytest.approx(2 * S2)


def test_fmax_sc2_diag_exact_matches_horodecki():
    rng = np.random.default_rng(8)
    from scbell.verify import random_sc2_diag_params

    for _ in range(200):
        p = random_sc2_diag_params(rng)
        h = bell.fmax_horodecki(states.build_sc2_diag(p))
        assert bell.fmax_sc2_diag_exact(p) == pytest.approx(h, abs=1e-10)
        assert bell.fmax_sc2_diag_exact(p) >= bell.fmax_sc2_diag(p) - 1e-12


def test_smax_examples():
    assert bell.smax_sc3(SC3Params(1, 0, 0)) == 4
    assert bell.smax_sc3(SC3Params(0.5, 0.5, 0.5)) == pytest.approx(4 * S2)
    assert bell.smax_sc3(SC3Params(0.5, 0.5, 1 / (2 * S2))) == pytest.approx(4, abs=1e-12)
    assert bell.smax_sc3_diag(SC3DiagParams(1, 0, 0, 0, 0, 0, 0, 0, 0)) == 4
    assert bell.smax_sc3_diag(SC3DiagParams(0.5, 0, 0, 0, 0, 0, 0, 0.5, 0.5)) == pytest.approx(4 * S2)
    assert bell.smax_sc3_diag(states.rho6_params(1 / S2)) == pytest.approx(2, abs=1e-12)


def test_optimal_chsh_settings_examples():
    s = bell.optimal_chsh_settings(SC2Params(0.5, 0.5, 0.5))
    # b and b' lie in the x-z plane, tan(phi) = 2|a2| = 1
    for d in (s.b, s.b_prime):
        assert abs(d.vector[1]) <= 1e-15
        assert d.theta == pytest.approx(math.pi / 4)
    p = SC2Params(0.5, 0.5, 0.3j)
    s = bell.optimal_chsh_settings(p)
    assert abs(s.b.vector[0]) <= 1e-15
    assert bell.chsh_expectation(states.build_sc2(p), s) == pytest.approx(bell.fmax_sc2(p), abs=1e-12)
    p = SC2Params(0.5, 0.5, 0.2 + 0.2j)
    got = bell.chsh_expectation(states.build_sc2(p), bell.optimal_chsh_settings(p))
    # 2 sqrt(1.32) = 2.29783
    assert got == pytest.approx(2 * math.sqrt(1.32), abs=1e-12)
    s = bell.optimal_chsh_settings(SC2Params(0.7, 0.3, 0))
    assert bell.chsh_expectation(states.build_sc2(SC2Params(0.7, 0.3, 0)), s) == pytest.approx(2)


def test_optimal_svetlichny_settings_examples():
    p = SC3Params(1, 0, 0)
    s = bell.optimal_svetlichny_settings(p)
    assert all(abs(abs(d.vector[2]) - 1) < 1e-15 for d in s.directions())
    assert bell.svetlichny_expectation(states.build_sc3(p), s) == pytest.approx(4)
    p = SC3Params(0.5, 0.5, 0.5)
    s = bell.optimal_svetlichny_settings(p)
    assert all(abs(d.vector[2]) < 1e-15 for d in s.directions())
    assert bell.svetlichny_expectation(states.ghz_state(), s) == pytest.approx(4 * S2)
    p = SC3Params(0.6, 0.4, 0.2)
    got = bell.svetlichny_expectation(states.build_sc3(p), bell.optimal_svetlichny_settings(p))
    assert got == pytest.approx(8 * S2 * 0.2, abs=1e-12)
    assert round(got, 3) == 2.263


def test_optimal_settings_grid():
    from scbell.verify import optimal_chsh_grid, optimal_svetlichny_grid

    assert optimal_chsh_grid(20).ok
    assert optimal_svetlichny_grid(20).ok


def test_svetlichny_diag_settings():
    for g in np.linspace(0.05, 1.0, 40):
        p = states.rho6_params(float(g))
        s = bell.svetlichny_settings_sc3_diag(p)
        got = bell.svetlichny_expectation(states.build_sc3_diag(p), s)
        assert got == pytest.approx(bell.smax_sc3_diag(p), abs=1e-12)


def test_bisector_pair_orthogonal():
    rng = np.random.default_rng(9)
    for _ in range(100):
        b = MeasurementDirection(*rng.uniform(0, 6, 2))
        bp = MeasurementDirection(*rng.uniform(0, 6, 2))
        d, dp = bell.bisector_pair(b, bp)
        assert abs(d @ dp) <= 1e-12
    assert bell.bisector_pair(Z, Z) is None


@given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3))
def test_lemma_cos_sin(x, y):
    t = math.atan2(y, x)
    r = math.hypot(x, y)
    assert x * math.cos(t) + y * math.sin(t) == pytest.approx(r, rel=1e-12, abs=1e-9)
    for s in np.linspace(0, 2 * math.pi, 13):
        assert x * math.cos(s) + y * math.sin(s) <= r * (1 + 1e-12) + 1e-12


@given(st.floats(0, 1e3), st.floats(0, 1e3), st.floats(0, 7))
def test_lemma_cos2_sin2(x, y, t):
    assert x * math.cos(t) ** 2 + y * math.sin(t) ** 2 <= max(x, y) * (1 + 1e-12) + 1e-12
