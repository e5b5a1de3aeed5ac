import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import genlaguerre, factorial

from radmom import hydrogen as h
from radmom.errors import InvalidArgumentError, UnsupportedStateError
from radmom.hydrogen import HydrogenState, ground_state
from radmom.transforms import GammaGrid

STATES = [(n, l) for n in (1, 2, 3) for l in range(n)]


def textbook_radial(n, l, r):
    """R_nl from the associated Laguerre polynomial, a0 = 1."""
    rho = 2 * r / n
    norm = np.sqrt((2 / n) ** 3 * factorial(n - l - 1) / (2 * n * factorial(n + l)))
    return norm * np.exp(-rho / 2) * rho ** l * genlaguerre(n - l - 1, 2 * l + 1)(rho)


# --- states -----------------------------------------------------------------

@pytest.mark.parametrize("n,l", STATES)
def test_radial_table_matches_laguerre_form(n, l):
    r = np.linspace(0, 30, 301)
    np.testing.assert_allclose(HydrogenState(n, l).radial(r), textbook_radial(n, l, r), atol=1e-14)


def test_psi_at_origin():
    assert h.psi_value(ground_state(), 0.0, 0.3, 0.1) == pytest.approx(0.5641896, abs=1e-7)


def test_psi_decay_ratio():
    g = ground_state()
    assert h.psi_value(g, 1.0, 0.2, 0.0) / h.psi_value(g, 0.0, 0.2, 0.0) == pytest.approx(np.exp(-1), rel=1e-15)


@pytest.mark.parametrize("n,l", STATES)
def test_radial_normalization(n, l):
    assert abs(h.radial_norm(HydrogenState(n, l)) - 1) < 1e-10


@pytest.mark.parametrize("n,l", STATES)
def test_inverse_r(n, l):
    s = HydrogenState(n, l)
    ref, _ = integrate.quad(lambda r: textbook_radial(n, l, r) ** 2 * r, 0, np.inf, epsrel=1e-13)
    assert abs(h.expectation_inverse_r(s) - 1 / n ** 2) < 1e-10
    assert abs(h.expectation_inverse_r(s) - ref) < 1e-10


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 10.0))
def test_inverse_r_scales_with_bohr_radius(a0):
    assert h.expectation_inverse_r(ground_state(a0)) == pytest.approx(1 / a0, rel=1e-10)


@pytest.mark.parametrize("args", [(0, 0, 0), (2, 2, 0), (2, 1, 2), (1, 0, 0, -1.0)])
def test_invalid_quantum_numbers(args):
    with pytest.raises(InvalidArgumentError):
        HydrogenState(*args)


def test_untabulated_state():
    with pytest.raises(UnsupportedStateError):
        HydrogenState(4, 0)


def test_negative_radius_rejected():
    with pytest.raises(InvalidArgumentError):
        h.psi_value(ground_state(), -1.0, 0.0, 0.0)


# --- momentum amplitude -----------------------------------------------------

def test_normalization_constant_is_plane_wave_prefactor():
    assert h.fourier_prefactor() == pytest.approx(0.2250791, abs=1e-7)
    assert h.amplitude_normalization(ground_state()) == pytest.approx(h.fourier_prefactor(), rel=1e-10)


def test_closed_form_examples():
    assert h.momentum_amplitude_closed_form(0.0) == pytest.approx(0.9003163, abs=1e-7)
    assert h.momentum_amplitude_closed_form(1.0) == pytest.approx(0.2250791, abs=1e-7)


def test_amplitude_matches_closed_form():
    p = np.linspace(0, 10, 201)
    num = h.momentum_amplitude(ground_state(), p)
    assert np.abs(num / h.momentum_amplitude_closed_form(p) - 1).max() < 1e-6


def test_amplitude_scalar_input():
    assert h.momentum_amplitude(ground_state(), 1.0) == pytest.approx(0.2250791, abs=1e-7)


def test_amplitude_unit_normalized():
    g = ground_state()
    val, _ = integrate.quad(lambda p: h.momentum_amplitude(g, p) ** 2 * 4 * np.pi * p ** 2, 0, np.inf,
                            epsrel=1e-11, limit=200)
    assert abs(val - 1) < 1e-8


def test_radial_transform_branches_agree():
    # one momentum on each side of the Gauss-Laguerre guard
    g = ground_state()
    k_switch = h.LAGUERRE_NODES / g.extent
    p = np.array([0.99 * k_switch, 1.01 * k_switch])
    np.testing.assert_allclose(h.radial_transform(g, p) * h.fourier_prefactor(),
                               h.momentum_amplitude_closed_form(p), rtol=1e-8)


def test_excited_s_state_normalized():
    s = HydrogenState(2, 0)
    val, _ = integrate.quad(lambda p: h.momentum_amplitude(s, p) ** 2 * 4 * np.pi * p ** 2, 0, np.inf,
                            epsrel=1e-10, limit=200)
    assert abs(val - 1) < 1e-7


def test_p_state_amplitude_unsupported():
    with pytest.raises(UnsupportedStateError):
        h.momentum_amplitude(HydrogenState(2, 1), 1.0)


def test_negative_momentum_rejected():
    with pytest.raises(InvalidArgumentError):
        h.radial_transform(ground_state(), -1.0)


# --- marginal ---------------------------------------------------------------

def test_marginal_closed_form_examples():
    assert h.marginal_pz_closed_form(0.0) == pytest.approx(0.8488264, abs=1e-7)
    assert h.marginal_pz_closed_form(1.0) == pytest.approx(0.1061033, abs=1e-7)


def test_marginal_matches_closed_form():
    pz = np.linspace(-8, 8, 161)
    curve = h.marginal_pz(ground_state(), pz)
    assert np.abs(curve.values / h.marginal_pz_closed_form(pz) - 1).max() < 1e-6
    assert curve.at(0.0) == pytest.approx(0.8488264, abs=1e-7)


def test_marginal_integrates_to_one():
    pz = GammaGrid(40.0, 1601).values
    curve = h.marginal_pz(ground_state(), pz)
    assert abs(curve.normalization - 1) < 1e-8
    np.testing.assert_array_equal(curve.values, curve.values[::-1])


def test_marginal_closed_form_integrates_to_one():
    val, _ = integrate.quad(h.marginal_pz_closed_form, -np.inf, np.inf)
    assert val == pytest.approx(1.0, abs=1e-12)
