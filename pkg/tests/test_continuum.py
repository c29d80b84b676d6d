"""Density of states, spectral response, discretization, and the level shift."""

from __future__ import annotations

import math

import numpy as np
import pytest

import atomlaser as al

M_NA = 3.818e-26

# Relative deviation of the coupling-sum from the band integral at M=1500.
# The integrand's omega^{-1/2} edge makes the midpoint-style sum converge
# only like M^{-1/2}, so this number is large and halves when M quadruples.
GRID_SUM_REL_ERR_M1500 = 0.03735436628377772


def test_density_of_states_step_and_scaling():
    assert al.density_of_states(-1.0, M_NA) == 0.0
    assert al.density_of_states(0.0, M_NA) == 0.0
    w0 = 3.7
    assert al.density_of_states(4.0 * w0, M_NA) == pytest.approx(
        al.density_of_states(w0, M_NA) / 2.0, rel=1e-13
    )
    # edge divergence ~ omega^{-1/2}
    assert al.density_of_states(1e-12, M_NA) > 1e3 * al.density_of_states(1.0, M_NA)


def test_density_of_states_closed_form_value():
    expected = math.sqrt(M_NA / (2.0 * al.HBAR * 100.0))
    assert al.density_of_states(100.0, M_NA) == pytest.approx(expected, rel=1e-13)


def test_spectral_response_reference_value():
    assert al.spectral_response(100.0, 100.0, 200.0) == pytest.approx(
        0.20755374871029736, rel=1e-13
    )


def test_spectral_response_trivia():
    assert al.spectral_response(-5.0, 100.0, 200.0) == 0.0
    assert al.spectral_response(0.0, 100.0, 200.0) == 0.0
    w = np.linspace(0.5, 250.0, 7)
    assert np.allclose(
        al.spectral_response(w, 0.0, 200.0), 0.0
    )
    assert np.allclose(
        al.spectral_response(w, 2e3, 200.0),
        2.0 * al.spectral_response(w, 1e3, 200.0),
        rtol=1e-13,
    )


def test_discretize_grid_layout():
    cont = al.discretize(100.0, 200.0, 1500, 300.0)
    assert cont.M == 1500
    assert cont.epsilon == pytest.approx(0.2, rel=1e-15)
    assert cont.M * cont.epsilon == pytest.approx(cont.omega_up, rel=1e-15)
    assert cont.frequencies[0] == pytest.approx(0.2, rel=1e-15)
    assert cont.frequencies[-1] == pytest.approx(300.0, rel=1e-13)
    assert np.all(np.diff(cont.frequencies) > 0)
    assert np.all(cont.frequencies > 0)
    assert np.all(np.isfinite(cont.couplings))
    assert np.all(cont.couplings > 0)


def test_couplings_square_to_response_times_spacing():
    cont = al.discretize(100.0, 200.0, 700, 300.0)
    expected = al.spectral_response(cont.frequencies, 100.0, 200.0) * cont.epsilon
    assert np.allclose(cont.couplings**2, expected, rtol=1e-14, atol=0.0)


def test_discretize_rejects_bad_mode_count():
    with pytest.raises(ValueError):
        al.discretize(100.0, 200.0, 0, 300.0)
    with pytest.raises(ValueError):
        al.discretize(100.0, 200.0, 1500, 0.0)


def test_discretize_interaction_free_couplings():
    cont = al.discretize(0.0, 200.0, 64, 300.0)
    assert np.all(cont.couplings == 0.0)
    assert cont.shift_S == 0.0


def test_coupling_sum_approaches_band_integral_like_inverse_sqrt_m():
    integral = al.quadrature_oracle(
        lambda w: al.spectral_response(w, 100.0, 200.0), 0.0, 300.0
    )

    def rel_err(M: int) -> float:
        cont = al.discretize(100.0, 200.0, M, 300.0)
        return abs(float(np.sum(cont.couplings**2)) - integral) / integral

    err_1500 = rel_err(1500)
    err_6000 = rel_err(6000)
    assert err_1500 == pytest.approx(GRID_SUM_REL_ERR_M1500, rel=1e-6)
    # quadrupling M halves the error: the omega^{-1/2} band edge dominates
    assert err_1500 / err_6000 == pytest.approx(2.0, rel=0.02)


def test_shift_reference_value_and_linearity():
    s = al.compute_shift(100.0, 200.0, 300.0)
    assert s == pytest.approx(3.8230253489016944e-3, rel=1e-10)
    assert al.compute_shift(0.0, 200.0, 300.0) == 0.0
    assert al.compute_shift(200.0, 200.0, 300.0) == pytest.approx(2.0 * s, rel=1e-12)


def test_shift_decreases_with_cutoff_and_vanishes_at_infinity():
    cuts = [150.0, 300.0, 600.0, 1200.0]
    values = [al.compute_shift(100.0, 200.0, c) for c in cuts]
    assert all(a > b > 0.0 for a, b in zip(values, values[1:]))
    assert al.compute_shift(100.0, 200.0, 6000.0) < 1e-28


def test_shift_rejects_bad_cutoff():
    with pytest.raises(ValueError):
        al.compute_shift(100.0, 200.0, -1.0)


def test_discretized_continuum_is_immutable():
    cont = al.discretize(100.0, 200.0, 32, 300.0)
    with pytest.raises((ValueError, AttributeError)):
        cont.frequencies[0] = -1.0
    with pytest.raises((AttributeError, TypeError)):
        cont.M = 64
