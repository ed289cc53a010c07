import numpy as np
import pytest

from kfs import ModelParams, negativity_of_state, solve_steady_direct
from kfs.analysis import (
    PolaritonParams,
    coherent_steady_amplitude,
    dephased_mixture,
    effective_eta,
    estimate_interaction,
)
from kfs.errors import CutoffError, NotApplicableError, ValidationError
from kfs.operators import coherent_state, fidelity_with_pure


def test_coherent_amplitude_values():
    assert coherent_steady_amplitude(ModelParams(amp=1.0, n_cut=4)) == pytest.approx(2.0j)
    assert coherent_steady_amplitude(ModelParams(amp=0.0, n_cut=4)) == 0.0
    got = coherent_steady_amplitude(ModelParams(amp=3.0, theta=np.pi / 2, n_cut=4))
    assert got == pytest.approx(-6.0 + 0.0j)


def test_coherent_amplitude_domain():
    with pytest.raises(NotApplicableError):
        coherent_steady_amplitude(ModelParams(u=0.1, amp=1.0, n_cut=4))
    with pytest.raises(NotApplicableError):
        coherent_steady_amplitude(ModelParams(lam=0.1, amp=1.0, n_cut=4))


def test_dephased_mixture_poisson_weights():
    rho = dephased_mixture(0.0, 8)
    assert rho[0, 0] == pytest.approx(1.0)
    rho = dephased_mixture(2.0, 40)
    assert rho[4, 4].real == pytest.approx(np.exp(-4.0) * 4.0**4 / 24.0, rel=1e-6)
    # strictly diagonal: it commutes with the number operator exactly
    off = rho - np.diag(np.diagonal(rho))
    assert np.all(off == 0)


def test_dephased_mixture_cutoff_guard():
    with pytest.raises(CutoffError):
        dephased_mixture(4.0, 10)
    with pytest.raises(ValidationError):
        dephased_mixture(-1.0, 10)


def test_dephased_mixture_nonnegative_wigner():
    rho = dephased_mixture(2.0, 40)
    assert negativity_of_state(rho) >= 0.0
    assert negativity_of_state(rho) < 1e-6  # classical mixture of coherent states


def test_effective_eta():
    assert effective_eta(1.0, 1.0) == 1.0
    assert effective_eta(0.9, 0.5) == pytest.approx(0.45)
    assert effective_eta(0.7, 0.0) == 0.0
    with pytest.raises(ValidationError):
        effective_eta(0.0, 0.5)
    with pytest.raises(ValidationError):
        effective_eta(0.5, 1.2)


GAAS = PolaritonParams(bohr_radius=10.0, hopfield_x=1.0 / np.sqrt(2.0),
                       permittivity=13.0, trap_area=np.pi / 4.0)


def test_interaction_estimate_gaas():
    # 1 um diameter spot, zero-detuning Hopfield fraction: a few micro-eV
    u = estimate_interaction(GAAS)
    assert u == pytest.approx(4.0, rel=0.25)


def test_interaction_scalings():
    u0 = estimate_interaction(GAAS)
    assert estimate_interaction(PolaritonParams(10.0, 0.0, 13.0, np.pi / 4)) == 0.0
    doubled_area = PolaritonParams(10.0, 1 / np.sqrt(2), 13.0, np.pi / 2)
    assert estimate_interaction(doubled_area) == pytest.approx(u0 / 2, rel=1e-12)
    doubled_bohr = PolaritonParams(20.0, 1 / np.sqrt(2), 13.0, np.pi / 4)
    assert estimate_interaction(doubled_bohr) == pytest.approx(2 * u0, rel=1e-12)
    half_x = PolaritonParams(10.0, 0.5 / np.sqrt(2), 13.0, np.pi / 4)
    assert estimate_interaction(half_x) == pytest.approx(u0 / 16, rel=1e-12)


def test_polariton_params_validation():
    with pytest.raises(ValidationError):
        PolaritonParams(-1.0, 0.5, 13.0, 1.0)
    with pytest.raises(ValidationError):
        PolaritonParams(10.0, 1.5, 13.0, 1.0)


@pytest.mark.parametrize("amp,theta", [(1.0, 0.0), (0.7, 1.1), (1.5, -0.6)])
def test_linear_steady_state_matches_closed_form(amp, theta):
    # module-crossing oracle: direct solver against the closed-form amplitude
    p = ModelParams(amp=amp, theta=theta, n_cut=40)
    result = solve_steady_direct(p)
    alpha = coherent_steady_amplitude(p)
    assert fidelity_with_pure(result.rho, coherent_state(40, alpha)) > 0.999
