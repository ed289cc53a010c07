import itertools

import numpy as np
import pytest

import kfs.master as master
from kfs import ModelParams, TermToggles, apply_rhs, build_liouvillian, fock_dm
from kfs.errors import DimensionError, ResourceGuardError

from conftest import random_density_matrix, random_hermitian_unit_trace


def test_vacuum_is_dark_state(rng):
    rho = fock_dm(8, 0)
    p = ModelParams(u=0.7, delta=1.3, amp=0.0, theta=0.4, lam=0.9, eta=0.5, n_cut=8)
    assert np.max(np.abs(apply_rhs(p, rho))) == 0.0


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        apply_rhs(ModelParams(n_cut=8), np.eye(4, dtype=complex))


@pytest.mark.parametrize("n_cut", [4, 16, 64])
def test_trace_preservation(rng, n_cut):
    p = ModelParams(u=0.3, delta=0.7, amp=1.1, theta=0.5, lam=0.6, eta=0.8, n_cut=n_cut)
    for _ in range(100):
        rho = random_hermitian_unit_trace(rng, n_cut)
        assert abs(np.trace(apply_rhs(p, rho))) < 1e-12


def test_each_term_traceless(rng):
    rho = random_hermitian_unit_trace(rng, 12)
    for name in ("hamiltonian", "pump", "kerr", "lindblad", "dephasing", "feedback_drift"):
        p = ModelParams(u=0.3, delta=0.7, amp=1.1, theta=0.5, lam=0.6, eta=0.8,
                        n_cut=12, toggles=TermToggles.only(name))
        assert abs(np.trace(apply_rhs(p, rho))) < 1e-12, name


def test_hermiticity_preserved_for_every_toggle_subset(rng):
    rho = random_density_matrix(rng, 8)
    names = ("hamiltonian", "pump", "kerr", "lindblad", "dephasing", "feedback_drift")
    for r in range(len(names) + 1):
        for subset in itertools.combinations(names, r):
            p = ModelParams(u=0.3, delta=0.7, amp=1.1, theta=0.5, lam=0.6, eta=0.8,
                            n_cut=8, toggles=TermToggles.only(*subset))
            drho = apply_rhs(p, rho)
            assert np.max(np.abs(drho - drho.conj().T)) < 1e-12, subset


def test_amplitude_equation_of_motion(rng):
    # with u = lam = 0: d<a>/dt = i*delta*<a> + i*A*e^{i theta} - <a>/2.
    # States must fit inside the cutoff (plain truncation loses the identity
    # only through population parked on the top level), so embed dim-10
    # states into D = 16 with an empty boundary band.
    D = 16
    a = np.diag(np.sqrt(np.arange(1.0, D)), k=1)
    for delta, amp, theta in [(1.0, 1.0, 0.0), (0.4, 2.0, 0.9), (-0.8, 0.7, -1.2)]:
        p = ModelParams(delta=delta, amp=amp, theta=theta, n_cut=D)
        for _ in range(5):
            rho = np.zeros((D, D), dtype=complex)
            rho[:10, :10] = random_density_matrix(rng, 10)
            mean_a = np.trace(a @ rho)
            lhs = np.trace(a @ apply_rhs(p, rho))
            rhs = 1j * delta * mean_a + 1j * amp * np.exp(1j * theta) - 0.5 * mean_a
            assert abs(lhs - rhs) < 1e-10


def test_amplitude_equation_coherent_like_state():
    # delta = 1, A = 1, theta = 0 on a displaced thermal-ish test state
    D = 24
    from kfs.operators import coherent_dm

    rho = 0.7 * coherent_dm(D, 1.2 + 0.3j) + 0.3 * coherent_dm(D, -0.5j)
    a = np.diag(np.sqrt(np.arange(1.0, D)), k=1)
    p = ModelParams(delta=1.0, amp=1.0, theta=0.0, n_cut=D)
    mean_a = np.trace(a @ rho)
    lhs = np.trace(a @ apply_rhs(p, rho))
    assert abs(lhs - (1j * mean_a + 1j - 0.5 * mean_a)) < 1e-10


def test_dephasing_selectivity(rng):
    # only the dephasing term: (drho/dt)_nm = -(lam^2/2 eta)(n-m)^2 rho_nm exactly
    D = 8
    p = ModelParams(lam=0.8, eta=0.5, n_cut=D, toggles=TermToggles.only("dephasing"))
    rho = random_hermitian_unit_trace(rng, D)
    drho = apply_rhs(p, rho)
    n = np.arange(D)
    expected = -(0.8**2 / (2 * 0.5)) * (n[:, None] - n[None, :]) ** 2 * rho
    assert np.max(np.abs(drho - expected)) == 0.0


def test_backends_agree(rng):
    from kfs import _kernels_py
    from kfs.master import rhs_coefficients

    p = ModelParams(u=0.4, delta=0.3, amp=2.0, theta=0.6, lam=0.5, eta=0.8, n_cut=24)
    c = rhs_coefficients(p)
    rho = rng.normal(size=(24, 24)) + 1j * rng.normal(size=(24, 24))
    ref = _kernels_py.rhs_apply(rho, c.hdiag, c.pump, c.gamma, c.deph, c.drift, c.sq)
    got = apply_rhs(p, rho)
    assert np.max(np.abs(ref - got)) < 1e-12


# --- vectorized generator -------------------------------------------------

def test_liouvillian_matches_hand_built_dissipator():
    # D = 2, loss only: drho/dt = [[r11, -r01/2], [-r10/2, -r11]]
    # in column-major vec order (r00, r10, r01, r11):
    expected = np.array(
        [
            [0.0, 0.0, 0.0, 1.0],
            [0.0, -0.5, 0.0, 0.0],
            [0.0, 0.0, -0.5, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ],
        dtype=complex,
    )
    L = build_liouvillian(ModelParams(n_cut=2)).toarray()
    assert np.max(np.abs(L - expected)) < 1e-15


def test_liouvillian_equals_rhs(rng):
    p = ModelParams(u=0.6, delta=-0.4, amp=1.7, theta=1.1, lam=0.45, eta=0.7, n_cut=4)
    L = build_liouvillian(p)
    for _ in range(20):
        rho = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        via_l = master.unvectorize(L @ master.vectorize(rho))
        direct = apply_rhs(p, rho)
        assert np.max(np.abs(via_l - direct)) < 1e-12


def test_liouvillian_trace_row(rng):
    p = ModelParams(u=0.2, delta=0.5, amp=1.0, theta=0.2, lam=0.3, eta=0.9, n_cut=5)
    L = build_liouvillian(p)
    rho = random_hermitian_unit_trace(rng, 5)
    v = L @ master.vectorize(rho)
    assert abs(master.unvectorize(v).trace()) < 1e-12


def test_liouvillian_memory_guard():
    with pytest.raises(ResourceGuardError):
        build_liouvillian(ModelParams(n_cut=129))
    build_liouvillian(ModelParams(n_cut=16), max_dim=16)  # guard is configurable
