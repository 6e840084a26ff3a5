"""Property tests for the invariants that hold at every lattice size."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from finiteqm.algebra import run_suite
from finiteqm.continuum import convergence_study, deformed_momentum_expansion_check
from finiteqm.eigensolver import eigh_tridiagonal
from finiteqm.lattice import (
    Boundary,
    LatticeConfig,
    build_deformed_momentum,
    build_hamiltonian,
    build_parity,
    build_shift_periodic,
)
from finiteqm.spectra import (
    Parity,
    analytic_spectrum,
    match_spectra,
    numeric_spectrum,
    wavefunction,
)

sizes = st.integers(min_value=2, max_value=48)
positive = st.floats(min_value=0.05, max_value=20.0, allow_nan=False, allow_infinity=False)
boundaries = st.sampled_from(list(Boundary))

configs = st.builds(LatticeConfig, d=sizes, a=positive, M=positive, hbar=positive, boundary=boundaries)


@given(configs)
def test_hamiltonian_hermitian_psd(cfg):
    H = build_hamiltonian(cfg).entries
    assert np.array_equal(H, H.conj().T)
    assert np.linalg.eigvalsh(H.real).min() >= -1e-12 * cfg.hopping


@given(configs)
def test_numeric_matches_closed_form(cfg):
    assert match_spectra(analytic_spectrum(cfg), numeric_spectrum(cfg)).passed


@given(configs)
def test_energy_scale_covariance(cfg):
    # H scales as hbar^2 / (M a^2)
    base = LatticeConfig(cfg.d, boundary=cfg.boundary)
    factor = cfg.hbar**2 / (cfg.M * cfg.a**2)
    assert np.allclose(analytic_spectrum(cfg).energies, factor * analytic_spectrum(base).energies,
                       rtol=1e-12, atol=1e-12 * cfg.hopping)


@given(sizes, boundaries)
@settings(deadline=None)
def test_algebra_holds(d, boundary):
    assert run_suite(LatticeConfig(d, boundary=boundary)).passed


@given(sizes)
def test_ring_symmetries(d):
    cfg = LatticeConfig(d, boundary=Boundary.PERIODIC)
    H = build_hamiltonian(cfg).entries
    U = build_shift_periodic(cfg).entries
    R = build_parity(cfg).entries
    assert np.abs(U @ H - H @ U).max() <= 1e-12 * cfg.hopping
    assert np.abs(R @ H - H @ R).max() == 0


@given(sizes, positive)
def test_deformed_momentum_square(d, M):
    cfg = LatticeConfig(d, M=M, boundary=Boundary.PERIODIC)
    P = build_deformed_momentum(cfg).entries
    H = build_hamiltonian(cfg).entries
    assert np.abs(P @ P - 2 * M * H).max() <= 1e-11 * np.abs(2 * M * H).max()


@given(configs, st.data())
def test_wavefunctions_normalized(cfg, data):
    if cfg.periodic:
        parity = data.draw(st.sampled_from([Parity.EVEN, Parity.ODD]))
        low, high = (0, (cfg.d - 1) // 2) if parity is Parity.EVEN else (1, cfg.d // 2)
    else:
        parity, low, high = None, 1, cfg.d
    m = data.draw(st.integers(low, high))
    assert abs(wavefunction(cfg, m, parity).norm() - 1) <= 1e-12


@given(st.integers(1, 5), st.integers(5, 9))
@settings(deadline=None, max_examples=25)
def test_errors_monotone_along_doubling(m, start):
    d_values = [2**k for k in range(start, start + 4)]
    for boundary in Boundary:
        errors = convergence_study(m, boundary, d_values=d_values, fit=False).errors
        assert all(b <= a for a, b in zip(errors, errors[1:]))


@given(st.integers(4, 10))
def test_periodic_ground_error_zero(k):
    assert convergence_study(0, Boundary.PERIODIC, d_values=[2**k, 2**(k + 1)], fit=False).errors == [0.0, 0.0]


@given(st.integers(-5, 5))
def test_expansion_deviation_shrinks(mode):
    dev = deformed_momentum_expansion_check(mode=mode).deviations
    assert all(b <= a for a, b in zip(dev, dev[1:]))


@given(st.lists(st.floats(-10, 10), min_size=2, max_size=40), st.data())
@settings(deadline=None)
def test_tridiagonal_solver(diag, data):
    n = len(diag)
    off = data.draw(st.lists(st.floats(-10, 10), min_size=n - 1, max_size=n - 1))
    diag, off = np.array(diag), np.array(off)
    T = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    w, V = eigh_tridiagonal(diag, off)
    scale = max(1.0, np.abs(T).max())
    assert np.abs(w - np.linalg.eigvalsh(T)).max() <= 1e-12 * scale * n
    assert np.abs(V.T @ V - np.eye(n)).max() <= 1e-9
    assert np.abs(T @ V - V * w).max() <= 1e-11 * scale * n
