"""Numerical mode analysis against the hand-derived linearization."""

import numpy as np
import pytest

from modmhd import (
    BackgroundPotential,
    Formulation,
    PhysParams,
    UniformBackground,
    dispersion,
    modified_wavenumber,
    oracle_matrix,
    oracle_omegas,
    wavevector_from_modes,
)
from modmhd.dispersion import modified_wavevector

from conftest import TWO_PI, cube, slab

VA = 1.0 / np.sqrt(4.0 * np.pi)


def _trad(h0=(1.0, 0.0, 0.0), rho0=1.0, p0=0.6):
    return UniformBackground.traditional(rho0, p0, h0)


def _mod(h0=(1.0, 0.0, 0.0), rho0=1.0, p0=0.6):
    bg = BackgroundPotential.from_uniform_field(np.asarray(h0, dtype=float))
    return UniformBackground.modified(rho0, p0, bg)


def test_wavevector_from_modes():
    g = cube(16, length=TWO_PI)
    assert np.allclose(wavevector_from_modes((1, 0, 0), g), (1.0, 0.0, 0.0))
    g2 = cube(16, length=np.pi)
    assert np.allclose(wavevector_from_modes((0, 2, 0), g2), (0.0, 4.0, 0.0))
    with pytest.raises(ValueError):
        wavevector_from_modes((0, 0, 0), g)


def test_modified_wavenumber():
    h = 0.1
    assert modified_wavenumber(0.0, h, 2) == 0.0
    assert modified_wavenumber(2.0, h, 2) == pytest.approx(np.sin(0.2) / 0.1)
    k4 = (8.0 * np.sin(0.2) - np.sin(0.4)) / (6.0 * 0.1)
    assert modified_wavenumber(2.0, h, 4) == pytest.approx(k4)
    # order 4 is closer to the true wavenumber
    assert abs(modified_wavenumber(2.0, h, 4) - 2.0) < abs(
        modified_wavenumber(2.0, h, 2) - 2.0)


def test_background_validation():
    with pytest.raises(ValueError):
        UniformBackground.traditional(-1.0, 0.6, (1, 0, 0))
    with pytest.raises(ValueError):
        UniformBackground.modified(1.0, 0.0, BackgroundPotential.zero())


def test_background_state_is_uniform_rest():
    g = cube(8)
    st = _trad().state(g)
    assert np.all(st.v == 0.0)
    assert np.all(st.rho == 1.0)
    assert np.allclose(st.h0, (1.0, 0.0, 0.0))


@pytest.mark.parametrize("background", [_trad(), _mod()])
def test_jacobian_matches_analytic_oracle(background):
    g = slab(64)
    p = PhysParams()
    res = dispersion(background, (1, 0, 0), g, p)
    want = oracle_omegas(background, (1, 0, 0), g, p, full=True)
    scale = np.abs(want).max()
    err = np.abs(np.sort_complex(res.omega) - np.sort_complex(want)).max()
    assert err <= 1e-8 * scale
    assert not res.warning


def test_traditional_parallel_speeds():
    g = slab(64)
    res = dispersion(_trad(), (1, 0, 0), g, PhysParams())
    cs = 1.0   # sqrt(gamma p0 / rho0) with gamma=5/3, p0=0.6
    speeds = res.speeds()
    nonzero = sorted(s for s in speeds if s > 1e-10)
    assert len(nonzero) == 2
    assert nonzero[0] == pytest.approx(VA, rel=5e-3)
    assert nonzero[1] == pytest.approx(cs, rel=5e-3)
    # Alfven speed appears twice (two polarizations): four +/- pairs at VA
    kt = modified_wavenumber(1.0, g.hx, 2)
    n_alfven = np.sum(np.abs(np.abs(res.omega.real) - VA * kt) < 1e-8 * kt)
    assert n_alfven == 8   # 2 polarizations x +/- x cos/sin doubling


def test_modified_transverse_speed_is_va_over_sqrt2():
    # headline contrast with the traditional system: in the symmetric
    # background gauge the transverse branch propagates at v_A/sqrt(2)
    g = slab(64)
    res = dispersion(_mod(), (1, 0, 0), g, PhysParams())
    nonzero = sorted(s for s in res.speeds() if s > 1e-10)
    assert nonzero[0] == pytest.approx(VA / np.sqrt(2.0), rel=5e-3)
    assert nonzero[1] == pytest.approx(1.0, rel=5e-3)


def test_formulations_agree_without_background_field():
    g = slab(32)
    p = PhysParams()
    wm = np.sort_complex(dispersion(_mod(h0=(0, 0, 0)), (1, 0, 0), g, p).omega)
    wt = np.sort_complex(dispersion(_trad(h0=(0, 0, 0)), (1, 0, 0), g, p).omega)
    scale = max(np.abs(wt).max(), 1e-30)
    assert np.abs(wm - wt).max() <= 1e-6 * scale


def test_eigenvalues_come_in_conjugate_pairs():
    g = slab(32)
    for background in (_trad(), _mod(), _trad(h0=(0.3, 0.4, 0.0))):
        res = dispersion(background, (1, 0, 0), g, PhysParams())
        assert res.pairing_error <= 1e-8


def test_oblique_mode_against_oracle():
    g = cube(24)
    p = PhysParams()
    background = _trad(h0=(0.8, 0.0, 0.3), p0=0.4)
    res = dispersion(background, (1, 2, 0), g, p)
    want = oracle_omegas(background, (1, 2, 0), g, p, full=True)
    err = np.abs(np.sort_complex(res.omega) - np.sort_complex(want)).max()
    assert err <= 1e-7 * np.abs(want).max()


def test_oracle_matrix_structure():
    g = slab(16)
    p = PhysParams()
    L = oracle_matrix(_trad(), (1, 0, 0), g, p)
    assert L.shape == (8, 8)
    # no growth or decay in ideal linear theory: eigenvalues purely imaginary
    lam = np.linalg.eigvals(L)
    assert np.abs(lam.real).max() < 1e-12


def test_modified_wavevector_componentwise():
    g = cube(16)
    kv = modified_wavevector(np.array([1.0, 2.0, 0.0]), g, 2)
    assert kv[0] == pytest.approx(np.sin(g.hx) / g.hx)
    assert kv[1] == pytest.approx(np.sin(2 * g.hy) / g.hy)
    assert kv[2] == 0.0


def test_dispersion_rejects_zero_mode():
    with pytest.raises(ValueError):
        dispersion(_trad(), (0, 0, 0), slab(16), PhysParams())


def test_speeds_are_omega_over_ktilde():
    g = slab(32)
    res = dispersion(_trad(), (2, 0, 0), g, PhysParams())
    kt = modified_wavenumber(2.0, g.hx, 2)
    best = max(res.speeds())
    # speeds() rounds to 10 decimals before deduplicating
    assert best == pytest.approx(np.abs(res.omega.real).max() / kt, abs=1e-9)
