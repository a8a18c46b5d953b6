from __future__ import annotations

import math

import numpy as np
import pytest

from buildingwave.rootsys import Coweight, cw, orbit, root_system
from buildingwave.spherical import poincare_series, validate_thickness
from buildingwave.quadrature import (
    QuadratureError,
    domain_volume_ratio,
    get_grid,
    inversion_check,
    inversion_wave_value,
    plancherel_integral,
    spherical_samples,
    torus_integral_trigpoly,
    translate_multiplicity,
)
from buildingwave.wave import wave_value


def test_character_orthogonality_exact(a2):
    # 200 seeded random frequency pairs: exact Kronecker deltas on the grid
    rng = np.random.default_rng(31)
    grid = get_grid(a2, 32)
    for _ in range(200):
        mu = tuple(int(x) for x in rng.integers(-6, 7, size=2))
        nu = tuple(int(x) for x in rng.integers(-6, 7, size=2))
        value = (grid.character(mu) * grid.character(nu).conj()).mean()
        expected = 1.0 if mu == nu else 0.0
        assert abs(value - expected) <= 1e-12


def test_trigpoly_average_examples(a2):
    grid = get_grid(a2, 32)
    assert torus_integral_trigpoly(a2, np.ones(grid.size), 0, 32) == pytest.approx(1.0)
    assert abs(torus_integral_trigpoly(a2, grid.character((3, 1)), 4, 32)) <= 1e-12
    # orbit sum against a single character picks out orbit membership
    m = grid.orbit_sum(cw(2, 1))
    for point in [(2, 1), (-2, 3)]:
        probe = grid.character(point).conj()
        inside = tuple(point) in orbit(a2, cw(2, 1))
        assert torus_integral_trigpoly(a2, m * probe, 6, 32) == pytest.approx(
            1.0 if inside else 0.0, abs=1e-12
        )


def test_trigpoly_resolution_guard(a2):
    grid = get_grid(a2, 8)
    with pytest.raises(QuadratureError):
        torus_integral_trigpoly(a2, np.ones(grid.size), 4, 8)


def test_trigpoly_callable_input(a1):
    lam = a1.coweight_np(cw(1))

    def f(theta):
        return np.exp(1j * float(theta @ lam))

    assert abs(torus_integral_trigpoly(a1, f, 1, 8)) <= 1e-12


def test_plancherel_orthogonality(pa2):
    grid = get_grid(pa2.datum, 64)
    p0 = spherical_samples(pa2, cw(0, 0), grid)
    assert plancherel_integral(pa2, np.abs(p0) ** 2, 64).value.real == pytest.approx(1.0, abs=2e-3)
    s1 = spherical_samples(pa2, cw(1, 0), grid)
    s2 = spherical_samples(pa2, cw(0, 1), grid)
    # pairing with the contragredient index carries the sphere mass
    assert plancherel_integral(pa2, s1 * s2, 64).value.real == pytest.approx(1 / 7, abs=2e-3)
    # any other pairing vanishes
    assert abs(plancherel_integral(pa2, s1 * s1, 64).value) <= 2e-3
    assert abs(plancherel_integral(pa2, s1 * np.conj(s2), 64).value) <= 2e-3


def test_plancherel_density_mass(pa2, pc2_23):
    # with the density cancelled, the integral is the Poincare ratio exactly;
    # the |c|^2 samples are infinite on the walls and exercise the drop path
    for p in (pa2, pc2_23):
        grid = get_grid(p.datum, 32)
        with np.errstate(divide="ignore"):
            samples = 1.0 / grid.inv_c_squared(p)
        expected = float(poincare_series(p)) / p.datum.weyl_order
        assert plancherel_integral(p, samples, 32).value.real == pytest.approx(expected, rel=1e-12)


def test_plancherel_drop_and_renormalize(pa2):
    grid = get_grid(pa2.datum, 32)
    samples = np.ones(grid.size, dtype=complex)
    clean = plancherel_integral(pa2, samples, 32).value.real
    samples_bad = samples.copy()
    samples_bad[5] = np.inf
    result = plancherel_integral(pa2, samples_bad, 32)
    assert result.dropped == 1
    assert result.value.real == pytest.approx(clean, rel=5e-3)


def test_plancherel_convergence_flag(pa1):
    d = pa1.datum

    def f(theta):
        return abs(math.sin(float(theta @ d.rho_np)))

    res = plancherel_integral(pa1, f, 16, check_convergence=True)
    assert res.converged and res.resolution > 16


def test_inversion_examples(pa1, pa2):
    assert inversion_check(pa1, cw(0), cw(0), 64) < 2e-3
    assert inversion_check(pa1, cw(4), cw(2), 64) < 2e-3
    assert wave_value(pa1, cw(4), cw(2)) == pytest.approx(2.0**-1 * (1 - 2) * 2.0**-1)
    assert abs(inversion_wave_value(pa1, cw(3), cw(5), 64)) < 2e-3
    assert inversion_check(pa2, cw(2, 1), cw(1, 0), 64) < 2e-3
    assert abs(inversion_wave_value(pa2, cw(1, 0), cw(2, 2), 64)) < 2e-3


def test_inversion_residual_improves_with_resolution(pa2):
    floor = 1e-6
    for mu, omega in [(cw(1, 1), cw(0, 0)), (cw(2, 1), cw(1, 0)), (cw(2, 2), cw(1, 1))]:
        coarse = inversion_check(pa2, mu, omega, 16)
        fine = inversion_check(pa2, mu, omega, 32)
        assert fine <= max(0.5 * coarse, floor)


def test_translate_multiplicity_one(a1, a2, b2, g2):
    rng = np.random.default_rng(33)
    for d in (a1, a2, b2, g2):
        for _ in range(50):
            theta = (rng.uniform(0.0, 1.0, size=d.rank) * 2 * math.pi) @ d.simple_np
            assert translate_multiplicity(d, theta) == 1


def test_domain_volume_ratio(a2, c2):
    assert domain_volume_ratio(a2, 200) == pytest.approx(1.0)
    assert domain_volume_ratio(c2, 200) == pytest.approx(1.0)
