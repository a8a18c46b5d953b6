"""Lattice quadrature on the character torus and the Plancherel-side oracle.

The integration cell is spanned by 2*pi times the simple roots; sampling on
the uniform sublattice makes character averages exact Kronecker deltas (the
grid phases are computed as exact roots of unity).  This module is the
independent route to the radial wave values: it never touches the
coroot-partition coefficients of the wave module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from buildingwave import tolerances as tol
from buildingwave.rootsys import Coweight, RootDatum, orbit
from buildingwave.spherical import (
    ThicknessParams,
    macdonald_coefficients,
    poincare_series,
)


class QuadratureError(ValueError):
    pass


@dataclass(eq=False)
class TorusGrid:
    """Uniform K^r sampling of one fundamental cell of the 2*pi root lattice."""

    datum: RootDatum
    resolution: int
    index: np.ndarray  # (K^r, r) integer multi-indices
    roots_of_unity: np.ndarray  # exp(2*pi*i*k/K), k = 0..K-1
    covolume: float  # sqrt(det Gram(simple roots)) = cell volume / (2*pi)^r
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return self.index.shape[0]

    def thetas(self) -> np.ndarray:
        step = 2.0 * math.pi / self.resolution
        return (self.index.astype(float) * step) @ self.datum.simple_np

    def character(self, pairings: tuple[int, ...]) -> np.ndarray:
        """exp(i <theta, v>) on the grid for v with integer <alpha_i, v> = pairings."""
        phase = (self.index @ np.asarray(pairings, dtype=np.int64)) % self.resolution
        return self.roots_of_unity[phase]

    def orbit_sum(self, mu: Coweight) -> np.ndarray:
        """Monomial symmetric sum m_mu(i theta) sampled on the grid."""
        key = ("orbit", mu.coords)
        out = self._cache.get(key)
        if out is None:
            out = np.zeros(self.size, dtype=complex)
            for pt in orbit(self.datum, mu):
                out += self.character(pt)
            self._cache[key] = out
        return out

    def inv_c_squared(self, p: ThicknessParams) -> np.ndarray:
        """1/|c(i theta)|^2 on the grid, computed without dividing by wall zeros."""
        key = ("invc", id(p))
        out = self._cache.get(key)
        if out is None:
            d = self.datum
            out = np.ones(self.size)
            for k, q in enumerate(p.q_alpha):
                x = self.character(d.coroot_cw_coords[k]).conj()
                out *= np.abs(1.0 - x) ** 2 / np.abs(1.0 - x / q) ** 2
            self._cache[key] = out
        return out


@lru_cache(maxsize=32)
def _grid_key(datum_id: int, resolution: int):
    return None


_GRIDS: dict[tuple[int, int], TorusGrid] = {}


def get_grid(d: RootDatum, resolution: int) -> TorusGrid:
    key = (id(d), resolution)
    grid = _GRIDS.get(key)
    if grid is None:
        index = np.stack(
            np.meshgrid(*([np.arange(resolution)] * d.rank), indexing="ij"), axis=-1
        ).reshape(-1, d.rank)
        roots = np.exp(2j * math.pi * np.arange(resolution) / resolution)
        gram = d.simple_np @ d.simple_np.T
        covolume = math.sqrt(float(np.linalg.det(gram)))
        grid = TorusGrid(d, resolution, index, roots, covolume)
        _GRIDS[key] = grid
    return grid


# --------------------------------------------------------------------------
# Exact trig-polynomial averages
# --------------------------------------------------------------------------

def torus_integral_trigpoly(d: RootDatum, f, max_coweight_height: int, resolution: int) -> complex:
    """Cell average of a trigonometric polynomial with lattice frequencies.

    Exact (up to roundoff) once the resolution clears the aliasing bound;
    the conservative requirement is resolution > 2 * max_coweight_height.
    """
    if resolution <= 2 * max_coweight_height:
        raise QuadratureError(
            f"resolution {resolution} at or below the exactness bound "
            f"{2 * max_coweight_height}"
        )
    grid = get_grid(d, resolution)
    if callable(f):
        samples = np.asarray([f(theta) for theta in grid.thetas()])
    else:
        samples = np.asarray(f)
        if samples.shape[0] != grid.size:
            raise QuadratureError("sample array does not match the grid")
    return complex(samples.mean())


# --------------------------------------------------------------------------
# Plancherel integration
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PlancherelResult:
    value: complex
    converged: bool
    resolution: int
    dropped: int


def _plancherel_sum(p: ThicknessParams, samples: np.ndarray, grid: TorusGrid) -> tuple[complex, int]:
    # Haar measure normalized so one cell of the 2*pi root lattice has mass
    # (2*pi)^r; the orthogonality identities pin this normalization.
    with np.errstate(invalid="ignore", over="ignore"):
        weight = samples * grid.inv_c_squared(p)
    finite = np.isfinite(weight)
    dropped = int(grid.size - finite.sum())
    if dropped:
        # Redistribute the dropped measure over the kept points.
        mean = weight[finite].sum() / finite.sum()
    else:
        mean = weight.mean()
    norm = float(poincare_series(p)) / p.datum.weyl_order
    return complex(norm * mean), dropped


def plancherel_integral(
    p: ThicknessParams,
    f,
    resolution: int,
    *,
    check_convergence: bool = False,
    convergence_tol: float = tol.PLANCHEREL_TOL,
) -> PlancherelResult:
    """Plancherel-density integral of f over the torus cell.

    ``f`` is a callable on ambient theta vectors or a precomputed sample
    array aligned with the grid.  With ``check_convergence`` the resolution
    is doubled until two successive values agree within tolerance (callable
    input only).
    """

    def evaluate(res: int) -> tuple[complex, int]:
        grid = get_grid(p.datum, res)
        if callable(f):
            samples = np.asarray([f(theta) for theta in grid.thetas()])
        else:
            samples = np.asarray(f)
            if samples.shape[0] != grid.size:
                raise QuadratureError("sample array does not match the grid")
        return _plancherel_sum(p, samples, grid)

    value, dropped = evaluate(resolution)
    if not check_convergence:
        return PlancherelResult(value, True, resolution, dropped)
    if not callable(f):
        raise QuadratureError("convergence checking needs a callable integrand")
    res = resolution
    while True:
        if 2 * res > tol.QUAD_MAX_RESOLUTION:
            raise QuadratureError(
                f"no convergence within resolution {tol.QUAD_MAX_RESOLUTION}"
            )
        refined, dropped = evaluate(2 * res)
        if abs(refined - value) <= convergence_tol:
            return PlancherelResult(refined, True, 2 * res, dropped)
        value, res = refined, 2 * res


def spherical_samples(p: ThicknessParams, omega: Coweight, grid: TorusGrid) -> np.ndarray:
    """P_omega(i theta) on the grid, through the monomial expansion.

    Wall points are harmless here: the expansion is an entire trigonometric
    polynomial, while the symmetrized quotient formula would degenerate.
    """
    coeffs = macdonald_coefficients(p, omega)
    out = np.zeros(grid.size, dtype=complex)
    for mu, c in coeffs.items():
        out += c * grid.orbit_sum(mu)
    return out


def inversion_wave_value(p: ThicknessParams, mu: Coweight, omega: Coweight, resolution: int) -> float:
    """Quadrature route to the radial wave value u(mu, omega)."""
    d = p.datum
    grid = get_grid(d, resolution)
    integrand = grid.orbit_sum(mu) * spherical_samples(p, omega, grid).conj()
    value, _ = _plancherel_sum(p, integrand, grid)
    stab = d.weyl_order / len(orbit(d, mu))
    return float((stab * value).real)


def inversion_check(p: ThicknessParams, mu: Coweight, omega: Coweight, resolution: int) -> float:
    """|quadrature - radial formula| for the wave value at (mu, omega)."""
    from buildingwave.wave import wave_value  # local import to keep routes separate

    return abs(inversion_wave_value(p, mu, omega, resolution) - wave_value(p, mu, omega))


# --------------------------------------------------------------------------
# Fundamental-domain diagnostics
# --------------------------------------------------------------------------

def translate_multiplicity(d: RootDatum, theta: np.ndarray, search: int = 3) -> int:
    """How many 2*pi-root-lattice translates of theta land in the closed domain
    {|<theta, coroot>| <= 2*pi}; equal to 1 almost everywhere iff the domain is
    a fundamental domain."""
    count = 0
    for shift in np.ndindex(*(2 * search + 1,) * d.rank):
        ell = np.asarray(shift, dtype=float) - search
        candidate = np.asarray(theta) + 2.0 * math.pi * (ell @ d.simple_np)
        pairings = d.coroots_np @ candidate
        if np.max(np.abs(pairings)) <= 2.0 * math.pi - tol.EQ_TOL:
            count += 1
    return count


def domain_volume_ratio(d: RootDatum, samples: int, seed: int = 0) -> float:
    """Monte-Carlo estimate of vol(domain)/vol(cell): mean translate multiplicity."""
    rng = np.random.default_rng(seed)
    total = 0
    for _ in range(samples):
        theta = (rng.uniform(0.0, 1.0, size=d.rank) * 2.0 * math.pi) @ d.simple_np
        total += translate_multiplicity(d, theta)
    return total / samples
