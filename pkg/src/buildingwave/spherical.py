"""Thickness parameters, the c-function, Macdonald spherical functions and the spectrum.

Vertex-count weights and Poincare series stay exact (Fractions); spherical
values are complex floats.  A point of the spectrum carries its real part
``zeta`` and imaginary part ``theta`` as ambient float vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from buildingwave import tolerances as tol
from buildingwave.rootsys import (
    Coweight,
    RootDatum,
    RootSystemError,
    dominance_leq,
    enumerate_dominant_below,
    orbit,
    stabilizer_indices,
)


class ThicknessError(ValueError):
    """Thickness parameters inconsistent with the Weyl-orbit structure."""


class SingularPointError(ArithmeticError):
    """A c-function denominator vanished; callers take the limit path."""


class ConvergenceError(ArithmeticError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class IllConditionedError(ArithmeticError):
    pass


# --------------------------------------------------------------------------
# Thickness parameters
# --------------------------------------------------------------------------

@dataclass(eq=False)
class ThicknessParams:
    datum: RootDatum
    q_simple: tuple[int, ...]
    q_by_orbit: dict[int, int]
    q_alpha: tuple[int, ...]  # aligned with positive_roots
    q_affine: int  # thickness attached to the affine node (orbit of the highest root)
    _wq: Fraction | None = field(default=None, repr=False)
    _qw_inv: tuple[Fraction, ...] | None = field(default=None, repr=False)
    _coeff_cache: dict = field(default_factory=dict, repr=False)
    _c_cache: dict = field(default_factory=dict, repr=False)
    _np_cache: dict = field(default_factory=dict, repr=False)

    @property
    def logq_alpha(self) -> np.ndarray:
        arr = self._np_cache.get("logq")
        if arr is None:
            arr = np.log(np.asarray(self.q_alpha, dtype=float))
            self._np_cache["logq"] = arr
        return arr

    def qw_inverse(self) -> tuple[Fraction, ...]:
        """q_w^{-1} for every Weyl element, via its reduced word."""
        if self._qw_inv is None:
            vals = []
            for w in self.datum.weyl:
                prod = 1
                for i in w.word:
                    prod *= self.q_simple[i]
                vals.append(Fraction(1, prod))
            self._qw_inv = tuple(vals)
        return self._qw_inv


def validate_thickness(d: RootDatum, q_list: Sequence[int]) -> ThicknessParams:
    """Check one q per simple root, q >= 2, constant on Weyl orbits."""
    if len(q_list) != d.rank:
        raise ThicknessError(f"expected {d.rank} thickness values, got {len(q_list)}")
    q_list = tuple(int(q) for q in q_list)
    if any(q < 2 for q in q_list):
        raise ThicknessError("thickness parameters must be at least 2")
    by_orbit: dict[int, int] = {}
    for i, (q, oid) in enumerate(zip(q_list, d.simple_orbit_ids)):
        if oid in by_orbit and by_orbit[oid] != q:
            raise ThicknessError(
                f"simple roots in one Weyl orbit carry distinct thicknesses "
                f"(q_{i + 1} = {q} vs {by_orbit[oid]})"
            )
        by_orbit.setdefault(oid, q)
    q_alpha = tuple(by_orbit[oid] for oid in d.root_orbit_ids)
    return ThicknessParams(
        datum=d,
        q_simple=q_list,
        q_by_orbit=by_orbit,
        q_alpha=q_alpha,
        q_affine=q_alpha[d.highest_index],
    )


# --------------------------------------------------------------------------
# chi_0 and Poincare series
# --------------------------------------------------------------------------

def chi0(p: ThicknessParams, lam: Coweight) -> Fraction:
    """Product of q_alpha^{<lam, alpha>} over the positive roots (exact)."""
    result = Fraction(1)
    for idx, q in enumerate(p.q_alpha):
        e = p.datum.pairing_with_root(lam, idx)
        if e:
            result *= Fraction(q) ** e
    return result


def chi0_log(p: ThicknessParams, lam: Coweight) -> float:
    d = p.datum
    return float(
        sum(math.log(q) * d.pairing_with_root(lam, idx) for idx, q in enumerate(p.q_alpha))
    )


def chi0_half_inv(p: ThicknessParams, lam: Coweight) -> float:
    return math.exp(-0.5 * chi0_log(p, lam))


def log_chi0_half_vector(p: ThicknessParams) -> np.ndarray:
    """The vector v_q with chi0(lam)^{1/2} = exp(<lam, v_q>)."""
    return 0.5 * (p.logq_alpha[:, None] * p.datum.positive_np).sum(axis=0)


def poincare_series(p: ThicknessParams, indices: Iterable[int] | None = None) -> Fraction:
    """Sum of q_w^{-1} over a subset of W (all of W when indices is None)."""
    qinv = p.qw_inverse()
    if indices is None:
        if p._wq is None:
            p._wq = sum(qinv, Fraction(0))
        return p._wq
    return sum((qinv[i] for i in indices), Fraction(0))


def n_lambda(p: ThicknessParams, lam: Coweight) -> Fraction:
    """Cardinality of a sphere of vectorial radius lam (exact, positive)."""
    if not lam.dominant:
        raise RootSystemError("n_lambda requires a dominant coweight")
    stab = stabilizer_indices(p.datum, lam)
    return poincare_series(p) / poincare_series(p, stab) * chi0(p, lam)


# --------------------------------------------------------------------------
# Monomial symmetric sums and the c-function
# --------------------------------------------------------------------------

def monomial_m(d: RootDatum, mu: Coweight, z: np.ndarray) -> complex:
    """Orbit sum of exponentials: sum over nu in W.mu of exp(<z, nu>)."""
    if not mu.dominant:
        raise RootSystemError("monomial_m requires a dominant coweight")
    pts = d.orbit_np(mu)
    return complex(np.exp(pts @ np.asarray(z)).sum())


def c_function(p: ThicknessParams, z: np.ndarray) -> complex:
    """Product over positive roots of (1 - q^-1 e^{-<z,coroot>}) / (1 - e^{-<z,coroot>})."""
    x = np.exp(-(p.datum.coroots_np @ np.asarray(z)))
    den = 1.0 - x
    if np.abs(den).min() < tol.SINGULAR_TOL:
        raise SingularPointError("c-function pole: denominator below tolerance")
    num = 1.0 - x / np.asarray(p.q_alpha, dtype=float)
    return complex(np.prod(num / den))


def _macdonald_direct(p: ThicknessParams, lam: Coweight, z: np.ndarray) -> complex:
    """Raises SingularPointError when any symmetrized denominator is small."""
    d = p.datum
    wz = d.weyl_np @ np.asarray(z)  # (|W|, dim)
    x = np.exp(-(wz @ d.coroots_np.T))  # (|W|, n_pos)
    den = 1.0 - x
    if np.abs(den).min() < tol.NEAR_SINGULAR_TOL:
        raise SingularPointError("spherical evaluation near a c-function wall")
    num = 1.0 - x / np.asarray(p.q_alpha, dtype=float)
    cvals = (num / den).prod(axis=1)
    evals = np.exp(wz @ d.coweight_np(lam))
    norm = chi0_half_inv(p, lam) / float(poincare_series(p))
    return complex(norm * (cvals * evals).sum())


def macdonald_p(p: ThicknessParams, lam: Coweight, z: np.ndarray) -> complex:
    """Spherical function value at lam, with a perturb-and-extrapolate limit path.

    Near a wall the symmetrized formula degenerates; there the value is the
    Richardson extrapolation of four perturbed directions, and their spread
    must stay below tolerance.
    """
    z = np.asarray(z, dtype=complex)
    try:
        return _macdonald_direct(p, lam, z)
    except SingularPointError:
        pass
    d = p.datum
    rng = np.random.default_rng(0xC0FFEE)
    eps_big, eps_small = tol.PERTURB_EPS
    extrapolated = []
    attempts = 0
    while len(extrapolated) < 4:
        attempts += 1
        if attempts > 40:
            raise ConvergenceError("perturbation directions kept hitting walls", math.inf)
        direction = rng.uniform(-1.0, 1.0, size=d.rank) @ d.simple_np
        direction = direction / np.linalg.norm(direction)
        try:
            big = _macdonald_direct(p, lam, z + eps_big * direction)
            small = _macdonald_direct(p, lam, z + eps_small * direction)
        except SingularPointError:
            continue
        extrapolated.append(2.0 * small - big)
    spread = max(
        abs(a - b) for i, a in enumerate(extrapolated) for b in extrapolated[i + 1:]
    )
    if spread > tol.PERTURB_SPREAD_TOL:
        raise ConvergenceError("limit scheme did not converge at singular point", spread)
    return complex(np.mean(extrapolated))


# --------------------------------------------------------------------------
# Monomial expansion of the spherical function
# --------------------------------------------------------------------------

def _generic_imaginary_points(p: ThicknessParams, count: int, rng: np.random.Generator) -> list[np.ndarray]:
    d = p.datum
    points = []
    while len(points) < count:
        theta = (rng.uniform(0.05, 0.95, size=d.rank) * 2.0 * math.pi) @ d.simple_np
        z = 1j * theta
        wz = d.weyl_np @ z
        den = 1.0 - np.exp(-(wz @ d.coroots_np.T))
        if np.abs(den).min() >= tol.NEAR_SINGULAR_TOL:
            points.append(z)
    return points


def macdonald_coefficients(p: ThicknessParams, lam: Coweight) -> dict[Coweight, float]:
    """Real coefficients of the spherical function over the monomial basis.

    Solved as an overdetermined collocation system at generic imaginary
    points, then verified at fresh points; the expansion runs over the
    dominant coweights below lam.
    """
    cached = p._coeff_cache.get(lam.coords)
    if cached is not None:
        return cached
    d = p.datum
    mus = enumerate_dominant_below(d, lam)
    rng = np.random.default_rng(0x5EED)
    pts = _generic_imaginary_points(p, 2 * len(mus), rng)
    a = np.array([[monomial_m(d, mu, z) for mu in mus] for z in pts])
    b = np.array([_macdonald_direct(p, lam, z) for z in pts])
    a_real = np.vstack([a.real, a.imag])
    b_real = np.concatenate([b.real, b.imag])
    cond = np.linalg.cond(a_real)
    if cond > tol.CONDITION_LIMIT:
        raise IllConditionedError(f"collocation system condition number {cond:.3e}")
    coeffs, *_ = np.linalg.lstsq(a_real, b_real, rcond=None)

    fresh = _generic_imaginary_points(p, 20, rng)
    residual = 0.0
    for z in fresh:
        approx = sum(c * monomial_m(d, mu, z) for c, mu in zip(coeffs, mus))
        residual = max(residual, abs(approx - _macdonald_direct(p, lam, z)))
    if residual > tol.COEFF_VERIFY_TOL:
        raise ConvergenceError("monomial expansion failed verification", residual)

    result = {mu: float(c) for mu, c in zip(mus, coeffs)}
    if result[lam] <= 0:
        raise ConvergenceError("leading monomial coefficient not positive", result[lam])
    p._coeff_cache[lam.coords] = result
    return result


# --------------------------------------------------------------------------
# The spectrum
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralPoint:
    zeta: tuple[float, ...]
    theta: tuple[float, ...]
    sigma_member: bool
    family_tag: str  # tempered | real | mixed | external

    @property
    def zeta_np(self) -> np.ndarray:
        return np.asarray(self.zeta)

    @property
    def theta_np(self) -> np.ndarray:
        return np.asarray(self.theta)

    @property
    def z_np(self) -> np.ndarray:
        return self.zeta_np + 1j * self.theta_np


def _root_basis_coords(d: RootDatum, vec: np.ndarray) -> tuple[np.ndarray, float]:
    """Least-squares coordinates of an ambient vector over the simple roots."""
    pinv = d._np_cache.get("simple_pinv")
    if pinv is None:
        pinv = np.linalg.pinv(d.simple_np.T)
        d._np_cache["simple_pinv"] = pinv
    coords = pinv @ vec
    residual = float(np.linalg.norm(d.simple_np.T @ coords - vec))
    return coords, residual


def _dominant_float(d: RootDatum, v: np.ndarray) -> np.ndarray:
    cur = np.array(v, dtype=float)
    for _ in range(16 * len(d.positive_roots) * max(1, d.weyl_order)):
        pairings = d.simple_np @ cur
        i = int(np.argmin(pairings))
        if pairings[i] >= -tol.EQ_TOL:
            return cur
        cur = cur - pairings[i] * d.coroots_np[d.simple_positions[i]]
    raise RootSystemError("float dominant reduction failed to terminate")


def _in_hull(p: ThicknessParams, zeta: np.ndarray) -> bool:
    """zeta in co(W.v_q), via the dominance characterization of orbit hulls."""
    vq = log_chi0_half_vector(p)
    dom = _dominant_float(p.datum, zeta)
    coords, residual = _root_basis_coords(p.datum, vq - dom)
    if residual > 1e-8:
        return False
    return bool(np.all(coords >= -tol.EQ_TOL))


def _lattice_witness(p: ThicknessParams, zeta: np.ndarray, theta: np.ndarray) -> bool:
    """Search w with w.zeta = -zeta and (theta - w.theta)/2pi in the root lattice."""
    d = p.datum
    scale = max(1.0, float(np.linalg.norm(zeta)))
    for w in d.weyl_np:
        if np.linalg.norm(w @ zeta + zeta) > tol.EQ_TOL * scale:
            continue
        ell = (theta - w @ theta) / (2.0 * math.pi)
        coords, residual = _root_basis_coords(d, ell)
        if residual > tol.LATTICE_ROUND_TOL:
            continue
        if np.all(np.abs(coords - np.round(coords)) < tol.LATTICE_ROUND_TOL):
            return True
    return False


def spectrum_membership(p: ThicknessParams, zeta: np.ndarray, theta: np.ndarray) -> bool:
    zeta = np.asarray(zeta, dtype=float)
    theta = np.asarray(theta, dtype=float)
    return _in_hull(p, zeta) and _lattice_witness(p, zeta, theta)


def make_spectral_point(p: ThicknessParams, zeta, theta) -> SpectralPoint:
    zeta = np.asarray(zeta, dtype=float)
    theta = np.asarray(theta, dtype=float)
    member = spectrum_membership(p, zeta, theta)
    if not member:
        tag = "external"
    elif np.linalg.norm(zeta) <= tol.EQ_TOL:
        tag = "tempered"
    elif np.linalg.norm(theta) <= tol.EQ_TOL:
        tag = "real"
    else:
        tag = "mixed"
    return SpectralPoint(tuple(map(float, zeta)), tuple(map(float, theta)), member, tag)


def spectrum_contains(p: ThicknessParams, point: SpectralPoint) -> bool:
    return spectrum_membership(p, point.zeta_np, point.theta_np)


def fundamental_domain_contains(d: RootDatum, theta: np.ndarray) -> bool:
    """|<theta, coroot>| <= 2*pi for every positive coroot (closed condition)."""
    pairings = d.coroots_np @ np.asarray(theta, dtype=float)
    return bool(np.max(np.abs(pairings)) <= 2.0 * math.pi + tol.EQ_TOL)


def sample_spectrum(p: ThicknessParams, resolution: int) -> list[SpectralPoint]:
    """Verified sample of the spectrum: tempered grid, real segment, mixed points.

    Every returned point passes the membership test; the sample covers the
    three parametrized families only.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    d = p.datum
    vq = log_chi0_half_vector(p)
    zero = np.zeros(d.ambient_dim)
    points: dict[tuple, SpectralPoint] = {}

    def push(zeta, theta):
        sp = make_spectral_point(p, zeta, theta)
        if sp.sigma_member:
            key = (
                tuple(np.round(sp.zeta_np, 9)),
                tuple(np.round(sp.theta_np, 9)),
            )
            points.setdefault(key, sp)

    # Tempered grid over one torus cell.
    step = 2.0 * math.pi / resolution
    for index in np.ndindex(*(resolution,) * d.rank):
        theta = (np.asarray(index, dtype=float) * step) @ d.simple_np
        push(zero, theta)
    # Real segment toward the hull vertex.
    for t in np.linspace(0.0, 1.0, resolution):
        push(t * vq, zero)
    # Mixed candidates: small root-lattice shifts times pi.
    for mask in np.ndindex(*(2,) * d.rank):
        if not any(mask):
            continue
        ell = np.asarray(mask, dtype=float) @ d.simple_np
        for t in np.linspace(1.0 / resolution, 1.0, resolution):
            push(t * vq, math.pi * ell)
    ordered = sorted(points.values(), key=lambda sp: (sp.family_tag, sp.zeta, sp.theta))
    return ordered
