"""Fejer-type positive spectral kernels with a target-point lower bound.

The transform-side kernel is a normalized square of partial orbit-character
sums along the dilated regular ray, minus one; a Dirichlet simultaneous
approximation step picks the dilation so that the value at the target point
dominates.  The radial kernel is the finite wave superposition matching that
transform.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from buildingwave import tolerances as tol
from buildingwave.rootsys import Coweight, RootDatum, orbit
from buildingwave.spherical import SpectralPoint, ThicknessParams
from buildingwave.wave import wave_radial


class SigmaContractError(ArithmeticError):
    """A spectral realness contract failed at a point claimed to be in the spectrum."""


class DirichletSearchError(RuntimeError):
    pass


class KernelError(ValueError):
    pass


# --------------------------------------------------------------------------
# Specs, tables, reports
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelSpec:
    z0: SpectralPoint
    M: int
    N: int
    b: int
    case_tag: int  # 1: theta0 = 0; 2: zeta0 = 0; 3: both nonzero
    B: float  # Dirichlet box parameter (0 in case 1)
    b_prime: int  # first simultaneous-approximation hit (0 in case 1)
    h: int  # total coroot height of the root system

    def support_radius(self) -> int:
        """The radial support lies under support_radius() * rho (cone order)."""
        return 8 * self.M * self.b


@dataclass(frozen=True)
class VerificationReport:
    min_K_on_sigma: float
    K_at_z0: float
    sup_abs_k: float
    support_bound_ok: bool
    sampled_points: int
    failures: tuple[str, ...]
    support_bound_body: float  # 16 M (8 pi h M N)^r, the b-free support constant
    max_coefficient: float
    coefficient_count: int
    radial_count: int

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass(eq=False)
class KernelTable:
    spec: KernelSpec
    coefficients: dict[Coweight, float]
    radial: dict[Coweight, float]
    report: VerificationReport | None = None


# --------------------------------------------------------------------------
# Transform side
# --------------------------------------------------------------------------

def _rho(d: RootDatum) -> Coweight:
    return Coweight((1,) * d.rank)


def monomial_sums_along_rho(p: ThicknessParams, M: int, b: int, z: np.ndarray) -> np.ndarray:
    """m_{k rho}(b z) for k = 0..4M as complex values."""
    d = p.datum
    pts = d.orbit_np(_rho(d))  # |W| points, regular orbit
    t = np.exp(b * (pts @ np.asarray(z, dtype=complex)))
    sums = np.empty(4 * M + 1, dtype=complex)
    sums[0] = 1.0
    power = np.ones_like(t)
    for k in range(1, 4 * M + 1):
        power = power * t
        sums[k] = power.sum()
    return sums


def _real_parts_checked(sums: np.ndarray, where: str) -> np.ndarray:
    scale = np.maximum(1.0, np.abs(sums.real))
    rel = np.abs(sums.imag) / scale
    worst = float(rel.max())
    if worst >= tol.IMAG_ERROR_TOL:
        raise SigmaContractError(
            f"imaginary part {worst:.3e} at {where}; the point is not in the spectrum"
        )
    return sums.real


def K_value(p: ThicknessParams, M: int, b: int, z: np.ndarray, *, in_sigma: bool = True) -> float:
    """Transform-side kernel value at z.

    On the spectrum each orbit sum along the rho ray is real; its residual
    imaginary part is checked (relative) and discarded.  Off the spectrum the
    real part of the complex square is returned and the caller holds the
    warning (it asked with in_sigma=False).
    """
    if M < 1 or b < 1:
        raise KernelError("M and b must be positive integers")
    sums = monomial_sums_along_rho(p, M, b, z)
    norm = 1 + 4 * M * p.datum.weyl_order
    if in_sigma:
        total = _real_parts_checked(sums, "spectral kernel evaluation").sum()
        return float(total * total / norm - 1.0)
    total = sums.sum()
    return float((total * total / norm - 1.0).real)


# --------------------------------------------------------------------------
# Coefficients by exact autocorrelation
# --------------------------------------------------------------------------

def kernel_coefficients(p: ThicknessParams, M: int, b: int) -> dict[Coweight, float]:
    """Monomial coefficients of the transform kernel over the b-dilated lattice.

    Exact autocorrelation of the point set {k b w.rho : w in W, 0 <= k <= 4M}:
    the count of ordered pairs at each dominant difference b*nu, divided by
    the set size.  The zero coefficient cancels against the subtracted one.
    """
    if M < 1 or b < 1:
        raise KernelError("M and b must be positive integers")
    d = p.datum
    rho_orbit = orbit(d, _rho(d))
    points: list[tuple[int, ...]] = [(0,) * d.rank]
    for k in range(1, 4 * M + 1):
        for eta in rho_orbit:
            points.append(tuple(k * b * c for c in eta))
    size = 1 + 4 * M * d.weyl_order
    if len(points) != size or len(set(points)) != size:
        raise KernelError("dilated ray points collide; rho orbit not regular?")

    hist: Counter[tuple[int, ...]] = Counter()
    for x in points:
        for y in points:
            diff = tuple(a - c for a, c in zip(x, y))
            if all(v >= 0 for v in diff):
                hist[diff] += 1

    zero = (0,) * d.rank
    if hist[zero] != size:
        raise KernelError("autocorrelation peak does not cancel the Dirac term")

    bound = Coweight((8 * M * b,) * d.rank)
    coeffs: dict[Coweight, float] = {}
    for diff, count in hist.items():
        if diff == zero:
            continue
        if any(v % b for v in diff):
            raise KernelError("difference outside the dilated coweight lattice")
        nu = Coweight(tuple(v // b for v in diff))
        exact = Fraction(count, size)
        if not 0 < exact <= 1:
            raise KernelError("coefficient outside (0, 1]")
        if not _cone_leq(d, Coweight(diff), bound):
            raise KernelError("coefficient support escapes the dilated cone bound")
        coeffs[nu] = float(exact)
    return coeffs


def _cone_leq(d: RootDatum, mu: Coweight, lam: Coweight) -> bool:
    diff = lam - mu
    return all(
        sum(d.dual_numerators[i][j] * diff.coords[j] for j in range(d.rank)) >= 0
        for i in range(d.rank)
    )


# --------------------------------------------------------------------------
# Case classification, thresholds, dilation choice
# --------------------------------------------------------------------------

def classify_case(z0: SpectralPoint) -> int:
    theta_zero = np.linalg.norm(z0.theta_np) <= tol.EQ_TOL
    zeta_zero = np.linalg.norm(z0.zeta_np) <= tol.EQ_TOL
    if theta_zero:
        return 1  # includes the degenerate origin
    if zeta_zero:
        return 2
    return 3


@dataclass(frozen=True)
class Thresholds:
    M0: int
    N0: int
    kappa: float
    kappa_prime: float
    stabilizer_size: int


def _stabilizer_mask(p: ThicknessParams, zeta: np.ndarray) -> np.ndarray:
    d = p.datum
    scale = max(1.0, float(np.linalg.norm(zeta)))
    images = d.weyl_np @ zeta
    return np.linalg.norm(images - zeta, axis=1) <= tol.EQ_TOL * scale


def thresholds(p: ThicknessParams, zeta0: np.ndarray) -> Thresholds:
    """Smallest (M0, N0) making the leading-term inequalities hold with b = N0.

    For a vanishing real part the bounds below hold for every M, N and the
    thresholds are trivial.
    """
    d = p.datum
    zeta0 = np.asarray(zeta0, dtype=float)
    if np.linalg.norm(zeta0) <= tol.EQ_TOL:
        return Thresholds(1, 1, 0.0, 0.0, d.weyl_order)
    rho_vec = d.rho_np
    if float(zeta0 @ rho_vec) <= 0:
        raise KernelError("case-3 thresholds need a dominant nonzero real part")
    stab = _stabilizer_mask(p, zeta0)
    images = d.weyl_np @ zeta0
    gaps = (zeta0 - images) @ rho_vec
    kappa = float(gaps[~stab].min())
    wrho = d.weyl_np @ rho_vec
    pair = wrho @ zeta0
    pos = (~stab) & (pair > tol.EQ_TOL)
    kappa_prime = float((1.0 / (1.0 - np.exp(-pair[pos]))).sum()) if pos.any() else 0.0
    stab_size = int(stab.sum())

    pr = float(zeta0 @ rho_vec)
    n0 = 1
    while math.exp(n0 * pr) < 9.0:
        n0 += 1
        if n0 > 10**6:
            raise KernelError("threshold search for N0 diverged")
    m0 = 1
    while True:
        first = math.exp(4 * m0 * n0 * pr) / m0 >= 32.0 * d.weyl_order / stab_size
        second = math.exp(4 * m0 * n0 * kappa) >= kappa_prime / stab_size
        if first and second:
            break
        m0 += 1
        if m0 > 10**6:
            raise KernelError("threshold search for M0 diverged")
    return Thresholds(m0, n0, kappa, kappa_prime, stab_size)


_DIRICHLET_SCAN_BUDGET = 2_000_000


def select_b(p: ThicknessParams, z0: SpectralPoint, M: int, N: int) -> KernelSpec:
    """Choose the dilation b for the target point, by case.

    Case 1 takes b = N directly.  Otherwise scan for the first multiplier
    b' whose fractional parts of b'<theta0, coroot_j>/2pi all fall in the
    one-sided box [0, 1/B), then round b = 2 b' ceil(N / 2b').
    """
    if not z0.sigma_member:
        raise KernelError("target point is not in the spectrum")
    if M < 1 or N < 1:
        raise KernelError("M and N must be positive integers")
    d = p.datum
    case = classify_case(z0)
    if case == 1:
        return KernelSpec(z0=z0, M=M, N=N, b=N, case_tag=1, B=0.0, b_prime=0, h=d.h)
    big_b = 2.0 * d.h * (8 * M + 1) * N if case == 2 else 8.0 * math.pi * d.h * M * N
    theta = z0.theta_np
    fracs = np.array(
        [float(theta @ d.coroots_np[d.simple_positions[j]]) / (2.0 * math.pi) for j in range(d.rank)]
    )
    cap = math.ceil(big_b) ** d.rank
    box = 1.0 / big_b
    best_miss, best_bp = math.inf, 0
    for bp in range(1, min(cap, _DIRICHLET_SCAN_BUDGET) + 1):
        f = (bp * fracs) % 1.0
        wrapped = np.where(f > 1.0 - tol.DIRICHLET_FUZZ, 0.0, f)
        if np.all(wrapped < box + tol.DIRICHLET_FUZZ):
            b = 2 * bp * math.ceil(N / (2 * bp))
            if not N <= b <= 2 * cap:
                raise KernelError("dilation escaped its guaranteed range")
            return KernelSpec(
                z0=z0, M=M, N=N, b=b, case_tag=case, B=big_b, b_prime=bp, h=d.h
            )
        miss = float(np.max(wrapped))
        if miss < best_miss:
            best_miss, best_bp = miss, bp
    raise DirichletSearchError(
        f"no multiplier found up to {min(cap, _DIRICHLET_SCAN_BUDGET)}; "
        f"best near-miss {best_miss:.3e} at b' = {best_bp}"
    )


def case_thresholds(p: ThicknessParams, z0: SpectralPoint) -> Thresholds:
    """Case-aware thresholds: trivial unless both parts of the target are nonzero."""
    if classify_case(z0) == 3:
        return thresholds(p, z0.zeta_np)
    return Thresholds(1, 1, 0.0, 0.0, p.datum.weyl_order)


# --------------------------------------------------------------------------
# Radial kernel
# --------------------------------------------------------------------------

def kernel_radial(
    p: ThicknessParams,
    z0: SpectralPoint,
    M: int,
    N: int,
    *,
    spec: KernelSpec | None = None,
) -> KernelTable:
    """Construct the radial kernel: wave slices weighted by the coefficients.

    The inverse transform of each dilated monomial sum is the wave slice at
    the dilated time divided by its stabilizer order.
    """
    if spec is None:
        spec = select_b(p, z0, M, N)
    d = p.datum
    coeffs = kernel_coefficients(p, spec.M, spec.b)
    radial: dict[Coweight, float] = {}
    for nu, c in coeffs.items():
        time = nu.scale(spec.b)
        stab = d.weyl_order // len(orbit(d, time))
        for omega, value in wave_radial(p, time).values.items():
            radial[omega] = radial.get(omega, 0.0) + c * value / stab
    bound = Coweight((spec.support_radius(),) * d.rank)
    for omega in radial:
        if not _cone_leq(d, omega, bound):
            raise KernelError("radial support escaped the dilated cone bound")
    return KernelTable(spec=spec, coefficients=coeffs, radial=radial)


def verify_theorem(
    p: ThicknessParams,
    table: KernelTable,
    sigma_samples: list[SpectralPoint],
) -> VerificationReport:
    """Check support, boundedness and positivity of a constructed kernel.

    Support is checked exactly in the rational cone order against the dilated
    radius, together with the b-free body constant; the transform values must
    stay >= -1 on the sampled spectrum and >= M at the target.
    """
    d = p.datum
    spec = table.spec
    failures: list[str] = []

    bound = Coweight((spec.support_radius(),) * d.rank)
    support_ok = all(_cone_leq(d, omega, bound) for omega in table.radial)
    body = 16.0 * spec.M * (8.0 * math.pi * spec.h * spec.M * spec.N) ** d.rank
    if not support_ok:
        failures.append("radial support outside the dilated cone bound")
    if spec.support_radius() > body + tol.EQ_TOL:
        failures.append(
            f"support radius {spec.support_radius()} exceeds the body constant {body:.6g}"
        )

    k_at_z0 = K_value(p, spec.M, spec.b, spec.z0.z_np)
    if k_at_z0 < spec.M - tol.EQ_TOL:
        failures.append(f"target value {k_at_z0:.6g} below M = {spec.M}")

    min_k = math.inf
    for sample in sigma_samples:
        if not sample.sigma_member:
            raise KernelError("verification sample outside the spectrum")
        min_k = min(min_k, K_value(p, spec.M, spec.b, sample.z_np))
    if min_k < -1.0 - tol.EQ_TOL:
        failures.append(f"transform dropped to {min_k:.6g} on the sampled spectrum")

    sup_k = max((abs(v) for v in table.radial.values()), default=0.0)
    report = VerificationReport(
        min_K_on_sigma=float(min_k),
        K_at_z0=float(k_at_z0),
        sup_abs_k=float(sup_k),
        support_bound_ok=support_ok and spec.support_radius() <= body + tol.EQ_TOL,
        sampled_points=len(sigma_samples),
        failures=tuple(failures),
        support_bound_body=body,
        max_coefficient=max(table.coefficients.values(), default=0.0),
        coefficient_count=len(table.coefficients),
        radial_count=len(table.radial),
    )
    table.report = report
    return report


# --------------------------------------------------------------------------
# Case-3 diagnostics
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Case3Diagnostics:
    S1: float
    S2: float
    S3: float
    S4: float
    S5: float
    identity_residual: float  # relative residual of the five-term split
    bounds_ok: bool


def case3_diagnostics(p: ThicknessParams, z0: SpectralPoint, M: int, b: int) -> Case3Diagnostics:
    """Split the partial orbit-character sum at a mixed target into its five parts.

    The split isolates the stabilizer's growing term; the other four parts
    must each stay below an eighth of it once the thresholds are met.
    """
    if classify_case(z0) != 3:
        raise KernelError("diagnostics need a target with nonzero real and imaginary parts")
    d = p.datum
    zeta, theta = z0.zeta_np, z0.theta_np
    stab = _stabilizer_mask(p, zeta)
    wrho = d.weyl_np @ d.rho_np  # one row per group element; rho is regular
    zeta_pair = wrho @ zeta
    theta_pair = wrho @ theta
    pr = float(zeta @ d.rho_np)

    s1 = float(stab.sum()) * math.exp(4 * M * b * pr)
    s2 = 2.0 * math.exp(4 * M * b * pr) * float(
        (np.sin(2 * M * b * theta_pair[stab]) ** 2).sum()
    )
    s3 = sum(
        math.exp(k * b * pr) * float(np.cos(k * b * theta_pair[stab]).sum())
        for k in range(1, 4 * M)
    )

    pos = (~stab) & (zeta_pair > tol.EQ_TOL)
    nonpos = (~stab) & ~pos

    def geometric(mask: np.ndarray) -> float:
        total = 0.0 + 0.0j
        zp, tp = zeta_pair[mask], theta_pair[mask]
        for k in range(1, 4 * M + 1):
            total += (np.exp(k * b * (zp + 1j * tp))).sum()
        arr = np.array([total])
        return float(_real_parts_checked(arr, "case-3 class sum")[0])

    s4 = geometric(pos) if pos.any() else 0.0
    s5 = geometric(nonpos) if nonpos.any() else 0.0

    sums = monomial_sums_along_rho(p, M, b, z0.z_np)
    lhs = float(_real_parts_checked(sums, "case-3 identity").sum())
    rhs = 1.0 + s1 - s2 + s3 + s4 + s5
    residual = abs(lhs - rhs) / max(1.0, abs(lhs))

    eighth = s1 / 8.0 + tol.EQ_TOL * max(1.0, s1)
    bounds_ok = s2 <= eighth and abs(s3) <= eighth and abs(s4) <= eighth and abs(s5) <= eighth
    return Case3Diagnostics(
        S1=s1, S2=s2, S3=s3, S4=s4, S5=s5,
        identity_residual=residual, bounds_ok=bounds_ok,
    )


def dirichlet_postcondition(p: ThicknessParams, M: int, b: int, theta0: np.ndarray) -> float:
    """Max distance of 2 M b <theta0, w.rho> from 2 pi Z over W (case 2/3 check)."""
    d = p.datum
    vals = 2 * M * b * ((d.weyl_np @ d.rho_np) @ np.asarray(theta0, dtype=float))
    frac = np.abs(vals / (2 * math.pi) - np.round(vals / (2 * math.pi)))
    return float(frac.max() * 2 * math.pi)
