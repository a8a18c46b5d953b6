"""A distinguished solution of the discrete multitemporal wave system.

The solution u is given on the transform side by orbit sums of characters;
on the radial side it is a finite sum of reciprocal-c-function coefficients
C(nu) over the Weyl images of the time parameter.  Propagation stays inside
the dominance cone and the sup norm decays exponentially in the time size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from buildingwave.rootsys import (
    Coweight,
    CorootVector,
    RootDatum,
    RootSystemError,
    coroot_coordinates_int,
    enumerate_dominant_below,
    orbit,
)
from buildingwave.spherical import (
    ThicknessParams,
    chi0_half_inv,
    macdonald_coefficients,
    macdonald_p,
)


@dataclass(frozen=True)
class PartitionSolution:
    """Nonnegative root multiplicities whose coroots sum to a target."""

    exponents: tuple[int, ...]  # aligned with positive_roots


@dataclass(eq=False)
class WaveSlice:
    mu: Coweight
    values: dict[Coweight, float]
    params: ThicknessParams

    def value(self, omega: Coweight) -> float:
        return self.values.get(omega, 0.0)

    def sup_abs(self) -> float:
        return max((abs(v) for v in self.values.values()), default=0.0)


# --------------------------------------------------------------------------
# Coroot partitions and C(nu)
# --------------------------------------------------------------------------

def enumerate_pnu(d: RootDatum, nu: CorootVector) -> list[PartitionSolution]:
    """All ways of writing nu as a nonnegative integer sum of positive coroots.

    Depth-first over the roots in decreasing coroot height, pruning on
    coordinate feasibility of the remainder.
    """
    r = d.rank
    if not nu.nonnegative:
        return []
    order = sorted(range(len(d.positive_roots)), key=lambda k: -d.coroot_heights[k])
    vectors = [d.coroot_coords[k] for k in order]
    # Which coordinates the suffix starting at position t can still reach.
    suffix_support = [0] * (len(order) + 1)
    for t in range(len(order) - 1, -1, -1):
        mask = suffix_support[t + 1]
        for i in range(r):
            if vectors[t][i]:
                mask |= 1 << i
        suffix_support[t] = mask

    solutions: list[PartitionSolution] = []
    exponents = [0] * len(d.positive_roots)

    def descend(t: int, rem: tuple[int, ...]) -> None:
        if all(x == 0 for x in rem):
            # The only completion keeps every later exponent at zero.
            solutions.append(PartitionSolution(tuple(exponents)))
            return
        if t >= len(order):
            return
        mask = suffix_support[t]
        for i in range(r):
            if rem[i] and not (mask >> i) & 1:
                return
        vec = vectors[t]
        cap = min(rem[i] // vec[i] for i in range(r) if vec[i])
        root_idx = order[t]
        for j in range(cap, -1, -1):
            exponents[root_idx] = j
            descend(t + 1, tuple(rem[i] - j * vec[i] for i in range(r)))
        exponents[root_idx] = 0

    descend(0, nu.coords)
    return solutions


def _c_entry(p: ThicknessParams, coords: tuple[int, ...]) -> tuple[Fraction, float]:
    cached = p._c_cache.get(coords)
    if cached is not None:
        return cached
    # The term of a solution only depends on (count, exponent sum) per
    # thickness class; histogram first, then one exact pass per class profile.
    d = p.datum
    classes = sorted(set(p.q_alpha))
    class_index = [classes.index(q) for q in p.q_alpha]
    hist: dict[tuple[tuple[int, int], ...], int] = {}
    for sol in enumerate_pnu(d, CorootVector(coords)):
        counts = [0] * len(classes)
        sums = [0] * len(classes)
        for j, ci in zip(sol.exponents, class_index):
            if j:
                counts[ci] += 1
                sums[ci] += j
        key = tuple(zip(counts, sums))
        hist[key] = hist.get(key, 0) + 1
    total = Fraction(0)
    for key, n in hist.items():
        term = Fraction(n)
        for q, (c, s) in zip(classes, key):
            if s:
                term *= Fraction((1 - q) ** c, q**s)
        total += term
    entry = (total, float(total))
    p._c_cache[coords] = entry
    return entry


def fill_c_box(p: ThicknessParams, bounds: tuple[int, ...]) -> None:
    """Populate the C cache on a whole coroot-coordinate box at once.

    The reciprocal c-function is a product of one geometric series per
    positive root, so the coefficients over a box follow by sequential
    convolution; each series convolves in O(1) per cell through the
    shift recurrence H[x] = q^{-1} (F[x - v] + H[x - v]).
    """
    d = p.datum
    have = p._np_cache.get("c_box")
    if have is not None and all(h >= b for h, b in zip(have, bounds)):
        return
    if have is not None:
        # grow geometrically so repeated slightly-larger requests amortize
        bounds = tuple(max(b, 2 * h) for h, b in zip(have, bounds))
    shape = tuple(b + 1 for b in bounds)
    grid = np.empty(shape, dtype=object)
    grid.flat[0] = Fraction(1)
    for idx in np.ndindex(shape):
        if any(idx):
            grid[idx] = Fraction(0)
    for vec, q in zip(d.coroot_coords, p.q_alpha):
        qinv = Fraction(1, q)
        scale = 1 - q
        partial = np.empty(shape, dtype=object)
        for idx in np.ndindex(shape):
            prev = tuple(i - v for i, v in zip(idx, vec))
            if any(x < 0 for x in prev):
                partial[idx] = Fraction(0)
            else:
                partial[idx] = qinv * (grid[prev] + partial[prev])
        for idx in np.ndindex(shape):
            if partial[idx]:
                grid[idx] = grid[idx] + scale * partial[idx]
    for idx in np.ndindex(shape):
        value = grid[idx]
        p._c_cache[idx] = (value, float(value))
    p._np_cache["c_box"] = bounds


def c_coefficient(p: ThicknessParams, nu: CorootVector) -> float:
    """Coefficient of e^{-nu} in the expansion of the reciprocal c-function."""
    if not nu.nonnegative:
        return 0.0
    return _c_entry(p, nu.coords)[1]


def c_coefficient_exact(p: ThicknessParams, nu: CorootVector) -> Fraction:
    if not nu.nonnegative:
        return Fraction(0)
    return _c_entry(p, nu.coords)[0]


# --------------------------------------------------------------------------
# The radial wave values
# --------------------------------------------------------------------------

def _wave_sum(p: ThicknessParams, mu_dom: Coweight, omega: Coweight) -> float:
    """Sum of C(eta - omega) over the distinct orbit points eta >= omega."""
    d = p.datum
    total = 0.0
    oc = omega.coords
    for eta in orbit(d, mu_dom):
        b = coroot_coordinates_int(d, tuple(e - o for e, o in zip(eta, oc)))
        if b is None or any(x < 0 for x in b):
            continue
        total += _c_entry(p, b)[1]
    return total


def wave_value(p: ThicknessParams, mu: Coweight, omega: Coweight) -> float:
    """Radial wave value u(mu, omega).

    The first argument is extended W-invariantly (reduced to its dominant
    representative); the sum runs over the distinct Weyl images of mu that
    dominate omega, matching the transform normalization |W_mu| m_mu.
    """
    if not omega.dominant:
        raise RootSystemError("wave_value requires a dominant second argument")
    d = p.datum
    mu_dom = Coweight(d.dominant_coords(mu.coords))
    stab = d.weyl_order // len(orbit(d, mu_dom))
    s = _wave_sum(p, mu_dom, omega)
    if s == 0.0:
        return 0.0
    return chi0_half_inv(p, omega) * stab * s


def wave_radial(p: ThicknessParams, mu: Coweight) -> WaveSlice:
    """The full slice u(mu, .) over the dominant coweights below mu."""
    if not mu.dominant:
        raise RootSystemError("wave_radial requires a dominant coweight")
    d = p.datum
    orb = orbit(d, mu)
    stab = d.weyl_order // len(orb)
    # First pass: collect every coroot difference, then fill the coefficient
    # cache over the enclosing box in one dynamic-programming sweep.
    per_omega: list[tuple[Coweight, list[tuple[int, ...]]]] = []
    max_coords = [0] * d.rank
    for omega in enumerate_dominant_below(d, mu):
        oc = omega.coords
        diffs = []
        for eta in orb:
            b = coroot_coordinates_int(d, tuple(e - o for e, o in zip(eta, oc)))
            if b is None or any(x < 0 for x in b):
                continue
            diffs.append(b)
            for i, x in enumerate(b):
                if x > max_coords[i]:
                    max_coords[i] = x
        if diffs:
            per_omega.append((omega, diffs))
    fill_c_box(p, tuple(max_coords))
    cache = p._c_cache
    values: dict[Coweight, float] = {}
    for omega, diffs in per_omega:
        s = sum(cache[b][1] for b in diffs)
        if s != 0.0:
            values[omega] = chi0_half_inv(p, omega) * stab * s
    return WaveSlice(mu=mu, values=values, params=p)


def transform_side(d: RootDatum, nu: Coweight, theta: np.ndarray) -> complex:
    """The partial transform: sum over w of exp(i <w.theta, nu>)."""
    vec = d.coweight_np(nu)
    wtheta = d.weyl_np @ np.asarray(theta, dtype=float)
    return complex(np.exp(1j * (wtheta @ vec)).sum())


def verify_wave_equation(
    p: ThicknessParams,
    lam: Coweight,
    nu: Coweight,
    theta_samples: list[np.ndarray],
) -> float:
    """Max residual of the transform-side wave identity over the samples."""
    d = p.datum
    coeffs = macdonald_coefficients(p, lam)
    worst = 0.0
    for theta in theta_samples:
        lhs = 0.0 + 0.0j
        for mu, c in coeffs.items():
            for om in orbit(d, mu):
                lhs += c * transform_side(d, nu + Coweight(om), theta)
        rhs = macdonald_p(p, lam, 1j * np.asarray(theta)) * transform_side(d, nu, theta)
        worst = max(worst, abs(lhs - rhs))
    return worst


# --------------------------------------------------------------------------
# Decay envelopes
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EnvelopeFit:
    amplitude: float  # C in C * exp(-rate * size)
    rate: float
    worst_ratio: float
    r_squared: float

    @property
    def decaying(self) -> bool:
        return self.rate > 0


def _log_linear_fit(sizes: np.ndarray, logs: np.ndarray) -> tuple[float, float, float]:
    a = np.vstack([np.ones_like(sizes), -sizes]).T
    sol, *_ = np.linalg.lstsq(a, logs, rcond=None)
    intercept, rate = float(sol[0]), float(sol[1])
    pred = a @ sol
    ss_res = float(((logs - pred) ** 2).sum())
    ss_tot = float(((logs - logs.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return intercept, rate, r2


def decay_envelope(p: ThicknessParams, mu_list: list[Coweight]) -> EnvelopeFit:
    """Fit sup |u(mu, .)| <= C exp(-c |mu|) over the given times.

    Size is the coordinate sum in the coweight basis (equivalent to the
    Euclidean norm on the dominant cone).
    """
    if not mu_list:
        raise ValueError("empty time list")
    sizes, sups = [], []
    for mu in mu_list:
        sizes.append(float(mu.height))
        sups.append(wave_radial(p, mu).sup_abs())
    if len(set(sizes)) < 3:
        raise ValueError("envelope fit needs at least 3 distinct time sizes")
    sizes = np.asarray(sizes)
    logs = np.log(np.asarray(sups))
    intercept, rate, r2 = _log_linear_fit(sizes, logs)
    amplitude = math.exp(intercept)
    worst = max(
        s / (amplitude * math.exp(-rate * x)) for s, x in zip(np.exp(logs), sizes)
    )
    return EnvelopeFit(amplitude=amplitude, rate=rate, worst_ratio=worst, r_squared=r2)


def c_envelope_report(p: ThicknessParams, max_height: int) -> dict:
    """Uniform-bound data for |C(nu)| against the geometric reference rate.

    The reference rate uses A_min = (min q_alpha)^(1/(2K)) with
    K = max <coroot, rho_tilde>; the report lists, per pairing level, the
    largest |C(nu)| * A_min^{<nu, rho_tilde>} and the overall constant.
    """
    d = p.datum
    k_const = max(d.coroot_heights)
    a_min = min(p.q_alpha) ** (1.0 / (2.0 * k_const))
    log_a = math.log(a_min)
    by_level: dict[int, float] = {}
    overall = 0.0
    count = 0
    for coords in _coroot_box(d.rank, max_height):
        nu = CorootVector(coords)
        c = c_coefficient(p, nu)
        # <nu, rho_tilde> equals the coroot height since <coroot_i, rho_tilde> = ht.
        level = sum(h * x for h, x in zip(_simple_coroot_levels(d), coords))
        bound = abs(c) * math.exp(log_a * level)
        by_level[level] = max(by_level.get(level, 0.0), bound)
        overall = max(overall, bound)
        count += 1
    return {
        "K": k_const,
        "A_min": a_min,
        "C_emp": overall,
        "levels": dict(sorted(by_level.items())),
        "count": count,
    }


def _simple_coroot_levels(d: RootDatum) -> tuple[float, ...]:
    """<simple coroot_i, rho_tilde>; equal to 1 for every i."""
    return tuple(
        float(np.dot(d.coroots_np[d.simple_positions[i]], d.rho_tilde_np))
        for i in range(d.rank)
    )


def _coroot_box(rank: int, max_height: int):
    for coords in np.ndindex(*(max_height + 1,) * rank):
        if 0 < sum(coords) <= max_height:
            yield tuple(int(c) for c in coords)


def combined_envelope_report(p: ThicknessParams, mu_list: list[Coweight]) -> dict:
    """Empirical fit of the chi0-weighted absolute-coefficient bound.

    For each time mu, takes the worst over omega of
    chi0(omega)^{-1/2} * sum over Weyl images of |C(w.mu - omega)| (with the
    stabilizer multiplicity of the transform normalization), then fits a
    log-linear envelope in the time size.
    """
    d = p.datum
    sizes, worsts = [], []
    for mu in mu_list:
        stab = d.weyl_order // len(orbit(d, mu))
        worst = 0.0
        for omega in enumerate_dominant_below(d, mu):
            total = 0.0
            for eta in orbit(d, mu):
                b = coroot_coordinates_int(d, tuple(e - o for e, o in zip(eta, omega.coords)))
                if b is None or any(x < 0 for x in b):
                    continue
                total += abs(_c_entry(p, b)[1])
            worst = max(worst, chi0_half_inv(p, omega) * stab * total)
        sizes.append(float(mu.height))
        worsts.append(worst)
    arr = np.asarray(sizes)
    logs = np.log(np.asarray(worsts))
    intercept, rate, r2 = _log_linear_fit(arr, logs)
    return {
        "amplitude": math.exp(intercept),
        "rate": rate,
        "r_squared": r2,
        "sizes": sizes,
        "bounds": worsts,
    }
