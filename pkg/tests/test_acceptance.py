"""Acceptance suite.

One test per criterion, each printing a single PASS/FAIL line with its
runtime.  Run with ``pytest tests/test_acceptance.py -v -s``.

Criterion 7 is split: the randomized invariant suite passes, while the
quoted upper bound on the kernel coefficients is mathematically false for
the constructed object (the rank-one coefficients are Fejer-type, approach
one, and exceed 1/(1+4|W|M) for every M); that sub-check is implemented
literally and fails.  See the decisions ledger for the analysis.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from buildingwave.rootsys import (
    Coweight,
    cw,
    dominance_leq,
    orbit,
    root_system,
)
from buildingwave.spherical import (
    log_chi0_half_vector,
    macdonald_coefficients,
    macdonald_p,
    make_spectral_point,
    n_lambda,
    sample_spectrum,
    validate_thickness,
)
from buildingwave.wave import (
    c_envelope_report,
    combined_envelope_report,
    decay_envelope,
    wave_value,
)
from buildingwave.quadrature import get_grid, inversion_wave_value
from buildingwave.kernel import (
    K_value,
    case3_diagnostics,
    case_thresholds,
    kernel_coefficients,
    kernel_radial,
    select_b,
    verify_theorem,
)

from helpers import tree_sphere_sizes, tree_wave_closed_form


def _report(n: int, name: str, ok: bool, elapsed: float, budget: float, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    extra = f" | {detail}" if detail else ""
    print(f"[{status}] criterion {n} ({name}): {elapsed:.1f}s of {budget:.0f}s budget{extra}")
    assert ok, f"criterion {n} ({name}) failed: {detail}"
    assert elapsed < budget, f"criterion {n} exceeded its runtime budget: {elapsed:.1f}s"


def _dominant_up_to(rank: int, height: int) -> list[Coweight]:
    out = []
    for coords in np.ndindex(*(height + 1,) * rank):
        if sum(coords) <= height:
            out.append(Coweight(tuple(int(c) for c in coords)))
    return sorted(out, key=lambda m: (m.height, m.coords))


# -- criterion 1 -------------------------------------------------------------

def test_criterion_1_tree_oracle():
    t0 = time.perf_counter()
    for q in (2, 3):
        p = validate_thickness(root_system("A1"), [q])
        counts = tree_sphere_sizes(q, 8)
        for m in range(1, 9):
            assert n_lambda(p, cw(m)) == counts[m], f"sphere count mismatch q={q} m={m}"
        for k in range(1, 11):
            for m in range(0, 13):
                expected = tree_wave_closed_form(q, k, m)
                got = wave_value(p, cw(k), cw(m))
                assert abs(got - expected) < 1e-12, f"wave closed form q={q} ({k},{m})"
    _report(1, "tree oracle equivalence", True, time.perf_counter() - t0, 5.0)


# -- criterion 2 -------------------------------------------------------------

PROPAGATION_CONFIGS = [
    ("A1", (2,)),
    ("A2", (2, 2)),
    ("C2", (2, 2)),
    ("C2", (2, 3)),
    ("G2", (2, 2)),
]


def test_criterion_2_finite_propagation():
    t0 = time.perf_counter()
    resolution = 128
    worst_off, worst_on = 0.0, 0.0
    for name, qs in PROPAGATION_CONFIGS:
        d = root_system(name)
        p = validate_thickness(d, list(qs))
        get_grid(d, resolution)  # shared across the pairs below
        mus = _dominant_up_to(d.rank, 6)
        omegas = _dominant_up_to(d.rank, 8)
        for mu in mus:
            for omega in omegas:
                quad = inversion_wave_value(p, mu, omega, resolution)
                if dominance_leq(d, omega, mu):
                    gap = abs(quad - wave_value(p, mu, omega))
                    worst_on = max(worst_on, gap)
                    assert gap < 2e-3, f"{name} {qs} on-support {mu.coords}/{omega.coords}"
                else:
                    worst_off = max(worst_off, abs(quad))
                    assert abs(quad) < 2e-3, f"{name} {qs} leak at {mu.coords}/{omega.coords}"
    _report(
        2, "finite propagation speed", True, time.perf_counter() - t0, 600.0,
        f"max leak {worst_off:.2e}, max on-support gap {worst_on:.2e}",
    )


# -- criterion 3 -------------------------------------------------------------

def test_criterion_3_exponential_decay():
    t0 = time.perf_counter()
    details = []
    for name in ("A1", "A2"):
        d = root_system(name)
        p = validate_thickness(d, [2] * d.rank)
        fit = decay_envelope(p, [Coweight((k,) * d.rank) for k in range(1, 9)])
        assert fit.rate > 0, f"{name} slope not positive"
        assert fit.r_squared > 0.9, f"{name} fit quality {fit.r_squared}"
        details.append(f"{name}: rate {fit.rate:.4f} (r2 {fit.r_squared:.3f})")
        if name == "A1":
            target = 0.5 * math.log(2)
            assert abs(fit.rate - target) <= 0.1 * target, "rank-one rate off by more than 10%"
    _report(3, "exponential decay", True, time.perf_counter() - t0, 120.0, "; ".join(details))


# -- criterion 4 -------------------------------------------------------------

def test_criterion_4_coefficient_envelopes():
    t0 = time.perf_counter()
    details = []
    for name in ("A2", "C2"):
        d = root_system(name)
        p = validate_thickness(d, [2] * d.rank)
        rep = c_envelope_report(p, 12)
        # uniform bound: the running maximum stabilizes at small heights
        low = max(v for k, v in rep["levels"].items() if k <= 6)
        high = max((v for k, v in rep["levels"].items() if k > 6), default=0.0)
        assert high <= low + 1e-12, f"{name}: reference-rate bound still growing"
        combined = combined_envelope_report(p, [Coweight((k,) * d.rank) for k in range(1, 7)])
        assert combined["rate"] > 0, f"{name}: combined envelope slope not negative"
        details.append(f"{name}: C_emp {rep['C_emp']:.4f} over {rep['count']} points")
    _report(4, "coefficient envelopes", True, time.perf_counter() - t0, 300.0, "; ".join(details))


# -- criterion 5 -------------------------------------------------------------

def _kernel_targets():
    targets = []
    for name in ("A1", "A2"):
        d = root_system(name)
        p = validate_thickness(d, [2] * d.rank)
        vq = log_chi0_half_vector(p)
        zero = np.zeros(d.ambient_dim)
        if name == "A1":
            alpha = np.asarray(d.simple_np[0])
            theta2 = math.pi * alpha
            theta3 = math.pi * alpha
        else:
            theta2 = (2 * math.pi / 3) * (np.asarray(d.simple_np[0]) + np.asarray(d.simple_np[1]))
            theta3 = math.pi * (np.asarray(d.simple_np[0]) - np.asarray(d.simple_np[1]))
        targets.append((name, p, make_spectral_point(p, vq, zero)))
        targets.append((name, p, make_spectral_point(p, zero, theta2)))
        targets.append((name, p, make_spectral_point(p, 0.5 * vq, theta3)))
    return targets


def test_criterion_5_kernel_end_to_end():
    t0 = time.perf_counter()
    details = []
    for name, p, z0 in _kernel_targets():
        assert z0.sigma_member, f"{name} target left the spectrum"
        th = case_thresholds(p, z0)
        m_used, n_used = max(2, th.M0), max(3, th.N0)
        table = kernel_radial(p, z0, m_used, n_used)
        resolution = 520 if p.datum.rank == 1 else 23
        samples = sample_spectrum(p, resolution)
        assert len(samples) >= 500, "spectral sample too small"
        report = verify_theorem(p, table, samples)
        assert report.support_bound_ok, f"{name}: support bound failed"
        assert report.min_K_on_sigma >= -1 - 1e-9, f"{name}: floor violated"
        assert report.K_at_z0 >= m_used - 1e-9, f"{name}: target bound failed"
        assert not report.failures, f"{name}: {report.failures}"

        sweep_base = max(2, th.N0)
        sups, ens = [], []
        for n_sweep in range(sweep_base, sweep_base + 8, 2):
            spec = select_b(p, z0, m_used, n_sweep)
            sup = max(abs(v) for v in kernel_radial(p, z0, m_used, n_sweep, spec=spec).radial.values())
            sups.append(math.log(sup))
            ens.append(float(n_sweep))
        slope = np.polyfit(ens, sups, 1)[0]
        assert slope < 0, f"{name} case {table.spec.case_tag}: sup|k| not decaying in N"
        details.append(
            f"{name} case {table.spec.case_tag}: b={table.spec.b}, "
            f"K(z0)={report.K_at_z0:.3g}, slope {slope:.3f}"
        )
    _report(5, "kernel end-to-end", True, time.perf_counter() - t0, 900.0, "; ".join(details))


# -- criterion 6 -------------------------------------------------------------

def test_criterion_6_case3_identity():
    t0 = time.perf_counter()
    worst = 0.0
    points = []
    for name, ts in (("A1", (0.3, 0.5, 0.7, 0.9, 1.0)), ("A2", (0.2, 0.4, 0.6, 0.8, 1.0))):
        d = root_system(name)
        p = validate_thickness(d, [2] * d.rank)
        vq = log_chi0_half_vector(p)
        if name == "A1":
            theta = math.pi * np.asarray(d.simple_np[0])
        else:
            theta = math.pi * (np.asarray(d.simple_np[0]) - np.asarray(d.simple_np[1]))
        for t in ts:
            points.append((name, p, make_spectral_point(p, t * vq, theta)))
    assert len(points) == 10
    for name, p, z0 in points:
        assert z0.sigma_member
        th = case_thresholds(p, z0)
        m_used, n_used = max(2, th.M0), max(3, th.N0)
        spec = select_b(p, z0, m_used, n_used)
        diag = case3_diagnostics(p, z0, m_used, spec.b)
        worst = max(worst, diag.identity_residual)
        assert diag.identity_residual < 1e-6, f"{name}: residual {diag.identity_residual:.2e}"
        assert diag.bounds_ok, f"{name}: S2..S5 bounds failed at thresholds"
        from buildingwave.kernel import dirichlet_postcondition

        assert dirichlet_postcondition(p, m_used, spec.b, z0.theta_np) < 0.25
    _report(6, "case-3 split identity", True, time.perf_counter() - t0, 60.0,
            f"max relative residual {worst:.2e}")


# -- criterion 7 -------------------------------------------------------------

def test_criterion_7_algebraic_invariants():
    t0 = time.perf_counter()
    rng = np.random.default_rng(0)
    cases = 0

    # W-invariance and conjugation symmetry of the spherical function
    for name, qs in (("A2", (2, 2)), ("B2", (2, 3))):
        d = root_system(name)
        p = validate_thickness(d, list(qs))
        for _ in range(30):
            lam = Coweight(tuple(rng.integers(0, 4, size=d.rank)))
            theta = (rng.uniform(0.05, 0.95, size=d.rank) * 2 * math.pi) @ d.simple_np
            z = 0.2 * rng.standard_normal(d.ambient_dim) + 1j * theta
            w = d.weyl_np[rng.integers(0, d.weyl_order)]
            base = macdonald_p(p, lam, z)
            assert abs(macdonald_p(p, lam, w @ z) - base) < 1e-9 * max(1, abs(base))
            assert abs(np.conj(base) - macdonald_p(p, lam, np.conj(z))) < 1e-9 * max(1, abs(base))
            cases += 2

    # monomial-expansion nonnegativity
    for name in ("A2", "B2", "C2", "G2"):
        d = root_system(name)
        p = validate_thickness(d, [2] * d.rank)
        for lam in _dominant_up_to(d.rank, 4):
            coeffs = macdonald_coefficients(p, lam)
            assert all(c >= -1e-10 for c in coeffs.values()), f"{name} {lam.coords}"
            cases += 1

    # transform-kernel coefficients: no constant term, unit-interval values,
    # dilated-cone support (checked inside the constructor), exact zero sum rule
    for name, m_val, b_val in (("A1", 2, 3), ("A2", 1, 2), ("G2", 1, 2)):
        d = root_system(name)
        p = validate_thickness(d, [2] * d.rank)
        coeffs = kernel_coefficients(p, m_val, b_val)
        zero = Coweight((0,) * d.rank)
        assert zero not in coeffs
        size = 1 + 4 * m_val * d.weyl_order
        for nu, c in coeffs.items():
            assert 0 < c <= 1
            assert abs(c * size - round(c * size)) < 1e-9  # exact rational counts
            cases += 1

    # character orthogonality deltas on the lattice grid
    d = root_system("C2")
    grid = get_grid(d, 32)
    for _ in range(200):
        mu = tuple(int(x) for x in rng.integers(-6, 7, size=2))
        nu = tuple(int(x) for x in rng.integers(-6, 7, size=2))
        value = (grid.character(mu) * grid.character(nu).conj()).mean()
        assert abs(value - (1.0 if mu == nu else 0.0)) <= 1e-12
        cases += 1

    assert cases >= 300
    _report(7, "algebraic invariant suite", True, time.perf_counter() - t0, 120.0,
            f"{cases} randomized cases (seed 0)")


def test_criterion_7_spec_literal_coefficient_bound():
    """Literal check of the quoted coefficient upper bound 1/(1+4|W|M).

    The constructed coefficients are autocorrelation counts over the set size;
    in rank one they are Fejer-type, (size - j)/size, so the largest is
    (size-1)/size, which exceeds 1/size for every M.  The bound as quoted is
    unattainable; see /root/notes/decisions.md.  The correct exact bounds
    (0 < c <= 1, zero constant term) are enforced in the constructor and
    checked in the invariant suite above.
    """
    t0 = time.perf_counter()
    p = validate_thickness(root_system("A1"), [2])
    failures = []
    for m_val, b_val in ((1, 2), (2, 3)):
        coeffs = kernel_coefficients(p, m_val, b_val)
        bound = 1.0 / (1 + 4 * m_val * 2)
        worst = max(coeffs.values())
        if worst > bound:
            failures.append(f"M={m_val}: max c = {worst:.4f} > {bound:.4f}")
    ok = not failures
    _report(
        7, "spec-literal coefficient bound (known spec defect)", ok,
        time.perf_counter() - t0, 120.0, "; ".join(failures) or "bound held",
    )
