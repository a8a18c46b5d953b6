"""Command-line front end: info, macdonald, nlambda, wave, spectrum, kernel, plancherel.

Artifacts are deterministic for a fixed run configuration: fixed seeds, sorted
keys, and repr-round-trip float formatting.  Exit codes: 0 success, 1 usage or
I/O error, 2 verification failure (the report is still written).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from buildingwave import tolerances as tol
from buildingwave.rootsys import (
    CartanType,
    Coweight,
    RootDatum,
    RootSystemError,
    build_root_system,
    datum_summary,
)
from buildingwave.spherical import (
    SpectralPoint,
    ThicknessError,
    ThicknessParams,
    chi0,
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
    wave_radial,
)
from buildingwave.kernel import (
    KernelSpec,
    KernelTable,
    kernel_coefficients,
    kernel_radial,
    select_b,
    case_thresholds,
    verify_theorem,
)
from buildingwave.quadrature import (
    get_grid,
    inversion_check,
    plancherel_integral,
    spherical_samples,
)


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    cartan: str
    q: tuple[int, ...]
    seed: int = 0
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        spec = {
            "command": self.command,
            "cartan_type": self.cartan,
            "q": list(self.q),
            "seed": self.seed,
        }
        spec.update({k: self.extras[k] for k in sorted(self.extras)})
        return spec


# --------------------------------------------------------------------------
# Parsing helpers
# --------------------------------------------------------------------------

def _parse_int_list(text: str, rank: int, what: str) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"malformed {what} coordinates {text!r}") from exc
    if len(values) != rank:
        raise UsageError(f"{what} needs {rank} coordinates, got {len(values)}")
    return values


def _parse_q(text: str, rank: int) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"malformed thickness list {text!r}") from exc
    if len(values) == 1:
        return values * rank
    if len(values) != rank:
        raise UsageError(f"need one thickness or {rank}, got {len(values)}")
    return values


def _parse_z_tokens(tokens: list[str], p: ThicknessParams) -> SpectralPoint:
    """Parse ``zeta=... theta=...`` tokens into a spectral point.

    Values are coefficients over the simple roots; ``zeta=vq:t`` scales the
    hull vertex, ``theta=pi:c1,c2`` multiplies the coefficients by pi, and a
    bare ``0`` is the zero vector.
    """
    d = p.datum
    parts: dict[str, np.ndarray] = {}
    joined = " ".join(tokens).replace(";", " ")
    for token in joined.split():
        if "=" not in token:
            raise UsageError(f"expected key=value in z specification, got {token!r}")
        key, value = token.split("=", 1)
        if key not in ("zeta", "theta"):
            raise UsageError(f"unknown z component {key!r}")
        if value == "0":
            parts[key] = np.zeros(d.ambient_dim)
            continue
        scale = 1.0
        if value.startswith("vq:"):
            if key != "zeta":
                raise UsageError("vq: shorthand only applies to zeta")
            t = float(value[3:])
            parts[key] = t * log_chi0_half_vector(p)
            continue
        if value.startswith("pi:"):
            scale = math.pi
            value = value[3:]
        coeffs = np.asarray([float(x) for x in value.split(",")])
        if coeffs.size != d.rank:
            raise UsageError(f"{key} needs {d.rank} root-basis coefficients")
        parts[key] = scale * (coeffs @ d.simple_np)
    zero = np.zeros(d.ambient_dim)
    return make_spectral_point(p, parts.get("zeta", zero), parts.get("theta", zero))


def _build(args) -> tuple[RootDatum, ThicknessParams]:
    datum = build_root_system(CartanType.parse(args.type))
    params = validate_thickness(datum, _parse_q(args.q, datum.rank))
    return datum, params


# --------------------------------------------------------------------------
# Output helpers
# --------------------------------------------------------------------------

def _write_text(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")


def _json_dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def emit_table(rows: list[dict], fmt: str, out: str | None, metadata: dict) -> None:
    """Write homogeneous rows as CSV (with #-metadata header) or a JSON array."""
    if fmt == "json":
        _write_text(_json_dump({"metadata": metadata, "rows": rows}), out)
        return
    lines = [f"# {key} = {metadata[key]}" for key in sorted(metadata)]
    if rows:
        header = list(rows[0].keys())
        lines.append(",".join(header))
        for row in rows:
            lines.append(",".join(_cell(row[k]) for k in header))
    else:
        lines.append("")
    _write_text("\n".join(lines), out)


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return " ".join(str(v) for v in value)
    return str(value)


# --------------------------------------------------------------------------
# Subcommand implementations
# --------------------------------------------------------------------------

def _cmd_info(args) -> int:
    datum, params = _build(args)
    payload = datum_summary(datum)
    payload["q"] = list(params.q_simple)
    payload["q_affine"] = params.q_affine
    payload["config"] = RunConfig("info", args.type, params.q_simple, args.seed).to_dict()
    _write_text(_json_dump(payload), args.out)
    return 0


def _cmd_macdonald(args) -> int:
    datum, params = _build(args)
    lam = Coweight(_parse_int_list(args.lam, datum.rank, "lambda"))
    if not lam.dominant:
        raise UsageError("lambda must be dominant (nonnegative coordinates)")
    point = _parse_z_tokens(args.z, params)
    value = macdonald_p(params, lam, point.z_np)
    coeffs = macdonald_coefficients(params, lam)
    payload = {
        "config": RunConfig(
            "macdonald", args.type, params.q_simple, args.seed,
            {"lambda": list(lam.coords)},
        ).to_dict(),
        "z": {"zeta": list(point.zeta), "theta": list(point.theta),
              "sigma_member": point.sigma_member, "family": point.family_tag},
        "value": {"re": value.real, "im": value.imag},
        "coefficients": [
            {"mu": list(mu.coords), "c": c} for mu, c in sorted(coeffs.items(), key=lambda kv: kv[0].coords)
        ],
    }
    _write_text(_json_dump(payload), args.out)
    return 0


def _cmd_nlambda(args) -> int:
    datum, params = _build(args)
    lam = Coweight(_parse_int_list(args.lam, datum.rank, "lambda"))
    if not lam.dominant:
        raise UsageError("lambda must be dominant (nonnegative coordinates)")
    value = n_lambda(params, lam)
    payload = {
        "config": RunConfig(
            "nlambda", args.type, params.q_simple, args.seed,
            {"lambda": list(lam.coords)},
        ).to_dict(),
        "n_lambda": str(value),
        "n_lambda_float": float(value),
        "chi0": str(chi0(params, lam)),
    }
    _write_text(_json_dump(payload), args.out)
    return 0


def _cmd_wave(args) -> int:
    datum, params = _build(args)
    if args.mode == "verify":
        envelope = c_envelope_report(params, args.height)
        times = [Coweight((k,) * datum.rank) for k in range(1, args.max_time + 1)]
        combined = combined_envelope_report(params, times)
        fit = decay_envelope(params, times)
        payload = {
            "config": RunConfig(
                "wave verify", args.type, params.q_simple, args.seed,
                {"height": args.height, "max_time": args.max_time},
            ).to_dict(),
            "coefficient_envelope": {
                "K": envelope["K"], "A_min": envelope["A_min"],
                "C_emp": envelope["C_emp"], "count": envelope["count"],
                "levels": {str(k): v for k, v in envelope["levels"].items()},
            },
            "combined_envelope": {
                "amplitude": combined["amplitude"], "rate": combined["rate"],
                "r_squared": combined["r_squared"],
            },
            "sup_decay": {
                "amplitude": fit.amplitude, "rate": fit.rate,
                "r_squared": fit.r_squared, "worst_ratio": fit.worst_ratio,
            },
        }
        _write_text(_json_dump(payload), args.out)
        return 0 if (fit.rate > 0 and combined["rate"] > 0) else 2
    if args.mu is None:
        raise UsageError("wave needs --mu")
    mu = Coweight(_parse_int_list(args.mu, datum.rank, "mu"))
    if not mu.dominant:
        raise UsageError("mu must be dominant")
    rows = [
        {"omega": list(om.coords), "u": val}
        for om, val in sorted(wave_radial(params, mu).values.items(), key=lambda kv: kv[0].coords)
    ]
    metadata = {
        "type": args.type, "q": ",".join(map(str, params.q_simple)),
        "seed": args.seed, "version": "wave-v1", "mu": ",".join(map(str, mu.coords)),
    }
    emit_table(rows, args.format, args.out, metadata)
    return 0


def _cmd_spectrum(args) -> int:
    datum, params = _build(args)
    points = sample_spectrum(params, args.resolution)
    rows = []
    for sp in points:
        rows.append({
            "family": sp.family_tag,
            "zeta": list(np.round(sp.zeta_np, 15)),
            "theta": list(np.round(sp.theta_np, 15)),
        })
    metadata = {
        "type": args.type, "q": ",".join(map(str, params.q_simple)),
        "seed": args.seed, "version": "spectrum-v1", "resolution": args.resolution,
    }
    emit_table(rows, args.format, args.out, metadata)
    return 0


def _spectral_point_dict(sp: SpectralPoint) -> dict:
    return {
        "zeta": list(sp.zeta), "theta": list(sp.theta),
        "sigma_member": sp.sigma_member, "family": sp.family_tag,
    }


def _report_dict(report) -> dict | None:
    if report is None:
        return None
    return {
        "min_K_on_sigma": report.min_K_on_sigma,
        "K_at_z0": report.K_at_z0,
        "sup_abs_k": report.sup_abs_k,
        "support_bound_ok": report.support_bound_ok,
        "support_bound_body": report.support_bound_body,
        "sampled_points": report.sampled_points,
        "max_coefficient": report.max_coefficient,
        "coefficient_count": report.coefficient_count,
        "radial_count": report.radial_count,
        "failures": list(report.failures),
    }


def _table_payload(cartan: str, seed: int, params: ThicknessParams, table: KernelTable) -> dict:
    spec = table.spec
    return {
        "schema": "kernel-v1",
        "config": RunConfig(
            "kernel build", cartan, params.q_simple, seed,
            {"M": spec.M, "N": spec.N},
        ).to_dict(),
        "spec": {
            "M": spec.M, "N": spec.N, "b": spec.b, "case": spec.case_tag,
            "B": spec.B, "b_prime": spec.b_prime, "h": spec.h,
            "z0": _spectral_point_dict(spec.z0),
        },
        "coefficients": [
            {"nu": list(nu.coords), "c": c}
            for nu, c in sorted(table.coefficients.items(), key=lambda kv: kv[0].coords)
        ],
        "radial": [
            {"omega": list(om.coords), "value": v}
            for om, v in sorted(table.radial.items(), key=lambda kv: kv[0].coords)
        ],
        "report": _report_dict(table.report),
    }


def _cmd_kernel_build(args) -> int:
    datum, params = _build(args)
    z0 = _parse_z_tokens(args.z0, params)
    if not z0.sigma_member:
        raise UsageError("z0 is not in the spectrum")
    th = case_thresholds(params, z0)
    m_used = max(args.M, th.M0)
    n_used = max(args.N, th.N0)
    table = kernel_radial(params, z0, m_used, n_used)
    samples = sample_spectrum(params, args.sigma_resolution)
    report = verify_theorem(params, table, samples)
    payload = _table_payload(args.type, args.seed, params, table)
    payload["thresholds"] = {"M0": th.M0, "N0": th.N0, "M_used": m_used, "N_used": n_used}
    _write_text(_json_dump(payload), args.out)
    return 0 if report.passed else 2


def _cmd_kernel_verify(args) -> int:
    path = Path(args.table)
    if not path.exists():
        raise UsageError(f"no such table file: {path}")
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed table file: {exc}") from exc
    if payload.get("schema") != "kernel-v1":
        raise UsageError("not a kernel-v1 table")
    cartan = payload["config"]["cartan_type"]
    qs = payload["config"]["q"]
    datum = build_root_system(CartanType.parse(cartan))
    params = validate_thickness(datum, qs)
    sp = payload["spec"]
    z0 = make_spectral_point(params, np.asarray(sp["z0"]["zeta"]), np.asarray(sp["z0"]["theta"]))
    spec = KernelSpec(
        z0=z0, M=sp["M"], N=sp["N"], b=sp["b"], case_tag=sp["case"],
        B=sp["B"], b_prime=sp["b_prime"], h=sp["h"],
    )
    table = KernelTable(
        spec=spec,
        coefficients={Coweight(tuple(row["nu"])): row["c"] for row in payload["coefficients"]},
        radial={Coweight(tuple(row["omega"])): row["value"] for row in payload["radial"]},
    )
    mismatches = []
    fresh = kernel_coefficients(params, spec.M, spec.b)
    if set(fresh) != set(table.coefficients) or any(
        abs(fresh[nu] - table.coefficients[nu]) > tol.EQ_TOL for nu in fresh
    ):
        mismatches.append("stored coefficients disagree with reconstruction")
    samples = sample_spectrum(params, args.sigma_resolution)
    report = verify_theorem(params, table, samples)
    result = {
        "table": str(path),
        "mismatches": mismatches,
        "report": _report_dict(report),
    }
    _write_text(_json_dump(result), args.out)
    return 0 if (report.passed and not mismatches) else 2


def _cmd_plancherel(args) -> int:
    datum, params = _build(args)
    grid = get_grid(datum, args.K)
    rows = []

    def record(name: str, value: float, expected: float):
        rows.append({
            "check": name, "value": value, "expected": expected,
            "residual": abs(value - expected),
        })

    p0 = spherical_samples(params, Coweight((0,) * datum.rank), grid)
    record("constant_mass", float(plancherel_integral(params, np.abs(p0) ** 2, args.K).value.real), 1.0)
    lam = Coweight((1,) + (0,) * (datum.rank - 1))
    star_lam = Coweight(tuple(-c for c in datum.act_coweight(datum.w0, lam).coords))
    s_lam = spherical_samples(params, lam, grid)
    s_star = spherical_samples(params, star_lam, grid)
    record(
        "pair_with_contragredient",
        float(plancherel_integral(params, s_lam * s_star, args.K).value.real),
        float(1 / n_lambda(params, lam)),
    )
    if star_lam != lam:
        record(
            "pair_without_conjugation",
            float(abs(plancherel_integral(params, s_lam * s_lam, args.K).value)),
            0.0,
        )
    mu = Coweight((2,) + (0,) * (datum.rank - 1))
    omega = Coweight((1,) + (0,) * (datum.rank - 1))
    record("inversion_residual", inversion_check(params, mu, omega, args.K), 0.0)
    metadata = {
        "type": args.type, "q": ",".join(map(str, params.q_simple)),
        "seed": args.seed, "version": "plancherel-v1", "K": args.K,
    }
    emit_table(rows, args.format, args.out, metadata)
    worst = max(row["residual"] for row in rows)
    return 0 if worst <= tol.PLANCHEREL_TOL else 2


# --------------------------------------------------------------------------
# Argument parser
# --------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's default 2
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(sp, with_format: bool = False):
    sp.add_argument("--type", required=True, help="Cartan type, e.g. A2")
    sp.add_argument("--q", default="2", help="thickness: one value or per simple root")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", "-o", default=None, help="output path (default stdout)")
    if with_format:
        sp.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="buildingwave")
    sub = parser.add_subparsers(dest="command", required=True)

    _add_common(sub.add_parser("info", help="root system summary (rootsys-v1 JSON)"))

    mac = sub.add_parser("macdonald", help="spherical value and monomial coefficients")
    _add_common(mac)
    mac.add_argument("--lambda", dest="lam", required=True, help="dominant coweight coords")
    mac.add_argument("--z", nargs="+", default=["zeta=0", "theta=0"],
                     help="spectral point, e.g. zeta=vq:0.5 theta=pi:1,0")

    nl = sub.add_parser("nlambda", help="sphere cardinality at a vectorial radius")
    _add_common(nl)
    nl.add_argument("--lambda", dest="lam", required=True)

    wv = sub.add_parser("wave", help="radial wave slice, or `wave verify` for envelopes")
    wv.add_argument("mode", nargs="?", choices=("verify",), default=None)
    _add_common(wv, with_format=True)
    wv.add_argument("--mu", default=None, help="dominant time coordinate")
    wv.add_argument("--height", type=int, default=12, help="verify: max coroot height")
    wv.add_argument("--max-time", type=int, default=6, help="verify: envelope times k*rho")

    spc = sub.add_parser("spectrum", help="spectrum sampling")
    spc_sub = spc.add_subparsers(dest="mode", required=True)
    smp = spc_sub.add_parser("sample")
    _add_common(smp, with_format=True)
    smp.add_argument("--resolution", type=int, default=8)

    ker = sub.add_parser("kernel", help="kernel construction and verification")
    ker_sub = ker.add_subparsers(dest="mode", required=True)
    kb = ker_sub.add_parser("build")
    _add_common(kb)
    kb.add_argument("--z0", nargs="+", required=True, help="target point, key=value tokens")
    kb.add_argument("--M", type=int, required=True)
    kb.add_argument("--N", type=int, required=True)
    kb.add_argument("--sigma-resolution", type=int, default=12)
    kv = ker_sub.add_parser("verify")
    kv.add_argument("table", help="kernel-v1 JSON file")
    kv.add_argument("--sigma-resolution", type=int, default=12)
    kv.add_argument("--out", "-o", default=None)

    pl = sub.add_parser("plancherel", help="inversion-formula residual checks")
    pl_sub = pl.add_subparsers(dest="mode", required=True)
    pc = pl_sub.add_parser("check")
    _add_common(pc, with_format=True)
    pc.add_argument("--K", type=int, default=64)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "info":
            return _cmd_info(args)
        if args.command == "macdonald":
            return _cmd_macdonald(args)
        if args.command == "nlambda":
            return _cmd_nlambda(args)
        if args.command == "wave":
            return _cmd_wave(args)
        if args.command == "spectrum":
            return _cmd_spectrum(args)
        if args.command == "kernel":
            if args.mode == "build":
                return _cmd_kernel_build(args)
            return _cmd_kernel_verify(args)
        if args.command == "plancherel":
            return _cmd_plancherel(args)
        raise UsageError(f"unknown command {args.command!r}")
    except (UsageError, RootSystemError, ThicknessError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
