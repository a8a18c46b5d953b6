#!/usr/bin/env python3
"""Wave decay and coefficient-envelope report across small root systems.

Fits the radial sup norm of the wave solution against the time size, checks
the reference-rate bound on the reciprocal-c coefficients, and prints one
row per configuration.

Example:
    python scripts/decay_report.py --max-time 8 --height 12
"""

from __future__ import annotations

import argparse

from buildingwave.rootsys import Coweight, build_root_system, CartanType
from buildingwave.spherical import validate_thickness
from buildingwave.wave import c_envelope_report, combined_envelope_report, decay_envelope

CONFIGS = [
    ("A1", (2,)),
    ("A1", (3,)),
    ("A2", (2, 2)),
    ("B2", (2, 3)),
    ("C2", (2, 2)),
    ("C2", (2, 3)),
    ("G2", (2, 2)),
]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-time", type=int, default=8)
    ap.add_argument("--height", type=int, default=12)
    args = ap.parse_args()

    header = f"{'type':6s} {'q':8s} {'rate':>8s} {'r2':>7s} {'worst':>8s} {'C_emp':>8s} {'comb_rate':>10s}"
    print(header)
    print("-" * len(header))
    ok = True
    for name, qs in CONFIGS:
        datum = build_root_system(CartanType.parse(name))
        params = validate_thickness(datum, list(qs))
        times = [Coweight((k,) * datum.rank) for k in range(1, args.max_time + 1)]
        fit = decay_envelope(params, times)
        env = c_envelope_report(params, args.height)
        comb = combined_envelope_report(params, times[: min(6, len(times))])
        ok = ok and fit.rate > 0 and comb["rate"] > 0
        print(
            f"{name:6s} {','.join(map(str, qs)):8s} {fit.rate:8.4f} {fit.r_squared:7.4f} "
            f"{fit.worst_ratio:8.4f} {env['C_emp']:8.4f} {comb['rate']:10.4f}"
        )
    return 0 if ok else 2


if __name__ == "__main__":
    raise SystemExit(main())
