"""Batch command line front end.

Subcommands:

* ``shear constants --g G --n N [--rho-prime X]``: every named constant
  plus the self-audit, as JSON.  Exit 2 if the audit fails.
* ``shear compute SURFACE.json``: full pipeline on one surface file.
  Exit 1 on a parse error, 3 on a geometry-invariant failure.
* ``shear sample --g G --n N --count K --seed S``: seeded sampling
  campaign; exit 5 if any certified sample violates the shear bound.
* ``shear optimize SURFACE.json --budget B --seed S``: flip search on a
  cusped chain surface (genus 0, up to five punctures); exit 4 for
  surfaces without a supported start triangulation.

Reports are byte-deterministic for a fixed configuration; timings are
written to stderr only.  SHEARLAB_TOL overrides the relation-residual
tolerance (audit tolerances are fixed).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

from . import chains, cusped, report
from .constants import Signature, area
from .geom import GeometryError
from .surface import holonomy_from_fn


def _write(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _signature(args) -> Signature:
    try:
        return Signature(args.g, args.n)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        raise SystemExit(1)


def cmd_constants(args) -> int:
    sig = _signature(args)
    data = report.constants_report(sig, rho_prime=args.rho_prime)
    config = {"command": "constants", "g": sig.g, "n": sig.n,
              "rho_prime": data["rho_prime"]}
    out = report.assemble(config, [data], {"audit_ok": data["audit"]["ok"]})
    _write(report.to_json(out), args.out)
    return 0 if data["audit"]["ok"] else 2


def cmd_compute(args) -> int:
    try:
        with open(args.surface) as fh:
            data = json.load(fh)
        sig, pg, fn = report.parse_surface(data)
    except (OSError, ValueError, KeyError, TypeError) as err:
        print(f"error: cannot parse surface file: {err}", file=sys.stderr)
        return 1
    t0 = time.perf_counter()
    try:
        record = report.run_surface(sig, pg, fn)
    except (GeometryError, ValueError) as err:
        print(f"error: geometry invariant failure: {err}", file=sys.stderr)
        return 3
    elapsed = time.perf_counter() - t0
    config = {"command": "compute", "g": sig.g, "n": sig.n,
              "surface": args.surface}
    out = report.assemble(config, [record],
                          {"certified": record["certified"],
                           "bound_satisfied": record["bound_satisfied"]})
    _write(report.to_json(out), args.out)
    print(f"computed in {elapsed:.3f}s", file=sys.stderr)
    return 0


def cmd_sample(args) -> int:
    sig = _signature(args)
    length_range = None
    if args.length_min is not None or args.length_max is not None:
        lo = args.length_min if args.length_min is not None else 0.05
        hi = (args.length_max if args.length_max is not None
              else 2.0 * math.log(4.0 * area(sig)))
        length_range = (lo, hi)
    t0 = time.perf_counter()
    records, summary = report.run_sample_campaign(
        sig, args.seed, args.count, length_range=length_range,
        twist_range=(0.0, args.twist_max))
    elapsed = time.perf_counter() - t0
    config = {"command": "sample", "g": sig.g, "n": sig.n,
              "seed": args.seed, "count": args.count,
              "length_range": list(length_range) if length_range else None,
              "twist_max": args.twist_max, "format": args.format}
    out = report.assemble(config, records, summary)
    if args.format == "csv":
        _write(report.sample_rows(out), args.out)
    else:
        _write(report.to_json(out), args.out)
    print(f"{args.count} samples in {elapsed:.3f}s", file=sys.stderr)
    return 5 if summary["bound_violations_certified"] else 0


def cmd_optimize(args) -> int:
    try:
        with open(args.surface) as fh:
            data = json.load(fh)
        sig, pg, fn = report.parse_surface(data)
    except (OSError, ValueError, KeyError, TypeError) as err:
        print(f"error: cannot parse surface file: {err}", file=sys.stderr)
        return 1
    try:
        hol = holonomy_from_fn(pg, fn)
        cx, sigma, _ = chains.build_cusped_chain(hol)
    except (chains.ChainError, GeometryError, ValueError) as err:
        print(f"error: spiralling triangulation not flip-searchable: {err}",
              file=sys.stderr)
        return 4
    start = cusped.max_abs_shear(sigma)
    _, best_sigma, best_val, trail = cusped.minimax_flip_search(
        cx, sigma, args.budget, args.seed)
    config = {"command": "optimize", "g": sig.g, "n": sig.n,
              "surface": args.surface, "budget": args.budget,
              "seed": args.seed}
    record = {
        "start_max_shear": start,
        "best_max_shear": best_val,
        "flips": [list(e) for e in trail],
        "shears": {str(k): v for k, v in sorted(best_sigma.items())},
    }
    out = report.assemble(config, [record],
                          {"improved": best_val < start - 1e-12,
                           "best_max_shear": best_val})
    _write(report.to_json(out), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shear",
        description="Shear coordinates of ideal triangulations on "
                    "hyperbolic surfaces")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_sig(p):
        p.add_argument("--g", type=int, required=True, help="genus")
        p.add_argument("--n", type=int, required=True, help="punctures")

    p = sub.add_parser("constants", help="named constants and self-audit")
    add_sig(p)
    p.add_argument("--rho-prime", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("compute", help="full pipeline on a surface file")
    p.add_argument("surface")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sample", help="seeded sampling campaign")
    add_sig(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--length-min", type=float, default=None)
    p.add_argument("--length-max", type=float, default=None)
    p.add_argument("--twist-max", type=float, default=1.0,
                   help="twists are uniform in [0, twist_max) * length")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("optimize", help="minimax flip search")
    p.add_argument("surface")
    p.add_argument("--budget", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_optimize)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
