"""End-to-end pipeline runs and machine-readable reports.

A single surface run goes: pants graph + Fenchel-Nielsen data -> holonomy
-> seam decomposition -> spiralling triangulation -> developed shears ->
relation residuals, shortness certification, and the shear-point audit.
Reports are deterministic: records are assembled in sample order and
contain no wall-clock data (timings go to a side channel).
"""

from __future__ import annotations

import hashlib
import json
import os

from . import decomposition, spiralling
from .constants import (Signature, constants_audit, main_bound,
                        shear_free_params, topology_constants)
from .surface import (FNCoordinates, PantsGraph, holonomy_from_fn,
                      sample_fn, sample_seed)

SCHEMA = "shearlab-report/1"

CSV_HEADER = ("sample,gn,seed,certified,max_shear,bound,ratio,"
              "cusp_residual,spiral_residual,min_margin")


def relation_tolerance() -> float:
    """The residual tolerance, overridable through SHEARLAB_TOL."""
    raw = os.environ.get("SHEARLAB_TOL")
    return float(raw) if raw else spiralling.RELATION_TOL


def parse_surface(data: dict):
    """Surface file schema: signature, pants slot table, fn coordinates.

    {"signature": {"g": g, "n": n},
     "pants": [{"slots": [{"curve": id} | {"cusp": id}, x3]}, ...],
     "fn": [{"curve": id, "length": l, "twist": t}, ...]}
    """
    sig = Signature(int(data["signature"]["g"]), int(data["signature"]["n"]))
    pants = []
    for entry in data["pants"]:
        slots = []
        for slot in entry["slots"]:
            if "curve" in slot:
                slots.append(("curve", slot["curve"]))
            elif "cusp" in slot:
                slots.append(("cusp", slot["cusp"]))
            else:
                raise ValueError("slot must name a curve or a cusp")
        if len(slots) != 3:
            raise ValueError("each pants needs exactly three slots")
        pants.append(tuple(slots))
    pg = PantsGraph(tuple(pants))
    lengths = {}
    twists = {}
    for row in data.get("fn", []):
        lengths[row["curve"]] = float(row["length"])
        twists[row["curve"]] = float(row.get("twist", 0.0))
    fn = FNCoordinates(lengths, twists)
    return sig, pg, fn


def run_surface(sig: Signature, pg: PantsGraph, fn: FNCoordinates,
                params=None, tol=None) -> dict:
    """Full pipeline on one surface; returns the per-surface record."""
    params = params or shear_free_params()
    tol = tol if tol is not None else relation_tolerance()
    hol = holonomy_from_fn(pg, fn)
    hd = decomposition.seam_decomposition(hol)
    st = spiralling.spiral(hd)
    dc = spiralling.develop(hol, st)
    sv = spiralling.shear_vector(dc)
    relations = spiralling.shear_relations(sv, hd)
    shortness = decomposition.certify_short(hd, sig)
    audit = spiralling.shear_point_free_audit(dc, params)
    bound = main_bound(sig)
    max_shear = sv.max_abs()
    record = {
        "fn": {
            "lengths": {str(k): v for k, v in sorted(fn.lengths.items())},
            "twists": {str(k): v for k, v in sorted(fn.twists.items())},
        },
        "shears": {str(k): v for k, v in sorted(sv.values.items())},
        "max_shear": max_shear,
        "bound": bound,
        "ratio": max_shear / bound,
        "certified": shortness.certified,
        "cusp_residual": relations.max_cusp_residual,
        "spiral_residual": relations.max_side_residual,
        "relations_ok": relations.ok(tol),
        "min_margin": audit.min_margin if audit.rows else None,
        "bound_satisfied": max_shear < bound,
    }
    return record


def config_hash(config: dict) -> str:
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def assemble(config: dict, records: list, summary: dict) -> dict:
    from . import __version__
    config = dict(config)
    config["version"] = __version__
    config["hash"] = config_hash(
        {k: v for k, v in config.items() if k != "hash"})
    records = [dict(rec, config_hash=config["hash"], version=__version__)
               for rec in records]
    return {"schema": SCHEMA, "config": config, "records": records,
            "summary": summary}


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def sample_rows(report: dict):
    """Flatten a sampling report into the fixed CSV columns.

    The gn field contains a comma, so it is quoted per CSV convention.
    """
    rows = [CSV_HEADER]
    cfg = report["config"]
    gn = f"\"({cfg['g']},{cfg['n']})\""
    for i, rec in enumerate(report["records"]):
        if rec.get("error"):
            rows.append(f"{i},{gn},{rec['seed']},error,,,,,,")
            continue
        rows.append(
            f"{i},{gn},{rec['seed']},{str(rec['certified']).lower()},"
            f"{rec['max_shear']:.12g},{rec['bound']:.12g},"
            f"{rec['ratio']:.12g},{rec['cusp_residual']:.6g},"
            f"{rec['spiral_residual']:.6g},"
            f"{'' if rec['min_margin'] is None else format(rec['min_margin'], '.6g')}"
        )
    return "\n".join(rows) + "\n"


def run_sample_campaign(sig: Signature, seed: int, count: int,
                        length_range=None, twist_range=(0.0, 1.0),
                        params=None, tol=None):
    """Seeded sampling campaign; per-sample failures are recorded."""
    records = []
    for i in range(count):
        sub = sample_seed(seed, i)
        rec = {"seed": sub}
        try:
            pg, fn = sample_fn(sig, sub, length_range=length_range,
                               twist_range=twist_range)
            rec.update(run_surface(sig, pg, fn, params=params, tol=tol))
        except Exception as err:   # recorded, campaign continues
            rec["error"] = f"{type(err).__name__}: {err}"
        records.append(rec)
    good = [r for r in records if not r.get("error")]
    certified = [r for r in good if r["certified"]]
    summary = {
        "samples": count,
        "failures": len(records) - len(good),
        "certified": len(certified),
        "max_ratio_certified": max((r["ratio"] for r in certified),
                                   default=None),
        "max_ratio_uncertified": max((r["ratio"] for r in good
                                      if not r["certified"]), default=None),
        "bound_violations_certified": sum(1 for r in certified
                                          if not r["bound_satisfied"]),
        "worst_cusp_residual": max((r["cusp_residual"] for r in good),
                                   default=None),
        "worst_spiral_residual": max((r["spiral_residual"] for r in good),
                                     default=None),
        "min_margin": min((r["min_margin"] for r in good
                           if r["min_margin"] is not None), default=None),
    }
    return records, summary


def constants_report(sig: Signature, rho_prime=None) -> dict:
    params = shear_free_params(rho_prime) if rho_prime else shear_free_params()
    tc = topology_constants(sig, params)
    audit = constants_audit(params)
    return {
        "signature": {"g": sig.g, "n": sig.n},
        "rho": params.rho,
        "rho_prime": params.rho_prime,
        "delta1": tc.delta1,
        "delta2": params.delta2,
        "delta3": params.delta3,
        "area": tc.area,
        "loop_bound": tc.R,
        "spike_distance_bound": tc.D,
        "main_bound": tc.B,
        "spike_constants": {f"{a}/{b}": v
                            for (a, b), v in sorted(tc.C_table.items())},
        "audit": audit.as_dict(),
    }
