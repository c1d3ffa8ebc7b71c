"""Hexagon decompositions of pants-glued surfaces.

Cutting each pair of pants along its three seams (the mutual
perpendiculars between boundary components) decomposes the surface into
two right-angled hexagons per pants; the decomposition data is the pants
curves, the seams as orthogeodesic arcs, and the hexagon faces.  Arcs
with a cusp endpoint are infinite; their truncated lengths are measured
after removing standard cusp neighborhoods and thin collars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import geom
from .constants import INTERMEDIATE_CURVE_MAX, Signature, area, collar_width
from .geom import INF, Geodesic, Isometry, mobius_two_point
from .pants import StdPants
from .surface import Holonomy


@dataclass(frozen=True)
class ArcEndpoint:
    kind: str            # "on-curve" | "at-cusp"
    curve: object = None
    side: str = None     # "left" | "right" relative to the curve orientation
    cusp: object = None
    slot_ref: tuple = None


@dataclass(frozen=True)
class OrthoArc:
    ident: tuple         # (pants index, seam index)
    endpoints: tuple
    length: float        # math.inf when an endpoint is a cusp
    word: tuple          # curve class of the doubled loop around the arc


@dataclass
class HexagonDecomposition:
    hol: Holonomy
    curves: dict         # curve id -> length
    orientations: dict   # curve id -> canonical orientation data
    arcs: list
    faces: list          # alternating (kind, ref) cycles, 2 per pants

    def arc(self, ident) -> OrthoArc:
        return self._index[ident]

    def __post_init__(self):
        self._index = {a.ident: a for a in self.arcs}


def _seam_slots(k: int):
    return tuple(sorted(m for m in range(3) if m != k))


def curve_orientation_data(hol: Holonomy, cid) -> dict:
    """Canonical orientation of a curve and the side its primary pants is on."""
    (p, s) = hol.curve_primary[cid]
    sp = hol.std[p]
    att, rep = geom.fixed_points(sp.slot_hol[s])
    side = geom.side_of_point(Geodesic(rep, att), sp.slot_probe[s])
    return {"primary": (p, s), "primary_side": side}


def _endpoint(hol: Holonomy, p: int, s: int, orientations) -> ArcEndpoint:
    kind, ident = hol.graph.pants[p][s]
    if kind == "cusp":
        return ArcEndpoint(kind="at-cusp", cusp=ident, slot_ref=(p, s))
    data = orientations[ident]
    if (p, s) == data["primary"]:
        side = data["primary_side"]
    else:
        side = "left" if data["primary_side"] == "right" else "right"
    return ArcEndpoint(kind="on-curve", curve=ident, side=side, slot_ref=(p, s))


def seam_decomposition(hol: Holonomy) -> HexagonDecomposition:
    pg = hol.graph
    orientations = {cid: curve_orientation_data(hol, cid)
                    for cid in pg.curve_ids()}
    curves = {cid: hol.fn.length(cid) for cid in pg.curve_ids()}

    arcs = []
    faces = []
    for p in range(pg.num_pants):
        sp = hol.std[p]
        for k in range(3):
            i, j = _seam_slots(k)
            e1 = _endpoint(hol, p, i, orientations)
            e2 = _endpoint(hol, p, j, orientations)
            if e1.kind == "at-cusp" or e2.kind == "at-cusp":
                length = math.inf
            else:
                feet = dict(sp.seam_feet[k])
                length = geom.dist(feet[i], feet[j])
            word = ((f"bnd:{p}:{i}", 1), (f"bnd:{p}:{j}", 1))
            arcs.append(OrthoArc(ident=(p, k), endpoints=(e1, e2),
                                 length=length, word=word))
        # hexagon boundary cycle: slot side, seam, slot side, seam, ...
        for face_side in ("front", "back"):
            cycle = []
            for s, k in ((0, 2), (1, 0), (2, 1)):
                kind, ident = pg.pants[p][s]
                if kind == "cusp":
                    cycle.append(("ideal", ident))
                else:
                    cycle.append(("seg", (p, s)))
                cycle.append(("arc", (p, k)))
            faces.append((face_side, p, tuple(cycle)))

    hd = HexagonDecomposition(hol=hol, curves=curves,
                              orientations=orientations, arcs=arcs,
                              faces=faces)
    _check_decomposition(hd)
    return hd


def _check_decomposition(hd: HexagonDecomposition):
    pg = hd.hol.graph
    m = pg.num_pants
    if len(hd.faces) != 2 * m:
        raise ValueError("hexagon decomposition must have 2 faces per pants")
    if len(hd.arcs) != 3 * m:
        raise ValueError("hexagon decomposition must have 3 arcs per pants")
    borders = {}
    for face in hd.faces:
        for kind, ref in face[2]:
            if kind == "arc":
                borders[ref] = borders.get(ref, 0) + 1
    if any(count != 2 for count in borders.values()):
        raise ValueError("every arc must border exactly two hexagons")


@dataclass(frozen=True)
class GammaA:
    """The closed loop doubling an arc along its endpoint curves."""

    word: tuple
    kind: str            # "hyperbolic" | "parabolic"
    length: float = None


def gamma_a(hd: HexagonDecomposition, arc: OrthoArc) -> GammaA:
    f = hd.hol.evaluate_class(list(arc.word))
    kind = geom.classify(f)
    if kind == "hyperbolic":
        return GammaA(word=arc.word, kind=kind,
                      length=geom.translation_length(f))
    if kind == "parabolic":
        return GammaA(word=arc.word, kind=kind)
    raise geom.GeometryError(f"doubled arc loop is {kind}")


# ---------------------------------------------------------------------------
# truncation of arcs at thin parts


def _cusp_height(sp: StdPants, slot: int, boundary_length: float = 2.0):
    """Horoball at the slot's cusp bounded by a horocycle of given length.

    Returned as (normalizer to the point at infinity, height): the ball is
    y >= height in the normalized frame.
    """
    q = sp.slot_point[slot]
    if q == INF:
        m = Isometry.identity()
    else:
        m = Isometry.from_matrix(0.0, -1.0, 1.0, -q)
    g = m @ sp.slot_hol[slot] @ m.inverse()
    shift = abs(g.a * g.b)
    return m, shift / boundary_length


def _seam_coordinate(seam: Geodesic):
    """Arclength coordinate along the seam: t(z) = log Im(M z)."""
    m = mobius_two_point(seam.p, seam.q)

    def coord(z: complex) -> float:
        return math.log(m(z).imag)

    return m, coord


def _horoball_interval(seam: Geodesic, coord, m_cusp: Isometry, height: float):
    """t-interval where the seam runs inside the horoball, or None."""
    a = m_cusp.apply_boundary(seam.p)
    b = m_cusp.apply_boundary(seam.q)
    if a == INF or b == INF:
        # the seam ends in this cusp: vertical line x = const in cusp frame.
        # The seam coordinate runs to -inf at seam.p and +inf at seam.q.
        x0 = b if a == INF else a
        entry = m_cusp.inverse()(complex(x0, height))
        t0 = coord(entry)
        return (-math.inf, t0) if a == INF else (t0, math.inf)
    r = abs(b - a) / 2.0
    if r <= height:
        return None
    c0 = (a + b) / 2.0
    spread = math.acosh(r / height)
    inv = m_cusp.inverse()
    top = coord(inv(complex(c0, r)))
    return (top - spread, top + spread)


def _collar_interval(seam: Geodesic, coord, axis: Geodesic, width: float):
    """t-interval where the seam runs inside the collar, or None."""
    try:
        cross = geom.geodesic_intersection(seam, axis)
    except geom.GeometryError:
        cross = None
    if cross is not None:
        # perpendicular crossing: distance grows as |t - t_cross|
        t0 = coord(cross)
        return (t0 - width, t0 + width)
    d_min = geom.dist_between_geodesics(seam, axis)
    if d_min >= width or d_min == 0.0:
        return None
    perp = geom.common_perpendicular(seam, axis)
    foot = geom.geodesic_intersection(seam, perp)
    t0 = coord(foot)
    spread = math.acosh(math.sinh(width) / math.sinh(d_min))
    return (t0 - spread, t0 + spread)


@dataclass
class Truncation:
    arc: tuple
    full_length: float
    truncated_length: float
    removed: list            # (slot, lo, hi) intervals in seam coordinates
    overlap_diagnostic: bool
    clamped: bool


def truncate_arc(hd: HexagonDecomposition, arc: OrthoArc,
                 collar_max: float = INTERMEDIATE_CURVE_MAX) -> Truncation:
    """Length of the arc outside cusp neighborhoods and thin collars.

    Removes, along the developed seam, the standard cusp neighborhoods
    (boundary length 2) and the collars of width w(l) around boundary
    curves of length at most 2 arcsinh(1).  All three slots of the pants
    are scanned, so a thin third boundary crossing the arc's interior is
    removed as well.  Disjointness of the removed regions is checked and
    reported; negative leftovers are clamped to zero with a diagnostic.
    """
    p, k = arc.ident
    sp = hd.hol.std[p]
    seam = sp.seams[k]
    _, coord = _seam_coordinate(seam)
    i, j = _seam_slots(k)

    # the arc segment in seam coordinates
    bounds = []
    feet = dict(sp.seam_feet[k])
    for s in (i, j):
        if sp.slot_is_cusp[s]:
            # seam escapes to the cusp: the segment is infinite on this side
            endpoint = feet[s]
            m = mobius_two_point(seam.p, seam.q)
            bounds.append(math.inf if m.apply_boundary(endpoint) == INF
                          else -math.inf)
        else:
            bounds.append(coord(feet[s]))
    lo, hi = sorted(bounds)

    removed = []
    for s in range(3):
        if sp.slot_is_cusp[s]:
            m_cusp, height = _cusp_height(sp, s)
            interval = _horoball_interval(seam, coord, m_cusp, height)
        else:
            length = sp.lengths[s]
            if length > collar_max:
                continue
            interval = _collar_interval(seam, coord, sp.slot_axis[s],
                                        collar_width(length))
        if interval is None:
            continue
        a, b = max(interval[0], lo), min(interval[1], hi)
        if a < b:
            removed.append((s, a, b))

    removed.sort(key=lambda r: r[1])
    overlap = any(r1[2] > r2[1] + 1e-12 for r1, r2 in zip(removed, removed[1:]))
    # measure the complement of the removed set within [lo, hi]; the cusp
    # horoballs cover the infinite ends, so the leftover is finite
    left = 0.0
    clamped = False
    cursor = lo
    for _, a, b in removed:
        if a > cursor:
            left += a - cursor
        cursor = max(cursor, b)
    if hi > cursor:
        left += hi - cursor
    if not math.isfinite(left):
        raise geom.GeometryError(
            f"truncation of arc {arc.ident} left an unbounded segment")
    if left < 0.0:
        left = 0.0
        clamped = True
    return Truncation(arc=arc.ident, full_length=hi - lo,
                      truncated_length=left, removed=removed,
                      overlap_diagnostic=overlap, clamped=clamped)


# ---------------------------------------------------------------------------
# certification of the shortness bounds


@dataclass
class ShortnessRow:
    name: str
    value: float
    bound: float
    passed: bool


@dataclass
class ShortnessReport:
    rows: list
    skipped: list

    @property
    def certified(self) -> bool:
        return all(r.passed for r in self.rows)

    def as_dict(self):
        return {
            "certified": self.certified,
            "rows": [{"name": r.name, "value": r.value, "bound": r.bound,
                      "passed": r.passed} for r in self.rows],
            "skipped": list(self.skipped),
        }


def certify_short(hd: HexagonDecomposition, sig: Signature) -> ShortnessReport:
    """Check the curve, doubled-loop and truncated-arc length bounds."""
    log4a = math.log(4.0 * area(sig))
    rows = []
    skipped = []
    for cid, length in sorted(hd.curves.items()):
        rows.append(ShortnessRow(f"curve {cid} length <= 2 log(4 area)",
                                 length, 2.0 * log4a, length <= 2.0 * log4a))
    for arc in hd.arcs:
        kinds = [e.kind for e in arc.endpoints]
        if all(k == "on-curve" for k in kinds):
            g = gamma_a(hd, arc)
            if g.kind == "parabolic":
                skipped.append(f"arc {arc.ident}: doubled loop is parabolic")
            else:
                rows.append(ShortnessRow(
                    f"arc {arc.ident} doubled loop <= 8 log(4 area)",
                    g.length, 8.0 * log4a, g.length <= 8.0 * log4a))
            # per-regime bound on the raw arc length
            lens = [hd.curves[e.curve] for e in arc.endpoints]
            slack = sum(collar_width(l) for l in lens
                        if l <= INTERMEDIATE_CURVE_MAX)
            rows.append(ShortnessRow(
                f"arc {arc.ident} length <= 6 log(4 area) + collar widths",
                arc.length, 6.0 * log4a + slack,
                arc.length <= 6.0 * log4a + slack))
        trunc = truncate_arc(hd, arc)
        rows.append(ShortnessRow(
            f"arc {arc.ident} truncated length <= 6 log(4 area)",
            trunc.truncated_length, 6.0 * log4a,
            trunc.truncated_length <= 6.0 * log4a))
    return ShortnessReport(rows=rows, skipped=skipped)
