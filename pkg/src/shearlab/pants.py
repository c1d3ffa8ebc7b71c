"""A hyperbolic pair of pants in standard position.

A pair of pants with boundary half-lengths (a1, a2, a3), where a cusp is
encoded by half-length zero, is realized through its three seam geodesics
(the mutual perpendiculars between boundary components, extended to
complete geodesics).  Seam k joins the two boundary slots other than k,
and the two seams adjacent to slot i meet the boundary-i geodesic
perpendicularly at distance a_i apart; when a_i = 0 they share an ideal
endpoint instead.

Standard position places seam 3 on the imaginary axis and seam 2 on the
circle with feet derived from tanh^2(a1/2); seam 1 is solved for from the
two remaining distance constraints.  The boundary holonomies are the
products of reflections in adjacent seams, so the pants group relation
X1 X2 X3 = 1 holds by construction, cusps degenerating to parabolics
without any special casing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from . import geom
from .geom import (
    INF,
    Geodesic,
    GeometryError,
    Isometry,
    common_perpendicular,
    compose_reflections,
    dist_between_geodesics,
    geodesic_intersection,
    geodesic_reflection,
    mobius_two_point,
)

_CONSTRUCTION_TOL = 1e-9


def seam_lengths(l1: float, l2: float, l3: float):
    """Seam lengths of a pants with boundary lengths l1, l2, l3 (0 = cusp).

    Returns (a1, a2, a3) where a_k joins the boundaries other than k;
    a seam with a cusp endpoint is infinite and returned as math.inf.
    cosh(a_k) = (cosh(li/2) cosh(lj/2) + cosh(lk/2)) / (sinh(li/2) sinh(lj/2)).
    """
    ls = (l1, l2, l3)
    if any(l < 0 for l in ls):
        raise ValueError("boundary lengths must be nonnegative")
    half = [l / 2.0 for l in ls]
    out = []
    for k in range(3):
        i, j = [m for m in range(3) if m != k]
        if half[i] == 0.0 or half[j] == 0.0:
            out.append(math.inf)
            continue
        num = math.cosh(half[i]) * math.cosh(half[j]) + math.cosh(half[k])
        den = math.sinh(half[i]) * math.sinh(half[j])
        out.append(math.acosh(num / den))
    return tuple(out)


def _solve_third_seam(p: float, t2: float, t3: float):
    """Endpoints (u, v) of seam 1 given seam 3 = (0, inf), seam 2 = (p, 1)."""
    if t2 == 0.0:
        if t3 == 0.0:
            return 1.0, INF
        return (1.0 - p * t3) / (1.0 - t3), INF
    if t3 == 0.0:
        return 1.0, 1.0 / t2
    a = t2
    b = (1.0 + p * t2 - t3 * (t2 + p)) / (t3 - 1.0)
    c = p
    disc = b * b - 4.0 * a * c
    if disc <= 0:
        raise GeometryError("pants construction failed: no real seam position")
    v = (-b + math.sqrt(disc)) / (2.0 * a)
    return t2 * v, v


def _point_along(g: Geodesic, start: complex, toward, distance: float) -> complex:
    """Point on g at the given distance from start, moving toward an endpoint."""
    m = mobius_two_point(g.p, g.q) if toward == g.q else mobius_two_point(g.q, g.p)
    w = m(start)
    return m.inverse()(complex(0.0, w.imag * math.exp(distance)))


@dataclass(frozen=True)
class StdPants:
    """Immutable standard-position data for one pair of pants."""

    lengths: tuple            # boundary lengths (0.0 encodes a cusp)
    seams: tuple              # three Geodesics; seams[k] joins slots != k
    slot_is_cusp: tuple
    slot_axis: tuple          # Geodesic or None per slot
    slot_point: tuple         # ideal point (cusp slots) or None
    slot_hol: tuple           # boundary holonomy per slot (X1, X2, X3)
    slot_marker: tuple        # complex or None: gluing reference point
    slot_probe: tuple         # complex or None: interior sample near the axis
    seam_feet: tuple          # per seam k: (end_at_lower_slot, end_at_higher_slot)
                              # each entry (slot, foot complex or ideal point)


def _seam_ends(k: int):
    """Slots joined by seam k, in increasing order."""
    return tuple(sorted(m for m in range(3) if m != k))


@lru_cache(maxsize=4096)
def build_pants(l1: float, l2: float, l3: float) -> StdPants:
    lengths = (float(l1), float(l2), float(l3))
    alphas = [l / 2.0 for l in lengths]
    ts = [math.tanh(a / 2.0) ** 2 for a in alphas]

    g3 = Geodesic(0.0, INF)
    p = ts[0]
    g2 = Geodesic(p, 1.0)
    u, v = _solve_third_seam(p, ts[1], ts[2])
    g1 = Geodesic(u, v)
    seams = (g1, g2, g3)

    # verify the three pairwise distances against the requested half-lengths
    for (ga, gb, alpha) in ((g2, g3, alphas[0]), (g1, g3, alphas[1]),
                            (g1, g2, alphas[2])):
        d = dist_between_geodesics(ga, gb)
        if abs(d - alpha) > _CONSTRUCTION_TOL * max(1.0, alpha):
            raise GeometryError(
                f"pants construction inconsistent: seam distance {d} != {alpha}")

    refl = tuple(geodesic_reflection(g) for g in seams)
    # X_i is the product of reflections in the two seams adjacent to slot i,
    # ordered so that X1 X2 X3 = 1 exactly.
    slot_hol = (
        compose_reflections(refl[1], refl[2]),
        compose_reflections(refl[2], refl[0]),
        compose_reflections(refl[0], refl[1]),
    )

    slot_is_cusp = tuple(a == 0.0 for a in alphas)
    slot_axis = []
    slot_point = []
    for i in range(3):
        adj = [seams[m] for m in range(3) if m != i]
        if slot_is_cusp[i]:
            shared = _shared_endpoint(adj[0], adj[1])
            slot_axis.append(None)
            slot_point.append(shared)
        else:
            slot_axis.append(common_perpendicular(adj[0], adj[1]))
            slot_point.append(None)

    seam_feet = []
    for k in range(3):
        ends = []
        for s in _seam_ends(k):
            if slot_is_cusp[s]:
                ends.append((s, _nearest_endpoint(seams[k], slot_point[s])))
            else:
                ends.append((s, geodesic_intersection(seams[k], slot_axis[s])))
        seam_feet.append(tuple(ends))

    # marker for slot i: foot of the seam joining slot i to slot i+1, which
    # is the seam indexed by the remaining slot (i+2 mod 3).  The probe sits
    # on that seam a little inside the hexagon, i.e. toward the other foot.
    slot_marker = []
    slot_probe = []
    for i in range(3):
        if slot_is_cusp[i]:
            slot_marker.append(None)
            slot_probe.append(None)
            continue
        k = (i + 2) % 3
        seam = seams[k]
        marker = geodesic_intersection(slot_axis[i], seam)
        other = (i + 1) % 3
        other_foot = dict(seam_feet[k])[other]
        toward = _direction_toward(seam, marker, other_foot)
        slot_marker.append(marker)
        slot_probe.append(_point_along(seam, marker, toward, 1e-3))

    pants = StdPants(
        lengths=lengths,
        seams=seams,
        slot_is_cusp=slot_is_cusp,
        slot_axis=tuple(slot_axis),
        slot_point=tuple(slot_point),
        slot_hol=slot_hol,
        slot_marker=tuple(slot_marker),
        slot_probe=tuple(slot_probe),
        seam_feet=tuple(seam_feet),
    )
    _check_pants(pants)
    return pants


def _shared_endpoint(ga: Geodesic, gb: Geodesic):
    for x in (ga.p, ga.q):
        for y in (gb.p, gb.q):
            if x == y:
                return x
    raise GeometryError("adjacent seams of a cusp slot must share an endpoint")


def _nearest_endpoint(seam: Geodesic, point):
    """The endpoint of the seam equal to the given ideal point."""
    for x in (seam.p, seam.q):
        if x == point or (x != INF and point != INF and
                          abs(x - point) <= 1e-9 * max(1.0, abs(x))):
            return x
    raise GeometryError("seam does not end at the expected ideal point")


def _direction_toward(seam: Geodesic, start: complex, target) -> float:
    """Endpoint of the seam one moves toward when going from start to target.

    The target is either an interior point of the seam or one of its ideal
    endpoints (a cusp foot).
    """
    if not isinstance(target, complex):
        return _nearest_endpoint(seam, target)
    m = mobius_two_point(seam.p, seam.q)
    return seam.q if m(target).imag > m(start).imag else seam.p


def _check_pants(pants: StdPants):
    for i in range(3):
        x = pants.slot_hol[i]
        kind = geom.classify(x)
        if pants.slot_is_cusp[i]:
            if kind != "parabolic":
                raise GeometryError(f"cusp slot {i} holonomy is {kind}")
        else:
            if kind != "hyperbolic":
                raise GeometryError(f"slot {i} holonomy is {kind}")
            got = geom.translation_length(x)
            want = pants.lengths[i]
            if abs(got - want) > 1e-8 * max(1.0, want):
                raise GeometryError(
                    f"slot {i} length {got} differs from requested {want}")
    prod = pants.slot_hol[0] @ pants.slot_hol[1] @ pants.slot_hol[2]
    if geom.classify(prod) != "identity":
        raise GeometryError("pants relation X1 X2 X3 = 1 violated")


def slot_normalizer(pants: StdPants, slot: int) -> Isometry:
    """Map sending the slot axis to (0, inf), marker to i, body to Re > 0."""
    if pants.slot_is_cusp[slot]:
        raise GeometryError("cusp slots cannot be glued")
    axis = pants.slot_axis[slot]
    probe = pants.slot_probe[slot]
    marker = pants.slot_marker[slot]
    for (x, y) in ((axis.p, axis.q), (axis.q, axis.p)):
        m = mobius_two_point(x, y)
        if m(probe).real > 0:
            y0 = m(marker).imag
            s = math.sqrt(y0)
            scale = Isometry.from_matrix(1.0 / s, 0.0, 0.0, s)
            return scale @ m
    raise GeometryError("could not orient slot axis with body on the right")


def spiral_endpoint(axis_p, axis_q, probe: complex):
    """Ideal endpoint a spiralling arc converges to at this boundary corner.

    The arc spirals toward the endpoint for which the corner's body lies
    on the left of the axis oriented toward that endpoint.
    """
    if geom.side_of_point(Geodesic(axis_p, axis_q), probe) == "left":
        return axis_q
    return axis_p
