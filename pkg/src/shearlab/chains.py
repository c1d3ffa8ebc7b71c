"""Cusped ideal triangulations of small chain-type punctured spheres.

A genus-zero chain surface admits an ideal triangulation with all arcs
between cusps.  Around a pants curve, the cusp lifts visible on its two
sides form two periodic sequences of boundary points; merging the two
sequences by position triangulates the annular strip around the curve
into four triangles per period (a "ladder").  For the four-times
punctured sphere the ladder is the whole triangulation.  For five
punctures the ladder around the first curve is completed by a two-face
fan around the remaining cusp, built in the same developed frame.

Supported signatures: (0,3), (0,4) and (0,5).  Larger chains would need
an inductively propagated frontier; the structures exercised by the
round-trip and flip tests stop at five punctures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import geom
from .cusped import CuspedTriangulation, _shear_of_quad
from .geom import INF, Isometry, mobius_two_point
from .surface import Holonomy

_MATCH_TOL = 1e-7


class ChainError(ValueError):
    pass


def is_chain(hol: Holonomy) -> bool:
    """Whether the surface is a genus-zero linear chain of pants."""
    pg = hol.graph
    m = pg.num_pants
    if m == 1:
        return len(pg.cusp_slots()) == 3
    if any(slots[1][0] != "cusp" for slots in pg.pants):
        return False
    ends = pg.curve_ends()
    want = {a: [(a, 2), (a + 1, 0)] for a in range(m - 1)}
    got = {cid: sorted(refs) for cid, refs in ends.items()}
    return got == want and pg.pants[0][0][0] == "cusp" \
        and pg.pants[m - 1][2][0] == "cusp"


@dataclass
class _Event:
    t: float
    side: str        # "L" | "R"
    cusp: object
    point: float     # global boundary coordinate


@dataclass
class _LadderFace:
    labels: tuple    # cusp ids, positively oriented
    points: tuple    # global boundary points, same order
    roles: dict      # side index -> "rung_prev" | "rung_next" | "outer"
    outer_side_kind: str  # "L" | "R"


def _boundary_eq(x, y, tol=_MATCH_TOL):
    if x == INF or y == INF:
        return x == y
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y))


def _apply_pt(g: Isometry, x):
    return g.apply_boundary(x)


def _build_ladder(h_curve: Isometry, length: float, base_points):
    """Triangulated strip around one curve.

    base_points: list of (side, cusp id, global point), two per side.
    Returns the four faces of one period, ordered along the curve.
    """
    att, rep = geom.fixed_points(h_curve)
    m = mobius_two_point(rep, att)

    def position(x):
        y = m.apply_boundary(x)
        if y == INF or y == 0.0:
            raise ChainError("cusp lift sits on the curve axis")
        return math.log(abs(y)), (y > 0)

    signs = {}
    for side, cusp, pt in base_points:
        _, sgn = position(pt)
        signs.setdefault(side, set()).add(sgn)
    if signs["L"] & signs["R"] or len(signs["L"]) != 1 or len(signs["R"]) != 1:
        raise ChainError("cusp lifts do not separate by side of the curve")

    events = []
    for side, cusp, pt in base_points:
        t0, _ = position(pt)
        shift = math.floor(t0 / length)
        for k in (-1, 0, 1, 2):
            moved = pt
            steps = k - shift
            g = h_curve if steps >= 0 else h_curve.inverse()
            for _ in range(abs(steps)):
                moved = _apply_pt(g, moved)
            events.append(_Event(t=t0 + (k - shift) * length, side=side,
                                 cusp=cusp, point=moved))
    events.sort(key=lambda e: e.t)

    faces = []
    last = {"L": None, "R": None}
    for ev in events:
        other = "R" if ev.side == "L" else "L"
        if last[ev.side] is not None and last[other] is not None:
            prev_same = last[ev.side]
            bridge = last[other]
            tri_pts = (prev_same.point, ev.point, bridge.point)
            tri_lbl = (prev_same.cusp, ev.cusp, bridge.cusp)
            faces.append((ev.t, _make_face(tri_lbl, tri_pts, ev.side)))
        last[ev.side] = ev
    period = sorted((f for f in faces if 0.0 <= f[0] < length - 1e-12),
                    key=lambda f: f[0])
    if len(period) != 4:
        raise ChainError(
            f"ladder period contains {len(period)} faces, expected 4")
    return [f[1] for f in period]


def _make_face(labels, points, outer_kind):
    """Orient the triple positively and record the role of each side.

    The triple arrives as (prev, new, bridge): side (prev->new) lies on
    the boundary line ("outer"), (bridge->prev) is the earlier frontier
    rung, (new->bridge) the later one.
    """
    order = [0, 1, 2] if geom.cyclically_ordered(*points) else [0, 2, 1]
    pts = tuple(points[i] for i in order)
    lbl = tuple(labels[i] for i in order)
    role_of_pair = {
        frozenset((points[0], points[1])): "outer",
        frozenset((points[2], points[0])): "rung_prev",
        frozenset((points[1], points[2])): "rung_next",
    }
    roles = {}
    for s in range(3):
        pair = frozenset((pts[s], pts[(s + 1) % 3]))
        roles[s] = role_of_pair[pair]
    return _LadderFace(labels=lbl, points=pts, roles=roles,
                       outer_side_kind=outer_kind)


def _side_with_role(face: _LadderFace, role: str) -> int:
    for s, r in face.roles.items():
        if r == role:
            return s
    raise ChainError(f"face has no side with role {role}")


def _three_cusp_complex():
    """The two-triangle triangulation of the thrice-punctured sphere."""
    cx = CuspedTriangulation(
        verts=[(0, 1, 2), (1, 0, 2)],
        glue={(0, 0): (1, 0), (1, 0): (0, 0),
              (0, 1): (1, 2), (1, 2): (0, 1),
              (0, 2): (1, 1), (1, 1): (0, 2)},
    )
    cx.check()
    sigma = {e: 0.0 for e in cx.edges()}
    return cx, sigma, {}


class _Assembler:
    """Collects faces, gluings and per-edge shear probes."""

    def __init__(self):
        self.verts = []
        self.points = []
        self.glue = {}
        self.probes = {}

    def add_face(self, labels, points):
        self.verts.append(tuple(labels))
        self.points.append(tuple(points))
        return len(self.verts) - 1

    def side_of(self, face, a, b):
        """Side index of face whose endpoints are the points a, b."""
        pts = self.points[face]
        for s in range(3):
            if _boundary_eq(pts[s], a) and _boundary_eq(pts[(s + 1) % 3], b):
                return s
            if _boundary_eq(pts[s], b) and _boundary_eq(pts[(s + 1) % 3], a):
                return s
        raise ChainError("face has no side with the given endpoints")

    def add_glue(self, k1, k2, shear):
        if self.glue.get(k1, k2) != k2 or self.glue.get(k2, k1) != k1:
            raise ChainError(f"conflicting gluing {k1} ~ {k2}")
        self.glue[k1] = k2
        self.glue[k2] = k1
        self.probes.setdefault((min(k1, k2), max(k1, k2)), []).append(shear)

    def finish(self, n_cusps):
        cx = CuspedTriangulation(verts=list(self.verts), glue=dict(self.glue))
        cx.check()
        links = cx.vertex_links()
        if len(links) != n_cusps:
            raise ChainError(
                f"assembled complex has {len(links)} cusps, expected {n_cusps}")
        sigma = {}
        for (k1, k2), vals in self.probes.items():
            if max(vals) - min(vals) > 1e-6:
                raise ChainError(f"shear disagreement on {k1}: {vals}")
            sigma[cx.edge_key(*k1)] = sum(vals) / len(vals)
        for e in cx.edges():
            if e not in sigma:
                raise ChainError(f"edge {e} has no shear")
        return cx, sigma


def _emit_ladder(asm: _Assembler, faces, h_curve: Isometry):
    """Add a ladder's faces, rung gluings and rung shears; returns face ids."""
    ids = [asm.add_face(f.labels, f.points) for f in faces]
    walk = []
    for i in range(4):
        j = (i + 1) % 4
        s_next = _side_with_role(faces[i], "rung_next")
        x = faces[i].points[s_next]
        y = faces[i].points[(s_next + 1) % 3]
        z = faces[i].points[(s_next + 2) % 3]
        s_prev = _side_with_role(faces[j], "rung_prev")
        if i < 3:
            w = faces[j].points[(s_prev + 2) % 3]
            chord = (faces[j].points[s_prev], faces[j].points[(s_prev + 1) % 3])
        else:
            w = _apply_pt(h_curve, faces[0].points[(s_prev + 2) % 3])
            chord = (_apply_pt(h_curve, faces[0].points[s_prev]),
                     _apply_pt(h_curve, faces[0].points[(s_prev + 1) % 3]))
        for v in (x, y):
            if not any(_boundary_eq(c, v) for c in chord):
                raise ChainError(f"rung {i} chords do not line up")
        asm.add_glue((ids[i], s_next), (ids[j], s_prev),
                     _shear_of_quad(x, y, z, w))
        walk.append((ids[i], s_next))
    return ids, walk


def _close_outer(asm: _Assembler, faces, ids, kind):
    """Glue the two outer sides on an end-pants side of a ladder."""
    outer = [i for i in range(4) if faces[i].outer_side_kind == kind]
    if len(outer) != 2:
        raise ChainError("expected two outer faces on an end side")
    i1, i2 = outer
    f1, f2 = faces[i1], faces[i2]
    s1 = _side_with_role(f1, "outer")
    s2 = _side_with_role(f2, "outer")
    x1, y1 = f1.points[s1], f1.points[(s1 + 1) % 3]
    z1 = f1.points[(s1 + 2) % 3]
    x2, y2 = f2.points[s2], f2.points[(s2 + 1) % 3]
    z2 = f2.points[(s2 + 2) % 3]
    shared = None
    for p1 in (x1, y1):
        for p2 in (x2, y2):
            if _boundary_eq(p1, p2):
                shared = p1
    if shared is None:
        raise ChainError("outer sides of an end closure share no endpoint")
    other1 = y1 if _boundary_eq(shared, x1) else x1
    other2 = y2 if _boundary_eq(shared, x2) else x2
    g = geom.parabolic_fixing(shared, other2, other1)
    shear = _shear_of_quad(shared, other1, z1, _apply_pt(g, z2))
    asm.add_glue((ids[i1], s1), (ids[i2], s2), shear)


def build_cusped_chain(hol: Holonomy):
    """Cusped triangulation, shears and curve walks for a chain surface.

    Supports chains with up to five cusps.  Returns (triangulation,
    sigma, walks); walks maps a pants curve id to a closed dual walk
    around it where one was recorded during construction.
    """
    if not is_chain(hol):
        raise ChainError("surface is not a chain of pants")
    pg = hol.graph
    m = pg.num_pants
    if m == 1:
        return _three_cusp_complex()
    if m > 3:
        raise ChainError("cusped chains are built for at most five cusps")

    cusp_at = {(p, s): ident for ident, (p, s) in pg.cusp_slots().items()}
    snake = [cusp_at[(0, 0)]]
    snake += [cusp_at[(a, 1)] for a in range(m)]
    snake.append(cusp_at[(m - 1, 2)])

    # Work in the frame of the middle pants with exact-rational placement
    # products: far-frame conjugates of parabolics are otherwise too large
    # for float64 to carry their fixed points at the window scale.
    frames = _centered_frames(hol)
    w_point = {}
    for ident, (p, s) in pg.cusp_slots().items():
        w_point[ident] = _frame_apply(frames[p], hol.std[p].slot_point[s])
    gen_table = {}
    for cid in pg.curve_ids():
        (p, s) = hol.curve_primary[cid]
        gen_table[f"curve:{cid}"] = _frame_conj(frames[p],
                                                hol.std[p].slot_hol[s])
    for ident, (p, s) in pg.cusp_slots().items():
        gen_table[f"cusp:{ident}"] = _frame_conj(frames[p],
                                                 hol.std[p].slot_hol[s])

    h0 = gen_table["curve:0"]
    base = [("L", snake[0], w_point[snake[0]]),
            ("L", snake[1], w_point[snake[1]]),
            ("R", snake[2], w_point[snake[2]]),
            ("R", snake[3], w_point[snake[3]])]
    faces = _build_ladder(h0, hol.fn.length(0), base)

    asm = _Assembler()
    ids, walk0 = _emit_ladder(asm, faces, h0)
    _close_outer(asm, faces, ids, "L")
    walks = {0: walk0}

    if m == 2:
        _close_outer(asm, faces, ids, "R")
        cx, sigma = asm.finish(4)
        return cx, sigma, walks

    _complete_five(gen_table, asm, faces, ids, snake, w_point)
    cx, sigma = asm.finish(5)
    return cx, sigma, walks


def _centered_frames(hol: Holonomy):
    """Exact placement of every pants relative to the middle one.

    Returned as tuples of Fractions (a, b, c, d); the root paths hold one
    float gluing map per tree edge, so each frame is a short exact product.
    """
    from fractions import Fraction as F

    def mat(iso):
        return (F(iso.a), F(iso.b), F(iso.c), F(iso.d))

    def inv(mm):
        a, b, c, d = mm
        det = a * d - b * c
        return (d / det, -b / det, -c / det, a / det)

    center = (hol.graph.num_pants - 1) // 2
    to_center = (F(1), F(0), F(0), F(1))
    for e in hol.root_paths[center]:
        to_center = _frac_mul(to_center, mat(e))
    base = inv(to_center)
    frames = []
    for p in range(hol.graph.num_pants):
        out = base
        for e in hol.root_paths[p]:
            out = _frac_mul(out, mat(e))
        frames.append(out)
    return frames


def _frame_apply(frame, pt):
    """Boundary action of an exact frame, rounded once to float."""
    from fractions import Fraction as F
    a, b, c, d = frame
    if pt == INF:
        return INF if c == 0 else float(a / c)
    x = F(pt)
    den = c * x + d
    if den == 0:
        return INF
    return float((a * x + b) / den)


def _frame_conj(frame, iso: Isometry) -> Isometry:
    """frame iso frame^-1 in exact rationals, rounded once to float."""
    from fractions import Fraction as F
    a, b, c, d = frame
    det = a * d - b * c
    m = _frac_mul(frame, (F(iso.a), F(iso.b), F(iso.c), F(iso.d)))
    out = _frac_mul(m, (d / det, -b / det, -c / det, a / det))
    return Isometry(*(float(v) for v in out))


def _complete_five(gen_table, asm: _Assembler, faces, ids, snake,
                   w_point):
    """Fan the region beyond the ladder around the fifth cusp.

    The fifth cusp has valence two, so its two faces form a fan
    (C, r0, r1) and (C, r1, pi(r0)) where (r0, r1) is a ladder boundary
    arc, C a lift of the cusp inside the window that arc cuts off, and pi
    the parabolic stabilizing C.  The correct lift of the cusp is found
    by a breadth-first search over short deck words, certified by the
    cusp-sum oracle of the assembled complex.
    """
    right = [i for i in range(4) if faces[i].outer_side_kind == "R"]
    if len(right) != 2:
        raise ChainError("expected two right-boundary faces")
    # order the two boundary arcs consecutively: (r0 -> r1), (r1 -> r2)
    sides = {}
    for i in right:
        s = _side_with_role(faces[i], "outer")
        sides[i] = (faces[i].points[s], faces[i].points[(s + 1) % 3],
                    faces[i].labels[s], faces[i].labels[(s + 1) % 3],
                    faces[i].points[(s + 2) % 3])
    (iA, iB) = right
    chainings = []
    for (first, second) in ((iA, iB), (iB, iA)):
        a0, a1, la0, la1, _ = sides[first]
        b0, b1, lb0, lb1, _ = sides[second]
        for (x0, x1) in ((a0, a1), (a1, a0)):
            for (y0, y1) in ((b0, b1), (b1, b0)):
                if _boundary_eq(x1, y0) and not _boundary_eq(x0, y1):
                    chainings.append((first, second, x0, x1, y1))
    if not chainings:
        raise ChainError("right boundary arcs do not chain")
    last_cusp = snake[4]
    from .cusped import cusp_sums
    for limit in (400, 8000):
        for chaining in chainings:
            first, second, r0, r1, r2 = chaining
            lab_r0 = _label_of(faces[first], r0)
            lab_r1 = _label_of(faces[first], r1)
            zA = sides[first][4]
            zB = sides[second][4]
            for c4, pi in _window_cusp_lifts(gen_table, w_point[last_cusp],
                                             last_cusp, r0, r1, zA,
                                             limit=limit):
                trial = _Assembler()
                trial.verts = list(asm.verts)
                trial.points = list(asm.points)
                trial.glue = dict(asm.glue)
                trial.probes = {k: list(v) for k, v in asm.probes.items()}
                try:
                    _emit_fan_faces(trial, faces, ids, first, second,
                                    r0, r1, r2, lab_r0, lab_r1, last_cusp,
                                    zA, zB, c4, pi)
                    cx, sigma = trial.finish(5)
                except (ChainError, ValueError, geom.GeometryError):
                    continue
                sums = cusp_sums(cx, sigma)
                if max(abs(v) for v in sums.values()) <= 1e-6:
                    asm.verts = trial.verts
                    asm.points = trial.points
                    asm.glue = trial.glue
                    asm.probes = trial.probes
                    return
    raise ChainError("no completion fan found around the last cusp")


def _label_of(face: _LadderFace, point):
    for lbl, pt in zip(face.labels, face.points):
        if _boundary_eq(pt, point):
            return lbl
    raise ChainError("point is not a vertex of the face")


def _window_cusp_lifts(gen_table, base_point, last_cusp, r0, r1, far,
                       limit=400):
    """Lifts of the last cusp inside the window under the arc (r0, r1).

    Breadth-first search over short words in the holonomy generators;
    yields (point, parabolic stabilizing it), shallowest words first.
    """
    gens = [g for pair in ((g, g.inverse()) for g in gen_table.values())
            for g in pair]
    base_parab = gen_table[f"cusp:{last_cusp}"]
    window = geom.Geodesic(r0, r1)
    far_side = geom.side_of(window, far)

    def in_window(x):
        if x == INF or _boundary_eq(x, r0) or _boundary_eq(x, r1):
            return False
        return geom.side_of(window, x) != far_side

    # breadth-first over the cusp's orbit: expanding by point keeps the
    # search tree small, and two words reaching the same lift conjugate
    # the cusp parabolic identically.  Floating point is used to steer the
    # search; a candidate's point and parabolic are then re-evaluated in
    # exact rational arithmetic from its generator sequence, since words
    # of large-entry matrices drift by far more than the window scale.
    seen = set()
    frontier = [(base_point, ())]
    count = 0
    while frontier and count < limit:
        nxt = []
        for pt, seq in frontier:
            key = round(pt, 9) if pt != INF else INF
            if key in seen:
                continue
            seen.add(key)
            count += 1
            if in_window(pt):
                exact_pt, exact_pi = _evaluate_exact(gens, seq, base_point,
                                                     base_parab)
                if exact_pt is not None and in_window(exact_pt):
                    yield exact_pt, exact_pi
            for gi, g in enumerate(gens):
                moved = _apply_pt(g, pt)
                mkey = round(moved, 9) if moved != INF else INF
                if mkey not in seen:
                    nxt.append((moved, (gi,) + seq))
        frontier = nxt


def _evaluate_exact(gens, seq, base_point, base_parab):
    """Exact-rational point and conjugated parabolic of a generator word."""
    from fractions import Fraction as F
    word = (F(1), F(0), F(0), F(1))
    for gi in reversed(seq):
        g = gens[gi]
        word = _frac_mul((F(g.a), F(g.b), F(g.c), F(g.d)), word)
    wa, wb, wc, wd = word
    if base_point == INF:
        pt = None if wc == 0 else wa / wc
        if wc == 0:
            return None, None
    else:
        x = F(base_point)
        den = wc * x + wd
        if den == 0:
            return None, None
        pt = (wa * x + wb) / den
    pa, pb, pc, pd = (F(base_parab.a), F(base_parab.b),
                      F(base_parab.c), F(base_parab.d))
    m = _frac_mul(word, (pa, pb, pc, pd))
    det = wa * wd - wb * wc
    conj = _frac_mul(m, (wd / det, -wb / det, -wc / det, wa / det))
    return float(pt), Isometry(*(float(v) for v in conj))


def _frac_mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _frac_mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _conjugate_exact(w: Isometry, p: Isometry) -> Isometry:
    """w p w^-1 with the cancellation-heavy products done exactly.

    The conjugate of a parabolic by a large-entry word has entries that
    cancel from products thousands of times larger; float64 alone leaves
    absolute errors big enough to spoil downstream cross-ratios.  Floats
    are exact rationals, so the triple product is evaluated in exact
    rational arithmetic and rounded once at the end.
    """
    from fractions import Fraction as F
    wa, wb, wc, wd = F(w.a), F(w.b), F(w.c), F(w.d)
    pa, pb, pc, pd = F(p.a), F(p.b), F(p.c), F(p.d)
    # w p
    ma = wa * pa + wb * pc
    mb = wa * pb + wb * pd
    mc = wc * pa + wd * pc
    md = wc * pb + wd * pd
    # (w p) w^-1 with w^-1 = (d, -b; -c, a) up to the unit determinant
    det = wa * wd - wb * wc
    out = (ma * wd - mb * wc, -ma * wb + mb * wa,
           mc * wd - md * wc, -mc * wb + md * wa)
    return Isometry(*(float(v / det) for v in out))


def _emit_fan_faces(asm, faces, ids, first, second, r0, r1, r2,
                    lab_r0, lab_r1, last_cusp, zA, zB, c4, pi):
    """Add the two fan faces at the last cusp and their gluings."""
    # direction of the parabolic: the second fan face is (c4, r1, pi r0)
    # with pi r0 beyond r1 as seen from r0
    pr0 = _apply_pt(pi, r0)
    diag = geom.Geodesic(r1, c4)
    if geom.side_of(diag, r0) == geom.side_of(diag, pr0):
        pi = pi.inverse()
        pr0 = _apply_pt(pi, r0)
        if geom.side_of(diag, r0) == geom.side_of(diag, pr0):
            raise ChainError("fan parabolic does not cross the diagonal")

    fan1 = asm.add_face(_orient_labels((last_cusp, lab_r0, lab_r1),
                                       (c4, r0, r1)),
                        _orient_points((c4, r0, r1)))
    fan2 = asm.add_face(_orient_labels((last_cusp, lab_r1, lab_r0),
                                       (c4, r1, pr0)),
                        _orient_points((c4, r1, pr0)))

    # boundary arc (r0, r1): ladder face vs fan1
    s_lad = _side_with_role(faces[first], "outer")
    asm.add_glue((ids[first], s_lad), (fan1, asm.side_of(fan1, r0, r1)),
                 _shear_of_quad(r0, r1, zA, c4))
    # boundary arc class of (r1, r2): the fan's lift of it is (r1, pi r0)
    s_lad2 = _side_with_role(faces[second], "outer")
    if _boundary_eq(pr0, r2, tol=1e-12):
        w = zB
    else:
        trans = geom.parabolic_fixing(r1, r2, pr0)
        w = _apply_pt(trans, zB)
    asm.add_glue((ids[second], s_lad2), (fan2, asm.side_of(fan2, r1, pr0)),
                 _shear_of_quad(r1, pr0, c4, w))
    # the diagonal (c4, r1): shared by the two fan faces
    asm.add_glue((fan1, asm.side_of(fan1, c4, r1)),
                 (fan2, asm.side_of(fan2, c4, r1)),
                 _shear_of_quad(c4, r1, r0, pr0))
    # the remaining edge (c4, r0) ~ (c4, pi r0): glued through pi
    asm.add_glue((fan1, asm.side_of(fan1, c4, r0)),
                 (fan2, asm.side_of(fan2, c4, pr0)),
                 _shear_of_quad(c4, r0, r1, _apply_pt(pi.inverse(), r1)))


def _power(g: Isometry, k: int) -> Isometry:
    out = Isometry.identity()
    step = g if k >= 0 else g.inverse()
    for _ in range(abs(k)):
        out = out @ step
    return out


def _orient_points(points):
    if geom.cyclically_ordered(*points):
        return tuple(points)
    return (points[0], points[2], points[1])


def _orient_labels(labels, points):
    if geom.cyclically_ordered(*points):
        return tuple(labels)
    return (labels[0], labels[2], labels[1])
