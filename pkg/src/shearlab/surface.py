"""Hyperbolic surfaces from glued pairs of pants.

A surface is described combinatorially by a pants graph (which boundary
slots are glued along which internal curve, which are cusps) and
metrically by Fenchel-Nielsen coordinates (length and twist per internal
curve).  The holonomy representation is built by placing each pair of
pants in the upper half-plane: a spanning tree of the gluing graph fixes
one placement per pants, and the remaining gluings contribute explicit
deck transformations.

Generators are stored frame-locally: each generator is a small matrix in
the standard frame of one pants, together with the frame it lives in.
Words are evaluated by telescoping the frame transitions along the
spanning tree, which keeps every trace computation free of the large
cancellations that global conjugation would introduce on thick surfaces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import geom
from .constants import Signature, area
from .geom import Isometry
from .pants import StdPants, build_pants, slot_normalizer

SlotRef = tuple  # (pants index, slot index)


@dataclass(frozen=True)
class PantsGraph:
    """Gluing pattern: per pants, three slots marked cusp or internal curve."""

    pants: tuple  # per pants: 3-tuple of ("curve", id) / ("cusp", id)

    @property
    def num_pants(self):
        return len(self.pants)

    def curve_ends(self):
        """curve id -> list of slot references, in (pants, slot) order."""
        ends = {}
        for p, slots in enumerate(self.pants):
            for s, (kind, ident) in enumerate(slots):
                if kind == "curve":
                    ends.setdefault(ident, []).append((p, s))
        return ends

    def cusp_slots(self):
        out = {}
        for p, slots in enumerate(self.pants):
            for s, (kind, ident) in enumerate(slots):
                if kind == "cusp":
                    if ident in out:
                        raise ValueError(f"cusp id {ident} used twice")
                    out[ident] = (p, s)
        return out

    def curve_ids(self):
        return sorted(self.curve_ends())


@dataclass(frozen=True)
class FNCoordinates:
    """Length and twist per internal curve."""

    lengths: dict
    twists: dict

    def length(self, cid):
        return self.lengths[cid]

    def twist(self, cid):
        return self.twists[cid]


def validate(pg: PantsGraph, sig: Signature):
    """Check the pants graph against the signature; returns diagnostics."""
    problems = []
    m = 2 * sig.g - 2 + sig.n
    if pg.num_pants != m:
        problems.append(f"expected {m} pants for signature, found {pg.num_pants}")
    for p, slots in enumerate(pg.pants):
        if len(slots) != 3:
            problems.append(f"pants {p} must have exactly 3 slots")
    ends = pg.curve_ends()
    for cid, refs in ends.items():
        if len(refs) != 2:
            problems.append(f"curve {cid} glues {len(refs)} slots, expected 2")
    expected_curves = 3 * sig.g - 3 + sig.n
    if len(ends) != expected_curves:
        problems.append(
            f"expected {expected_curves} internal curves, found {len(ends)}")
    try:
        n_cusps = len(pg.cusp_slots())
    except ValueError as err:
        problems.append(str(err))
        n_cusps = -1
    if n_cusps != sig.n:
        problems.append(f"expected {sig.n} cusps, found {n_cusps}")
    if pg.num_pants > 0:
        seen = {0}
        frontier = [0]
        adj = {p: set() for p in range(pg.num_pants)}
        for refs in ends.values():
            if len(refs) == 2:
                adj[refs[0][0]].add(refs[1][0])
                adj[refs[1][0]].add(refs[0][0])
        while frontier:
            p = frontier.pop()
            for q in adj[p]:
                if q not in seen:
                    seen.add(q)
                    frontier.append(q)
        if len(seen) != pg.num_pants:
            problems.append("gluing graph is not connected")
    return problems


def canonical_pants_graph(sig: Signature) -> PantsGraph:
    """Linear chain of pants with handles attached in index order."""
    m = sig.complexity
    slots = [[None, None, None] for _ in range(m)]
    next_curve = 0
    for p in range(m - 1):
        slots[p][2] = ("curve", next_curve)
        slots[p + 1][0] = ("curve", next_curve)
        next_curve += 1
    free = [(p, s) for p in range(m) for s in range(3) if slots[p][s] is None]
    for _ in range(sig.g):
        (p1, s1), (p2, s2) = free.pop(0), free.pop(0)
        slots[p1][s1] = ("curve", next_curve)
        slots[p2][s2] = ("curve", next_curve)
        next_curve += 1
    for cusp_id, (p, s) in enumerate(free):
        slots[p][s] = ("cusp", cusp_id)
    pg = PantsGraph(tuple(tuple(s) for s in slots))
    problems = validate(pg, sig)
    if problems:
        raise ValueError("canonical graph construction failed: " + "; ".join(problems))
    return pg


@dataclass(frozen=True)
class Generator:
    """A deck transformation written as frame_L * core * frame_R^-1."""

    lframe: int
    core: Isometry
    rframe: int


@dataclass
class Holonomy:
    """Per-pants placements plus a generator table for curve classes."""

    graph: PantsGraph
    fn: FNCoordinates
    std: list                # StdPants per pants
    placements: list         # Isometry per pants (global frame)
    root_paths: list         # per pants: list of single-gluing edge maps
    table: dict              # generator id -> Generator
    curve_primary: dict      # cid -> slot ref carrying the curve generator
    curve_secondary: dict
    tree_curves: set = field(default_factory=set)

    def generator(self, name) -> Isometry:
        """The generator as a matrix in the global frame."""
        g = self.table[name]
        return (self.placements[g.lframe] @ g.core
                @ self.placements[g.rframe].inverse())

    @property
    def generators(self):
        return {name: self.generator(name) for name in self.table}

    def _connector(self, p: int, q: int) -> Isometry:
        """placements[p]^-1 @ placements[q], telescoped through the tree."""
        if p == q:
            return Isometry.identity()
        path_p = self.root_paths[p]
        path_q = self.root_paths[q]
        k = 0
        while (k < len(path_p) and k < len(path_q)
               and path_p[k] is path_q[k]):
            k += 1
        out = Isometry.identity()
        for e in reversed(path_p[k:]):
            out = out @ e.inverse()
        for e in path_q[k:]:
            out = out @ e
        return out

    def evaluate_class(self, word) -> Isometry:
        """The word as a matrix, up to conjugation (trace-faithful)."""
        if not word:
            raise ValueError("curve class word must be nonempty")
        for (g1, e1), (g2, e2) in zip(word, word[1:]):
            if g1 == g2 and e1 == -e2:
                raise ValueError("curve class word must be reduced")
        factors = []
        for name, exp in word:
            g = self.table[name]
            if exp == 1:
                factors.append((g.lframe, g.core, g.rframe))
            else:
                factors.append((g.rframe, g.core.inverse(), g.lframe))
        out = factors[0][1]
        for (fa, fb) in zip(factors, factors[1:]):
            out = out @ self._connector(fa[2], fb[0]) @ fb[1]
        out = out @ self._connector(factors[-1][2], factors[0][0])
        return out

    def evaluate(self, word) -> Isometry:
        """The word as a matrix in the global frame."""
        cls = self.evaluate_class(word)
        phi = self.placements[self.table[word[0][0]].lframe
                              if word[0][1] == 1
                              else self.table[word[0][0]].rframe]
        return phi @ cls @ phi.inverse()


def curve_length(hol: Holonomy, word) -> float:
    """Geodesic length of the curve class; rejects non-hyperbolic classes."""
    f = hol.evaluate_class(word)
    kind = geom.classify(f)
    if kind != "hyperbolic":
        raise geom.GeometryError(f"curve class is {kind}, not a closed geodesic")
    return geom.translation_length(f)


def _slot_lengths(pg: PantsGraph, fn: FNCoordinates, p: int):
    out = []
    for kind, ident in pg.pants[p]:
        out.append(fn.length(ident) if kind == "curve" else 0.0)
    return tuple(out)


def _gluing_map(parent_std: StdPants, parent_slot: int,
                child_std: StdPants, child_slot: int, twist: float) -> Isometry:
    """Map placing the child pants across the parent's slot axis."""
    n_parent = slot_normalizer(parent_std, parent_slot)
    n_child = slot_normalizer(child_std, child_slot)
    return (n_parent.inverse() @ Isometry.translation(twist)
            @ Isometry.half_turn() @ n_child)


def holonomy_from_fn(pg: PantsGraph, fn: FNCoordinates) -> Holonomy:
    for cid in pg.curve_ids():
        if not (0.0 < fn.length(cid) < math.inf):
            raise ValueError(f"curve {cid} needs a positive finite length")

    std = [build_pants(*_slot_lengths(pg, fn, p)) for p in range(pg.num_pants)]
    ends = pg.curve_ends()
    placements = [None] * pg.num_pants
    placements[0] = Isometry.identity()
    root_paths = [None] * pg.num_pants
    root_paths[0] = []
    tree_curves = set()
    frontier = [0]
    placed = {0}
    while frontier:
        nxt = []
        for p in frontier:
            for cid, refs in sorted(ends.items()):
                here = [r for r in refs if r[0] == p]
                for (pp, ss) in here:
                    (qq, tt) = refs[0] if refs[1] == (pp, ss) else refs[1]
                    if qq in placed:
                        continue
                    edge = _gluing_map(std[pp], ss, std[qq], tt, fn.twist(cid))
                    placements[qq] = placements[pp] @ edge
                    root_paths[qq] = root_paths[pp] + [edge]
                    placed.add(qq)
                    tree_curves.add(cid)
                    nxt.append(qq)
        frontier = nxt
    if len(placed) != pg.num_pants:
        raise ValueError("gluing graph is not connected")

    table = {}
    curve_primary = {}
    curve_secondary = {}
    for p in range(pg.num_pants):
        for s in range(3):
            table[f"bnd:{p}:{s}"] = Generator(p, std[p].slot_hol[s], p)
    for cusp_id, (p, s) in pg.cusp_slots().items():
        table[f"cusp:{cusp_id}"] = table[f"bnd:{p}:{s}"]
    for cid, refs in ends.items():
        (p1, s1), (p2, s2) = sorted(refs)
        curve_primary[cid] = (p1, s1)
        curve_secondary[cid] = (p2, s2)
        table[f"curve:{cid}"] = table[f"bnd:{p1}:{s1}"]
        if cid not in tree_curves:
            raw = _gluing_map(std[p1], s1, std[p2], s2, fn.twist(cid))
            table[f"glue:{cid}"] = Generator(p1, raw, p2)

    hol = Holonomy(
        graph=pg, fn=fn, std=std, placements=placements,
        root_paths=root_paths, table=table, curve_primary=curve_primary,
        curve_secondary=curve_secondary, tree_curves=tree_curves,
    )
    _check_holonomy(hol)
    return hol


def _check_holonomy(hol: Holonomy):
    fn = hol.fn
    for cid in hol.graph.curve_ids():
        g = hol.evaluate_class([(f"curve:{cid}", 1)])
        if geom.classify(g) != "hyperbolic":
            raise geom.GeometryError(f"curve {cid} holonomy is not hyperbolic")
        got = geom.translation_length(g)
        if abs(got - fn.length(cid)) > 1e-9 * max(1.0, fn.length(cid)):
            raise geom.GeometryError(
                f"curve {cid} length {got} != requested {fn.length(cid)}")
    for cusp_id in hol.graph.cusp_slots():
        g = hol.evaluate_class([(f"cusp:{cusp_id}", 1)])
        if abs(abs(g.trace()) - 2.0) > 1e-9:
            raise geom.GeometryError(f"cusp {cusp_id} word is not parabolic")
    # The two sides of a tree gluing stabilize the same axis oppositely:
    # bnd(p1,s1) must equal bnd(p2,s2)^-1 up to overall sign.  In local terms,
    # with E the edge map, X1 = E X2^-1 E^-1 entrywise.
    for cid in hol.tree_curves:
        (p1, s1) = hol.curve_primary[cid]
        (p2, s2) = hol.curve_secondary[cid]
        conn = hol._connector(p1, p2)
        a = hol.std[p1].slot_hol[s1]
        b = conn @ hol.std[p2].slot_hol[s2].inverse() @ conn.inverse()
        scale = max(abs(b.a), abs(b.b), abs(b.c), abs(b.d), 1.0)
        err = min(
            max(abs(a.a - s * b.a), abs(a.b - s * b.b),
                abs(a.c - s * b.c), abs(a.d - s * b.d))
            for s in (1.0, -1.0))
        if err > 1e-8 * scale:
            raise geom.GeometryError(
                f"tree gluing along curve {cid} is inconsistent")


def sample_fn(sig: Signature, seed: int, length_range=None,
              twist_range=(0.0, 1.0), fractional_twists: bool = True):
    """Seeded random surface on the canonical pants graph.

    Lengths are uniform in length_range, which defaults to
    (0.05, 2 log(4 area)].  With fractional twists (the default) the twist
    of each curve is u * length for u uniform in twist_range; otherwise
    twists are uniform in twist_range directly, in length units.
    """
    pg = canonical_pants_graph(sig)
    if length_range is None:
        length_range = (0.05, 2.0 * math.log(4.0 * area(sig)))
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    lengths = {}
    twists = {}
    for cid in pg.curve_ids():
        lengths[cid] = float(rng.uniform(length_range[0], length_range[1]))
    for cid in pg.curve_ids():
        u = float(rng.uniform(twist_range[0], twist_range[1]))
        twists[cid] = u * lengths[cid] if fractional_twists else u
    return pg, FNCoordinates(lengths, twists)


def sample_seed(base_seed: int, index: int) -> int:
    """Per-sample seed: SeedSequence(entropy=base, spawn_key=(index,))."""
    mix = np.random.SeedSequence(entropy=np.uint64(base_seed),
                                 spawn_key=(index,))
    return int(mix.generate_state(1, dtype=np.uint64)[0])
