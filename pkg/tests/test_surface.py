"""Pants graphs, Fenchel-Nielsen holonomy, and the surface sampler."""

import math

import numpy as np
import pytest

from shearlab import geom as G
from shearlab import pants as P
from shearlab import surface as S
from shearlab.constants import Signature, area


class TestValidate:
    def test_one_handle_pants(self):
        pg = S.PantsGraph(((("curve", 0), ("curve", 0), ("cusp", 0)),))
        assert S.validate(pg, Signature(1, 1)) == []

    def test_three_cusps(self):
        pg = S.PantsGraph(((("cusp", 0), ("cusp", 1), ("cusp", 2)),))
        assert S.validate(pg, Signature(0, 3)) == []

    def test_two_pants_three_gluings(self):
        pg = S.PantsGraph((
            (("curve", 0), ("curve", 1), ("curve", 2)),
            (("curve", 0), ("curve", 1), ("curve", 2)),
        ))
        assert S.validate(pg, Signature(2, 0)) == []

    def test_diagnostics(self):
        pg = S.PantsGraph(((("curve", 0), ("cusp", 0), ("cusp", 1)),))
        problems = S.validate(pg, Signature(1, 1))
        assert problems  # dangling curve, wrong cusp count

    def test_canonical_graphs(self):
        for g, n in [(0, 3), (0, 4), (0, 5), (1, 1), (1, 2), (2, 0), (2, 1),
                     (2, 2), (3, 0)]:
            sig = Signature(g, n)
            assert S.validate(S.canonical_pants_graph(sig), sig) == []


class TestSeamLengths:
    def test_equilateral(self):
        length = 2 * math.acosh(2.0)
        for seam in P.seam_lengths(length, length, length):
            assert math.isclose(seam, math.acosh(2.0), rel_tol=1e-12)

    def test_cusp_reduces_cosh(self):
        big = 2.0
        a3 = P.seam_lengths(big, big, 0.0)[2]
        c = math.cosh(big / 2) ** 2 + 1
        s = math.sinh(big / 2) ** 2
        assert math.isclose(math.cosh(a3), c / s, rel_tol=1e-12)

    def test_cusp_endpoint_is_infinite(self):
        a1, a2, a3 = P.seam_lengths(0.0, 1.0, 2.0)
        # seams 2 and 3 end on boundary 1, which is a cusp
        assert a2 == math.inf and a3 == math.inf
        assert a1 < math.inf

    def test_permutation_symmetry(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            l1, l2, l3 = rng.uniform(0.2, 5.0, size=3)
            base = P.seam_lengths(l1, l2, l3)
            perm = P.seam_lengths(l2, l3, l1)
            assert math.isclose(base[0], perm[2], rel_tol=1e-12)
            assert math.isclose(base[1], perm[0], rel_tol=1e-12)
            assert math.isclose(base[2], perm[1], rel_tol=1e-12)

    def test_matches_developed_feet(self):
        sp = P.build_pants(1.3, 2.1, 0.7)
        trig = P.seam_lengths(1.3, 2.1, 0.7)
        for k in range(3):
            (s1, f1), (s2, f2) = sp.seam_feet[k]
            assert math.isclose(G.dist(f1, f2), trig[k], rel_tol=1e-10)


class TestHolonomy:
    def test_once_punctured_torus_commutator(self):
        pg = S.canonical_pants_graph(Signature(1, 1))
        hol = S.holonomy_from_fn(pg, S.FNCoordinates({0: 1.0}, {0: 0.0}))
        comm = hol.evaluate_class([("curve:0", 1), ("glue:0", 1),
                                   ("curve:0", -1), ("glue:0", -1)])
        assert abs(abs(comm.trace()) - 2.0) <= 1e-9

    def test_three_cusped_sphere_all_parabolic(self):
        pg = S.canonical_pants_graph(Signature(0, 3))
        hol = S.holonomy_from_fn(pg, S.FNCoordinates({}, {}))
        for cusp in range(3):
            g = hol.evaluate_class([(f"cusp:{cusp}", 1)])
            assert abs(abs(g.trace()) - 2.0) <= 1e-12

    def test_length_recovery_hundred_samples(self):
        rng = np.random.default_rng(1)
        for trial in range(100):
            g, n = [(1, 1), (1, 2), (0, 4), (2, 0), (2, 1)][trial % 5]
            sig = Signature(g, n)
            pg, fn = S.sample_fn(sig, S.sample_seed(99, trial))
            hol = S.holonomy_from_fn(pg, fn)
            for cid in pg.curve_ids():
                got = G.translation_length(
                    hol.evaluate_class([(f"curve:{cid}", 1)]))
                assert abs(got - fn.length(cid)) <= 1e-9 * max(
                    1.0, fn.length(cid))

    def test_cusp_parabolicity_sampled(self):
        for trial in range(40):
            sig = Signature(*[(1, 1), (1, 2), (0, 5), (2, 1)][trial % 4])
            pg, fn = S.sample_fn(sig, S.sample_seed(7, trial))
            hol = S.holonomy_from_fn(pg, fn)
            for cusp in pg.cusp_slots():
                g = hol.evaluate_class([(f"cusp:{cusp}", 1)])
                assert abs(abs(g.trace()) - 2.0) <= 1e-9

    def test_twist_naturality(self):
        pg = S.canonical_pants_graph(Signature(1, 2))
        base = S.FNCoordinates({0: 1.7, 1: 0.9}, {0: 0.4, 1: 0.0})
        hol0 = S.holonomy_from_fn(pg, base)
        shifted = S.FNCoordinates(dict(base.lengths),
                                  {0: 0.4 + 1.7, 1: 0.0})
        hol1 = S.holonomy_from_fn(pg, shifted)
        for cid in pg.curve_ids():
            t0 = hol0.evaluate_class([(f"curve:{cid}", 1)]).trace()
            t1 = hol1.evaluate_class([(f"curve:{cid}", 1)]).trace()
            assert abs(abs(t0) - abs(t1)) <= 1e-9
        for cusp in pg.cusp_slots():
            t0 = hol0.evaluate_class([(f"cusp:{cusp}", 1)]).trace()
            t1 = hol1.evaluate_class([(f"cusp:{cusp}", 1)]).trace()
            assert abs(abs(t0) - abs(t1)) <= 1e-9

    def test_rejects_nonpositive_length(self):
        pg = S.canonical_pants_graph(Signature(1, 1))
        with pytest.raises(ValueError):
            S.holonomy_from_fn(pg, S.FNCoordinates({0: 0.0}, {0: 0.0}))

    def test_conjugated_word_same_length(self):
        pg = S.canonical_pants_graph(Signature(1, 2))
        pg2, fn = S.sample_fn(Signature(1, 2), 21)
        hol = S.holonomy_from_fn(pg2, fn)
        for cid in pg2.curve_ids():
            plain = S.curve_length(hol, [(f"curve:{cid}", 1)])
            conj = S.curve_length(hol, [("glue:1", 1), (f"curve:{cid}", 1),
                                        ("glue:1", -1)])
            assert abs(plain - conj) <= 1e-9 * max(1.0, plain)

    def test_curve_length_rejects_parabolic(self):
        pg = S.canonical_pants_graph(Signature(1, 1))
        hol = S.holonomy_from_fn(pg, S.FNCoordinates({0: 1.0}, {0: 0.0}))
        with pytest.raises(G.GeometryError):
            S.curve_length(hol, [("cusp:0", 1)])

    def test_word_validation(self):
        pg = S.canonical_pants_graph(Signature(1, 1))
        hol = S.holonomy_from_fn(pg, S.FNCoordinates({0: 1.0}, {0: 0.0}))
        with pytest.raises(ValueError):
            hol.evaluate_class([])
        with pytest.raises(ValueError):
            hol.evaluate_class([("curve:0", 1), ("curve:0", -1)])

    def test_doubled_arc_words_evaluate(self):
        pg = S.canonical_pants_graph(Signature(2, 1))
        pg2, fn = S.sample_fn(Signature(2, 1), 11)
        hol = S.holonomy_from_fn(pg2, fn)
        length = S.curve_length(hol, [("bnd:0:0", 1), ("bnd:0:2", 1)])
        assert length > 0


class TestSampler:
    def test_deterministic(self):
        a = S.sample_fn(Signature(1, 1), 42)
        b = S.sample_fn(Signature(1, 1), 42)
        assert a[1].lengths == b[1].lengths and a[1].twists == b[1].twists

    def test_default_length_range(self):
        sig = Signature(2, 1)
        hi = 2 * math.log(4 * area(sig))
        for i in range(50):
            _, fn = S.sample_fn(sig, S.sample_seed(3, i))
            for cid, L in fn.lengths.items():
                assert 0.05 <= L <= hi
                assert 0.0 <= fn.twist(cid) < L

    def test_pipeline_smoke_hundred(self):
        sig = Signature(2, 1)
        for i in range(100):
            pg, fn = S.sample_fn(sig, S.sample_seed(5, i))
            assert S.validate(pg, sig) == []
            S.holonomy_from_fn(pg, fn)

    def test_seed_splitting_changes_streams(self):
        seeds = {S.sample_seed(42, i) for i in range(100)}
        assert len(seeds) == 100
