# Flip moves and the minimax flip search
#
# Punctured spheres glued as chains carry an ideal triangulation with
# all arcs between cusps.  Its edges can be flipped, shears transforming
# by the standard local rule, and a greedy search over flips drives the
# maximum absolute shear down, upper-bounding the minimax shear.

from shearlab import (FNCoordinates, Signature, build_cusped_chain,
                      canonical_pants_graph, cusp_sums, develop_walk,
                      flip, flippable, holonomy_from_fn,
                      minimax_flip_search, sample_fn, translation_length)
from shearlab.cusped import max_abs_shear

graph, fn = sample_fn(Signature(0, 5), seed=3)
hol = holonomy_from_fn(graph, fn)
cx, sigma, walks = build_cusped_chain(hol)
print("faces:", cx.num_faces(), " edges:", len(cx.edges()))
print("shears:", {k: round(v, 4) for k, v in sigma.items()})
print("cusp sums:", {k: f"{v:.1e}" for k, v in cusp_sums(cx, sigma).items()})

# the developing map recovers the pants curve from its dual cycle
length = translation_length(develop_walk(cx, sigma, walks[0]))
print("first pants curve recovered:", round(length, 9),
      "requested:", round(fn.length(0), 9))

# one flip: the flipped shear negates, neighbours shift, sums survive
e = next(e for e in cx.edges() if flippable(cx, e))
cx2, sigma2 = flip(cx, sigma, e)
print("\nafter flipping", e, ":",
      {k: round(v, 4) for k, v in sigma2.items()})
print("cusp sums still:", {k: f"{v:.1e}"
                           for k, v in cusp_sums(cx2, sigma2).items()})

# greedy descent with seeded kicks
start = max_abs_shear(sigma)
_, best_sigma, best, trail = minimax_flip_search(cx, sigma, budget=80,
                                                 seed=11)
print(f"\nminimax search: start {start:.4f} -> best {best:.4f} "
      f"after {len(trail)} flips")

# the thrice-punctured sphere is already optimal: all shears vanish
g3 = canonical_pants_graph(Signature(0, 3))
h3 = holonomy_from_fn(g3, FNCoordinates({}, {}))
cx3, s3, _ = build_cusped_chain(h3)
_, _, best3, trail3 = minimax_flip_search(cx3, s3, budget=10, seed=1)
print("thrice-punctured sphere: optimum", best3, "with", len(trail3),
      "flips")

# round trip: the shears alone rebuild the surface
from shearlab import develop_from_shears
dev = develop_from_shears(cx, sigma)
length2 = translation_length(develop_walk(dev.cx, dev.sigma, walks[0]))
print("\nround trip through develop_from_shears:",
      round(length2, 9), "=", round(fn.length(0), 9))
