# Ideal triangles and the shear of a shared edge
#
# Every ideal triangle in the upper half-plane is isometric to every
# other, and it carries a circle tangent to its three sides.  The
# tangency points are the shear points; the signed distance between the
# shear points of two triangles sharing an edge is their shear, which
# also equals a log cross-ratio of the four ideal vertices.

import math

from shearlab import (IdealTriangle, Geodesic, IDEAL_INRADIUS, incircle,
                      shear, shear_points, INF)

# The symmetric triangle with vertices -1, 1, infinity.
tri = IdealTriangle(-1.0, 1.0, INF)
center, radius = incircle(tri)
print("incircle center:", center)
print("incircle radius:", radius, "= log(3)/2 =", math.log(3) / 2)

# The inradius never depends on the triangle.
other = IdealTriangle(-17.3, 0.2, 41.0)
print("another triangle, same radius:", incircle(other)[1] == IDEAL_INRADIUS)

# The three tangency points, one on each side.
for side, pt in zip(("[-1,1]", "[1,inf]", "[inf,-1]"), shear_points(tri)):
    print(f"shear point on {side}: {pt}")

# Two triangles glued along the imaginary axis.  The symmetric square
# configuration has shear zero; sliding the right apex changes it.
left = IdealTriangle(-1.0, 0.0, INF)
edge = Geodesic(0.0, INF)
for apex in (1.0, 3.0, 9.0):
    right = IdealTriangle(0.0, apex, INF)
    via_cr = shear(left, right, edge)
    via_pts = shear(left, right, edge, method="shear_points")
    print(f"right apex at {apex}: shear {via_cr:+.6f} "
          f"(tangency-point path {via_pts:+.6f})")

# The two computations are independent implementations of the same
# number: one is a cross-ratio, the other measures along the edge.
