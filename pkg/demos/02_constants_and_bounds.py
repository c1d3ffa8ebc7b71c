# The named constants and the self-audit
#
# All the closed-form quantities in one place: collar widths, the
# inscribed-circle area constant, the shear-point-free parameters, and
# the headline bound on the maximum shear.  The audit re-derives each
# claimed inequality and reports the true values; two of the claimed
# bounds fail as printed (see the audit rows), which the library reports
# rather than papering over.

import math

from shearlab import (RHO, Signature, area, bavard_bound, collar_width,
                      constants_audit, delta1, main_bound,
                      rough_cusped_bound, shear_free_params,
                      topology_constants)

print("rho = log(3)/4 =", RHO)
print("delta1 =", delta1(), "(area between incircle and contact triangle)")

params = shear_free_params()
print("rho' =", params.rho_prime)
print("delta2 =", params.delta2, " delta3 =", params.delta3)
print("log(2/delta2) =", math.log(2 / params.delta2))

for g, n in ((0, 3), (1, 1), (2, 0), (2, 1)):
    sig = Signature(g, n)
    print(f"\nsignature ({g},{n}):")
    print("  area:", area(sig))
    print("  loop bound:", bavard_bound(sig))
    print("  max-shear bound:", main_bound(sig))
    if n > 0:
        print("  rough cusped bound at systole 1:",
              rough_cusped_bound(sig, 1.0))

print("\ncollar widths:")
for length in (0.1, 1.0, 2 * math.asinh(1.0), 4.0):
    print(f"  w({length:.4f}) = {collar_width(length):.6f}")

print("\nself-audit:")
for row in constants_audit().rows:
    mark = "ok " if row.passed else "FAIL"
    print(f"  [{mark}] {row.name}: value {row.value:.6f} "
          f"vs bound {row.bound:.6f}")

tc = topology_constants(Signature(2, 1))
print("\nper-regime spike constants for (2,1):")
for pair, val in sorted(tc.C_table.items()):
    print(f"  {pair[0]}/{pair[1]}: {val:.6f}")
