# # Convergence on a clamped steel sheet
#
# A 250 x 500 mm steel sheet, 0.1 mm thick, is clamped on all four edges
# and carries a uniform 0.8 Pa pressure.  The centre deflection of the
# clamped rectangle has a long-known series value, which makes this a good
# first check of the polynomial trial space.
#
# Run with ``python demos/convergence_clamped_sheet.py``.

import time

from platemwr import LoadSpec, MaterialSpec, PlateProblem, PlateRect, SolverSettings, full_edges, solve
from platemwr.oracle_fdm import compare, solve_fdm

REFERENCE = 4.1214e-4  # m, series value for b/a = 2

steel = MaterialSpec.isotropic(E=210e9, nu=0.3, t=0.1e-3)
sheet = PlateRect(0.25, 0.5)

# ## Fixed orders
#
# Each order n uses every monomial x^p y^q with p + q <= n; the clamped
# conditions are collocated along the edges and remove most of them.  What
# is left (k functions) is the admissible trial space.

print(f"{'n':>3} {'r':>4} {'k':>4} {'w_max (mm)':>12} {'error':>9} {'time':>8}")
for n in (6, 8, 10, 12, 14):
    problem = PlateProblem(steel, sheet, full_edges(), [LoadSpec.uniform(0.8)], settings=SolverSettings(order=n))
    t0 = time.perf_counter()
    sol = solve(problem)
    w, _ = sol.max_abs()
    dt = time.perf_counter() - t0
    print(f"{n:>3} {sol.r:>4} {sol.k:>4} {w * 1e3:>12.6f} {100 * (w / REFERENCE - 1):>+8.3f}% {dt:>7.3f}s")

# ## Adaptive order
#
# With ``order="auto"`` the order climbs in steps of two until the peak
# moves by less than 0.1 % between consecutive orders.

auto = PlateProblem(steel, sheet, full_edges(), [LoadSpec.uniform(0.8)])
sol = solve(auto)
print()
for row in sol.trace:
    print(f"  n = {row['n']:>2}: w_max = {row['omega_max'] * 1e3:.6f} mm")
print(" ", sol.termination)

# ## An independent check
#
# A 201 x 201 finite-difference grid gives a second opinion that shares no
# code with the polynomial solver.

grid = solve_fdm(auto, 201, 201)
cmp = compare(sol, grid)
print(f"\nfinite differences: {cmp.omega_max_ref * 1e3:.6f} mm, difference {100 * cmp.rel_diff:.3f} %")
