# # How thick must a plywood shelf be?
#
# A 575 x 275 mm birch plywood shelf sits in slots cut in two side panels.
# The slots grip the middle 80 % of each short edge; the long edges are
# free.  Twenty kilograms of books are spread over the shelf, and the sag
# must stay below span/144 (about 4 mm).
#
# Run with ``python demos/bookcase_thickness.py``.

from platemwr import evaluate_problem, load_problem, sweep

shelf = load_problem("bookcase")
rig = shelf.rigidities
print(f"Dx = {rig.Dx:.2f} N m, Dy = {rig.Dy:.2f} N m, H = {rig.H:.2f} N m at t = {shelf.material.t * 1e3:g} mm")

# ## The bundled design
#
# The shipped configuration uses 6 mm plywood.

rep = evaluate_problem(shelf)
res = rep.results[0]
print(f"6 mm shelf: sag {res.measured * 1e3:.2f} mm, limit {res.limit * 1e3:.3f} mm -> {rep.verdict}")

# ## Thinner stock
#
# Bending stiffness scales with t^3, so halving the thickness multiplies
# the sag by roughly eight.  A sweep shows where the rule starts to bite.

print(f"\n{'t (mm)':>7} {'sag (mm)':>9} {'margin':>8}  verdict")
for rep in sweep(shelf, "thickness", [0.003, 0.004, 0.0045, 0.005, 0.006, 0.009]):
    r = rep.results[0]
    print(f"{rep.value * 1e3:>7.1f} {r.measured * 1e3:>9.2f} {100 * r.margin:>+7.0f}%  {rep.verdict}")
