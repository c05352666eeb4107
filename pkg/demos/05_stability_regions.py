"""
Absolute-stability regions of the two Runge-Kutta integrators.

Samples the |R(z)| = 1 contour of the 6-stage fifth-order and the
11-stage seventh-order method, writes both as CSV, and sketches them
in ASCII.  The negative real-axis extent is what limits the usable
CFL number together with the spatial spectrum.
"""

import numpy as np

from fvweno import stability_function, tableau_rk5, tableau_rk7
from fvweno.harness import emit_stability_region

for name, tab in (("rk5", tableau_rk5()), ("rk7", tableau_rk7())):
    pts = emit_stability_region(tab, f"stability_{name}.csv", angles=360)
    reals = pts[np.abs(pts[:, 1]) < 1e-8][:, 0]
    print(f"{name}: {len(pts)} boundary samples, negative real-axis reach "
          f"{reals.min():.4f}, written to stability_{name}.csv")

print()
print("combined ASCII sketch ('5' = rk5 only, '7' = rk7 only, 'B' = both):")
re = np.linspace(-6.0, 1.5, 76)
im = np.linspace(3.6, -3.6, 37)
Z = re[None, :] + 1j * im[:, None]
inside5 = np.abs(stability_function(tableau_rk5(), Z)) <= 1.0
inside7 = np.abs(stability_function(tableau_rk7(), Z)) <= 1.0
for r5, r7 in zip(inside5, inside7):
    print("".join("B" if a and b else "5" if a else "7" if b else "."
                  for a, b in zip(r5, r7)))
