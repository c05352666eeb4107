"""
Four-quadrant Riemann problem (configuration 5: four slip lines),
integrated with WENO-JS reconstruction and the Roe flux, then rendered
as a schlieren image.

Writes schlieren_demo.pgm and field_demo.csv into the working
directory.  Runs in well under a minute at 96^2.
"""

import numpy as np

from fvweno import (ReconstructionScheme, SchemeConfig, advance_to, emit_field_csv,
                    emit_schlieren, get_problem, init_problem, tableau_rk5)

problem = get_problem("riemann2d_config5")
config = SchemeConfig(scheme=ReconstructionScheme(5, "js"), method=2, flux="roe",
                      bc_x=problem.bc, bc_y=problem.bc, gamma=problem.gamma)

n = 96
field = init_problem(problem, problem.grid(n))
print(f"advancing {n}^2 cells to t = {problem.t_end_default} ...")
out = advance_to(field, problem.t_end_default, config, tableau_rk5())

rho = out.interior[0]
print(f"density range at t_end: [{rho.min():.3f}, {rho.max():.3f}]")
emit_schlieren(out, "schlieren_demo.pgm")
emit_field_csv(out, "field_demo.csv", problem.gamma)
print("wrote schlieren_demo.pgm and field_demo.csv")

# a crude ASCII rendering of the density-gradient magnitude
gx, gy = np.gradient(rho, out.spec.dx, out.spec.dy)
mag = np.hypot(gx, gy)
chars = " .:-=+*#%@"
step = max(1, n // 48)
for j in range(n - 1, -1, -2 * step):
    row = "".join(chars[min(int(mag[i, j] / mag.max() * (len(chars) - 1)), 9)]
                  for i in range(0, n, step))
    print(row)
