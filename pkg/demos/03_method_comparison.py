"""
Why the corrections exist: on a genuinely nonlinear smooth flow the
plain dimension-by-dimension scheme converges at second order while
methods 2 and 3 recover high order, at ~10-15% extra cost.

Runs the smooth nonlinear wave field on two grids against a
self-refined reference and prints the convergence table.  Takes a
couple of minutes on one core.
"""

import time

from fvweno import ReconstructionScheme, SchemeConfig, get_problem, run_convergence_study
from fvweno.harness import format_table

problem = get_problem("nonlinear_smooth")
scheme = ReconstructionScheme(5, "z")
configs = [SchemeConfig(scheme=scheme, method=m, bc_x=problem.bc, bc_y=problem.bc)
           for m in (1, 2, 3)]

t0 = time.perf_counter()
report = run_convergence_study(problem, configs, (64, 128), reference="self_refined",
                               t_end=0.1, ref_factor=2)
print(format_table(report))
print(f"elapsed: {time.perf_counter() - t0:.0f}s")
print()
print("method 1 is stuck near second order; methods 2 and 3 converge at ~4-5.")
print("Larger grids sharpen the contrast; see the acceptance suite for the "
      "64/128/256 version.")
