"""
High-order WENO finite volume solver for 2D conservation laws on
uniform Cartesian grids, with the average/point corrections that
restore full spatial order for nonlinear systems.
"""

from .grid import (BoundaryCondition, CellField, GridSpec, cell_average_field,
                   create_field, fill_ghost, l1_error, pairwise_sum, restrict)
from .weno import (ReconstructionScheme, candidate_values, nonlinear_weights,
                   reconstruct_field_direction, reconstruct_pair, smoothness_indicators)
from .transform import avg_to_point_line, avg_to_point_multi, point_to_avg_line
from .euler import (UnphysicalStateError, cons_to_prim, lax_friedrichs, max_signal_speed,
                    physical_flux, prim_to_cons, roe_flux, sound_speed)
from .rk import (ButcherTableau, rk_step, stability_function, stability_poly_coeffs,
                 tableau_by_name, tableau_rk5, tableau_rk7)
from .solver import SchemeConfig, advance_to, compute_dt, compute_rhs
from .harness import (ConvergenceReport, Problem, PROBLEMS, default_tableau,
                      emit_field_csv, emit_schlieren, emit_stability_region, eoc,
                      exact_solution, get_problem, init_problem, perf_report,
                      run_convergence_study, stability_boundary)

__version__ = "0.1.0"
