"""
Benchmark problems, exact solutions, convergence studies and emitters.

The problem catalogue covers the smooth cases (linear advection of a
density wave, the isentropic vortex, a fully nonlinear smooth wave
field) plus the four-quadrant Riemann problem whose states are loaded
from a checked-in data file.  Studies drive the solver over a
refinement sequence, compute L1 density errors against an exact or a
self-refined reference, and emit CSV/text tables, schlieren images and
stability-region samples.
"""

from __future__ import annotations

import configparser
import csv
import importlib.resources
import time
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from . import solver
from .euler import prim_to_cons
from .grid import (BoundaryCondition, CellField, GridSpec, cell_average_field,
                   create_field, l1_error, restrict)
from .rk import ButcherTableau, rk_step, stability_function, tableau_by_name
from .solver import SchemeConfig, advance_to
from .weno import ReconstructionScheme


# ----------------------------------------------------------------------
# Problem catalogue
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Problem:
    """A benchmark setup: domain, closures, initial and exact data.

    ``initial_primitive(x, y)`` returns pointwise (rho, u, v, p);
    ``exact_primitive(x, y, t)`` is present only when a closed-form
    solution exists.
    """

    name: str
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    bc: BoundaryCondition
    t_end_default: float
    initial_primitive: callable
    exact_primitive: callable = None
    gamma: float = 1.4
    exact_period: float = None

    def grid(self, n: int, ghost: int = 4) -> GridSpec:
        return GridSpec(n, n, self.x_min, self.x_max, self.y_min, self.y_max, ghost)


def _linear_advect_prim(x, y, t=0.0):
    # Unit-speed advection on the unit torus: reduce t mod 1 so integer
    # times reproduce the initial field bitwise.
    t = t % 1.0
    rho = 1.0 + 0.5 * np.sin(2.0 * np.pi * (x - t)) * np.cos(2.0 * np.pi * (y - t))
    one = np.ones_like(rho)
    return np.stack([rho, one, one, one])


def _vortex_prim(x, y, t=0.0, sigma=5.0, gamma=1.4):
    r2 = x * x + y * y
    dT = -(gamma - 1.0) * sigma ** 2 / (8.0 * gamma * np.pi ** 2) * np.exp(1.0 - r2)
    gauss = sigma / (2.0 * np.pi) * np.exp(0.5 * (1.0 - r2))
    rho = (1.0 + dT) ** (1.0 / (gamma - 1.0))
    u = 1.0 - y * gauss
    v = 1.0 + x * gauss
    p = (1.0 + dT) ** (gamma / (gamma - 1.0))
    return np.stack([rho, u, v, p])


def _nonlinear_smooth_prim(x, y, t=0.0):
    rho = 1.0 + 0.5 * np.sin(np.pi * (x + y))
    u = np.cos(np.pi * (x + 2.0 * y))
    v = 1.0 - 0.5 * np.sin(np.pi * (2.0 * x + y))
    p = 1.0 + 0.5 * np.sin(np.pi * (x - y))
    return np.stack([rho, u, v, p])


def load_riemann_config5():
    """Quadrant states and defaults for the configuration-5 Riemann problem."""
    ref = importlib.resources.files("fvweno").joinpath("data/riemann_config5.ini")
    parser = configparser.ConfigParser()
    parser.read_string(ref.read_text())
    dom = parser["domain"]
    quads = []
    for k in range(1, 5):
        sec = parser[f"quadrant{k}"]
        quads.append(tuple(float(sec[key]) for key in ("rho", "u", "v", "p")))
    meta = {key: float(dom[key]) for key in
            ("x_min", "x_max", "y_min", "y_max", "x_split", "y_split", "t_end", "gamma")}
    return quads, meta


def _make_riemann_problem():
    quads, meta = load_riemann_config5()
    xs, ys = meta["x_split"], meta["y_split"]

    def prim(x, y, t=0.0):
        X, Y = np.broadcast_arrays(np.asarray(x, dtype=np.float64),
                                   np.asarray(y, dtype=np.float64))
        right = X > xs
        top = Y > ys
        out = np.empty((4,) + X.shape)
        selectors = [right & top, ~right & top, ~right & ~top, right & ~top]
        for quad, sel in zip(quads, selectors):
            for comp in range(4):
                out[comp][sel] = quad[comp]
        return out

    return Problem("riemann2d_config5", meta["x_min"], meta["x_max"], meta["y_min"],
                   meta["y_max"], BoundaryCondition.EXTRAPOLATE, meta["t_end"], prim,
                   gamma=meta["gamma"])


PROBLEMS = {
    "linear_advect": Problem("linear_advect", 0.0, 1.0, 0.0, 1.0,
                             BoundaryCondition.PERIODIC, 1.0,
                             _linear_advect_prim, _linear_advect_prim),
    "isentropic_vortex": Problem("isentropic_vortex", -7.0, 7.0, -7.0, 7.0,
                                 BoundaryCondition.PERIODIC, 14.0,
                                 _vortex_prim, exact_period=14.0),
    "nonlinear_smooth": Problem("nonlinear_smooth", -1.0, 1.0, -1.0, 1.0,
                                BoundaryCondition.PERIODIC, 0.1,
                                _nonlinear_smooth_prim),
}
PROBLEMS["riemann2d_config5"] = _make_riemann_problem()


def get_problem(name: str) -> Problem:
    try:
        return PROBLEMS[name]
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; choose from {sorted(PROBLEMS)}") from None


def _check_domain(problem: Problem, spec: GridSpec) -> None:
    got = (spec.x_min, spec.x_max, spec.y_min, spec.y_max)
    want = (problem.x_min, problem.x_max, problem.y_min, problem.y_max)
    if not np.allclose(got, want, rtol=0.0, atol=1e-12):
        raise ValueError(f"grid domain {got} does not match problem domain {want}")


def init_problem(problem: Problem, spec: GridSpec) -> CellField:
    """Cell averages of the problem's initial data by tensor quadrature."""
    _check_domain(problem, spec)

    def pointwise(x, y):
        return prim_to_cons(problem.initial_primitive(x, y), problem.gamma)

    return create_field(spec, cell_average_field(spec, pointwise))


def exact_solution(problem: Problem, spec: GridSpec, t: float) -> CellField:
    """Cell-averaged exact solution where one is available."""
    _check_domain(problem, spec)
    if problem.exact_primitive is not None:
        def pointwise(x, y):
            return prim_to_cons(problem.exact_primitive(x, y, t), problem.gamma)
        out = create_field(spec, cell_average_field(spec, pointwise))
        out.time = t
        return out
    if problem.exact_period is not None:
        cycles = t / problem.exact_period
        if abs(cycles - round(cycles)) > 1e-12:
            raise ValueError(f"{problem.name}: exact solution only at multiples of "
                             f"{problem.exact_period}, not t={t}")
        out = init_problem(problem, spec)
        out.time = t
        return out
    raise ValueError(f"{problem.name} has no exact solution")


def eoc(error_coarse: float, error_fine: float) -> float:
    """Experimental order of convergence under grid doubling."""
    if error_coarse <= 0.0 or error_fine <= 0.0:
        raise ValueError("EOC needs positive errors")
    return float(np.log(error_coarse / error_fine) / np.log(2.0))


# ----------------------------------------------------------------------
# Convergence studies
# ----------------------------------------------------------------------

@dataclass
class StudySeries:
    """One scheme variant across the refinement sequence."""

    label: str
    grids: list
    errors: list
    eocs: list
    wall_s: list
    failures: dict = dataclass_field(default_factory=dict)


@dataclass
class ConvergenceReport:
    problem: str
    reference: str
    series: list

    def by_label(self, label: str) -> StudySeries:
        for s in self.series:
            if s.label == label:
                return s
        raise KeyError(label)


def _series_from_errors(label, grids, errors, walls, failures) -> StudySeries:
    eocs = []
    for k in range(1, len(errors)):
        ec, ef = errors[k - 1], errors[k]
        eocs.append(eoc(ec, ef) if (ec is not None and ef is not None
                                    and ec > 0 and ef > 0) else None)
    return StudySeries(label, list(grids), errors, eocs, walls, failures)


def default_tableau(scheme: ReconstructionScheme) -> ButcherTableau:
    """Pair the reconstruction order with the matching time integrator."""
    return tableau_by_name("rk5" if scheme.order == 5 else "rk7")


def run_convergence_study(problem: Problem, configs, grids, reference: str = "exact",
                          t_end: float = None, tableau: ButcherTableau = None,
                          ref_factor: int = 2, ref_field: CellField = None) -> ConvergenceReport:
    """L1 density errors and EOCs over a refinement sequence.

    ``reference='exact'`` compares against the closed-form solution;
    ``'self_refined'`` computes one fine reference with the strongest
    variant (method 3, seventh-order Z weights, rk7) on a grid
    ``ref_factor`` times the finest study grid and restricts it down.
    Solver failures are recorded per grid and the study continues.
    """
    grids = list(grids)
    if t_end is None:
        t_end = problem.t_end_default
    if reference not in ("exact", "self_refined"):
        raise ValueError(f"unknown reference policy {reference!r}")

    reference_fields = {}
    if reference == "exact":
        for n in grids:
            reference_fields[n] = exact_solution(problem, problem.grid(n), t_end)
    else:
        if ref_field is None:
            ref_config = SchemeConfig(scheme=ReconstructionScheme(7, "z"), method=3,
                                      flux=solver.FLUX_LAX_FRIEDRICHS,
                                      bc_x=problem.bc, bc_y=problem.bc,
                                      gamma=problem.gamma)
            n_ref = ref_factor * max(grids)
            ref_field = advance_to(init_problem(problem, problem.grid(n_ref)),
                                   t_end, ref_config, tableau_by_name("rk7"))
        for n in grids:
            reference_fields[n] = restrict(ref_field, ref_field.spec.nx // n)

    series = []
    for config in configs:
        errors, walls, failures = [], [], {}
        for n in grids:
            spec = problem.grid(n)
            start = time.perf_counter()
            try:
                tab = tableau if tableau is not None else default_tableau(config.scheme)
                result = advance_to(init_problem(problem, spec), t_end, config, tab)
                errors.append(l1_error(result, reference_fields[n], component=0))
            except Exception as err:
                errors.append(None)
                failures[n] = f"{type(err).__name__}: {err}"
            walls.append(time.perf_counter() - start)
        series.append(_series_from_errors(config.label, grids, errors, walls, failures))
    return ConvergenceReport(problem.name, reference, series)


# ----------------------------------------------------------------------
# Performance comparison
# ----------------------------------------------------------------------

def advance_steps(field: CellField, n_steps: int, config: SchemeConfig,
                  tableau: ButcherTableau) -> CellField:
    """March a fixed number of CFL steps (no final-time clipping)."""
    current = field.copy()
    rhs = lambda f: solver.compute_rhs(f, config)
    for _ in range(n_steps):
        current = rk_step(current, rhs, tableau, solver.compute_dt(current, config))
    return current


def perf_report(problem: Problem, methods, grid_n: int, scheme: ReconstructionScheme,
                steps: int = 10, repeats: int = 3, flux: str = solver.FLUX_LAX_FRIEDRICHS):
    """Median wall time per method, normalized by method 1.

    Every method advances the same initial field by the same number of
    steps; one warm-up run per method is discarded so JIT compilation
    does not pollute the medians.
    """
    tableau = default_tableau(scheme)
    spec = problem.grid(grid_n)
    base = init_problem(problem, spec)
    medians = {}
    for method in methods:
        config = SchemeConfig(scheme=scheme, method=method, flux=flux,
                              bc_x=problem.bc, bc_y=problem.bc, gamma=problem.gamma)
        advance_steps(base, 1, config, tableau)
        times = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            advance_steps(base, steps, config, tableau)
            times.append(time.perf_counter() - t0)
        medians[method] = float(np.median(times))
    base_time = medians[1] if 1 in medians else next(iter(medians.values()))
    return {m: medians[m] / base_time for m in medians}, medians


# ----------------------------------------------------------------------
# Emitters
# ----------------------------------------------------------------------

def emit_schlieren(field: CellField, path) -> None:
    """8-bit binary PGM of the density-gradient magnitude.

    Pixel value is 255*(1 - |grad rho| / max |grad rho|) with central
    differences; row 0 of the image is the y_max edge of the domain.
    """
    rho = field.interior[0]
    gx, gy = np.gradient(rho, field.spec.dx, field.spec.dy)
    mag = np.hypot(gx, gy)
    peak = mag.max()
    if peak > 0.0:
        shade = 255.0 * (1.0 - mag / peak)
    else:
        shade = np.full_like(mag, 255.0)
    # mag[i, j] has x varying along rows; image rows run top (y_max) down.
    img = np.rint(shade.T[::-1, :]).astype(np.uint8)
    ny, nx = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{nx} {ny}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def emit_field_csv(field: CellField, path, gamma: float = 1.4) -> None:
    """Per-cell x, y, rho, u, v, p table for contour plotting."""
    from .euler import cons_to_prim
    w = cons_to_prim(field.interior, gamma)
    xc = field.spec.x_centers()
    yc = field.spec.y_centers()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "rho", "u", "v", "p"])
        for i in range(field.spec.nx):
            for j in range(field.spec.ny):
                writer.writerow([f"{xc[i]:.12g}", f"{yc[j]:.12g}",
                                 *(f"{w[c, i, j]:.17g}" for c in range(4))])


def stability_boundary(tableau: ButcherTableau, angles: int = 720, tol: float = 1e-10,
                       r_max: float = 12.0):
    """Sample the |R(z)| = 1 contour by radial bisection from the origin.

    For each direction the outermost inside->outside crossing below
    ``r_max`` is refined to ``tol``; directions that leave the region
    immediately (|R| > 1 for all sampled radii) contribute no sample.
    """
    points = []
    thetas = np.linspace(0.0, 2.0 * np.pi, angles, endpoint=False)
    for theta in thetas:
        direction = np.exp(1j * theta)
        radii = np.linspace(0.0, r_max, 481)
        inside = np.abs(stability_function(tableau, radii * direction)) <= 1.0
        crossings = np.nonzero(inside[:-1] & ~inside[1:])[0]
        if len(crossings) == 0:
            continue
        lo = radii[crossings[-1]]
        hi = radii[crossings[-1] + 1]
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if abs(stability_function(tableau, mid * direction)) <= 1.0:
                lo = mid
            else:
                hi = mid
        z = 0.5 * (lo + hi) * direction
        points.append((z.real, z.imag))
    return np.array(points)


def emit_stability_region(tableau: ButcherTableau, path, angles: int = 720,
                          tol: float = 1e-10) -> np.ndarray:
    """Write (Re z, Im z) samples of the stability boundary as CSV."""
    pts = stability_boundary(tableau, angles=angles, tol=tol)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["re", "im"])
        for re, im in pts:
            writer.writerow([f"{re:.12g}", f"{im:.12g}"])
    return pts


def write_report_csv(report: ConvergenceReport, path, label: str = None) -> None:
    """CSV with columns grid, l1_error, eoc, wall_s for one series."""
    series = report.by_label(label) if label else report.series[0]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["grid", "l1_error", "eoc", "wall_s"])
        for k, n in enumerate(series.grids):
            err = series.errors[k]
            e = "" if err is None else f"{err:.6e}"
            o = "" if k == 0 or series.eocs[k - 1] is None else f"{series.eocs[k - 1]:.3f}"
            writer.writerow([n, e, o, f"{series.wall_s[k]:.3f}"])


def parse_report_csv(path):
    """Inverse of :func:`write_report_csv` (grids, errors, eocs, walls)."""
    grids, errors, eocs, walls = [], [], [], []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            grids.append(int(row["grid"]))
            errors.append(float(row["l1_error"]) if row["l1_error"] else None)
            eocs.append(float(row["eoc"]) if row["eoc"] else None)
            walls.append(float(row["wall_s"]))
    return grids, errors, eocs[1:], walls


def format_table(report: ConvergenceReport) -> str:
    """Aligned text table mirroring the usual convergence-table layout."""
    lines = [f"problem: {report.problem}   reference: {report.reference}"]
    header = ["grid"]
    for s in report.series:
        header += [f"{s.label} L1", "EOC"]
    widths = [max(10, len(h) + 2) for h in header]
    lines.append("".join(h.rjust(w) for h, w in zip(header, widths)))
    n_rows = len(report.series[0].grids)
    for k in range(n_rows):
        row = [f"{report.series[0].grids[k]}^2"]
        for s in report.series:
            err = s.errors[k]
            row.append("failed" if err is None else f"{err:.5e}")
            if k == 0 or s.eocs[k - 1] is None:
                row.append("-")
            else:
                row.append(f"{s.eocs[k - 1]:.2f}")
        lines.append("".join(v.rjust(w) for v, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# Acceptance windows (final-pair EOC of each refinement sequence)
# ----------------------------------------------------------------------

ACCEPTANCE_EOC_WINDOWS = {
    ("linear_advect", "z5"): {1: (4.7, 5.3), 2: (3.8, 4.8), 3: (4.7, 5.3)},
    ("linear_advect", "z7"): {1: (6.6, 7.3), 2: (3.8, 4.5), 3: (6.0, np.inf)},
    ("isentropic_vortex", "z5"): {1: (1.9, 2.9), 2: (4.0, 5.5), 3: (4.0, 5.5)},
    ("isentropic_vortex", "z7"): {1: (-np.inf, 2.5), 3: (5.5, np.inf)},
    ("nonlinear_smooth", "z5"): {1: (1.8, 2.2), 2: (4.0, np.inf), 3: (4.0, np.inf)},
}


def check_eoc_window(problem_name: str, scheme_name: str, method: int,
                     final_eoc: float) -> bool:
    """True when the final-pair EOC lies inside the published window."""
    windows = ACCEPTANCE_EOC_WINDOWS.get((problem_name, scheme_name))
    if windows is None or method not in windows:
        raise KeyError(f"no acceptance window for {problem_name}/{scheme_name}/m{method}")
    lo, hi = windows[method]
    return lo <= final_eoc <= hi
