import numpy as np
import pytest

from fvweno.grid import BoundaryCondition, GridSpec, fill_ghost, restrict
from fvweno.harness import (PROBLEMS, check_eoc_window, default_tableau,
                            emit_field_csv, emit_schlieren, emit_stability_region,
                            eoc, exact_solution, format_table, get_problem, init_problem,
                            load_riemann_config5, parse_report_csv, perf_report,
                            run_convergence_study, stability_boundary, write_report_csv)
from fvweno.rk import stability_function, tableau_rk5, tableau_rk7
from fvweno.solver import SchemeConfig
from fvweno.weno import ReconstructionScheme

Z5 = ReconstructionScheme(5, "z")


def test_problem_catalogue_and_lookup():
    assert {"linear_advect", "isentropic_vortex", "nonlinear_smooth",
            "riemann2d_config5"} <= set(PROBLEMS)
    assert get_problem("linear_advect").t_end_default == 1.0
    assert get_problem("isentropic_vortex").t_end_default == 14.0
    assert get_problem("nonlinear_smooth").t_end_default == 0.1
    with pytest.raises(ValueError):
        get_problem("kelvin_helmholtz")


def test_linear_advect_pointwise_anchor():
    prob = get_problem("linear_advect")
    w = prob.initial_primitive(np.array(0.25), np.array(0.0))
    assert w[0] == pytest.approx(1.5, rel=1e-15)  # 1 + 0.5 sin(pi/2) cos(0)
    assert w[1] == 1.0 and w[2] == 1.0 and w[3] == 1.0


def test_vortex_pointwise_anchors():
    prob = get_problem("isentropic_vortex")
    gamma = 1.4
    sigma = 5.0
    dT = -(gamma - 1.0) * sigma ** 2 / (8.0 * gamma * np.pi ** 2) * np.e
    w = prob.initial_primitive(np.array(0.0), np.array(0.0))
    assert w[0] == pytest.approx((1.0 + dT) ** (1.0 / (gamma - 1.0)), rel=1e-14)
    assert abs(w[0] - 0.49379) < 5e-5
    assert w[3] == pytest.approx((1.0 + dT) ** (gamma / (gamma - 1.0)), rel=1e-14)
    assert w[1] == 1.0 and w[2] == 1.0  # velocity perturbation vanishes at the center


def test_nonlinear_smooth_pointwise_anchor():
    prob = get_problem("nonlinear_smooth")
    w = prob.initial_primitive(np.array(0.0), np.array(0.0))
    assert w[1] == pytest.approx(1.0)   # cos(0)
    assert w[2] == pytest.approx(1.0)   # 1 - sin(0)/2
    assert w[3] == pytest.approx(1.0)


def test_init_problem_domain_check():
    prob = get_problem("linear_advect")
    with pytest.raises(ValueError):
        init_problem(prob, GridSpec(16, 16, 0.0, 2.0, 0.0, 1.0))


def test_exact_solution_periodicity_bitwise():
    prob = get_problem("linear_advect")
    spec = prob.grid(16)
    f0 = exact_solution(prob, spec, 0.0)
    f1 = exact_solution(prob, spec, 1.0)
    assert np.array_equal(f0.interior, f1.interior)


def test_exact_solution_translation():
    prob = get_problem("linear_advect")
    spec = prob.grid(32)
    half = exact_solution(prob, spec, 0.5)
    init = init_problem(prob, spec)
    # rho at (x, y) equals initial rho at the wrapped (x-1/2, y-1/2):
    # on a 32-cell grid that is a shift by 16 cells in each index.
    shifted = np.roll(init.interior[0], shift=(16, 16), axis=(0, 1))
    assert np.allclose(half.interior[0], shifted, rtol=1e-13)


def test_vortex_exact_only_at_period_multiples():
    prob = get_problem("isentropic_vortex")
    spec = prob.grid(16)
    ref = exact_solution(prob, spec, 14.0)
    assert np.array_equal(ref.interior, init_problem(prob, spec).interior)
    with pytest.raises(ValueError):
        exact_solution(prob, spec, 7.0)


def test_nonlinear_smooth_has_no_exact():
    prob = get_problem("nonlinear_smooth")
    with pytest.raises(ValueError):
        exact_solution(prob, prob.grid(16), 0.1)


def test_eoc_values():
    assert eoc(2.95314e-5, 7.03771e-6) == pytest.approx(2.07, abs=5e-3)
    assert eoc(1.55933e-4, 8.17206e-6) == pytest.approx(4.25, abs=5e-3)
    assert eoc(1.0, 1.0) == 0.0
    with pytest.raises(ValueError):
        eoc(0.0, 1.0)


def test_riemann_config5_data():
    quads, meta = load_riemann_config5()
    assert len(quads) == 4
    # four slip lines: equal pressure in all quadrants
    assert all(q[3] == 1.0 for q in quads)
    assert meta["t_end"] == pytest.approx(0.23)
    assert meta["x_split"] == 0.5
    prob = get_problem("riemann2d_config5")
    assert prob.bc is BoundaryCondition.EXTRAPOLATE
    f = init_problem(prob, prob.grid(8))
    # quadrant centers carry the tabulated densities (rho1, rho2, rho3, rho4)
    assert f.interior[0, 6, 6] == pytest.approx(quads[0][0], rel=1e-12)
    assert f.interior[0, 1, 6] == pytest.approx(quads[1][0], rel=1e-12)
    assert f.interior[0, 1, 1] == pytest.approx(quads[2][0], rel=1e-12)
    assert f.interior[0, 6, 1] == pytest.approx(quads[3][0], rel=1e-12)


def test_run_convergence_study_basic(tmp_path):
    prob = get_problem("linear_advect")
    configs = [SchemeConfig(scheme=Z5, method=1, bc_x=prob.bc, bc_y=prob.bc)]
    rep = run_convergence_study(prob, configs, (8, 16), reference="exact", t_end=0.05)
    series = rep.series[0]
    assert series.errors[0] > series.errors[1] > 0
    assert len(series.eocs) == 1
    path = tmp_path / "report.csv"
    write_report_csv(rep, path)
    grids, errors, eocs, walls = parse_report_csv(path)
    assert grids == [8, 16]
    assert errors[0] == pytest.approx(series.errors[0], rel=1e-5)
    assert eocs[0] == pytest.approx(series.eocs[0], abs=5e-4)
    text = format_table(rep)
    assert "z5-m1-lf" in text and "8^2" in text


def test_run_convergence_study_isolates_failures():
    prob = get_problem("linear_advect")
    configs = [SchemeConfig(scheme=Z5, method=1, bc_x=prob.bc, bc_y=prob.bc, max_steps=3)]
    rep = run_convergence_study(prob, configs, (8, 16), reference="exact", t_end=0.05)
    series = rep.series[0]
    assert series.errors[0] is not None       # three steps suffice on the coarse grid
    assert series.errors[1] is None           # the fine grid needs five: guard trips
    assert 16 in series.failures
    assert series.eocs == [None]


def test_self_refined_reference_restriction_commutes():
    prob = get_problem("nonlinear_smooth")
    f = init_problem(prob, prob.grid(32))
    direct = restrict(f, 4)
    staged = restrict(restrict(f, 2), 2)
    assert np.allclose(direct.interior, staged.interior, rtol=2e-15, atol=0)


def test_default_tableau_pairing():
    assert default_tableau(Z5).name == "rk5"
    assert default_tableau(ReconstructionScheme(7, "js")).name == "rk7"


def test_perf_report_normalization():
    prob = get_problem("linear_advect")
    ratios, medians = perf_report(prob, (1, 2), 16, Z5, steps=2, repeats=1)
    assert ratios[1] == 1.0
    assert ratios[2] > 0.0
    assert medians[1] > 0.0


def test_emit_schlieren_constant_white(tmp_path):
    prob = get_problem("linear_advect")
    spec = prob.grid(8)
    f = init_problem(prob, spec)
    f.interior[0] = 1.0  # flatten the density
    path = tmp_path / "flat.pgm"
    emit_schlieren(f, path)
    raw = path.read_bytes()
    header, pixels = raw.split(b"255\n", 1)
    assert header.startswith(b"P5\n8 8\n")
    assert set(pixels) == {255}


def test_emit_schlieren_jump_band_and_orientation(tmp_path):
    prob = get_problem("riemann2d_config5")
    spec = prob.grid(16)
    f = init_problem(prob, spec)
    f.interior[0] = 1.0
    f.interior[0, 8:, :] = 2.0  # steep x-jump at column 8
    path = tmp_path / "jump.pgm"
    emit_schlieren(f, path)
    raw = path.read_bytes()
    pixels = np.frombuffer(raw.split(b"255\n", 1)[1], dtype=np.uint8).reshape(16, 16)
    # vertical band: dark pixels concentrated at image columns 7..8
    assert pixels[:, 7:9].min() == 0
    assert pixels[:, :5].min() == 255 and pixels[:, 11:].min() == 255


def test_emit_schlieren_row_zero_is_ymax(tmp_path):
    prob = get_problem("riemann2d_config5")
    spec = prob.grid(16)
    f = init_problem(prob, spec)
    yc = spec.y_centers()
    f.interior[:] = 1.0
    f.interior[0] = 1.0 + np.broadcast_to((yc ** 2)[None, :], (16, 16))
    path = tmp_path / "grad.pgm"
    emit_schlieren(f, path)
    pixels = np.frombuffer(path.read_bytes().split(b"255\n", 1)[1],
                           dtype=np.uint8).reshape(16, 16)
    # |grad rho| grows with y, so the top image row (y_max) is darkest
    assert pixels[0].mean() < pixels[-1].mean()


def test_emit_field_csv(tmp_path):
    prob = get_problem("linear_advect")
    f = init_problem(prob, prob.grid(4))
    path = tmp_path / "field.csv"
    emit_field_csv(f, path)
    rows = path.read_text().strip().splitlines()
    assert rows[0] == "x,y,rho,u,v,p"
    assert len(rows) == 1 + 16


@pytest.mark.parametrize("maker", [tableau_rk5, tableau_rk7])
def test_stability_boundary_samples_on_contour(maker):
    tab = maker()
    pts = stability_boundary(tab, angles=90, tol=1e-10)
    assert len(pts) > 30
    z = pts[:, 0] + 1j * pts[:, 1]
    assert np.max(np.abs(np.abs(stability_function(tab, z)) - 1.0)) <= 1e-8


def test_stability_negative_real_axis_matches_1d_bisection(tmp_path):
    tab = tableau_rk5()
    pts = emit_stability_region(tab, tmp_path / "stab.csv", angles=360, tol=1e-12)
    # the sample at angle pi lies on the negative real axis
    on_axis = pts[np.abs(pts[:, 1]) < 1e-9]
    x_boundary = on_axis[:, 0].min()
    lo, hi = -6.0, -0.5
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if abs(stability_function(tab, mid)) <= 1.0:
            hi = mid
        else:
            lo = mid
    assert x_boundary == pytest.approx(hi, abs=1e-8)
    text = (tmp_path / "stab.csv").read_text().splitlines()
    assert text[0] == "re,im"
    assert len(text) == len(pts) + 1


def test_check_eoc_window():
    assert check_eoc_window("linear_advect", "z5", 1, 5.0)
    assert not check_eoc_window("linear_advect", "z5", 1, 4.0)
    assert check_eoc_window("isentropic_vortex", "z7", 3, 6.2)
    with pytest.raises(KeyError):
        check_eoc_window("linear_advect", "js5", 1, 5.0)
