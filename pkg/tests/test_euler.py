import numpy as np
import pytest

from fvweno.euler import (UnphysicalStateError, _lf_kernel, _max_signal_kernel,
                          _roe_kernel, cons_to_prim, lax_friedrichs, max_signal_speed,
                          physical_flux, prim_to_cons, roe_flux, sound_speed)
from fvweno.grid import BoundaryCondition, GridSpec, create_field, fill_ghost

GAMMA = 1.4


def random_states(rng, n):
    rho = rng.uniform(0.2, 3.0, size=n)
    u = rng.uniform(-2.0, 2.0, size=n)
    v = rng.uniform(-2.0, 2.0, size=n)
    p = rng.uniform(0.2, 3.0, size=n)
    return prim_to_cons(np.stack([rho, u, v, p]), GAMMA)


def test_cons_prim_example():
    q = prim_to_cons(np.array([1.0, 1.0, 1.0, 1.0]), GAMMA)
    assert q[3] == pytest.approx(1.0 / 0.4 + 1.0, rel=1e-15)  # E = 3.5
    w = cons_to_prim(q, GAMMA)
    assert np.allclose(w, [1.0, 1.0, 1.0, 1.0], rtol=1e-15)


def test_cons_prim_zero_velocity():
    q = prim_to_cons(np.array([1.0, 0.0, 0.0, 1.0]), GAMMA)
    assert q[3] == pytest.approx(2.5, rel=1e-15)


def test_cons_prim_round_trip():
    rng = np.random.default_rng(30)
    q = random_states(rng, 200)
    back = prim_to_cons(cons_to_prim(q, GAMMA), GAMMA)
    assert np.allclose(back, q, rtol=4e-16, atol=0)


def test_cons_to_prim_rejects_unphysical():
    bad = np.array([-1.0, 0.0, 0.0, 1.0])
    with pytest.raises(UnphysicalStateError):
        cons_to_prim(bad, GAMMA)
    bad_p = np.array([1.0, 0.0, 0.0, -1.0])
    with pytest.raises(UnphysicalStateError) as err:
        cons_to_prim(bad_p, GAMMA)
    assert err.value.state is not None
    # location points at the offending cell in array input
    field = random_states(np.random.default_rng(31), 12).reshape(4, 3, 4)
    field[3, 1, 2] = 1e-8  # energy below kinetic: negative pressure
    with pytest.raises(UnphysicalStateError) as err:
        cons_to_prim(field, GAMMA)
    assert err.value.location == (1, 2)


def test_physical_flux_stagnation():
    q = prim_to_cons(np.array([1.0, 0.0, 0.0, 1.0]), GAMMA)
    assert np.allclose(physical_flux(q, "x", GAMMA), [0.0, 1.0, 0.0, 0.0], atol=1e-15)


def test_physical_flux_unit_velocity():
    q = prim_to_cons(np.array([1.0, 1.0, 0.0, 1.0]), GAMMA)  # E = 3
    assert np.allclose(physical_flux(q, "x", GAMMA), [1.0, 2.0, 0.0, 4.0], rtol=1e-15)


def test_flux_axis_swap_symmetry():
    rng = np.random.default_rng(32)
    q = random_states(rng, 64)
    swapped = q[[0, 2, 1, 3]]
    fy = physical_flux(q, "y", GAMMA)
    fx_sw = physical_flux(swapped, "x", GAMMA)
    assert np.allclose(fy, fx_sw[[0, 2, 1, 3]], rtol=1e-14)


def make_uniform_field(prim, nx=4, ny=4):
    spec = GridSpec(nx, ny, ghost=4)
    q = prim_to_cons(np.asarray(prim, dtype=float), GAMMA)
    return create_field(spec, np.broadcast_to(q[:, None, None], (4, nx, ny)).copy())


def test_max_signal_uniform():
    f = make_uniform_field([1.0, 1.0, 1.0, 1.0])
    expect = 1.0 + np.sqrt(1.4)
    assert max_signal_speed(f, "x", GAMMA) == pytest.approx(expect, rel=1e-14)
    assert max_signal_speed(f, "y", GAMMA) == pytest.approx(expect, rel=1e-14)


def test_max_signal_zero_velocity_is_sound_speed():
    f = make_uniform_field([2.0, 0.0, 0.0, 3.0])
    assert max_signal_speed(f, "x", GAMMA) == pytest.approx(np.sqrt(1.4 * 3.0 / 2.0), rel=1e-14)


def test_max_signal_dominated_by_single_cell():
    f = make_uniform_field([1.0, 0.1, 0.0, 1.0])
    fast = prim_to_cons(np.array([1.0, 10.0, 0.0, 1.0]), GAMMA)
    f.interior[:, 2, 2] = fast
    expect = 10.0 + np.sqrt(1.4)
    assert max_signal_speed(f, "x", GAMMA) == pytest.approx(expect, rel=1e-14)


def test_max_signal_reports_unphysical_cell():
    f = make_uniform_field([1.0, 0.0, 0.0, 1.0])
    f.interior[0, 1, 3] = -0.5
    with pytest.raises(UnphysicalStateError) as err:
        max_signal_speed(f, "x", GAMMA)
    assert "1" in str(err.value) and "3" in str(err.value)


def test_lax_friedrichs_consistency():
    rng = np.random.default_rng(33)
    q = random_states(rng, 32)
    for axis in ("x", "y"):
        f = lax_friedrichs(q, q, axis, alpha=3.0, gamma=GAMMA)
        assert np.allclose(f, physical_flux(q, axis, GAMMA), rtol=2e-16, atol=0)


def test_lax_friedrichs_alpha_zero_is_mean():
    rng = np.random.default_rng(34)
    qL = random_states(rng, 16)
    qR = random_states(rng, 16)
    f = lax_friedrichs(qL, qR, "x", alpha=0.0, gamma=GAMMA)
    mean = 0.5 * (physical_flux(qL, "x", GAMMA) + physical_flux(qR, "x", GAMMA))
    assert np.array_equal(f, mean)


def test_lax_friedrichs_formula_oracle():
    qL = prim_to_cons(np.array([1.0, 0.75, 0.0, 1.0]), GAMMA)
    qR = prim_to_cons(np.array([0.125, 0.0, 0.0, 0.1]), GAMMA)
    alpha = 2.2
    got = lax_friedrichs(qL, qR, "x", alpha, GAMMA)
    expect = 0.5 * (physical_flux(qL, "x", GAMMA) + physical_flux(qR, "x", GAMMA)
                    - alpha * (qR - qL))
    assert np.allclose(got, expect, rtol=1e-15)


# ----------------------------------------------------------------------
# Roe flux: matrix-based oracle with the same entropy-fix rule
# ----------------------------------------------------------------------

def roe_oracle(qL, qR, gamma):
    """Independent x-direction Roe flux built from an explicit
    eigenvector matrix and a linear solve for the wave strengths."""
    rhoL, uL, vL, pL = cons_to_prim(qL, gamma)
    rhoR, uR, vR, pR = cons_to_prim(qR, gamma)
    hL = (qL[3] + pL) / rhoL
    hR = (qR[3] + pR) / rhoR
    sl, sr = np.sqrt(rhoL), np.sqrt(rhoR)
    u = (sl * uL + sr * uR) / (sl + sr)
    v = (sl * vL + sr * vR) / (sl + sr)
    h = (sl * hL + sr * hR) / (sl + sr)
    c = np.sqrt((gamma - 1.0) * (h - 0.5 * (u * u + v * v)))
    lam = np.array([u - c, u, u, u + c])
    R = np.array([
        [1.0, 1.0, 0.0, 1.0],
        [u - c, u, 0.0, u + c],
        [v, v, 1.0, v],
        [h - u * c, 0.5 * (u * u + v * v), v, h + u * c],
    ])
    alpha = np.linalg.solve(R, qR - qL)
    cL = np.sqrt(gamma * pL / rhoL)
    cR = np.sqrt(gamma * pR / rhoR)
    lamL = np.array([uL - cL, uL, uL, uL + cL])
    lamR = np.array([uR - cR, uR, uR, uR + cR])
    mod = np.abs(lam)
    for k in (0, 3):
        delta = max(0.0, lam[k] - lamL[k], lamR[k] - lam[k])
        if delta > 0.0 and abs(lam[k]) < 2.0 * delta:
            mod[k] = lam[k] ** 2 / (4.0 * delta) + delta
    diss = R @ (mod * alpha)
    return 0.5 * (physical_flux(qL, "x", gamma) + physical_flux(qR, "x", gamma) - diss)


def test_roe_against_matrix_oracle():
    rng = np.random.default_rng(35)
    for _ in range(60):
        qL = random_states(rng, 1)[:, 0]
        qR = random_states(rng, 1)[:, 0]
        got = roe_flux(qL, qR, "x", GAMMA)
        expect = roe_oracle(qL, qR, GAMMA)
        assert np.allclose(got, expect, rtol=1e-11, atol=1e-12)


def test_roe_consistency():
    rng = np.random.default_rng(36)
    q = random_states(rng, 32)
    for axis in ("x", "y"):
        f = roe_flux(q, q, axis, GAMMA)
        assert np.allclose(f, physical_flux(q, axis, GAMMA), rtol=1e-13, atol=1e-14)


def test_roe_supersonic_full_upwind():
    qL = prim_to_cons(np.array([1.0, 3.0, 0.4, 1.0]), GAMMA)
    qR = prim_to_cons(np.array([1.1, 3.1, 0.3, 1.05]), GAMMA)
    f = roe_flux(qL, qR, "x", GAMMA)
    assert np.allclose(f, physical_flux(qL, "x", GAMMA), rtol=1e-12)
    # mirrored: supersonic to the left takes the right-state flux
    qLm = prim_to_cons(np.array([1.0, -3.0, 0.4, 1.0]), GAMMA)
    qRm = prim_to_cons(np.array([1.1, -3.1, 0.3, 1.05]), GAMMA)
    f = roe_flux(qLm, qRm, "x", GAMMA)
    assert np.allclose(f, physical_flux(qRm, "x", GAMMA), rtol=1e-12)


def test_roe_contact_preserved_exactly():
    # equal pressure and velocity across the interface: pure contact;
    # the mass flux must be the upwind rho*u with no smearing.
    u, p = 0.7, 1.3
    qL = prim_to_cons(np.array([1.0, u, 0.2, p]), GAMMA)
    qR = prim_to_cons(np.array([2.5, u, 0.2, p]), GAMMA)
    f = roe_flux(qL, qR, "x", GAMMA)
    assert f[0] == pytest.approx(1.0 * u, rel=1e-14)


def test_roe_reflection_symmetry():
    rng = np.random.default_rng(37)
    mirror = np.array([1.0, -1.0, 1.0, 1.0])[:, None]
    for _ in range(30):
        qL = random_states(rng, 1)
        qR = random_states(rng, 1)
        f = roe_flux(qL, qR, "x", GAMMA)
        f_mirror = roe_flux(mirror * qR, mirror * qL, "x", GAMMA)
        assert np.allclose(f_mirror, -mirror * f, rtol=1e-12, atol=1e-13)


def test_roe_y_direction_via_component_swap():
    rng = np.random.default_rng(38)
    qL = random_states(rng, 8)
    qR = random_states(rng, 8)
    fy = roe_flux(qL, qR, "y", GAMMA)
    fx = roe_flux(qL[[0, 2, 1, 3]], qR[[0, 2, 1, 3]], "x", GAMMA)
    assert np.allclose(fy, fx[[0, 2, 1, 3]], rtol=1e-13, atol=1e-14)


def test_roe_wave_decomposition_reproduces_flux_jump():
    # the Roe average linearization must satisfy A(qR - qL) = f(qR) - f(qL);
    # when every eigenvalue is positive the flux collapses to f(qL),
    # which exercises that identity end to end.
    rng = np.random.default_rng(39)
    for _ in range(40):
        base = random_states(rng, 1)[:, 0]
        w = cons_to_prim(base, GAMMA)
        w[1] = abs(w[1]) + 8.0  # beyond the largest possible sound speed here
        qL = prim_to_cons(w, GAMMA)
        w2 = w.copy()
        w2[0] = abs(w2[0] * (1.0 + 0.1 * rng.normal())) + 0.2
        w2[3] = abs(w2[3] * (1.0 + 0.1 * rng.normal())) + 0.2
        qR = prim_to_cons(w2, GAMMA)
        f = roe_flux(qL, qR, "x", GAMMA)
        assert np.allclose(f, physical_flux(qL, "x", GAMMA), rtol=1e-10, atol=1e-11)


# ----------------------------------------------------------------------
# Kernels used by the solver agree with the reference implementations
# ----------------------------------------------------------------------

def interface_arrays(seed, n0=6, n1=7):
    rng = np.random.default_rng(seed)
    qm = random_states(rng, n0 * n1).reshape(4, n0, n1)
    qp = random_states(rng, n0 * n1).reshape(4, n0, n1)
    return qm, qp


@pytest.mark.parametrize("axis,nrm,trv", [("x", 1, 2), ("y", 2, 1)])
def test_lf_kernel_matches_reference_global_alpha(axis, nrm, trv):
    qm, qp = interface_arrays(40)
    out = np.empty_like(qm)
    code, i, j = _lf_kernel(qm, qp, GAMMA, 2.9, False, nrm, trv, out)
    assert code == 0
    ref = lax_friedrichs(qm, qp, axis, 2.9, GAMMA)
    assert np.allclose(out, ref, rtol=1e-14, atol=1e-14)


@pytest.mark.parametrize("axis,nrm,trv", [("x", 1, 2), ("y", 2, 1)])
def test_lf_kernel_local_alpha(axis, nrm, trv):
    qm, qp = interface_arrays(41)
    out = np.empty_like(qm)
    code, _, _ = _lf_kernel(qm, qp, GAMMA, 0.0, True, nrm, trv, out)
    assert code == 0
    wl = cons_to_prim(qm, GAMMA)
    wr = cons_to_prim(qp, GAMMA)
    al = np.abs(wl[nrm]) + np.sqrt(GAMMA * wl[3] / wl[0])
    ar = np.abs(wr[nrm]) + np.sqrt(GAMMA * wr[3] / wr[0])
    alpha = np.maximum(al, ar)
    ref = 0.5 * (physical_flux(qm, axis, GAMMA) + physical_flux(qp, axis, GAMMA)
                 - alpha * (qp - qm))
    assert np.allclose(out, ref, rtol=1e-14, atol=1e-14)


@pytest.mark.parametrize("axis,nrm,trv", [("x", 1, 2), ("y", 2, 1)])
def test_roe_kernel_matches_reference(axis, nrm, trv):
    qm, qp = interface_arrays(42)
    out = np.empty_like(qm)
    code, _, _ = _roe_kernel(qm, qp, GAMMA, nrm, trv, out)
    assert code == 0
    ref = roe_flux(qm, qp, axis, GAMMA)
    assert np.allclose(out, ref, rtol=1e-13, atol=1e-14)


def test_kernels_flag_unphysical_states():
    qm, qp = interface_arrays(43)
    qm[0, 2, 3] = -1.0
    out = np.empty_like(qm)
    code, i, j = _lf_kernel(qm, qp, GAMMA, 1.0, True, 1, 2, out)
    assert (code, i, j) == (1, 2, 3)
    qm, qp = interface_arrays(44)
    qp[3, 1, 4] = 0.0  # negative pressure on the plus side
    code, i, j = _roe_kernel(qm, qp, GAMMA, 1, 2, out)
    assert (code, i, j) == (2, 1, 4)


def test_max_signal_kernel_matches_reference():
    rng = np.random.default_rng(45)
    spec = GridSpec(6, 5, ghost=4)
    f = create_field(spec, random_states(rng, 30).reshape(4, 6, 5))
    fill_ghost(f, BoundaryCondition.PERIODIC, BoundaryCondition.PERIODIC)
    for axis, nrm in (("x", 1), ("y", 2)):
        s, _, _ = _max_signal_kernel(f.data, spec.ghost, spec.nx, spec.ny, GAMMA, nrm)
        assert s == pytest.approx(max_signal_speed(f, axis, GAMMA), rel=1e-15)


def test_sound_speed():
    q = prim_to_cons(np.array([2.0, 0.3, -0.2, 1.8]), GAMMA)
    assert sound_speed(q, GAMMA) == pytest.approx(np.sqrt(1.4 * 1.8 / 2.0), rel=1e-14)
