"""
2D compressible Euler physics: state conversions, physical fluxes,
signal speeds, and the Lax-Friedrichs and Roe numerical fluxes.

States are arrays with a leading component axis holding
(rho, rho*u, rho*v, E); an ideal-gas equation of state closes the
system, p = (gamma - 1) (E - rho (u^2 + v^2) / 2).

The module exposes readable vectorized numpy implementations (the
reference used throughout the tests) plus fused numba kernels that the
solver calls on interface arrays; both directions share one kernel by
passing the normal/transverse momentum component indices.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .grid import CellField

GAMMA_DEFAULT = 1.4

_AXIS_COMPONENTS = {"x": (1, 2), "y": (2, 1)}


class UnphysicalStateError(ValueError):
    """Raised when a state has non-positive density or pressure.

    ``location`` carries whatever index tuple the caller supplied, so
    solver failures report the offending interface or cell.
    """

    def __init__(self, message, location=None, state=None):
        super().__init__(message)
        self.location = location
        self.state = state


def _first_bad(mask) -> tuple:
    mask = np.asarray(mask)
    if mask.ndim == 0:
        return ()
    idx = np.unravel_index(int(np.argmax(mask)), mask.shape)
    return tuple(int(k) for k in idx)


def cons_to_prim(q, gamma: float = GAMMA_DEFAULT) -> np.ndarray:
    """Primitive variables (rho, u, v, p) from conserved ones."""
    q = np.asarray(q, dtype=np.float64)
    rho = q[0]
    bad = ~(rho > 0.0)
    if np.any(bad):
        loc = _first_bad(bad)
        raise UnphysicalStateError(f"non-positive density {rho[loc]} at {loc}",
                                   location=loc, state=q[(slice(None),) + loc])
    u = q[1] / rho
    v = q[2] / rho
    p = (gamma - 1.0) * (q[3] - 0.5 * rho * (u * u + v * v))
    bad = ~(p > 0.0)
    if np.any(bad):
        loc = _first_bad(bad)
        raise UnphysicalStateError(f"non-positive pressure {p[loc]} at {loc}",
                                   location=loc, state=q[(slice(None),) + loc])
    return np.stack([rho, u, v, p])


def prim_to_cons(w, gamma: float = GAMMA_DEFAULT) -> np.ndarray:
    """Conserved variables from primitives; inverse of cons_to_prim."""
    w = np.asarray(w, dtype=np.float64)
    rho, u, v, p = w[0], w[1], w[2], w[3]
    return np.stack([rho, rho * u, rho * v, p / (gamma - 1.0) + 0.5 * rho * (u * u + v * v)])


def sound_speed(q, gamma: float = GAMMA_DEFAULT) -> np.ndarray:
    w = cons_to_prim(q, gamma)
    return np.sqrt(gamma * w[3] / w[0])


def physical_flux(q, axis: str, gamma: float = GAMMA_DEFAULT) -> np.ndarray:
    """Exact flux of the Euler system along 'x' or 'y'."""
    if axis not in _AXIS_COMPONENTS:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    nrm, trv = _AXIS_COMPONENTS[axis]
    q = np.asarray(q, dtype=np.float64)
    w = cons_to_prim(q, gamma)
    un = w[nrm]
    p = w[3]
    f = np.empty_like(q)
    f[0] = q[nrm]
    f[nrm] = q[nrm] * un + p
    f[trv] = q[trv] * un
    f[3] = un * (q[3] + p)
    return f


def max_signal_speed(field: CellField, axis: str, gamma: float = GAMMA_DEFAULT) -> float:
    """Largest |velocity| + sound speed over the interior cells."""
    if axis not in _AXIS_COMPONENTS:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    nrm = _AXIS_COMPONENTS[axis][0]
    q = field.interior
    try:
        w = cons_to_prim(q, gamma)
    except UnphysicalStateError as err:
        raise UnphysicalStateError(
            f"unphysical interior cell at {err.location}: {err}", location=err.location,
            state=err.state) from err
    return float(np.max(np.abs(w[nrm]) + np.sqrt(gamma * w[3] / w[0])))


def lax_friedrichs(q_left, q_right, axis: str, alpha: float,
                   gamma: float = GAMMA_DEFAULT) -> np.ndarray:
    """Lax-Friedrichs flux (f(qL) + f(qR) - alpha (qR - qL)) / 2."""
    qL = np.asarray(q_left, dtype=np.float64)
    qR = np.asarray(q_right, dtype=np.float64)
    return 0.5 * (physical_flux(qL, axis, gamma) + physical_flux(qR, axis, gamma)
                  - alpha * (qR - qL))


def roe_flux(q_left, q_right, axis: str, gamma: float = GAMMA_DEFAULT) -> np.ndarray:
    """Roe flux with the Harten-Hyman entropy fix on the acoustic fields.

    The fix replaces |lambda| by lambda^2/(4 delta) + delta whenever
    |lambda| < 2 delta, with delta = max(0, lambda_roe - lambda(qL),
    lambda(qR) - lambda_roe).
    """
    if axis not in _AXIS_COMPONENTS:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    nrm, trv = _AXIS_COMPONENTS[axis]
    qL = np.asarray(q_left, dtype=np.float64)
    qR = np.asarray(q_right, dtype=np.float64)
    wL = cons_to_prim(qL, gamma)
    wR = cons_to_prim(qR, gamma)
    rhoL, pL = wL[0], wL[3]
    rhoR, pR = wR[0], wR[3]
    unL, utL = wL[nrm], wL[trv]
    unR, utR = wR[nrm], wR[trv]
    hL = (qL[3] + pL) / rhoL
    hR = (qR[3] + pR) / rhoR

    sL = np.sqrt(rhoL)
    sR = np.sqrt(rhoR)
    wgt = sL / (sL + sR)
    un = wgt * unL + (1.0 - wgt) * unR
    ut = wgt * utL + (1.0 - wgt) * utR
    h = wgt * hL + (1.0 - wgt) * hR
    c2 = (gamma - 1.0) * (h - 0.5 * (un * un + ut * ut))
    if np.any(c2 <= 0.0):
        loc = _first_bad(c2 <= 0.0)
        raise UnphysicalStateError(f"Roe average failed (c^2 = {np.asarray(c2)[loc]}) at {loc}",
                                   location=loc)
    c = np.sqrt(c2)

    d1 = qR[0] - qL[0]
    dn = qR[nrm] - qL[nrm]
    dt = qR[trv] - qL[trv]
    d4 = qR[3] - qL[3]
    a3 = dt - ut * d1
    a2 = (gamma - 1.0) / c2 * (d1 * (h - un * un) + un * dn - (d4 - a3 * ut))
    a4 = 0.5 * (d1 - a2 + (dn - un * d1) / c)
    a1 = d1 - a2 - a4

    lam1 = un - c
    lam2 = un
    lam4 = un + c
    cL = np.sqrt(gamma * pL / rhoL)
    cR = np.sqrt(gamma * pR / rhoR)

    def fixed_abs(lam, lamL, lamR):
        delta = np.maximum(0.0, np.maximum(lam - lamL, lamR - lam))
        mod = np.abs(lam)
        return np.where(mod < 2.0 * delta, lam * lam / (4.0 * delta + 1e-300) + delta, mod)

    m1 = fixed_abs(lam1, unL - cL, unR - cR) * a1
    m2 = np.abs(lam2) * a2
    m3 = np.abs(lam2) * a3
    m4 = fixed_abs(lam4, unL + cL, unR + cR) * a4

    diss = np.empty_like(qL)
    diss[0] = m1 + m2 + m4
    diss[nrm] = m1 * (un - c) + m2 * un + m4 * (un + c)
    diss[trv] = (m1 + m2 + m4) * ut + m3
    diss[3] = (m1 * (h - un * c) + m2 * 0.5 * (un * un + ut * ut)
               + m3 * ut + m4 * (h + un * c))
    return 0.5 * (physical_flux(qL, axis, gamma) + physical_flux(qR, axis, gamma) - diss)


# ----------------------------------------------------------------------
# Fused interface-flux kernels used by the solver.  They validate the
# reconstructed states as they go and report the first offending point
# instead of clipping: code 0 = ok, 1 = bad minus state, 2 = bad plus
# state, 3 = failed Roe average.
# ----------------------------------------------------------------------

@njit(cache=True)
def _lf_kernel(qm, qp, gamma, alpha, local_alpha, nrm, trv, out):
    n0, n1 = qm.shape[1], qm.shape[2]
    for i in range(n0):
        for j in range(n1):
            rl = qm[0, i, j]
            if not rl > 0.0:
                return 1, i, j
            ul = qm[nrm, i, j] / rl
            tl = qm[trv, i, j] / rl
            el = qm[3, i, j]
            pl = (gamma - 1.0) * (el - 0.5 * rl * (ul * ul + tl * tl))
            if not pl > 0.0:
                return 1, i, j
            rr = qp[0, i, j]
            if not rr > 0.0:
                return 2, i, j
            ur = qp[nrm, i, j] / rr
            tr = qp[trv, i, j] / rr
            er = qp[3, i, j]
            pr = (gamma - 1.0) * (er - 0.5 * rr * (ur * ur + tr * tr))
            if not pr > 0.0:
                return 2, i, j
            a = alpha
            if local_alpha:
                sl = abs(ul) + np.sqrt(gamma * pl / rl)
                sr = abs(ur) + np.sqrt(gamma * pr / rr)
                a = sl if sl > sr else sr
            out[0, i, j] = 0.5 * (rl * ul + rr * ur - a * (rr - rl))
            out[nrm, i, j] = 0.5 * (qm[nrm, i, j] * ul + pl + qp[nrm, i, j] * ur + pr
                                    - a * (qp[nrm, i, j] - qm[nrm, i, j]))
            out[trv, i, j] = 0.5 * (qm[trv, i, j] * ul + qp[trv, i, j] * ur
                                    - a * (qp[trv, i, j] - qm[trv, i, j]))
            out[3, i, j] = 0.5 * (ul * (el + pl) + ur * (er + pr) - a * (er - el))
    return 0, -1, -1


@njit(cache=True)
def _roe_kernel(qm, qp, gamma, nrm, trv, out):
    n0, n1 = qm.shape[1], qm.shape[2]
    for i in range(n0):
        for j in range(n1):
            rl = qm[0, i, j]
            if not rl > 0.0:
                return 1, i, j
            ul = qm[nrm, i, j] / rl
            tl = qm[trv, i, j] / rl
            el = qm[3, i, j]
            pl = (gamma - 1.0) * (el - 0.5 * rl * (ul * ul + tl * tl))
            if not pl > 0.0:
                return 1, i, j
            rr = qp[0, i, j]
            if not rr > 0.0:
                return 2, i, j
            ur = qp[nrm, i, j] / rr
            tr = qp[trv, i, j] / rr
            er = qp[3, i, j]
            pr = (gamma - 1.0) * (er - 0.5 * rr * (ur * ur + tr * tr))
            if not pr > 0.0:
                return 2, i, j

            hl = (el + pl) / rl
            hr = (er + pr) / rr
            sl = np.sqrt(rl)
            sr = np.sqrt(rr)
            w = sl / (sl + sr)
            un = w * ul + (1.0 - w) * ur
            ut = w * tl + (1.0 - w) * tr
            h = w * hl + (1.0 - w) * hr
            c2 = (gamma - 1.0) * (h - 0.5 * (un * un + ut * ut))
            if not c2 > 0.0:
                return 3, i, j
            c = np.sqrt(c2)

            d1 = rr - rl
            dn = qp[nrm, i, j] - qm[nrm, i, j]
            dtv = qp[trv, i, j] - qm[trv, i, j]
            d4 = er - el
            a3 = dtv - ut * d1
            a2 = (gamma - 1.0) / c2 * (d1 * (h - un * un) + un * dn - (d4 - a3 * ut))
            a4 = 0.5 * (d1 - a2 + (dn - un * d1) / c)
            a1 = d1 - a2 - a4

            cl = np.sqrt(gamma * pl / rl)
            cr = np.sqrt(gamma * pr / rr)

            lam = un - c
            delta = lam - (ul - cl)
            if (ur - cr) - lam > delta:
                delta = (ur - cr) - lam
            mod1 = abs(lam)
            if delta > 0.0 and mod1 < 2.0 * delta:
                mod1 = lam * lam / (4.0 * delta) + delta
            lam = un + c
            delta = lam - (ul + cl)
            if (ur + cr) - lam > delta:
                delta = (ur + cr) - lam
            mod4 = abs(lam)
            if delta > 0.0 and mod4 < 2.0 * delta:
                mod4 = lam * lam / (4.0 * delta) + delta

            m1 = mod1 * a1
            m2 = abs(un) * a2
            m3 = abs(un) * a3
            m4 = mod4 * a4

            out[0, i, j] = 0.5 * (rl * ul + rr * ur - (m1 + m2 + m4))
            out[nrm, i, j] = 0.5 * (qm[nrm, i, j] * ul + pl + qp[nrm, i, j] * ur + pr
                                    - (m1 * (un - c) + m2 * un + m4 * (un + c)))
            out[trv, i, j] = 0.5 * (qm[trv, i, j] * ul + qp[trv, i, j] * ur
                                    - ((m1 + m2 + m4) * ut + m3))
            out[3, i, j] = 0.5 * (ul * (el + pl) + ur * (er + pr)
                                  - (m1 * (h - un * c) + m2 * 0.5 * (un * un + ut * ut)
                                     + m3 * ut + m4 * (h + un * c)))
    return 0, -1, -1


@njit(cache=True)
def _max_signal_kernel(u, g, nx, ny, gamma, nrm):
    smax = 0.0
    bad_i = -1
    bad_j = -1
    for i in range(g, g + nx):
        for j in range(g, g + ny):
            rho = u[0, i, j]
            if not rho > 0.0:
                return -1.0, i - g, j - g
            un = u[nrm, i, j] / rho
            ut = u[3 - nrm, i, j] / rho
            p = (gamma - 1.0) * (u[3, i, j] - 0.5 * rho * (un * un + ut * ut))
            if not p > 0.0:
                return -1.0, i - g, j - g
            s = abs(un) + np.sqrt(gamma * p / rho)
            if s > smax:
                smax = s
    return smax, bad_i, bad_j
