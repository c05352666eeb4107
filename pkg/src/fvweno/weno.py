"""
One-dimensional WENO reconstruction of orders 5 and 7.

Each grid cell gets two reconstructed interface values per direction:
the value at its right interface (the minus-side value of that
interface) and the value at its left interface (the plus side).  Both
are convex combinations of candidate stencil polynomials weighted by
local smoothness; the JS and Z weightings are supported, plus a
test-only Linear mode that applies the optimal weights directly.

All stencil arithmetic is written in terms of neighbor differences so
constant data is reproduced exactly, which the solver relies on for
free-stream preservation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .grid import CellField

WEIGHTING_JS = 0
WEIGHTING_Z = 1
WEIGHTING_LINEAR = 2

_WEIGHTING_NAMES = {"js": WEIGHTING_JS, "z": WEIGHTING_Z, "linear": WEIGHTING_LINEAR}

# Optimal (linear) weights toward the right interface; reversed for the left.
GAMMA5_RIGHT = np.array([0.1, 0.6, 0.3])
GAMMA7_RIGHT = np.array([1.0 / 35.0, 12.0 / 35.0, 18.0 / 35.0, 4.0 / 35.0])


@dataclass(frozen=True)
class ReconstructionScheme:
    """Reconstruction order (5 or 7) and weighting ('js', 'z', 'linear')."""

    order: int
    weighting: str

    def __post_init__(self):
        if self.order not in (5, 7):
            raise ValueError(f"unsupported order {self.order}")
        if self.weighting not in _WEIGHTING_NAMES:
            raise ValueError(f"unknown weighting {self.weighting!r}")

    @property
    def radius(self) -> int:
        """Stencil radius: cells needed on each side of the center cell."""
        return 3 if self.order == 5 else 4

    @property
    def window_size(self) -> int:
        return 5 if self.order == 5 else 7

    @property
    def num_candidates(self) -> int:
        return 3 if self.order == 5 else 4

    @property
    def mode(self) -> int:
        return _WEIGHTING_NAMES[self.weighting]

    def epsilon(self, h: float) -> float:
        """Regularization used in the nonlinear weights.

        The Z weighting uses a mesh-dependent value (h^4 at order 5,
        h^5 at order 7); JS uses the customary absolute constants
        (1e-6 at order 5, 1e-10 at order 7).
        """
        if self.weighting == "z":
            return h ** 4 if self.order == 5 else h ** 5
        if self.weighting == "js":
            return 1e-6 if self.order == 5 else 1e-10
        return 0.0

    @classmethod
    def from_name(cls, name: str) -> "ReconstructionScheme":
        """Parse compact names: js5, z5, js7, z7, lin5, lin7."""
        key = name.strip().lower()
        table = {
            "js5": (5, "js"), "z5": (5, "z"), "lin5": (5, "linear"),
            "js7": (7, "js"), "z7": (7, "z"), "lin7": (7, "linear"),
        }
        if key not in table:
            raise ValueError(f"unknown scheme name {name!r}")
        return cls(*table[key])

    @property
    def name(self) -> str:
        tag = {"js": "js", "z": "z", "linear": "lin"}[self.weighting]
        return f"{tag}{self.order}"


def _check_window(values: np.ndarray, order: int) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64)
    need = 5 if order == 5 else 7
    if v.shape != (need,):
        raise ValueError(f"order-{order} window needs {need} values, got shape {v.shape}")
    return v


def candidate_values(values, order: int = 5) -> np.ndarray:
    """Interface values of every candidate stencil for the center cell.

    Returns an array ``(num_candidates, 2)`` whose columns are the value
    at the right interface and at the left interface.  Candidates are
    numbered from the leftmost stencil.
    """
    v = _check_window(values, order)
    d = np.diff(v)
    c = v[order // 2]
    if order == 5:
        right = c + np.array([
            (5.0 * d[1] - 2.0 * d[0]) / 6.0,
            (d[1] + 2.0 * d[2]) / 6.0,
            (4.0 * d[2] - d[3]) / 6.0,
        ])
        left = c + np.array([
            (d[0] - 4.0 * d[1]) / 6.0,
            (-2.0 * d[1] - d[2]) / 6.0,
            (2.0 * d[3] - 5.0 * d[2]) / 6.0,
        ])
    else:
        right = c + np.array([
            (3.0 * d[0] - 10.0 * d[1] + 13.0 * d[2]) / 12.0,
            (-d[1] + 4.0 * d[2] + 3.0 * d[3]) / 12.0,
            (d[2] + 6.0 * d[3] - d[4]) / 12.0,
            (9.0 * d[3] - 4.0 * d[4] + d[5]) / 12.0,
        ])
        left = c + np.array([
            (-d[0] + 4.0 * d[1] - 9.0 * d[2]) / 12.0,
            (d[1] - 6.0 * d[2] - d[3]) / 12.0,
            (-3.0 * d[2] - 4.0 * d[3] + d[4]) / 12.0,
            (-13.0 * d[3] + 10.0 * d[4] - 3.0 * d[5]) / 12.0,
        ])
    return np.stack([right, left], axis=1)


def smoothness_indicators(values, order: int = 5) -> np.ndarray:
    """Smoothness indicator of each candidate stencil (all >= 0).

    Order 5 uses the classic quadratic forms whose minimum-scale is 1
    on unit-slope data; the order-7 forms carry the integer-coefficient
    normalization of their source (240 on unit-slope data).  Both are
    functions of neighbor differences only, hence exactly zero on
    constant windows.
    """
    v = _check_window(values, order)
    d = np.diff(v)
    if order == 5:
        return np.array([
            13.0 / 12.0 * (d[1] - d[0]) ** 2 + 0.25 * (3.0 * d[1] - d[0]) ** 2,
            13.0 / 12.0 * (d[2] - d[1]) ** 2 + 0.25 * (d[1] + d[2]) ** 2,
            13.0 / 12.0 * (d[3] - d[2]) ** 2 + 0.25 * (3.0 * d[2] - d[3]) ** 2,
        ])
    return np.array([
        547.0 * d[0] ** 2 + 3708.0 * d[1] ** 2 + 2107.0 * d[2] ** 2
        - 2788.0 * d[0] * d[1] + 1854.0 * d[0] * d[2] - 5188.0 * d[1] * d[2],
        267.0 * d[1] ** 2 + 1468.0 * d[2] ** 2 + 547.0 * d[3] ** 2
        - 1108.0 * d[1] * d[2] + 494.0 * d[1] * d[3] - 1428.0 * d[2] * d[3],
        547.0 * d[2] ** 2 + 1468.0 * d[3] ** 2 + 267.0 * d[4] ** 2
        - 1428.0 * d[2] * d[3] + 494.0 * d[2] * d[4] - 1108.0 * d[3] * d[4],
        2107.0 * d[3] ** 2 + 3708.0 * d[4] ** 2 + 547.0 * d[5] ** 2
        - 5188.0 * d[3] * d[4] + 1854.0 * d[3] * d[5] - 2788.0 * d[4] * d[5],
    ])


def nonlinear_weights(betas, scheme: ReconstructionScheme, side: str, h: float = 1.0) -> np.ndarray:
    """Normalized weights for the given interface side ('right' or 'left')."""
    beta = np.asarray(betas, dtype=np.float64)
    if beta.shape != (scheme.num_candidates,):
        raise ValueError(f"expected {scheme.num_candidates} smoothness values, got {beta.shape}")
    if side not in ("right", "left"):
        raise ValueError(f"side must be 'right' or 'left', got {side!r}")
    gamma = GAMMA5_RIGHT if scheme.order == 5 else GAMMA7_RIGHT
    if side == "left":
        gamma = gamma[::-1]
    if scheme.weighting == "linear":
        return gamma.copy()
    eps = scheme.epsilon(h)
    if scheme.weighting == "z":
        if scheme.order == 5:
            tau = abs(beta[0] - beta[2])
        else:
            tau = abs(beta[0] + 3.0 * beta[1] - 3.0 * beta[2] - beta[3])
        raw = gamma * (1.0 + (tau / (beta + eps)) ** 2)
    else:
        raw = gamma / (eps + beta) ** 2
    return raw / raw.sum()


def reconstruct_pair(values, scheme: ReconstructionScheme, h: float = 1.0):
    """Reconstructed (right-interface minus, left-interface plus) values.

    This is the readable per-window reference; the sweep kernels below
    evaluate the same formulas over whole fields.
    """
    v = _check_window(values, scheme.order)
    cand = candidate_values(v, scheme.order)
    beta = smoothness_indicators(v, scheme.order)
    c = v[scheme.order // 2]
    out = []
    for col, side in ((0, "right"), (1, "left")):
        w = nonlinear_weights(beta, scheme, side, h)
        out.append(c + float(np.dot(w, cand[:, col] - c)))
    return out[0], out[1]


# ----------------------------------------------------------------------
# Fused sweep kernels.  Candidate and indicator arithmetic is kept in
# difference form so constant fields reconstruct to themselves exactly.
# ----------------------------------------------------------------------

@njit(cache=True, inline="always")
def _cell5(v0, v1, v2, v3, v4, eps, mode):
    d0 = v1 - v0
    d1 = v2 - v1
    d2 = v3 - v2
    d3 = v4 - v3
    if mode == 2:
        m1 = 1.0
        m2 = 1.0
        m3 = 1.0
    else:
        b1 = 13.0 / 12.0 * (d1 - d0) ** 2 + 0.25 * (3.0 * d1 - d0) ** 2
        b2 = 13.0 / 12.0 * (d2 - d1) ** 2 + 0.25 * (d1 + d2) ** 2
        b3 = 13.0 / 12.0 * (d3 - d2) ** 2 + 0.25 * (3.0 * d2 - d3) ** 2
        if mode == 1:
            tau = abs(b1 - b3)
            m1 = 1.0 + (tau / (b1 + eps)) ** 2
            m2 = 1.0 + (tau / (b2 + eps)) ** 2
            m3 = 1.0 + (tau / (b3 + eps)) ** 2
        else:
            m1 = 1.0 / ((eps + b1) * (eps + b1))
            m2 = 1.0 / ((eps + b2) * (eps + b2))
            m3 = 1.0 / ((eps + b3) * (eps + b3))
    rd1 = (5.0 * d1 - 2.0 * d0) / 6.0
    rd2 = (d1 + 2.0 * d2) / 6.0
    rd3 = (4.0 * d2 - d3) / 6.0
    ld1 = (d0 - 4.0 * d1) / 6.0
    ld2 = (-2.0 * d1 - d2) / 6.0
    ld3 = (2.0 * d3 - 5.0 * d2) / 6.0
    a1 = 0.1 * m1
    a2 = 0.6 * m2
    a3 = 0.3 * m3
    right = v2 + (a1 * rd1 + a2 * rd2 + a3 * rd3) / (a1 + a2 + a3)
    a1 = 0.3 * m1
    a3 = 0.1 * m3
    left = v2 + (a1 * ld1 + a2 * ld2 + a3 * ld3) / (a1 + a2 + a3)
    return right, left


@njit(cache=True, inline="always")
def _cell7(v0, v1, v2, v3, v4, v5, v6, eps, mode):
    d0 = v1 - v0
    d1 = v2 - v1
    d2 = v3 - v2
    d3 = v4 - v3
    d4 = v5 - v4
    d5 = v6 - v5
    if mode == 2:
        m1 = 1.0
        m2 = 1.0
        m3 = 1.0
        m4 = 1.0
    else:
        b1 = (547.0 * d0 * d0 + 3708.0 * d1 * d1 + 2107.0 * d2 * d2
              - 2788.0 * d0 * d1 + 1854.0 * d0 * d2 - 5188.0 * d1 * d2)
        b2 = (267.0 * d1 * d1 + 1468.0 * d2 * d2 + 547.0 * d3 * d3
              - 1108.0 * d1 * d2 + 494.0 * d1 * d3 - 1428.0 * d2 * d3)
        b3 = (547.0 * d2 * d2 + 1468.0 * d3 * d3 + 267.0 * d4 * d4
              - 1428.0 * d2 * d3 + 494.0 * d2 * d4 - 1108.0 * d3 * d4)
        b4 = (2107.0 * d3 * d3 + 3708.0 * d4 * d4 + 547.0 * d5 * d5
              - 5188.0 * d3 * d4 + 1854.0 * d3 * d5 - 2788.0 * d4 * d5)
        if mode == 1:
            tau = abs(b1 + 3.0 * b2 - 3.0 * b3 - b4)
            m1 = 1.0 + (tau / (b1 + eps)) ** 2
            m2 = 1.0 + (tau / (b2 + eps)) ** 2
            m3 = 1.0 + (tau / (b3 + eps)) ** 2
            m4 = 1.0 + (tau / (b4 + eps)) ** 2
        else:
            m1 = 1.0 / ((eps + b1) * (eps + b1))
            m2 = 1.0 / ((eps + b2) * (eps + b2))
            m3 = 1.0 / ((eps + b3) * (eps + b3))
            m4 = 1.0 / ((eps + b4) * (eps + b4))
    rd1 = (3.0 * d0 - 10.0 * d1 + 13.0 * d2) / 12.0
    rd2 = (-d1 + 4.0 * d2 + 3.0 * d3) / 12.0
    rd3 = (d2 + 6.0 * d3 - d4) / 12.0
    rd4 = (9.0 * d3 - 4.0 * d4 + d5) / 12.0
    ld1 = (-d0 + 4.0 * d1 - 9.0 * d2) / 12.0
    ld2 = (d1 - 6.0 * d2 - d3) / 12.0
    ld3 = (-3.0 * d2 - 4.0 * d3 + d4) / 12.0
    ld4 = (-13.0 * d3 + 10.0 * d4 - 3.0 * d5) / 12.0
    g1 = 1.0 / 35.0
    g2 = 12.0 / 35.0
    g3 = 18.0 / 35.0
    g4 = 4.0 / 35.0
    a1 = g1 * m1
    a2 = g2 * m2
    a3 = g3 * m3
    a4 = g4 * m4
    right = v3 + (a1 * rd1 + a2 * rd2 + a3 * rd3 + a4 * rd4) / (a1 + a2 + a3 + a4)
    a1 = g4 * m1
    a2 = g3 * m2
    a3 = g2 * m3
    a4 = g1 * m4
    left = v3 + (a1 * ld1 + a2 * ld2 + a3 * ld3 + a4 * ld4) / (a1 + a2 + a3 + a4)
    return right, left


@njit(cache=True)
def _sweep5_x(u, g, pad, nx, ny, eps, mode, qm, qp):
    for c in range(u.shape[0]):
        for cell in range(-1, nx + 1):
            i = g + cell
            for jj in range(ny + 2 * pad):
                j = g - pad + jj
                r, l = _cell5(u[c, i - 2, j], u[c, i - 1, j], u[c, i, j],
                              u[c, i + 1, j], u[c, i + 2, j], eps, mode)
                if cell >= 0:
                    qp[c, cell, jj] = l
                if cell < nx:
                    qm[c, cell + 1, jj] = r


@njit(cache=True)
def _sweep5_y(u, g, pad, nx, ny, eps, mode, qm, qp):
    for c in range(u.shape[0]):
        for ii in range(nx + 2 * pad):
            i = g - pad + ii
            for cell in range(-1, ny + 1):
                j = g + cell
                r, l = _cell5(u[c, i, j - 2], u[c, i, j - 1], u[c, i, j],
                              u[c, i, j + 1], u[c, i, j + 2], eps, mode)
                if cell >= 0:
                    qp[c, ii, cell] = l
                if cell < ny:
                    qm[c, ii, cell + 1] = r


@njit(cache=True)
def _sweep7_x(u, g, pad, nx, ny, eps, mode, qm, qp):
    for c in range(u.shape[0]):
        for cell in range(-1, nx + 1):
            i = g + cell
            for jj in range(ny + 2 * pad):
                j = g - pad + jj
                r, l = _cell7(u[c, i - 3, j], u[c, i - 2, j], u[c, i - 1, j], u[c, i, j],
                              u[c, i + 1, j], u[c, i + 2, j], u[c, i + 3, j], eps, mode)
                if cell >= 0:
                    qp[c, cell, jj] = l
                if cell < nx:
                    qm[c, cell + 1, jj] = r


@njit(cache=True)
def _sweep7_y(u, g, pad, nx, ny, eps, mode, qm, qp):
    for c in range(u.shape[0]):
        for ii in range(nx + 2 * pad):
            i = g - pad + ii
            for cell in range(-1, ny + 1):
                j = g + cell
                r, l = _cell7(u[c, i, j - 3], u[c, i, j - 2], u[c, i, j - 1], u[c, i, j],
                              u[c, i, j + 1], u[c, i, j + 2], u[c, i, j + 3], eps, mode)
                if cell >= 0:
                    qp[c, ii, cell] = l
                if cell < ny:
                    qm[c, ii, cell + 1] = r


def reconstruct_field_direction(field: CellField, axis: str,
                                scheme: ReconstructionScheme, transverse_ext: int = 0):
    """Reconstruct both interface-value families along one axis.

    For ``axis='x'`` the outputs cover interfaces i = 0..nx and
    transverse rows j = -transverse_ext .. ny-1+transverse_ext; ``qm``
    holds the minus (left-biased) and ``qp`` the plus (right-biased)
    family at each interface.  Ghost width must cover both the stencil
    radius and the transverse extension.
    """
    spec = field.spec
    g = spec.ghost
    pad = int(transverse_ext)
    r = scheme.radius
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    if g < r or g < pad:
        raise ValueError(f"ghost width {g} too small for radius {r} with pad {pad}")
    nx, ny = spec.nx, spec.ny
    ncomp = field.data.shape[0]
    if axis == "x":
        shape = (ncomp, nx + 1, ny + 2 * pad)
        h = spec.dx
    else:
        shape = (ncomp, nx + 2 * pad, ny + 1)
        h = spec.dy
    qm = np.empty(shape)
    qp = np.empty(shape)
    eps = scheme.epsilon(h)
    kernel = {
        (5, "x"): _sweep5_x, (5, "y"): _sweep5_y,
        (7, "x"): _sweep7_x, (7, "y"): _sweep7_y,
    }[(scheme.order, axis)]
    kernel(field.data, g, pad, nx, ny, eps, scheme.mode, qm, qp)
    return qm, qp
