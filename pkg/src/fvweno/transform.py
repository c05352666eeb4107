"""
Conversions between cell-averaged values and midpoint point values.

On a uniform grid the cell average of a smooth function differs from
its midpoint value by h^2/24 q'' + h^4/1920 q'''' + ...; truncating
after the first term gives the order-2 transform, keeping both terms
(with a fourth-order accurate second derivative) gives the order-4
transform.  Outputs cover only the points where the stencil fits, so
a transform of order p shrinks the sequence by p/2 on each end.

All stencils are evaluated from second differences, so constant
sequences pass through bitwise unchanged.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_STENCIL_HALF = {2: 1, 4: 2}


def stencil_halfwidth(order: int) -> int:
    """Points consumed on each side of the output range."""
    if order not in _STENCIL_HALF:
        raise ValueError(f"transform order must be 2 or 4, got {order}")
    return _STENCIL_HALF[order]


def _axslice(a: np.ndarray, axis: int, lo, hi):
    idx = [slice(None)] * a.ndim
    idx[axis] = slice(lo, hi)
    return a[tuple(idx)]


def _second_diffs(a: np.ndarray, axis: int, halfwidth: int):
    """Narrow (and, for halfwidth 2, wide) centered second differences
    over the valid interior, each formed from first differences so they
    vanish exactly on constants."""
    t = halfwidth
    n = a.shape[axis]
    c = _axslice(a, axis, t, n - t)
    narrow = (_axslice(a, axis, t + 1, n - t + 1) - c) - (c - _axslice(a, axis, t - 1, n - t - 1))
    if t == 1:
        return c, narrow, None
    wide = (_axslice(a, axis, 4, n) - c) - (c - _axslice(a, axis, 0, n - 4))
    return c, narrow, wide


def avg_to_point_line(values, order: int = 2, axis: int = -1) -> np.ndarray:
    """Midpoint point values from cell averages along one axis.

    Order 2 subtracts the h^2/24 curvature term using the narrow second
    difference; order 4 additionally removes the h^4/1920 term, using a
    fourth-order accurate second derivative built from averages.  The
    order-4 stencil collapses to

        q_i = Q_i - (-3/640 Q_{i-2} + 29/480 Q_{i-1} - 107/960 Q_i
                     + 29/480 Q_{i+1} - 3/640 Q_{i+2}).
    """
    a = np.asarray(values, dtype=np.float64)
    t = stencil_halfwidth(order)
    if a.shape[axis] < 2 * t + 1:
        raise ValueError(f"need at least {2 * t + 1} values along axis {axis}, "
                         f"got {a.shape[axis]}")
    c, narrow, wide = _second_diffs(a, axis, t)
    if order == 2:
        return c - narrow / 24.0
    return c - ((-3.0 / 640.0) * wide + (29.0 / 480.0) * narrow)


def point_to_avg_line(values, order: int = 2, axis: int = -1) -> np.ndarray:
    """Cell averages from midpoint point values along one axis.

    Inverse-direction counterpart of :func:`avg_to_point_line`: order 2
    adds h^2/24 q'' from point values; order 4 adds the fourth-order
    accurate h^2/24 q'' plus the h^4/1920 q'''' term.
    """
    a = np.asarray(values, dtype=np.float64)
    t = stencil_halfwidth(order)
    if a.shape[axis] < 2 * t + 1:
        raise ValueError(f"need at least {2 * t + 1} values along axis {axis}, "
                         f"got {a.shape[axis]}")
    c, narrow, wide = _second_diffs(a, axis, t)
    if order == 2:
        return c + narrow / 24.0
    return (c + (1.0 / 24.0) * ((4.0 / 3.0) * narrow - (1.0 / 12.0) * wide)
            + (1.0 / 1920.0) * (wide - 4.0 * narrow))


# ----------------------------------------------------------------------
# Fused kernels for the solver's hot path.  Every line transform is
# center + A * narrow_second_diff + B * wide_second_diff with the
# collapsed coefficients below; the numpy functions above remain the
# reference they are tested against.
# ----------------------------------------------------------------------

LINE_COEFFS = {
    ("avg_to_point", 2): (-1.0 / 24.0, 0.0),
    ("point_to_avg", 2): (1.0 / 24.0, 0.0),
    ("avg_to_point", 4): (-29.0 / 480.0, 3.0 / 640.0),
    ("point_to_avg", 4): (77.0 / 1440.0, -17.0 / 5760.0),
}


@njit(cache=True)
def _line_kernel_ax2(a, A, B, t, out):
    nc, n1, n2 = a.shape
    for c in range(nc):
        for i in range(n1):
            if t == 1:
                for j in range(n2 - 2):
                    q0 = a[c, i, j + 1]
                    narrow = (a[c, i, j + 2] - q0) - (q0 - a[c, i, j])
                    out[c, i, j] = q0 + A * narrow
            else:
                for j in range(n2 - 4):
                    q0 = a[c, i, j + 2]
                    narrow = (a[c, i, j + 3] - q0) - (q0 - a[c, i, j + 1])
                    wide = (a[c, i, j + 4] - q0) - (q0 - a[c, i, j])
                    out[c, i, j] = q0 + A * narrow + B * wide


@njit(cache=True)
def _line_kernel_ax1(a, A, B, t, out):
    nc, n1, n2 = a.shape
    for c in range(nc):
        if t == 1:
            for i in range(n1 - 2):
                for j in range(n2):
                    q0 = a[c, i + 1, j]
                    narrow = (a[c, i + 2, j] - q0) - (q0 - a[c, i, j])
                    out[c, i, j] = q0 + A * narrow
        else:
            for i in range(n1 - 4):
                for j in range(n2):
                    q0 = a[c, i + 2, j]
                    narrow = (a[c, i + 3, j] - q0) - (q0 - a[c, i + 1, j])
                    wide = (a[c, i + 4, j] - q0) - (q0 - a[c, i, j])
                    out[c, i, j] = q0 + A * narrow + B * wide


def line_transform_fast(a: np.ndarray, kind: str, order: int, axis: int) -> np.ndarray:
    """Kernel-backed line transform over axis 1 or 2 of a (4, n1, n2) array."""
    A, B = LINE_COEFFS[(kind, order)]
    t = stencil_halfwidth(order)
    shape = list(a.shape)
    shape[axis] -= 2 * t
    out = np.empty(tuple(shape))
    if axis == 2:
        _line_kernel_ax2(a, A, B, t, out)
    elif axis == 1:
        _line_kernel_ax1(a, A, B, t, out)
    else:
        raise ValueError(f"fast path supports axis 1 or 2, got {axis}")
    return out


def avg_to_point_multi(block, p: int = 2) -> float:
    """Point value at the center cell of a d-dimensional average block.

    Works for d = 1, 2, 3 (inferred from ``block.ndim``) and p = 2 or 4
    on equidistant grids.  For p = 4 in more than one dimension the
    correction includes the mixed fourth derivative, approximated by
    the tensor product of one-dimensional second differences; pure
    derivatives use the same one-dimensional stencils as the line
    transforms, so d = 1 reproduces :func:`avg_to_point_line` exactly.
    """
    a = np.asarray(block, dtype=np.float64)
    d = a.ndim
    if d not in (1, 2, 3):
        raise ValueError(f"dimension must be 1, 2 or 3, got {d}")
    t = stencil_halfwidth(p)
    if any(n < 2 * t + 1 for n in a.shape):
        raise ValueError(f"block sides {a.shape} too small for p={p}")
    center = tuple(n // 2 for n in a.shape)

    def shifted(offsets):
        return a[tuple(c + o for c, o in zip(center, offsets))]

    def second_diff(ax, width):
        lo = [0] * d
        hi = [0] * d
        lo[ax] = -width
        hi[ax] = width
        q0 = shifted([0] * d)
        return (shifted(hi) - q0) - (q0 - shifted(lo))

    q = shifted([0] * d)
    if p == 2:
        for ax in range(d):
            q = q - second_diff(ax, 1) / 24.0
        return float(q)
    for ax in range(d):
        narrow = second_diff(ax, 1)
        wide = second_diff(ax, 2)
        q = q - ((-3.0 / 640.0) * wide + (29.0 / 480.0) * narrow)
    for ax_a in range(d):
        for ax_b in range(ax_a + 1, d):
            cross = 0.0
            for oa, ca in ((-1, 1.0), (0, -2.0), (1, 1.0)):
                for ob, cb in ((-1, 1.0), (0, -2.0), (1, 1.0)):
                    off = [0] * d
                    off[ax_a] = oa
                    off[ax_b] = ob
                    cross += ca * cb * shifted(off)
            q = q + cross / 576.0
    return float(q)
