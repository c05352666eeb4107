"""
Explicit Runge-Kutta integration driven by Butcher tableaus.

Provides the fifth-order (6 stage) and seventh-order (11 stage)
methods used by the solver, a generic stage loop over cell fields, and
the stability function R(z) needed to chart absolute-stability
regions.  Tableau coefficients are built from exact integer ratios so
every build evaluates to identical floating-point constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .grid import CellField


@dataclass(frozen=True)
class ButcherTableau:
    """Coefficients (a, b, c) of an explicit Runge-Kutta method."""

    name: str
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    @property
    def stages(self) -> int:
        return len(self.b)

    def validate(self, tol: float = 1e-15) -> None:
        """Check strict lower-triangularity, row sums c_i = sum_j a_ij,
        and sum(b) = 1, each to ``tol`` scaled by the row magnitude.

        The scaling absorbs the per-entry rounding of tableaus whose
        exact rational coefficients exceed unity; the builders below
        additionally verify the identities exactly on the rationals.
        """
        s = self.stages
        if self.a.shape != (s, s) or self.c.shape != (s,):
            raise ValueError("inconsistent tableau dimensions")
        if np.any(np.triu(self.a) != 0.0):
            raise ValueError(f"{self.name}: tableau is not explicit")
        row = self.a.sum(axis=1)
        scale = np.maximum(1.0, np.abs(self.a).sum(axis=1))
        if np.max(np.abs(row - self.c) / scale) > tol:
            raise ValueError(f"{self.name}: row-sum condition violated")
        if abs(self.b.sum() - 1.0) > tol * max(1.0, np.abs(self.b).sum()):
            raise ValueError(f"{self.name}: weights do not sum to 1")


def _tableau(name, a_rows, b, c) -> ButcherTableau:
    s = len(b)
    for i, row in enumerate(a_rows):
        if sum(Fraction(*e) for e in row) != Fraction(*c[i]):
            raise ValueError(f"{name}: exact row-sum identity fails at stage {i}")
    if sum(Fraction(*e) for e in b) != 1:
        raise ValueError(f"{name}: exact weights do not sum to 1")
    a = np.zeros((s, s))
    for i, row in enumerate(a_rows):
        for j, entry in enumerate(row):
            a[i, j] = float(Fraction(*entry))
    bv = np.array([float(Fraction(*e)) for e in b])
    cv = np.array([float(Fraction(*e)) for e in c])
    tab = ButcherTableau(name, a, bv, cv)
    tab.validate()
    return tab


def tableau_rk5() -> ButcherTableau:
    """Six-stage fifth-order explicit Runge-Kutta method."""
    rows = [
        [],
        [(1, 4)],
        [(1, 8), (1, 8)],
        [(0, 1), (-1, 2), (1, 1)],
        [(3, 16), (0, 1), (0, 1), (9, 16)],
        [(-3, 7), (2, 7), (12, 7), (-12, 7), (8, 7)],
    ]
    b = [(7, 90), (0, 1), (32, 90), (12, 90), (32, 90), (7, 90)]
    c = [(0, 1), (1, 4), (1, 4), (1, 2), (3, 4), (1, 1)]
    return _tableau("rk5", rows, b, c)


def tableau_rk7() -> ButcherTableau:
    """Eleven-stage seventh-order explicit Runge-Kutta method."""
    rows = [
        [],
        [(2, 27)],
        [(1, 36), (1, 12)],
        [(1, 24), (0, 1), (1, 8)],
        [(5, 12), (0, 1), (-25, 16), (25, 16)],
        [(1, 20), (0, 1), (0, 1), (1, 4), (1, 5)],
        [(-25, 108), (0, 1), (0, 1), (125, 108), (-65, 27), (125, 54)],
        [(31, 300), (0, 1), (0, 1), (0, 1), (61, 225), (-2, 9), (13, 900)],
        [(2, 1), (0, 1), (0, 1), (-53, 6), (704, 45), (-107, 9), (67, 90), (3, 1)],
        [(-91, 108), (0, 1), (0, 1), (23, 108), (-976, 135), (311, 54), (-19, 60),
         (17, 6), (-1, 12)],
        [(2383, 4100), (0, 1), (0, 1), (-341, 164), (4496, 1025), (-301, 82),
         (2133, 4100), (45, 82), (45, 164), (18, 41)],
    ]
    b = [(41, 840), (0, 1), (0, 1), (0, 1), (0, 1), (34, 105), (9, 35), (9, 35),
         (9, 280), (9, 280), (41, 840)]
    c = [(0, 1), (2, 27), (1, 9), (1, 6), (5, 12), (1, 2), (5, 6), (1, 6), (2, 3),
         (1, 3), (1, 1)]
    return _tableau("rk7", rows, b, c)


def tableau_by_name(name: str) -> ButcherTableau:
    if name == "rk5":
        return tableau_rk5()
    if name == "rk7":
        return tableau_rk7()
    raise ValueError(f"unknown tableau {name!r}")


def rk_step(field: CellField, rhs, tableau: ButcherTableau, dt: float) -> CellField:
    """One explicit Runge-Kutta step of size ``dt``.

    ``rhs`` maps a CellField to an interior tendency array; it is
    responsible for refilling ghost cells of the stage fields it is
    handed.  Stage states are full CellFields so rhs can apply its
    boundary conditions at the staged times.
    """
    if dt < 0.0:
        raise ValueError(f"dt must be non-negative, got {dt}")
    a, b, c = tableau.a, tableau.b, tableau.c
    y0 = field.interior.copy()
    stage = field.copy()
    ks = []
    for i in range(tableau.stages):
        yi = y0.copy()
        for j in range(i):
            if a[i, j] != 0.0:
                yi += (dt * a[i, j]) * ks[j]
        stage.interior[...] = yi
        stage.time = field.time + c[i] * dt
        try:
            ks.append(np.asarray(rhs(stage)))
        except Exception as err:
            raise RuntimeError(f"rhs evaluation failed at stage {i}: {err}") from err
    ynew = y0
    for i in range(tableau.stages):
        if b[i] != 0.0:
            ynew += (dt * b[i]) * ks[i]
    out = field.copy()
    out.interior[...] = ynew
    out.time = field.time + dt
    return out


def stability_function(tableau: ButcherTableau, z):
    """R(z) = 1 + z b^T (I - z A)^{-1} 1, by forward substitution.

    Vectorized over ``z``; for an explicit tableau this is the degree-s
    stability polynomial.
    """
    z = np.asarray(z, dtype=np.complex128)
    ks = []
    for i in range(tableau.stages):
        ki = np.ones_like(z)
        for j in range(i):
            if tableau.a[i, j] != 0.0:
                ki = ki + z * (tableau.a[i, j] * ks[j])
        ks.append(ki)
    r = np.ones_like(z)
    for i in range(tableau.stages):
        if tableau.b[i] != 0.0:
            r = r + z * (tableau.b[i] * ks[i])
    return r if r.ndim else complex(r)


def stability_poly_coeffs(tableau: ButcherTableau) -> list:
    """Exact rational coefficients of R(z) = sum_m coeff[m] z^m.

    coeff[m] = b^T A^(m-1) 1 for m >= 1; an order-p method matches
    1/m! through m = p.
    """
    s = tableau.stages
    # Tableau entries are floats of small exact ratios (denominators
    # <= 4100), which a 1e4 denominator cap recovers unambiguously.
    a = [[Fraction(x).limit_denominator(10 ** 4) for x in row] for row in tableau.a]
    b = [Fraction(x).limit_denominator(10 ** 4) for x in tableau.b]
    vec = [Fraction(1)] * s
    coeffs = [Fraction(1)]
    for _ in range(1, s + 1):
        coeffs.append(sum(bi * vi for bi, vi in zip(b, vec)))
        vec = [sum(a[i][j] * vec[j] for j in range(i)) for i in range(s)]
    return coeffs
