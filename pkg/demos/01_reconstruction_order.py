"""
WENO reconstruction in one direction: what the interface values look
like and how fast they converge.

Reconstructs face-averaged values of a smooth density wave with the
order-5 and order-7 kernels, measures the max error against quadrature
face averages, and shows the Linear test mode reproducing polynomials
of the design degree to machine precision.
"""

import numpy as np

from fvweno import (GridSpec, ReconstructionScheme, cell_average_field, create_field,
                    fill_ghost, reconstruct_field_direction, reconstruct_pair)
from fvweno.grid import BoundaryCondition, gauss_legendre_cell_rule

P = BoundaryCondition.PERIODIC


def pointwise(x, y):
    rho = 1.0 + 0.5 * np.sin(2 * np.pi * x) * np.cos(2 * np.pi * y)
    one = np.ones_like(rho)
    return np.stack([rho, one, one, one])


def face_average_oracle(spec):
    xi, w = gauss_legendre_cell_rule(4)
    x_if = spec.x_interfaces()[:, None]
    oracle = 0.0
    for a in range(4):
        yq = (spec.y_centers() + xi[a] * spec.dy)[None, :]
        oracle = oracle + w[a] * pointwise(x_if, yq)[0]
    return oracle


print("=== Convergence of the reconstructed interface values ===")
for scheme in (ReconstructionScheme(5, "z"), ReconstructionScheme(7, "z")):
    errs = []
    grids = (32, 64, 128)
    for n in grids:
        spec = GridSpec(n, n)
        field = fill_ghost(create_field(spec, cell_average_field(spec, pointwise)), P, P)
        qm, qp = reconstruct_field_direction(field, "x", scheme)
        errs.append(np.max(np.abs(qm[0] - face_average_oracle(spec))))
    rates = [np.log2(errs[k] / errs[k + 1]) for k in range(len(errs) - 1)]
    print(f"{scheme.name}: errors {['%.2e' % e for e in errs]}  observed order "
          f"{['%.2f' % r for r in rates]}")

print()
print("=== Linear mode is exact on the design-degree polynomials ===")
avg4 = np.array([(k + 0.5) ** 5 / 5 - (k - 0.5) ** 5 / 5 for k in range(-2, 3)])
right, _ = reconstruct_pair(avg4, ReconstructionScheme(5, "linear"))
print(f"x^4 at the interface: got {right:.16f}, exact {0.5 ** 4}")

avg6 = np.array([(k + 0.5) ** 7 / 7 - (k - 0.5) ** 7 / 7 for k in range(-3, 4)])
right, _ = reconstruct_pair(avg6, ReconstructionScheme(7, "linear"))
print(f"x^6 at the interface: got {right:.16f}, exact {0.5 ** 6}")

print()
print("=== Nonlinear weights fall back to the optimal ones on smooth data ===")
from fvweno import nonlinear_weights, smoothness_indicators
window = np.array([1.0, 1.1, 1.25, 1.45, 1.7])  # smooth, no discontinuity
betas = smoothness_indicators(window, 5)
w = nonlinear_weights(betas, ReconstructionScheme(5, "z"), "right", h=0.01)
print(f"smooth window:  weights {w}  (optimal: 0.1, 0.6, 0.3)")
window_shock = np.array([1.0, 1.0, 1.0, 5.0, 5.0])  # jump in the stencil
betas = smoothness_indicators(window_shock, 5)
w = nonlinear_weights(betas, ReconstructionScheme(5, "z"), "right", h=0.01)
print(f"jump in window: weights {w}  (the rough candidates are switched off)")
