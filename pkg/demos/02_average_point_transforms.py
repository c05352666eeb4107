"""
The average <-> point transforms that make the corrected methods work.

A cell average equals the midpoint value plus h^2/24 q'' + h^4/1920
q'''' + ...; the order-2 and order-4 line transforms remove (or
restore) those terms.  This script shows the exactness degrees, the
round-trip accuracy under refinement, and the multidimensional version
used at grid cell interfaces of a 3D mesh.
"""

import numpy as np

from fvweno import avg_to_point_line, avg_to_point_multi, point_to_avg_line

print("=== Exactness on polynomials ===")
centers = np.arange(-3, 4, dtype=float)
for coeffs, label in (((0, 0, 0, 1), "x^3 (order-2 transform)"),
                      ((0, 0, 0, 0, 0, 1), "x^5 (order-4 transform)")):
    order = 2 if len(coeffs) == 4 else 4
    avgs = np.zeros_like(centers)
    pts = np.zeros_like(centers)
    for p, c in enumerate(coeffs):
        avgs += c * ((centers + .5) ** (p + 1) - (centers - .5) ** (p + 1)) / (p + 1)
        pts += c * centers ** p
    t = order // 2
    err = np.max(np.abs(avg_to_point_line(avgs, order) - pts[t:-t]))
    print(f"{label}: max error {err:.2e}")

print()
print("=== Round trip avg -> point -> avg under refinement ===")
for order in (2, 4):
    errs = []
    for h in (0.1, 0.05, 0.025):
        c = np.arange(-40, 41) * h

        def f_avg(cc):
            a, b = cc - h / 2, cc + h / 2
            return ((-np.cos(2 * b) + np.cos(2 * a)) / 2
                    + (np.sin(3 * b) - np.sin(3 * a)) / 3) / h

        s = f_avg(c)
        t = order // 2
        back = point_to_avg_line(avg_to_point_line(s, order), order)
        errs.append(np.max(np.abs(back - s[2 * t:-2 * t])))
    rates = [np.log2(errs[k] / errs[k + 1]) for k in range(2)]
    print(f"order {order}: errors {['%.2e' % e for e in errs]}  observed "
          f"order {['%.2f' % r for r in rates]}  (expected {order + 2})")

print()
print("=== Multidimensional transform at the center of an average block ===")
k = np.arange(5) - 2
a2 = k ** 2 + 1 / 12          # 1D averages of x^2
block2 = a2[:, None] * a2[None, :]   # 2D averages of x^2 y^2
print(f"2D block of x^2 y^2 averages, p=4: point value {avg_to_point_multi(block2, 4):.2e} "
      "(exact 0)")
block3 = (a2[:, None, None] + a2[None, :, None] + a2[None, None, :])
print(f"3D block of x^2+y^2+z^2 averages, p=2: point value "
      f"{avg_to_point_multi(block3, 2):.2e} (exact 0)")
