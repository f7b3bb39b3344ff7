"""A cubic perturbation: nonzero Yukawa coupling and the differential inequality.

For u = -i + (i/2) z^2 + c z^3 the coupling F_111 is the constant 3ic, yet
its weighted norm f = |F|^2 varies because the metric does. This script
prints f, |nabla F|^2 and the slack in the Laplacian inequality and the
gradient bound along the real axis.
"""

import numpy as np

from skgeom.app import load_prepotential
from skgeom.geometry import complex_laplacian, covariant_derivative_yukawa, gradient_norm
from skgeom.verify import analyze_point

c = 0.1
entry = load_prepotential({"name": "cubic", "c": c})
n = entry.n

print(f"{'x':>6} {'F_111':>14} {'f0':>10} {'f1':>10} {'ineq slack':>11} {'grad slack':>11}")
for x in np.linspace(-0.9, 0.9, 7):
    _, b = analyze_point(entry.prepotential, [x])
    y = covariant_derivative_yukawa(b)
    lap = complex_laplacian(y.f0_jet, b)
    ineq = lap - (3 / n) * y.f0**2 + (n + 3) * y.f0
    grad = 2 * np.sqrt(y.f1 * y.f0) - gradient_norm(y.f0_jet, b)
    print(f"{x:6.2f} {complex(b.F[0, 0, 0]):>14.6f} {y.f0:10.6f} {y.f1:10.6f} {ineq:11.6f} {grad:11.6f}")

print("\nIn one dimension the inequality slack equals f1 exactly:")
_, b = analyze_point(entry.prepotential, [0.3 - 0.2j])
y = covariant_derivative_yukawa(b)
lap = complex_laplacian(y.f0_jet, b)
print(f"  slack {lap - 3 * y.f0**2 + 4 * y.f0:.15f}   f1 {y.f1:.15f}")
