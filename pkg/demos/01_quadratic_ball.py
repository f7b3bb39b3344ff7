"""The quadratic prepotential: a horizontal slice that is the complex ball.

Walks through the pipeline on u = -i + (i/2) sum z_i^2 in two variables:
period vector, Weil-Petersson metric against its closed form, vanishing
Yukawa coupling, constant curvature and the Siegel image.
"""

import numpy as np

from skgeom.app import load_prepotential, siegel_embed
from skgeom.curvature import kahler_curvature_generic, random_directions, sectional_evaluators
from skgeom.verify import analyze_point

entry = load_prepotential("quadratic", n=2)
z = np.array([0.5 + 0.2j, -0.3j])
frame, b = analyze_point(entry.prepotential, z)

print("period vector Omega(z):", np.round(frame.value(), 6))
d = 2 - np.vdot(z, z).real
print(f"e^(-K) = {np.exp(-b.K):.12f}   2 - |z|^2 = {d:.12f}")

closed = np.eye(2) / d + np.outer(z.conj(), z) / d**2
print("max |h - closed form| =", np.abs(b.h - closed).max())
print("max |F| =", np.abs(b.F).max(), "  max |hH - 2h| =", np.abs(b.hH - 2 * b.h).max())

R = kahler_curvature_generic(b.jets.h, b.jets.h_inv)
RH = kahler_curvature_generic(b.jets.hH)
rng = np.random.default_rng(0)
for xi in random_directions(b.h, 3, rng)[-3:]:
    H = sectional_evaluators(R, b.h, xi)["holomorphic_sectional"]
    HH = sectional_evaluators(RH, b.hH, xi)["holomorphic_sectional"]
    print(f"holomorphic sectional: WP {H:+.12f}   Hodge {HH:+.12f}")

print("\nSiegel image along a ray (min eigenvalue of Im tau shrinks toward |z|^2 = 2):")
for r2 in (0.0, 0.5, 1.0, 1.5, 1.9, 1.99):
    sp = siegel_embed(np.sqrt(r2) * np.array([1.0, 0.0]), entry)
    print(f"  |z|^2 = {r2:4.2f}   min eig Y = {sp.min_eig_Y:.6f}   |tau - tau^T| = {sp.symmetry_defect:.1e}")
