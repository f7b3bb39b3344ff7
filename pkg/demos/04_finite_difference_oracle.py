"""Jets against a finite-difference oracle.

The Kähler potential K(z, conj z) is real-analytic; replacing conj z by an
independent variable w makes it holomorphic in (z, w), so central
differences with Richardson extrapolation give an independent estimate of
every Taylor coefficient. The error per order is printed for two step
sizes to show the truncation/rounding trade-off.
"""

import numpy as np

from skgeom.app import load_prepotential
from skgeom.geometry import kahler_potential_and_metric
from skgeom.jets import finite_difference_jet
from skgeom.periods import build_period_frame, symplectic_pair

p = load_prepotential({"name": "cubic", "c": 0.1}).prepotential
z0 = np.array([0.3 + 0.2j])
K = kahler_potential_and_metric(build_period_frame(p.jet(z0, 6))).jets.K


def K_complexified(x):
    om = build_period_frame(p.jet(x[:1], 1)).value()
    omb = build_period_frame(p.jet(x[1:].conj(), 1)).value().conj()
    return -np.log(-symplectic_pair(om, omb))


point = np.concatenate([z0, z0.conj()])
for step in (0.1, 0.02):
    fd = finite_difference_jet(K_complexified, point, 4, step=step)
    degs = np.array([sum(m) for m in fd.space.monomials])
    a = K.truncate(4).array
    errs = [np.abs(a[degs == k] - fd.array[degs == k]).max() / np.abs(a[degs == k]).max() for k in range(1, 5)]
    print(f"step {step:5.2f}: relative error by order " + "  ".join(f"{e:.1e}" for e in errs))
