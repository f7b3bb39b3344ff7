"""Shared prepotentials and sampling for the test modules."""

import numpy as np

from skgeom.geometry import metric_bundle
from skgeom.jets import Prepotential
from skgeom.periods import build_period_frame


def quadratic(n):
    terms = {(0,) * n: -1j}
    for i in range(n):
        e = [0] * n
        e[i] = 2
        terms[tuple(e)] = 0.5j
    return Prepotential.from_mapping(n, terms)


def cubic(c=0.1):
    return Prepotential.from_mapping(1, {(0,): -1j, (2,): 0.5j, (3,): c})


def quartic2():
    return Prepotential.from_mapping(
        2,
        {(0, 0): -1j, (2, 0): 0.5j, (0, 2): 0.5j, (3, 0): 0.05, (1, 2): 0.03, (0, 4): 0.02j},
    )


def random_points(n, count, radius, seed=0):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v * radius * rng.random((count, 1))


def frame_at(p, z, order=4):
    return build_period_frame(p.jet(z, order))


def bundle_at(p, z, order=6, scale=1.0):
    f = build_period_frame(p.jet(z, order))
    return metric_bundle(f.scaled(scale) if scale != 1.0 else f)
