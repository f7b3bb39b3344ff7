"""Curvature bounds for the Hodge metric on a two-dimensional perturbed slice.

Runs the four Hodge metric checks over a random sample of the
quartic-perturbed entry and prints the smallest margin of each. Positive
margins mean the bound holds with room to spare.
"""

from skgeom.app import domain_scan, load_prepotential
from skgeom.verify import hodge_alpha, verify_theorem12

entry = load_prepotential("quartic-perturbed", n=2)
scan = domain_scan(entry, {"kind": "random", "count": 30}, seed=1)
print(entry.describe(), f"-> {len(scan)} accepted points, alpha = {hodge_alpha(entry.n):.6f}")

for claim, rep in verify_theorem12(entry.prepotential, scan.accepted, seed=1).items():
    print(f"  {claim:36s} min margin {rep.min_margin:+.6f}  {'pass' if rep.passed else 'FAIL'}")
