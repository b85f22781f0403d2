"""Spectral data separates potentials that share part of the spectrum.

V = 0 and V = diag(0, 0.5) on a Dirichlet pair: half of the eigenvalues agree,
the rest are shifted by 0.5.  The fingerprint distance over the first four
eigenvalues sees the shift, and vanishes for two copies of the same problem.
"""
import numpy as np

from vsl import fingerprint_distance
from vsl.problem import BoundaryConditions, Potential, ProblemDef

bc = BoundaryConditions.dirichlet(2)
a = ProblemDef(Potential.zero(2), bc, "V = 0")
b = ProblemDef(Potential.constant(np.diag([0.0, 0.5])), bc, "V = diag(0, 0.5)")

for other in (a, b):
    res = fingerprint_distance(a, other, 4)
    print(f"{a.name} vs {other.name}: distance {res.distance:.6f}")
    for t in res.terms:
        print("   ", t["positions"], f"eigenvalue {t['eigenvalue']:.3e}",
              f"projector {t['projector']:.3e}", f"G {t['G']:.3e}")
