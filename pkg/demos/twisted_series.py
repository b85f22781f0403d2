"""Two boundary subspaces at an angle produce eigenvalue series absent for scalar problems.

With Tm = e1 e1* and Tp the projector onto a line at angle gamma, the V = 0
spectrum is (pi n +- gamma)^2.  We recover it, then switch on a small potential
and watch the pairs drift while the counting stays fixed.
"""
import numpy as np

from vsl import decompose, first_eigenvalues
from vsl.golden import twisted, twisted_perturbed

p = twisted()
g = decompose(p.bc.Tm, p.bc.Tp)
print("block dimensions:", g.dims, " angles:", [round(b.gamma, 6) for b in g.twisted])

recs = first_eigenvalues(p, 8)
print("\n  n   lambda (V = 0)        closed form           tag")
for r in recs[:8]:
    k = np.sqrt(r.lam)
    n = round(k / np.pi)
    sign = 1 if k > np.pi * n else -1
    exact = (np.pi * n + sign * np.pi / 6) ** 2
    print(f"{n:3d}   {r.lam:18.12f}  {exact:18.12f}   {r.series_tag}")

q = twisted_perturbed()
moved = first_eigenvalues(q, 8).values[:8]
print("\nwith ||V|| = 0.4 the eigenvalues shift by at most",
      f"{np.max(np.abs(moved - recs.values[:8])):.3f}")
