"""Spectral data two ways, and how it sits inside the m-function.

For a 2x2 Dirichlet problem with a non-diagonal constant potential we compute
the triplet (lambda, P, g) by integrating |F P h|^2 and again from the
lambda-derivative of the Wronskian, then compare both with the residue of m.
"""
import numpy as np

from vsl import first_eigenvalues, m_function, residue, spectral_triplet, triplet_via_derivative
from vsl.golden import dirichlet_matrix

p = dirichlet_matrix()
print("lambda              dual route     residue identity")
for r in first_eigenvalues(p, 5)[:5]:
    t = spectral_triplet(p, r)
    td = triplet_via_derivative(p, r)
    ginv = np.linalg.inv(t.g)
    G = t.basis @ ginv @ t.basis.conj().T
    dual = np.linalg.norm(t.G - td.G, 2) / np.linalg.norm(t.G, 2)
    res = np.linalg.norm(residue(p, r) + G, 2) / np.linalg.norm(ginv, 2)
    print(f"{r.lam:16.10f}   {dual:.2e}       {res:.2e}")

w = m_function(p, 20.0 + 3.0j)
print("\nm(20+3i) =\n", np.round(w.m, 6))
print("Weyl symmetry residual m(conj z) - m(z)*:", f"{w.symmetry_residual:.1e}")
