"""Eigenvalue counting for a perturbed twisted problem.

Below pi^2 n^2 + varpi there are exactly nN + dim(NN) eigenvalues once n is
large enough, and each small disc around an unperturbed root holds as many
eigenvalues as the root's multiplicity.  The counting suite checks both.
"""
from vsl import run_suite
from vsl.golden import twisted_perturbed

rep = run_suite(twisted_perturbed(), "counting")
print(rep.to_text())
