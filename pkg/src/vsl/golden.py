"""Reference problems with known spectra, used by the tests and the acceptance run."""
from __future__ import annotations

import numpy as np

from .geometry import rotation_pair_geometry
from .problem import BoundaryConditions, Potential, ProblemDef

SEED = 0x5EED


def dirichlet_scalar(v: float = 0.0) -> ProblemDef:
    """N = 1, psi(0) = psi(1) = 0, constant V = v: eigenvalues pi^2 n^2 + v."""
    return ProblemDef(Potential.constant([[v]]), BoundaryConditions.dirichlet(1), "dirichlet_scalar")


def neumann_scalar(v: float = 0.0) -> ProblemDef:
    """N = 1, psi'(0) = psi'(1) = 0: eigenvalues pi^2 n^2 + v, n >= 0."""
    return ProblemDef(Potential.constant([[v]]), BoundaryConditions.neumann(1), "neumann_scalar")


def twisted(gamma: float = np.pi / 6, V=None) -> ProblemDef:
    """N = 2, Tm = e1 e1*, Tp = h h* at angle gamma; for V = 0 the spectrum is (pi n +- gamma)^2."""
    Tm, Tp = rotation_pair_geometry(gamma)
    pot = Potential.zero(2) if V is None else (V if isinstance(V, Potential) else Potential.constant(V))
    return ProblemDef(pot, BoundaryConditions(Tm, Tp), "twisted")


def dirichlet_matrix() -> ProblemDef:
    """N = 2 Dirichlet with the constant potential [[1, i/2], [-i/2, 2]]."""
    V = np.array([[1.0, 0.5j], [-0.5j, 2.0]])
    return ProblemDef(Potential.constant(V), BoundaryConditions.dirichlet(2), "dirichlet_matrix")


def commuting3() -> ProblemDef:
    """N = 3 with Tm = diag(1,0,0), Tp = diag(0,0,1): one DN, one NN and one ND direction."""
    Tm = np.diag([1.0, 0.0, 0.0])
    Tp = np.diag([0.0, 0.0, 1.0])
    return ProblemDef(Potential.zero(3), BoundaryConditions(Tm, Tp), "commuting3")


def random_hermitian(n: int, norm: float, seed: int = SEED) -> np.ndarray:
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = 0.5 * (A + A.conj().T)
    return norm * H / np.linalg.norm(H, 2)


def twisted_perturbed(seed: int = SEED) -> ProblemDef:
    """The twisted pi/6 pair with V = 0.2 H, H a random Hermitian matrix of norm 2 (so ||V|| = 0.4)."""
    p = twisted(np.pi / 6, 0.2 * random_hermitian(2, 2.0, seed))
    return ProblemDef(p.V, p.bc, "twisted_perturbed")


GOLDEN = {
    "dirichlet_scalar": dirichlet_scalar,
    "neumann_scalar": neumann_scalar,
    "twisted": twisted,
    "dirichlet_matrix": dirichlet_matrix,
    "commuting3": commuting3,
    "twisted_perturbed": twisted_perturbed,
}


def golden_problems() -> list[ProblemDef]:
    return [f() for f in GOLDEN.values()]


def exact_eigenvalues(name: str, count: int) -> np.ndarray:
    """Closed-form lowest eigenvalues (with multiplicity) for the V = 0 golden problems."""
    m = np.arange(0, count + 2)
    if name == "dirichlet_scalar":
        vals = (np.pi * m[1:]) ** 2
    elif name == "neumann_scalar":
        vals = (np.pi * m) ** 2
    elif name == "twisted":
        g = np.pi / 6
        vals = np.r_[(np.pi * m + g) ** 2, (np.pi * m[1:] - g) ** 2]
    elif name == "commuting3":
        vals = np.r_[(np.pi * m) ** 2, (np.pi * (m + 0.5)) ** 2, (np.pi * (m + 0.5)) ** 2]
    else:
        raise KeyError(name)
    return np.sort(vals)[:count]
