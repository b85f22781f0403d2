"""The characteristic matrix W(lambda), its free counterpart W0, and zero counting.

``W(lambda) = Gamma_plus F_minus(., lambda)``: lambda is an eigenvalue exactly
when W(lambda) is singular, and the dimension of the kernel is the
multiplicity.  W is returned rescaled by ``exp(-|Im sqrt(lambda)|)``, the
factor picked up by F_minus between 0 and 1 (see :mod:`vsl.propagate`).

For V = 0, a = b = 0 the matrix is explicit::

    W0 = -lam s Tp^ Tm^ + c Tp^ Tm - c Tp Tm^ - s Tp Tm,

with ``c = cos sqrt(lam)``, ``s = sin sqrt(lam)/sqrt(lam)`` and ``T^ = I - T``.
Written through the boundary geometry this splits into NN, ND, DN, DD and
twisted blocks, each of which can be inverted in closed form.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ContourTooClose, NearExceptionalSet
from .geometry import BoundaryGeometry
from .problem import ProblemDef, boundary_map
from .propagate import _trig_scaled, end_values, fundamental

EXCEPTIONAL_DIST = 1e-6
MAX_CONTOUR_NODES = 1 << 14


@dataclass(frozen=True)
class WronskianValue:
    lam: complex
    W: np.ndarray
    scaling_exponent: float  # true W = exp(scaling_exponent) * W

    @property
    def unscaled(self) -> np.ndarray:
        return np.exp(self.scaling_exponent) * self.W


@dataclass(frozen=True)
class Contour:
    """Circle ``|lambda - center| = radius`` traversed counter-clockwise."""

    center: complex
    radius: float
    node_count: int = 64

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("contour radius must be positive")
        if self.node_count < 64:
            raise ValueError("contour needs at least 64 nodes")

    def nodes(self, m: int | None = None) -> np.ndarray:
        m = self.node_count if m is None else m
        return self.center + self.radius * np.exp(2j * np.pi * np.arange(m) / m)

    @classmethod
    def through(cls, lo: float, hi: float, node_count: int = 64) -> "Contour":
        """Circle whose diameter is the real segment [lo, hi]."""
        return cls(0.5 * (lo + hi), 0.5 * (hi - lo), node_count)


class DetValue(NamedTuple):
    det: complex       # determinant of the rescaled W
    exponent: float    # true det W = det * exp(exponent)

    @property
    def value(self) -> complex:
        return self.det * np.exp(self.exponent)


# ---------------------------------------------------------------------------
# W from the minus-side solution
# ---------------------------------------------------------------------------

def wronskian_batch(problem: ProblemDef, lams, grid_size: int = 64, *, dlam: bool = False,
                    method: str = "exp"):
    """Rescaled ``W`` (and ``dW/dlambda``) over a vector of lambda values.

    Returns ``(W, Wd, kappa)``; ``Wd`` is ``None`` unless ``dlam``.
    """
    F, P, Fd, Pd, kappa = end_values(problem, "minus", lams, grid_size, dlam=dlam, method=method)
    W = boundary_map(problem.bc, "plus", "gamma", F, P)
    Wd = boundary_map(problem.bc, "plus", "gamma", Fd, Pd) if dlam else None
    return W, Wd, kappa


def wronskian(problem: ProblemDef, lam: complex, grid_size: int = 64, method: str = "exp") -> WronskianValue:
    W, _, kappa = wronskian_batch(problem, [lam], grid_size, method=method)
    return WronskianValue(complex(lam), W[0], float(kappa[0]))


def plus_boundary_values(problem: ProblemDef, lams, grid_size: int = 64, method: str = "exp"):
    """``(Gamma_minus F_plus, Gamma_minus^d F_plus)`` at x = 0, rescaled, batched."""
    F, P, _, _, kappa = end_values(problem, "plus", lams, grid_size, method=method)
    bc = problem.bc
    return (boundary_map(bc, "minus", "gamma", F, P),
            boundary_map(bc, "minus", "gamma_dual", F, P), kappa)


def det_w(problem: ProblemDef, lam: complex, grid_size: int = 64) -> DetValue:
    """Determinant of the rescaled W, with the removed exponent ``N kappa``."""
    W = wronskian(problem, lam, grid_size)
    return DetValue(complex(np.linalg.det(W.W)), problem.n * W.scaling_exponent)


def duality_residual(problem: ProblemDef, lams, grid_size: int = 64) -> np.ndarray:
    """``||W(lam) + [(Gamma_minus F_plus)(conj lam)]*|| / ||W(lam)||`` per lambda."""
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    W, _, _ = wronskian_batch(problem, lams, grid_size)
    G, _, _ = plus_boundary_values(problem, lams.conj(), grid_size)
    R = W + np.conj(np.swapaxes(G, -1, -2))
    return np.linalg.norm(R, 2, axis=(-2, -1)) / np.maximum(np.linalg.norm(W, 2, axis=(-2, -1)), 1e-300)


def wronskian_profile(problem: ProblemDef, lam: complex, grid_size: int = 256):
    """``{F_plus, F_minus}(x, lam)`` on the propagation grid (rescaled by exp(-kappa)).

    ``{F, G} = F(x, conj lam)* G' - F'(x, conj lam)* G``.
    """
    fm = fundamental(problem, "minus", lam, grid_size)
    fp = fundamental(problem, "plus", np.conj(lam), grid_size)
    if len(fm.grid) != len(fp.grid) or np.any(fm.grid != fp.grid):
        raise RuntimeError("minus and plus solutions on different grids")
    H = lambda A: np.conj(np.swapaxes(A, -1, -2))
    return fm.grid, H(fp.F) @ fm.Fprime - H(fp.Fprime) @ fm.F


def self_wronskian(problem: ProblemDef, lam: float, grid_size: int = 256):
    """``{F_minus, F_minus}(x, lam)`` and ``max ||F_minus||^2`` (for real lam this vanishes)."""
    fm = fundamental(problem, "minus", lam, grid_size)
    fc = fundamental(problem, "minus", np.conj(lam), grid_size)
    H = lambda A: np.conj(np.swapaxes(A, -1, -2))
    S = H(fc.F) @ fm.Fprime - H(fc.Fprime) @ fm.F
    return S, float(np.max(np.linalg.norm(fm.F, 2, axis=(-2, -1)))) ** 2


# ---------------------------------------------------------------------------
# the free characteristic matrix
# ---------------------------------------------------------------------------

def _cs(lam, scaled: bool):
    c, s, _, _, im = _trig_scaled(lam, derivs=False)
    if not scaled:
        f = np.exp(im)
        c, s = c * f, s * f
    return c, s


def unperturbed(geometry: BoundaryGeometry, lam: complex, scaled: bool = False) -> np.ndarray:
    """Closed-form ``W0(lam)`` (times ``exp(-|Im sqrt lam|)`` when ``scaled``)."""
    g = geometry
    c, s = _cs(complex(lam), scaled)
    return (-lam * s * (g.P_NN + g.I11) + c * (g.P_DN + g.I12)
            - c * (g.P_ND + g.I21) - s * (g.P_DD + g.I22))


def unperturbed_det(geometry: BoundaryGeometry, lam: complex) -> complex:
    """Product formula for ``det W0`` over the blocks."""
    d = geometry.dims
    k = np.sqrt(complex(lam))
    c, s = _cs(complex(lam), False)
    out = (-lam * s) ** d["NN"] * (-c) ** d["ND"] * c ** d["DN"] * (-s) ** d["DD"]
    for b in geometry.twisted:
        out *= (np.sin(k - b.gamma) * np.sin(k + b.gamma)) ** b.dim
    return complex(out)


def _dist_to_lattice(k: complex, shift: float = 0.0) -> float:
    # distance from k to {pi n + shift : n in Z}
    n = np.round((k.real - shift) / np.pi)
    return float(abs(k - (np.pi * n + shift)))


def exceptional_distance(geometry: BoundaryGeometry, lam: complex) -> float:
    """Distance, in the sqrt(lambda) variable, to the points where W0 is not invertible.

    Only the singular sets of blocks actually present are considered.
    """
    d = geometry.dims
    k = np.sqrt(complex(lam))
    dist = np.inf
    if d["NN"] or d["DD"] or geometry.twisted:
        dist = min(dist, _dist_to_lattice(k))
    if d["ND"] or d["DN"]:
        dist = min(dist, _dist_to_lattice(k, np.pi / 2))
    for b in geometry.twisted:
        dist = min(dist, _dist_to_lattice(k, b.gamma), _dist_to_lattice(k, -b.gamma))
    return dist


def twisted_J(geometry: BoundaryGeometry, lam: complex):
    """``(J11, J12, J21, J22)`` in the stored bases, using ``cot^2 = c^2 / (lam s^2)``."""
    c, s = _cs(complex(lam), True)
    cot2 = c * c / (lam * s * s)
    i11, i12, i21, i22 = geometry.block_matrices()
    inv = np.linalg.inv
    i11i, i22i = inv(i11), inv(i22)
    J11 = inv(i11 + cot2 * i12 @ i22i @ i21)
    J22 = inv(i22 + cot2 * i21 @ i11i @ i12)
    return J11, -J11 @ i12 @ i22i, -J22 @ i21 @ i11i, J22


def unperturbed_inverse(geometry: BoundaryGeometry, lam: complex, scaled: bool = False) -> np.ndarray:
    """Closed-form inverse of ``W0(lam)`` (of the scaled W0 when ``scaled``)."""
    lam = complex(lam)
    dist = exceptional_distance(geometry, lam)
    if dist <= EXCEPTIONAL_DIST:
        raise NearExceptionalSet(f"sqrt(lambda) within {dist:.2e} of a singular point of W0")
    g = geometry
    c, s = _cs(lam, scaled)
    out = np.zeros((g.n, g.n), dtype=complex)
    d = g.dims
    if d["NN"]:
        out += -1.0 / (lam * s) * g.P_NN
    if d["ND"]:
        out += -1.0 / c * g.P_ND
    if d["DN"]:
        out += 1.0 / c * g.P_DN
    if d["DD"]:
        out += -1.0 / s * g.P_DD
    if g.twisted:
        J11, J12, J21, J22 = twisted_J(g, lam)
        Bm, Bp = g.basis_minus, g.basis_plus
        Bmq, Bpq = g.basis_minus_perp, g.basis_plus_perp
        H = lambda X: X.conj().T
        k12 = c / (lam * s * s)
        out += Bmq @ (-1.0 / (lam * s) * J11) @ H(Bpq)
        out += Bmq @ (k12 * J12) @ H(Bp)
        out += Bm @ (-k12 * J21) @ H(Bpq)
        out += Bm @ (-1.0 / s * J22) @ H(Bp)
    return out


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------

def _det_on(problem: ProblemDef, lams, grid_size: int) -> np.ndarray:
    W, _, _ = wronskian_batch(problem, lams, grid_size)
    return np.linalg.det(W)


def count_zeros(problem: ProblemDef, contour: Contour, grid_size: int = 64,
                rel_floor: float = 1e-10) -> int:
    """Number of eigenvalues inside ``contour``: the winding number of det W.

    Node count doubles until every phase increment is below pi/4 and the
    count agrees with the previous level.
    """
    m = contour.node_count
    d = _det_on(problem, contour.nodes(m), grid_size)
    prev = None
    while True:
        amax = np.max(np.abs(d))
        if not np.all(np.isfinite(d)) or amax == 0 or np.min(np.abs(d)) < rel_floor * amax:
            raise ContourTooClose(
                f"|det W| nearly vanishes on the contour (center {contour.center}, radius {contour.radius:g})")
        inc = np.angle(np.roll(d, -1) / d)
        count = int(np.round(np.sum(inc) / (2 * np.pi)))
        if np.max(np.abs(inc)) < np.pi / 4 and count == prev:
            if count < 0:
                raise ContourTooClose("negative winding number")
            return count
        prev = count if np.max(np.abs(inc)) < np.pi / 4 else None
        if 2 * m > MAX_CONTOUR_NODES:
            raise ContourTooClose(f"winding number did not stabilise with {m} nodes")
        # interleave the new midpoints
        mid = contour.center + contour.radius * np.exp(2j * np.pi * (np.arange(m) + 0.5) / m)
        dm = _det_on(problem, mid, grid_size)
        d = np.column_stack([d, dm]).ravel()
        m *= 2


def rouche_margin(problem: ProblemDef, geometry: BoundaryGeometry, contour: Contour,
                  grid_size: int = 64, balanced: bool = False) -> float:
    """``max ||(W - W0) W0^{-1}||`` over the contour nodes; below 1 certifies equal counts.

    With ``balanced`` the product is conjugated by ``L = Tp_perp / r + Tp r``,
    ``r = max(1, |lam|)^(1/4)``.  A similarity does not change
    ``det(W0 + t (W - W0))``, so the balanced value is an equally valid
    certificate; it stays bounded on small circles where the plain norm grows
    like sqrt(lam).
    """
    lams = contour.nodes()
    W, _, _ = wronskian_batch(problem, lams, grid_size)
    bc = problem.bc
    worst = 0.0
    for lam, Wk in zip(lams, W):
        W0 = unperturbed(geometry, lam, scaled=True)
        Wi = unperturbed_inverse(geometry, lam, scaled=True)
        X = (Wk - W0) @ Wi
        if balanced:
            r = max(1.0, abs(lam)) ** 0.25
            X = (bc.Tp_perp / r + bc.Tp * r) @ X @ (bc.Tp_perp * r + bc.Tp / r)
        worst = max(worst, float(np.linalg.norm(X, 2)))
    return worst


__all__ = ["WronskianValue", "Contour", "DetValue", "wronskian", "wronskian_batch",
           "plus_boundary_values", "det_w", "duality_residual", "wronskian_profile",
           "self_wronskian", "unperturbed", "unperturbed_det", "unperturbed_inverse",
           "twisted_J", "exceptional_distance", "count_zeros", "rouche_margin"]
