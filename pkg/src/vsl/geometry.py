"""Orthogonal decomposition of C^N induced by the projector pair (Tm, Tp).

C^N splits into

    E_DD = Ran Tm ∩ Ran Tp,        E_ND = Ker Tm ∩ Ran Tp,
    E_DN = Ran Tm ∩ Ker Tp,        E_NN = Ker Tm ∩ Ker Tp,

plus twisted blocks E_i = E_i^- + E_i^+ with E_i^± ⊂ Ran T± meeting at a
principal angle gamma_i in (0, pi/2).  The cos^2 gamma_i are the eigenvalues
of Tp Tm Tp strictly between 0 and 1; eigenvalue 1 gives E_DD.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ClusterAmbiguity, DimensionMismatch
from .linalg import as_projector, basis_of, herm_eig, norm2, numerical_rank, orth
from .problem import matrix_to_json
from .report import VerificationReport

DEFAULT_ANGLE_TOL = 1e-7
MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class TwistedBlock:
    gamma: float
    basis_minus: np.ndarray  # orthonormal columns spanning E_i^-
    basis_plus: np.ndarray   # orthonormal columns spanning E_i^+

    @property
    def dim(self) -> int:
        return self.basis_plus.shape[1]

    @property
    def P_minus(self) -> np.ndarray:
        return self.basis_minus @ self.basis_minus.conj().T

    @property
    def P_plus(self) -> np.ndarray:
        return self.basis_plus @ self.basis_plus.conj().T

    @property
    def P(self) -> np.ndarray:
        """Projector onto the whole block E_i = E_i^- + E_i^+."""
        Q = orth(np.hstack([self.basis_minus, self.basis_plus]))
        return Q @ Q.conj().T


@dataclass(frozen=True, eq=False)
class BoundaryGeometry:
    P_DD: np.ndarray
    P_ND: np.ndarray
    P_DN: np.ndarray
    P_NN: np.ndarray
    twisted: tuple[TwistedBlock, ...]
    cos2_eigenvalues: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.P_DD.shape[0]

    @property
    def angles(self) -> np.ndarray:
        return np.array([b.gamma for b in self.twisted])

    @property
    def dims(self) -> dict:
        r = lambda P: int(round(np.trace(P).real))
        return {"DD": r(self.P_DD), "ND": r(self.P_ND), "DN": r(self.P_DN), "NN": r(self.P_NN),
                "twisted": [b.dim for b in self.twisted]}

    # -- bases of E_-, E_+ and of their complements inside E_T ---------------
    @property
    def basis_minus(self) -> np.ndarray:
        return np.hstack([b.basis_minus for b in self.twisted]) if self.twisted else np.zeros((self.n, 0), complex)

    @property
    def basis_plus(self) -> np.ndarray:
        return np.hstack([b.basis_plus for b in self.twisted]) if self.twisted else np.zeros((self.n, 0), complex)

    @property
    def P_minus(self) -> np.ndarray:
        B = self.basis_minus
        return B @ B.conj().T

    @property
    def P_plus(self) -> np.ndarray:
        B = self.basis_plus
        return B @ B.conj().T

    @property
    def P_T(self) -> np.ndarray:
        return sum((b.P for b in self.twisted), np.zeros((self.n, self.n), complex))

    @property
    def P_minus_perp(self) -> np.ndarray:
        return self.P_T - self.P_minus

    @property
    def P_plus_perp(self) -> np.ndarray:
        return self.P_T - self.P_plus

    @property
    def basis_minus_perp(self) -> np.ndarray:
        return _perp_basis(self.twisted, "minus", self.n)

    @property
    def basis_plus_perp(self) -> np.ndarray:
        return _perp_basis(self.twisted, "plus", self.n)

    # block maps of the identity on E_T, as N x N operators
    @property
    def I11(self) -> np.ndarray:
        return self.P_plus_perp @ self.P_minus_perp

    @property
    def I12(self) -> np.ndarray:
        return self.P_plus_perp @ self.P_minus

    @property
    def I21(self) -> np.ndarray:
        return self.P_plus @ self.P_minus_perp

    @property
    def I22(self) -> np.ndarray:
        return self.P_plus @ self.P_minus

    def block_matrices(self):
        """``(i11, i12, i21, i22)`` written in the stored orthonormal bases."""
        Bm, Bp = self.basis_minus, self.basis_plus
        Bmq, Bpq = self.basis_minus_perp, self.basis_plus_perp
        h = lambda X: X.conj().T
        return h(Bpq) @ Bmq, h(Bpq) @ Bm, h(Bp) @ Bmq, h(Bp) @ Bm

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "dims": self.dims,
            "gamma": [float(b.gamma) for b in self.twisted],
            "P_DD": matrix_to_json(self.P_DD),
            "P_ND": matrix_to_json(self.P_ND),
            "P_DN": matrix_to_json(self.P_DN),
            "P_NN": matrix_to_json(self.P_NN),
            "twisted": [
                {"gamma": float(b.gamma), "dim": b.dim,
                 "P_minus": matrix_to_json(b.P_minus), "P_plus": matrix_to_json(b.P_plus)}
                for b in self.twisted
            ],
        }


def _perp_basis(blocks, side: str, n: int) -> np.ndarray:
    cols = []
    for b in blocks:
        own = b.basis_minus if side == "minus" else b.basis_plus
        Q = orth(np.hstack([b.basis_minus, b.basis_plus]))
        # complement of E_i^side inside E_i
        R = Q - own @ (own.conj().T @ Q)
        cols.append(orth(R)[:, : b.dim])
    return np.hstack(cols) if cols else np.zeros((n, 0), complex)


def _clusters(w: np.ndarray, tol: float) -> list[list[int]]:
    groups = [[0]]
    for i in range(1, len(w)):
        gap = w[i] - w[i - 1]
        if gap <= tol:
            groups[-1].append(i)
        elif gap <= 2 * tol:
            raise ClusterAmbiguity(
                f"cos^2 values {w[i - 1]:.12g} and {w[i]:.12g} separated by {gap:.2e} <= 2*angle_tol")
        else:
            groups.append([i])
    return groups


def _range_of_compression(P: np.ndarray, what: str) -> np.ndarray:
    """Basis of the eigenvalue-1 space of a compressed projector, checking 0/1 spectrum."""
    w, V = np.linalg.eigh(0.5 * (P + P.conj().T))
    bad = np.minimum(np.abs(w), np.abs(w - 1.0))
    if bad.size and bad.max() > MEMBERSHIP_TOL:
        raise ClusterAmbiguity(
            f"{what}: membership test failed (eigenvalue off {{0,1}} by {bad.max():.2e}); "
            "refine angle_tol")
    return V[:, w > 0.5]


def decompose(Tm, Tp, angle_tol: float = DEFAULT_ANGLE_TOL) -> BoundaryGeometry:
    """Split C^N into DD/ND/DN/NN parts and twisted blocks with their angles."""
    Tm = as_projector(Tm)
    Tp = as_projector(Tp, Tm.shape[0])
    if not 0 < angle_tol < 0.1:
        raise ValueError("angle_tol must lie in (0, 0.1)")
    n = Tm.shape[0]
    w, H = herm_eig(Tp @ Tm @ Tp)
    groups = _clusters(w, angle_tol)

    dd_cols, blocks, gammas_seen = [], [], []
    for g in groups:
        mu = float(np.mean(w[g]))
        if mu <= angle_tol:
            continue
        if mu >= 1.0 - angle_tol:
            dd_cols.append(H[:, g])
            continue
        if mu <= 2 * angle_tol or mu >= 1.0 - 2 * angle_tol:
            raise ClusterAmbiguity(f"cos^2 cluster at {mu:.3e} too close to 0 or 1")
        h = orth(H[:, g])
        cosg = np.sqrt(mu)
        e = orth(Tm @ Tp @ h / cosg)
        if e.shape[1] != h.shape[1]:
            raise ClusterAmbiguity("twisted block lost rank under Tm Tp")
        gamma = float(np.arccos(cosg))
        blocks.append(TwistedBlock(gamma, e, h))
        gammas_seen.append(gamma)

    B_dd = orth(np.hstack(dd_cols)) if dd_cols else np.zeros((n, 0), complex)
    P_DD = B_dd @ B_dd.conj().T
    twisted_cols = [B_dd] + [np.hstack([b.basis_minus, b.basis_plus]) for b in blocks]
    Q = orth(np.hstack(twisted_cols)) if any(c.shape[1] for c in twisted_cols) else np.zeros((n, 0), complex)
    P_C = np.eye(n) - Q @ Q.conj().T

    B_nd = _range_of_compression(P_C @ Tp @ P_C, "ND")
    B_dn = _range_of_compression(P_C @ Tm @ P_C, "DN")
    P_ND = B_nd @ B_nd.conj().T
    P_DN = B_dn @ B_dn.conj().T
    B_nn = _range_of_compression(P_C - P_ND - P_DN, "NN")
    P_NN = B_nn @ B_nn.conj().T

    # ascending angles (descending cos^2)
    blocks.sort(key=lambda b: b.gamma)
    return BoundaryGeometry(P_DD, P_ND, P_DN, P_NN, tuple(blocks), w)


def verify_geometry(g: BoundaryGeometry, Tm, Tp, seed: int = 0x5EED,
                    tol: float = 1e-10) -> VerificationReport:
    """Orthogonality, completeness, rank chain and per-block angle checks."""
    rep = VerificationReport("geometry")
    Tm = np.asarray(Tm, dtype=complex)
    Tp = np.asarray(Tp, dtype=complex)
    n = g.n
    if Tm.shape != (n, n) or Tp.shape != (n, n):
        raise DimensionMismatch("projector order does not match geometry")
    rng = np.random.default_rng(seed)

    family = [("DD", g.P_DD), ("ND", g.P_ND), ("DN", g.P_DN), ("NN", g.P_NN)]
    family += [(f"T{i + 1}", b.P) for i, b in enumerate(g.twisted)]
    worst = 0.0
    for i, (_, P) in enumerate(family):
        for _, R in family[i + 1:]:
            worst = max(worst, norm2(P @ R))
    rep.add("orthogonality", worst, tol)
    total = sum((P for _, P in family), np.zeros((n, n), complex))
    rep.add("completeness", norm2(total - np.eye(n)), tol)

    sum_minus = sum((b.P_minus for b in g.twisted), np.zeros((n, n), complex))
    sum_plus = sum((b.P_plus for b in g.twisted), np.zeros((n, n), complex))
    rep.add("reconstruct-Tm", norm2(g.P_DD + g.P_DN + sum_minus - Tm), tol)
    rep.add("reconstruct-Tp", norm2(g.P_DD + g.P_ND + sum_plus - Tp), tol)
    expected = g.P_DD + sum((np.cos(b.gamma) ** 2 * b.P_minus for b in g.twisted), np.zeros((n, n), complex))
    rep.add("spectral-representation", norm2(Tm @ Tp @ Tm - expected), tol)

    Pp, Pm = g.P_plus, g.P_minus
    Ppq, Pmq = g.P_plus_perp, g.P_minus_perp
    ranks = [numerical_rank(M) if M.any() else 0 for M in (Pp, Pm, Pp @ Pm, Pp @ Pmq, Ppq @ Pm, Ppq @ Pmq)]
    rep.add("rank-chain", float(max(ranks) - min(ranks)), 0.0, f"ranks {ranks}")
    r = ranks[0]
    blocks_rank = [numerical_rank(M) if M.any() else 0 for M in (g.I11, g.I12, g.I21, g.I22)]
    rep.add("block-maps-invertible", float(max(abs(k - r) for k in blocks_rank)), 0.0, f"ranks {blocks_rank}")

    gammas = g.angles
    if len(gammas) > 1:
        rep.add("angles-increasing", float(np.sum(np.diff(gammas) <= 0)), 0.0)
    for i, b in enumerate(g.twisted):
        worst = 0.0
        for _ in range(16):
            c = rng.standard_normal(b.dim) + 1j * rng.standard_normal(b.dim)
            x = b.basis_minus @ c
            y = b.basis_plus @ c
            nx, ny = np.linalg.norm(x), np.linalg.norm(y)
            worst = max(worst,
                        abs(np.linalg.norm(b.P_plus @ x) - np.cos(b.gamma) * nx) / nx,
                        abs(np.linalg.norm(b.P_minus @ y) - np.cos(b.gamma) * ny) / ny)
        rep.add(f"angle-{i + 1}", worst, tol, f"gamma={b.gamma:.10f}")
        rep.add(f"dims-{i + 1}", float(abs(b.basis_minus.shape[1] - b.basis_plus.shape[1])), 0.0)
    return rep.finish()


def rotation_pair_geometry(gamma: float) -> tuple[np.ndarray, np.ndarray]:
    """The N = 2 projector pair ``Tm = e1 e1*``, ``Tp = h h*`` at angle ``gamma``."""
    e1 = np.array([1.0, 0.0])
    h = np.array([np.cos(gamma), np.sin(gamma)])
    return np.outer(e1, e1).astype(complex), np.outer(h, h).astype(complex)


__all__ = ["BoundaryGeometry", "TwistedBlock", "decompose", "verify_geometry",
           "rotation_pair_geometry", "DEFAULT_ANGLE_TOL", "basis_of"]
