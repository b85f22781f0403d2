"""Eigenvalues, multiplicities, spectral triplets and the Weyl-Titchmarsh function.

Eigenvalues are the real zeros of det W.  They are located by scanning the
smallest singular value of a balanced copy of W along the real axis, refined
by golden-section search, and their multiplicities are certified by the
winding number of det W on small circles.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (ContourTooClose, DegenerateZ, NearPole, RankMismatch,
                     UnresolvedCluster, NearExceptionalSet)
from .geometry import BoundaryGeometry, decompose
from .linalg import DEFAULT_RANK_TOL, null_space, orth
from .problem import ProblemDef, boundary_map, matrix_to_json
from .propagate import make_grid, propagate, step_count
from .threads import parallel_map
from .wronskian import (Contour, count_zeros, plus_boundary_values, rouche_margin,
                        unperturbed_det, wronskian_batch)

_GOLD = (np.sqrt(5.0) - 1.0) / 2.0
CLUSTER_TOL = 1e-6


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenvalueRecord:
    lam: float
    multiplicity: int
    series_tag: str | None = None
    enclosing_interval: tuple = (-np.inf, np.inf)
    nullity: int | None = None
    cluster: bool = False

    @property
    def gap(self) -> float:
        """Twice the distance to the nearer end of the isolating interval."""
        lo, hi = self.enclosing_interval
        return 2.0 * min(self.lam - lo, hi - self.lam)

    def to_dict(self) -> dict:
        lo, hi = self.enclosing_interval
        return {"lambda": self.lam, "multiplicity": self.multiplicity,
                "series_tag": self.series_tag, "interval": [lo, hi], "cluster": self.cluster}


class EigenvalueList(list):
    """List of records plus the ranges whose completeness could not be certified."""

    def __init__(self, records=(), uncertified=()):
        super().__init__(records)
        self.uncertified = list(uncertified)

    @property
    def certified(self) -> bool:
        return not self.uncertified

    @property
    def values(self) -> np.ndarray:
        return np.array([r.lam for r in self for _ in range(r.multiplicity)])


@dataclass(frozen=True, eq=False)
class SpectralTriplet:
    lam: float
    P: np.ndarray       # projector onto Ker W(lam)
    basis: np.ndarray   # orthonormal columns spanning Ran P
    g: np.ndarray       # k x k, in ``basis``

    @property
    def multiplicity(self) -> int:
        return self.basis.shape[1]

    @property
    def G(self) -> np.ndarray:
        """Basis-free form ``P S P`` as an N x N matrix."""
        return self.basis @ self.g @ self.basis.conj().T

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "multiplicity": self.multiplicity,
                "P": matrix_to_json(self.P), "G": matrix_to_json(self.G),
                "g": matrix_to_json(self.g), "basis": matrix_to_json(self.basis)}


@dataclass(frozen=True)
class WeylSample:
    lam: complex
    m: np.ndarray
    symmetry_residual: float = 0.0


@dataclass(frozen=True)
class LocalizationInterval:
    lo: float
    hi: float
    expected: int
    series_tag: str
    n: int
    center: float


# ---------------------------------------------------------------------------
# localisation
# ---------------------------------------------------------------------------

def varpi(size: float) -> float:
    """Half-width of the localisation intervals for a problem of the given size."""
    return 2.0 * (size + 1.0)


def spectrum_lower_bound(problem: ProblemDef) -> float:
    """A lower bound for the spectrum from the size ``K = ||V||_1 + ||a|| + ||b||``.

    The quadratic form is bounded below by ``-K (K + 1)`` (trace inequality
    ``|psi(x)|^2 <= eps ||psi'||^2 + (1 + 1/eps) ||psi||^2`` with ``eps = 1/K``).
    """
    K = problem.size
    return -max(K + 10.0, K * (K + 1.0) + 1.0)


def _series(geometry: BoundaryGeometry):
    """Unperturbed root families as ``(tag, shift, dim, n_min)``: roots at ``(pi n + shift)^2``."""
    d = geometry.dims
    out = []
    nn_dd = d["NN"] + d["DD"]
    if nn_dd:
        tag = "NN/DD" if d["NN"] and d["DD"] else ("NN" if d["NN"] else "DD")
        out.append((tag, 0.0, nn_dd, 1))
    if d["ND"] + d["DN"]:
        out.append(("ND/DN", np.pi / 2, d["ND"] + d["DN"], 0))
    for i, b in enumerate(geometry.twisted, 1):
        out.append((f"twisted({i},+)", b.gamma, b.dim, 0))
        out.append((f"twisted({i},-)", -b.gamma, b.dim, 1))
    return out


def unperturbed_roots(geometry: BoundaryGeometry, lam_max: float):
    """Zeros of det W0 below ``lam_max`` as ``(lam, multiplicity, tag)``, ascending."""
    d = geometry.dims
    kmax = np.sqrt(max(lam_max, 0.0))
    roots = []
    if d["NN"]:
        roots.append((0.0, d["NN"], "NN"))
    for tag, shift, dim, nmin in _series(geometry):
        n = nmin
        while np.pi * n + shift <= kmax:
            k = np.pi * n + shift
            if k > 0:
                roots.append((k * k, dim, tag))
            n += 1
    return sorted(roots)


def localization_intervals(geometry: BoundaryGeometry, v_norm: float, n_max: int, n_lo: int = 1):
    """Intervals ``(center - varpi, center + varpi)`` around the unperturbed series.

    Centres are ``pi^2 n^2`` (NN and DD dims), ``pi^2 (n + 1/2)^2`` (ND and DN
    dims) and ``(pi n +- gamma_i)^2`` (twisted block dims), n = n_lo..n_max.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    w = varpi(v_norm)
    out = []
    for n in range(max(n_lo, 1), n_max + 1):
        for tag, shift, dim, _ in _series(geometry):
            c = (np.pi * n + shift) ** 2
            out.append(LocalizationInterval(c - w, c + w, dim, tag, n, c))
    return sorted(out, key=lambda I: I.center)


def w0_count_in(geometry: BoundaryGeometry, lo: float, hi: float) -> int:
    """Number of unperturbed zeros (with multiplicity) in the open interval (lo, hi)."""
    return sum(m for lam, m, _ in unperturbed_roots(geometry, hi) if lo < lam < hi)


def certified_n_lo(problem: ProblemDef, geometry: BoundaryGeometry | None = None,
                   n_search: int = 60, threshold: float = 0.9) -> int | None:
    """Smallest n with a balanced ``rouche_margin < threshold`` on ``|lambda| = pi^2 n^2 + varpi``."""
    g = geometry or decompose(problem.bc.Tm, problem.bc.Tp)
    w = varpi(problem.size)
    for n in range(1, n_search + 1):
        R = np.pi ** 2 * n * n + w
        try:
            m = rouche_margin(problem, g, Contour(0.0, R, 128), balanced=True)
        except NearExceptionalSet:
            continue
        if m < threshold:
            return n
    return None


def series_tag(geometry: BoundaryGeometry, lam: float, width: float) -> str | None:
    best, tag = np.inf, None
    for root, _, t in unperturbed_roots(geometry, lam + width + 1.0):
        if abs(root - lam) < best:
            best, tag = abs(root - lam), t
    return tag if best <= width else None


# ---------------------------------------------------------------------------
# scanning
# ---------------------------------------------------------------------------

def _balanced(problem: ProblemDef, lams, W):
    """``L W R`` with the NN / DD rows and columns rescaled to unit size."""
    bc = problem.bc
    om = np.sqrt(np.maximum(1.0, np.abs(lams)))[:, None, None]
    r = np.sqrt(om)
    L = bc.Tp_perp[None] / r + bc.Tp[None] * r
    R = bc.Tm_perp[None] / r + bc.Tm[None] * r
    return L @ W @ R, R


def sigma_min(problem: ProblemDef, lams, grid_size: int = 64) -> np.ndarray:
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    W, _, _ = wronskian_batch(problem, lams, grid_size)
    Wt, _ = _balanced(problem, lams, W)
    return np.linalg.svd(Wt, compute_uv=False)[:, -1]


def _scan_step(geometry: BoundaryGeometry) -> float:
    """Scan step in sqrt(lambda): one eighth of the smallest gap between series."""
    shifts = [0.0]
    d = geometry.dims
    if d["ND"] + d["DN"]:
        shifts.append(np.pi / 2)
    for b in geometry.twisted:
        shifts += [b.gamma, np.pi - b.gamma]
    pts = np.sort(np.mod(shifts, np.pi))
    gaps = np.diff(np.r_[pts, pts[0] + np.pi])
    gaps = gaps[gaps > 1e-9]
    return float(min(gaps.min() if gaps.size else np.pi, np.pi)) / 8.0


def _golden(f, a, b, rtol=4e-15, maxit=160):
    """Lockstep golden-section minimisation over many brackets at once."""
    a, b = np.array(a, float), np.array(b, float)
    c = b - _GOLD * (b - a)
    d = a + _GOLD * (b - a)
    vals = f(np.r_[c, d])
    fc, fd = vals[: len(c)], vals[len(c):]
    for _ in range(maxit):
        active = (b - a) > rtol * np.maximum(1.0, np.abs(a) + np.abs(b))
        if not np.any(active):
            break
        left = fc <= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        c_new = np.where(left, b - _GOLD * (b - a), d)
        d_new = np.where(left, c, a + _GOLD * (b - a))
        fc_new = np.where(left, np.nan, fd)
        fd_new = np.where(left, fc, np.nan)
        x = np.where(left, c_new, d_new)
        fx = f(x)
        c, d = c_new, d_new
        fc = np.where(left, fx, fc_new)
        fd = np.where(left, fd_new, fx)
    return np.where(fc <= fd, c, d), np.minimum(fc, fd)


def _local_extrema(s):
    mins = [i for i in range(1, len(s) - 1) if s[i] <= s[i - 1] and s[i] <= s[i + 1]]
    return mins


def _window_bounds(x, s, mins):
    """Split points (at sigma_min maxima) so that each window holds one minimum."""
    bounds = [x[0]]
    for i, j in zip(mins[:-1], mins[1:]):
        k = i + int(np.argmax(s[i:j + 1]))
        bounds.append(x[k])
    bounds.append(x[-1])
    return bounds


def _nullity(problem, lams, rank_tol, grid_size=64) -> np.ndarray:
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    if lams.size == 0:
        return np.zeros(0, dtype=int)
    W, _, _ = wronskian_batch(problem, lams, grid_size)
    Wt, _ = _balanced(problem, lams, W)
    s = np.linalg.svd(Wt, compute_uv=False)
    return np.sum(s <= rank_tol * np.maximum(1.0, s[:, :1]), axis=1)


def _scan_window(problem, lam_lo, lam_hi, du, rank_tol):
    """Candidate eigenvalues and window bounds from one sigma_min scan of [lam_lo, lam_hi]."""
    u_lo = np.sign(lam_lo) * np.sqrt(abs(lam_lo))
    u_hi = np.sign(lam_hi) * np.sqrt(abs(lam_hi))
    m = max(3, int(np.ceil((u_hi - u_lo) / du)) + 1)
    u = np.linspace(u_lo, u_hi, m)
    if u_lo < 0 < u_hi:
        u = np.unique(np.r_[u, 0.0])
    x = np.sign(u) * u * u
    s = sigma_min(problem, x)
    mins = _local_extrema(s)
    bounds = _window_bounds(x, s, mins)
    if not mins:
        return [], bounds
    lo = x[[i - 1 for i in mins]]
    hi = x[[i + 1 for i in mins]]
    lam, fmin = _golden(lambda t: sigma_min(problem, t), lo, hi)
    return list(zip(lam, fmin)), bounds


def find_eigenvalues(problem: ProblemDef, lambda_max: float, rank_tol: float = DEFAULT_RANK_TOL,
                     lambda_min: float | None = None, strict: bool = False,
                     geometry: BoundaryGeometry | None = None) -> EigenvalueList:
    """All eigenvalues in ``(lambda_lo, lambda_max)`` with certified multiplicities.

    ``lambda_lo`` defaults to :func:`spectrum_lower_bound`.  Ranges whose
    contour count disagrees with the records found even after refinement are
    returned as cluster records and listed in ``result.uncertified``.
    """
    if not lambda_max > 0:
        raise ValueError("lambda_max must be positive")
    g = geometry or decompose(problem.bc.Tm, problem.bc.Tp)
    lam_lo = spectrum_lower_bound(problem) if lambda_min is None else lambda_min
    du = _scan_step(g)
    top = (np.sqrt(lambda_max) + 2 * du) ** 2
    width = varpi(problem.size)

    records: list[tuple[float, int, bool]] = []
    uncertified = []
    pending = [(lam_lo, top, du, 0)]
    while pending:
        lo, hi, step, depth = pending.pop()
        cands, bounds = _scan_window(problem, lo, hi, step, rank_tol)
        lams = np.array([l for l, _ in cands])
        zeros = sorted(lams[_nullity(problem, lams, rank_tol) > 0])
        # merge minima that sit on top of each other
        merged: list[list[float]] = []
        for z in zeros:
            if merged and z - merged[-1][-1] < CLUSTER_TOL * (1 + abs(z)):
                merged[-1].append(z)
            else:
                merged.append([z])
        for wlo, whi in zip(bounds[:-1], bounds[1:]):
            inside = [grp for grp in merged if wlo < grp[0] < whi]
            try:
                count = count_zeros(problem, Contour.through(wlo, whi))
            except ContourTooClose:
                count = None
            nul = [int(k) for k in _nullity(problem, [np.mean(grp) for grp in inside], rank_tol)]
            if count is not None and count == sum(nul):
                for grp, k in zip(inside, nul):
                    records.append((float(np.mean(grp)), k, len(grp) > 1))
                continue
            if depth < 3 and (count is None or count > sum(nul)):
                pending.append((wlo, whi, step / 4, depth + 1))
                continue
            if strict:
                raise UnresolvedCluster(f"window ({wlo:.6g}, {whi:.6g}): count {count}, found {sum(nul)}")
            uncertified.append((wlo, whi))
            if inside:
                best = min(inside, key=lambda grp: abs(np.mean(grp) - 0.5 * (wlo + whi)))
                k = count if count is not None else sum(nul)
                records.append((float(np.mean(best)), max(k, 1), True))
    records.sort()

    out = []
    for i, (lam, k, clus) in enumerate(records):
        left = 0.5 * (records[i - 1][0] + lam) if i else lam_lo
        right = 0.5 * (lam + records[i + 1][0]) if i + 1 < len(records) else top
        mult = k
        if not clus:
            rad = min(2.0 * min(lam - left, right - lam) / 3.0, 0.5)
            try:
                mult = count_zeros(problem, Contour(lam, rad))
            except ContourTooClose:
                uncertified.append((lam - rad, lam + rad))
            if mult != k:
                uncertified.append((lam - rad, lam + rad))
                clus = mult > k
                mult = max(mult, 1)
        if lam_lo < lam < lambda_max:
            out.append(EigenvalueRecord(lam, int(mult), series_tag(g, lam, width),
                                        (left, right), k, clus))
    return EigenvalueList(out, uncertified)


def first_eigenvalues(problem: ProblemDef, count: int, rank_tol: float = DEFAULT_RANK_TOL,
                      geometry: BoundaryGeometry | None = None) -> EigenvalueList:
    """Records covering at least the lowest ``count`` eigenvalues (with multiplicity)."""
    g = geometry or decompose(problem.bc.Tm, problem.bc.Tp)
    lam_max = (np.pi * (count / problem.n + 2.0)) ** 2 + 2 * problem.size
    while True:
        recs = find_eigenvalues(problem, lam_max, rank_tol, geometry=g)
        if sum(r.multiplicity for r in recs) >= count:
            out, total = [], 0
            for r in recs:
                if total >= count:
                    break
                out.append(r)
                total += r.multiplicity
            return EigenvalueList(out, recs.uncertified)
        lam_max *= 2.0


# ---------------------------------------------------------------------------
# spectral data
# ---------------------------------------------------------------------------

def _kernel(problem: ProblemDef, lam: float, rank_tol: float):
    W, _, _ = wronskian_batch(problem, [lam], 64)
    Wt, R = _balanced(problem, np.array([lam]), W)
    K = null_space(Wt[0], rank_tol)
    return orth(R[0] @ K)


def _simpson_romberg(nodes: np.ndarray, f: np.ndarray, breaks: np.ndarray) -> np.ndarray:
    """Integral of samples ``f`` over [0, 1]: Simpson on each piece plus one Richardson step."""
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        idx = np.nonzero((nodes >= lo - 1e-15) & (nodes <= hi + 1e-15))[0]
        y = f[idx]
        h = (hi - lo) / (len(idx) - 1)

        def simpson(y, h):
            return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum(axis=0) + 2.0 * y[2:-1:2].sum(axis=0))

        fine, coarse = simpson(y, h), simpson(y[::2], 2 * h)
        total = total + (16.0 * fine - coarse) / 15.0
    return total


def gram_matrix(problem: ProblemDef, lam: float, grid_size: int = 1024) -> np.ndarray:
    """``S = int_0^1 F_minus(x, lam)* F_minus(x, lam) dx``."""
    k = np.sqrt(abs(lam))
    steps = max(grid_size, int(np.ceil(64 * k)), step_count(problem, lam, 64))
    nodes = make_grid(problem, steps, multiple=4)
    nodes, Y, _, kappa, _ = propagate(problem, "minus", [lam], 64, nodes=nodes)
    F = Y[0, :, 0] * np.exp(kappa[0] * nodes)[:, None, None]
    integrand = np.conj(np.swapaxes(F, -1, -2)) @ F
    br = problem.V.breakpoints()
    S = _simpson_romberg(nodes, integrand, br)
    return 0.5 * (S + S.conj().T)


def _check_rank(record: EigenvalueRecord, B: np.ndarray):
    if B.shape[1] != record.multiplicity:
        raise RankMismatch(f"kernel dimension {B.shape[1]} at lambda={record.lam:.12g}, "
                           f"expected multiplicity {record.multiplicity}")


def _finish(record, B, G):
    g = B.conj().T @ G @ B
    g = 0.5 * (g + g.conj().T)
    if np.linalg.eigvalsh(g).min() <= 0:
        raise RankMismatch(f"g not positive definite at lambda={record.lam:.12g}")
    return SpectralTriplet(float(record.lam), B @ B.conj().T, B, g)


def spectral_triplet(problem: ProblemDef, record: EigenvalueRecord, rank_tol: float = DEFAULT_RANK_TOL,
                     grid_size: int = 1024) -> SpectralTriplet:
    """``(lambda, P, g)`` with g from the Gram integral of the eigen-solutions."""
    B = _kernel(problem, record.lam, rank_tol)
    _check_rank(record, B)
    S = gram_matrix(problem, record.lam, grid_size)
    return _finish(record, B, S)


def derivative_G(problem: ProblemDef, lam: float, P: np.ndarray) -> np.ndarray:
    """``G = -P [(Gamma_plus dF_minus/dlambda)]* (Gamma_plus^d F_minus) P`` (unscaled)."""
    from .propagate import end_values
    F, Fp, Fd, Fpd, kappa = end_values(problem, "minus", [lam], 64, dlam=True)
    bc = problem.bc
    Wd = boundary_map(bc, "plus", "gamma", Fd[0], Fpd[0])
    D = boundary_map(bc, "plus", "gamma_dual", F[0], Fp[0])
    G = -P @ Wd.conj().T @ D @ P * np.exp(2 * kappa[0])
    return 0.5 * (G + G.conj().T)


def triplet_via_derivative(problem: ProblemDef, record: EigenvalueRecord,
                           rank_tol: float = DEFAULT_RANK_TOL) -> SpectralTriplet:
    B = _kernel(problem, record.lam, rank_tol)
    _check_rank(record, B)
    G = derivative_G(problem, record.lam, B @ B.conj().T)
    return _finish(record, B, G)


def z_matrix(problem: ProblemDef, record: EigenvalueRecord, triplet: SpectralTriplet | None = None,
             rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """``Z = W'(lam) P + W(lam) P_perp``, certified invertible (rescaled like W)."""
    if triplet is None:
        B = _kernel(problem, record.lam, rank_tol)
        _check_rank(record, B)
        P = B @ B.conj().T
    else:
        P = triplet.P
    W, Wd, _ = wronskian_batch(problem, [record.lam], 64, dlam=True)
    Z = Wd[0] @ P + W[0] @ (np.eye(problem.n) - P)
    s = np.linalg.svd(Z, compute_uv=False)
    if not s[-1] > 1e-8 * s[0]:
        raise DegenerateZ(f"sigma_min(Z)/sigma_max(Z) = {s[-1] / s[0]:.2e} at lambda={record.lam:.12g}")
    return Z


def m_function_batch(problem: ProblemDef, lams, pole_tol: float = 1e-10) -> np.ndarray:
    """``m = -(Gamma_minus^d F_plus)(Gamma_minus F_plus)^{-1}`` over a vector of lambda."""
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    G, D, _ = plus_boundary_values(problem, lams)
    # measured against the full boundary data [G; D], which never degenerates
    s = np.linalg.svd(G, compute_uv=False)[:, -1]
    scale = np.linalg.svd(np.concatenate([G, D], axis=1), compute_uv=False)[:, 0]
    bad = s <= pole_tol * scale
    if np.any(bad):
        raise NearPole(f"Gamma_minus F_plus nearly singular at lambda={lams[bad][0]}")
    return -D @ np.linalg.inv(G)


def m_function(problem: ProblemDef, lam: complex) -> WeylSample:
    """Weyl-Titchmarsh matrix at ``lam``; the residual of m(conj lam) = m(lam)* is recorded."""
    lam = complex(lam)
    m, mc = m_function_batch(problem, [lam, lam.conjugate()])
    res = float(np.linalg.norm(mc - m.conj().T, 2) / max(np.linalg.norm(m, 2), 1e-300))
    return WeylSample(lam, m, res)


def residue(problem: ProblemDef, record: EigenvalueRecord, nodes: int = 256) -> np.ndarray:
    """``(1/2 pi i) \\oint m`` on a circle of radius ``min(gap/3, 0.1)`` (trapezoid rule)."""
    r = min(record.gap / 3.0, 0.1)
    lam = record.lam + r * np.exp(2j * np.pi * np.arange(nodes) / nodes)
    try:
        m = m_function_batch(problem, lam)
    except NearPole as exc:
        raise ContourTooClose(str(exc)) from exc
    return np.mean(m * (lam - record.lam)[:, None, None], axis=0)


# ---------------------------------------------------------------------------
# fingerprints
# ---------------------------------------------------------------------------

@dataclass
class FingerprintResult:
    distance: float
    terms: list = field(default_factory=list)   # per component: dict of contributions
    misaligned: bool = False

    def __float__(self):
        return self.distance


def spectral_data(problem: ProblemDef, count: int, rank_tol: float = DEFAULT_RANK_TOL):
    """Records and integral-route triplets for the lowest ``count`` eigenvalues."""
    recs = first_eigenvalues(problem, count, rank_tol)
    return recs, [spectral_triplet(problem, r, rank_tol) for r in recs]


def fingerprint_distance(problem_a: ProblemDef, problem_b: ProblemDef, count: int,
                         rank_tol: float = DEFAULT_RANK_TOL) -> FingerprintResult:
    """Distance between the lowest ``count`` spectral data of two problems.

    Eigenvalues are aligned by position (counted with multiplicity).
    Positions that share a multiple eigenvalue on either side form one group,
    and a group is compared through its summed projectors and summed G.  A
    group cut by the truncation is compared by eigenvalues only and flagged.
    """
    bca, bcb = problem_a.bc, problem_b.bc
    if problem_a.n != problem_b.n or not (np.allclose(bca.Tm, bcb.Tm, atol=1e-12)
                                          and np.allclose(bca.Tp, bcb.Tp, atol=1e-12)):
        raise ValueError("problems must share N and the projectors Tm, Tp")
    (ra, ta), (rb, tb) = parallel_map(lambda p: spectral_data(p, count, rank_tol), [problem_a, problem_b])

    def expand(recs):
        owner = []
        for i, r in enumerate(recs):
            owner += [i] * r.multiplicity
        return owner

    oa, ob = expand(ra), expand(rb)
    parent = list(range(count))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for owner in (oa, ob):
        for p in range(1, count):
            if owner[p] == owner[p - 1]:
                parent[find(p)] = find(p - 1)
    comps: dict[int, list[int]] = {}
    for p in range(count):
        comps.setdefault(find(p), []).append(p)

    total, terms, misaligned = 0.0, [], False
    for pos in comps.values():
        ia = sorted({oa[p] for p in pos})
        ib = sorted({ob[p] for p in pos})
        dl = sum(abs(ra[oa[p]].lam - rb[ob[p]].lam) for p in pos)
        full_a = sum(ra[i].multiplicity for i in ia) == len(pos)
        full_b = sum(rb[i].multiplicity for i in ib) == len(pos)
        term = {"positions": pos, "eigenvalue": dl, "projector": 0.0, "G": 0.0}
        if full_a and full_b:
            Pa = sum(ta[i].P for i in ia)
            Pb = sum(tb[i].P for i in ib)
            Ga = sum(ta[i].G for i in ia)
            Gb = sum(tb[i].G for i in ib)
            term["projector"] = float(np.linalg.norm(Pa - Pb, 2))
            term["G"] = float(np.linalg.norm(Ga - Gb, 2))
        else:
            misaligned = True
            term["truncated"] = True
        total += term["eigenvalue"] + term["projector"] + term["G"]
        terms.append(term)
    return FingerprintResult(total, terms, misaligned)


def spectral_data_to_json(triplets, **kw) -> str:
    return json.dumps([t.to_dict() for t in triplets], **kw)


__all__ = ["EigenvalueRecord", "EigenvalueList", "SpectralTriplet", "WeylSample",
           "LocalizationInterval", "localization_intervals", "certified_n_lo", "unperturbed_roots",
           "w0_count_in", "spectrum_lower_bound", "varpi", "find_eigenvalues", "first_eigenvalues",
           "sigma_min", "gram_matrix", "spectral_triplet", "triplet_via_derivative", "derivative_G",
           "z_matrix", "m_function", "m_function_batch", "residue", "fingerprint_distance",
           "FingerprintResult", "spectral_data", "spectral_data_to_json", "unperturbed_det"]
