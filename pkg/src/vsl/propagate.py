"""Matrix fundamental solutions F_minus, F_plus and their lambda-derivatives.

F_minus is launched from x = 0 with ``F(0) = Tm_perp``, ``F'(0) = Tm + a Tm_perp``;
F_plus from x = 1 with ``F(1) = Tp_perp``, ``F'(1) = Tp - b Tp_perp``.

The integrator freezes V on each step (at the step midpoint) and advances
every eigenmode of the frozen matrix exactly, so constant and
piecewise-constant potentials are propagated without truncation error.  For
smoothly varying V the scheme is symmetric, hence its global error expands
in even powers of the step; two rounds of Richardson extrapolation give a
sixth-order result together with an error estimate.

All values are returned rescaled by ``exp(-kappa |x - x0|)`` where
``kappa = |Im sqrt(lambda)|`` and ``x0`` is the launch point, so that
solutions at large complex or negative lambda do not overflow.  The factor is
real and positive; consumers that need absolute values multiply it back.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import StepFailure
from .problem import ProblemDef

TOL_ODE = 1e-10
LAMBDA_MAX = 1e8
MAX_STEPS = 32768  # finest Richardson level
_SERIES_RADIUS = 1e-2


# ---------------------------------------------------------------------------
# entire functions c(z) = cos sqrt z, s(z) = sin sqrt z / sqrt z
# ---------------------------------------------------------------------------

_FACT = np.cumprod(np.r_[1.0, np.arange(1, 24, dtype=float)])  # 0!..23!


def _series(z, offset):
    # sum_k (-z)^k / (2k + offset)!
    out = np.zeros_like(z)
    # |z| < 1e-2 here, so six terms reach full precision
    for k in range(6, -1, -1):
        out = out * (-z) + 1.0 / _FACT[2 * k + offset]
    return out


def _ds_series(z):
    # d/dz s(z) = sum_{k>=1} k (-1)^k z^(k-1) / (2k+1)!
    out = np.zeros_like(z)
    for k in range(7, 0, -1):
        out = out * z + k * (-1.0) ** k / _FACT[2 * k + 1]
    return out


def entire_trig(z):
    """``(cos sqrt z, sin sqrt z / sqrt z)`` as entire functions of ``z``."""
    c, s, _, _, im = _trig_scaled(z, derivs=False)
    scale = np.exp(im)
    return c * scale, s * scale


def entire_trig_derivatives(z):
    """``(dc/dz, ds/dz)``: ``c' = -s/2`` and ``s' = (c - s) / (2z)``."""
    _, _, dc, ds, im = _trig_scaled(z, derivs=True)
    scale = np.exp(im)
    return dc * scale, ds * scale


def _trig_scaled(z, derivs=True):
    """c, s (and derivatives) multiplied by ``exp(-|Im sqrt z|)``; also returns ``|Im sqrt z|``."""
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    w = np.sqrt(z)
    # c and s are even in w: pick the root with Im w >= 0 so exp(i w) decays
    w = np.where(w.imag < 0, -w, w)
    im = w.imag
    e_dec = np.exp(1j * w - im)          # |.| = exp(-2 Im w) <= 1
    e_osc = np.exp(-1j * w.real)         # |.| = 1
    c = 0.5 * (e_dec + e_osc)
    small = np.abs(z) < _SERIES_RADIUS
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (e_dec - e_osc) / (2j * w)
    if np.any(small):
        zs = z[small]
        c[small] = _series(zs, 0) * np.exp(-im[small])
        s[small] = _series(zs, 1) * np.exp(-im[small])
    dc = ds = None
    if derivs:
        dc = -0.5 * s
        with np.errstate(divide="ignore", invalid="ignore"):
            ds = (c - s) / (2.0 * z)
        if np.any(small):
            ds[small] = _ds_series(z[small]) * np.exp(-im[small])
    if scalar:
        c, s, im = c[0], s[0], im[0]
        if derivs:
            dc, ds = dc[0], ds[0]
    return c, s, dc, ds, im


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolutionSample:
    x: float
    F: np.ndarray
    Fprime: np.ndarray


@dataclass(frozen=True, eq=False)
class PropagationResult:
    """Sampled (rescaled) solution on ``grid``.

    ``F[k]``, ``Fprime[k]`` hold ``exp(-kappa |grid[k] - x0|)`` times the true
    values, ``kappa = scaling_exponent``.
    """

    lam: complex
    side: str
    grid: np.ndarray
    F: np.ndarray
    Fprime: np.ndarray
    scaling_exponent: float
    error_estimate: float = 0.0

    @property
    def origin(self) -> float:
        return 0.0 if self.side == "minus" else 1.0

    @property
    def samples(self) -> list[SolutionSample]:
        return [SolutionSample(float(x), F, Fp) for x, F, Fp in zip(self.grid, self.F, self.Fprime)]

    def log_scale(self, x=None):
        """Natural log of the factor removed at ``x`` (default: every grid node)."""
        x = self.grid if x is None else np.asarray(x, dtype=float)
        return self.scaling_exponent * np.abs(x - self.origin)

    def unscaled(self):
        """True ``(F, F')`` on the grid; overflows for very large ``kappa``."""
        f = np.exp(self.log_scale())[:, None, None]
        return self.F * f, self.Fprime * f

    def at(self, x: float) -> SolutionSample:
        k = int(np.argmin(np.abs(self.grid - x)))
        if abs(self.grid[k] - x) > 1e-12:
            raise ValueError(f"x = {x} is not a grid node")
        return SolutionSample(float(self.grid[k]), self.F[k], self.Fprime[k])


# ---------------------------------------------------------------------------
# grids and step plans
# ---------------------------------------------------------------------------

def _potential_bound(V) -> float:
    if V.is_constant:
        return float(np.linalg.norm(V.coeffs[0], 2))
    x = np.linspace(0.0, 1.0, 257)
    return float(np.max(np.linalg.norm(V.values(x), ord=2, axis=(-2, -1))))


def step_count(problem: ProblemDef, lam, grid_size: int = 64, *, each: bool = False):
    """Steps needed to resolve the local wavelength: ``max(grid_size, 8 sqrt(|lambda| + max||V||))``.

    With ``each`` the count is returned per lambda, otherwise for the largest.
    """
    a = np.abs(np.atleast_1d(lam))
    k = np.sqrt((a if each else a.max()) + _potential_bound(problem.V))
    out = np.maximum(grid_size, np.ceil(8.0 * k)).astype(int)
    return out if each else int(out)


def make_grid(problem: ProblemDef, steps: int, multiple: int = 1) -> np.ndarray:
    """Nodes on [0, 1], about ``steps`` intervals, aligned with the potential's breakpoints.

    Each piece between breakpoints gets a number of intervals divisible by ``multiple``.
    """
    br = problem.V.breakpoints()
    pieces = []
    for lo, hi in zip(br[:-1], br[1:]):
        m = max(1, int(np.ceil(steps * (hi - lo) - 1e-9)))
        m = multiple * int(np.ceil(m / multiple))
        pieces.append(np.linspace(lo, hi, m + 1)[:-1])
    pieces.append([1.0])
    return np.concatenate(pieces)


def _exact(problem: ProblemDef) -> bool:
    return problem.V.kind in ("constant", "piecewise_constant") or problem.V.is_constant


def _initial(problem: ProblemDef, side: str):
    bc = problem.bc
    if side == "minus":
        return bc.Tm_perp.astype(complex), (bc.Tm + bc.a @ bc.Tm_perp).astype(complex)
    if side == "plus":
        return bc.Tp_perp.astype(complex), (bc.Tp - bc.b @ bc.Tp_perp).astype(complex)
    raise ValueError(f"side must be 'minus' or 'plus', not {side!r}")


def _pieces(problem: ProblemDef, nodes: np.ndarray, side: str, exact: bool):
    """Frozen-potential pieces as ``(start, end, w, U, sample_idx)``, in travel order.

    ``sample_idx`` are the indices of ``nodes`` lying in ``(start, end]``.
    """
    V = problem.V
    if exact:
        br = V.breakpoints()
        if V.is_constant:
            br = np.array([0.0, 1.0])
        mids = 0.5 * (br[:-1] + br[1:])
    else:
        br = nodes
        mids = 0.5 * (br[:-1] + br[1:])
    w, U = np.linalg.eigh(V.values(mids))
    out = []
    order = range(len(br) - 1)
    if side == "plus":
        order = reversed(order)
    for j in order:
        lo, hi = br[j], br[j + 1]
        if side == "minus":
            idx = np.nonzero((nodes > lo) & (nodes <= hi + 1e-15))[0]
            out.append((lo, hi, w[j], U[j], idx))
        else:
            idx = np.nonzero((nodes < hi) & (nodes >= lo - 1e-15))[0][::-1]
            out.append((hi, lo, w[j], U[j], idx))
    return out


def _advance(Y, Yd, x0, xs, w, U, lam, kappa, dlam):
    """Evolve ``Y`` (L, 2, N, M) from ``x0`` to each point of ``xs`` under frozen V = U diag(w) U*.

    Returns arrays of shape (L, S, 2, N, M) (and the lambda-derivative).
    """
    t = (np.asarray(xs) - x0)[None, :, None]                 # (1, S, 1)
    mu = (lam[:, None] - w[None, :])[:, None, :]             # (L, 1, N)
    z = mu * t * t
    c, s, dc, ds, im = _trig_scaled(z, derivs=dlam)
    g = np.exp(im - kappa[:, None, None] * np.abs(t))        # (L, S, N)
    c, s = c * g, s * g
    Uh = U.conj().T
    Ym = np.einsum("ij,lajm->laim", Uh, Y)                   # mode basis
    F0, P0 = Ym[:, None, 0], Ym[:, None, 1]                  # (L, 1, N, M)
    c_, ts_ = c[..., None], (t * s)[..., None]
    mts_ = (-mu * t * s)[..., None]
    F = c_ * F0 + ts_ * P0
    P = mts_ * F0 + c_ * P0
    out = np.stack([F, P], axis=2)                           # (L, S, 2, N, M)
    out = np.einsum("ij,lsajm->lsaim", U, out)
    if not dlam:
        return out, None
    dc, ds = dc * g, ds * g
    Ydm = np.einsum("ij,lajm->laim", Uh, Yd)
    Fd0, Pd0 = Ydm[:, None, 0], Ydm[:, None, 1]
    t2, t3 = t * t, t * t * t
    a11 = (t2 * dc)[..., None]
    a12 = (t3 * ds)[..., None]
    a21 = (-t * s - mu * t3 * ds)[..., None]
    Fd = c_ * Fd0 + ts_ * Pd0 + a11 * F0 + a12 * P0
    Pd = mts_ * Fd0 + c_ * Pd0 + a21 * F0 + a11 * P0
    outd = np.einsum("ij,lsajm->lsaim", U, np.stack([Fd, Pd], axis=2))
    return out, outd


def _run_exp(problem, side, lam, nodes, exact, dlam):
    """One pass of the frozen-potential propagator over ``nodes`` (all samples kept)."""
    L = lam.shape[0]
    n = problem.n
    kappa = np.abs(np.sqrt(lam).imag)
    F0, P0 = _initial(problem, side)
    Y = np.broadcast_to(np.stack([F0, P0])[None], (L, 2, n, n)).copy()
    Yd = np.zeros_like(Y)
    S = len(nodes)
    out = np.empty((L, S, 2, n, n), dtype=complex)
    outd = np.empty_like(out) if dlam else None
    start = 0 if side == "minus" else S - 1
    out[:, start] = Y
    if dlam:
        outd[:, start] = 0.0
    for x0, x1, w, U, idx in _pieces(problem, nodes, side, exact):
        assert len(idx) and nodes[idx[-1]] == x1, "piece ends must be grid nodes"
        vals, dvals = _advance(Y, Yd, x0, nodes[idx], w, U, lam, kappa, dlam)
        out[:, idx] = vals
        Y = vals[:, -1]
        if dlam:
            outd[:, idx] = dvals
            Yd = dvals[:, -1]
    return out, outd


def _run_rk4(problem, side, lam, nodes, dlam):
    """Classical RK4 on the first-order system (alternate cross-check route)."""
    L = lam.shape[0]
    n = problem.n
    kappa = np.abs(np.sqrt(lam).imag)
    F0, P0 = _initial(problem, side)
    Y = np.broadcast_to(np.stack([F0, P0])[None], (L, 2, n, n)).copy()
    Yd = np.zeros_like(Y)
    xs = nodes if side == "minus" else nodes[::-1]
    lamI = lam[:, None, None] * np.eye(n)

    def rhs(x, Y, Yd):
        A = problem.V.values(np.float64(x)) - lamI           # V - lambda
        dY = np.stack([Y[:, 1], A @ Y[:, 0]], axis=1)
        if not dlam:
            return dY, None
        dYd = np.stack([Yd[:, 1], A @ Yd[:, 0] - Y[:, 0]], axis=1)
        return dY, dYd

    out = np.empty((L, len(xs), 2, n, n), dtype=complex)
    outd = np.empty_like(out) if dlam else None
    out[:, 0] = Y
    if dlam:
        outd[:, 0] = 0.0
    for k in range(len(xs) - 1):
        x, h = xs[k], xs[k + 1] - xs[k]
        k1, d1 = rhs(x, Y, Yd)
        k2, d2 = rhs(x + h / 2, Y + h / 2 * k1, Yd + h / 2 * d1 if dlam else None)
        k3, d3 = rhs(x + h / 2, Y + h / 2 * k2, Yd + h / 2 * d2 if dlam else None)
        k4, d4 = rhs(x + h, Y + h * k3, Yd + h * d3 if dlam else None)
        damp = np.exp(-kappa * abs(h))[:, None, None, None]
        Y = (Y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)) * damp
        out[:, k + 1] = Y
        if dlam:
            Yd = (Yd + h / 6 * (d1 + 2 * d2 + 2 * d3 + d4)) * damp
            outd[:, k + 1] = Yd
    if side == "plus":
        out = out[:, ::-1]
        outd = outd[:, ::-1] if dlam else None
    return out, outd


def _refine(nodes: np.ndarray, level: int) -> np.ndarray:
    if level == 0:
        return nodes
    f = 2 ** level
    t = np.arange(f) / f
    fine = (nodes[:-1, None] + t[None, :] * np.diff(nodes)[:, None]).ravel()
    return np.append(fine, nodes[-1])


@lru_cache(maxsize=64)
def _midpoint_modes(V, key: bytes):
    """Eigen-decomposition of V at the midpoints of the grid encoded in ``key``."""
    x = np.frombuffer(key, dtype=float)
    return np.linalg.eigh(V.values(0.5 * (x[:-1] + x[1:])))


def _step_matrices(problem, side, lam, nodes, dlam):
    """Per-step transfer matrices of the frozen-potential scheme, shape (L, K, m, m).

    ``m = 2N``, or ``4N`` with the lambda-derivative carried in the lower-left
    block.  Steps are listed in travel order.
    """
    w, U = _midpoint_modes(problem.V, nodes.tobytes())                  # (K, N), (K, N, N)
    x = nodes
    if side == "plus":
        x, w, U = nodes[::-1], w[::-1], U[::-1]
    h = np.diff(x)
    kappa = np.abs(np.sqrt(lam).imag)
    mu = lam[:, None, None] - w[None]                                   # (L, K, N)
    t = h[None, :, None]
    c, s, dc, ds, im = _trig_scaled(mu * t * t, derivs=dlam)
    g = np.exp(im - kappa[:, None, None] * np.abs(t))
    c, s = c * g, s * g
    Uh = np.conj(np.swapaxes(U, -1, -2))

    def conj_diag(d):  # U diag(d) U*
        return (U[None] * d[..., None, :]) @ Uh[None]

    A, B, C = conj_diag(c), conj_diag(t * s), conj_diag(-mu * t * s)
    M = np.concatenate([np.concatenate([A, B], -1), np.concatenate([C, A], -1)], -2)
    if not dlam:
        return M
    dc, ds = dc * g, ds * g
    t2, t3 = t * t, t * t * t
    a11 = conj_diag(t2 * dc)
    a12 = conj_diag(t3 * ds)
    a21 = conj_diag(-t * s - mu * t3 * ds)
    Md = np.concatenate([np.concatenate([a11, a12], -1), np.concatenate([a21, a11], -1)], -2)
    Z = np.zeros_like(M)
    return np.concatenate([np.concatenate([M, Z], -1), np.concatenate([Md, M], -1)], -2)


def _chain_product(M):
    """``M[:, K-1] @ ... @ M[:, 0]`` by pairwise reduction along axis 1."""
    while M.shape[1] > 1:
        if M.shape[1] % 2:
            eye = np.broadcast_to(np.eye(M.shape[-1]), M[:, :1].shape)
            M = np.concatenate([M, eye], axis=1)
        M = M[:, 1::2] @ M[:, 0::2]
    return M[:, 0]


def _end_exp(problem, side, lam, nodes, dlam, chunk=1 << 22):
    """End values ``(Y, Yd)`` of shape (L, 2, N, N) via transfer-matrix products."""
    n = problem.n
    F0, P0 = _initial(problem, side)
    Y0 = np.concatenate([F0, P0], 0)                                    # (2N, N)
    m = (4 if dlam else 2) * n
    per = max(1, chunk // (len(nodes) * m * m))
    Y, Yd = [], []
    for i in range(0, len(lam), per):
        T = _chain_product(_step_matrices(problem, side, lam[i:i + per], nodes, dlam))
        Yk = T[:, : 2 * n, : 2 * n] @ Y0
        Y.append(Yk.reshape(-1, 2, n, n))
        if dlam:
            Yd.append((T[:, 2 * n:, : 2 * n] @ Y0).reshape(-1, 2, n, n))
    return np.concatenate(Y), (np.concatenate(Yd) if dlam else None)


def _richardson(run, order, nodes, tol, dlam):
    """Three-level Richardson extrapolation with step-doubling error control.

    ``run(level)`` returns ``(Y, Yd)`` computed with ``2**level`` substeps per
    base interval; arrays carry the lambda batch on axis 0.
    """
    r1, r2 = 2.0 ** order, 2.0 ** (order + 2)
    axes = None
    base = 0
    while True:
        Ys = [run(base + i) for i in range(3)]
        axes = tuple(range(1, Ys[0][0].ndim))
        ext1 = [(r1 * Ys[i + 1][0] - Ys[i][0]) / (r1 - 1) for i in range(2)]
        Y = (r2 * ext1[1] - ext1[0]) / (r2 - 1)
        diff = np.max(np.abs(ext1[1] - ext1[0]), axis=axes) / (r2 - 1)
        err = diff / np.maximum(1.0, np.max(np.abs(Y), axis=axes))
        if np.all(err <= tol):
            Yd = None
            if dlam:
                d1 = [(r1 * Ys[i + 1][1] - Ys[i][1]) / (r1 - 1) for i in range(2)]
                Yd = (r2 * d1[1] - d1[0]) / (r2 - 1)
            return Y, Yd, err
        if (len(nodes) - 1) * 2 ** (base + 3) > MAX_STEPS:
            # the next round would exceed the step budget on its finest level
            raise StepFailure(
                f"error estimate {err.max():.2e} above tol={tol:g} at {MAX_STEPS} steps")
        base += 1


def _check_args(lam, grid_size, method):
    if np.any(np.abs(lam) > LAMBDA_MAX):
        raise ValueError(f"|lambda| must not exceed {LAMBDA_MAX:g}")
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    if method not in ("exp", "rk4"):
        raise ValueError(f"unknown method {method!r}")


def propagate(problem: ProblemDef, side: str, lams, grid_size: int = 64, *,
              dlam: bool = False, method: str = "exp", tol: float = TOL_ODE,
              nodes: np.ndarray | None = None):
    """Batched propagation over a vector of lambda values.

    Returns ``(nodes, Y, Yd, kappa, err)`` with ``Y`` of shape
    ``(L, len(nodes), 2, N, N)`` holding rescaled ``(F, F')`` at every node,
    ``Yd`` the matching lambda-derivatives (or ``None``), ``kappa`` the
    per-lambda scaling exponents and ``err`` the relative error estimates.
    """
    lam = np.atleast_1d(np.asarray(lams, dtype=complex))
    _check_args(lam, grid_size, method)
    kappa = np.abs(np.sqrt(lam).imag)
    if nodes is None:
        nodes = make_grid(problem, step_count(problem, lam, grid_size))
    if method == "exp" and _exact(problem):
        Y, Yd = _run_exp(problem, side, lam, nodes, True, dlam)
        return nodes, Y, Yd, kappa, np.zeros(len(lam))

    def run(level):
        fine = _refine(nodes, level)
        if method == "exp":
            Y, Yd = _run_exp(problem, side, lam, fine, False, dlam)
        else:
            Y, Yd = _run_rk4(problem, side, lam, fine, dlam)
        f = 2 ** level
        return Y[:, ::f], (Yd[:, ::f] if dlam else None)

    Y, Yd, err = _richardson(run, 2 if method == "exp" else 4, nodes, tol, dlam)
    return nodes, Y, Yd, kappa, err


def fundamental(problem: ProblemDef, side: str, lam: complex, grid_size: int = 256,
                method: str = "exp", tol: float = TOL_ODE) -> PropagationResult:
    """Fundamental solution ``F_side(x, lam)`` sampled on an aligned grid."""
    if grid_size < 64:
        raise ValueError("grid_size must be at least 64")
    nodes, Y, _, kappa, err = propagate(problem, side, [lam], grid_size, method=method, tol=tol)
    return PropagationResult(complex(lam), side, nodes, Y[0, :, 0], Y[0, :, 1],
                             float(kappa[0]), float(err[0]))


def fundamental_dlambda(problem: ProblemDef, side: str, lam: complex, grid_size: int = 256,
                        method: str = "exp", tol: float = TOL_ODE) -> PropagationResult:
    """``d/dlambda`` of the fundamental solution, with the same rescaling."""
    if grid_size < 64:
        raise ValueError("grid_size must be at least 64")
    nodes, _, Yd, kappa, err = propagate(problem, side, [lam], grid_size, dlam=True,
                                         method=method, tol=tol)
    return PropagationResult(complex(lam), side, nodes, Yd[0, :, 0], Yd[0, :, 1],
                             float(kappa[0]), float(err[0]))


def end_values(problem: ProblemDef, side: str, lams, grid_size: int = 64, *,
               dlam: bool = False, method: str = "exp", tol: float = TOL_ODE):
    """Rescaled ``(F, F')`` (and derivatives) at the far end, batched over lambda.

    Returns ``(F, F', dF, dF', kappa)``.  Potentials that are constant on
    pieces are propagated piece by piece exactly; otherwise the per-step
    transfer matrices are multiplied out by pairwise reduction.
    """
    lam = np.atleast_1d(np.asarray(lams, dtype=complex))
    _check_args(lam, grid_size, method)
    n = problem.n
    kappa = np.abs(np.sqrt(lam).imag)
    end = -1 if side == "minus" else 0
    if method == "exp" and _exact(problem):
        nodes = np.array([0.0, 1.0]) if problem.V.is_constant else problem.V.breakpoints()
        Y, Yd = _run_exp(problem, side, lam, nodes, True, dlam)
        Y, Yd = Y[:, end], (Yd[:, end] if dlam else None)
        return Y[:, 0], Y[:, 1], (Yd[:, 0] if dlam else None), (Yd[:, 1] if dlam else None), kappa

    F = np.empty((len(lam), n, n), dtype=complex)
    P = np.empty_like(F)
    Fd = np.empty_like(F) if dlam else None
    Pd = np.empty_like(F) if dlam else None
    # bucket by step count so that short and long solves don't share a grid
    steps = step_count(problem, lam, grid_size, each=True)
    buckets = 64 * np.ceil(steps / 64).astype(int)
    for b in np.unique(buckets):
        sel = np.nonzero(buckets == b)[0]
        nodes = make_grid(problem, int(b))
        if method == "exp":
            run = lambda level: _end_exp(problem, side, lam[sel], _refine(nodes, level), dlam)
        else:
            def run(level):
                Y, Yd = _run_rk4(problem, side, lam[sel], _refine(nodes, level), dlam)
                return Y[:, end], (Yd[:, end] if dlam else None)
        Y, Yd, _ = _richardson(run, 2 if method == "exp" else 4, nodes, tol, dlam)
        F[sel], P[sel] = Y[:, 0], Y[:, 1]
        if dlam:
            Fd[sel], Pd[sel] = Yd[:, 0], Yd[:, 1]
    return F, P, Fd, Pd, kappa


__all__ = ["entire_trig", "entire_trig_derivatives", "SolutionSample", "PropagationResult",
           "fundamental", "fundamental_dlambda", "propagate", "end_values", "step_count",
           "make_grid", "TOL_ODE"]
