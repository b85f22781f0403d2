"""Operator definition: matrix potential, separated boundary conditions, boundary maps.

The operator is ``-psi'' + V(x) psi`` on [0, 1] acting on C^N-valued
functions, with boundary conditions

    Tm_perp (psi'(0) - a psi(0)) - Tm psi(0) = 0,
    Tp_perp (psi'(1) + b psi(1)) - Tp psi(1) = 0,

where ``Tm``, ``Tp`` are orthogonal projectors and ``a``, ``b`` are
Hermitian and live on ``Ran Tm_perp`` and ``Ran Tp_perp`` respectively.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import ConfigError, DimensionMismatch, DomainError
from .linalg import as_matrix, hermitian_defect, norm2, projector_defect
from .report import VerificationReport

KINDS = ("constant", "polynomial", "fourier", "grid", "piecewise_constant")
_KIND_ALIASES = {"polynomial-in-x": "polynomial", "sampled-grid": "grid", "sampled_grid": "grid"}


@dataclass(frozen=True, eq=False)
class Potential:
    """Hermitian matrix potential V(x) on [0, 1].

    ``kind`` selects how ``coeffs`` (a sequence of N x N matrices) is read:

    constant
        ``V(x) = coeffs[0]``.
    polynomial
        ``V(x) = sum_k coeffs[k] x**k``.
    fourier
        ``V(x) = C0 + sum_k A_k cos(2 pi k x) + B_k sin(2 pi k x)`` with
        ``coeffs = [C0, A1, B1, A2, B2, ...]``.
    grid
        samples at ``nodes`` (strictly increasing, from 0 to 1), linearly
        interpolated.
    piecewise_constant
        ``coeffs[j]`` on ``[nodes[j], nodes[j+1])``.
    """

    kind: str
    coeffs: tuple
    nodes: np.ndarray | None = None

    def __post_init__(self):
        kind = _KIND_ALIASES.get(self.kind, self.kind)
        if kind not in KINDS:
            raise ConfigError(f"unknown potential kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if len(self.coeffs) == 0:
            raise ConfigError("potential needs at least one coefficient matrix")
        mats = [as_matrix(c) for c in self.coeffs]
        n = mats[0].shape[0]
        if any(m.shape != (n, n) for m in mats):
            raise DimensionMismatch("potential coefficients of unequal order")
        object.__setattr__(self, "coeffs", tuple(mats))
        if kind == "fourier" and len(mats) % 2 == 0:
            raise ConfigError("fourier data must be [C0, A1, B1, ...] (odd length)")
        if kind in ("grid", "piecewise_constant"):
            if self.nodes is None:
                raise ConfigError(f"{kind} potential needs nodes")
            x = np.asarray(self.nodes, dtype=float)
            if x.ndim != 1 or len(x) < 2 or x[0] != 0.0 or x[-1] != 1.0 or np.any(np.diff(x) <= 0):
                raise ConfigError("nodes must increase strictly from 0 to 1")
            expected = len(x) if kind == "grid" else len(x) - 1
            if len(mats) != expected:
                raise ConfigError(f"{kind} potential needs {expected} matrices, got {len(mats)}")
            object.__setattr__(self, "nodes", x)
        elif self.nodes is not None:
            raise ConfigError(f"{kind} potential takes no nodes")

    @classmethod
    def constant(cls, C) -> "Potential":
        return cls("constant", (C,))

    @classmethod
    def zero(cls, n: int) -> "Potential":
        return cls("constant", (np.zeros((n, n)),))

    @property
    def n(self) -> int:
        return self.coeffs[0].shape[0]

    @property
    def is_constant(self) -> bool:
        C = self.coeffs
        if self.kind in ("polynomial", "fourier"):
            return all(not np.any(c) for c in C[1:])
        return all(np.array_equal(c, C[0]) for c in C)

    @cached_property
    def _stack(self) -> np.ndarray:
        return np.stack(self.coeffs)

    def breakpoints(self) -> np.ndarray:
        """Points where V or V' may be discontinuous (always includes 0 and 1)."""
        if self.kind in ("grid", "piecewise_constant"):
            return self.nodes
        return np.array([0.0, 1.0])

    def values(self, x, symmetrize: bool = True) -> np.ndarray:
        """Vectorised evaluation: returns an array of shape ``x.shape + (N, N)``."""
        x = np.asarray(x, dtype=float)
        C = self._stack
        if self.kind == "constant":
            out = np.broadcast_to(C[0], x.shape + C[0].shape).copy()
        elif self.kind == "polynomial":
            out = np.zeros(x.shape + C[0].shape, dtype=complex)
            for c in C[::-1]:
                out = out * x[..., None, None] + c
        elif self.kind == "fourier":
            out = np.broadcast_to(C[0], x.shape + C[0].shape).astype(complex)
            for k in range(1, (len(C) - 1) // 2 + 1):
                arg = 2 * np.pi * k * x[..., None, None]
                out = out + np.cos(arg) * C[2 * k - 1] + np.sin(arg) * C[2 * k]
        elif self.kind == "grid":
            nodes = self.nodes
            j = np.clip(np.searchsorted(nodes, x, side="right") - 1, 0, len(nodes) - 2)
            t = ((x - nodes[j]) / (nodes[j + 1] - nodes[j]))[..., None, None]
            out = (1 - t) * C[j] + t * C[j + 1]
        else:
            j = np.clip(np.searchsorted(self.nodes, x, side="right") - 1, 0, len(C) - 1)
            out = C[j]
        if not symmetrize:
            return out
        return 0.5 * (out + np.conj(np.swapaxes(out, -1, -2)))

    def __call__(self, x: float) -> np.ndarray:
        return eval_potential(self, x)

    def integral(self, x: float = 1.0, points_per_piece: int = 24) -> np.ndarray:
        """``int_0^x V(t) dt`` by Gauss-Legendre on each smooth piece."""
        if self.kind == "constant":
            return x * self.coeffs[0]
        br = self.breakpoints()
        edges = np.concatenate([br[br < x], [x]])
        if self.kind == "fourier":
            # refine so high harmonics are integrated exactly enough
            m = max(1, (len(self.coeffs) - 1) // 2)
            edges = np.linspace(0.0, x, 2 * m + 2)
        t, w = np.polynomial.legendre.leggauss(points_per_piece)
        total = np.zeros((self.n, self.n), dtype=complex)
        for lo, hi in zip(edges[:-1], edges[1:]):
            if hi <= lo:
                continue
            xs = 0.5 * (hi - lo) * t + 0.5 * (hi + lo)
            total += 0.5 * (hi - lo) * np.tensordot(w, self.values(xs), axes=1)
        return total

    @cached_property
    def l1_norm(self) -> float:
        """``int_0^1 ||V(x)|| dx`` by the composite trapezoid rule on 1024 points."""
        if self.kind == "constant":
            return norm2(self.coeffs[0])
        x = np.linspace(0.0, 1.0, 1024)
        norms = np.linalg.norm(self.values(x), ord=2, axis=(-2, -1))
        return float(np.trapezoid(norms, x))


def eval_potential(V: Potential, x: float) -> np.ndarray:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x = {x} outside [0, 1]")
    return V.values(np.float64(x))


@dataclass(frozen=True, eq=False)
class BoundaryConditions:
    """Projectors ``Tm``, ``Tp`` and Robin parts ``a``, ``b``.

    Construction only checks shapes; :func:`validate` reports violations of
    the projector and compression identities.
    """

    Tm: np.ndarray
    Tp: np.ndarray
    a: np.ndarray | None = None
    b: np.ndarray | None = None

    def __post_init__(self):
        Tm = as_matrix(self.Tm)
        n = Tm.shape[0]
        object.__setattr__(self, "Tm", Tm)
        object.__setattr__(self, "Tp", as_matrix(self.Tp, n))
        for name in ("a", "b"):
            m = getattr(self, name)
            object.__setattr__(self, name, np.zeros((n, n), dtype=complex) if m is None else as_matrix(m, n))

    @property
    def n(self) -> int:
        return self.Tm.shape[0]

    @cached_property
    def Tm_perp(self) -> np.ndarray:
        return np.eye(self.n) - self.Tm

    @cached_property
    def Tp_perp(self) -> np.ndarray:
        return np.eye(self.n) - self.Tp

    @classmethod
    def dirichlet(cls, n: int) -> "BoundaryConditions":
        return cls(np.eye(n), np.eye(n))

    @classmethod
    def neumann(cls, n: int, a=None, b=None) -> "BoundaryConditions":
        return cls(np.zeros((n, n)), np.zeros((n, n)), a, b)


@dataclass(frozen=True, eq=False)
class ProblemDef:
    V: Potential
    bc: BoundaryConditions
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.V.n != self.bc.n:
            raise DimensionMismatch(f"potential order {self.V.n} != boundary order {self.bc.n}")

    @property
    def n(self) -> int:
        return self.bc.n

    @property
    def N(self) -> int:
        return self.bc.n

    @cached_property
    def size(self) -> float:
        """||V||_L1 + ||a|| + ||b||, the quantity localisation constants are sized by."""
        return self.V.l1_norm + norm2(self.bc.a) + norm2(self.bc.b)

    def with_potential(self, V: Potential) -> "ProblemDef":
        return ProblemDef(V, self.bc, self.name)

    def to_dict(self):
        return problem_to_dict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(problem_to_dict(self), **kw)


def boundary_map(bc: BoundaryConditions, side: str, kind: str, psi, dpsi) -> np.ndarray:
    """Apply one of the four boundary maps to end values ``psi``, ``dpsi``.

    ``side`` is ``"minus"`` (x = 0) or ``"plus"`` (x = 1); ``kind`` is
    ``"gamma"`` or ``"gamma_dual"``.  Inputs may be vectors, matrices or
    stacks of matrices (leading batch axes).
    """
    psi = np.asarray(psi, dtype=complex)
    dpsi = np.asarray(dpsi, dtype=complex)
    if psi.shape != dpsi.shape or psi.shape[-2 if psi.ndim > 1 else -1] != bc.n:
        raise DimensionMismatch(f"boundary values of shape {psi.shape}/{dpsi.shape} for N={bc.n}")
    if side == "minus":
        T, Tperp, robin, sign = bc.Tm, bc.Tm_perp, bc.a, -1.0
    elif side == "plus":
        T, Tperp, robin, sign = bc.Tp, bc.Tp_perp, bc.b, 1.0
    else:
        raise ValueError(f"side must be 'minus' or 'plus', not {side!r}")
    if kind == "gamma":
        return Tperp @ (dpsi + sign * (robin @ psi)) - T @ psi
    if kind == "gamma_dual":
        return Tperp @ psi + T @ dpsi
    raise ValueError(f"kind must be 'gamma' or 'gamma_dual', not {kind!r}")


def validate(problem: ProblemDef) -> VerificationReport:
    """Check projector, compression and Hermiticity identities; never raises."""
    rep = VerificationReport("problem")
    bc = problem.bc
    n = bc.n
    tol = 1e-12 * n
    rep.add("Tm-projector", projector_defect(bc.Tm), tol)
    rep.add("Tp-projector", projector_defect(bc.Tp), tol)
    rep.add("a-Hermitian", hermitian_defect(bc.a), 1e-12 * max(1.0, norm2(bc.a)))
    rep.add("b-Hermitian", hermitian_defect(bc.b), 1e-12 * max(1.0, norm2(bc.b)))
    rep.add("a-compression", float(np.max(np.abs(bc.a - bc.Tm_perp @ bc.a @ bc.Tm_perp))),
            1e-12 * max(1.0, norm2(bc.a)))
    rep.add("b-compression", float(np.max(np.abs(bc.b - bc.Tp_perp @ bc.b @ bc.Tp_perp))),
            1e-12 * max(1.0, norm2(bc.b)))
    x = np.linspace(0.0, 1.0, 64)
    raw = problem.V.values(x, symmetrize=False)
    defect = float(np.max(np.abs(raw - np.conj(np.swapaxes(raw, -1, -2)))))
    scale = max(1.0, float(np.max(np.abs(raw))))
    rep.add("V-Hermitian", defect, 1e-12 * scale)
    rep.add("V-finite", 0.0 if np.all(np.isfinite(raw)) else np.inf, 0.0)
    return rep.finish()



def is_valid(problem: ProblemDef) -> bool:
    return validate(problem).passed


# -- JSON ------------------------------------------------------------------

def _cplx(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ConfigError(f"complex entry must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)):
        return complex(v)
    raise ConfigError(f"bad matrix entry {v!r}")


def matrix_from_json(rows, n: int | None = None) -> np.ndarray:
    try:
        M = np.array([[_cplx(v) for v in row] for row in rows], dtype=complex)
    except TypeError as exc:
        raise ConfigError(f"matrix must be an array of arrays: {exc}") from None
    if M.ndim != 2 or M.shape[0] != M.shape[1] or (n is not None and M.shape[0] != n):
        raise ConfigError(f"expected a {n}x{n} matrix, got shape {M.shape}")
    return M


def matrix_to_json(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def problem_from_dict(d: dict) -> ProblemDef:
    try:
        n = int(d["n"])
        pot = d.get("potential", {"kind": "constant", "data": [np.zeros((n, n)).tolist()]})
        kind = pot["kind"]
        data = pot["data"]
        mats = tuple(matrix_from_json(m, n) for m in data)
        nodes = pot.get("nodes")
        V = Potential(kind, mats, None if nodes is None else np.asarray(nodes, dtype=float))
        Tm = matrix_from_json(d["t_minus"], n)
        Tp = matrix_from_json(d["t_plus"], n)
        a = matrix_from_json(d["a"], n) if "a" in d else None
        b = matrix_from_json(d["b"], n) if "b" in d else None
    except KeyError as exc:
        raise ConfigError(f"missing field {exc}") from None
    except (TypeError, ValueError, IndexError) as exc:
        raise ConfigError(str(exc)) from None
    return ProblemDef(V, BoundaryConditions(Tm, Tp, a, b), d.get("name", ""))


def problem_to_dict(p: ProblemDef) -> dict:
    pot = {"kind": p.V.kind, "data": [matrix_to_json(c) for c in p.V.coeffs]}
    if p.V.nodes is not None:
        pot["nodes"] = [float(x) for x in p.V.nodes]
    d = {
        "n": p.n,
        "potential": pot,
        "t_minus": matrix_to_json(p.bc.Tm),
        "t_plus": matrix_to_json(p.bc.Tp),
        "a": matrix_to_json(p.bc.a),
        "b": matrix_to_json(p.bc.b),
    }
    if p.name:
        d["name"] = p.name
    return d


def load_problem(path) -> ProblemDef:
    try:
        d = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from None
    if not isinstance(d, dict):
        raise ConfigError("problem file must hold a JSON object")
    return problem_from_dict(d)


def problems_equal(p: ProblemDef, q: ProblemDef) -> bool:
    """Bitwise equality of every matrix in the two definitions."""
    if p.n != q.n or p.V.kind != q.V.kind or len(p.V.coeffs) != len(q.V.coeffs):
        return False
    if (p.V.nodes is None) != (q.V.nodes is None):
        return False
    if p.V.nodes is not None and not np.array_equal(p.V.nodes, q.V.nodes):
        return False
    pairs = list(zip(p.V.coeffs, q.V.coeffs)) + [
        (p.bc.Tm, q.bc.Tm), (p.bc.Tp, q.bc.Tp), (p.bc.a, q.bc.a), (p.bc.b, q.bc.b)]
    return all(np.array_equal(x, y) for x, y in pairs)

