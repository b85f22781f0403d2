import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import DET_W_DIRICHLET_AT_MINUS_1
from test_geometry import structured_pair
from vsl.errors import ContourTooClose, NearExceptionalSet
from vsl.geometry import decompose
from vsl.golden import dirichlet_scalar, neumann_scalar, twisted
from vsl.problem import BoundaryConditions, Potential, ProblemDef
from vsl.wronskian import (Contour, count_zeros, det_w, duality_residual, exceptional_distance,
                           rouche_margin, self_wronskian, unperturbed, unperturbed_det,
                           unperturbed_inverse, wronskian, wronskian_profile)


def test_wronskian_examples():
    assert wronskian(dirichlet_scalar(), np.pi ** 2 / 4).W[0, 0] == pytest.approx(-2 / np.pi, abs=1e-14)
    assert abs(wronskian(dirichlet_scalar(), np.pi ** 2).W[0, 0]) < 1e-15
    assert abs(det_w(twisted(), (np.pi / 6) ** 2).value) < 1e-14
    assert abs(det_w(twisted(), (5 * np.pi / 6) ** 2).value) < 1e-13
    assert det_w(dirichlet_scalar(), -1.0).value == pytest.approx(DET_W_DIRICHLET_AT_MINUS_1, rel=1e-13)


def test_unperturbed_examples():
    gD = decompose(np.eye(2), np.eye(2))
    gN = decompose(np.zeros((2, 2)), np.zeros((2, 2)))
    lam = np.pi ** 2 / 4
    assert np.allclose(unperturbed(gD, lam), -2 / np.pi * np.eye(2), atol=1e-15)
    assert np.allclose(unperturbed(gN, lam), -np.pi / 2 * np.eye(2), atol=1e-15)
    assert np.allclose(unperturbed_inverse(gD, lam), -np.pi / 2 * np.eye(2), atol=1e-14)
    g = decompose(twisted().bc.Tm, twisted().bc.Tp)
    s = np.linalg.svd(unperturbed(g, (np.pi / 6) ** 2), compute_uv=False)
    assert s[-1] < 1e-10
    R = unperturbed(g, 2.0) @ unperturbed_inverse(g, 2.0)
    assert np.linalg.norm(R - np.eye(2)) < 1e-10


def test_exceptional_set_guard():
    g = decompose(twisted().bc.Tm, twisted().bc.Tp)
    with pytest.raises(NearExceptionalSet):
        unperturbed_inverse(g, (np.pi + np.pi / 6) ** 2)
    with pytest.raises(NearExceptionalSet):
        unperturbed_inverse(g, (2 * np.pi) ** 2)
    assert exceptional_distance(g, 2.0) > 0.1


@given(st.integers(0, 2**31), st.integers(0, 1), st.integers(0, 1), st.integers(0, 1),
       st.integers(0, 1), st.lists(st.floats(0.1, 1.4), max_size=2, unique=True),
       st.floats(0.2, 30.0), st.floats(-2.0, 2.0))
def test_w0_inverse_identity(seed, dd, nd, dn, nn, gammas, kr, ki):
    gammas = sorted(gammas)
    if any(b - a < 1e-2 for a, b in zip(gammas, gammas[1:])) or dd + nd + dn + nn + len(gammas) == 0:
        return
    g = decompose(*structured_pair(seed, dd, nd, dn, nn, gammas))
    lam = complex(kr, ki) ** 2
    if exceptional_distance(g, lam) < 1e-3:
        return
    for scaled in (False, True):
        R = unperturbed(g, lam, scaled) @ unperturbed_inverse(g, lam, scaled)
        assert np.linalg.norm(R - np.eye(g.n), 2) <= 1e-8


@given(st.integers(0, 2**31), st.lists(st.floats(0.1, 1.4), min_size=1, max_size=2, unique=True),
       st.floats(0.2, 25.0), st.floats(-2.0, 2.0))
def test_factorization_matches_product_formula(seed, gammas, kr, ki):
    gammas = sorted(gammas)
    if any(b - a < 1e-2 for a, b in zip(gammas, gammas[1:])):
        return
    Tm, Tp = structured_pair(seed, 1, 1, 1, 1, gammas)
    g = decompose(Tm, Tp)
    lam = complex(kr, ki) ** 2
    if exceptional_distance(g, lam) < 1e-3:  # every zero of det W0 lies there
        return
    p = ProblemDef(Potential.zero(g.n), BoundaryConditions(Tm, Tp))
    d = det_w(p, lam)
    d0 = unperturbed_det(g, lam)
    assert abs(d.value - d0) <= 1e-9 * max(abs(d0), 1e-300)


def _random_problem(seed, n):
    r = np.random.default_rng(seed)
    A = r.standard_normal((n, n)) + 1j * r.standard_normal((n, n))
    V = 0.5 * (A + A.conj().T)
    Q, _ = np.linalg.qr(r.standard_normal((n, n)) + 1j * r.standard_normal((n, n)))
    km, kp = r.integers(0, n + 1, 2)
    Tm = Q[:, :km] @ Q[:, :km].conj().T
    Q2, _ = np.linalg.qr(r.standard_normal((n, n)) + 1j * r.standard_normal((n, n)))
    Tp = Q2[:, :kp] @ Q2[:, :kp].conj().T
    a = (np.eye(n) - Tm) @ V @ (np.eye(n) - Tm)
    b = (np.eye(n) - Tp) @ V.T.conj() @ (np.eye(n) - Tp)
    return ProblemDef(Potential("polynomial", (V, 0.5 * V)), BoundaryConditions(Tm, Tp, a, b))


@given(st.integers(0, 2**31), st.integers(1, 3), st.floats(-30, 300), st.floats(-20, 20))
def test_duality_for_random_problems(seed, n, x, y):
    p = _random_problem(seed, n)
    assert duality_residual(p, [complex(x, y)])[0] <= 1e-8


@settings(max_examples=8)
@given(st.integers(0, 2**31), st.floats(-30, 200), st.floats(-10, 10))
def test_wronskian_is_constant_in_x(seed, x, y):
    p = _random_problem(seed, 2)
    _, Wx = wronskian_profile(p, complex(x, y))
    ref = np.linalg.norm(Wx[0], 2)
    assert np.max(np.linalg.norm(Wx - Wx[0], 2, axis=(-2, -1))) <= 1e-8 * ref


def test_self_wronskian_vanishes_for_real_lambda():
    p = _random_problem(3, 2)
    S, F2 = self_wronskian(p, 17.0)
    assert np.max(np.abs(S)) <= 1e-8 * F2


def test_count_zeros_examples():
    assert count_zeros(twisted(), Contour(0.0, (3 * np.pi / 4) ** 2)) == 1
    assert count_zeros(dirichlet_scalar(), Contour(np.pi ** 2, 1.0)) == 1
    assert count_zeros(dirichlet_scalar(), Contour(20.0, 3.0)) == 0
    assert count_zeros(neumann_scalar(), Contour(0.0, 50.0)) == 3
    with pytest.raises(ContourTooClose):
        count_zeros(dirichlet_scalar(), Contour(np.pi ** 2 - 1.0, 1.0))


def test_count_zeros_additive_and_node_invariant():
    p = twisted()
    lo, mid, hi = -5.0, 20.0, 60.0
    a = count_zeros(p, Contour.through(lo, mid))
    b = count_zeros(p, Contour.through(mid, hi))
    assert a + b == count_zeros(p, Contour.through(lo, hi)) == 5
    assert count_zeros(p, Contour.through(lo, hi, 64)) == count_zeros(p, Contour.through(lo, hi, 256))


def test_contour_validation():
    with pytest.raises(ValueError):
        Contour(0.0, -1.0)
    with pytest.raises(ValueError):
        Contour(0.0, 1.0, 16)


def test_rouche_margin_examples():
    g1 = decompose(np.eye(1), np.eye(1))
    C = Contour(0.0, (10 * np.pi + np.pi / 4) ** 2)
    assert rouche_margin(dirichlet_scalar(), g1, C) == pytest.approx(0.0, abs=1e-12)
    assert rouche_margin(dirichlet_scalar(0.1), g1, C) < 1.0
    gt = decompose(twisted().bc.Tm, twisted().bc.Tp)
    assert rouche_margin(twisted(), gt, Contour(0.0, 30.0)) < 1e-12
    with pytest.raises(NearExceptionalSet):
        rouche_margin(dirichlet_scalar(0.1), g1, Contour(0.0, np.pi ** 2, 64))
