import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from vsl.errors import StepFailure
from vsl.golden import dirichlet_scalar, neumann_scalar, twisted
from vsl.problem import BoundaryConditions, Potential, ProblemDef
from vsl.propagate import (end_values, entire_trig, entire_trig_derivatives, fundamental,
                           fundamental_dlambda, propagate)


def test_entire_trig_examples():
    assert np.allclose(entire_trig(0.0), (1.0, 1.0))
    c, s = entire_trig(np.pi ** 2)
    assert c == pytest.approx(-1.0, abs=1e-15) and s == pytest.approx(0.0, abs=1e-15)
    c, s = entire_trig(-1.0)
    assert c == pytest.approx(1.5430806348152437, rel=1e-14)
    assert s == pytest.approx(1.1752011936438014, rel=1e-14)


@given(st.floats(-60, 60), st.floats(-60, 60))
def test_entire_trig_matches_numpy(x, y):
    z = complex(x, y)
    w = np.sqrt(z)
    c, s = entire_trig(z)
    assert abs(c - np.cos(w)) <= 1e-13 * max(1, abs(np.cos(w)))
    ref = np.sin(w) / w if abs(w) > 0 else 1.0
    assert abs(s - ref) <= 1e-12 * max(1, abs(ref))


@given(st.floats(-50, 50), st.floats(-50, 50))
def test_entire_trig_derivatives_by_difference(x, y):
    z = complex(x, y)
    h = 1e-5 * max(1.0, abs(z))
    dc, ds = entire_trig_derivatives(z)
    cp, sp = entire_trig(z + h)
    cm, sm = entire_trig(z - h)
    scale = max(1.0, abs(np.exp(abs(np.sqrt(z).imag))))
    assert abs(dc - (cp - cm) / (2 * h)) <= 1e-6 * scale
    assert abs(ds - (sp - sm) / (2 * h)) <= 1e-6 * scale


def test_scalar_closed_forms():
    k = np.pi
    f = fundamental(dirichlet_scalar(), "minus", k * k)
    F1, P1 = f.F[-1, 0, 0], f.Fprime[-1, 0, 0]
    assert abs(F1) < 1e-14 and P1 == pytest.approx(-1.0, abs=1e-14)
    f = fundamental(neumann_scalar(), "minus", k * k)
    assert f.F[-1, 0, 0] == pytest.approx(-1.0, abs=1e-14) and abs(f.Fprime[-1, 0, 0]) < 1e-13
    f = fundamental(dirichlet_scalar(), "plus", (np.pi / 2) ** 2)
    assert f.F[0, 0, 0] == pytest.approx(-2 / np.pi, abs=1e-14)
    assert f.at(0.0).F[0, 0] == pytest.approx(-2 / np.pi, abs=1e-14)


def test_dlambda_zero_initial_data_and_closed_form():
    d = fundamental_dlambda(dirichlet_scalar(), "minus", 0.0)
    assert np.all(d.F[0] == 0) and np.all(d.Fprime[0] == 0)
    lam = np.pi ** 2
    d = fundamental_dlambda(dirichlet_scalar(), "minus", lam)
    # d/dlam sin(k)/k = (k cos k - sin k) / (2 k^3)
    k = np.sqrt(lam)
    assert d.F[-1, 0, 0] == pytest.approx((k * np.cos(k) - np.sin(k)) / (2 * k ** 3), rel=1e-12)


def test_rescaling_for_negative_lambda():
    lam = -400.0
    f = fundamental(dirichlet_scalar(), "minus", lam)
    assert f.scaling_exponent == pytest.approx(20.0)
    F, _ = f.unscaled()
    assert F[-1, 0, 0] == pytest.approx(np.sinh(20.0) / 20.0, rel=1e-12)
    # rescaled values stay bounded
    assert np.max(np.abs(f.F)) < 1.0


def _reference(problem, lam, side="minus"):
    """Independent solve of the 2N first-order system with DOP853."""
    n = problem.n
    bc = problem.bc

    def rhs(x, y):
        Y = y.reshape(2, n, n)
        return np.stack([Y[1], (problem.V.values(x) - lam * np.eye(n)) @ Y[0]]).ravel()

    if side == "minus":
        y0 = np.stack([bc.Tm_perp, bc.Tm + bc.a @ bc.Tm_perp]).astype(complex).ravel()
        span = (0.0, 1.0)
    else:
        y0 = np.stack([bc.Tp_perp, bc.Tp - bc.b @ bc.Tp_perp]).astype(complex).ravel()
        span = (1.0, 0.0)
    sol = solve_ivp(rhs, span, y0, method="DOP853", rtol=1e-12, atol=1e-13)
    return sol.y[:, -1].reshape(2, n, n)


def _smooth_problem():
    V0 = np.array([[1.0, 0.3 + 0.2j], [0.3 - 0.2j, -0.5]])
    V1 = np.array([[0.0, 1.0], [1.0, 2.0]])
    Tm, Tp = twisted().bc.Tm, twisted().bc.Tp
    return ProblemDef(Potential("polynomial", (V0, V1, V1)), BoundaryConditions(Tm, Tp))


@pytest.mark.parametrize("lam", [-20.0, 3.7, 55.0 + 4.0j])
@pytest.mark.parametrize("side", ["minus", "plus"])
def test_non_constant_potential_against_dop853(lam, side):
    p = _smooth_problem()
    F, P, _, _, kap = end_values(p, side, [lam])
    ref = _reference(p, lam, side)
    f = np.exp(kap[0])
    assert np.allclose(F[0] * f, ref[0], rtol=0, atol=1e-8 * np.abs(ref).max())
    assert np.allclose(P[0] * f, ref[1], rtol=0, atol=1e-8 * np.abs(ref).max())


def test_rk4_route_agrees_with_exponential_route():
    p = _smooth_problem()
    a = end_values(p, "minus", [10.0], method="exp")
    b = end_values(p, "minus", [10.0], method="rk4")
    assert np.allclose(a[0], b[0], atol=1e-8) and np.allclose(a[1], b[1], atol=1e-8)


def test_piecewise_constant_is_exact_across_breakpoints():
    V = Potential("piecewise_constant", (np.array([[0.0]]), np.array([[0.0]])), np.array([0.0, 0.4, 1.0]))
    p = ProblemDef(V, BoundaryConditions.dirichlet(1))
    F, P, _, _, _ = end_values(p, "minus", [np.pi ** 2])
    assert abs(F[0, 0, 0]) < 1e-14


def test_grid_samples_satisfy_the_ode():
    p = _smooth_problem()
    nodes, Y, _, _, _ = propagate(p, "minus", [7.0], 256)
    F = Y[0, :, 0]
    h = np.diff(nodes)
    # second difference on the uniform interior vs (V - lam) F
    i = np.arange(1, len(nodes) - 1)
    assert np.allclose(h, h[0])
    d2 = (F[i + 1] - 2 * F[i] + F[i - 1]) / h[0] ** 2
    rhs = (p.V.values(nodes[i]) - 7.0 * np.eye(2)) @ F[i]
    assert np.max(np.abs(d2 - rhs)) < 1e-3


def test_argument_checks():
    with pytest.raises(ValueError):
        fundamental(dirichlet_scalar(), "minus", 1.0, grid_size=10)
    with pytest.raises(ValueError):
        end_values(dirichlet_scalar(), "minus", [2e8])
    with pytest.raises(ValueError):
        end_values(dirichlet_scalar(), "minus", [1.0], method="euler")


def test_step_failure_when_tolerance_is_unreachable():
    with pytest.raises(StepFailure):
        end_values(_smooth_problem(), "minus", [1.0], tol=1e-30)
