import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import FD_DIRICHLET_H2000
from vsl.golden import dirichlet_scalar, neumann_scalar, twisted, twisted_perturbed
from vsl.problem import BoundaryConditions, Potential, ProblemDef
from vsl.verify import (SUITES, asymptotics_trend, convergence_orders, fd_reference_eigenvalues,
                        run_suite, trend_residual)


def test_fd_examples():
    assert np.allclose(fd_reference_eigenvalues(dirichlet_scalar(), 1 / 1000, 3),
                       [9.8696, 39.4784, 88.8263], atol=1e-3)
    assert np.allclose(fd_reference_eigenvalues(neumann_scalar(), 1 / 1000, 2), [0.0, 9.8696], atol=1e-3)
    assert fd_reference_eigenvalues(twisted(), 1 / 1000, 1)[0] == pytest.approx(0.27416, abs=1e-4)


def test_fd_matches_frozen_values():
    got = fd_reference_eigenvalues(dirichlet_scalar(), 1 / 2000, 5)
    assert np.allclose(got, FD_DIRICHLET_H2000, rtol=1e-10)


def test_fd_rejects_coarse_mesh():
    with pytest.raises(ValueError):
        fd_reference_eigenvalues(dirichlet_scalar(), 1 / 100, 3)


def test_convergence_orders():
    h = np.array([1 / 500, 1 / 1000, 1 / 2000])
    err = np.outer(h ** 2, [1.0, 3.0])
    assert np.allclose(convergence_orders(err), 2.0)
    assert np.isnan(convergence_orders(np.zeros((3, 1))))[0]


@given(st.lists(st.floats(0.5, 2.0), min_size=5, max_size=40))
def test_trend_residual_bounded_for_flat_sequences(v):
    assert trend_residual(np.array(v)) <= 4.0


def test_trend_residual_flags_growth():
    assert trend_residual(np.arange(5, 41, dtype=float) ** 2) > 3.0
    assert trend_residual(np.zeros(10)) == 0.0


def test_trend_values_decay_with_potential():
    v = asymptotics_trend(twisted_perturbed(), "W_correction")
    assert v.shape == (36,) and np.all(np.isfinite(v))
    assert trend_residual(v) <= 3.0


@pytest.mark.parametrize("suite", SUITES)
def test_each_suite_passes_on_twisted(suite):
    rep = run_suite(twisted(), suite)
    assert rep.passed, rep.to_text()
    assert rep.checks


def test_all_prefixes_and_unknown_suite():
    rep = run_suite(dirichlet_scalar(), "all")
    assert rep.passed, rep.to_text()
    assert {c.name.split(":")[0] for c in rep.checks} == set(SUITES)
    with pytest.raises(ValueError):
        run_suite(dirichlet_scalar(), "bogus")


def test_corrupted_problem_fails_geometry():
    # a must live on Ran Tm^perp, which is trivial when Tm = 1
    bc = BoundaryConditions(np.eye(1), np.zeros((1, 1)), a=np.array([[1.0]]))
    rep = run_suite(ProblemDef(Potential.zero(1), bc), "geometry")
    assert not rep.passed
    assert [c.name for c in rep.failures] == ["problem:a-compression"]


def test_determinism():
    a = run_suite(twisted_perturbed(), "wronskian", seed=0x1234)
    b = run_suite(twisted_perturbed(), "wronskian", seed=0x1234)
    assert [c.residual for c in a.checks] == [c.residual for c in b.checks]
