"""Acceptance criteria, each at its stated tolerance.

Every test prints a single ``PASS``/``FAIL`` line (shown even without ``-s``)
before asserting, so ``pytest tests/test_acceptance.py`` gives a one-screen summary.
"""
import time

import numpy as np
import pytest

from vsl.geometry import decompose
from vsl.golden import GOLDEN, dirichlet_matrix, dirichlet_scalar, twisted, twisted_perturbed
from vsl.problem import BoundaryConditions, Potential, ProblemDef
from vsl.spectrum import (first_eigenvalues, fingerprint_distance, residue, spectral_triplet,
                          triplet_via_derivative)
from vsl.verify import (FD_MESHES, SPECTRAL_COUNT, convergence_orders, oracle_errors, run_suite)
from vsl.wronskian import exceptional_distance, unperturbed, unperturbed_inverse


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number:>2}: {detail}")
        assert ok, detail
    return emit


def test_criterion_01_twisted_series(report):
    t0 = time.perf_counter()
    got = first_eigenvalues(twisted(), 10).values[:10]
    dt = time.perf_counter() - t0
    m = np.arange(0, 6)
    g = np.pi / 6
    exact = np.sort(np.r_[(np.pi * m + g) ** 2, (np.pi * m[1:] - g) ** 2])[:10]
    err = float(np.max(np.abs(got - exact)))
    report(1, err <= 1e-8 and dt <= 10.0,
           f"twisted (pi n +- pi/6)^2, max abs error {err:.2e} (<= 1e-8), runtime {dt:.2f} s (<= 10 s)")


def test_criterion_02_scalar_closed_forms(report):
    p = dirichlet_scalar()
    recs = first_eigenvalues(p, 10)
    n = np.arange(1, 11)
    lam_err = float(np.max(np.abs(recs.values[:10] - (np.pi * n) ** 2)))
    g = np.array([spectral_triplet(p, r).g[0, 0].real for r in recs[:10]])
    g_err = float(np.max(np.abs(g - 1 / (2 * np.pi ** 2 * n ** 2))))
    report(2, lam_err <= 1e-8 and g_err <= 1e-8,
           f"Dirichlet lambda_n error {lam_err:.2e}, g_n error {g_err:.2e} (both <= 1e-8, n <= 10)")


def test_criterion_03_residue_identity(report):
    p = dirichlet_matrix()
    worst = 0.0
    for r in first_eigenvalues(p, 5)[:5]:
        t = spectral_triplet(p, r)
        ginv = np.linalg.inv(t.g)
        G = t.basis @ ginv @ t.basis.conj().T
        worst = max(worst, np.linalg.norm(residue(p, r) + G, 2) / np.linalg.norm(ginv, 2))
    report(3, worst <= 1e-6, f"residue + P g^-1 P, relative to ||g^-1||: {worst:.2e} (<= 1e-6)")


def test_criterion_04_dual_route(report):
    p = dirichlet_matrix()
    worst = 0.0
    for r in first_eigenvalues(p, 5)[:5]:
        G = spectral_triplet(p, r).G
        Gd = triplet_via_derivative(p, r).G
        worst = max(worst, np.linalg.norm(G - Gd, 2) / np.linalg.norm(G, 2))
    report(4, worst <= 1e-7, f"integral vs lambda-derivative route: relative {worst:.2e} (<= 1e-7)")


def test_criterion_05_counting(report):
    p = twisted_perturbed()
    rep = run_suite(p, "counting")
    names = ["interval-counts", "interval-certification", "cumulative-count", "cumulative-records"]
    ok = all(rep[k].passed for k in names)
    detail = "; ".join(f"{k} {rep[k].residual:g}" for k in names)
    report(5, ok, f"twisted pi/6 with ||V|| = {np.linalg.norm(p.V(0.0), 2):.2f}, "
                  f"{rep['n_lo'].note}, 16 intervals: {detail} ({rep['interval-counts'].note})")


@pytest.mark.parametrize("name", list(GOLDEN))
def test_criterion_06_oracle_convergence(report, name):
    p = GOLDEN[name]()
    shoot = first_eigenvalues(p, SPECTRAL_COUNT).values[:SPECTRAL_COUNT]
    err = oracle_errors(p, shoot)
    orders = convergence_orders(err)
    fin = orders[np.isfinite(orders)]
    order_dev = float(np.max(np.abs(fin - 2.0))) if fin.size else 0.0
    fine = float(np.max(err[-1]))
    assert FD_MESHES[-1] == 1 / 2000
    report(6, order_dev <= 0.2 and fine <= 1e-3,
           f"{name}: orders {np.array2string(orders, precision=3)} (2 +- 0.2), "
           f"max error at h=1/2000 {fine:.3e} (<= 1e-3)")


@pytest.mark.parametrize("name", list(GOLDEN))
def test_criterion_07_wronskian_constancy_duality(report, name):
    rep = run_suite(GOLDEN[name](), "wronskian")
    c, d = rep["constancy"], rep["duality"]
    report(7, c.passed and d.passed and c.threshold == d.threshold == 1e-8,
           f"{name}: constancy {c.residual:.2e}, duality {d.residual:.2e} (<= 1e-8, 20 random lambda)")


@pytest.mark.parametrize("name", list(GOLDEN))
def test_criterion_08_w0_inverse(report, name):
    p = GOLDEN[name]()
    g = decompose(p.bc.Tm, p.bc.Tp)
    rng = np.random.default_rng([0x5EED, 8])
    worst, got = 0.0, 0
    while got < 50:
        k = rng.uniform(0.1, 40.0) + 1j * rng.choice([0.0, rng.uniform(-3.0, 3.0)])
        lam = complex(k * k)
        if exceptional_distance(g, lam) < 1e-3:
            continue
        worst = max(worst, float(np.linalg.norm(unperturbed(g, lam) @ unperturbed_inverse(g, lam) - np.eye(p.n), 2)))
        got += 1
    report(8, worst <= 1e-8, f"{name}: ||W0 W0^-1 - I|| = {worst:.2e} over 50 lambda (<= 1e-8)")


def test_criterion_09_uniqueness_discriminator(report):
    bc = BoundaryConditions.dirichlet(2)
    a = ProblemDef(Potential.zero(2), bc)
    b = ProblemDef(Potential.constant(np.diag([0.0, 0.5])), bc)
    diff = fingerprint_distance(a, b, 4).distance
    same = fingerprint_distance(a, ProblemDef(Potential.zero(2), bc), 4).distance
    report(9, diff > 0.4 and same <= 1e-7,
           f"distance V=0 vs diag(0, 0.5): {diff:.4f} (> 0.4); identical: {same:.2e} (<= 1e-7)")


def test_criterion_10_trends_and_runtime(report):
    t0 = time.perf_counter()
    lines, ok = [], True
    for name, make in GOLDEN.items():
        rep = run_suite(make(), "all")
        trends = [c for c in rep.checks if c.name.startswith("asymptotics:")]
        ok &= len(trends) == 3 and all(c.passed for c in trends)
        lines.append(f"{name} max residual {max(c.residual for c in trends):.2f}"
                     + ("" if rep.passed else " (other checks failed)"))
    dt = time.perf_counter() - t0
    report(10, ok and dt <= 120.0,
           "trend residuals <= 3 for n = 5..40: " + "; ".join(lines) + f"; verify-all {dt:.1f} s (<= 120 s)")
