import numpy as np
import pytest

from oracles import (COMMUTING3_FIRST_6, DIRICHLET_MATRIX_FIRST_5, M_DIRICHLET_AT_MINUS_1,
                     M_DIRICHLET_V03_AT_2, ROBIN_DIRICHLET_FIRST_2, TWISTED_FIRST_10)
from vsl.errors import ContourTooClose, DegenerateZ, NearPole, RankMismatch
from vsl.geometry import decompose
from vsl.golden import commuting3, dirichlet_matrix, dirichlet_scalar, neumann_scalar, twisted
from vsl.problem import BoundaryConditions, Potential, ProblemDef
from vsl.spectrum import (EigenvalueRecord, certified_n_lo, find_eigenvalues, fingerprint_distance,
                          first_eigenvalues, localization_intervals, m_function, residue,
                          spectral_data_to_json, spectral_triplet, spectrum_lower_bound,
                          triplet_via_derivative, unperturbed_roots, z_matrix)
from vsl.verify import fd_reference_eigenvalues
from vsl.wronskian import unperturbed


def test_dirichlet_scan_example():
    recs = find_eigenvalues(dirichlet_scalar(), 50.0)
    assert np.allclose(recs.values, [np.pi ** 2, 4 * np.pi ** 2], atol=1e-12)
    assert [r.multiplicity for r in recs] == [1, 1] and recs.certified
    assert len(find_eigenvalues(dirichlet_scalar(), 0.1)) == 0


def test_twisted_scan_examples():
    recs = find_eigenvalues(twisted(), 14.0)
    assert np.allclose(recs.values, TWISTED_FIRST_10[:3], atol=1e-10)
    recs = find_eigenvalues(twisted(), 240.0)
    assert np.allclose(recs.values, TWISTED_FIRST_10, atol=1e-8)
    assert [r.series_tag for r in recs[:4]] == ["twisted(1,+)", "twisted(1,-)", "twisted(1,+)", "twisted(1,-)"]


def test_double_eigenvalues_for_decoupled_copies():
    p = ProblemDef(Potential.zero(2), BoundaryConditions.dirichlet(2))
    recs = find_eigenvalues(p, 100.0)
    assert [r.multiplicity for r in recs] == [2, 2, 2]
    assert np.allclose([r.lam for r in recs], [np.pi ** 2 * n * n for n in (1, 2, 3)], atol=1e-10)


def test_commuting3_with_multiplicity():
    recs = first_eigenvalues(commuting3(), 6)
    assert np.allclose(recs.values[:6], COMMUTING3_FIRST_6, atol=1e-10)
    assert recs[1].multiplicity == 2 and recs[1].series_tag == "ND/DN"


def test_dirichlet_matrix_eigenvalues():
    recs = first_eigenvalues(dirichlet_matrix(), 5)
    assert np.allclose(recs.values[:5], DIRICHLET_MATRIX_FIRST_5, atol=1e-10)


def test_robin_end():
    bc = BoundaryConditions(np.zeros((1, 1)), np.eye(1), a=np.array([[1.0]]))
    recs = first_eigenvalues(ProblemDef(Potential.zero(1), bc), 2)
    assert np.allclose(recs.values[:2], ROBIN_DIRICHLET_FIRST_2, atol=1e-10)


def test_negative_eigenvalue_below_zero():
    # Neumann with V = -3: eigenvalues pi^2 n^2 - 3, starting at -3
    recs = first_eigenvalues(neumann_scalar(-3.0), 2)
    assert np.allclose(recs.values[:2], [-3.0, np.pi ** 2 - 3.0], atol=1e-10)
    assert spectrum_lower_bound(neumann_scalar(-3.0)) < -3.0


def test_non_constant_potential_against_extrapolated_fd():
    V = Potential("polynomial", (np.array([[0.0, 0.5], [0.5, 1.0]]), np.array([[2.0, 0.0], [0.0, -1.0]])))
    p = ProblemDef(V, BoundaryConditions(*[np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]))
    shoot = first_eigenvalues(p, 4).values[:4]
    f1 = fd_reference_eigenvalues(p, 1 / 1000, 4)
    f2 = fd_reference_eigenvalues(p, 1 / 2000, 4)
    rich = (4 * f2 - f1) / 3
    assert np.allclose(shoot, rich, atol=1e-5)


def test_scalar_g_closed_forms():
    p = dirichlet_scalar()
    for r in first_eigenvalues(p, 10):
        n = round(np.sqrt(r.lam) / np.pi)
        t = spectral_triplet(p, r)
        assert t.g[0, 0].real == pytest.approx(1 / (2 * np.pi ** 2 * n * n), rel=1e-10)
        assert triplet_via_derivative(p, r).g[0, 0].real == pytest.approx(t.g[0, 0].real, rel=1e-10)
    recs = first_eigenvalues(neumann_scalar(), 3)
    t0 = spectral_triplet(neumann_scalar(), recs[0])
    assert recs[0].lam == pytest.approx(0.0, abs=1e-12) and t0.g[0, 0].real == pytest.approx(1.0, rel=1e-10)
    assert spectral_triplet(neumann_scalar(), recs[1]).g[0, 0].real == pytest.approx(0.5, rel=1e-10)


def test_twisted_triplet_against_closed_form_kernel():
    p = twisted()
    g = decompose(p.bc.Tm, p.bc.Tp)
    r = first_eigenvalues(p, 1)[0]
    t = spectral_triplet(p, r)
    # kernel of the closed-form W0, then int |F_minus h|^2 in closed form
    _, _, Vh = np.linalg.svd(unperturbed(g, r.lam))
    h = Vh[-1].conj()
    assert np.linalg.norm(t.P - np.outer(h, h.conj()), 2) < 1e-8
    k = np.sqrt(r.lam)
    int_cos2 = 0.5 + np.sin(2 * k) / (4 * k)
    int_sin2 = (0.5 - np.sin(2 * k) / (4 * k)) / k ** 2
    hm = p.bc.Tm @ h
    expected = np.linalg.norm(h - hm) ** 2 * int_cos2 + np.linalg.norm(hm) ** 2 * int_sin2
    assert np.trace(t.G).real == pytest.approx(expected, rel=1e-10)
    assert np.linalg.norm(triplet_via_derivative(p, r).G - t.G) < 1e-8 * np.linalg.norm(t.G)


def test_residues():
    p = dirichlet_scalar()
    for n, r in enumerate(first_eigenvalues(p, 3), 1):
        assert residue(p, r)[0, 0] == pytest.approx(-2 * np.pi ** 2 * n * n, rel=1e-10)
    r0 = first_eigenvalues(neumann_scalar(), 1)[0]
    assert residue(neumann_scalar(), r0)[0, 0] == pytest.approx(-1.0, rel=1e-10)


def test_residue_identity_and_dual_route_for_matrix_potential():
    p = dirichlet_matrix()
    for r in first_eigenvalues(p, 5):
        t = spectral_triplet(p, r)
        ginv = np.linalg.inv(t.g)
        G = t.basis @ ginv @ t.basis.conj().T
        assert np.linalg.norm(residue(p, r) + G, 2) <= 1e-6 * np.linalg.norm(ginv, 2)
        assert np.linalg.norm(triplet_via_derivative(p, r).G - t.G, 2) <= 1e-7 * np.linalg.norm(t.G, 2)


def test_residue_guard():
    # radius 0.1 circle centred 0.1 above pi^2: the node at angle pi lands on the pole
    r = EigenvalueRecord(np.pi ** 2 + 0.1, 1, None, (np.pi ** 2 - 1.0, np.pi ** 2 + 1.0))
    with pytest.raises(ContourTooClose):
        residue(dirichlet_scalar(), r, nodes=256)


def test_m_function_examples():
    assert m_function(dirichlet_scalar(), -1.0).m[0, 0] == pytest.approx(M_DIRICHLET_AT_MINUS_1, rel=1e-13)
    assert abs(m_function(dirichlet_scalar(), np.pi ** 2 / 4).m[0, 0]) < 1e-14
    assert m_function(dirichlet_scalar(0.3), 2.0).m[0, 0] == pytest.approx(M_DIRICHLET_V03_AT_2, rel=1e-13)
    with pytest.raises(NearPole):
        m_function(dirichlet_scalar(), np.pi ** 2)
    w = m_function(dirichlet_matrix(), 30.0 + 2.0j)
    assert w.symmetry_residual < 1e-8


def test_z_matrix_certified_and_misuse():
    p = twisted()
    r = first_eigenvalues(p, 1)[0]
    s = np.linalg.svd(z_matrix(p, r), compute_uv=False)
    assert s[-1] > 1e-8 * s[0]
    bogus = EigenvalueRecord(5.0, 1, None, (4.0, 6.0))
    with pytest.raises((RankMismatch, DegenerateZ)):
        z_matrix(dirichlet_scalar(), bogus)
    with pytest.raises(RankMismatch):
        spectral_triplet(dirichlet_scalar(), bogus)


def test_localization_examples():
    g1 = decompose(np.eye(1), np.eye(1))
    ivs = localization_intervals(g1, 0.0, 3)
    assert [iv.expected for iv in ivs] == [1, 1, 1]
    assert np.allclose([iv.center for iv in ivs], [np.pi ** 2 * n * n for n in (1, 2, 3)])
    gt = decompose(twisted().bc.Tm, twisted().bc.Tp)
    ivs = localization_intervals(gt, 0.0, 2)
    assert sorted(round(iv.center, 6) for iv in ivs) == sorted(
        round((np.pi * n + s * np.pi / 6) ** 2, 6) for n in (1, 2) for s in (-1, 1))
    g3 = decompose(commuting3().bc.Tm, commuting3().bc.Tp)
    by_tag = {iv.series_tag: iv.expected for iv in localization_intervals(g3, 0.0, 1)}
    assert by_tag == {"NN": 1, "ND/DN": 2}
    assert unperturbed_roots(g3, 3.0) == [(0.0, 1, "NN"), ((np.pi / 2) ** 2, 2, "ND/DN")]
    assert certified_n_lo(twisted()) == 1


def test_fingerprints():
    p = dirichlet_scalar()
    assert fingerprint_distance(p, dirichlet_scalar(), 3).distance <= 1e-7
    shifted = fingerprint_distance(p, dirichlet_scalar(1.0), 3)
    assert shifted.distance >= 3.0 - 1e-9
    a = ProblemDef(Potential.zero(2), BoundaryConditions.dirichlet(2))
    b = ProblemDef(Potential.constant(np.diag([0.0, 0.5])), BoundaryConditions.dirichlet(2))
    res = fingerprint_distance(a, b, 4)
    assert res.distance > 0.4
    assert res.distance == pytest.approx(1.0, abs=1e-7)
    with pytest.raises(ValueError):
        fingerprint_distance(p, twisted(), 3)


def test_spectral_data_json():
    import json
    p = dirichlet_scalar()
    t = spectral_triplet(p, first_eigenvalues(p, 1)[0])
    d = json.loads(spectral_data_to_json([t]))[0]
    assert set(d) == {"lambda", "multiplicity", "P", "G", "g", "basis"}
    assert d["g"][0][0][0] == pytest.approx(1 / (2 * np.pi ** 2))
