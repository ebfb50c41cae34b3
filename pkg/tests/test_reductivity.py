import numpy as np
import pytest

from frhs.catalog import catalog_get, catalog_list
from frhs.config import RunConfig
from frhs.lie_algebra import StructureConstants, decompose, validate
from frhs.metric import AlphaBetaModel, InnerProduct, PhiFamily
from frhs.reductivity import (
    Verdict,
    check_finsler_nr_def1,
    check_geodesic_vectors,
    check_riemannian_nr,
    check_skew_adjoint,
    check_x_orthogonal,
    finsler_nr_residuals,
    reductivity_verdict,
)

from conftest import CATALOG_IDS, NR_IDS, naive_bracket, unit_samples

SU2 = [[0, 1, 2, 1.0], [1, 2, 0, 1.0], [2, 0, 1, 1.0]]
HEIS = [[0, 1, 2, 1.0]]


def build(dim, entries, h, A, X, phi):
    dec = decompose(validate(StructureConstants.from_entries(dim, entries)), h)
    return AlphaBetaModel(dec, InnerProduct(np.asarray(A, float)), np.array(X, float), phi)


def brute_riemannian(dim, entries, A):
    """Triple loop over basis vectors with the naive bracket (h trivial)."""
    eye = np.eye(dim)
    worst, at = 0.0, None
    for x in range(dim):
        for y in range(dim):
            for z in range(dim):
                val = abs(
                    naive_bracket(dim, entries, eye[x], eye[y]) @ A @ eye[z]
                    + eye[y] @ A @ naive_bracket(dim, entries, eye[x], eye[z])
                )
                if val > worst:
                    worst, at = val, (x, y, z)
    return worst, at


def test_riemannian_nr_su2():
    m = build(3, SU2, [], np.eye(3), [0, 0, 0], PhiFamily.riemannian())
    assert check_riemannian_nr(m.decomposition, m.inner).residual == 0.0


def test_riemannian_nr_heisenberg_witness():
    expected = brute_riemannian(3, HEIS, np.eye(3))
    assert expected == (1.0, (0, 1, 2))
    m = catalog_get("heisenberg_randers")
    c = check_riemannian_nr(m.decomposition, m.inner)
    assert not c.passed
    assert (c.residual, c.witness) == expected


def test_riemannian_nr_sphere():
    m = catalog_get("so3_sphere")
    assert check_riemannian_nr(m.decomposition, m.inner).residual == 0.0


def test_riemannian_nr_skewed_metric_on_su2():
    A = np.diag([1.0, 2.0, 3.0])
    m = build(3, SU2, [], A, [0, 0, 0], PhiFamily.riemannian())
    expected, _ = brute_riemannian(3, SU2, A)
    assert expected > 0
    assert check_riemannian_nr(m.decomposition, m.inner).residual == pytest.approx(expected)


def test_skew_adjoint():
    su2 = catalog_get("su2_biinvariant")
    assert check_skew_adjoint(su2.decomposition, su2.inner).residual == 0.0
    u2 = catalog_get("u2_randers")
    assert check_skew_adjoint(u2.decomposition, u2.inner).residual == 0.0
    heis = catalog_get("heisenberg_randers")
    c = check_skew_adjoint(heis.decomposition, heis.inner)
    assert (c.residual, c.witness, c.passed) == (1.0, 0, False)


def test_skew_adjoint_ranges_over_h_too():
    # ad of the isotropy generator must also be checked on m
    m = build(3, SU2, [2], np.diag([1.0, 2.0]), [0, 0], PhiFamily.riemannian())
    c = check_skew_adjoint(m.decomposition, m.inner)
    assert not c.passed and c.witness == 2


def test_x_orthogonal():
    z = catalog_get("su2_biinvariant")
    assert check_x_orthogonal(z.decomposition, z.inner, z.X).residual == 0.0
    u2 = catalog_get("u2_randers")
    assert check_x_orthogonal(u2.decomposition, u2.inner, u2.X).residual == 0.0
    m = build(3, SU2, [], np.eye(3), [0, 0, 0.5], PhiFamily.randers())
    c = check_x_orthogonal(m.decomposition, m.inner, m.X)
    assert (c.residual, c.witness) == (0.5, (0, 1))


def test_finsler_nr_u2_randers():
    c = check_finsler_nr_def1(catalog_get("u2_randers"))
    assert c.passed and c.residual <= 1e-9


def test_finsler_nr_reduces_to_riemannian():
    c = check_finsler_nr_def1(catalog_get("su2_biinvariant"))
    assert c.residual == 0.0


def test_finsler_nr_heisenberg_fails():
    c = check_finsler_nr_def1(catalog_get("heisenberg_randers"))
    assert not c.passed and c.residual >= 0.1 and c.witness is not None


def test_finsler_nr_kropina_counts_skips():
    c = check_finsler_nr_def1(catalog_get("u2_kropina"))
    assert c.passed and c.extra["skipped"] > 0


def test_geodesic_vectors():
    c = check_geodesic_vectors(catalog_get("u2_randers"))
    assert c.residual <= 1e-9 and c.extra["route_delta"] <= 1e-10
    assert check_geodesic_vectors(catalog_get("su2_biinvariant")).residual <= 1e-15
    h = check_geodesic_vectors(catalog_get("heisenberg_randers"))
    assert not h.passed and h.witness is not None


def test_verdicts():
    u2 = reductivity_verdict(catalog_get("u2_randers"))
    assert u2.verdict is Verdict.NATURALLY_REDUCTIVE
    assert all(c.residual <= 1e-9 for c in u2.checks)
    assert any("bi-invariant" in r for r in u2.reasons)

    heis = reductivity_verdict(catalog_get("heisenberg_randers"))
    assert heis.verdict is Verdict.NOT_NATURALLY_REDUCTIVE
    assert heis.riemannian_nr.witness == (0, 1, 2)

    su2 = reductivity_verdict(catalog_get("su2_biinvariant"))
    assert su2.verdict is Verdict.NATURALLY_REDUCTIVE
    assert su2.phi_prime["all_small"]
    assert any("phi'(r) vanishes" in r for r in su2.reasons)


def test_broken_implication_is_inconclusive():
    # a tolerance tighter than round-off makes the certificate and the sampled
    # identity disagree, which the verdict must surface rather than hide
    m = catalog_get("u2_kropina")
    m = m.with_tol(m.tol.replace(nr_finsler_tol=1e-30))
    rep = reductivity_verdict(m)
    assert rep.verdict is Verdict.INCONCLUSIVE
    assert "suspect" in rep.reasons[0]


@pytest.mark.parametrize("entry_id", CATALOG_IDS)
def test_certificate_implies_finsler_nr(entry_id):
    m = catalog_get(entry_id)
    rep = reductivity_verdict(m)
    if rep.skew_adjoint_all_g.passed and rep.x_orthogonal_derived.passed:
        assert rep.finsler_nr_def1.residual <= m.tol.nr_finsler_tol


@pytest.mark.parametrize("entry_id", NR_IDS)
def test_finsler_and_riemannian_nr_agree_under_certificate(entry_id):
    rep = reductivity_verdict(catalog_get(entry_id))
    assert rep.finsler_nr_def1.passed == rep.riemannian_nr.passed


def test_polarization_identity(rng):
    """a(u+v, [u+v, z]_m) = 0 for all u, v, z  <=>  a([z,u]_m, v) + a([z,v]_m, u) = 0."""
    for entry_id in ("u2_randers", "so3_sphere", "heisenberg_randers"):
        m = catalog_get(entry_id)
        dec, a = m.decomposition, m.inner
        lhs_all_zero, rhs_all_zero = True, True
        for _ in range(32):
            u, v, z = rng.standard_normal((3, m.dim_m))
            w = u + v
            lhs = a(w, dec.bracket_m(w, z)) - a(u, dec.bracket_m(u, z)) - a(v, dec.bracket_m(v, z))
            rhs = a(dec.bracket_m(z, u), v) + a(dec.bracket_m(z, v), u)
            # the cross terms of the quadratic form are exactly minus the symmetric sum
            assert lhs == pytest.approx(-rhs, abs=1e-12)
            lhs_all_zero &= abs(a(w, dec.bracket_m(w, z))) <= 1e-12
            rhs_all_zero &= abs(rhs) <= 1e-12
        assert lhs_all_zero == rhs_all_zero


def test_residual_invariant_under_scaling(rng):
    m = catalog_get("heisenberg_randers")
    ad = m.decomposition.ad_on_m_tensor()
    for y in unit_samples(m, rng, 8):
        base = finsler_nr_residuals(m.sample(y), ad)
        for lam in (0.5, 3.0):
            scaled = finsler_nr_residuals(m.sample(lam * y), ad)
            np.testing.assert_allclose(scaled, base, rtol=1e-9, atol=1e-9 * np.abs(base).max())


def test_report_json_shape():
    d = reductivity_verdict(catalog_get("heisenberg_randers"), RunConfig(n_samples=8)).to_dict()
    assert d["verdict"] == "NotNaturallyReductive"
    assert d["riemannian_nr"]["witness"] == [0, 1, 2]
    assert d["finsler_nr_def1"]["samples"] == 8
    assert len(d["assumptions"]) == 2
