import numpy as np
import pytest

from frhs.catalog import catalog_get
from frhs.errors import DegenerateFlag, NotNaturallyReductive, ThetaNearZero
from frhs.lie_algebra import StructureConstants, decompose, validate
from frhs.metric import AlphaBetaModel, InnerProduct, PhiFamily
from frhs.curvature import (
    FORCED_NOTE,
    curvature_operator,
    curvature_scan,
    curvature_terms,
    flag_curvature,
    flag_curvature_closed,
    flag_curvature_corollary,
    flag_curvature_general,
    orthonormalize,
    riemannian_sectional,
)

E3 = np.eye(3)
E4 = np.eye(4)
NR_FINSLER = ["u2_randers", "u2_matsumoto", "u2_kropina"]


def flags_for(model, rng, count):
    out = []
    while len(out) < count:
        y, u = rng.standard_normal((2, model.dim_m))
        if model.phi.in_domain(model.r_value(y)):
            out.append(orthonormalize(model, y, u))
    return out


def test_curvature_operator_su2():
    m = catalog_get("su2_biinvariant")
    # [e0, e1] = e2, [e1, e2] = e0, so 1/4 [e1, [e0, e1]] = 1/4 e0
    np.testing.assert_allclose(curvature_operator(m, E3[0], E3[1]), [0.25, 0, 0])
    np.testing.assert_array_equal(curvature_operator(m, E3[1], E3[1]), 0)


def test_central_flagpole_is_flat(rng):
    m = catalog_get("u2_randers")
    for u in rng.standard_normal((8, 4)):
        np.testing.assert_array_equal(curvature_operator(m, u, E4[3]), 0)


def test_general_path_examples():
    su2 = catalog_get("su2_biinvariant")
    assert flag_curvature_general(su2, E3[1], E3[0]) == pytest.approx(0.25, abs=1e-15)
    u2 = catalog_get("u2_randers")
    assert flag_curvature_general(u2, E4[3], E4[0]) == 0.0
    assert flag_curvature_general(u2, E4[1], E4[0]) == pytest.approx(0.25, abs=1e-15)


def test_closed_path_examples():
    u2 = catalog_get("u2_randers")
    assert flag_curvature_closed(u2, E4[1], E4[0]) == pytest.approx(0.25, abs=1e-15)
    y = (E4[1] + 0.8 * E4[3])
    k_closed = flag_curvature_closed(u2, y, E4[0])
    y1, u1 = orthonormalize(u2, y, E4[0])
    assert u2.r_value(y1) != 0
    assert abs(k_closed - flag_curvature_general(u2, y1, u1)) <= 1e-8


def test_riemannian_profile_collapses_closed_form(rng):
    for entry_id in ("su2_biinvariant", "so3_sphere"):
        m = catalog_get(entry_id)
        for y, u in flags_for(m, rng, 16):
            ref = riemannian_sectional(m, y, u)
            assert flag_curvature_closed(m, y, u) == pytest.approx(ref, abs=1e-10)
            assert flag_curvature_corollary(m, y, u) == pytest.approx(ref, abs=1e-10)
            assert flag_curvature_general(m, y, u) == pytest.approx(ref, abs=1e-10)


def test_corollary_matches_full_closed_form(rng):
    for entry_id in ("su2_biinvariant", "so3_sphere", *NR_FINSLER):
        m = catalog_get(entry_id)
        for y, u in flags_for(m, rng, 16):
            assert abs(flag_curvature_corollary(m, y, u) - flag_curvature_closed(m, y, u)) <= 1e-10


def test_matsumoto_two_paths_on_basis_flag():
    m = catalog_get("u2_matsumoto")
    k = flag_curvature_corollary(m, E4[1], E4[0])
    assert abs(k - flag_curvature_general(m, E4[1], E4[0])) <= 1e-8


@pytest.mark.parametrize("entry_id", NR_FINSLER)
def test_two_path_agreement(entry_id, rng):
    m = catalog_get(entry_id)
    for y, u in flags_for(m, rng, 32):
        assert abs(flag_curvature_general(m, y, u) - flag_curvature_closed(m, y, u)) <= 1e-8


@pytest.mark.parametrize("entry_id", NR_FINSLER)
def test_plane_choice_invariance(entry_id, rng):
    m = catalog_get(entry_id)
    for y, u in flags_for(m, rng, 16):
        _, u2 = orthonormalize(m, y, u + 0.3 * y)
        assert abs(flag_curvature_general(m, y, u) - flag_curvature_general(m, y, u2)) <= 1e-9
        # a non-orthogonal mate spanning the same plane
        assert abs(flag_curvature_general(m, y, u) - flag_curvature_general(m, y, u + 0.3 * y)) <= 1e-9


@pytest.mark.parametrize("entry_id", NR_FINSLER)
def test_flagpole_scale_invariance(entry_id, rng):
    m = catalog_get(entry_id)
    for y, u in flags_for(m, rng, 16):
        assert abs(flag_curvature_general(m, 2 * y, u) - flag_curvature_general(m, y, u)) <= 1e-9


def test_flagpole_block_vanishes(rng):
    for entry_id in ("su2_biinvariant", "so3_sphere", *NR_FINSLER):
        m = catalog_get(entry_id)
        for y, u in flags_for(m, rng, 16):
            mp, hp = curvature_terms(m, u, y)
            assert abs(0.25 * m.inner(mp, y) + m.inner(hp, y)) <= 1e-10


def test_fd_numerator_route_agrees():
    m = catalog_get("u2_matsumoto")
    y, u = orthonormalize(m, E4[1] + 0.5 * E4[3], E4[0] + 0.2 * E4[2])
    k_fd = flag_curvature_general(m, y, u, use_fd=True)
    assert k_fd == pytest.approx(flag_curvature_closed(m, y, u), rel=1e-6)


def test_gate_and_force():
    m = catalog_get("heisenberg_randers")
    with pytest.raises(NotNaturallyReductive):
        curvature_operator(m, E3[0], E3[1])
    with pytest.raises(NotNaturallyReductive):
        curvature_scan(m, 2, 2)
    res = flag_curvature(m, E3[1], E3[0], force=True)
    assert FORCED_NOTE in res.flags
    assert FORCED_NOTE in curvature_scan(m, 2, 2, force=True).flags


def test_degenerate_flag():
    m = catalog_get("u2_randers")
    with pytest.raises(DegenerateFlag):
        flag_curvature_closed(m, E4[1], 2 * E4[1])
    with pytest.raises(DegenerateFlag):
        flag_curvature_general(m, E4[1], -E4[1])


def test_theta_near_zero():
    # phi = 1 - s^2/2: at r = 0 with a(X, u) = 1, theta = 1 - 1 = 0
    alg = validate(StructureConstants.from_entries(4, [[0, 1, 2, 1.0], [1, 2, 0, 1.0], [2, 0, 1, 1.0]]))
    m = AlphaBetaModel(decompose(alg, []), InnerProduct(np.eye(4)), E4[0], PhiFamily.polynomial([1.0, 0.0, -0.5]))
    with pytest.raises(ThetaNearZero):
        flag_curvature_closed(m, E4[1], E4[0], force=True)


def test_scan_su2_constant():
    scan = curvature_scan(catalog_get("su2_biinvariant"), 16, 16)
    assert len(scan.rows) == 256 and scan.skipped == 0
    assert all(abs(r.K_general - 0.25) <= 1e-10 and abs(r.K_closed - 0.25) <= 1e-10 for r in scan.rows)


def test_scan_u2_randers():
    scan = curvature_scan(catalog_get("u2_randers"), 16, 16)
    summary = scan.summary()
    assert summary["K_min"] == 0.0
    assert summary["max_delta"] <= 1e-8 and scan.passed


def test_scan_kropina_skips_outside_cone():
    scan = curvature_scan(catalog_get("u2_kropina"), 8, 4)
    assert scan.skipped > 0 and scan.skip_reasons == {"DomainError": scan.skipped}
    assert scan.max_delta <= 1e-8


def test_scan_empty():
    scan = curvature_scan(catalog_get("u2_randers"), 0, 16)
    assert scan.empty and scan.summary()["empty"] is True and scan.passed
