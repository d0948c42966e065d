import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hltlab import profiles as pf
from hltlab import spectral as sp
from hltlab.constants import FracParams
from hltlab.errors import DomainError, GridError

P = FracParams(1, 0.25)


@pytest.mark.parametrize("d,n", [(1, 100), (1, 32), (3, 16), (1, 0)])
def test_grid_validation(d, n):
    with pytest.raises(GridError):
        sp.GridSpec(d, n, 1.0)


def test_grid_avoids_origin():
    g = sp.GridSpec(1, 64, 1.0)
    assert np.min(np.abs(g.axis())) == pytest.approx(g.h / 2)
    g3 = sp.GridSpec(3, 32, 1.0)
    assert g3.radii().min() > 0


def test_free_multiplier_spectrum():
    g = sp.GridSpec(1, 128, 2.0)
    op = sp.build_operator(g, P, hardy=False)
    ev = np.linalg.eigvalsh(op.matrix())
    expect = np.sort(np.abs(2 * np.pi * np.fft.fftfreq(128, g.h)) ** 0.5)
    np.testing.assert_allclose(ev, expect, atol=1e-12)
    assert abs(ev[0]) <= 1e-12


def test_self_adjoint_spot_check():
    g = sp.GridSpec(1, 128, 1.0)
    op = sp.build_operator(g, P, sp.gaussian_well(5.0))
    for i, j in [(0, 5), (17, 90), (64, 63)]:
        ei, ej = np.eye(128)[i], np.eye(128)[j]
        assert abs(ej @ op.apply(ei) - ei @ op.apply(ej)) <= 1e-10
    np.testing.assert_allclose(op.matrix() @ ei, op.apply(ei), atol=1e-12)


def test_three_dimensional_apply_symmetric():
    p3 = FracParams(3, 0.5)
    g = sp.GridSpec(3, 32, 2.0)
    op = sp.build_operator(g, p3, sp.gaussian_well(3.0, 0.3))
    rng = np.random.default_rng(1)
    u, v = rng.standard_normal((2, g.size))
    assert abs(u @ op.apply(v) - v @ op.apply(u)) <= 1e-9 * np.linalg.norm(u) * np.linalg.norm(v)


def test_deep_square_well_binds():
    # variational oracle: a trial function with negative energy forces a negative eigenvalue
    V = sp.square_well(50.0, 0.1)
    g = sp.grid_for_potential(V, P)
    op = sp.build_operator(g, P, V)
    x = g.axis()
    phi = np.exp(-(x / 0.08) ** 2)
    rq = phi @ op.apply(phi) / (phi @ phi)
    assert rq < 0
    spec = sp.negative_spectrum(op)
    assert spec.count() >= 1
    assert spec.lowest <= rq


def test_parity():
    g = sp.GridSpec(1, 256, 1.0)
    x = g.axis()
    Vx = 8 * np.exp(-((x - 0.1) / 0.05) ** 2)
    a = sp.negative_spectrum(sp.build_operator(g, P, V_values=Vx)).eigenvalues
    b = sp.negative_spectrum(sp.build_operator(g, P, V_values=Vx[::-1])).eigenvalues
    np.testing.assert_allclose(a, b, atol=1e-10)


def test_constant_shift():
    g = sp.GridSpec(1, 128, 1.0)
    V = sp.gaussian_well(10.0)
    vals = sp.build_operator(g, P, V).V_values
    a = np.linalg.eigvalsh(sp.build_operator(g, P, V_values=vals).matrix())
    b = np.linalg.eigvalsh(sp.build_operator(g, P, V_values=vals + 3.0).matrix())
    np.testing.assert_allclose(b, a - 3.0, atol=1e-10)


def test_dense_iterative_counts_agree():
    V = sp.gaussian_well(10.0)
    g = sp.grid_for_potential(V, P)
    op = sp.build_operator(g, P, V)
    a = sp.negative_spectrum(op, "dense", threshold=-0.1)
    b = sp.negative_spectrum(op, "iterative", threshold=-0.1)
    assert a.count() == b.count()
    np.testing.assert_allclose(a.eigenvalues, b.eigenvalues, atol=1e-8)
    assert b.residuals.max() <= 1e-8


def test_residuals_and_sorting():
    V = sp.gaussian_well(30.0)
    spec = sp.negative_spectrum(sp.build_operator(sp.grid_for_potential(V, P), P, V))
    assert np.all(np.diff(spec.eigenvalues) >= 0)
    assert spec.residuals.max() <= 1e-8


def test_dense_size_limit():
    g = sp.GridSpec(1, 8192, 1.0)
    with pytest.raises(DomainError):
        sp.negative_spectrum(sp.build_operator(g, P), "dense")


def test_threshold_must_be_nonpositive():
    op = sp.build_operator(sp.GridSpec(1, 64, 1.0), P)
    with pytest.raises(DomainError):
        sp.negative_spectrum(op, threshold=0.5)


def test_riesz_mean_and_counts():
    V = sp.gaussian_well(10.0)
    spec = sp.negative_spectrum(sp.build_operator(sp.grid_for_potential(V, P), P, V))
    neg = -spec.eigenvalues
    assert spec.riesz_mean(1.0) == pytest.approx(neg.sum())
    assert spec.riesz_mean(2.0) == pytest.approx((neg**2).sum())
    assert spec.count(-1.0) == int(np.sum(spec.eigenvalues < -1.0))
    with pytest.raises(DomainError):
        spec.count(1.0)


def test_free_hardy_operator_box_mode():
    # on the torus the Hardy term leaves one negative box mode that fades as the box grows
    lows = []
    for n, L in [(256, 8.0), (1024, 32.0), (2048, 64.0)]:
        spec = sp.negative_spectrum(sp.build_operator(sp.GridSpec(1, n, L), P))
        assert spec.count() == 1
        lows.append(spec.lowest)
    assert lows[0] < lows[1] < lows[2] < 0
    assert lows[1] / lows[0] == pytest.approx(0.5, rel=0.1)


def test_hardy_cap_monotone_same_grid():
    g = sp.GridSpec(1, 256, 1.6)
    V = sp.gaussian_well(10.0)
    base = sp.build_operator(g, P, V)
    cap = base.hardy_values.max()
    a = np.linalg.eigvalsh(base.matrix())[:6]
    b = np.linalg.eigvalsh(sp.build_operator(g, P, V, hardy_cap=4 * cap).matrix())[:6]
    assert np.all(b <= a + 1e-12)


def test_hardy_cap_monotone_under_refinement():
    V = sp.gaussian_well(10.0)
    prev = None
    for n in (256, 512, 1024):
        ev = sp.negative_spectrum(sp.build_operator(sp.GridSpec(1, n, 1.6), P, V)).eigenvalues[:3]
        if prev is not None:
            assert np.all(ev <= prev + 1e-10)
        prev = ev


def test_grid_convergence_gaps_halve():
    V = sp.gaussian_well(10.0)
    lows = [sp.negative_spectrum(sp.build_operator(sp.GridSpec(1, n, 1.6), P, V)).lowest for n in (256, 512, 1024)]
    g1, g2 = abs(lows[1] - lows[0]), abs(lows[2] - lows[1])
    assert g2 <= g1 / 2


def test_grid_convergence_without_hardy():
    V = sp.gaussian_well(10.0)
    lows = [sp.negative_spectrum(sp.build_operator(sp.GridSpec(1, n, 1.6), P, V, hardy=False)).lowest
            for n in (256, 512, 1024)]
    assert abs(lows[2] - lows[1]) <= 1e-10 * abs(lows[2])


def test_potential_integral_closed_forms():
    # int Gaussian^k over R = A^k w sqrt(2 pi / k); square well: 2 R A^k
    g = pf.Gaussian(0.1, 3.0)
    assert sp.potential_integral(g, 3.0, 1) == pytest.approx(27 * 0.1 * np.sqrt(2 * np.pi / 3), rel=1e-8)
    assert sp.potential_integral(sp.square_well(4.0, 0.1), 2.0, 1) == pytest.approx(2 * 0.1 * 16, rel=1e-8)
    assert sp.potential_integral(g, 2.0, 3) == pytest.approx(9 * (np.pi * 0.01) ** 1.5, rel=1e-8)


def test_verify_hlt_zero_potential():
    rep = sp.verify_hlt([("zero", 0.0, pf.Gaussian(0.1, 0.0))], 1.0, 4.0, P, grids=[sp.GridSpec(1, 256, 8.0)])
    row = rep["rows"][0]
    assert row["integral"] == 0.0 and row["ratio"] == 0.0 and rep["passed"]


def test_verify_bs_small_potential():
    V = sp.gaussian_well(0.05)
    rep = sp.verify_bs_count([("g", 0.05, V)], 2.5, 11.8, P)
    row = rep["rows"][0]
    assert row["bound"] < 1 and row["count"] == 0


def test_verify_bs_domain():
    with pytest.raises(DomainError):
        sp.verify_bs_count([], 2.0, 1.0, P)


def test_scaling_tau_one_exact():
    V = sp.gaussian_well(10.0)
    rep = sp.verify_scaling(V, 1.0, P)
    assert rep["count_original"] == rep["count_scaled"]


@pytest.mark.parametrize("tau", [0.25, 4.0])
def test_scaling_dual_grid(tau):
    V = sp.gaussian_well(10.0)
    g1 = sp.grid_for_potential(V, P)
    f = tau ** (1 / (2 * P.s))
    g2 = sp.GridSpec(1, 2 * g1.n_points, g1.box_half_width * f)
    rep = sp.verify_scaling(V, tau, P, grids=(g1, g2))
    assert abs(rep["count_original"] - rep["count_scaled"]) <= 1


def test_depth_ratio_no_jumps_decades():
    wells = [("gaussian", d, sp.gaussian_well(d)) for d in (1.0, 10.0, 100.0)]
    rows = sp.verify_hlt(wells, 1.0, 3.9499811122296213, P)["rows"]
    r = [row["ratio"] for row in rows]
    assert all(max(a, b) / min(a, b) <= 2 for a, b in zip(r, r[1:]))


def test_depth_ratio_continuous_fine_ladder():
    depths = [1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0]
    wells = [("gaussian", d, sp.gaussian_well(d)) for d in depths]
    rows = sp.verify_hlt(wells, 1.0, 3.9499811122296213, P)["rows"]
    r = [row["ratio"] for row in rows]
    assert all(max(a, b) / min(a, b) <= 2 for a, b in zip(r, r[1:]))


def test_iterative_three_dimensional():
    p3 = FracParams(3, 0.5)
    g = sp.GridSpec(3, 32, 2.4)
    spec = sp.negative_spectrum(sp.build_operator(g, p3, sp.gaussian_well(20.0, 0.3)), "iterative")
    assert spec.count() >= 1
    assert spec.residuals.max() <= 1e-8


@pytest.fixture(scope="module")
def sobolev():
    return sp._discrete_sobolev(1, 0.25, 256, 8.0)


def test_discrete_sobolev_maximizer(sobolev):
    c = sobolev(3.0)
    assert sp._sobolev_quotient(sobolev.maximizer, sobolev.A, 3.0, sobolev.h) == pytest.approx(c, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(2.2, 3.9))
def test_discrete_sobolev_is_sup(sobolev, seed, q):
    c = sobolev(q)
    w = np.random.default_rng(seed).standard_normal(256)
    assert sp._sobolev_quotient(w, sobolev.A, q, sobolev.h) <= c * (1 + 1e-12)


def test_discrete_sobolev_provider_cached():
    prov = sp.discrete_sobolev_provider(P)
    assert prov(3.0) == prov(3.0) == sp.discrete_sobolev_constant(P, 3.0)
    with pytest.raises(DomainError):
        prov(2.0)
