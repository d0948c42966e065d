import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hltlab import sobolev3d as sb
from hltlab.errors import DomainError

# mpmath quadrature of the defining integral of rho
RHO_ORACLE = {(2.0, 0.25): 0.17897108839705735958, (1.5, 0.25): 0.28566946577146297672,
              (4.0, 0.5): 0.027265958632596614823}
# mpmath: stationary point of the bound objective at q = 2 and the resulting bound
BOUND_Q2 = 20.083057099010972028
LAMBDA_Q2 = 3.5440792102049886705
# mpmath quadrature of the three integrals and the digamma limit
IDENTITY_ORACLE = {
    1.0: (0.2511036270190005546, 0.15507844639772587871, 1.0, 5.959533129692239806),
    0.3: (0.2511036270190005546, 0.15507844639772587871, 0.59047668328055180214, 3.5916322338311725756),
}


@pytest.mark.parametrize("key", list(RHO_ORACLE))
def test_rho_oracle(key):
    assert sb.rho(*key) == pytest.approx(RHO_ORACLE[key], rel=1e-11)


def test_rho_decay():
    a = 0.4
    lam = 1e5
    assert lam ** (1 + a) * sb.rho(lam, a) == pytest.approx(sb.rho_decay_constant(a), rel=1e-6)


def test_rho_monotone():
    lams = np.geomspace(1.01, 100, 30)
    vals = [sb.rho(l, 0.25) for l in lams]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_bound_oracle_q2():
    r = sb.sobolev_constant_bound(2.0)
    assert r.bound == pytest.approx(BOUND_Q2, rel=1e-10)
    assert r.lambda_star == pytest.approx(LAMBDA_Q2, rel=1e-4)
    assert r.recompute() == pytest.approx(r.bound, rel=1e-14)


def test_bound_is_a_minimum():
    r = sb.sobolev_constant_bound(2.4)
    f = lambda lam: sb.bound_prefactor(2.4) * sb.bound_objective(lam, r.alpha)
    assert f(r.lambda_star) <= f(r.lambda_star * 1.01)
    assert f(r.lambda_star) <= f(r.lambda_star / 1.01)


@pytest.fixture(scope="module")
def bound_curve():
    qs = np.linspace(1.5, 3.0, 102)[1:-1]
    return qs, np.array([sb.sobolev_constant_bound(q).bound for q in qs])


def test_bound_finite_on_grid(bound_curve):
    _, b = bound_curve
    assert np.all(np.isfinite(b) & (b > 0))


def test_bound_no_jumps_over_ten_percent(bound_curve):
    _, b = bound_curve
    jumps = np.abs(b[1:] / b[:-1] - 1)
    assert jumps.max() <= 0.1


def test_bound_log_convex(bound_curve):
    # an optimizer failure would show up as a kink breaking convexity of log bound
    _, b = bound_curve
    assert np.all(np.diff(np.log(b), 2) > 0)


def test_phi_consistency():
    for q in (1.6, 2.0, 2.7):
        a, b = sb.phi_consistency(q)
        assert a == pytest.approx(b, abs=1e-13)


@pytest.mark.parametrize("q", [1.5, 3.0, 4.0])
def test_q_range(q):
    with pytest.raises(DomainError):
        sb.sobolev_constant_bound(q)


@pytest.mark.parametrize("delta", [1.0, 0.3])
def test_identities_oracle(delta):
    rep = sb.digamma_identity_checks(0.25, delta)
    i1, i2, i3, lim = IDENTITY_ORACLE[delta]
    assert rep["square_quotient"]["lhs"] == pytest.approx(i1, abs=1e-9)
    assert rep["edge_quotient"]["lhs"] == pytest.approx(i2, abs=1e-9)
    assert rep["power_double"]["lhs"] == pytest.approx(i3, abs=1e-8)
    assert sb.psi_energy_limit(0.25, delta) == pytest.approx(lim, rel=1e-13)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.05, 3.0))
def test_energy_limit_below_concavity_bound(alpha, delta):
    assert sb.psi_energy_limit(alpha, delta) <= sb.psi_energy_concavity_bound(alpha, delta) * (1 + 1e-14)


def test_psi_energy_numeric_delta_one():
    num, blocks = sb.psi_energy_numeric(0.25, 1e-3, 1.0)
    assert num == pytest.approx(sb.psi_energy_limit(0.25, 1.0), rel=1e-2)
    assert set(blocks) == {"inner_square", "inner_outer", "plateau_square", "plateau_edge"}


def test_rho_eps_delta_error_shrinks():
    r = sb.rho(2.0, 0.25)
    errs = [abs(sb.rho_eps_delta(2.0, 0.25, e, 1.0) - r) / r for e in (1e-2, 1e-3, 1e-4, 1e-5)]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_rho_eps_delta_tolerance_at_small_eps():
    # eps = 1e-4, delta = 0.3 must reproduce rho to 1e-3 relative
    r = sb.rho(2.0, 0.25)
    assert abs(sb.rho_eps_delta(2.0, 0.25, 1e-4, 0.3) - r) <= 1e-3 * r


def test_rho_eps_delta_delta_independence():
    r = sb.rho(2.0, 0.25)
    a = sb.rho_eps_delta(2.0, 0.25, 1e-4, 0.1)
    b = sb.rho_eps_delta(2.0, 0.25, 1e-4, 0.5)
    assert abs(a - b) <= 1e-3 * r
