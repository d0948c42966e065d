"""Acceptance criteria 1-10, one PASS/FAIL line per criterion."""

import math
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy import integrate

from hltlab import ltchain as lt
from hltlab import profiles as pf
from hltlab import quadform as qf
from hltlab import semigroup as sgm
from hltlab import sobolev3d as sb
from hltlab import spectral as sp
from hltlab.constants import FracParams, hardy_constant, phi_explicit_d3, phi_function

PAIRS = [(1, 0.25), (2, 0.5), (3, 0.5), (3, 0.75)]


@pytest.fixture
def report(capsys):
    def emit(number, title, checks, elapsed, budget):
        checks = dict(checks)
        checks[f"runtime<{budget:g}s"] = elapsed < budget
        failed = [k for k, ok in checks.items() if not ok]
        line = f"criterion {number:2d} {title}: {'PASS' if not failed else 'FAIL'} ({elapsed:.1f}s)"
        if failed:
            line += " failed: " + ", ".join(failed)
        with capsys.disabled():
            print("\n" + line)
        assert not failed, line

    return emit


def test_criterion_01_exact_constants(report):
    t0 = time.perf_counter()
    checks = {"hardy(3,1/2)=2/pi": abs(hardy_constant(FracParams(3, 0.5)) - 2 / math.pi) <= 1e-12}
    for d in range(3, 13):
        checks[f"hardy({d},1)"] = abs(hardy_constant(FracParams(d, 1.0)) - (d - 2) ** 2 / 4) <= 1e-12
    report(1, "exact constants", checks, time.perf_counter() - t0, 1.0)


def test_criterion_02_phi_structure(report):
    t0 = time.perf_counter()
    checks = {}
    for d, s in PAIRS:
        p = FracParams(d, s)
        crit = p.critical_alpha
        checks[f"phi_zero({d},{s})"] = abs(phi_function(crit, p)) <= 1e-10
        alphas = crit * np.arange(1, 201) / 201
        phis = np.array([phi_function(a, p) for a in alphas])
        checks[f"increasing({d},{s})"] = bool(np.all(np.diff(phis) > 0))
        checks[f"negative({d},{s})"] = bool(np.all(phis < 0))
    p3 = FracParams(3, 0.5)
    qs = np.linspace(1.5, 3.0, 52)[1:-1]
    dev = max(abs(abs(phi_function(2 - 3 / q, p3)) - phi_explicit_d3(q)) for q in qs)
    checks["explicit_form_50q"] = dev <= 1e-10
    report(2, "phi structure", checks, time.perf_counter() - t0, 1.0)


def test_criterion_03_integral_representation(report):
    t0 = time.perf_counter()
    checks = {}
    for d, s in PAIRS:
        p = FracParams(d, s)
        for u in [pf.Gaussian(1.0), pf.SmoothBump(0.0, 1.0), pf.PowerCutoff(0.3 * p.critical_alpha, 1.0)]:
            fe = qf.fourier_energy(u, p)
            de = qf.double_integral_energy(u, p)
            checks[f"{u.describe()['family']}({d},{s})"] = abs(de - fe) / fe <= 1e-4
    report(3, "integral representation", checks, time.perf_counter() - t0, 30.0)


def test_criterion_04_ground_state_representation(report):
    t0 = time.perf_counter()
    p = FracParams(3, 0.5)
    checks = {}
    for u in [pf.SmoothBump(0.5, 1.5), pf.SmoothBump(1.0, 2.0), pf.SmoothBump(0.2, 3.0)]:
        g = qf.gsr_energy(u, p)
        h = qf.hardy_form(u, p)
        checks[f"gsr[{u!r}]"] = abs(g - h) / abs(h) <= 1e-3
        for frac in (0.2, 0.4):
            a = frac * p.critical_alpha
            ga = qf.gsr_energy(u, p, a)
            pr = qf.gsr_prediction(u, p, a)
            checks[f"gsr_alpha={frac}[{u!r}]"] = abs(ga - pr) / abs(pr) <= 1e-3
    report(4, "ground-state representation", checks, time.perf_counter() - t0, 30.0)


def test_criterion_05_sobolev3d_identities(report):
    t0 = time.perf_counter()
    checks = {}
    for delta in (1.0, 0.3):
        ident = sb.digamma_identity_checks(0.25, delta, tol=1e-7, tol_double=1e-7)
        for k, v in ident.items():
            checks[f"identity[{k},delta={delta}]"] = v["residual"] <= 1e-7
    num, _ = sb.psi_energy_numeric(0.25, 1e-3, 1.0)
    lim = sb.psi_energy_limit(0.25, 1.0)
    checks["psi_energy_1pct"] = abs(num - lim) / lim <= 1e-2
    r = sb.rho(2.0, 0.25)
    for delta in (1.0, 0.3):
        err = abs(sb.rho_eps_delta(2.0, 0.25, 1e-4, delta) - r) / r
        checks[f"rho_eps_delta(1e-4,delta={delta})<=1e-3"] = err <= 1e-3
    for q in np.linspace(1.5, 3.0, 22)[1:-1]:
        res = sb.sobolev_constant_bound(float(q))
        ok = math.isfinite(res.bound) and res.bound > 0
        ok = ok and abs(res.recompute() - res.bound) <= 1e-12 * res.bound
        checks[f"sobolev(q={q:.4f})"] = ok
    report(5, "sobolev3d identities", checks, time.perf_counter() - t0, 60.0)


def test_criterion_06_lt_chain(report):
    t0 = time.perf_counter()
    checks = {}
    for a in (0.1, 1.0, 3.0):
        quad = integrate.quad(lambda mu: (mu - a) * math.exp(-mu) / mu, a, math.inf, epsabs=0, epsrel=1e-13)[0]
        checks[f"F1(a={a})"] = abs(lt.F1(a) - quad) <= 1e-8 * max(1.0, abs(quad))
        for p_exp in (2.0, 3.5):
            quad = integrate.quad(lambda t: t ** (-p_exp - 1) * (t - a), a, math.inf, epsabs=0, epsrel=1e-13)[0]
            checks[f"power(a={a},p={p_exp})"] = abs(lt.power_integral(a, p_exp) - quad) <= 1e-8 * max(1.0, quad)
    num, closed = lt.tau_beta_identity(2.5, 1.0, FracParams(3, 0.5), sigma=0.5, V=1.0)
    checks["tau_beta_identity"] = abs(num - closed) <= 1e-8 * closed
    for d, s in [(3, 0.5), (1, 0.25)]:
        p = FracParams(d, s)
        for g in (0.5, 1.0, 2.0):
            res = lt.final_lt_constant(g, p)
            checks[f"C({d},{s},gamma={g})finite"] = math.isfinite(res.C_final) and res.C_final > 0
    report(6, "LT constant chain", checks, time.perf_counter() - t0, 10.0)


def test_criterion_07_hardy_lt_desk_scale(report):
    t0 = time.perf_counter()
    p = FracParams(1, 0.25)
    chain = lt.final_lt_constant(1.0, p)
    wells = [(f, dep, (sp.gaussian_well if f == "gaussian" else sp.square_well)(dep))
             for f in ("gaussian", "square") for dep in (1.0, 10.0, 100.0)]
    checks = {}
    for row in sp.verify_hlt(wells, 1.0, chain.C_final, p)["rows"]:
        checks[f"hlt[{row['family']},{row['depth']:g}]"] = row["ratio"] <= 1
    for row in sp.verify_bs_count(wells, chain.p_star, chain.K_prime, p)["rows"]:
        checks[f"bs[{row['family']},{row['depth']:g}]"] = row["passed"]
    for fam, make in (("gaussian", sp.gaussian_well), ("square", sp.square_well)):
        for tau in (0.25, 4.0):
            rep = sp.verify_scaling(make(10.0), tau, p)
            checks[f"scaling[{fam},tau={tau:g}]"] = abs(rep["count_original"] - rep["count_scaled"]) <= 1
    report(7, "Hardy-LT at desk scale", checks, time.perf_counter() - t0, 120.0)


def test_criterion_08_semigroup(report):
    t0 = time.perf_counter()
    p = FracParams(1, 0.25)
    sg = sgm.build_weighted_semigroup(0.75, p, sp.GridSpec(1, 256, 8.0))
    checks = {}
    for row in sgm.check_positivity_contraction(sg, [0.1, 1.0, 10.0])["rows"]:
        checks[f"positive(t={row['t']:g})"] = row["min_entry"] >= -1e-10 * row["max_entry"]
        checks[f"contractive(t={row['t']:g})"] = row["max_column_mass"] <= 1 + 1e-8
    C_prime = lt.default_provider(p, n=256, L=8.0)(sg.q_exp)
    K = lt.heat_constant(C_prime, 0.75, p)
    for row in sgm.check_heat_bound(sg, K)["rows"]:
        checks[f"heat(t={row['t']:g})"] = row["passed"]
    probes = sgm.nash_probe_vectors(sg, 20, 0)
    checks["nash_20_probes"] = len(probes) == 20 and sgm.check_nash_inequality(sg, C_prime, probes)["passed"]
    for amp, a in [(5.0, 0.5), (20.0, 0.5), (5.0, 2.0)]:
        W = pf.SmoothBump(0.5, 2.0, amp)(np.abs(sg.x))
        rep = sgm.check_trace_estimate(sg, W, a)
        checks[f"trace(amp={amp:g},a={a:g})"] = rep["lhs"] <= rep["rhs_quadrature"]
    V = pf.Gaussian(1.0, 3.0)(np.abs(sg.x))
    checks["bs_equivalence"] = sgm.birman_schwinger_equivalence(sg, V)["max_relative_difference"] <= 1e-6
    report(8, "semigroup suite", checks, time.perf_counter() - t0, 120.0)


def test_criterion_09_sharpness(report):
    t0 = time.perf_counter()
    ratios = [r["ratio"] for r in qf.sharpness_sequence(FracParams(3, 0.5), 5)]
    checks = {"strictly_increasing": bool(np.all(np.diff(ratios) > 0)), "finest>0.9": ratios[-1] > 0.9}
    report(9, "sharpness trend", checks, time.perf_counter() - t0, 30.0)


def test_criterion_10_determinism(report, tmp_path):
    t0 = time.perf_counter()
    outs, codes = [], []
    for i in range(2):
        path = tmp_path / f"all{i}.json"
        start = time.perf_counter()
        res = subprocess.run([sys.executable, "-m", "hltlab", "all", "--profile", "quick", "-o", str(path)],
                             capture_output=True, check=False)
        codes.append((res.returncode, time.perf_counter() - start))
        outs.append(path.read_bytes() if path.exists() else b"")
    checks = {
        "exit_0": all(c == 0 for c, _ in codes),
        "under_5_minutes": all(t < 300 for _, t in codes),
        "byte_identical": outs[0] == outs[1] and len(outs[0]) > 0,
    }
    report(10, "determinism", checks, time.perf_counter() - t0, 600.0)
