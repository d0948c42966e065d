"""Command-line front end: ``hltlab <command> [options]``.

Every command prints (or writes) one JSON document whose ``passed`` field
records whether all asserted checks held. Exit status is 0 when they did,
1 when a check failed (the document then carries a ``failures`` manifest),
2 for invalid input and 3 for numerical errors.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from . import ltchain as lt
from . import profiles as pf
from . import quadform as qf
from . import semigroup as sgm
from . import sobolev3d as sb
from . import spectral as sp
from .constants import (
    FracParams,
    hardy_constant,
    kernel_normalization,
    phi_explicit_d3,
    phi_function,
    phi_limit_zero,
)
from .errors import DomainError, HLTError

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_ERROR = 0, 1, 2, 3

PAIRS = [(1, 0.25), (2, 0.5), (3, 0.5), (3, 0.75)]

PROFILES = {
    "quick": {
        "alpha_grid": 200,
        "q_grid": 20,
        "gammas": [0.5, 1.0, 2.0],
        "depths": [1.0, 10.0, 100.0],
        "sharpness_members": 5,
        "eps_rho": [1e-2, 1e-3, 1e-4],
        "d3_spectral": False,
    },
    "full": {
        "alpha_grid": 1000,
        "q_grid": 100,
        "gammas": [0.25, 0.5, 1.0, 2.0, 4.0],
        "depths": [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0],
        "sharpness_members": 7,
        "eps_rho": [1e-2, 1e-3, 1e-4, 1e-5],
        "d3_spectral": True,
    },
}


# ------------------------------------------------------------------ output
def _fmt_float(x):
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def to_json(obj, indent=0):
    """Deterministic JSON with floats printed to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.floating, np.integer)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(to_json(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + to_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, np.ndarray):
        return to_json(obj.tolist(), indent)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _csv_text(rows, columns):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt_float(float(r[c])).strip('"') if isinstance(r[c], float) else r[c] for c in columns])
    return buf.getvalue()


def _threads():
    try:
        return max(1, int(os.environ.get("HLT_NUM_THREADS", "1")))
    except ValueError:
        raise DomainError("HLT_NUM_THREADS must be an integer")


def _pmap(func, items):
    """Order-stable map, threaded up to HLT_NUM_THREADS."""
    items = list(items)
    n = _threads()
    if n == 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(func, items))


class Checks:
    """Collects named pass/fail assertions into a failure manifest."""

    def __init__(self):
        self.items = []

    def add(self, name, ok, **detail):
        self.items.append({"check": name, "passed": bool(ok), **detail})
        return bool(ok)

    def merge(self, prefix, other):
        for it in other.items:
            self.items.append({**it, "check": f"{prefix}.{it['check']}"})

    @property
    def passed(self):
        return all(it["passed"] for it in self.items)

    def failures(self):
        return [it for it in self.items if not it["passed"]]


def _finish(section, checks):
    section["checks"] = checks.items
    section["passed"] = checks.passed
    return section


# ---------------------------------------------------------------- commands
def cmd_constants(d, s, alpha_grid=200):
    p = FracParams(d, s)
    checks = Checks()
    C = hardy_constant(p)
    out = {"d": p.d, "s": p.s, "hardy_constant": C, "two_star": p.two_star, "critical_alpha": p.critical_alpha}
    out["kernel_normalization"] = kernel_normalization(p) if p.s < 1 else None
    if p.d == 3 and p.s == 0.5:
        checks.add("hardy_2_over_pi", abs(C - 2 / math.pi) <= 1e-12, value=C)
    if p.s == 1:
        checks.add("hardy_s1", abs(C - (p.d - 2) ** 2 / 4) <= 1e-12, value=C)
    crit = p.critical_alpha
    at_crit = phi_function(crit, p)
    checks.add("phi_zero_at_critical", abs(at_crit) <= 1e-10, value=at_crit)
    alphas = crit * (np.arange(1, alpha_grid + 1) / (alpha_grid + 1))
    phis = np.array([phi_function(a, p) for a in alphas])
    checks.add("phi_strictly_increasing", bool(np.all(np.diff(phis) > 0)))
    checks.add("phi_negative", bool(np.all(phis < 0)))
    out["phi_limit_zero"] = phi_limit_zero(p)
    out["phi_at_critical"] = at_crit
    out["phi_samples"] = {"alpha": alphas[:: max(1, alpha_grid // 10)].tolist(),
                          "phi": phis[:: max(1, alpha_grid // 10)].tolist()}
    if p.d == 3 and p.s == 0.5:
        qs = np.linspace(1.5, 3.0, 52)[1:-1]
        dev = max(abs(abs(phi_function(2 - 3 / q, p)) - phi_explicit_d3(q)) for q in qs)
        checks.add("phi_explicit_form", dev <= 1e-10, max_deviation=dev)
    return _finish(out, checks)


def cmd_sobolev(qs):
    checks = Checks()
    rows = []
    for q in qs:
        r = sb.sobolev_constant_bound(q)
        row = r.to_dict(with_trace=False)
        rows.append(row)
        checks.add(f"finite_q={q:.6g}", math.isfinite(r.bound) and r.bound > 0, bound=r.bound)
        rel = abs(r.recompute() - r.bound) / r.bound
        checks.add(f"self_consistent_q={q:.6g}", rel <= 1e-12, deviation=rel)
        checks.add(f"feasible_q={q:.6g}", r.rho_at_star < r.phi_abs)
    return _finish({"results": rows}, checks)


def cmd_lt_constant(d, s, gammas, sobolev_n=256, sobolev_L=8.0):
    p = FracParams(d, s)
    checks = Checks()
    provider = lt.default_provider(p) if (p.d, p.s) == (3, 0.5) else lt.default_provider(p, n=sobolev_n, L=sobolev_L)
    rows = []
    for g in gammas:
        if not g > 0:
            raise DomainError("gamma must be positive")
        res = lt.final_lt_constant(g, p, provider)
        rows.append(res.to_dict(with_trace=False))
        checks.add(f"finite_gamma={g:.6g}", math.isfinite(res.log_C_final), log_C=res.log_C_final)
    return _finish({"d": p.d, "s": p.s, "results": rows}, checks)


def _families(p):
    return [pf.Gaussian(1.0), pf.SmoothBump(0.0, 1.0), pf.PowerCutoff(0.3 * p.critical_alpha, 1.0)]


def cmd_verify_hardy(pairs, sharpness_members=5):
    checks = Checks()
    rows = []
    for d, s in pairs:
        p = FracParams(d, s)

        def one(u, p=p):
            fe = qf.fourier_energy(u, p)
            de = qf.double_integral_energy(u, p)
            h = fe - hardy_constant(p) * qf.weighted_norm(u, p)
            return {"d": p.d, "s": p.s, "family": u.describe(), "fourier_energy": fe, "double_integral": de,
                    "relative_difference": abs(de - fe) / fe, "hardy_form": h}

        for row in _pmap(one, _families(p)):
            rows.append(row)
            tag = f"d={d},s={s},{row['family']['family']}"
            checks.add(f"routes_agree[{tag}]", row["relative_difference"] <= 1e-4, value=row["relative_difference"])
            checks.add(f"hardy_positive[{tag}]", row["hardy_form"] >= -1e-8 * row["fourier_energy"],
                       value=row["hardy_form"])
    sharp = {}
    for d, s in [(3, 0.5), (1, 0.25)]:
        seq = qf.sharpness_sequence(FracParams(d, s), sharpness_members)
        ratios = [r["ratio"] for r in seq]
        sharp[f"d={d},s={s}"] = seq
        checks.add(f"sharpness_increasing[d={d},s={s}]", bool(np.all(np.diff(ratios) > 0)))
        checks.add(f"sharpness_below_one[d={d},s={s}]", max(ratios) <= 1)
        if (d, s) == (3, 0.5):
            checks.add("sharpness_exceeds_0.9", ratios[-1] > 0.9, value=ratios[-1])
    return _finish({"energies": rows, "sharpness": sharp}, checks)


def cmd_verify_gsr():
    p = FracParams(3, 0.5)
    checks = Checks()
    rows = []
    for u in [pf.SmoothBump(0.5, 1.5), pf.SmoothBump(1.0, 2.0), pf.SmoothBump(0.2, 3.0)]:
        g = qf.gsr_energy(u, p)
        h = qf.hardy_form(u, p)
        h1 = qf.radial_hardy_form_d3(u)
        row = {"family": u.describe(), "gsr_energy": g, "hardy_form": h, "radial_1d": h1,
               "relative_difference": abs(g - h) / abs(h), "alpha_rows": []}
        name = repr(u)
        checks.add(f"gsr[{name}]", row["relative_difference"] <= 1e-3, value=row["relative_difference"])
        checks.add(f"radial_reduction[{name}]", abs(h1 - h) / abs(h) <= 1e-6, value=abs(h1 - h) / abs(h))
        for frac in (0.2, 0.4):
            a = frac * p.critical_alpha
            ga = qf.gsr_energy(u, p, a)
            pr = qf.gsr_prediction(u, p, a)
            rel = abs(ga - pr) / abs(pr)
            row["alpha_rows"].append({"alpha": a, "gsr_energy": ga, "prediction": pr, "relative_difference": rel})
            checks.add(f"gsr_alpha={a:.3g}[{name}]", rel <= 1e-3, value=rel)
        rows.append(row)
    return _finish({"rows": rows}, checks)


def cmd_verify_ims(d=3, s=0.5):
    p = FracParams(d, s)
    checks = Checks()
    u = pf.Gaussian(1.0)
    part = qf.two_piece_partition(0.5, 1.0)
    rep = qf.ims_decomposition(u, part, p)
    rel = abs(rep["lhs"] - rep["rhs"]) / abs(rep["lhs"])
    checks.add("ims_identity", rel <= 1e-3, value=rel)
    checks.add("localization_nonnegative", rep["localization"] >= 0, value=rep["localization"])
    trivial = qf.ims_decomposition(u, [pf.Callable(lambda r: np.ones_like(np.asarray(r, dtype=float)),
                                                   origin_coefficient=1.0, name="one")], p)
    checks.add("trivial_partition", trivial["lhs"] == trivial["rhs"])
    return _finish({"d": d, "s": s, **rep, "relative_difference": rel}, checks)


def cmd_sobolev3d(eps_rho, q_grid=20):
    """Digamma identities, the psi energy limit and the rho^{eps,delta} limit."""
    checks = Checks()
    out = {}
    ident = sb.digamma_identity_checks(0.25, 1.0)
    out["digamma_identities"] = ident
    for k, v in ident.items():
        checks.add(f"identity[{k}]", v["residual"] <= 1e-7, value=v["residual"])
    alpha, delta = 0.25, 1.0
    num, blocks = sb.psi_energy_numeric(alpha, 1e-3, delta)
    lim = sb.psi_energy_limit(alpha, delta)
    rel = abs(num - lim) / lim
    out["psi_energy"] = {"alpha": alpha, "delta": delta, "epsilon": 1e-3, "numeric": num, "limit": lim,
                         "relative_difference": rel, "blocks": blocks}
    checks.add("psi_energy_1pct", rel <= 1e-2, value=rel)
    lam = 2.0
    r = sb.rho(lam, alpha)
    errs = [abs(sb.rho_eps_delta(lam, alpha, e, delta) - r) / r for e in eps_rho]
    out["rho_eps_delta"] = {"lambda": lam, "alpha": alpha, "delta": delta, "epsilon": list(eps_rho),
                            "relative_error": errs}
    # the limit statement: errors shrink monotonically along the epsilon ladder
    checks.add("rho_eps_delta_converging", bool(np.all(np.diff(errs) < 0)), errors=errs)
    qs = np.linspace(1.5, 3.0, q_grid + 2)[1:-1]
    sob = cmd_sobolev([float(q) for q in qs])
    out["sobolev_bound"] = sob["results"]
    for it in sob["checks"]:
        checks.add("sobolev." + it["check"], it["passed"])
    return _finish(out, checks)


def _wells(families, depths):
    out = []
    for f in families:
        for dep in depths:
            if f == "gaussian":
                out.append((f, dep, sp.gaussian_well(dep)))
            elif f == "square":
                out.append((f, dep, sp.square_well(dep)))
            else:
                raise DomainError(f"unknown well family {f!r}")
    return out


LT_COLUMNS = ["family", "depth", "n_points", "L", "count", "riesz_mean", "integral", "constant", "ratio"]


def cmd_lt_verify(d, s, gamma, families, depths, taus=(0.25, 4.0), mode="dense"):
    p = FracParams(d, s)
    if not gamma > 0:
        raise DomainError("gamma must be positive (gamma = 0 is not covered)")
    checks = Checks()
    chain = lt.final_lt_constant(gamma, p)
    wells = _wells(families, depths)
    grids = None
    if p.d != 1:
        mode = "iterative"
        grids = [sp.GridSpec(p.d, 32, 8 * sp._support_radius(V)) for _, _, V in wells]
    hlt = sp.verify_hlt(wells, gamma, chain.C_final, p, grids=grids, mode=mode)
    for row in hlt["rows"]:
        checks.add(f"hlt[{row['family']},{row['depth']:g}]", row["ratio"] <= 1, value=row["ratio"])
    bs = sp.verify_bs_count(wells, chain.p_star, chain.K_prime, p, grids=grids, mode=mode)
    for row in bs["rows"]:
        checks.add(f"bs_count[{row['family']},{row['depth']:g}]", row["passed"], count=row["count"],
                   bound=row["bound"])
    scaling = []
    if p.d == 1:
        for fam in families:
            V = _wells([fam], [10.0])[0][2]
            for tau in taus:
                rep = sp.verify_scaling(V, tau, p, mode=mode)
                rep["family"] = fam
                scaling.append(rep)
                checks.add(f"scaling[{fam},tau={tau:g}]", rep["passed"],
                           counts=[rep["count_original"], rep["count_scaled"]])
    out = {"d": p.d, "s": p.s, "gamma": gamma, "C_final": chain.C_final, "p_star": chain.p_star,
           "K_prime": chain.K_prime, "rows": hlt["rows"], "bs_count": bs["rows"], "scaling": scaling}
    return _finish(out, checks)


def cmd_heat_verify(beta, d, s, n, L=8.0, seed=0):
    p = FracParams(d, s)
    checks = Checks()
    grid = sp.GridSpec(d, n, L)
    sg = sgm.build_weighted_semigroup(beta, p, grid)
    checks.add("Q_nonnegative", sg.min_eigenvalue >= -1e-8, value=sg.min_eigenvalue)
    checks.add("Q_symmetric", float(np.max(np.abs(sg.Q - sg.Q.T))) <= 1e-10)
    pos = sgm.check_positivity_contraction(sg, [0.1, 1.0, 10.0])
    checks.add("positivity_contraction", pos["passed"])
    # the discrete Sobolev constant of this very grid
    C_prime = lt.default_provider(p, n=n, L=L)(sg.q_exp)
    K = lt.heat_constant(C_prime, beta, p)
    heat = sgm.check_heat_bound(sg, K, sg.p_exp, (0.01, 0.1, 1.0, 10.0))
    checks.add("heat_bound", heat["passed"])
    probes = sgm.nash_probe_vectors(sg, 20, seed)
    nash = sgm.check_nash_inequality(sg, C_prime, probes)
    checks.add("nash", nash["passed"])
    chain = sgm.nash_heat_chain(sg, probes)
    checks.add("nash_heat_chain", chain["passed"])
    traces = []
    for amp, a in [(5.0, 0.5), (20.0, 0.5), (5.0, 2.0)]:
        W = pf.SmoothBump(0.5, 2.0, amp)(np.abs(sg.x))
        rep = sgm.check_trace_estimate(sg, W, a)
        rep["amplitude"] = amp
        traces.append(rep)
        checks.add(f"trace[amp={amp:g},a={a:g}]", rep["passed"], ratio=rep["ratio"])
    V = pf.Gaussian(1.0, 3.0)(np.abs(sg.x))
    bs = sgm.birman_schwinger_equivalence(sg, V)
    checks.add("birman_schwinger_equivalence", bs["passed"], value=bs["max_relative_difference"])
    out = {"beta": beta, "d": d, "s": s, "n": n, "L": L, "p": sg.p_exp, "q": sg.q_exp,
           "min_eigenvalue_Q": sg.min_eigenvalue, "sobolev_const": C_prime, "K": K,
           "positivity_contraction": pos["rows"], "heat_bound": heat["rows"],
           "nash_min_slack": min(r["slack"] for r in nash["rows"]),
           "nash_heat_chain": {"C_prime_probe": chain["C_prime_probe"], "K": chain["K"], "rows": chain["rows"]},
           "trace": traces, "birman_schwinger": bs}
    return _finish(out, checks)


def cmd_all(profile="quick", seed=0):
    cfg = PROFILES[profile]
    checks = Checks()
    out = {"profile": profile, "version": __version__}
    sections = [
        ("constants", lambda: {f"d={d},s={s}": cmd_constants(d, s, cfg["alpha_grid"]) for d, s in PAIRS
                               + [(d, 1.0) for d in range(3, 13)]}),
        ("verify_hardy", lambda: cmd_verify_hardy(PAIRS, cfg["sharpness_members"])),
        ("verify_gsr", cmd_verify_gsr),
        ("verify_ims", cmd_verify_ims),
        ("sobolev3d", lambda: cmd_sobolev3d(cfg["eps_rho"], cfg["q_grid"])),
        ("lt_constant", lambda: {f"d={d},s={s}": cmd_lt_constant(d, s, cfg["gammas"]) for d, s in
                                 [(3, 0.5), (1, 0.25)]}),
        ("lt_verify", lambda: cmd_lt_verify(1, 0.25, 1.0, ["gaussian", "square"], cfg["depths"])),
        ("heat_verify", lambda: cmd_heat_verify(0.75, 1, 0.25, 256, seed=seed)),
    ]
    if cfg["d3_spectral"]:
        sections.append(("lt_verify_d3", lambda: cmd_lt_verify(3, 0.5, 1.0, ["gaussian"], [10.0, 50.0])))
    for name, fn in sections:
        res = fn()
        out[name] = res
        parts = res.items() if "passed" not in res else [(None, res)]
        for sub, r in parts:
            for it in r["checks"]:
                prefix = name if sub is None else f"{name}.{sub}"
                checks.add(f"{prefix}.{it['check']}", it["passed"])
    out["passed"] = checks.passed
    out["failures"] = checks.failures()
    return out


# ---------------------------------------------------------------- parsing
def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def _strings(text):
    return [x.strip() for x in text.split(",") if x.strip()]


def build_parser():
    ap = argparse.ArgumentParser(prog="hltlab", description="Hardy-Lieb-Thirring numerical laboratory")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", "-o", help="write the result here instead of stdout")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized probe sets")
        return p

    p = common(sub.add_parser("constants", help="Hardy constant, normalization and Phi structure"))
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--alpha-grid", type=int, default=200)

    p = common(sub.add_parser("sobolev-constant", help="explicit Sobolev bound for d = 3, s = 1/2"))
    p.add_argument("--q", type=_floats, required=True, help="exponent(s) in (3/2, 3)")

    p = common(sub.add_parser("lt-constant", help="Lieb-Thirring constant chain"))
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--gamma", type=_floats, required=True)

    p = common(sub.add_parser("verify-hardy", help="two-route energies, Hardy positivity and sharpness"))
    p.add_argument("--d", type=int)
    p.add_argument("--s", type=float)

    common(sub.add_parser("verify-gsr", help="ground-state representation at d = 3, s = 1/2"))

    p = common(sub.add_parser("verify-ims", help="IMS localization identity"))
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--s", type=float, default=0.5)

    p = common(sub.add_parser("lt-verify", help="Hardy-Lieb-Thirring inequality on discretized wells"))
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--s", type=float, default=0.25)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--family", type=_strings, default=["gaussian", "square"])
    p.add_argument("--depths", type=_floats, default=[1.0, 10.0, 100.0])
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = common(sub.add_parser("heat-verify", help="weighted semigroup checks"))
    p.add_argument("--beta", type=float, default=0.75)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--s", type=float, default=0.25)
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--L", type=float, default=8.0)

    p = common(sub.add_parser("all", help="run the whole verification suite"))
    p.add_argument("--profile", choices=sorted(PROFILES), default="quick")
    return ap


def run(args):
    c = args.command
    if c == "constants":
        return cmd_constants(args.d, args.s, args.alpha_grid)
    if c == "sobolev-constant":
        return cmd_sobolev(args.q)
    if c == "lt-constant":
        return cmd_lt_constant(args.d, args.s, args.gamma)
    if c == "verify-hardy":
        if (args.d is None) != (args.s is None):
            raise DomainError("give both --d and --s, or neither")
        pairs = PAIRS if args.d is None else [(args.d, args.s)]
        return cmd_verify_hardy(pairs)
    if c == "verify-gsr":
        return cmd_verify_gsr()
    if c == "verify-ims":
        return cmd_verify_ims(args.d, args.s)
    if c == "lt-verify":
        return cmd_lt_verify(args.d, args.s, args.gamma, args.family, args.depths)
    if c == "heat-verify":
        return cmd_heat_verify(args.beta, args.d, args.s, args.n, args.L, args.seed)
    if c == "all":
        return cmd_all(args.profile, args.seed)
    raise DomainError(f"unknown command {c!r}")


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        result = run(args)
    except (DomainError, ValueError) as exc:
        sys.stderr.write(f"hltlab: invalid input: {exc}\n")
        return EXIT_INVALID
    except (HLTError, ArithmeticError) as exc:
        manifest = {"passed": False, "error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(to_json(manifest) + "\n")
        return EXIT_ERROR
    if "failures" not in result:
        result["failures"] = [it for it in result.get("checks", []) if not it["passed"]]
    if getattr(args, "format", "json") == "csv":
        text = _csv_text(result["rows"], LT_COLUMNS)
    else:
        text = to_json(result) + "\n"
    _emit(text, args.output)
    if not result["passed"]:
        sys.stderr.write(to_json({"failures": result["failures"]}) + "\n")
        return EXIT_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
