"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL
line with its measured numbers.  The epsilon-ladder experiment (the most
expensive ingredient) runs once per session and is shared by the
conservation, remainder-scaling, and convergence-trend criteria.
"""

import time

import numpy as np
import pytest

from semiclab.estimates import (
    gaussian_integral_check,
    gaussian_integral_sweep,
    interpolation_check,
)
from semiclab.harness import ExperimentConfig, run_convergence_experiment
from semiclab.hartree import HartreeConfig, evolve_hartree
from semiclab.phasespace import make_grid
from semiclab.potential import FdllDecomposition, RadialPotential
from semiclab.quantum import (
    WignerFunction,
    build_random_mixed_state,
    build_thermal_state,
    hs_distance,
    l2_distance,
    wigner_transform,
    weyl_quantize,
)
from semiclab.vlasov import VlasovConfig, evolve_vlasov

from tests.test_estimates import FROZEN_SWEEP_SUP

POT = RadialPotential(0.25, +1, d=1)


def emit(name, ok, detail):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok


@pytest.fixture(scope="module")
def random_corpus():
    grid = make_grid(1, 16.0, 128, 1.0 / 16.0)
    return [(build_random_mixed_state(grid, 16, seed=s), grid) for s in range(20)]


@pytest.fixture(scope="module")
def ladder_report():
    cfg = ExperimentConfig()  # defaults: N in {8,...,128}, alpha=0.25, gamma=+1
    t0 = time.perf_counter()
    report = run_convergence_experiment(cfg)
    report.context["wall_time_s"] = time.perf_counter() - t0
    return report


def test_transform_identity(random_corpus):
    t0 = time.perf_counter()
    worst = 0.0
    for omega, grid in random_corpus:
        W = wigner_transform(omega)
        back = weyl_quantize(W, omega.N)
        worst = max(worst, hs_distance(omega, back))
        W2 = wigner_transform(back)
        worst = max(worst, l2_distance(W, W2))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-12 and elapsed < 10.0
    assert emit("transform identity (Weyl o Wigner = id, 20 states, M=128)",
                ok, f"worst roundtrip error {worst:.2e}, {elapsed:.1f} s")


def test_norm_identity(random_corpus):
    worst = 0.0
    for omega, grid in random_corpus:
        W = wigner_transform(omega)
        hs = grid.h * np.linalg.norm(omega.kernel)
        worst = max(worst, abs(hs - np.sqrt(omega.N) * W.l2_norm()) / hs)
    ok = worst < 1e-10
    assert emit("norm identity ||omega||_HS = sqrt(N) ||W||_L2",
                ok, f"worst relative error {worst:.2e}")


def test_normalization(random_corpus):
    worst = 0.0
    states = [om for om, _ in random_corpus]
    for N, T in ((8, 0.1), (16, 0.2), (32, 0.5)):
        grid = make_grid(1, 16.0, max(128, 16 * N), 1.0 / N)
        states.append(build_thermal_state(grid, N, trap_strength=0.25, T=T))
    for omega in states:
        W = wigner_transform(omega)
        worst = max(worst, abs(W.mass - 1.0),
                    abs(W.mass - omega.grid.eps * omega.trace))
    ok = worst < 1e-8
    assert emit("normalization integral W = eps tr(omega) = 1",
                ok, f"worst deviation {worst:.2e} over {len(states)} states")


def test_fdll_reconstruction():
    t0 = time.perf_counter()
    worst = 0.0
    xs = np.geomspace(0.05, 10.0, 50)
    for alpha in (0.1, 0.25, 0.4):
        decomp = FdllDecomposition(RadialPotential(alpha))
        recon = np.array([decomp.reconstruct(x) for x in xs])
        worst = max(worst, float(np.abs(recon / xs ** (-alpha) - 1.0).max()))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-3 and elapsed < 5.0
    assert emit("radial-potential reconstruction over [0.05, 10]",
                ok, f"worst relative error {worst:.2e}, {elapsed:.1f} s")


def test_gaussian_integral_estimate():
    rep = gaussian_integral_check(np.zeros(3), np.array([2.0, 0, 0]), 0.3, 1.1, 0, 0)
    closed_ok = rep.passed
    sup, reports = gaussian_integral_sweep()
    finite = np.isfinite(sup) and all(np.isfinite(r.ratio) for r in reports)
    frozen_ok = abs(sup / FROZEN_SWEEP_SUP - 1.0) < 1e-6
    ok = closed_ok and finite and frozen_ok
    assert emit("Gaussian product-integral estimate",
                ok, f"closed-form match {rep.ratio:.4f} vs pi^1.5/(s(1-s)); "
                    f"sweep sup {sup:.4f} (frozen {FROZEN_SWEEP_SUP:.4f})")


def test_interpolation_inequality():
    violations = []
    grid = make_grid(1, 16.0, 256, 1.0 / 16.0)
    x, v = grid.x_nodes[:, None], grid.v_nodes[None, :]
    corpus = {
        "gaussian": WignerFunction(grid, np.exp(-(x**2) - v**2)),
        "anisotropic": WignerFunction(grid, np.exp(-0.3 * x**2 - 4 * v**2)),
        "box": WignerFunction(grid, ((np.abs(x) < 2) & (np.abs(v) < 0.8)).astype(float)),
        "thermal": wigner_transform(build_thermal_state(grid, 16, 0.25, 0.1)),
    }
    evolved = evolve_vlasov(corpus["thermal"],
                            VlasovConfig(dt=1 / 64, t_final=0.5, potential=POT),
                            sample_times=[0.5])[-1][1]
    corpus["evolved"] = evolved
    checked = 0
    for name, W in corpus.items():
        for m in (0.5, 1.0, 2.0, 4.0):
            rep = interpolation_check(W, m)
            checked += 1
            if not rep.passed:
                violations.append((name, m, rep.ratio))
    ok = not violations
    assert emit("interpolation inequality (proof-derived constant)",
                ok, f"{checked} checks, violations: {violations or 'none'}")


def test_free_transport():
    t0 = time.perf_counter()
    grid = make_grid(1, 16.0, 256, 1.0 / 16.0)
    x, v = grid.x_nodes[:, None], grid.v_nodes[None, :]
    W0 = WignerFunction(grid, np.exp(-(x**2) / 0.5 - v**2 / 0.1))
    cfg = VlasovConfig(dt=1.0 / 64.0, t_final=1.0, potential=None)
    traj = evolve_vlasov(W0, cfg, sample_times=[0.25, 0.5, 1.0])
    worst = 0.0
    for t, Wt in traj:
        exact = np.zeros_like(Wt.values)
        for img in range(-3, 4):
            exact += np.exp(-((x - 2 * v * t - img * grid.L) ** 2) / 0.5 - v**2 / 0.1)
        worst = max(worst, float(np.abs(Wt.values - exact).max()))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-12 and elapsed < 5.0
    assert emit("free transport reproduces W0(x - 2vt, v)",
                ok, f"worst error {worst:.2e} at t in {{0.25, 0.5, 1}}, {elapsed:.1f} s")


def test_conservation(ladder_report):
    # per-module budgets over t in [0, 1] at defaults, audited on every rung
    n_steps = round(1.0 / ladder_report.config["dt"])
    worst = {"trace": 0.0, "purity": 0.0, "occupation": 0.0, "h_energy": 0.0,
             "mass": 0.0, "v_energy": 0.0}
    for rung in ladder_report.rungs:
        cons = rung["conservation"]
        tr0, pu0 = rung["N"], cons[0]["hartree_purity"]
        he0, ve0 = cons[0]["hartree_energy"], cons[0]["vlasov_energy"]
        occ0 = (cons[0]["hartree_occ_min"], cons[0]["hartree_occ_max"])
        for row in cons:
            worst["trace"] = max(worst["trace"], abs(row["hartree_trace"] - tr0))
            worst["purity"] = max(worst["purity"], abs(row["hartree_purity"] - pu0))
            worst["occupation"] = max(
                worst["occupation"],
                max(occ0[0] - row["hartree_occ_min"], 0.0),
                max(row["hartree_occ_max"] - occ0[1], 0.0),
            )
            worst["h_energy"] = max(worst["h_energy"], abs(row["hartree_energy"] - he0))
            worst["mass"] = max(worst["mass"], abs(row["vlasov_mass"] - 1.0))
            worst["v_energy"] = max(worst["v_energy"], abs(row["vlasov_energy"] - ve0))
    ok = (worst["trace"] < 1e-10 * n_steps
          and worst["purity"] < 1e-10 * n_steps
          and worst["occupation"] < 1e-6
          and worst["h_energy"] < 1e-4
          and worst["mass"] < 1e-8 * n_steps
          and worst["v_energy"] < 1e-4)
    assert emit("conservation drifts over [0, 1] at defaults", ok,
                " ".join(f"{k}={v:.2e}" for k, v in worst.items()))


def test_solver_order_richardson():
    grid = make_grid(1, 16.0, 256, 1.0 / 16.0)
    omega0 = build_thermal_state(grid, 16, trap_strength=0.25, T=0.1)
    W0 = wigner_transform(omega0)
    T = 0.5

    def hartree_final(dt):
        return evolve_hartree(omega0, HartreeConfig(dt=dt, t_final=T, potential=POT))[-1][1]

    a, b, c = (hartree_final(1 / 2**k) for k in (6, 7, 8))
    hartree_ratio = hs_distance(a, b) / hs_distance(b, c)

    def vlasov_final(dt):
        return evolve_vlasov(W0, VlasovConfig(dt=dt, t_final=T, potential=POT))[-1][1]

    # coarser triplet: keeps the splitting error above the fixed-grid
    # interpolation floor so the time order is what gets measured
    a, b, c = (vlasov_final(1 / 2**k) for k in (4, 5, 6))
    vlasov_ratio = l2_distance(a, b) / l2_distance(b, c)

    ok = 3.5 <= hartree_ratio <= 4.5 and 3.5 <= vlasov_ratio <= 4.5
    assert emit("dt-halving Richardson ratios (order 2)",
                ok, f"hartree {hartree_ratio:.3f}, vlasov {vlasov_ratio:.3f}")


def test_remainder_scaling(ladder_report):
    # Criterion as specified: tr|B|/(N eps^2) bounded with ladder max/min < 5
    # at t in {0.25, 0.5}.  The d=1 measurement gives tr|B| ~ 0.4 eps^2 with
    # an N-independent prefactor, so the reported ratio decays like eps and
    # the max/min across a 16x ladder sits near 16; the bound "<= constant"
    # holds (the proof-level envelope N eps^2 is satisfied with huge room),
    # but the constancy operationalization cannot hold in d=1.
    rows = []
    for rung in ladder_report.rungs:
        if not rung["hypotheses_ok"]:
            continue
        for row in rung["remainder"]:
            rows.append((rung["N"], row["t"], row["ratio_B"]))
    ratios = [r for _, _, r in rows]
    bounded = max(ratios) < 1.0  # far below any O(1) envelope constant
    spread = max(ratios) / min(ratios)
    table = "; ".join(f"N={n} t={t}: {r:.3e}" for n, t, r in rows)
    ok = bounded and spread < 5.0
    emit("remainder scaling tr|B|/(N eps^2) across the ladder", ok,
         f"max/min = {spread:.2f} (bounded above: {bounded}); {table}")
    assert bounded, "remainder ratio exceeded the envelope bound"
    assert spread < 5.0, (
        f"ladder max/min {spread:.2f} >= 5: tr|B| scales as eps^2 with an "
        "N-independent constant in d=1, so tr|B|/(N eps^2) ~ eps decays "
        "across the ladder instead of staying constant"
    )


def test_convergence_trend(ladder_report):
    fits = ladder_report.fits
    trace = fits["trace"]
    ok = (trace["strictly_decreasing_along_ladder"]
          and fits["hs"]["strictly_decreasing_along_ladder"]
          and fits["l2"]["strictly_decreasing_along_ladder"]
          and trace["slope"] is not None and trace["slope"] > 0.3
          and trace["r2"] > 0.9)
    elapsed = ladder_report.context.get("wall_time_s", float("nan"))
    budget_ok = elapsed < 15 * 60
    context = ladder_report.context["paper_3d_trace_prefactor_exponent"]
    assert emit(
        "convergence trend (alpha=0.25, gamma=+1, t=1)",
        ok and budget_ok,
        f"trace slope {trace['slope']:.3f} (r2 {trace['r2']:.4f}), "
        f"monotone trace/hs/l2 = "
        f"{trace['strictly_decreasing_along_ladder']}/"
        f"{fits['hs']['strictly_decreasing_along_ladder']}/"
        f"{fits['l2']['strictly_decreasing_along_ladder']}, "
        f"{elapsed:.0f} s; 3D prefactor exponent {context} printed for "
        f"context, not asserted in d=1",
    )
