"""Experiment orchestration: epsilon ladders, paired Hartree/Vlasov runs,
assumption audits, convergence-rate fits, report emission.

A ladder is indexed by particle number N with eps = N^(-1/d) derived, never
user-supplied.  Each rung builds one thermal state, hands the *same* initial
phase-space data to both dynamics, and records trace / Hilbert-Schmidt / L2
distances at the sample times together with conservation drifts and the
Taylor-remainder scaling diagnostic.  Rungs that violate the audited
hypotheses are marked and excluded from the slope fits; the run continues.
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .estimates import duhamel_commutator_norm, remainder_trace_norm
from .hartree import HartreeConfig, evolve_hartree
from .phasespace import ConfigurationError, PhaseSpaceGrid, boundary_mass_fraction, make_grid
from .potential import MeanFieldOperator, RadialPotential
from .quantum import (
    DensityMatrix,
    WignerFunction,
    build_thermal_state,
    hartree_energy,
    hs_distance,
    kinetic_energy,
    l2_distance,
    trace_distance,
    velocity_moment,
    weighted_sobolev_norm,
    wigner_transform,
)
from .vlasov import VlasovConfig, evolve_vlasov

# printed for context next to fitted slopes; the three-dimensional result is
# not asserted for the d=1 ladder
PAPER_3D_TRACE_PREFACTOR_EXPONENT = 0.4

KINETIC_BOUND_PER_N = 10.0
BOUNDARY_MASS_LIMIT = 1e-10


@dataclass
class ExperimentConfig:
    alpha: float = 0.25
    gamma: int = +1
    N_ladder: tuple = (8, 16, 32, 64, 128)
    L: float = 16.0
    M_min: int = 128
    M_per_N: float = 12.0
    T_temp: float = 0.1
    trap: float = 0.25
    dt: float = 1.0 / 256.0
    t_final: float = 1.0
    sample_times: tuple = (0.25, 0.5, 1.0)
    remainder_times: tuple = (0.25, 0.5)
    force_sign: int = +1
    v_interpolation: str = "cubic-spline"
    seed: int = 7
    output_dir: str | None = None
    dump_states: bool = False

    def __post_init__(self):
        ladder = tuple(self.N_ladder)
        if any(b <= a for a, b in zip(ladder, ladder[1:])):
            raise ConfigurationError("N_ladder must be strictly increasing")
        if not (0.0 < self.alpha < 0.5):
            raise ConfigurationError("alpha must lie in (0, 1/2)")
        self.N_ladder = ladder
        self.sample_times = tuple(self.sample_times)
        self.remainder_times = tuple(self.remainder_times)

    def eps_for(self, N: int) -> float:
        return float(N) ** -1.0  # d = 1

    def grid_for(self, N: int) -> PhaseSpaceGrid:
        M = max(self.M_min, 64 * math.ceil(self.M_per_N * N / 64))
        return make_grid(1, self.L, M, self.eps_for(N))

    def potential(self) -> RadialPotential:
        return RadialPotential(alpha=self.alpha, gamma=self.gamma, d=1)


def audit_assumptions(omega: DensityMatrix, W: WignerFunction | None = None,
                      alpha: float = 0.25, max_sobolev_order: int = 6) -> dict:
    """Record the audited quantities behind the convergence hypotheses.

    Per-rung values only: uniformity in N is a statement about the whole
    sequence and is left to the reader of the assembled report.
    """
    if W is None:
        W = wigner_transform(omega)
    grid = omega.grid
    m0 = 3.0 * alpha / (2.0 - alpha)
    audits = {
        "trace": omega.trace,
        "occupation_min": float(omega.occupations.min()),
        "occupation_max": float(omega.occupations.max()),
        "kinetic_per_N": kinetic_energy(omega) / omega.N,
        "boundary_mass": boundary_mass_fraction(grid, omega.spatial_density().values),
        "W_mass": W.mass,
        "W_linf": W.linf_norm(),
        "W_l1": W.l1_norm(),
        "m0_threshold": m0,
        "moments_abs": {
            str(m): velocity_moment(W, m, absolute=True)
            for m in (0.0, round(m0, 6), 1.0, 2.0)
        },
        "sobolev_H_k_4": {
            str(k): weighted_sobolev_norm(W, k, 4) for k in range(max_sobolev_order + 1)
        },
    }
    return audits


def check_hypotheses(audits: dict, N: int) -> tuple[bool, str]:
    if abs(audits["trace"] - N) > 1e-8 * N:
        return False, f"trace {audits['trace']} deviates from N={N}"
    if audits["occupation_min"] < -1e-8 or audits["occupation_max"] > 1.0 + 1e-8:
        return False, "occupation outside [0, 1]"
    if audits["kinetic_per_N"] > KINETIC_BOUND_PER_N:
        return False, f"kinetic energy per particle {audits['kinetic_per_N']:.3f} above bound"
    if audits["boundary_mass"] > BOUNDARY_MASS_LIMIT:
        return False, f"boundary mass {audits['boundary_mass']:.2e} above {BOUNDARY_MASS_LIMIT}"
    for key, value in audits["moments_abs"].items():
        if not np.isfinite(value):
            return False, f"moment m={key} not finite"
    return True, ""


def fit_loglog_slope(points) -> tuple[float, float, float]:
    """Least squares of log(dist) against log(eps); returns (slope, intercept, r2)."""
    pts = [(float(e), float(d)) for e, d in points]
    if len(pts) < 3:
        raise ConfigurationError("need at least 3 points for a slope fit")
    if any(e <= 0 or d <= 0 for e, d in pts):
        raise ConfigurationError("log-log fit requires positive values")
    x = np.log([e for e, _ in pts])
    y = np.log([d for _, d in pts])
    if np.ptp(x) < 1e-12:
        raise ConfigurationError("degenerate design: all eps values coincide")
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    yhat = A @ np.array([slope, intercept])
    ss_res = float(((y - yhat) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), float(r2)


@dataclass
class ConvergenceReport:
    config: dict
    rungs: list = field(default_factory=list)
    fits: dict = field(default_factory=dict)
    context: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "config": self.config,
            "rungs": self.rungs,
            "fits": self.fits,
            "context": self.context,
        }

    def write(self, output_dir) -> None:
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "report.json", "w") as fh:
            json.dump(self.as_dict(), fh, indent=2, sort_keys=True)
        with open(out / "distances.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["N", "eps", "t", "trace_over_N", "hs_over_sqrtN", "l2"])
            for rung in self.rungs:
                for row in rung["distances"]:
                    writer.writerow([rung["N"], rung["eps"], row["t"],
                                     row["trace_over_N"], row["hs_over_sqrtN"], row["l2"]])
        with open(out / "audits.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["N", "eps", "quantity", "value"])
            for rung in self.rungs:
                for key, value in sorted(rung["audits"].items()):
                    if isinstance(value, dict):
                        for sub, v in sorted(value.items()):
                            writer.writerow([rung["N"], rung["eps"], f"{key}[{sub}]", v])
                    else:
                        writer.writerow([rung["N"], rung["eps"], key, value])
        with open(out / "conservation.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["N", "eps", "t", "hartree_trace", "hartree_purity",
                             "hartree_energy", "hartree_occ_min", "hartree_occ_max",
                             "vlasov_mass", "vlasov_l2", "vlasov_energy", "max_E"])
            for rung in self.rungs:
                for row in rung["conservation"]:
                    writer.writerow([rung["N"], rung["eps"]] + [row[k] for k in (
                        "t", "hartree_trace", "hartree_purity", "hartree_energy",
                        "hartree_occ_min", "hartree_occ_max",
                        "vlasov_mass", "vlasov_l2", "vlasov_energy", "max_E")])

    @property
    def any_hard_failure(self) -> bool:
        return any(not rung["hypotheses_ok"] or rung.get("failed") for rung in self.rungs)


def _run_rung(cfg: ExperimentConfig, N: int, progress: bool = False) -> dict:
    t_start = time.perf_counter()
    grid = cfg.grid_for(N)
    potential = cfg.potential()
    omega0 = build_thermal_state(grid, N, trap_strength=cfg.trap, T=cfg.T_temp)
    W0 = wigner_transform(omega0)
    audits = audit_assumptions(omega0, W0, alpha=cfg.alpha)
    ok, cause = check_hypotheses(audits, N)
    if not ok:
        return {
            "N": N, "eps": cfg.eps_for(N), "M": grid.M, "hypotheses_ok": False,
            "exclusion_cause": cause, "audits": audits, "distances": [],
            "remainder": [], "conservation": [],
            "wall_time_s": time.perf_counter() - t_start,
        }

    field_op = MeanFieldOperator(grid, potential)
    energy0 = hartree_energy(omega0, field_op.potential_of(omega0.spatial_density().values))
    audits["energy_0"] = energy0

    sample_times = sorted(set(cfg.sample_times) | set(cfg.remainder_times) | {0.0})
    hartree_cfg = HartreeConfig(dt=cfg.dt, t_final=cfg.t_final, potential=potential)
    vlasov_cfg = VlasovConfig(dt=cfg.dt, t_final=cfg.t_final, potential=potential,
                              v_interpolation=cfg.v_interpolation,
                              force_sign=cfg.force_sign)

    hartree_series: list[dict] = []

    def hartree_observer(t, omega, rho, U):
        occ = omega.occupations
        hartree_series.append({
            "t": t,
            "hartree_trace": omega.trace,
            "hartree_purity": omega.purity,
            "hartree_energy": hartree_energy(omega, U),
            "hartree_occ_min": float(occ.min()),
            "hartree_occ_max": float(occ.max()),
        })

    vlasov_series: list[dict] = []

    def vlasov_observer(t, W, rho, E, energy):
        vlasov_series.append({
            "t": t,
            "vlasov_mass": W.mass,
            "vlasov_l2": W.l2_norm(),
            "vlasov_energy": energy,
            "max_E": float(np.abs(E).max()),
            "sobolev_H2_4": weighted_sobolev_norm(W, 2, 4),
        })

    hartree_traj = evolve_hartree(omega0, hartree_cfg, observers=[hartree_observer],
                                  sample_times=sample_times)
    vlasov_traj = evolve_vlasov(W0, vlasov_cfg, observers=[vlasov_observer],
                                sample_times=sample_times)

    from .quantum import weyl_quantize

    def matches(t, times):
        return any(abs(t - s) < 1e-9 for s in times)

    distances = []
    remainder = []
    dumps = []
    for (t_h, omega_t), (t_v, W_t) in zip(hartree_traj, vlasov_traj):
        assert abs(t_h - t_v) < 1e-12
        t = t_h
        omega_tilde = weyl_quantize(W_t, N)
        W_hartree = wigner_transform(omega_t)
        if matches(t, cfg.sample_times) or t == 0.0:
            distances.append({
                "t": t,
                "trace_over_N": trace_distance(omega_t, omega_tilde) / N,
                "hs_over_sqrtN": hs_distance(omega_t, omega_tilde) / np.sqrt(N),
                "l2": l2_distance(W_hartree, W_t),
            })
        if matches(t, cfg.remainder_times):
            tr_B, ratio = remainder_trace_norm(W_t, potential, N)
            comm = duhamel_commutator_norm(
                omega_t.spatial_density(), W_t.spatial_density(), omega_tilde, potential
            )
            remainder.append({
                "t": t,
                "trace_norm_B": tr_B,
                "ratio_B": ratio,
                "commutator_trace_norm": comm,
            })
        if cfg.dump_states and cfg.output_dir is not None:
            dumps.append((t, omega_t, W_t))

    conservation = []
    for row_h, row_v in zip(hartree_series, vlasov_series):
        merged = dict(row_h)
        merged.update(row_v)
        conservation.append(merged)

    if cfg.dump_states and cfg.output_dir is not None:
        from . import gridio

        state_dir = Path(cfg.output_dir) / f"states_N{N}"
        state_dir.mkdir(parents=True, exist_ok=True)
        for t, omega_t, W_t in dumps:
            tag = f"t{t:.4f}".replace(".", "p")
            gridio.save_density_matrix(state_dir / f"hartree_{tag}", omega_t)
            gridio.save_wigner(state_dir / f"vlasov_{tag}", W_t)

    rung = {
        "N": N,
        "eps": cfg.eps_for(N),
        "M": grid.M,
        "hypotheses_ok": ok,
        "exclusion_cause": cause,
        "audits": audits,
        "distances": distances,
        "remainder": remainder,
        "conservation": conservation,
        "wall_time_s": time.perf_counter() - t_start,
    }
    if progress:
        final = distances[-1]
        print(f"  rung N={N:4d} M={grid.M:5d}: trace/N={final['trace_over_N']:.3e} "
              f"({rung['wall_time_s']:.1f} s)")
    return rung


def run_convergence_experiment(cfg: ExperimentConfig, progress: bool = False) -> ConvergenceReport:
    """Execute the ladder and fit the epsilon scaling of the three distances.

    Deterministic for a fixed config.  At t=0 both dynamics share the same
    data, so all distances vanish identically there.
    """
    report = ConvergenceReport(config=asdict(cfg), context={
        "paper_3d_trace_prefactor_exponent": PAPER_3D_TRACE_PREFACTOR_EXPONENT,
        "note": "3D exponent printed for context only; the d=1 ladder asserts "
                "monotonicity and a positive fitted slope",
    })
    for N in cfg.N_ladder:
        try:
            rung = _run_rung(cfg, N, progress=progress)
        except Exception as exc:  # a failed rung is recorded, the run continues
            rung = {
                "N": N, "eps": cfg.eps_for(N), "hypotheses_ok": False,
                "exclusion_cause": f"rung failed: {exc}", "failed": True,
                "audits": {}, "distances": [], "remainder": [], "conservation": [],
            }
        report.rungs.append(rung)

    t_end = cfg.t_final
    usable = [r for r in report.rungs if r["hypotheses_ok"] and r["distances"]]
    for key, label in (("trace_over_N", "trace"), ("hs_over_sqrtN", "hs"), ("l2", "l2")):
        points = []
        for rung in usable:
            rows = [row for row in rung["distances"] if abs(row["t"] - t_end) < 1e-9]
            if rows:
                points.append((rung["eps"], rows[0][key]))
        fit = {"points": points}
        try:
            slope, intercept, r2 = fit_loglog_slope(points)
            fit.update({"slope": slope, "intercept": intercept, "r2": r2})
        except ConfigurationError as exc:
            fit.update({"slope": None, "intercept": None, "r2": None, "cause": str(exc)})
        decreasing = all(
            b < a for (_, a), (_, b) in zip(points, points[1:])
        ) if len(points) > 1 else False
        # ladder is ordered by increasing N, i.e. decreasing eps: the distance
        # must shrink along the ladder
        fit["strictly_decreasing_along_ladder"] = bool(decreasing)
        report.fits[label] = fit

    if cfg.output_dir is not None:
        report.write(cfg.output_dir)
    return report
