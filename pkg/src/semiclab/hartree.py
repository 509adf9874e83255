"""Time evolution of the density matrix under the semiclassical mean-field
equation  i eps d/dt omega = [-eps^2 Lap + U, omega],  U = gamma V * rho.

One step conjugates the kernel with the Strang-split propagator

    G = exp(-i dt U/(2 eps)) exp(-i dt eps k^2) exp(-i dt U/(2 eps)),

where U is evaluated from a midpoint-predicted density (propagate half a
step with the current field, rebuild U, then take the full step from the
original state).  Conjugation by a unitary preserves trace, Hermiticity,
the occupation spectrum and purity exactly in exact arithmetic; time
accuracy is second order in dt.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.fft as _fft

from .phasespace import ConfigurationError
from .potential import MeanFieldOperator, RadialPotential
from .quantum import DensityMatrix

OCCUPATION_DRIFT_LIMIT = 1e-6


class StabilityError(RuntimeError):
    """The propagator left its validity envelope; reduce dt."""


@dataclass
class HartreeConfig:
    dt: float
    t_final: float
    potential: Optional[RadialPotential]  # None: free evolution (V = 0)
    midpoint_predictor: bool = True
    # test hook: replace the self-consistent mean field by U(x, t)
    field_override: Optional[Callable[[np.ndarray, float], np.ndarray]] = None

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        if self.t_final < 0:
            raise ConfigurationError(f"t_final must be nonnegative, got {self.t_final}")
        if self.t_final > 0 and self.t_final < self.dt:
            raise ConfigurationError("t_final must be at least one time step")


class HartreePropagator:
    """Reusable stepper bound to one grid and one interaction."""

    def __init__(self, grid, cfg: HartreeConfig):
        self.grid = grid
        self.cfg = cfg
        self.field = (MeanFieldOperator(grid, cfg.potential)
                      if cfg.potential is not None else None)
        self._kinetic_phase = np.exp(
            -1j * cfg.dt * grid.eps * grid.k_fft**2
        )

    def mean_field(self, omega: DensityMatrix, t: float) -> np.ndarray:
        if self.cfg.field_override is not None:
            return self.cfg.field_override(self.grid.x_nodes, t)
        if self.field is None:
            return np.zeros(self.grid.M)
        return self.field.potential_of(omega.spatial_density().values)

    def _conjugate(self, K: np.ndarray, U: np.ndarray, dt: float) -> np.ndarray:
        eps = self.grid.eps
        pot_phase = np.exp(-0.5j * dt * U / eps)
        kin_phase = (
            self._kinetic_phase
            if dt == self.cfg.dt
            else np.exp(-1j * dt * eps * self.grid.k_fft**2)
        )

        def kinetic_left(X):
            return _fft.ifft(kin_phase[:, None] * _fft.fft(X, axis=0, workers=2),
                             axis=0, workers=2)

        K = pot_phase[:, None] * K * pot_phase.conj()[None, :]
        K = kinetic_left(K)
        K = kinetic_left(K.conj().T).conj().T
        K = pot_phase[:, None] * K * pot_phase.conj()[None, :]
        return K

    def step(self, omega: DensityMatrix, t: float) -> DensityMatrix:
        dt = self.cfg.dt
        U = self.mean_field(omega, t)
        if (self.cfg.midpoint_predictor and self.cfg.field_override is None
                and self.field is not None):
            half = DensityMatrix(
                self.grid, self._conjugate(omega.kernel, U, 0.5 * dt), omega.N
            )
            U = self.field.potential_of(half.spatial_density().values)
        elif self.cfg.field_override is not None:
            U = self.cfg.field_override(self.grid.x_nodes, t + 0.5 * dt)
        return DensityMatrix(self.grid, self._conjugate(omega.kernel, U, dt), omega.N)


def hartree_step(omega: DensityMatrix, cfg: HartreeConfig, t: float = 0.0) -> DensityMatrix:
    return HartreePropagator(omega.grid, cfg).step(omega, t)


def evolve_hartree(
    omega0: DensityMatrix,
    cfg: HartreeConfig,
    observers: Sequence[Callable] = (),
    sample_times: Optional[Sequence[float]] = None,
) -> list[tuple[float, DensityMatrix]]:
    """March to t_final, returning the state at each requested sample time.

    Observers are called as obs(t, omega, rho, U) at t=0 and at every sample
    time.  Occupation drift is audited at sample times; exceeding 1e-6
    aborts with a :class:`StabilityError` advising a smaller dt.
    """
    n_steps = round(cfg.t_final / cfg.dt)
    if abs(n_steps * cfg.dt - cfg.t_final) > 1e-9 * max(1.0, cfg.t_final):
        raise ConfigurationError("t_final must be an integer multiple of dt")
    if sample_times is None:
        sample_times = [cfg.t_final]
    sample_steps = set()
    for s in sample_times:
        k = round(s / cfg.dt)
        if abs(k * cfg.dt - s) > 1e-9 * max(1.0, cfg.t_final):
            raise ConfigurationError(f"sample time {s} is not a multiple of dt")
        sample_steps.add(k)

    prop = HartreePropagator(omega0.grid, cfg)
    occ0 = omega0.occupations

    def notify(t, omega):
        rho = omega.spatial_density()
        U = prop.mean_field(omega, t)
        for obs in observers:
            obs(t, omega, rho, U)

    def check_occupation(omega):
        occ = omega.occupations
        drift = max(
            max(0.0, -occ.min()) - max(0.0, -occ0.min()),
            max(0.0, occ.max() - 1.0) - max(0.0, occ0.max() - 1.0),
        )
        if drift > OCCUPATION_DRIFT_LIMIT:
            raise StabilityError(
                f"occupation drift {drift:.2e} exceeds {OCCUPATION_DRIFT_LIMIT}; "
                "reduce dt"
            )

    trajectory = []
    omega = omega0
    notify(0.0, omega)
    if 0 in sample_steps:
        trajectory.append((0.0, omega))
    for step in range(1, n_steps + 1):
        t_prev = (step - 1) * cfg.dt
        omega = prop.step(omega, t_prev)
        if step in sample_steps:
            t = step * cfg.dt
            check_occupation(omega)
            notify(t, omega)
            trajectory.append((t, omega))
    if n_steps == 0 and not trajectory:
        trajectory.append((0.0, omega0))
    return trajectory
