"""Density matrices, Wigner/Weyl transforms, norms, moments, initial states.

Kernel convention: a mixed state of N fermions is stored as the complex
M x M array K with K[i, j] = omega(x_i; x_j).  The associated *operator*
is h*K (rectangle-rule quadrature), so

    tr omega           = h * sum_i K[i, i]            = N,
    eigenvalues(h*K)   in [0, 1]                      (occupation numbers),
    ||omega||_HS       = h * ||K||_F.

Transform convention (see :mod:`semiclab.phasespace` for the measure):

    W(x, v)     = eps^d * integral omega(x + eps*y/2; x - eps*y/2) e^{-i v y} dy
    omega(x; y) = N * integral W((x+y)/2, v) e^{i v (x-y)/eps} dv/(2*pi)^d

These are mutual inverses, and on-grid both are implemented as a chain of
unitary steps (anti-diagonal reindexing, half-cell Fourier shift, DFT), so
the round trip is exact to rounding and ||omega||_HS = sqrt(N) ||W||_L2
holds identically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .phasespace import (
    ConfigurationError,
    PhaseSpaceGrid,
    spectral_derivative,
    spectral_derivative_dual,
)

HERMITICITY_TOL = 1e-12
TRACE_RTOL = 1e-8
OCCUPATION_TOL = 1e-8


class ValidationError(ValueError):
    """A state violates one of its structural invariants."""


# ----------------------------------------------------------------------
# state containers
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class DensityMatrix:
    """One-particle reduced density matrix of N fermions on a d=1 grid."""

    grid: PhaseSpaceGrid
    kernel: np.ndarray
    N: int

    def __post_init__(self):
        if self.grid.d != 1:
            raise ConfigurationError("density matrices are supported for d=1 grids only")
        if self.kernel.shape != (self.grid.M, self.grid.M):
            raise ValidationError(
                f"kernel shape {self.kernel.shape} does not match M={self.grid.M}"
            )

    @property
    def trace(self) -> float:
        return float(self.grid.h * self.kernel.diagonal().real.sum())

    @property
    def occupations(self) -> np.ndarray:
        """Eigenvalues of the operator h*K, ascending."""
        return np.linalg.eigvalsh(self.grid.h * self.kernel)

    @property
    def purity(self) -> float:
        """tr omega^2 = h^2 ||K||_F^2 for Hermitian K."""
        return float(self.grid.h**2 * np.vdot(self.kernel, self.kernel).real)

    def hermiticity_defect(self) -> float:
        return float(np.abs(self.kernel - self.kernel.conj().T).max())

    def validate(self, check_occupation: bool = True) -> None:
        if self.hermiticity_defect() > HERMITICITY_TOL * max(1.0, np.abs(self.kernel).max()):
            raise ValidationError("kernel is not Hermitian")
        if abs(self.trace - self.N) > TRACE_RTOL * max(1.0, self.N):
            raise ValidationError(f"trace {self.trace} != N={self.N}")
        if check_occupation:
            occ = self.occupations
            if occ.min() < -OCCUPATION_TOL or occ.max() > 1.0 + OCCUPATION_TOL:
                raise ValidationError(
                    f"occupations outside [0,1]: min={occ.min():.3e} max={occ.max():.3e}"
                )

    def spatial_density(self) -> "SpatialDensity":
        """rho(x) = omega(x;x)/N, normalized so  h * sum rho = 1."""
        return SpatialDensity(self.grid, self.kernel.diagonal().real / self.N)


@dataclass(frozen=True)
class WignerFunction:
    """Real phase-space array W[i, j] = W(x_i, v_j); may be negative."""

    grid: PhaseSpaceGrid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.grid.M,) * 2:
            raise ValidationError(
                f"values shape {self.values.shape} does not match M={self.grid.M}"
            )

    @property
    def mass(self) -> float:
        """integral W dx dv/(2*pi) = eps * tr omega (equals 1 when eps*N = 1)."""
        return float(self.grid.integrate_phase(self.values))

    def l2_norm(self) -> float:
        return float(np.sqrt(self.grid.integrate_phase(self.values**2)))

    def linf_norm(self) -> float:
        return float(np.abs(self.values).max())

    def l1_norm(self) -> float:
        return float(self.grid.integrate_phase(np.abs(self.values)))

    def spatial_density(self) -> "SpatialDensity":
        """Velocity marginal with the dual weight eps/L per node."""
        return SpatialDensity(self.grid, self.values.sum(axis=1) * self.grid.w_v)

    def current_density(self) -> np.ndarray:
        """J(x) = integral v W dv/(2*pi)."""
        return (self.values * self.grid.v_nodes[None, :]).sum(axis=1) * self.grid.w_v


@dataclass(frozen=True)
class SpatialDensity:
    """Per-particle position density, h * sum rho = 1."""

    grid: PhaseSpaceGrid
    values: np.ndarray

    @property
    def mass(self) -> float:
        return float(self.grid.integrate_x(self.values))


# ----------------------------------------------------------------------
# Wigner / Weyl transform pair
# ----------------------------------------------------------------------


def _antidiagonal_gather(K: np.ndarray) -> np.ndarray:
    """R[i, n] = K[(i + n) mod M, i]:  omega(x_i + n*h; x_i)."""
    M = K.shape[0]
    i = np.arange(M)
    rows = (i[:, None] + i[None, :]) % M
    return K[rows, i[:, None]]


def _antidiagonal_scatter(R: np.ndarray) -> np.ndarray:
    M = R.shape[0]
    i = np.arange(M)
    rows = (i[:, None] + i[None, :]) % M
    K = np.empty_like(R)
    K[rows, i[:, None]] = R
    return K


def _centered_offsets(M: int) -> np.ndarray:
    """Centered representative of each offset index n: n for n < M/2, n - M after."""
    n = np.arange(M)
    return np.where(n < M // 2, n, n - M)


def _halfcell_phase(grid: PhaseSpaceGrid) -> np.ndarray:
    """Phase matrix exp(-i k * nu*h/2) recentring offset nu onto the midpoint."""
    nu = _centered_offsets(grid.M)
    return np.exp(-1j * np.outer(grid.k_fft, nu * (grid.h / 2.0)))


def wigner_transform(omega: DensityMatrix) -> WignerFunction:
    """Map the kernel to phase space; exact unitary reindexing on-grid.

    Raises ``ValidationError`` for a non-Hermitian kernel, since reality of
    the output is only guaranteed for Hermitian input.
    """
    if omega.hermiticity_defect() > HERMITICITY_TOL * max(1.0, np.abs(omega.kernel).max()):
        raise ValidationError("wigner_transform requires a Hermitian kernel")
    grid = omega.grid
    R = _antidiagonal_gather(omega.kernel)
    G = np.fft.ifft(np.fft.fft(R, axis=0) * _halfcell_phase(grid), axis=0)
    W = np.fft.fftshift(np.fft.fft(G, axis=1), axes=1) * grid.h
    return WignerFunction(grid, np.ascontiguousarray(W.real))


def weyl_quantize(W: WignerFunction, N: int) -> DensityMatrix:
    """Exact inverse of :func:`wigner_transform` on the same grid."""
    grid = W.grid
    if not np.isclose(grid.eps**grid.d * N, 1.0, rtol=1e-9):
        raise ConfigurationError(
            f"grid eps={grid.eps} and N={N} violate eps^d * N = 1"
        )
    G = np.fft.ifft(np.fft.ifftshift(W.values.astype(complex), axes=1), axis=1) / grid.h
    R = np.fft.ifft(np.fft.fft(G, axis=0) * _halfcell_phase(grid).conj(), axis=0)
    return DensityMatrix(grid, _antidiagonal_scatter(R), N)


# ----------------------------------------------------------------------
# distances and norms
# ----------------------------------------------------------------------


def _require_same_grid(a, b) -> None:
    if a.grid != b.grid:
        raise ConfigurationError("operands live on different grids")


def nuclear_norm(grid: PhaseSpaceGrid, kernel: np.ndarray) -> float:
    """Trace norm of the operator h*kernel (sum of singular values).

    (Anti-)Hermitian kernels take the cheap eigenvalue route; anything else
    falls back to a full SVD.
    """
    A = grid.h * kernel
    scale = np.abs(A).max()
    if scale == 0.0:
        return 0.0
    if np.abs(A - A.conj().T).max() <= 1e-13 * scale:
        return float(np.abs(np.linalg.eigvalsh(A)).sum())
    if np.abs(A + A.conj().T).max() <= 1e-13 * scale:
        return float(np.abs(np.linalg.eigvalsh(1j * A)).sum())
    return float(np.linalg.svd(A, compute_uv=False).sum())


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """tr |a - b|."""
    _require_same_grid(a, b)
    return nuclear_norm(a.grid, a.kernel - b.kernel)


def hs_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """Hilbert-Schmidt (Frobenius) distance h * ||K_a - K_b||_F."""
    _require_same_grid(a, b)
    return float(a.grid.h * np.linalg.norm(a.kernel - b.kernel))


def l2_distance(Wa: WignerFunction, Wb: WignerFunction) -> float:
    """Phase-space L2 distance; sqrt(N) * l2_distance = hs_distance."""
    _require_same_grid(Wa, Wb)
    return float(np.sqrt(Wa.grid.integrate_phase((Wa.values - Wb.values) ** 2)))


def velocity_moment(W: WignerFunction, m: float, absolute: bool = False) -> float:
    """integral |v|^m W dx dv/(2*pi) (signed), or of |W| when ``absolute``."""
    if m < 0:
        raise ConfigurationError("moment order must be nonnegative")
    vals = np.abs(W.values) if absolute else W.values
    weight = np.abs(W.grid.v_nodes) ** m
    return float(W.grid.integrate_phase(vals * weight[None, :]))


def weighted_sobolev_norm(W: WignerFunction, s: int, a: int) -> float:
    """H^s_a norm: sum over |beta| <= s of integral (1+x^2+v^2)^a |D^beta W|^2.

    Derivatives are spectral in both phase-space directions.  Orders above 6
    are refused (the grid cannot be trusted further and nothing needs them).
    """
    if s > 6:
        raise ConfigurationError(f"derivative order s={s} unsupported (max 6)")
    if s < 0 or a < 0:
        raise ConfigurationError("s and a must be nonnegative")
    grid = W.grid
    x = grid.x_nodes[:, None]
    v = grid.v_nodes[None, :]
    weight = (1.0 + x**2 + v**2) ** a
    # cache x-derivative chains, then take v-derivatives incrementally
    total = 0.0
    dx_chain = [W.values]
    for _ in range(s):
        dx_chain.append(spectral_derivative(grid, dx_chain[-1], axis=0))
    for bx in range(s + 1):
        g = dx_chain[bx]
        for bv in range(s + 1 - bx):
            total += float(grid.integrate_phase(weight * np.abs(g) ** 2))
            if bv < s - bx:
                g = spectral_derivative_dual(grid, g, axis=1)
    return float(np.sqrt(total))


# ----------------------------------------------------------------------
# energies
# ----------------------------------------------------------------------


def kinetic_energy(omega: DensityMatrix) -> float:
    """tr (-eps^2 Laplacian) omega via the spectral multiplier (eps*k)^2."""
    grid = omega.grid
    mult = (grid.eps * grid.k_fft) ** 2
    # diagonal of P K P^dagger with the unitary DFT P
    Khat = np.fft.ifft(np.fft.fft(omega.kernel, axis=0), axis=1)
    return float(grid.h * (mult * np.einsum("ii->i", Khat).real).sum())


def total_energy(W: WignerFunction, mean_field: np.ndarray) -> float:
    """Conserved per-particle energy of the transport flow.

    E = integral |v|^2 W dx dv/(2*pi)  +  (1/2) integral U rho dx,

    where ``mean_field`` is U = gamma * (V * rho) on the position grid.  The
    kinetic symbol is v^2, matching the -Laplacian convention that also puts
    the factor 2 in the transport term; the half on the interaction is the
    usual double-counting factor.
    """
    grid = W.grid
    kin = velocity_moment(W, 2.0)
    rho = W.spatial_density().values
    pot = 0.5 * float(grid.integrate_x(mean_field * rho))
    return kin + pot


def hartree_energy(omega: DensityMatrix, mean_field: np.ndarray) -> float:
    """Per-particle Hartree energy tr(-eps^2 Lap omega)/N + (1/2) integral U rho."""
    rho = omega.spatial_density().values
    pot = 0.5 * float(omega.grid.integrate_x(mean_field * rho))
    return kinetic_energy(omega) / omega.N + pot


# ----------------------------------------------------------------------
# initial states
# ----------------------------------------------------------------------


def harmonic_hamiltonian(grid: PhaseSpaceGrid, trap_strength: float) -> np.ndarray:
    """Dense matrix of h0 = -eps^2 d^2/dx^2 + trap_strength * x^2 (operator units)."""
    mult = (grid.eps * grid.k_fft) ** 2
    T = np.fft.ifft(mult[:, None] * np.fft.fft(np.eye(grid.M), axis=0), axis=0)
    H = T + np.diag(grid.x_nodes**2 * trap_strength)
    return 0.5 * (H + H.conj().T)


def build_thermal_state(grid: PhaseSpaceGrid, N: int, trap_strength: float = 1.0,
                        T: float = 0.2) -> DensityMatrix:
    """Fermi-Dirac occupation of a harmonic trap.

    Diagonalizes h0 = -eps^2 Lap + trap_strength x^2, fills modes with
    f_n = 1/(1 + exp((E_n - mu)/T)) and fixes mu by bisection so that
    sum f_n = N to 1e-10.  All DensityMatrix invariants hold by construction.
    """
    if N < 1:
        raise ConfigurationError(f"N must be >= 1, got {N}")
    if not T > 0:
        raise ConfigurationError(f"temperature must be positive, got {T}")
    if not np.isclose(grid.eps**grid.d * N, 1.0, rtol=1e-9):
        raise ConfigurationError(
            f"grid eps={grid.eps} and N={N} violate eps^d * N = 1"
        )
    if N >= grid.M:
        raise ConfigurationError(
            f"cannot hold N={N} fermions on M={grid.M} modes; enlarge the grid"
        )
    energies, modes = np.linalg.eigh(harmonic_hamiltonian(grid, trap_strength))

    def total_occupation(mu):
        return expit(-(energies - mu) / T).sum()

    lo = energies[0] - 60.0 * T
    hi = energies[-1] + 60.0 * T
    if not (total_occupation(lo) < N < total_occupation(hi)):
        raise ConfigurationError(
            "chemical potential bisection cannot bracket the target trace; "
            "enlarge the grid (more modes) or lower N"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if total_occupation(mid) < N:
            lo = mid
        else:
            hi = mid
    mu = 0.5 * (lo + hi)
    occ = expit(-(energies - mu) / T)
    occ *= N / occ.sum()  # remove the last bisection residual (~1e-12 relative)
    kernel = (modes * occ[None, :]) @ modes.conj().T / grid.h
    kernel = 0.5 * (kernel + kernel.conj().T)
    return DensityMatrix(grid, kernel, N)


def build_random_mixed_state(grid: PhaseSpaceGrid, N: int, seed: int,
                             trap_strength: float = 1.0,
                             occupation_scale: float | None = None) -> DensityMatrix:
    """Random smooth mixed state: randomized occupations of trap modes.

    Occupations are uniform draws damped by a Gaussian in the mode index
    (keeps the kernel spectrally localized), then rescaled inside [0, 1]
    so the trace is exactly N.
    """
    energies, modes = np.linalg.eigh(harmonic_hamiltonian(grid, trap_strength))
    rng = np.random.default_rng(seed)
    n0 = occupation_scale if occupation_scale is not None else 2.0 * N
    raw = rng.uniform(0.1, 1.0, size=grid.M) * np.exp(-(np.arange(grid.M) / n0) ** 2)

    def trace_at(lam):
        return np.minimum(1.0, lam * raw).sum()

    lo, hi = 0.0, 1.0
    while trace_at(hi) < N:
        hi *= 2.0
        if hi > 1e12:
            raise ConfigurationError("cannot reach trace N with damped occupations")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if trace_at(mid) < N:
            lo = mid
        else:
            hi = mid
    occ = np.minimum(1.0, 0.5 * (lo + hi) * raw)
    occ *= N / occ.sum()
    occ = np.minimum(occ, 1.0)
    occ *= N / occ.sum()
    kernel = (modes * occ[None, :]) @ modes.conj().T / grid.h
    kernel = 0.5 * (kernel + kernel.conj().T)
    return DensityMatrix(grid, kernel, N)
