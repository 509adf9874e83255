import numpy as np
import pytest

from semiclab.phasespace import ConfigurationError, make_grid
from semiclab.quantum import (
    DensityMatrix,
    ValidationError,
    WignerFunction,
    build_random_mixed_state,
    build_thermal_state,
    hs_distance,
    kinetic_energy,
    l2_distance,
    total_energy,
    trace_distance,
    velocity_moment,
    weighted_sobolev_norm,
    weyl_quantize,
    wigner_transform,
)


@pytest.fixture(scope="module")
def thermal16():
    # M = 256 so the velocity window (pi eps M / L = pi) holds the thermal
    # tails of this state with room to spare
    grid = make_grid(1, 16.0, 256, 1.0 / 16.0)
    return build_thermal_state(grid, 16, trap_strength=1.0, T=0.2)


def brute_force_wigner(omega):
    """Oracle: direct double-sum quadrature of the defining integral,

        W(x, v) = eps * sum_y omega(x + eps y/2; x - eps y/2) e^{-i v y} dy,

    using the even-separation samples y_n = 2 n h / eps (dy = 2h/eps),
    truncated at |n| <= M/4 so anti-diagonals never wrap around the torus
    into the live state.  Independent of the FFT chain under test.  The
    coarser y step aliases with period pi eps M / L in v, so the oracle is
    only trustworthy on the inner half of both windows; compare there."""
    grid = omega.grid
    M, h, eps = grid.M, grid.h, grid.eps
    K = omega.kernel
    x, v = grid.x_nodes, grid.v_nodes
    dy = 2.0 * h / eps
    W = np.zeros((M, M))
    ns = np.arange(-M // 4, M // 4 + 1)
    for i in range(M):
        vals = np.array([K[(i + n) % M, (i - n) % M] for n in ns])
        y = ns * dy
        W[i] = (eps * dy * (vals[None, :] * np.exp(-1j * np.outer(v, y))).sum(axis=1)).real
    return W


def test_wigner_zero_maps_to_zero(thermal16):
    grid = thermal16.grid
    zero = DensityMatrix(grid, np.zeros((grid.M, grid.M), dtype=complex), 16)
    assert np.all(wigner_transform(zero).values == 0.0)
    Wz = WignerFunction(grid, np.zeros((grid.M, grid.M)))
    assert np.all(weyl_quantize(Wz, 16).kernel == 0.0)


def test_wigner_normalization(thermal16):
    W = wigner_transform(thermal16)
    assert abs(W.mass - 1.0) < 1e-8
    assert abs(W.mass - thermal16.grid.eps * thermal16.trace) < 1e-10


def test_wigner_of_gaussian_ground_state():
    # projector onto the ground state of -eps^2 d^2/dx^2 + x^2 at eps = 1:
    # phi0 = (pi)^{-1/4} exp(-x^2/2), whose phase-space profile in this
    # package's convention is 2 exp(-(x^2 + v^2)).
    grid = make_grid(1, 16.0, 64, 1.0)
    x = grid.x_nodes
    phi = np.pi**-0.25 * np.exp(-(x**2) / 2.0)
    phi /= np.sqrt(grid.h * (phi**2).sum())
    omega = DensityMatrix(grid, np.outer(phi, phi).astype(complex), 1)
    W = wigner_transform(omega)
    expected = 2.0 * np.exp(-(x[:, None] ** 2 + grid.v_nodes[None, :] ** 2))
    assert np.abs(W.values - expected).max() < 1e-6
    inner = slice(grid.M // 4, 3 * grid.M // 4)
    oracle = brute_force_wigner(omega)
    assert np.abs(W.values[inner, inner] - oracle[inner, inner]).max() < 1e-6


def test_wigner_matches_brute_force_on_mixed_state():
    grid = make_grid(1, 16.0, 128, 1.0 / 4.0)
    omega = build_thermal_state(grid, 4, trap_strength=0.25, T=0.1)
    W = wigner_transform(omega)
    inner = slice(grid.M // 4, 3 * grid.M // 4)
    oracle = brute_force_wigner(omega)
    assert np.abs(W.values[inner, inner] - oracle[inner, inner]).max() < 1e-10


def test_wigner_requires_hermitian():
    grid = make_grid(1, 8.0, 16, 1.0)
    K = np.zeros((16, 16), dtype=complex)
    K[0, 1] = 1.0
    with pytest.raises(ValidationError, match="Hermitian"):
        wigner_transform(DensityMatrix(grid, K, 1))


def test_weyl_inverts_wigner(thermal16):
    W = wigner_transform(thermal16)
    back = weyl_quantize(W, thermal16.N)
    assert hs_distance(thermal16, back) < 1e-12


def test_wigner_inverts_weyl(thermal16):
    W = wigner_transform(thermal16)
    W2 = wigner_transform(weyl_quantize(W, thermal16.N))
    assert np.abs(W.values - W2.values).max() < 1e-12


def test_weyl_grid_consistency(thermal16):
    W = wigner_transform(thermal16)
    with pytest.raises(ConfigurationError, match="eps"):
        weyl_quantize(W, thermal16.N + 1)


def test_hs_l2_identity(thermal16):
    W = wigner_transform(thermal16)
    hs = thermal16.grid.h * np.linalg.norm(thermal16.kernel)
    assert abs(hs - np.sqrt(thermal16.N) * W.l2_norm()) < 1e-10 * hs


def test_trace_distance_properties(thermal16):
    grid = thermal16.grid
    zero = DensityMatrix(grid, np.zeros_like(thermal16.kernel), thermal16.N)
    assert trace_distance(thermal16, thermal16) == 0.0
    # positive operator: tr|omega| = tr omega = N
    assert abs(trace_distance(thermal16, zero) - thermal16.N) < 1e-8
    assert abs(trace_distance(thermal16, zero) - trace_distance(zero, thermal16)) < 1e-12


def test_trace_distance_orthogonal_projectors():
    # two rank-1 orthogonal projectors: singular values {1, 1}, distance 2
    grid = make_grid(1, 16.0, 64, 1.0)
    x = grid.x_nodes
    phi0 = np.exp(-(x**2) / 2.0)
    phi0 /= np.sqrt(grid.h * (phi0**2).sum())
    phi1 = x * np.exp(-(x**2) / 2.0)
    phi1 /= np.sqrt(grid.h * (phi1**2).sum())
    a = DensityMatrix(grid, np.outer(phi0, phi0).astype(complex), 1)
    b = DensityMatrix(grid, np.outer(phi1, phi1).astype(complex), 1)
    assert abs(trace_distance(a, b) - 2.0) < 1e-10


def test_trace_distance_dominates_trace_difference():
    grid = make_grid(1, 16.0, 64, 1.0 / 4.0)
    a = build_thermal_state(grid, 4, 1.0, 0.2)
    scaled = DensityMatrix(grid, 0.75 * a.kernel, 3)
    assert trace_distance(a, scaled) >= abs(a.trace - scaled.trace) - 1e-10


def test_grid_mismatch_raises(thermal16):
    other = build_thermal_state(make_grid(1, 16.0, 64, 1.0 / 16.0), 16, 1.0, 0.2)
    with pytest.raises(ConfigurationError, match="grid"):
        trace_distance(thermal16, other)
    with pytest.raises(ConfigurationError, match="grid"):
        hs_distance(thermal16, other)


def test_hs_distance_random_perturbation_scaling(thermal16):
    # oracle: direct weighted sum over entries
    grid = thermal16.grid
    rng = np.random.default_rng(5)
    P = rng.standard_normal((grid.M, grid.M))
    P = 1e-3 * (P + P.T) / 2.0
    b = DensityMatrix(grid, thermal16.kernel + P, thermal16.N)
    direct = np.sqrt((np.abs(grid.h * P) ** 2).sum())
    assert abs(hs_distance(thermal16, b) - direct) < 1e-12


def test_velocity_moments(thermal16):
    W = wigner_transform(thermal16)
    assert abs(velocity_moment(W, 0.0) - 1.0) < 1e-8
    # even-in-v density: signed first moment (integrand v, not |v|) vanishes
    signed_first = float(W.grid.integrate_phase(W.values * W.grid.v_nodes[None, :]))
    assert abs(signed_first) < 1e-10


def test_velocity_moment_gaussian_closed_form():
    # W = Z exp(-x^2 - v^2): second moment = 1/2 of the total mass
    grid = make_grid(1, 16.0, 128, 1.0)
    vals = np.exp(-(grid.x_nodes[:, None] ** 2) - grid.v_nodes[None, :] ** 2)
    W = WignerFunction(grid, vals)
    m0 = velocity_moment(W, 0.0)
    m2 = velocity_moment(W, 2.0)
    assert abs(m2 / m0 - 0.5) < 1e-10


def test_weighted_sobolev_norm_gaussian():
    grid = make_grid(1, 16.0, 128, 1.0)
    x, v = grid.x_nodes[:, None], grid.v_nodes[None, :]
    W = WignerFunction(grid, np.exp(-(x**2) - v**2))
    # s=0, a=0 collapses to the L2 norm
    assert abs(weighted_sobolev_norm(W, 0, 0) - W.l2_norm()) < 1e-12
    # H^1_0 oracle: ||W||^2 + ||dW/dx||^2 + ||dW/dv||^2 with Gaussian closed
    # forms: int e^{-2x^2-2v^2} = pi/2, int 4x^2 e^{-2x^2-2v^2} = pi/2
    # (phase-space measure dx dv/(2 pi) divides everything by 2 pi)
    closed = np.sqrt((np.pi / 2.0 + np.pi / 2.0 + np.pi / 2.0) / (2.0 * np.pi))
    assert abs(weighted_sobolev_norm(W, 1, 0) - closed) < 1e-6
    zero = WignerFunction(grid, np.zeros_like(W.values))
    assert weighted_sobolev_norm(zero, 2, 2) == 0.0


def test_weighted_sobolev_monotonicity(thermal16):
    W = wigner_transform(thermal16)
    n00 = weighted_sobolev_norm(W, 0, 0)
    n10 = weighted_sobolev_norm(W, 1, 0)
    n11 = weighted_sobolev_norm(W, 1, 1)
    n21 = weighted_sobolev_norm(W, 2, 1)
    assert n00 <= n10 <= n11 <= n21


def test_weighted_sobolev_rejects_large_order(thermal16):
    W = wigner_transform(thermal16)
    with pytest.raises(ConfigurationError, match="order"):
        weighted_sobolev_norm(W, 7, 0)


def test_thermal_state_invariants():
    for N, T in [(8, 0.05), (16, 0.2), (32, 1.0)]:
        grid = make_grid(1, 16.0, 128, 1.0 / N)
        omega = build_thermal_state(grid, N, trap_strength=1.0, T=T)
        omega.validate()
        occ = omega.occupations
        assert occ.min() > -1e-10 and occ.max() < 1.0 + 1e-10
        assert abs(omega.trace - N) < 1e-8 * N


def test_thermal_state_zero_temperature_limit():
    grid = make_grid(1, 16.0, 128, 1.0 / 8.0)
    omega = build_thermal_state(grid, 8, trap_strength=1.0, T=1e-4)
    occ = np.sort(omega.occupations)[::-1]
    assert np.all(occ[:8] > 1.0 - 1e-8)
    assert np.all(np.abs(occ[8:]) < 1e-8)


def test_thermal_state_kinetic_bound():
    # recorded pilot value: kinetic energy per particle ~ 0.73 for this
    # configuration, comfortably below the audit bound C = 10
    grid = make_grid(1, 16.0, 128, 1.0 / 8.0)
    omega = build_thermal_state(grid, 8, trap_strength=1.0, T=0.2)
    assert kinetic_energy(omega) <= 10.0 * omega.N


def test_thermal_state_rejects_overfilled_grid():
    grid = make_grid(1, 16.0, 16, 1.0 / 16.0)
    with pytest.raises(ConfigurationError, match="enlarge"):
        build_thermal_state(grid, 16, 1.0, 0.2)


def test_kinetic_energy_gaussian_oracle():
    # <phi0| -eps^2 d^2/dx^2 |phi0> = eps/2 for the harmonic ground state
    grid = make_grid(1, 16.0, 128, 1.0)
    x = grid.x_nodes
    phi = np.exp(-(x**2) / 2.0)
    phi /= np.sqrt(grid.h * (phi**2).sum())
    omega = DensityMatrix(grid, np.outer(phi, phi).astype(complex), 1)
    assert abs(kinetic_energy(omega) - 0.5) < 1e-6
    zero = DensityMatrix(grid, np.zeros_like(omega.kernel), 1)
    assert kinetic_energy(zero) == 0.0


def test_random_mixed_state_corpus():
    for seed in range(4):
        grid = make_grid(1, 16.0, 128, 1.0 / 16.0)
        omega = build_random_mixed_state(grid, 16, seed=seed)
        omega.validate()
        W = wigner_transform(omega)
        assert abs(W.mass - 1.0) < 1e-8
        back = weyl_quantize(W, 16)
        assert hs_distance(omega, back) < 1e-12
