import numpy as np
import pytest
from math import gamma as gamma_fn
from scipy.integrate import quad

from semiclab.phasespace import ConfigurationError, make_grid, spectral_derivative
from semiclab.potential import (
    FdllDecomposition,
    MeanFieldOperator,
    RadialPotential,
    calibrate_normalization,
    fdll_reconstruct,
    fdll_weight,
    force_field,
    mean_field_potential,
    z_reduction_constant,
)
from semiclab.quantum import SpatialDensity


def test_radial_potential_validation():
    RadialPotential(0.25, +1)
    with pytest.raises(ConfigurationError, match="alpha"):
        RadialPotential(0.5, +1)
    with pytest.raises(ConfigurationError, match="alpha"):
        RadialPotential(0.0, +1)
    with pytest.raises(ConfigurationError, match="gamma"):
        RadialPotential(0.25, 2)


@pytest.mark.parametrize("alpha", [0.1, 0.25, 0.4])
def test_calibration_matches_gamma_function_oracle(alpha):
    # closed form of the reduced radial integral:
    # int_0^inf r^(-1-a) e^(-1/(2 r^2)) dr = 2^(a/2 - 1) Gamma(a/2)
    closed = 2.0 ** (1.0 - alpha / 2.0) / gamma_fn(alpha / 2.0)
    assert abs(calibrate_normalization(alpha, 3) / closed - 1.0) < 1e-9


def test_fdll_weight_power_law_scaling():
    pot = RadialPotential(0.25)
    assert abs(fdll_weight(pot, 2.0) / fdll_weight(pot, 1.0) - 2.0 ** (-1.25)) < 1e-12
    with pytest.raises(ConfigurationError, match="r"):
        fdll_weight(pot, 0.0)


def test_fdll_reconstruction_point_values():
    decomp = FdllDecomposition(RadialPotential(0.25, d=3))
    assert abs(fdll_reconstruct(decomp, 1.0) - 1.0) < 1e-3
    assert abs(fdll_reconstruct(decomp, 4.0) - 4.0 ** (-0.25)) < 1e-3
    near = FdllDecomposition(RadialPotential(0.4, d=3))
    assert abs(fdll_reconstruct(near, 0.1) - 0.1 ** (-0.4)) < 1e-2
    with pytest.raises(ConfigurationError, match="singular"):
        fdll_reconstruct(decomp, 0.0)


@pytest.mark.parametrize("alpha", [0.1, 0.25, 0.4])
def test_fdll_homogeneity(alpha):
    decomp = FdllDecomposition(RadialPotential(alpha))
    for x in (0.3, 1.7):
        for lam in (2.0, 4.0):
            lhs = decomp.reconstruct(lam * x)
            rhs = lam ** (-alpha) * decomp.reconstruct(x)
            assert abs(lhs / rhs - 1.0) < 1e-3


@pytest.mark.parametrize("alpha", [0.1, 0.25, 0.4])
def test_fdll_reconstruction_sweep(alpha):
    decomp = FdllDecomposition(RadialPotential(alpha))
    xs = np.geomspace(0.05, 10.0, 50)
    recon = np.array([decomp.reconstruct(x) for x in xs])
    assert np.abs(recon / xs ** (-alpha) - 1.0).max() < 1e-3


def test_z_reduction_constant_values():
    # oracle: brute-force quadrature of the mollifier-centre integral in d=1
    # (the 3D case tensorizes into three identical factors)
    def brute(r, x, y):
        val, _ = quad(lambda z: np.exp(-((x - z) ** 2 + (y - z) ** 2) / r**2),
                      -np.inf, np.inf)
        return val

    for r in (0.5, 1.0, 2.0):
        c1, widened = z_reduction_constant(r, 1)
        assert abs(widened - r * np.sqrt(2.0)) < 1e-14
        for x, y in ((0.0, 0.0), (0.3, -0.9)):
            expected = c1 * np.exp(-((x - y) ** 2) / (2.0 * r**2))
            assert abs(brute(r, x, y) / expected - 1.0) < 1e-8
        # the 3D integral tensorizes into three identical 1D factors
        c3, _ = z_reduction_constant(r, 3)
        assert abs(c3 / brute(r, 0.0, 0.0) ** 3 - 1.0) < 1e-8
        assert abs(c3 - (np.pi / 2.0) ** 1.5 * r**3) < 1e-12 * max(1.0, c3)

    assert abs(z_reduction_constant(1.0, 1)[0] - np.sqrt(np.pi / 2.0)) < 1e-12
    assert abs(z_reduction_constant(1.0, 3)[0] - (np.pi / 2.0) ** 1.5) < 1e-12
    assert abs(z_reduction_constant(2.0, 3)[0] / z_reduction_constant(1.0, 3)[0]
               - 2.0**3) < 1e-12


@pytest.fixture(scope="module")
def grid256():
    return make_grid(1, 16.0, 256, 1.0 / 16.0)


def test_mean_field_far_field(grid256):
    # a near-point mass seen from |x| = 2 looks like the bare potential there
    grid = grid256
    x = grid.x_nodes
    rho = np.exp(-(x**2) / (2 * 0.05**2))
    rho /= grid.integrate_x(rho)
    for gamma in (+1, -1):
        U = mean_field_potential(SpatialDensity(grid, rho),
                                 RadialPotential(0.25, gamma, d=1))
        i = np.argmin(np.abs(x - 2.0))
        assert abs(U[i] - gamma * 2.0 ** (-0.25)) < 1e-2


def test_mean_field_symmetry_and_monotonicity(grid256):
    grid = grid256
    x = grid.x_nodes
    box = np.where(np.abs(x) < 1.0, 1.0, 0.0)
    box /= grid.integrate_x(box)
    pot = RadialPotential(0.25, +1, d=1)
    U = mean_field_potential(SpatialDensity(grid, box), pot)
    E = force_field(SpatialDensity(grid, box), pot)
    mid = grid.M // 2
    # symmetric density: zero force at the origin
    assert abs(E[mid]) < 1e-10 * np.abs(E).max()
    # repulsive tail decreases away from the support on the right side
    right = (x > 1.5) & (x < 6.0)
    assert np.all(np.diff(U[right]) < 0)


def test_mean_field_linearity(grid256):
    grid = grid256
    x = grid.x_nodes
    pot = RadialPotential(0.3, +1, d=1)
    op = MeanFieldOperator(grid, pot)
    rho1 = np.exp(-(x**2))
    rho2 = np.exp(-((x - 1.0) ** 2) * 2.0)
    combo = op.potential_of(0.3 * rho1 + 0.7 * rho2)
    parts = 0.3 * op.potential_of(rho1) + 0.7 * op.potential_of(rho2)
    assert np.abs(combo - parts).max() < 1e-12


def test_mean_field_matches_direct_summation(grid256):
    # oracle: O(M^2) direct sum with the same capped kernel
    grid = make_grid(1, 16.0, 64, 1.0 / 4.0)
    x = grid.x_nodes
    pot = RadialPotential(0.25, +1, d=1)
    decomp = FdllDecomposition(pot)
    rho = np.exp(-(x**2))
    rho /= grid.integrate_x(rho)
    U = MeanFieldOperator(grid, pot).potential_of(rho)
    direct = np.empty_like(U)
    for i in range(grid.M):
        sep = np.maximum(np.abs(x[i] - x), grid.h / 2.0)
        direct[i] = grid.h * sum(decomp.reconstruct(s) * r for s, r in zip(sep, rho))
    assert np.abs(U - direct).max() < 1e-12


def test_force_is_spectral_derivative_of_potential(grid256):
    grid = grid256
    x = grid.x_nodes
    rho = np.exp(-(x**2))
    rho /= grid.integrate_x(rho)
    pot = RadialPotential(0.25, +1, d=1)
    density = SpatialDensity(grid, rho)
    U = mean_field_potential(density, pot)
    E = force_field(density, pot)
    assert np.array_equal(E, spectral_derivative(grid, U, axis=0))
