"""semiclab: a numerical laboratory for semiclassical mean-field dynamics.

Mixed fermionic states evolve under the mean-field (Hartree) equation, their
phase-space densities under the corresponding transport (Vlasov) equation
with an inverse-power-law interaction gamma |x|^(-alpha), alpha in (0, 1/2);
the package measures how the two dynamics approach each other as the
effective Planck constant eps = N^(-1/d) shrinks, and ships checkers for the
auxiliary machinery (radial-potential decomposition, Gaussian product
integrals, interpolation inequalities, Taylor-remainder operators,
conservation laws).
"""

from .phasespace import (
    ConfigurationError,
    PhaseSpaceGrid,
    boundary_mass_fraction,
    make_grid,
    periodic_convolve,
    spectral_derivative,
)
from .quantum import (
    DensityMatrix,
    SpatialDensity,
    ValidationError,
    WignerFunction,
    build_random_mixed_state,
    build_thermal_state,
    hartree_energy,
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
from .potential import (
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
from .hartree import HartreeConfig, evolve_hartree, hartree_step
from .vlasov import (
    CharacteristicsState,
    FieldSnapshots,
    VlasovConfig,
    evolve_vlasov,
    flow_map,
    vlasov_step,
)
from .estimates import (
    EstimateReport,
    duhamel_commutator_norm,
    gaussian_integral_check,
    gaussian_integral_sweep,
    interpolation_check,
    l1_trace_bound_check,
    remainder_trace_norm,
)
from .harness import (
    ConvergenceReport,
    ExperimentConfig,
    audit_assumptions,
    fit_loglog_slope,
    run_convergence_experiment,
)

__version__ = "0.1.0"
