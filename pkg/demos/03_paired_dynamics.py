# Paired quantum / kinetic evolution
# ----------------------------------
# The same initial data drives both dynamics: the density matrix under the
# mean-field propagator, its phase-space image under the transport solver.
# Conservation laws are tracked on both sides and the growing (then
# shrinking with N) gap between the two evolutions is printed.

import numpy as np

from semiclab import (
    HartreeConfig,
    MeanFieldOperator,
    RadialPotential,
    VlasovConfig,
    build_thermal_state,
    evolve_hartree,
    evolve_vlasov,
    hartree_energy,
    hs_distance,
    make_grid,
    trace_distance,
    weyl_quantize,
    wigner_transform,
)

N = 16
grid = make_grid(d=1, L=16.0, M=256, eps=1.0 / N)
pot = RadialPotential(alpha=0.25, gamma=+1, d=1)
omega0 = build_thermal_state(grid, N, trap_strength=0.25, T=0.1)
W0 = wigner_transform(omega0)
samples = [0.0, 0.25, 0.5, 1.0]

h_energy = {}
def h_obs(t, om, rho, U):
    h_energy[t] = hartree_energy(om, U)

v_energy = {}
def v_obs(t, W, rho, E, energy):
    v_energy[t] = energy

hartree = evolve_hartree(omega0, HartreeConfig(dt=1 / 256, t_final=1.0, potential=pot),
                         observers=[h_obs], sample_times=samples)
vlasov = evolve_vlasov(W0, VlasovConfig(dt=1 / 256, t_final=1.0, potential=pot),
                       observers=[v_obs], sample_times=samples)

print(f"{'t':>5} {'tr dist / N':>14} {'HS dist/sqrt(N)':>16} "
      f"{'dE hartree':>12} {'dE vlasov':>12}")
for (t, om_t), (_, W_t) in zip(hartree, vlasov):
    om_tilde = weyl_quantize(W_t, N)
    print(f"{t:5.2f} {trace_distance(om_t, om_tilde) / N:14.4e} "
          f"{hs_distance(om_t, om_tilde) / np.sqrt(N):16.4e} "
          f"{h_energy[t] - h_energy[0.0]:12.2e} {v_energy[t] - v_energy[0.0]:12.2e}")

print("\nThe t=0 rows vanish because both solvers start from the same data;")
print("the gap at t>0 is the semiclassical mean-field discrepancy that the")
print("epsilon ladder (demo 04) shows shrinking as N grows.")
