# Phase-space transforms and thermal states
# ------------------------------------------
# Builds a Fermi-Dirac mixed state in a harmonic trap, maps it to phase
# space and back, and verifies the structural identities that make the
# kernel <-> phase-space dictionary trustworthy:
#   * the round trip is exact,
#   * the phase-space mass equals eps * tr(omega) = 1,
#   * the Hilbert-Schmidt norm equals sqrt(N) times the L2 norm.

import numpy as np

from semiclab import (
    build_thermal_state,
    hs_distance,
    kinetic_energy,
    make_grid,
    velocity_moment,
    weyl_quantize,
    wigner_transform,
)

N = 16
grid = make_grid(d=1, L=16.0, M=256, eps=1.0 / N)
omega = build_thermal_state(grid, N, trap_strength=0.25, T=0.1)

print(f"trace            : {omega.trace:.12f}   (target {N})")
occ = omega.occupations
print(f"occupations      : [{occ.min():.2e}, {occ.max():.6f}]  (inside [0, 1])")
print(f"kinetic / N      : {kinetic_energy(omega) / N:.6f}")

W = wigner_transform(omega)
print(f"phase-space mass : {W.mass:.12f}   (= eps tr omega)")
print(f"min W            : {W.values.min():.3e}  (negative values are expected)")
print(f"second moment    : {velocity_moment(W, 2.0):.6f}")

back = weyl_quantize(W, N)
print(f"roundtrip error  : {hs_distance(omega, back):.3e}  (HS norm)")

hs = grid.h * np.linalg.norm(omega.kernel)
print(f"norm identity    : HS {hs:.10f} vs sqrt(N) L2 {np.sqrt(N) * W.l2_norm():.10f}")
