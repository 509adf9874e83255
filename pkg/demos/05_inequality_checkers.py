# Inequality checkers
# -------------------
# Numerical audits of the auxiliary bounds: the 3D Gaussian product
# integral against its envelope, the velocity-moment interpolation
# inequality with its proof-derived constant, the Taylor-remainder
# operator of the mean field, and the L1-vs-trace-norm domination.

import numpy as np

from semiclab import (
    RadialPotential,
    build_thermal_state,
    gaussian_integral_check,
    gaussian_integral_sweep,
    interpolation_check,
    l1_trace_bound_check,
    make_grid,
    remainder_trace_norm,
    wigner_transform,
)

rep = gaussian_integral_check(np.zeros(3), np.array([2.0, 0.0, 0.0]),
                              s=0.3, r=1.0, j=0, k=0)
print(f"gaussian j=k=0: ratio {rep.ratio:.4f} "
      f"(= pi^(3/2)/(s(1-s)) = {np.pi**1.5 / (0.3 * 0.7):.4f}), pass={rep.passed}")
sup, reports = gaussian_integral_sweep()
print(f"sweep over (j, k, s, separation): {len(reports)} checks, "
      f"empirical envelope constant {sup:.3f}")

grid = make_grid(d=1, L=16.0, M=256, eps=1.0 / 16)
pot = RadialPotential(0.25, +1, d=1)
omega = build_thermal_state(grid, 16, trap_strength=0.25, T=0.1)
W = wigner_transform(omega)

for m in (1.0, 2.0, 4.0):
    rep = interpolation_check(W, m)
    print(f"interpolation m={m}: lhs/rhs = {rep.ratio:.4f} (pass={rep.passed})")

x = grid.x_nodes
for label, U in (("affine", 3.0 * x + 1.0), ("quadratic", x**2), ("mean-field", None)):
    if U is None:
        value, ratio = remainder_trace_norm(W, pot, 16)
    else:
        value, ratio = remainder_trace_norm(W, pot, 16, U_override=U)
    print(f"remainder [{label}]: tr|B| = {value:.3e}, tr|B|/(N eps^2) = {ratio:.3e}")

other = build_thermal_state(grid, 16, trap_strength=0.25, T=0.12)
rep = l1_trace_bound_check(omega, other)
print(f"L1 vs trace norm: {rep.lhs:.4e} <= {rep.rhs_bound:.4e} (pass={rep.passed})")
