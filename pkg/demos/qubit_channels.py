"""Dephasing and decay of a qubit seen through its tomogram.

Run: python demos/qubit_channels.py
"""

import numpy as np

from tomokraus import DensityMatrix, RayGrid, qubit_channel, reconstruct, tomogram_from_density

grid = RayGrid(8.0, 257, 32)
plus = DensityMatrix(np.full((2, 2), 0.5), label="plus")
t_in = tomogram_from_density(plus, grid)

# The coherence of |+> shifts the position ray: <q> = sqrt(2) Re rho_01.
i = 0


def ray_mean(t):
    return float(np.sum(grid.wx * grid.x * t.values[i]))


print("phase flip: rho' = p rho + (1 - p) Z rho Z")
print(f"{'p':>5} {'<X> on ray':>12} {'|rho_01| rec':>14} {'delta weight':>13}")
for p in (1.0, 0.75, 0.5, 0.25, 0.0):
    ch = qubit_channel("phase_flip", p).channel()
    out = ch.apply(t_in)
    rho = reconstruct(out, 2).state.matrix
    print(f"{p:5.2f} {ray_mean(out):12.6f} {abs(rho[0, 1]):14.6f} {ch.kernel.identity_weight:13.3f}")

print("\namplitude damping of |1>: population flows to the ground state")
one = tomogram_from_density(DensityMatrix(np.diag([0.0, 1.0])), grid)
for g in (0.0, 0.3, 0.6, 1.0):
    out = qubit_channel("amplitude_damping", g).channel().apply(one)
    p0 = reconstruct(out, 2).state.matrix[0, 0].real
    print(f"  gamma={g:.1f}  P(0)={p0:.6f}  T(0, theta=0)={out.values[0, grid.n_x // 2]:.6f}")

cf = qubit_channel("amplitude_damping", 0.3).closed_form()
print("\nclosed-form kernel labels (library -> reference):", cf.labels)
