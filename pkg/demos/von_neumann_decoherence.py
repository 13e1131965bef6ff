"""Measurement-induced decoherence from a Gaussian pointer.

A three-level observable with eigenvalues -1, 0, 1 is coupled to a pointer.
Reading the pointer without recording the result damps the coherences by a
Gaussian factor in the eigenvalue gap; recording it splits the pointer ray.

Run: python demos/von_neumann_decoherence.py
"""

import numpy as np

from tomokraus import (
    RayGrid,
    VonNeumannModel,
    decoherence_factor,
    fock_state,
    random_density_matrix,
    tomogram_from_density,
    von_neumann_channel,
    von_neumann_pointer_channel,
)

eig = (-1.0, 0.0, 1.0)
rho = random_density_matrix(3, rng=3)
print("coherence rho'_02 / rho_02 against the predicted factor")
for kappa in (0.5, 2.0):
    for g in (0.25, 0.5, 1.0, 2.0):
        model = VonNeumannModel(eig, g, kappa)
        out = von_neumann_channel(model).oracle_matrix(rho)
        print(f"  kappa={kappa:<4} g={g:<5} measured={abs(out[0, 2] / rho.matrix[0, 2]):.6f} "
              f"predicted={decoherence_factor(model)[0, 2]:.6f}")

# pointer side: the system starts in an equal superposition of the outer eigenstates
grid = RayGrid(8.0, 257, 16)
model = VonNeumannModel((-1.0, 1.0), 2.0, 2.0, (np.sqrt(0.5), np.sqrt(0.5)))
out = von_neumann_pointer_channel(model).apply(tomogram_from_density(fock_state(0, 16), grid))
ray = out.values[0]
print("\npointer position ray after coupling (X, T):")
for x in (-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0):
    print(f"  {x:5.1f}  {np.interp(x, grid.x, ray):.4f}")
