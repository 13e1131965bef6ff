"""Unsharp position measurement as a ray-dependent blur.

The non-selective channel convolves each ray with a Gaussian whose width
grows with the momentum weight of the ray; the position ray is untouched.

Run: python demos/position_blur.py
"""

import numpy as np

from tomokraus import RayGrid, fock_state, gaussian_position_channel, tomogram_from_density

grid = RayGrid(10.0, 321, 16)
t = tomogram_from_density(fock_state(0, 16), grid)
for kappa in (0.5, 1.0, 2.0):
    ch = gaussian_position_channel(kappa)
    out = ch.apply(t)
    var = out.values @ (grid.wx * grid.x ** 2)
    print(f"kappa={kappa}")
    for i in (0, grid.n_theta // 4, grid.n_theta // 2):
        th = grid.theta[i]
        print(f"  theta={th:5.3f}  ray variance={var[i]:.5f}  expected={0.5 + ch.blur_sigma(th) ** 2:.5f}")

# recording the outcome: probability density of the pointer reading
ch = gaussian_position_channel(1.0)
a = np.array([-1.0, 0.0, 0.5, 1.0])
probs = [o.probability for o in ch.selective(t, a)]
print("\noutcome density for vacuum, kappa=1:", np.round(probs, 6))
print("Gaussian with variance 1/2 + 1/(2 kappa^2):  ", np.round(np.exp(-a ** 2 / 2) / np.sqrt(2 * np.pi), 6))
