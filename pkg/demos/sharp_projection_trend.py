"""Approaching an ideal position projection.

As kappa shrinks the Gaussian pointer gets narrower, the post-measurement
position ray collapses onto the outcome and the outcome probability tends to
the input position density there. Small kappa needs wide grids; expect a
few seconds.

Run: python demos/sharp_projection_trend.py
"""

from tomokraus import RayGrid, fock_state, position_projection_trend, tomogram_from_density

grid = RayGrid(16.0, 513, 16)
t = tomogram_from_density(fock_state(1, 16), grid)
rows, limit = position_projection_trend(t, 0.5, [2.0, 1.0, 0.5, 0.25])
print(f"input position density at a=0.5: {limit:.6f}")
print(f"{'kappa':>6} {'probability':>12} {'ray mean':>9} {'ray variance':>13}")
for r in rows:
    print(f"{r.kappa:6.3f} {r.probability:12.6f} {r.ray_mean:9.4f} {r.ray_variance:13.5f}")
