"""
Linearized versus exact force
=============================

The analytic orbit uses the force expanded to first order in delta * u.  The
unexpanded right-hand side D / (1 - delta u) has a pole at r = delta, and a
grazing ray with delta comparable to R runs straight into it.  For a small
space quantum the two forms nearly agree.
"""

from qgdeflect import (
    IntegrationSettings,
    ModelParams,
    SingularityError,
    deflection_from_trajectory,
    derive,
    integrate_orbit,
)

for mult in (0.001, 0.01, 0.1):
    params = ModelParams.from_multiple(mult)
    dq = derive(params)
    lin = deflection_from_trajectory(integrate_orbit(dq, params, IntegrationSettings(mode="linearized")))
    traj = integrate_orbit(dq, params, IntegrationSettings(mode="exact"))
    exact = deflection_from_trajectory(traj)
    print(f"delta={mult:g}R  max(delta u)={params.delta * traj.u_max:.3g}  "
          f"exact/linear - 1 = {exact.delta_theta / lin.delta_theta - 1:+.3e}")

# At the fitted value the ray's closest approach (r = R) is inside r = delta.
params = ModelParams.from_multiple(1.3)
try:
    integrate_orbit(derive(params), params, IntegrationSettings(mode="exact"))
except SingularityError as exc:
    print(f"delta=1.3R exact mode: {exc}")
