"""
Grazing-ray deflection for a few space-quantum sizes
====================================================

The modified force F = GMm / (r (r - delta)) bends a ray passing the solar
limb slightly more than the Newtonian 1/r^2 law does.  Here we compute the
deflection at delta = R, 1.3R and 2R and hold each value against the
measured 1.775 +- 0.019 arcsec.
"""

from qgdeflect import ModelParams, OBSERVATION, derive, deflection_closed_form, render, table1

# With delta = 0 the force is plain Newtonian and the deflection is 2 atan(RD).
newtonian = deflection_closed_form(derive(ModelParams(0.0)))
print(f"Newtonian grazing deflection: {newtonian.delta_theta_arcsec:.4f} arcsec")

# Each row carries the computed angle, the published figure and whether the
# value falls inside the observational band.
table = table1(ModelParams(0.0))
print(render(table, "text").decode())

# Only the 1.3R row sits inside the band.
for row in table.rows:
    offset = (row.delta_theta_arcsec - OBSERVATION.value) / OBSERVATION.uncertainty
    print(f"{row.label:>5}: {offset:+.2f} sigma from the measurement")
