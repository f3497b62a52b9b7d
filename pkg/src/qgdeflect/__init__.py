"""Light deflection at the solar limb under a quantum-corrected Newtonian force.

>>> from qgdeflect import ModelParams, derive, deflection_closed_form
>>> dq = derive(ModelParams.from_multiple(1.3))
>>> round(deflection_closed_form(dq).delta_theta_arcsec, 3)
1.77
"""

from .deflection import (
    DEFAULT_ROOT_TOL,
    DeflectionResult,
    Method,
    branch_sweep,
    deflection_closed_form,
    deflection_root_find,
)
from .errors import (
    BracketError,
    DeflectionError,
    DomainError,
    EventNotFound,
    SingularityError,
    ToleranceError,
)
from .model import (
    ARCSEC_PER_RAD,
    IAU_CONSTANTS,
    Angle,
    AngleUnit,
    DerivedQuantities,
    ModelParams,
    PhysicalConstants,
    derive,
    force_magnitude,
    orbit_u,
)
from .ode import (
    IntegrationSettings,
    Mode,
    Trajectory,
    deflection_from_trajectory,
    integrate_orbit,
    trajectory_csv,
)
from .report import (
    OBSERVATION,
    Observation,
    SweepTable,
    compare_observation,
    parse_json,
    render,
    sweep_m,
    table1,
    table2,
)

__version__ = "0.1.0"
