"""Quantum-corrected Newtonian gravity and the grazing photon orbit.

The corrected force law is ``F = G M m / (r (r - delta))``.  Written for the
inverse radius ``u = 1/r`` and expanded to first order in ``delta * u``, the
orbit equation becomes the linear ODE::

    u'' + (1 - D delta) u = D,        D = GM / h**2,  h = c R

whose solution with ``u(0) = 0`` and asymptotic impact parameter ``R`` is::

    u(theta) = D/(1 - D delta) (1 - cos k theta) + sin(k theta) / (R k),
    k = sqrt(1 - D delta)

All quantities are SI: metres, seconds, radians.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DomainError

__all__ = [
    "MU_SUN",
    "C_LIGHT",
    "R_SUN",
    "ARCSEC_PER_RAD",
    "PhysicalConstants",
    "IAU_CONSTANTS",
    "ModelParams",
    "DerivedQuantities",
    "AngleUnit",
    "Angle",
    "derive",
    "force_magnitude",
    "orbit_u",
]

# IAU 2015 Resolution B3 nominal solar values and the SI speed of light.
MU_SUN = 1.32712440018e20  # m^3 / s^2
C_LIGHT = 299792458.0  # m / s
R_SUN = 6.957e8  # m
ARCSEC_PER_RAD = 648000.0 / math.pi

# Three-part split of pi/2 (fdlibm).  The first two parts carry 33 significant
# bits, so j * part is exact for |j| < 2**20.
_PIO2_1 = 1.57079632673412561417e00
_PIO2_2 = 6.07710050630396597660e-11
_PIO2_2T = 2.02226624879595063154e-21


@dataclass(frozen=True)
class PhysicalConstants:
    """Solar gravitational parameter, speed of light, solar radius."""

    mu_sun: float = MU_SUN
    c: float = C_LIGHT
    r_sun: float = R_SUN
    arcsec_per_rad: float = ARCSEC_PER_RAD

    def __post_init__(self) -> None:
        for name in ("mu_sun", "c", "r_sun", "arcsec_per_rad"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be finite and positive, got {value!r}")


IAU_CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class ModelParams:
    """One scenario: space quantum ``delta`` and impact radius ``r_impact`` (m)."""

    delta: float
    r_impact: float = R_SUN
    constants: PhysicalConstants = field(default=IAU_CONSTANTS)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.delta) and self.delta >= 0.0):
            raise DomainError(f"delta must be finite and >= 0, got {self.delta!r}")
        if not (math.isfinite(self.r_impact) and self.r_impact > 0.0):
            raise DomainError(f"r_impact must be finite and > 0, got {self.r_impact!r}")

    @classmethod
    def from_multiple(
        cls,
        multiple: float,
        constants: PhysicalConstants = IAU_CONSTANTS,
        r_impact: float | None = None,
    ) -> "ModelParams":
        """Build params with ``delta = multiple * r_sun`` for a limb-grazing ray."""
        if not (math.isfinite(multiple) and multiple >= 0.0):
            raise DomainError(f"delta multiple must be finite and >= 0, got {multiple!r}")
        r = constants.r_sun if r_impact is None else r_impact
        return cls(delta=multiple * constants.r_sun, r_impact=r, constants=constants)

    @property
    def delta_multiple(self) -> float:
        return self.delta / self.constants.r_sun


@dataclass(frozen=True)
class DerivedQuantities:
    """Quantities every downstream computation reads.

    ``one_minus_k`` is ``1 - k`` evaluated as ``D delta / (1 + k)`` so that it
    keeps full relative precision however small ``delta`` gets.
    """

    h: float
    D: float
    k: float
    coeff_A: float
    coeff_B: float
    one_minus_k: float
    params: ModelParams

    @property
    def d_delta(self) -> float:
        return self.D * self.params.delta

    @property
    def r_impact(self) -> float:
        return self.params.r_impact

    @property
    def delta(self) -> float:
        return self.params.delta

    @property
    def arcsec_per_rad(self) -> float:
        return self.params.constants.arcsec_per_rad


def derive(params: ModelParams) -> DerivedQuantities:
    """Compute ``h``, ``D``, ``k`` and the orbit coefficients for a scenario.

    Raises:
        DomainError: if ``D * delta >= 1``, where ``k`` would be imaginary.
    """
    const = params.constants
    R = params.r_impact
    h = const.c * R
    D = const.mu_sun / (h * h)
    d_delta = D * params.delta
    if not d_delta < 1.0:
        raise DomainError(
            f"D*delta = {d_delta!r} >= 1: delta = {params.delta!r} m is too large "
            "for a real orbit frequency"
        )
    one_minus = 1.0 - d_delta
    k = math.sqrt(one_minus)
    return DerivedQuantities(
        h=h,
        D=D,
        k=k,
        coeff_A=-D / one_minus,
        coeff_B=1.0 / (R * k),
        one_minus_k=d_delta / (1.0 + k),
        params=params,
    )


def force_magnitude(r: float, params: ModelParams, test_mass: float) -> float:
    """Attractive force ``GMm / (r (r - delta))`` in newtons.

    Raises:
        DomainError: if ``r <= delta`` (at or inside the pole of the force law).
    """
    if not r > params.delta:
        raise DomainError(f"r = {r!r} must exceed delta = {params.delta!r}")
    return params.constants.mu_sun * test_mass / (r * (r - params.delta))


def _reduced_phase(theta: float, dq: DerivedQuantities) -> tuple[int, float]:
    """Return ``(n, s)`` with ``k*theta = n*pi + s`` and ``|s| <~ pi/2``.

    ``s`` is formed as ``(theta - n pi) - theta (1 - k)``; both pieces are
    computed without cancellation, which keeps the orbit accurate near the
    outgoing zero at ``k theta ~ pi`` where ``u`` is a tiny difference.
    """
    n = round(dq.k * theta / math.pi)
    j = 2 * n
    s = ((theta - j * _PIO2_1) - j * _PIO2_2) - j * _PIO2_2T
    return n, s - theta * dq.one_minus_k


def orbit_u(theta: float, dq: DerivedQuantities) -> float:
    """Closed-form inverse radius ``u(theta)`` of the photon orbit, in 1/m."""
    n, s = _reduced_phase(theta, dq)
    if n % 2 == 0:
        sin_x = math.sin(s)
        one_minus_cos = 2.0 * math.sin(0.5 * s) ** 2
    else:
        sin_x = -math.sin(s)
        one_minus_cos = 2.0 * math.cos(0.5 * s) ** 2
    return -dq.coeff_A * one_minus_cos + dq.coeff_B * sin_x


class AngleUnit(str, enum.Enum):
    RADIAN = "rad"
    ARCSECOND = "arcsec"


@dataclass(frozen=True)
class Angle:
    """An angle tagged with its unit."""

    value: float
    unit: AngleUnit = AngleUnit.RADIAN

    def to(self, unit: AngleUnit | str, arcsec_per_rad: float = ARCSEC_PER_RAD) -> "Angle":
        unit = AngleUnit(unit)
        if unit is self.unit:
            return self
        if unit is AngleUnit.ARCSECOND:
            return Angle(self.value * arcsec_per_rad, unit)
        return Angle(self.value / arcsec_per_rad, unit)

    @property
    def radians(self) -> float:
        return self.to(AngleUnit.RADIAN).value

    @property
    def arcseconds(self) -> float:
        return self.to(AngleUnit.ARCSECOND).value
