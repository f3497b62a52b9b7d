"""Deflection angle of the grazing ray, by closed form and by root finding.

The outgoing asymptote is the branch-``m`` root ``phi`` of ``u(phi) = 0``;
the deflection is ``phi - pi``.  ``m = 1`` is the physical branch, other
branches differ by whole turns of ``2 pi / k``.
"""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import BracketError, DomainError, ToleranceError
from .model import _PIO2_1, _PIO2_2, _PIO2_2T, Angle, AngleUnit, DerivedQuantities

__all__ = [
    "Method",
    "DeflectionResult",
    "DEFAULT_ROOT_TOL",
    "deflection_closed_form",
    "deflection_closed_form_naive",
    "deflection_root_find",
    "branch_sweep",
]

DEFAULT_ROOT_TOL = 1e-15  # rad
_EPS = sys.float_info.epsilon


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    ROOT_FIND = "root_find"
    ODE_LINEARIZED = "ode_linearized"
    ODE_EXACT = "ode_exact"


@dataclass(frozen=True)
class DeflectionResult:
    branch_m: int
    phi: float
    delta_theta: float
    delta_theta_arcsec: float
    method: Method

    @classmethod
    def from_phi(
        cls, m: int, phi: float, method: Method, arcsec_per_rad: float
    ) -> "DeflectionResult":
        delta_theta = phi - math.pi
        return cls(m, phi, delta_theta, delta_theta * arcsec_per_rad, Method(method))

    def angle(self, unit: AngleUnit | str = AngleUnit.RADIAN) -> Angle:
        if AngleUnit(unit) is AngleUnit.ARCSECOND:
            return Angle(self.delta_theta_arcsec, AngleUnit.ARCSECOND)
        return Angle(self.delta_theta, AngleUnit.RADIAN)


def deflection_closed_form(dq: DerivedQuantities, m: int = 1) -> DeflectionResult:
    """Branch-``m`` deflection from the closed-form root of the orbit.

    Uses ``phi = (2m - 1) pi / k + (2/k) atan(R D / k)``, equivalent to the
    textbook ``(2/k) [atan(-k / (R D)) + m pi]`` but with the arctangent
    argument near zero instead of near ``-inf``.  The ``m = 1`` part of
    ``phi - pi``, namely ``pi (1 - k) / k``, is taken from the stable
    ``1 - k`` so the deflection never comes from subtracting nearby numbers.

    ``delta_theta`` carries that stable value.  ``phi`` is assembled from an
    exact split of ``(2m - 1) pi`` so that it is the double nearest the true
    root, not ``math.pi`` plus a correction.
    """
    m = int(m)
    k = dq.k
    rd = dq.r_impact * dq.D
    bend = 2.0 / k * math.atan(rd / k)
    odd = 2 * m - 1
    delta_theta = (
        2.0 * (m - 1) * math.pi / k
        + math.pi * dq.one_minus_k / k
        + bend
    )
    j = 2 * odd
    tail = (j * _PIO2_2 + j * _PIO2_2T) + (odd * math.pi * dq.one_minus_k / k + bend)
    return DeflectionResult(
        branch_m=m,
        phi=j * _PIO2_1 + tail,
        delta_theta=delta_theta,
        delta_theta_arcsec=delta_theta * dq.arcsec_per_rad,
        method=Method.CLOSED_FORM,
    )


def deflection_closed_form_naive(dq: DerivedQuantities, m: int = 1) -> float:
    """``phi`` from the branch formula evaluated literally.  Reference only."""
    k = dq.k
    return 2.0 / k * (math.atan(-k / (dq.r_impact * dq.D)) + m * math.pi)


def deflection_root_find(
    dq: DerivedQuantities, m: int = 1, tol: float = DEFAULT_ROOT_TOL
) -> DeflectionResult:
    """Branch-``m`` deflection by Brent's method on the deflection condition.

    The condition ``u(phi) = 0`` factors as
    ``sin(k phi / 2) [tan(k phi / 2) + k / (R D)] = 0``.  The first factor
    gives the trivial roots ``2 j pi / k`` (no deflection), so only the second
    is solved, on ``((2m - 1) pi / k, 2 m pi / k)`` where ``tan`` runs from
    ``-inf`` to 0 and crosses ``-k / (R D)`` exactly once.
    """
    if not (tol > 0.0 and math.isfinite(tol)):
        raise DomainError(f"tol must be positive and finite, got {tol!r}")
    m = int(m)
    k = dq.k
    target = k / (dq.r_impact * dq.D)

    def condition(phi: float) -> float:
        return math.tan(0.5 * k * phi) + target

    lo = (2 * m - 1) * math.pi / k
    hi = 2 * m * math.pi / k
    # lo sits on the pole of tan; rounding may land it on the wrong side
    for _ in range(64):
        if condition(lo) < 0.0:
            break
        lo = math.nextafter(lo, hi)
    f_lo, f_hi = condition(lo), condition(hi)
    if not (f_lo < 0.0 < f_hi):
        raise BracketError(
            f"no sign change on [{lo!r}, {hi!r}]: f = ({f_lo!r}, {f_hi!r})"
        )
    phi, info = brentq(
        condition, lo, hi, xtol=tol, rtol=4 * _EPS, maxiter=200,
        full_output=True, disp=False,
    )
    if not info.converged:
        raise ToleranceError(
            f"root find stalled after {info.iterations} iterations ({info.flag})"
        )
    return DeflectionResult.from_phi(m, phi, Method.ROOT_FIND, dq.arcsec_per_rad)


def branch_sweep(dq: DerivedQuantities, m_min: int, m_max: int) -> list[DeflectionResult]:
    """Closed-form results for every branch in ``[m_min, m_max]``, in order."""
    if m_min > m_max:
        raise DomainError(f"empty branch range [{m_min}, {m_max}]")
    return [deflection_closed_form(dq, m) for m in range(m_min, m_max + 1)]
