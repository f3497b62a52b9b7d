"""Numerical orbit integration, independent of the closed-form solution.

Starts from ``u(0) = 0``, ``u'(0) = 1/R`` and integrates either the
linearised orbit equation ``u'' + (1 - D delta) u = D`` or the full one
``u'' + u = D / (1 - delta u)`` with an adaptive Dormand-Prince 5(4) pair.
The outgoing asymptote is the first sign change of ``u`` past ``pi/2``.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from typing import Callable, Optional

from .deflection import DeflectionResult, Method
from .errors import DomainError, EventNotFound, SingularityError
from .model import DerivedQuantities, ModelParams

__all__ = [
    "Mode",
    "IntegrationSettings",
    "Trajectory",
    "SINGULARITY_BOUND",
    "integrate_orbit",
    "deflection_from_trajectory",
    "trajectory_csv",
]

# delta*u at which exact-mode integration gives up
SINGULARITY_BOUND = 0.9

# Dormand & Prince (1980), RK5(4)7M
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = _A[6] + (0.0,)
_B_LOW = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b - bl for b, bl in zip(_B, _B_LOW))

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_MAX_STEPS = 1_000_000


class Mode(str, enum.Enum):
    LINEARIZED = "linearized"
    EXACT = "exact"


@dataclass(frozen=True)
class IntegrationSettings:
    """Integrator controls.  ``abs_tol=None`` means ``1e-12 * D``."""

    mode: Mode = Mode.LINEARIZED
    rel_tol: float = 1e-12
    abs_tol: Optional[float] = None
    max_step: float = 0.01
    theta_max: float = 4.0 * math.pi

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", Mode(self.mode))
        if not self.rel_tol > 0.0:
            raise DomainError(f"rel_tol must be > 0, got {self.rel_tol!r}")
        if self.abs_tol is not None and not self.abs_tol > 0.0:
            raise DomainError(f"abs_tol must be > 0, got {self.abs_tol!r}")
        if not self.max_step > 0.0:
            raise DomainError(f"max_step must be > 0, got {self.max_step!r}")
        if not self.theta_max > math.pi:
            raise DomainError(f"theta_max must exceed pi, got {self.theta_max!r}")


@dataclass(frozen=True)
class Trajectory:
    """Accepted integrator steps as ``(theta, u, du/dtheta)`` rows."""

    samples: tuple[tuple[float, float, float], ...]
    phi_event: Optional[float]
    steps_taken: int
    rejected_steps: int
    mode: Mode = Mode.LINEARIZED
    arcsec_per_rad: float = 648000.0 / math.pi

    @property
    def theta(self) -> list[float]:
        return [row[0] for row in self.samples]

    @property
    def u(self) -> list[float]:
        return [row[1] for row in self.samples]

    @property
    def u_max(self) -> float:
        return max(row[1] for row in self.samples)


def _rhs(dq: DerivedQuantities, params: ModelParams, mode: Mode) -> Callable:
    D = dq.D
    delta = params.delta
    if mode is Mode.LINEARIZED:
        k2 = 1.0 - D * delta

        def f(theta: float, u: float, v: float) -> tuple[float, float]:
            return v, D - k2 * u

    else:

        def f(theta: float, u: float, v: float) -> tuple[float, float]:
            denom = 1.0 - delta * u
            if denom <= 0.0:
                raise SingularityError(
                    f"trial stage crossed the force pole (delta*u = {delta * u:.6g}) "
                    f"at theta = {theta:.6g}"
                )
            return v, D / denom - u

    return f


def _rk_step(f, theta, u, v, h, k1):
    """One Dormand-Prince step.  Returns the 5th-order state, its slope, and
    the embedded error estimate for ``(u, v)``."""
    ku = [k1[0]]
    kv = [k1[1]]
    for i in range(1, 7):
        a = _A[i]
        ui = u + h * sum(aij * kj for aij, kj in zip(a, ku))
        vi = v + h * sum(aij * kj for aij, kj in zip(a, kv))
        du, dv = f(theta + _C[i] * h, ui, vi)
        ku.append(du)
        kv.append(dv)
    # stage 7 is evaluated at the propagated solution (FSAL)
    u_new = u + h * sum(b * kj for b, kj in zip(_B, ku))
    v_new = v + h * sum(b * kj for b, kj in zip(_B, kv))
    err_u = h * sum(e * kj for e, kj in zip(_E, ku))
    err_v = h * sum(e * kj for e, kj in zip(_E, kv))
    return u_new, v_new, (ku[6], kv[6]), err_u, err_v


def integrate_orbit(
    dq: DerivedQuantities,
    params: ModelParams,
    settings: IntegrationSettings | None = None,
) -> Trajectory:
    """Integrate the photon orbit from the incoming asymptote to the outgoing one.

    Integration stops once the outgoing zero of ``u`` has been bracketed and
    refined; the last sample is the event itself.

    Raises:
        SingularityError: exact mode reached ``delta * u >= 0.9``.
        EventNotFound: ``u`` did not return to zero before ``theta_max``.
    """
    settings = settings or IntegrationSettings()
    mode = settings.mode
    rtol = settings.rel_tol
    atol = settings.abs_tol if settings.abs_tol is not None else 1e-12 * dq.D
    f = _rhs(dq, params, mode)
    delta = params.delta

    theta, u, v = 0.0, 0.0, 1.0 / params.r_impact
    k1 = f(theta, u, v)
    samples = [(theta, u, v)]
    h = min(settings.max_step, rtol ** 0.2)
    accepted = rejected = 0
    phi_event = None

    while theta < settings.theta_max:
        if accepted + rejected > _MAX_STEPS:
            raise EventNotFound(f"step budget exhausted at theta = {theta!r}")
        h = min(h, settings.theta_max - theta)
        u_new, v_new, k_new, err_u, err_v = _rk_step(f, theta, u, v, h, k1)
        scale_u = atol + rtol * max(abs(u), abs(u_new))
        scale_v = atol + rtol * max(abs(v), abs(v_new))
        err = math.sqrt(0.5 * ((err_u / scale_u) ** 2 + (err_v / scale_v) ** 2))
        if err > 1.0:
            rejected += 1
            h *= max(_MIN_FACTOR, _SAFETY * err ** -0.2)
            continue

        accepted += 1
        theta_new = theta + h
        if mode is Mode.EXACT and delta * u_new >= SINGULARITY_BOUND:
            raise SingularityError(
                f"delta*u = {delta * u_new:.6g} >= {SINGULARITY_BOUND} "
                f"at theta = {theta_new:.6g}"
            )
        if theta_new > 0.5 * math.pi and u > 0.0 and u_new <= 0.0:
            phi_event, u_ev, v_ev = _locate_zero(f, theta, u, v, k1, h)
            if phi_event > theta:
                samples.append((phi_event, u_ev, v_ev))
            break

        theta, u, v, k1 = theta_new, u_new, v_new, k_new
        samples.append((theta, u, v))
        factor = _MAX_FACTOR if err == 0.0 else min(_MAX_FACTOR, _SAFETY * err ** -0.2)
        h = min(settings.max_step, h * max(_MIN_FACTOR, factor))

    if phi_event is None:
        raise EventNotFound(
            f"no outgoing zero crossing of u before theta_max = {settings.theta_max!r}"
        )
    return Trajectory(
        samples=tuple(samples),
        phi_event=phi_event,
        steps_taken=accepted,
        rejected_steps=rejected,
        mode=mode,
        arcsec_per_rad=dq.arcsec_per_rad,
    )


def _locate_zero(f, theta, u, v, k1, h):
    """Bisect the step size until the sign change is pinned to one ulp.

    Each trial is a fresh RK step from the start of the accepted step, so
    the located event is as accurate as the step that bracketed it.
    """
    lo, hi = 0.0, h
    u_lo, v_lo = u, v
    u_hi, v_hi, _, _, _ = _rk_step(f, theta, u, v, h, k1)
    while True:
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi) or theta + lo == theta + hi:
            break
        u_mid, v_mid, _, _, _ = _rk_step(f, theta, u, v, mid, k1)
        if u_mid > 0.0:
            lo, u_lo, v_lo = mid, u_mid, v_mid
        else:
            hi, u_hi, v_hi = mid, u_mid, v_mid
    # pick whichever end is closer to the zero
    if abs(u_lo) < abs(u_hi):
        return theta + lo, u_lo, v_lo
    return theta + hi, u_hi, v_hi


def deflection_from_trajectory(traj: Trajectory, m: int = 1) -> DeflectionResult:
    if traj.phi_event is None:
        raise EventNotFound("trajectory has no outgoing zero crossing")
    method = Method.ODE_EXACT if traj.mode is Mode.EXACT else Method.ODE_LINEARIZED
    return DeflectionResult.from_phi(m, traj.phi_event, method, traj.arcsec_per_rad)


def trajectory_csv(traj: Trajectory) -> str:
    """Render accepted steps as CSV with 17 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["theta_rad", "u_per_m", "du_dtheta_per_m"])
    for row in traj.samples:
        writer.writerow([f"{x:.17g}" for x in row])
    return buf.getvalue()
