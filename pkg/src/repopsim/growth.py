"""Growth dynamics: fraction mixing on the simplex plus count division.

One growth interval proceeds in two stages. First the fraction triple evolves
under a replicator field with mutation flow between adjacent compartments,
integrated with a classical fixed-step fourth-order scheme. Then the counts
are rebuilt from the evolved fractions and each compartment divides by the
factor 2^(v_i * dt).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .core import (
    POST_GROWTH,
    RADIATION_PERIOD,
    ModelParams,
    PopulationState,
    VelocityVector,
    counts_to_fractions,
    fractions_to_counts,
    mean_velocity,
    snap_count,
    velocities_of,
)
from .errors import InvalidParameterError, InvalidStateError, NumericInstabilityError

# Components may transiently leave [0, 1] by at most this much.
_STABILITY_TOL = 1e-9
# Endpoint drift beyond this triggers proportional renormalization.
_RENORM_TOL = 1e-12

Triple = tuple[float, float, float]


@dataclass(frozen=True)
class ReplicatorField:
    """Right-hand-side data for one growth interval (v2 frozen throughout)."""

    v: VelocityVector  # velocities in force for the interval
    q_mix: float  # slow-to-middle mutation rate
    p_mix: float  # middle-to-fast mutation rate

    def __post_init__(self) -> None:
        for name in ("q_mix", "p_mix"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise InvalidParameterError(f"{name} must lie in [0, 1], got {value}")


def replicator_rhs(field: ReplicatorField, x: Triple) -> Triple:
    """Time derivative of the fraction triple under the replicator field.

    The three components sum to Phi * (1 - sum(x)), hence to zero on the
    simplex, which is what keeps the integration on the simplex without any
    forced renormalization.

    Raises:
        InvalidStateError: if x is off the simplex beyond tolerance.
    """
    phi = mean_velocity(x, field.v)
    v = field.v
    return (
        v.v0 * x[0] * (1.0 - field.q_mix) - x[0] * phi,
        v.v1 * x[1] * (1.0 - field.p_mix) + v.v0 * x[0] * field.q_mix - x[1] * phi,
        v.v2 * x[2] + v.v1 * x[1] * field.p_mix - x[2] * phi,
    )


def integrate_growth(
    field: ReplicatorField,
    x: Triple,
    duration: float,
    step: float,
    renormalize: bool = True,
) -> Triple:
    """Fraction triple after `duration` days of mixing under the field.

    Classical fixed-step fourth-order integration. The endpoint is projected
    back onto the simplex proportionally only if its drift exceeds 1e-12;
    with renormalize off the raw endpoint is returned.

    Raises:
        InvalidParameterError: for a nonpositive duration or step, or a step
            exceeding the duration.
        NumericInstabilityError: if any component leaves [0, 1] by more than
            1e-9 during the integration, naming the offending step.
    """
    if not duration > 0:
        raise InvalidParameterError(f"duration must be > 0, got {duration}")
    if not 0 < step <= duration:
        raise InvalidParameterError(f"step must lie in (0, duration], got {step}")
    n = max(1, round(duration / step))
    h = duration / n
    for i in range(n):
        try:
            k1 = replicator_rhs(field, x)
            k2 = replicator_rhs(
                field,
                (x[0] + 0.5 * h * k1[0], x[1] + 0.5 * h * k1[1], x[2] + 0.5 * h * k1[2]),
            )
            k3 = replicator_rhs(
                field,
                (x[0] + 0.5 * h * k2[0], x[1] + 0.5 * h * k2[1], x[2] + 0.5 * h * k2[2]),
            )
            k4 = replicator_rhs(
                field, (x[0] + h * k3[0], x[1] + h * k3[1], x[2] + h * k3[2])
            )
        except InvalidStateError as exc:
            raise NumericInstabilityError(
                f"stage point left the simplex at step {i + 1} of {n} "
                f"(t={(i + 1) * h:.4f})"
            ) from exc
        x = (
            x[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            x[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            x[2] + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
        )
        if min(x) < -_STABILITY_TOL or max(x) > 1.0 + _STABILITY_TOL:
            raise NumericInstabilityError(
                f"component left [0, 1] at step {i + 1} of {n} (t={(i + 1) * h:.4f}): {x}"
            )
    if renormalize and abs(x[0] + x[1] + x[2] - 1.0) > _RENORM_TOL:
        total = x[0] + x[1] + x[2]
        x = (x[0] / total, x[1] / total, x[2] / total)
    return x


def apply_division(
    state: PopulationState,
    v: VelocityVector,
    duration: float,
    integer_rounding: bool = False,
) -> PopulationState:
    """Each compartment multiplied by its division factor 2^(v_i * duration).

    Raises:
        InvalidParameterError: for a nonpositive duration.
    """
    if not duration > 0:
        raise InvalidParameterError(f"duration must be > 0, got {duration}")
    y0 = state.y0 * 2.0 ** (v.v0 * duration)
    y1 = state.y1 * 2.0 ** (v.v1 * duration)
    y2 = state.y2 * 2.0 ** (v.v2 * duration)
    if integer_rounding:
        y0, y1, y2 = snap_count(y0), snap_count(y1), snap_count(y2)
    return replace(state, y0=y0, y1=y1, y2=y2, phase=POST_GROWTH)


@dataclass(frozen=True)
class GrowthStep:
    """Outcome of one growth interval, with integrator diagnostics."""

    state: PopulationState  # post-division population
    phi: float  # mean velocity at the end of the mixing stage
    v2: float  # fast-fraction velocity frozen for the interval
    drift: float  # raw |sum(x) - 1| at the integrator endpoint
    renormalized: bool  # whether the simplex guard fired


def growth_day_detail(
    state: PopulationState,
    params: ModelParams,
    pulses: int,
    period: str = RADIATION_PERIOD,
    interval: float = 1.0,
) -> GrowthStep:
    """One growth interval with the recorded mean velocity and diagnostics.

    Stages: freeze the velocity vector from the pulse count and period, evolve
    the fractions, rebuild counts from the evolved fractions, then divide.

    Raises:
        InvalidStateError: for an empty population.
    """
    total = state.total()
    x = counts_to_fractions(state)
    if x is None:
        raise InvalidStateError("cannot grow an empty population")
    v = velocities_of(params, pulses, period)
    field = ReplicatorField(v, params.q_mix, params.p_mix)
    x_end = integrate_growth(field, x, interval, params.ode_step, renormalize=False)
    drift = abs(x_end[0] + x_end[1] + x_end[2] - 1.0)
    renormalized = drift > _RENORM_TOL
    if renormalized:
        s = x_end[0] + x_end[1] + x_end[2]
        x_end = (x_end[0] / s, x_end[1] / s, x_end[2] / s)
    phi = mean_velocity(x_end, v)
    mixed = fractions_to_counts(x_end, total, params.integer_rounding)
    intermediate = replace(state, y0=mixed[0], y1=mixed[1], y2=mixed[2])
    divided = apply_division(intermediate, v, interval, params.integer_rounding)
    return GrowthStep(state=divided, phi=phi, v2=v.v2, drift=drift, renormalized=renormalized)


def growth_day(
    state: PopulationState,
    params: ModelParams,
    pulses: int,
    period: str = RADIATION_PERIOD,
    interval: float = 1.0,
) -> PopulationState:
    """Population after one growth interval (mixing, count rebuild, division)."""
    return growth_day_detail(state, params, pulses, period, interval).state
