"""Trajectory post-processing: velocity differences, closed-form totals,
reference-table comparison, and parameter sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace as dc_replace

from .core import ModelParams, PopulationState
from .errors import AlignmentError, ConfigError, InvalidParameterError
from .schedule import ScheduleSpec, Trajectory, simulate_course


@dataclass(frozen=True)
class DiffPoint:
    """Velocity difference at one aligned (day, phase) grid point."""

    day: int
    phase: str
    delta: float  # phi of the first trajectory minus phi of the second


@dataclass(frozen=True)
class TrajectoryDiff:
    """Pairwise velocity differences on the shared (day, phase) grid."""

    points: tuple[DiffPoint, ...]
    unmatched_a: int  # records of the first trajectory without a partner
    unmatched_b: int  # records of the second trajectory without a partner


def diff_velocity(a: Trajectory, b: Trajectory) -> TrajectoryDiff:
    """Velocity curve of trajectory a minus trajectory b, aligned by (day, phase).

    Unmatched records on either side are skipped and counted.

    Raises:
        AlignmentError: if either trajectory is empty or the grids share no
            common point.
    """
    if not a.records or not b.records:
        raise AlignmentError("both trajectories must be nonempty")
    b_phi = {(rec.day, rec.phase): rec.phi for rec in b.records}
    points = []
    for rec in a.records:
        key = (rec.day, rec.phase)
        if key in b_phi:
            points.append(DiffPoint(day=rec.day, phase=rec.phase, delta=rec.phi - b_phi[key]))
    if not points:
        raise AlignmentError("the two trajectories share no (day, phase) grid point")
    return TrajectoryDiff(
        points=tuple(points),
        unmatched_a=len(a.records) - len(points),
        unmatched_b=len(b.records) - len(points),
    )


def lq_closed_form(n0: float, n: int, params: ModelParams) -> float:
    """Total count after n pulses with growth disabled: N0 * exp(-n(ad + bd^2)).

    Raises:
        InvalidParameterError: if n is negative.
    """
    if n < 0:
        raise InvalidParameterError(f"pulse count must be >= 0, got {n}")
    d = params.dose
    return n0 * math.exp(-n * (params.alpha * d + params.beta * d * d))


@dataclass(frozen=True)
class GoldenRow:
    """One row of the bundled reference table."""

    day: int
    phase: str
    y0: float
    y1: float
    y2: float
    velocity: float


@dataclass(frozen=True)
class CellDeviation:
    """Relative deviation of a single compared table cell."""

    day: int
    phase: str
    column: str
    expected: float
    actual: float
    relative: float


@dataclass(frozen=True)
class ComparisonReport:
    """Outcome of comparing a trajectory against a reference table."""

    matched: int  # reference rows aligned with a trajectory record
    skipped: int  # reference rows without a trajectory partner
    worst: CellDeviation | None  # largest relative deviation among compared cells
    failures: tuple[CellDeviation, ...]  # cells beyond the tolerance

    @property
    def passed(self) -> bool:
        return not self.failures


def _relative(expected: float, actual: float) -> float:
    scale = max(abs(expected), abs(actual))
    if scale == 0:
        return 0.0
    return abs(actual - expected) / scale


_GOLDEN_COLUMNS = ("y0", "y1", "y2", "velocity")


def compare_to_golden(
    trajectory: Trajectory,
    golden: tuple[GoldenRow, ...],
    tolerance: float,
    days: tuple[int, int] | None = None,
    columns: tuple[str, ...] = _GOLDEN_COLUMNS,
) -> ComparisonReport:
    """Cell-by-cell comparison of a trajectory against a reference table.

    The error metric |actual - expected| / max(|actual|, |expected|) is
    symmetric in its arguments. An optional inclusive day range and column
    subset restrict the comparison; reference rows with no matching
    trajectory record are skipped and counted.

    Raises:
        ConfigError: if a requested column is not part of the table schema.
    """
    for column in columns:
        if column not in _GOLDEN_COLUMNS:
            raise ConfigError(f"unknown comparison column: {column}")
    by_key = {(rec.day, rec.phase): rec for rec in trajectory.records}
    matched = 0
    skipped = 0
    worst: CellDeviation | None = None
    failures = []
    for row in golden:
        if days is not None and not days[0] <= row.day <= days[1]:
            continue
        rec = by_key.get((row.day, row.phase))
        if rec is None:
            skipped += 1
            continue
        matched += 1
        actual_by_column = {
            "y0": rec.y0,
            "y1": rec.y1,
            "y2": rec.y2,
            "velocity": rec.phi,
        }
        for column in columns:
            expected = getattr(row, column)
            deviation = CellDeviation(
                day=row.day,
                phase=row.phase,
                column=column,
                expected=expected,
                actual=actual_by_column[column],
                relative=_relative(expected, actual_by_column[column]),
            )
            if worst is None or deviation.relative > worst.relative:
                worst = deviation
            if deviation.relative > tolerance:
                failures.append(deviation)
    return ComparisonReport(
        matched=matched, skipped=skipped, worst=worst, failures=tuple(failures)
    )


@dataclass(frozen=True)
class SweepEntry:
    """Summary of one sweep simulation (or the reason it could not run)."""

    value: float
    error: str | None = None
    final_total: float | None = None
    final_phi: float | None = None
    threshold_day: int | None = None  # first day phi reached the caller threshold
    trajectory: Trajectory | None = None


def sweep(
    params: ModelParams,
    key: str,
    values: tuple[float, ...],
    schedule: ScheduleSpec,
    initial: PopulationState,
    threshold: float | None = None,
) -> tuple[SweepEntry, ...]:
    """One independent simulation per parameter value, in input order.

    An invalid key or an out-of-range value yields an error entry for that
    value and the sweep continues.
    """
    entries = []
    for value in values:
        try:
            swept = dc_replace(params, **{key: value})
        except TypeError:
            entries.append(SweepEntry(value=value, error=f"unknown parameter: {key}"))
            continue
        except InvalidParameterError as exc:
            entries.append(SweepEntry(value=value, error=str(exc)))
            continue
        trajectory = simulate_course(swept, schedule, initial)
        final = trajectory.final()
        threshold_day = None
        if threshold is not None:
            for rec in trajectory.post_growth_records():
                if rec.phi >= threshold:
                    threshold_day = rec.day
                    break
        entries.append(
            SweepEntry(
                value=value,
                final_total=final.total,
                final_phi=final.phi,
                threshold_day=threshold_day,
                trajectory=trajectory,
            )
        )
    return tuple(entries)
