"""Validated probability scalars, bound intervals, and 2x2 trial counts.

Everything downstream trades in these types: values are checked once at
the edge, after which the bound formulas can assume unit-interval floats
and ordered intervals. Two tolerance regimes apply throughout the
package:

* ``STRUCT_TOL`` for identities that hold by construction and should
  only ever be off by accumulated float error,
* ``REPORT_TOL`` for agreement with 2-decimal reference displays and
  for cross-checks between derived and observed rates.

Micro-violations from float arithmetic (a hair below 0, a hair above 1,
a lower bound a hair above its upper bound) are clamped, but only inside
a window of ``CLAMP_TOL``; anything larger is a real error and raises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

STRUCT_TOL = 1e-9
REPORT_TOL = 0.005
CLAMP_TOL = 1e-12

__all__ = [
    "STRUCT_TOL",
    "REPORT_TOL",
    "CLAMP_TOL",
    "PcBoundsError",
    "InvalidInputError",
    "InconsistentBoundsError",
    "PcUndefinedError",
    "InsufficientDataError",
    "AssumptionViolationError",
    "LawGenerationError",
    "RecordParseError",
    "Probability",
    "BoundInterval",
    "CountTable",
    "interval",
    "prob_from_counts",
]


class PcBoundsError(Exception):
    """Base class for every error this package raises on purpose."""


class InvalidInputError(PcBoundsError, ValueError):
    """A value, field, or file failed validation before any math ran."""


class InconsistentBoundsError(PcBoundsError):
    """A lower bound exceeded its upper bound by more than float noise.

    Signals a logic bug or inconsistent inputs upstream, never a
    condition the caller should retry.
    """


class PcUndefinedError(PcBoundsError):
    """The conditioning event (an exposed case with the outcome) has
    probability zero, so the probability of causation is undefined."""


class InsufficientDataError(PcBoundsError):
    """A required arm or stratum has no records to estimate from."""


class AssumptionViolationError(PcBoundsError):
    """Supplied margins contradict an assumption the method needs."""


class LawGenerationError(PcBoundsError):
    """Random law sampling failed to match the requested margins."""


class RecordParseError(InvalidInputError):
    """A records or JSON file is malformed; the message names the spot."""


class Probability(float):
    """A float validated to lie in the closed unit interval.

    Values within ``CLAMP_TOL`` below 0 or above 1 are clamped to the
    boundary; anything further out raises :class:`InvalidInputError`.
    Instances behave as plain floats in arithmetic, and ``min``/``max``
    work on them directly. Helpers that are guaranteed to land back in
    [0, 1] return ``Probability`` again.
    """

    __slots__ = ()

    def __new__(cls, value: float) -> "Probability":
        v = float(value)
        if math.isnan(v):
            raise InvalidInputError("probability must not be NaN")
        if -CLAMP_TOL <= v < 0.0:
            v = 0.0
        elif 1.0 < v <= 1.0 + CLAMP_TOL:
            v = 1.0
        if not 0.0 <= v <= 1.0:
            raise InvalidInputError(f"probability {value!r} outside [0, 1]")
        return super().__new__(cls, v)

    def complement(self) -> "Probability":
        """Return 1 - p as a validated probability."""
        return Probability(1.0 - float(self))

    def product(self, other: float) -> "Probability":
        """Return p * other, validated (other must be a probability)."""
        return Probability(float(self) * float(Probability(other)))


@dataclass(frozen=True, slots=True)
class BoundInterval:
    """Closed interval [lower, upper] of probabilities.

    Construction coerces both endpoints through :class:`Probability`.
    A lower endpoint at most ``CLAMP_TOL`` above the upper one is float
    noise and collapses to the degenerate interval at ``lower`` (the
    lower endpoint is kept because it is shared across bound families
    and must stay stable); a larger inversion raises
    :class:`InconsistentBoundsError`.
    """

    lower: Probability
    upper: Probability

    def __post_init__(self) -> None:
        lo = Probability(self.lower)
        hi = Probability(self.upper)
        if lo > hi:
            if lo - hi <= CLAMP_TOL:
                hi = lo
            else:
                raise InconsistentBoundsError(
                    f"lower bound {float(lo)!r} exceeds upper bound {float(hi)!r}"
                )
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def width(self) -> float:
        return float(self.upper) - float(self.lower)

    def contains(self, value: float, tol: float = 0.0) -> bool:
        """Whether value lies in the interval, widened by tol on each side."""
        return self.lower - tol <= value <= self.upper + tol

    def __str__(self) -> str:
        return f"[{float(self.lower):.6g}, {float(self.upper):.6g}]"


def interval(lower: float, upper: float) -> BoundInterval:
    """Build a :class:`BoundInterval`, clamping micro-inversions."""
    return BoundInterval(Probability(lower), Probability(upper))


def _require_count(name: str, value: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidInputError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise InvalidInputError(f"{name} must be nonnegative, got {value}")
    return value


@dataclass(frozen=True, slots=True)
class CountTable:
    """Exposure-by-outcome counts from a two-arm randomized trial."""

    exposed_event: int
    exposed_total: int
    unexposed_event: int
    unexposed_total: int

    def __post_init__(self) -> None:
        for name in (
            "exposed_event",
            "exposed_total",
            "unexposed_event",
            "unexposed_total",
        ):
            _require_count(name, getattr(self, name))
        if self.exposed_total == 0 or self.unexposed_total == 0:
            raise InvalidInputError("arm totals must be positive")
        if self.exposed_event > self.exposed_total:
            raise InvalidInputError(
                f"exposed_event {self.exposed_event} exceeds exposed_total "
                f"{self.exposed_total}"
            )
        if self.unexposed_event > self.unexposed_total:
            raise InvalidInputError(
                f"unexposed_event {self.unexposed_event} exceeds unexposed_total "
                f"{self.unexposed_total}"
            )


def prob_from_counts(events: int, total: int) -> Probability:
    """Empirical frequency events/total as a validated probability."""
    _require_count("events", events)
    _require_count("total", total)
    if total == 0:
        raise InvalidInputError("total must be positive")
    if events > total:
        raise InvalidInputError(f"events {events} exceed total {total}")
    return Probability(events / total)
