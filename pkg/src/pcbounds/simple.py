"""Bounds on the probability of causation from arm response rates alone.

For an exposed case that developed the outcome, the probability of
causation is PC = P(Y(0)=0 | X=1, Y=1): the chance the outcome would
not have occurred absent exposure. Writing p1 = P(Y=1 | X<-1) and
p0 = P(Y=1 | X<-0) for the randomized arm rates, the sharp bounds are

    max{0, 1 - p0/p1}  <=  PC  <=  min{1 - p0, p1} / p1.

The lower endpoint is the classic excess-fraction 1 - 1/RR; the upper
endpoint is the Frechet cap on P(Y(0)=0, Y(1)=1) divided by p1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import BoundInterval, PcUndefinedError, Probability

__all__ = ["SimpleMargins", "risk_ratio", "simple_bounds"]


@dataclass(frozen=True, slots=True)
class SimpleMargins:
    """Arm response rates p1 = P(Y=1 | X<-1) and p0 = P(Y=1 | X<-0)."""

    p1: Probability
    p0: Probability

    def __post_init__(self) -> None:
        object.__setattr__(self, "p1", Probability(self.p1))
        object.__setattr__(self, "p0", Probability(self.p0))


def risk_ratio(m: SimpleMargins) -> float:
    """p1/p0 as a float; +inf when only p0 is zero, nan when both are.

    ``nan`` is a value here, not an error, so callers can decide what an
    outcome-free trial should mean for them.
    """
    if m.p0 == 0.0:
        return math.nan if m.p1 == 0.0 else math.inf
    return float(m.p1) / float(m.p0)


def simple_bounds(m: SimpleMargins) -> BoundInterval:
    """Sharp PC bounds from the two arm rates.

    Raises :class:`PcUndefinedError` when p1 = 0: with no exposed cases
    the conditioning event is empty and PC has no value.
    """
    p1 = float(m.p1)
    p0 = float(m.p0)
    if p1 == 0.0:
        raise PcUndefinedError(
            "P(Y=1 | X<-1) = 0: there are no exposed cases, so the "
            "probability of causation is undefined"
        )
    lower = max(0.0, 1.0 - p0 / p1)
    upper = min(1.0 - p0, p1) / p1
    return BoundInterval(Probability(lower), Probability(upper))
