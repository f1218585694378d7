"""Mediator-informed bounds on the probability of causation.

Margins name the probability of the value 1 throughout. For the partial
setting the inputs are the six identifiable quantities

    y_xm = P(Y*(x, m) = 1)   response when exposure is set to x and the
                             mediator to m,
    m_x  = P(M(x) = 1)       mediator response to exposure x,

and for complete mediation (exposure acts only through the mediator,
with Y*(m) the shared response surface)

    a = P(M(0)=0),  b = P(M(1)=1),  c = P(Y*(0)=0),  d = P(Y*(1)=1).

Both settings keep the excess-fraction lower bound of the two derived
arm rates; what the mediator buys is a smaller feasible maximum for the
joint event {Y(0)=0, Y(1)=1}, hence a tighter upper bound. The upper
numerators are sums of Frechet caps: one product per mediator
trajectory (m0, m1), each capping how much of that trajectory's mass
can land on response pairs with Y*(0, m0)=0 and Y*(1, m1)=1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    STRUCT_TOL,
    AssumptionViolationError,
    BoundInterval,
    InconsistentBoundsError,
    PcUndefinedError,
    Probability,
)
from .simple import SimpleMargins, simple_bounds

__all__ = [
    "CompleteMediationMargins",
    "PartialMediationMargins",
    "ComparisonReport",
    "complete_numerator",
    "complete_bounds",
    "derive_simple_from_complete",
    "partial_upper_terms",
    "partial_upper_numerator",
    "partial_bounds",
    "derive_simple_from_partial",
    "decomposition",
    "simple_numerator_via_decomposition",
    "collapse_to_complete",
    "compare",
]


@dataclass(frozen=True, slots=True)
class CompleteMediationMargins:
    """Margins when exposure acts on the outcome only through the mediator."""

    a: Probability
    b: Probability
    c: Probability
    d: Probability

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, Probability(getattr(self, name)))


@dataclass(frozen=True, slots=True)
class PartialMediationMargins:
    """Response-surface and mediator margins when X may also act directly.

    Stored in the P(=1) convention. Worked examples often quote the
    complements (no-outcome and mediator-absent rates); use
    :meth:`from_zero_rates` for those so the conversion stays visible at
    the call site instead of hiding in arithmetic.
    """

    y00: Probability
    y01: Probability
    y10: Probability
    y11: Probability
    m0: Probability
    m1: Probability

    def __post_init__(self) -> None:
        for name in ("y00", "y01", "y10", "y11", "m0", "m1"):
            object.__setattr__(self, name, Probability(getattr(self, name)))

    @classmethod
    def from_zero_rates(
        cls,
        *,
        y00_zero: float,
        y01_zero: float,
        y10_zero: float,
        y11_zero: float,
        m0_zero: float,
        m1_zero: float,
    ) -> "PartialMediationMargins":
        """Build from rates quoted as P(Y*(x,m)=0) and P(M(x)=0)."""
        return cls(
            y00=Probability(y00_zero).complement(),
            y01=Probability(y01_zero).complement(),
            y10=Probability(y10_zero).complement(),
            y11=Probability(y11_zero).complement(),
            m0=Probability(m0_zero).complement(),
            m1=Probability(m1_zero).complement(),
        )


def complete_numerator(m: CompleteMediationMargins) -> Probability:
    """Largest feasible P(Y(0)=0, Y(1)=1 | X<-1) under complete mediation.

    Case split on the orderings of (a, b) and (c, d); ties land in the
    "<=" branch, and the adjacent formulas agree at ties, so the split
    is unambiguous. Every branch equals
    min{a,b} min{c,d} + min{1-a,1-b} min{1-c,1-d}.
    """
    a, b, c, d = float(m.a), float(m.b), float(m.c), float(m.d)
    if a <= b and c <= d:
        value = a * c + (1.0 - d) * (1.0 - b)
    elif a > b and c <= d:
        value = b * c + (1.0 - d) * (1.0 - a)
    elif a <= b:  # c > d
        value = a * d + (1.0 - c) * (1.0 - b)
    else:  # a > b and c > d
        value = b * d + (1.0 - a) * (1.0 - c)
    return Probability(value)


def derive_simple_from_complete(m: CompleteMediationMargins) -> SimpleMargins:
    """Arm response rates implied by complete-mediation margins.

    p1 = b d + (1-b)(1-c) and p0 = (1-a) d + a (1-c): push the mediator
    response for each arm through the shared outcome surface.
    """
    a, b, c, d = float(m.a), float(m.b), float(m.c), float(m.d)
    p1 = b * d + (1.0 - b) * (1.0 - c)
    p0 = (1.0 - a) * d + a * (1.0 - c)
    return SimpleMargins(p1=Probability(p1), p0=Probability(p0))


def complete_bounds(m: CompleteMediationMargins) -> BoundInterval:
    """PC bounds under complete mediation.

    The lower endpoint is the simple lower bound of the derived arm
    rates (a mediator never improves the lower bound); the upper
    endpoint divides :func:`complete_numerator` by the derived p1.
    """
    derived = derive_simple_from_complete(m)
    if derived.p1 == 0.0:
        raise PcUndefinedError(
            "derived P(Y=1 | X<-1) = 0 under complete mediation: the "
            "probability of causation is undefined"
        )
    lower = simple_bounds(derived).lower
    upper = float(complete_numerator(m)) / float(derived.p1)
    return BoundInterval(lower, Probability(upper))


def partial_upper_terms(
    m: PartialMediationMargins,
) -> tuple[float, float, float, float]:
    """The four Frechet-cap products, one per mediator trajectory.

    Term order is (m0, m1) = (0,0), (0,1), (1,0), (1,1), writing
    q_xm = 1 - y_xm for the no-outcome rates.
    """
    q00 = 1.0 - float(m.y00)
    q01 = 1.0 - float(m.y01)
    y10, y11 = float(m.y10), float(m.y11)
    m0, m1 = float(m.m0), float(m.m1)
    t1 = min(q00, y10) * min(1.0 - m0, 1.0 - m1)
    t2 = min(q00, y11) * min(1.0 - m0, m1)
    t3 = min(q01, y10) * min(m0, 1.0 - m1)
    t4 = min(q01, y11) * min(m0, m1)
    return (t1, t2, t3, t4)


def partial_upper_numerator(m: PartialMediationMargins) -> float:
    """Sum of the four trajectory caps, returned raw.

    The sum can exceed 1 (it can reach 2 when both arm events are
    certain), so it is a plain float, not a probability; the bound
    clamps only after dividing by p1.
    """
    t1, t2, t3, t4 = partial_upper_terms(m)
    return t1 + t2 + t3 + t4


def derive_simple_from_partial(m: PartialMediationMargins) -> SimpleMargins:
    """Arm response rates implied by the six partial-mediation margins."""
    p1 = float(m.y10) * (1.0 - float(m.m1)) + float(m.y11) * float(m.m1)
    p0 = float(m.y00) * (1.0 - float(m.m0)) + float(m.y01) * float(m.m0)
    return SimpleMargins(p1=Probability(p1), p0=Probability(p0))


def partial_bounds(m: PartialMediationMargins) -> BoundInterval:
    """PC bounds using the mediator without assuming complete mediation.

    Shares its lower endpoint with the simple bounds of the derived arm
    rates; the upper endpoint is the four-term numerator over p1,
    clamped at 1.
    """
    derived = derive_simple_from_partial(m)
    if derived.p1 == 0.0:
        raise PcUndefinedError(
            "derived P(Y=1 | X<-1) = 0: the probability of causation is "
            "undefined for these margins"
        )
    lower = simple_bounds(derived).lower
    upper = min(1.0, partial_upper_numerator(m) / float(derived.p1))
    return BoundInterval(lower, Probability(upper))


def decomposition(
    m: PartialMediationMargins,
) -> tuple[Probability, Probability, Probability, Probability]:
    """Mediator-resolved split (alpha, beta, gamma, delta) of the arm events.

    alpha + beta = P(Y(0)=0) and gamma + delta = P(Y(1)=1), with each
    piece attributing the arm event to one mediator value.
    """
    alpha = (1.0 - float(m.y00)) * (1.0 - float(m.m0))
    beta = (1.0 - float(m.y01)) * float(m.m0)
    gamma = float(m.y10) * (1.0 - float(m.m1))
    delta = float(m.y11) * float(m.m1)
    return (
        Probability(alpha),
        Probability(beta),
        Probability(gamma),
        Probability(delta),
    )


def simple_numerator_via_decomposition(m: PartialMediationMargins) -> Probability:
    """min{alpha+beta, gamma+delta}, cross-checked against the derived rates.

    Verifies alpha + beta = 1 - p0 and gamma + delta = p1 to 1e-12
    before returning; a mismatch means the decomposition and the
    derivation disagree, which is a logic bug, not a data problem.
    """
    alpha, beta, gamma, delta = decomposition(m)
    derived = derive_simple_from_partial(m)
    left = float(alpha) + float(beta)
    right = float(gamma) + float(delta)
    if abs(left - (1.0 - float(derived.p0))) > 1e-12:
        raise InconsistentBoundsError(
            f"alpha + beta = {left!r} does not reproduce 1 - p0 = "
            f"{1.0 - float(derived.p0)!r}"
        )
    if abs(right - float(derived.p1)) > 1e-12:
        raise InconsistentBoundsError(
            f"gamma + delta = {right!r} does not reproduce p1 = "
            f"{float(derived.p1)!r}"
        )
    return Probability(min(left, right))


def collapse_to_complete(m: PartialMediationMargins) -> CompleteMediationMargins:
    """Reindex partial margins as complete-mediation margins.

    Valid when the response surface does not depend on x (y00 = y10 and
    y01 = y11); the caller is responsible for checking that claim. The
    map is a = 1-m0, b = m1, c = 1-y00, d = y11.
    """
    return CompleteMediationMargins(
        a=Probability(1.0 - float(m.m0)),
        b=Probability(float(m.m1)),
        c=Probability(1.0 - float(m.y00)),
        d=Probability(float(m.y11)),
    )


@dataclass(frozen=True, slots=True)
class ComparisonReport:
    """Side-by-side intervals plus the quantities the comparison rests on.

    numerator_partial is a raw float (the four-term sum is not a
    probability); construction verifies it never exceeds twice the
    simple numerator.
    """

    simple_interval: BoundInterval
    partial_interval: BoundInterval
    complete_interval: BoundInterval | None
    combined_interval: BoundInterval
    alpha: Probability
    beta: Probability
    gamma: Probability
    delta: Probability
    numerator_simple: Probability
    numerator_partial: float

    def __post_init__(self) -> None:
        if self.numerator_partial > 2.0 * float(self.numerator_simple) + STRUCT_TOL:
            raise InconsistentBoundsError(
                f"partial numerator {self.numerator_partial!r} exceeds twice "
                f"the simple numerator {float(self.numerator_simple)!r}"
            )


def compare(
    m: PartialMediationMargins,
    complete_claim: bool = False,
    claim_tol: float = STRUCT_TOL,
) -> ComparisonReport:
    """Compute all applicable intervals and intersect them.

    With ``complete_claim`` the x-invariance of the response surface is
    required to hold within ``claim_tol`` (keep the default for analytic
    margins; pass a statistical tolerance for estimated ones), the
    margins are collapsed, and the complete-mediation interval joins the
    intersection.
    """
    if complete_claim:
        for mval, lhs, rhs, names in (
            (0, float(m.y00), float(m.y10), ("y00", "y10")),
            (1, float(m.y01), float(m.y11), ("y01", "y11")),
        ):
            gap = abs(lhs - rhs)
            if gap > claim_tol:
                raise AssumptionViolationError(
                    f"complete-mediation claim fails at M={mval}: "
                    f"|{names[0]} - {names[1]}| = {gap:.6g} exceeds {claim_tol:.6g}"
                )
    derived = derive_simple_from_partial(m)
    simple_iv = simple_bounds(derived)
    partial_iv = partial_bounds(m)
    complete_iv = complete_bounds(collapse_to_complete(m)) if complete_claim else None

    lowers = [simple_iv.lower, partial_iv.lower]
    uppers = [simple_iv.upper, partial_iv.upper]
    if complete_iv is not None:
        lowers.append(complete_iv.lower)
        uppers.append(complete_iv.upper)
    combined = BoundInterval(max(lowers), min(uppers))

    alpha, beta, gamma, delta = decomposition(m)
    return ComparisonReport(
        simple_interval=simple_iv,
        partial_interval=partial_iv,
        complete_interval=complete_iv,
        combined_interval=combined,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        delta=delta,
        numerator_simple=simple_numerator_via_decomposition(m),
        numerator_partial=partial_upper_numerator(m),
    )
