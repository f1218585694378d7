"""Margin estimation from randomized-trial records, plus file ingestion.

Estimators are plain stratum frequencies; under randomization of X they
are consistent for the quantities the bound formulas need. Reading the
mediator response surface from (x, m) strata additionally assumes the
observed mediator value identifies the response at that value (the
mediator itself is not randomized); that assumption is recorded in
report metadata by the CLI rather than adjudicated here.

File formats owned by this module:

* record CSV: header ``x,m,y`` or ``x,y``, every value 0 or 1,
* count JSON: object with integer fields ``exposed_event``,
  ``exposed_total``, ``unexposed_event``, ``unexposed_total``,
* margins JSON: an object whose key set picks the type, either
  ``{p1, p0}``, ``{a, b, c, d}``, or ``{y00, y01, y10, y11, m0, m1}``,
  all probabilities of the value 1; unknown fields are rejected.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import (
    REPORT_TOL,
    CountTable,
    InsufficientDataError,
    InvalidInputError,
    Probability,
    RecordParseError,
    prob_from_counts,
)
from .mediation import CompleteMediationMargins, PartialMediationMargins
from .oracle import TrialRecord
from .simple import SimpleMargins

__all__ = [
    "Dataset",
    "DirectEffectWarning",
    "estimate_simple",
    "estimate_partial",
    "estimate_complete",
    "margins_from_count_table",
    "read_records_csv",
    "write_records_csv",
    "read_count_json",
    "read_margins_json",
]


class DirectEffectWarning(UserWarning):
    """Outcome rates differ across arms within a mediator stratum more
    than sampling noise explains, which contradicts complete mediation."""


@dataclass(frozen=True)
class Dataset:
    """An immutable batch of trial records with cached count summaries."""

    records: tuple[TrialRecord, ...]
    source: str = ""
    # filled in __post_init__; kept out of the constructor signature
    has_mediator: bool = field(init=False, default=False)

    def __post_init__(self) -> None:
        records = tuple(self.records)
        if not records:
            raise InsufficientDataError("dataset has no records")
        object.__setattr__(self, "records", records)
        with_m = sum(1 for r in records if r.m is not None)
        if 0 < with_m < len(records):
            raise InvalidInputError(
                f"records mix mediator and mediator-free rows "
                f"({with_m} of {len(records)} carry m)"
            )
        object.__setattr__(self, "has_mediator", with_m == len(records))
        x = np.fromiter((r.x for r in records), dtype=np.int8, count=len(records))
        y = np.fromiter((r.y for r in records), dtype=np.int8, count=len(records))
        if self.has_mediator:
            mcol = np.fromiter(
                (r.m for r in records), dtype=np.int8, count=len(records)
            )
        else:
            mcol = None
        object.__setattr__(self, "_x", x)
        object.__setattr__(self, "_y", y)
        object.__setattr__(self, "_m", mcol)

    def __len__(self) -> int:
        return len(self.records)

    def arm_counts(self, x: int) -> tuple[int, int]:
        """(events, total) within arm x."""
        in_arm = self._x == x
        return int(self._y[in_arm].sum()), int(in_arm.sum())

    def stratum_counts(self, x: int, m: int) -> tuple[int, int]:
        """(events, total) within the (x, m) stratum."""
        sel = (self._x == x) & (self._m == m)
        return int(self._y[sel].sum()), int(sel.sum())

    def mediator_counts(self, x: int) -> tuple[int, int]:
        """(m=1 count, total) within arm x."""
        in_arm = self._x == x
        return int(self._m[in_arm].sum()), int(in_arm.sum())


def _require_arm(d: Dataset, x: int) -> int:
    _, n = d.arm_counts(x)
    if n == 0:
        raise InsufficientDataError(
            f"arm X={x} has no records; P(Y=1 | X<-{x}) is inestimable"
        )
    return n


def estimate_simple(d: Dataset) -> SimpleMargins:
    """Arm response frequencies (p1, p0)."""
    for x in (0, 1):
        _require_arm(d, x)
    e1, n1 = d.arm_counts(1)
    e0, n0 = d.arm_counts(0)
    return SimpleMargins(p1=prob_from_counts(e1, n1), p0=prob_from_counts(e0, n0))


def estimate_partial(d: Dataset) -> PartialMediationMargins:
    """Stratum frequencies for the six partial-mediation margins."""
    if not d.has_mediator:
        raise InvalidInputError("records carry no mediator column")
    rates = {}
    for x in (0, 1):
        for m in (0, 1):
            events, n = d.stratum_counts(x, m)
            if n == 0:
                raise InsufficientDataError(
                    f"stratum (x={x}, m={m}) has no records; "
                    f"P(Y=1 | X<-{x}, M<-{m}) is inestimable"
                )
            rates[(x, m)] = prob_from_counts(events, n)
    med = {}
    for x in (0, 1):
        ones, n = d.mediator_counts(x)
        if n == 0:
            raise InsufficientDataError(
                f"arm X={x} has no records; P(M=1 | X<-{x}) is inestimable"
            )
        med[x] = prob_from_counts(ones, n)
    return PartialMediationMargins(
        y00=rates[(0, 0)],
        y01=rates[(0, 1)],
        y10=rates[(1, 0)],
        y11=rates[(1, 1)],
        m0=med[0],
        m1=med[1],
    )


def estimate_complete(d: Dataset, tol: float = REPORT_TOL) -> CompleteMediationMargins:
    """Complete-mediation margins (a, b, c, d) from records.

    a and b come from the mediator frequencies of their own arms; c and
    d pool the outcome over both arms within each mediator stratum,
    which is only valid if the outcome depends on exposure through the
    mediator alone. When a stratum's outcome rates differ across arms
    by more than ``tol`` plus three standard errors, a
    :class:`DirectEffectWarning` is emitted (a diagnostic, not an
    error).
    """
    if not d.has_mediator:
        raise InvalidInputError("records carry no mediator column")
    for x in (0, 1):
        _require_arm(d, x)
    m1_in_0, n0 = d.mediator_counts(0)
    m1_in_1, n1 = d.mediator_counts(1)
    a = prob_from_counts(n0 - m1_in_0, n0)
    b = prob_from_counts(m1_in_1, n1)

    pooled = {}
    for m in (0, 1):
        e1, c1 = d.stratum_counts(1, m)
        e0, c0 = d.stratum_counts(0, m)
        if c1 + c0 == 0:
            raise InsufficientDataError(
                f"mediator stratum M={m} has no records; "
                f"P(Y=1 | M<-{m}) is inestimable"
            )
        pooled[m] = prob_from_counts(e1 + e0, c1 + c0)
        if c1 > 0 and c0 > 0:
            p1m = e1 / c1
            p0m = e0 / c0
            se = math.sqrt(p1m * (1 - p1m) / c1 + p0m * (1 - p0m) / c0)
            if abs(p1m - p0m) > tol + 3.0 * se:
                warnings.warn(
                    f"outcome rates differ across arms within M={m}: "
                    f"|{p1m:.4g} - {p0m:.4g}| exceeds {tol:.3g} + 3 SE "
                    f"({se:.3g}); pooled c/d may be biased",
                    DirectEffectWarning,
                    stacklevel=2,
                )
    c = pooled[0].complement()
    return CompleteMediationMargins(a=a, b=b, c=c, d=pooled[1])


def margins_from_count_table(t: CountTable) -> SimpleMargins:
    """Arm rates from a 2x2 count table."""
    return SimpleMargins(
        p1=prob_from_counts(t.exposed_event, t.exposed_total),
        p0=prob_from_counts(t.unexposed_event, t.unexposed_total),
    )


def read_records_csv(path: str | Path) -> Dataset:
    """Parse a record CSV into a :class:`Dataset`.

    The header fixes the schema (``x,m,y`` or ``x,y``); every data cell
    must be the token 0 or 1. Errors name the offending line.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise RecordParseError(f"{path}:1: file is empty") from None
        header = [h.strip() for h in header]
        if header == ["x", "m", "y"]:
            with_m = True
        elif header == ["x", "y"]:
            with_m = False
        else:
            raise RecordParseError(
                f"{path}:1: header must be 'x,m,y' or 'x,y', got {','.join(header)!r}"
            )
        width = 3 if with_m else 2
        records = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != width:
                raise RecordParseError(
                    f"{path}:{lineno}: expected {width} fields, got {len(row)}"
                )
            values = []
            for col, token in zip(header, row):
                token = token.strip()
                if token not in ("0", "1"):
                    raise RecordParseError(
                        f"{path}:{lineno}: column {col!r} must be 0 or 1, "
                        f"got {token!r}"
                    )
                values.append(int(token))
            if with_m:
                records.append(TrialRecord(x=values[0], m=values[1], y=values[2]))
            else:
                records.append(TrialRecord(x=values[0], m=None, y=values[1]))
    if not records:
        raise RecordParseError(f"{path}:1: no data rows")
    return Dataset(records=tuple(records), source=str(path))


def write_records_csv(records, path: str | Path) -> int:
    """Write records in the CSV format :func:`read_records_csv` accepts.

    Returns the number of rows written. The mediator column is present
    exactly when the records carry mediator values.
    """
    records = list(records)
    if not records:
        raise InvalidInputError("no records to write")
    with_m = records[0].m is not None
    if any((r.m is not None) != with_m for r in records):
        raise InvalidInputError("records mix mediator and mediator-free rows")
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        if with_m:
            writer.writerow(["x", "m", "y"])
            writer.writerows((r.x, r.m, r.y) for r in records)
        else:
            writer.writerow(["x", "y"])
            writer.writerows((r.x, r.y) for r in records)
    return len(records)


def _load_json_object(path: Path) -> dict:
    try:
        with path.open() as fh:
            data = json.load(fh)
    except json.JSONDecodeError as e:
        raise RecordParseError(f"{path}:{e.lineno}: invalid JSON: {e.msg}") from None
    if not isinstance(data, dict):
        raise RecordParseError(f"{path}: expected a JSON object")
    return data


def read_count_json(path: str | Path) -> CountTable:
    """Parse a count JSON file into a :class:`CountTable`."""
    path = Path(path)
    data = _load_json_object(path)
    fields = ("exposed_event", "exposed_total", "unexposed_event", "unexposed_total")
    unknown = sorted(set(data) - set(fields))
    if unknown:
        raise InvalidInputError(f"{path}: unknown fields {unknown}")
    missing = sorted(set(fields) - set(data))
    if missing:
        raise InvalidInputError(f"{path}: missing fields {missing}")
    values = {}
    for name in fields:
        v = data[name]
        if isinstance(v, bool) or not isinstance(v, int):
            raise InvalidInputError(f"{path}: field {name!r} must be an integer")
        values[name] = v
    return CountTable(**values)


_MARGIN_SCHEMAS: tuple[tuple[frozenset, type], ...] = (
    (frozenset({"p1", "p0"}), SimpleMargins),
    (frozenset({"a", "b", "c", "d"}), CompleteMediationMargins),
    (frozenset({"y00", "y01", "y10", "y11", "m0", "m1"}), PartialMediationMargins),
)


def read_margins_json(
    path: str | Path,
) -> SimpleMargins | CompleteMediationMargins | PartialMediationMargins:
    """Parse a margins JSON file; the key set selects the margins type."""
    path = Path(path)
    data = _load_json_object(path)
    keys = frozenset(data)
    for schema, cls in _MARGIN_SCHEMAS:
        if keys == schema:
            values = {}
            for name in sorted(schema):
                v = data[name]
                if isinstance(v, bool) or not isinstance(v, (int, float)):
                    raise InvalidInputError(
                        f"{path}: field {name!r} must be a number, got {v!r}"
                    )
                values[name] = Probability(v)
            return cls(**values)
    known = " | ".join(
        "{" + ", ".join(sorted(schema)) + "}" for schema, _ in _MARGIN_SCHEMAS
    )
    raise InvalidInputError(
        f"{path}: key set {sorted(keys)} matches no margins schema; expected "
        f"exactly one of {known}"
    )
