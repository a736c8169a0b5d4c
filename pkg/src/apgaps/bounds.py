"""Audits of conjectured record-gap bounds.

The main inequality: R(n,q,r) < phi(q)*n^2 + (n+2)*q*ln^2(q).  A stricter
variant replaces the correction factor q by phi(q); it is known to admit
occasional exceptions.  Logarithms are natural throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .arith import totient
from .records import RecordSet

Q_LOG2Q = "q-log2q"
PHI_LOG2Q = "phi-log2q"
VARIANTS = (Q_LOG2Q, PHI_LOG2Q)


@dataclass(frozen=True)
class BoundException:
    q: int
    r: int
    n: int
    gap: int
    bound: float


@dataclass(frozen=True)
class BoundReport:
    variant: str
    q_range: tuple[int, int]
    n_max: int
    x_max: int  # smallest scan depth among the audited record sets
    checked: int
    exceptions: tuple[BoundException, ...]


def bound_value(q: int, n: int, variant: str = Q_LOG2Q) -> float:
    """phi(q)*n^2 + (n+2)*M*ln^2(q), with M = q or phi(q) by variant."""
    if q < 1 or n < 1:
        raise ValueError(f"need q >= 1 and n >= 1, got q={q}, n={n}")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    phi = totient(q)
    factor = q if variant == Q_LOG2Q else phi
    log_q = math.log(q)
    return phi * n * n + (n + 2) * factor * log_q * log_q


def audit_bounds(
    record_sets: Iterable[RecordSet], n_max: int, variant: str = Q_LOG2Q
) -> BoundReport:
    """Test every available record with n <= n_max against the bound.

    A record is an exception when gap >= bound (the conjectured inequality is
    strict, so equality counts).  Record sets with fewer than n_max records
    contribute only what they have; the report's x_max states the shallowest
    scan depth so an empty exception list is always qualified by it.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    sets = sorted(record_sets, key=lambda rs: (rs.prog.q, rs.prog.r))
    checked = 0
    exceptions: list[BoundException] = []
    for rs in sets:
        q, r = rs.prog.q, rs.prog.r
        for event in rs.events[:n_max]:
            checked += 1
            limit = bound_value(q, event.n, variant)
            if event.gap >= limit:
                exceptions.append(
                    BoundException(q=q, r=r, n=event.n, gap=event.gap, bound=limit)
                )
    if sets:
        q_range = (sets[0].prog.q, sets[-1].prog.q)
        x_max = min(rs.x_max for rs in sets)
    else:
        q_range = (0, 0)
        x_max = 0
    return BoundReport(
        variant=variant,
        q_range=q_range,
        n_max=n_max,
        x_max=x_max,
        checked=checked,
        exceptions=tuple(exceptions),
    )


def classic_reality_check(rs: RecordSet) -> list[tuple[int, int, int, float]]:
    """Rows (n, R_n, n^2, 0.25*n^2 + 0.5*n) for the all-primes progression.

    The n^2 column is the conjectured envelope for classical record gaps; the
    last column is the empirical quadratic trend.
    """
    if rs.prog.q != 1:
        raise ValueError(f"classical check needs the q=1 progression, got q={rs.prog.q}")
    return [
        (e.n, e.gap, e.n * e.n, 0.25 * e.n * e.n + 0.5 * e.n)
        for e in rs.events
    ]


def report_to_dict(report: BoundReport) -> dict:
    """JSON-ready representation of an audit report."""
    return {
        "variant": report.variant,
        "q_range": list(report.q_range),
        "n_max": report.n_max,
        "x_max": report.x_max,
        "checked": report.checked,
        "exception_count": len(report.exceptions),
        "exceptions": [
            {"q": e.q, "r": e.r, "n": e.n, "gap": e.gap, "bound": e.bound}
            for e in report.exceptions
        ],
    }


def report_csv_rows(report: BoundReport) -> list[list]:
    """Exception rows in the fixed CSV column order."""
    header = ["variant", "q", "r", "n", "gap", "bound"]
    rows: list[list] = [header]
    for e in report.exceptions:
        rows.append([report.variant, e.q, e.r, e.n, e.gap, e.bound])
    return rows
