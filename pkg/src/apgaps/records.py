"""Record (maximal) gaps between consecutive primes in a progression.

A gap is the difference between consecutive primes of the progression.  The
gap between the first and second primes is the first record; afterwards a gap
sets a record exactly when it strictly exceeds every earlier gap.  Records
are numbered n = 1, 2, ... in order of appearance.
"""

from __future__ import annotations

import math
import os
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .arith import coprime_residues, totient
from .errors import (
    IncompleteEnsembleError,
    InvalidProgressionError,
    OutOfScanRangeError,
)
from .sieve import DEFAULT_SEGMENT_SIZE, Progression, SieveConfig, iter_prime_blocks


@dataclass(frozen=True)
class RecordEvent:
    """The n-th record gap: gap = end - start, both endpoints prime in the progression."""

    n: int
    gap: int
    start: int
    end: int


@dataclass(frozen=True)
class RecordSet:
    """All record gaps of one progression among primes <= x_max."""

    prog: Progression
    x_max: int
    events: tuple[RecordEvent, ...]
    primes_seen: int


@dataclass(frozen=True)
class Ensemble:
    """The n-th record gap collected across residues of a single modulus."""

    q: int
    n: int
    values: tuple[tuple[int, int], ...]  # (r, gap), increasing in r
    complete: bool

    @property
    def gaps(self) -> tuple[int, ...]:
        return tuple(g for _, g in self.values)


def extract_records(prog: Progression, cfg: SieveConfig) -> RecordSet:
    """Scan the progression up to cfg.x_max and collect its record gaps."""
    events: list[RecordEvent] = []
    last = -1  # previous prime, -1 before the first
    best = 0  # largest gap seen so far
    seen = 0
    for block in iter_prime_blocks(prog, cfg):
        if block.size == 0:
            continue
        seen += int(block.size)
        if last >= 0:
            chain = np.concatenate((np.array([last], dtype=np.int64), block))
        else:
            chain = block
        gaps = np.diff(chain)
        if gaps.size == 0:
            last = int(block[-1])
            continue
        running = np.maximum.accumulate(gaps)
        floor = np.maximum(
            best, np.concatenate((np.zeros(1, dtype=gaps.dtype), running[:-1]))
        )
        for i in np.flatnonzero(gaps > floor).tolist():
            events.append(
                RecordEvent(
                    n=len(events) + 1,
                    gap=int(gaps[i]),
                    start=int(chain[i]),
                    end=int(chain[i + 1]),
                )
            )
        best = max(best, int(running[-1]))
        last = int(block[-1])
    return RecordSet(prog=prog, x_max=cfg.x_max, events=tuple(events), primes_seen=seen)


def count_records_below(record_set: RecordSet, x: int) -> int:
    """N(x): how many records have their end-of-gap prime <= x.

    x must not exceed the scanned range, otherwise the answer could be wrong.
    """
    if x > record_set.x_max:
        raise OutOfScanRangeError(
            f"x={x} exceeds scanned x_max={record_set.x_max}"
        )
    ends = [event.end for event in record_set.events]
    return bisect_right(ends, x)


def _scan_task(args: tuple[int, int, int, int]) -> RecordSet:
    q, r, x_max, segment_size = args
    return extract_records(Progression(q, r), SieveConfig(x_max, segment_size))


def scan_modulus(
    q: int,
    x_max: int,
    residues: Sequence[int] | None = None,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int | None = None,
    progress: Callable[[RecordSet], None] | None = None,
) -> list[RecordSet]:
    """Record sets for the given residues of q (default: all admissible ones).

    Residues are processed independently and returned in increasing residue
    order, so the result does not depend on the worker count.
    """
    if residues is None:
        residues = coprime_residues(q)
    else:
        residues = sorted(set(int(r) for r in residues))
        for r in residues:
            Progression(q, r)  # validates
    tasks = [(q, r, x_max, segment_size) for r in residues]
    if workers is None:
        workers = os.cpu_count() or 1
    results: list[RecordSet] = []
    if workers <= 1 or len(tasks) <= 1:
        for task in tasks:
            record_set = _scan_task(task)
            results.append(record_set)
            if progress is not None:
                progress(record_set)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for record_set in pool.map(_scan_task, tasks):
                results.append(record_set)
                if progress is not None:
                    progress(record_set)
    return results


def build_ensemble(record_sets: Iterable[RecordSet], n: int) -> Ensemble:
    """Collect the n-th record gap from each record set of one modulus.

    The ensemble is complete when every admissible residue contributes,
    i.e. when it holds totient(q) values.
    """
    if n < 1:
        raise ValueError(f"record index must be >= 1, got {n}")
    sets = sorted(record_sets, key=lambda rs: rs.prog.r)
    if not sets:
        raise ValueError("at least one record set is required")
    q = sets[0].prog.q
    values: list[tuple[int, int]] = []
    seen_residues: set[int] = set()
    for rs in sets:
        if rs.prog.q != q:
            raise ValueError(f"mixed moduli: {rs.prog.q} and {q}")
        if rs.prog.r in seen_residues:
            raise ValueError(f"duplicate residue r={rs.prog.r}")
        seen_residues.add(rs.prog.r)
        if len(rs.events) >= n:
            values.append((rs.prog.r, rs.events[n - 1].gap))
    return Ensemble(
        q=q, n=n, values=tuple(values), complete=len(values) == totient(q)
    )


def ensemble_median(record_sets: Sequence[RecordSet], n: int) -> float:
    """Median of the n-th record gap over all admissible residues of q.

    Requires a record set for every admissible residue.  Residues whose n-th
    record has not yet appeared within their scan depth are right-censored:
    they are placed above every observed value, on the grounds that a residue
    still short of n records at a deep scan is short precisely because its
    next record must be large.  The median is accepted only when the middle
    order statistics of the full totient(q)-sized ensemble are observed
    values; otherwise IncompleteEnsembleError asks for a deeper scan.
    """
    if n < 1:
        raise ValueError(f"record index must be >= 1, got {n}")
    sets = sorted(record_sets, key=lambda rs: rs.prog.r)
    if not sets:
        raise ValueError("at least one record set is required")
    q = sets[0].prog.q
    if any(rs.prog.q != q for rs in sets):
        raise ValueError("mixed moduli")
    if [rs.prog.r for rs in sets] != coprime_residues(q):
        raise ValueError(
            f"need record sets for all {totient(q)} admissible residues of q={q}"
        )
    observed = sorted(rs.events[n - 1].gap for rs in sets if len(rs.events) >= n)
    phi = totient(q)
    if phi % 2 == 1:
        positions = [(phi - 1) // 2]
    else:
        positions = [phi // 2 - 1, phi // 2]
    if positions[-1] >= len(observed):
        raise IncompleteEnsembleError(
            f"median position for n={n} not yet observed at this scan depth "
            f"({len(observed)} of {phi} residues have an n-th record)"
        )
    return sum(observed[i] for i in positions) / len(positions)


def mean_record_count_increment(record_sets: Sequence[RecordSet], x: int) -> float:
    """Average over residues of N(floor(e*x)) - N(x).

    Requires record sets for every admissible residue of the modulus and a
    scan deep enough to cover floor(e*x).
    """
    sets = sorted(record_sets, key=lambda rs: rs.prog.r)
    if not sets:
        raise ValueError("at least one record set is required")
    q = sets[0].prog.q
    residues = [rs.prog.r for rs in sets]
    if any(rs.prog.q != q for rs in sets):
        raise ValueError("mixed moduli")
    if residues != coprime_residues(q):
        raise ValueError(
            f"need record sets for all {totient(q)} admissible residues of q={q}"
        )
    x_upper = math.floor(math.e * x)
    total = 0
    for rs in sets:
        total += count_records_below(rs, x_upper) - count_records_below(rs, x)
    return total / totient(q)


def mean_delta_r(lower: Ensemble, upper: Ensemble) -> float:
    """Mean of R(n+1) - R(n) across residues; both ensembles must be complete."""
    if upper.n != lower.n + 1:
        raise ValueError(
            f"ensembles must be consecutive, got n={lower.n} and n={upper.n}"
        )
    if lower.q != upper.q:
        raise ValueError(f"mixed moduli: {lower.q} and {upper.q}")
    if not (lower.complete and upper.complete):
        raise IncompleteEnsembleError(
            f"both ensembles must cover all residues of q={lower.q}"
        )
    by_r = dict(lower.values)
    diffs = [gap - by_r[r] for r, gap in upper.values]
    return sum(diffs) / len(diffs)
