"""Durable JSON cache of record scans.

Format (schema_version 1): one object per file, canonical serialization
(sorted keys, minimal separators, trailing newline), so equal caches are
byte-identical files.  See docs/cache-format.md for the schema and a full
sample.  Writes are atomic (temp file + rename); concurrent writers to one
path are not supported.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .errors import CacheIOError, CorruptCacheError, SchemaError
from .records import RecordEvent, RecordSet
from .sieve import Progression

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ResidueRecords:
    r: int
    primes_seen: int
    events: tuple[RecordEvent, ...]


@dataclass(frozen=True)
class RecordCache:
    schema_version: int
    q: int
    x_max: int
    residues: tuple[ResidueRecords, ...]


def cache_from_record_sets(record_sets: Iterable[RecordSet]) -> RecordCache:
    """Bundle record sets of one modulus and one scan depth into a cache."""
    sets = sorted(record_sets, key=lambda rs: rs.prog.r)
    if not sets:
        raise ValueError("at least one record set is required")
    q = sets[0].prog.q
    x_max = sets[0].x_max
    for rs in sets:
        if rs.prog.q != q:
            raise ValueError(f"mixed moduli: {rs.prog.q} and {q}")
        if rs.x_max != x_max:
            raise ValueError(
                f"mixed scan depths {rs.x_max} and {x_max}; merge caches instead"
            )
    cache = RecordCache(
        schema_version=SCHEMA_VERSION,
        q=q,
        x_max=x_max,
        residues=tuple(
            ResidueRecords(r=rs.prog.r, primes_seen=rs.primes_seen, events=rs.events)
            for rs in sets
        ),
    )
    validate_cache(cache)
    return cache


def record_sets_from_cache(cache: RecordCache) -> list[RecordSet]:
    """Rebuild RecordSet objects; every residue reports the cache's x_max."""
    return [
        RecordSet(
            prog=Progression(cache.q, res.r),
            x_max=cache.x_max,
            events=res.events,
            primes_seen=res.primes_seen,
        )
        for res in cache.residues
    ]


def validate_cache(cache: RecordCache) -> None:
    """Check every structural invariant; raises CorruptCacheError on violation."""

    def fail(msg: str) -> None:
        raise CorruptCacheError(msg)

    if cache.schema_version != SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported schema_version {cache.schema_version}, expected {SCHEMA_VERSION}"
        )
    if cache.q < 1:
        fail(f"q must be >= 1, got {cache.q}")
    if cache.x_max < 1:
        fail(f"x_max must be >= 1, got {cache.x_max}")
    previous_r = 0
    for res in cache.residues:
        tag = f"residue r={res.r}"
        if not 1 <= res.r <= cache.q:
            fail(f"{tag}: outside [1, q]")
        if res.r <= previous_r:
            fail(f"{tag}: residues not strictly increasing")
        previous_r = res.r
        if math.gcd(res.r, cache.q) != 1:
            fail(f"{tag}: not coprime to q={cache.q}")
        if res.primes_seen < 0:
            fail(f"{tag}: negative primes_seen")
        if res.events and res.primes_seen < len(res.events) + 1:
            fail(f"{tag}: {len(res.events)} records need at least "
                 f"{len(res.events) + 1} primes, got {res.primes_seen}")
        previous_gap = 0
        previous_end = 0
        for i, e in enumerate(res.events):
            etag = f"{tag} event {i}"
            if e.n != i + 1:
                fail(f"{etag}: n={e.n}, expected {i + 1}")
            if e.gap != e.end - e.start:
                fail(f"{etag}: gap {e.gap} != end - start = {e.end - e.start}")
            if e.gap <= previous_gap:
                fail(f"{etag}: gaps not strictly increasing")
            if e.start < previous_end:
                fail(f"{etag}: record starts before the previous record ends")
            if e.gap % cache.q != 0:
                fail(f"{etag}: gap {e.gap} not a multiple of q={cache.q}")
            if e.start < 1:
                fail(f"{etag}: start < 1")
            if e.start % cache.q != res.r % cache.q:
                fail(f"{etag}: start not congruent to r")
            if e.end > cache.x_max:
                fail(f"{etag}: end {e.end} beyond x_max {cache.x_max}")
            previous_gap = e.gap
            previous_end = e.end


def _cache_to_dict(cache: RecordCache) -> dict:
    return {
        "schema_version": cache.schema_version,
        "q": cache.q,
        "x_max": cache.x_max,
        "residues": [
            {
                "r": res.r,
                "primes_seen": res.primes_seen,
                "events": [
                    {"n": e.n, "gap": e.gap, "start": e.start, "end": e.end}
                    for e in res.events
                ],
            }
            for res in cache.residues
        ],
    }


def _cache_from_dict(raw: dict) -> RecordCache:
    try:
        version = raw["schema_version"]
        if version != SCHEMA_VERSION:
            raise SchemaError(
                f"unsupported schema_version {version}, expected {SCHEMA_VERSION}"
            )
        residues = tuple(
            ResidueRecords(
                r=int(res["r"]),
                primes_seen=int(res["primes_seen"]),
                events=tuple(
                    RecordEvent(
                        n=int(e["n"]),
                        gap=int(e["gap"]),
                        start=int(e["start"]),
                        end=int(e["end"]),
                    )
                    for e in res["events"]
                ),
            )
            for res in raw["residues"]
        )
        return RecordCache(
            schema_version=int(version),
            q=int(raw["q"]),
            x_max=int(raw["x_max"]),
            residues=residues,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptCacheError(f"malformed cache structure: {exc}") from exc


def cache_to_json(cache: RecordCache) -> str:
    """Canonical JSON text: sorted keys, minimal separators, trailing newline."""
    return json.dumps(_cache_to_dict(cache), sort_keys=True, separators=(",", ":")) + "\n"


def save_cache(cache: RecordCache, path: str | os.PathLike) -> None:
    """Validate, then atomically write the canonical JSON form."""
    validate_cache(cache)
    text = cache_to_json(cache)
    directory = os.path.dirname(os.fspath(path)) or "."
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as handle:
                handle.write(text)
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
    except OSError as exc:
        raise CacheIOError(f"cannot write cache to {path}: {exc}") from exc


def load_cache(path: str | os.PathLike) -> RecordCache:
    """Read, parse, and validate a cache file."""
    try:
        with open(path, "r") as handle:
            text = handle.read()
    except OSError as exc:
        raise CacheIOError(f"cannot read cache from {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptCacheError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise CorruptCacheError(f"cache root must be an object, got {type(raw).__name__}")
    cache = _cache_from_dict(raw)
    validate_cache(cache)
    return cache


def merge_caches(a: RecordCache, b: RecordCache) -> RecordCache:
    """Union of residues; where both caches hold a residue, the deeper scan wins.

    Record lists are prefix-stable in x_max, so taking the larger-x_max events
    per residue never discards information.  The merged x_max is the larger of
    the two; residues coming from the shallower cache are only guaranteed
    complete up to their own scan depth.
    """
    if a.q != b.q:
        raise ValueError(f"cannot merge caches for different moduli {a.q} and {b.q}")
    deeper, shallower = (a, b) if a.x_max >= b.x_max else (b, a)
    merged: dict[int, ResidueRecords] = {res.r: res for res in shallower.residues}
    merged.update({res.r: res for res in deeper.residues})
    cache = RecordCache(
        schema_version=SCHEMA_VERSION,
        q=a.q,
        x_max=deeper.x_max,
        residues=tuple(merged[r] for r in sorted(merged)),
    )
    validate_cache(cache)
    return cache


def export_csv(cache: RecordCache, destination: TextIO) -> int:
    """Write events as CSV rows (q,r,n,gap,start,end); returns the row count."""
    destination.write("q,r,n,gap,start,end\n")
    rows = 0
    for res in cache.residues:
        for e in res.events:
            destination.write(
                f"{cache.q},{res.r},{e.n},{e.gap},{e.start},{e.end}\n"
            )
            rows += 1
    return rows
