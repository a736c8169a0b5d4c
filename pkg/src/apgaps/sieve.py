"""Segmented sieve over the index space of an arithmetic progression.

Primes p = r + k*q <= x_max (gcd(q, r) = 1) are found by crossing out, for
every base prime p <= sqrt(x_max) with p not dividing q, the index class
k = -r * q^{-1} (mod p).  Segments are slabs of indices k, so the memory per
segment is independent of q and the crossing density per index matches an
ordinary sieve regardless of the modulus.

Two constant-factor devices keep large scans cheap on one core:

* the classes of the base primes up to 13 repeat with period prod(p), so one
  precomputed pattern is copied into each segment instead of striding;
* the remaining base primes are sorted by the index of max(p^2, first term)
  and a searchsorted cut selects the active ones per segment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from .errors import InvalidProgressionError

#: Default number of progression indices per segment.
DEFAULT_SEGMENT_SIZE = 1 << 20

#: Base primes folded into the precopied segment pattern.
_PATTERN_PRIMES = (2, 3, 5, 7, 11, 13)

#: Keeps r + k*q and p*p inside int64 with headroom.
_X_MAX_CAP = 1 << 62


@dataclass(frozen=True)
class Progression:
    """Progression r, r + q, r + 2q, ... with gcd(q, r) = 1 and 1 <= r <= q."""

    q: int
    r: int

    def __post_init__(self) -> None:
        if self.q < 1 or self.r < 1 or self.r > self.q:
            raise InvalidProgressionError(
                f"need 1 <= r <= q, got q={self.q}, r={self.r}"
            )
        if math.gcd(self.q, self.r) != 1:
            raise InvalidProgressionError(
                f"gcd({self.q}, {self.r}) != 1; progression holds finitely many primes"
            )

    def term(self, k: int) -> int:
        return self.r + k * self.q


@dataclass(frozen=True)
class SieveConfig:
    x_max: int
    segment_size: int = DEFAULT_SEGMENT_SIZE

    def __post_init__(self) -> None:
        if not 1 <= self.x_max <= _X_MAX_CAP:
            raise ValueError(f"x_max must be in [1, 2^62], got {self.x_max}")
        if self.segment_size < 1:
            raise ValueError(f"segment_size must be >= 1, got {self.segment_size}")


def base_primes(limit: int) -> np.ndarray:
    """All primes <= limit as an increasing int64 array (plain Eratosthenes)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    composite = np.zeros(limit + 1, dtype=bool)
    composite[:2] = True
    for p in range(2, math.isqrt(limit) + 1):
        if not composite[p]:
            composite[p * p :: p] = True
    primes = np.flatnonzero(~composite).astype(np.int64)
    primes.setflags(write=False)
    return primes


@lru_cache(maxsize=8)
def _base_primes_cached(limit: int) -> np.ndarray:
    return base_primes(limit)


@lru_cache(maxsize=8)
def _strided_primes(q: int, limit: int) -> tuple[np.ndarray, np.ndarray]:
    """Base primes above the pattern range with q^{-1} mod p, both read-only."""
    primes = _base_primes_cached(limit)
    big = primes[primes > _PATTERN_PRIMES[-1]]
    big = big[q % big != 0]
    inv = np.array([pow(q, -1, int(p)) for p in big.tolist()], dtype=np.int64)
    big.setflags(write=False)
    inv.setflags(write=False)
    return big, inv


def iter_prime_blocks(prog: Progression, cfg: SieveConfig) -> Iterator[np.ndarray]:
    """Yield primes of the progression up to x_max as increasing int64 blocks.

    One block per segment; blocks may be empty.  Concatenated, the blocks are
    exactly the primes p = r + k*q <= x_max in increasing order.
    """
    q, r, x_max = prog.q, prog.r, cfg.x_max
    if x_max < r:
        return
    k_last = (x_max - r) // q
    limit = math.isqrt(x_max)
    seg_len = cfg.segment_size

    smalls = [p for p in _PATTERN_PRIMES if q % p != 0]
    period = math.prod(smalls) if smalls else 1
    pattern = np.ones(period, dtype=bool)
    for p in smalls:
        first = (-r * pow(q, -1, p)) % p
        pattern[first::p] = False
    reps = (min(seg_len, k_last + 1) + period - 1) // period + 1
    tiled = np.tile(pattern, reps)

    # Pattern primes that are themselves terms of the progression were
    # crossed out above; remember their indices so they can be re-emitted.
    restore = [
        (p - r) // q
        for p in smalls
        if p >= r and (p - r) % q == 0 and p <= x_max
    ]

    big, inv = _strided_primes(q, limit)
    if big.size:
        first_class = (-r * inv) % big
        k_min = (big * big - r + q - 1) // q  # index of the first term >= p*p
        np.maximum(k_min, 0, out=k_min)
        order = np.argsort(k_min, kind="stable")
        big = big[order]
        first_class = first_class[order]
        k_min = k_min[order]

    for seg_lo in range(0, k_last + 1, seg_len):
        seg_hi = min(seg_lo + seg_len, k_last + 1)
        offset = seg_lo % period
        mask = tiled[offset : offset + (seg_hi - seg_lo)].copy()
        for k in restore:
            if seg_lo <= k < seg_hi:
                mask[k - seg_lo] = True
        if r == 1 and seg_lo == 0:
            mask[0] = False  # the term 1 is not prime
        if big.size:
            cut = int(np.searchsorted(k_min, seg_hi, side="left"))
            if cut:
                p_act = big[:cut]
                base = np.maximum(k_min[:cut], seg_lo)
                start = base + (first_class[:cut] - base) % p_act
                hit = np.flatnonzero(start < seg_hi)
                starts = (start[hit] - seg_lo).tolist()
                strides = p_act[hit].tolist()
                for s, p in zip(starts, strides):
                    mask[s::p] = False
        survivors = np.flatnonzero(mask)
        if survivors.size:
            yield (seg_lo + survivors) * q + r
        else:
            yield survivors


def stream_progression_primes(
    prog: Progression, cfg: SieveConfig, consumer: Callable[[int], None]
) -> int:
    """Feed every prime of the progression to consumer in increasing order.

    Returns the number of primes emitted.
    """
    count = 0
    for block in iter_prime_blocks(prog, cfg):
        for p in block.tolist():
            consumer(p)
        count += int(block.size)
    return count
