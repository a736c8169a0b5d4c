"""Monte Carlo baseline: record counts in i.i.d. random sequences.

For continuous i.i.d. samples the expected number of records among N draws
is the harmonic number H_N, independent of the distribution.  The simulation
exists to make that baseline concrete next to the observed record counts of
prime-gap sequences.

PRNG: xoshiro256** (Blackman-Vigna), seeded per trial through SplitMix64.
Trial t derives its SplitMix64 stream state as mix64(seed + t*GOLDEN) where
mix64 is the SplitMix64 output finalizer and GOLDEN = 0x9E3779B97F4A7C15;
the next four SplitMix64 outputs become the xoshiro256** state.  Each trial
therefore owns a fixed stream no matter how trials are partitioned across
workers or chunks.  Test vectors live in docs/prng.md.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .stats import AUTO, Histogram, histogram

UNIFORM = "uniform"
EXPONENTIAL = "exponential"
GUMBEL = "gumbel"
DISTRIBUTIONS = (UNIFORM, EXPONENTIAL, GUMBEL)

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U64 = np.uint64(0xFFFFFFFFFFFFFFFF)
_INV_2_53 = float(2.0**-53)


@dataclass(frozen=True)
class IidRunConfig:
    sequence_length: int
    trials: int
    distribution: str = EXPONENTIAL
    seed: int = 0

    def __post_init__(self) -> None:
        if self.sequence_length < 1:
            raise ValueError(f"sequence_length must be >= 1, got {self.sequence_length}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.distribution!r}")


class IidResult(NamedTuple):
    mean_records: float
    stddev_records: float
    histogram: Histogram


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def _trial_states(seed: int, lo: int, hi: int) -> list[np.ndarray]:
    """xoshiro256** state vectors (s0..s3) for trials lo..hi-1."""
    trials = np.arange(lo, hi, dtype=np.uint64)
    stream = _mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + trials * _GOLDEN)
    state = []
    for _ in range(4):
        stream = stream + _GOLDEN
        state.append(_mix64(stream))
    # an all-zero xoshiro state is invalid; vanishingly unlikely but cheap to fix
    zero = (state[0] | state[1] | state[2] | state[3]) == 0
    if np.any(zero):
        state[0] = np.where(zero, np.uint64(1), state[0])
    return state


def _rotl(x: np.ndarray, k: int) -> np.ndarray:
    return (x << np.uint64(k)) | (x >> np.uint64(64 - k))


def _xoshiro_step(state: list[np.ndarray]) -> np.ndarray:
    """Advance every lane one step and return the 64-bit outputs."""
    s0, s1, s2, s3 = state
    out = _rotl(s1 * np.uint64(5), 7) * np.uint64(9)
    t = s1 << np.uint64(17)
    s2 = s2 ^ s0
    s3 = s3 ^ s1
    s1 = s1 ^ s2
    s0 = s0 ^ s3
    s2 = s2 ^ t
    s3 = _rotl(s3, 45)
    state[0], state[1], state[2], state[3] = s0, s1, s2, s3
    return out


def _transform(bits: np.ndarray, distribution: str) -> np.ndarray:
    if distribution == UNIFORM:
        return (bits >> np.uint64(11)).astype(np.float64) * _INV_2_53
    if distribution == EXPONENTIAL:
        u = (bits >> np.uint64(11)).astype(np.float64) * _INV_2_53  # in [0, 1)
        return -np.log1p(-u)
    # GUMBEL: u strictly inside (0, 1) so both logs are finite
    u = ((bits >> np.uint64(11)).astype(np.float64) + 0.5) * _INV_2_53
    return -np.log(-np.log(u))


def simulate_record_counts(cfg: IidRunConfig, chunk_size: int = 16384) -> IidResult:
    """Count strict records in each of cfg.trials i.i.d. sequences.

    The first element of a sequence is record 1; later elements count only
    when strictly above the running maximum (float ties are non-records).
    Output is bit-stable for a fixed seed regardless of chunk_size because
    every trial's stream depends only on (seed, trial index).
    """
    counts = np.empty(cfg.trials, dtype=np.int64)
    for lo in range(0, cfg.trials, chunk_size):
        hi = min(lo + chunk_size, cfg.trials)
        state = _trial_states(cfg.seed, lo, hi)
        lane_counts = np.zeros(hi - lo, dtype=np.int64)
        running = np.full(hi - lo, -np.inf)
        for _ in range(cfg.sequence_length):
            draw = _transform(_xoshiro_step(state), cfg.distribution)
            newly = draw > running
            lane_counts += newly
            np.maximum(running, draw, out=running)
        counts[lo:hi] = lane_counts
    mean = float(counts.mean())
    stddev = float(counts.std(ddof=1)) if cfg.trials >= 2 else 0.0
    return IidResult(
        mean_records=mean,
        stddev_records=stddev,
        histogram=histogram(counts.astype(np.float64), AUTO),
    )


def expected_iid_records(n: int) -> float:
    """Harmonic number H_n: exact sum for n <= 10^6, asymptotic beyond.

    The asymptotic tail ln n + gamma + 1/(2n) - 1/(12 n^2) is already far
    below float64 resolution of the exact sum at the crossover.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if n <= 10**6:
        return float(np.sum(1.0 / np.arange(1, n + 1, dtype=np.float64)))
    from .arith import EULER_GAMMA

    return float(np.log(n) + EULER_GAMMA + 1.0 / (2.0 * n) - 1.0 / (12.0 * n * n))
