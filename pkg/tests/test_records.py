"""Record extraction and ensemble assembly against hand and recount oracles."""

import math

import pytest

import scancache
from apgaps.errors import IncompleteEnsembleError, OutOfScanRangeError
from apgaps.records import (
    RecordEvent,
    RecordSet,
    build_ensemble,
    count_records_below,
    ensemble_median,
    extract_records,
    mean_delta_r,
    mean_record_count_increment,
    scan_modulus,
)
from apgaps.sieve import Progression, SieveConfig


def records_of(q: int, r: int, x_max: int) -> RecordSet:
    return extract_records(Progression(q, r), SieveConfig(x_max))


def synthetic_set(q: int, r: int, gaps: list[int], x_max: int = 10**6) -> RecordSet:
    events = []
    start = r + q  # arbitrary but coherent chain of widening gaps
    for i, gap in enumerate(gaps):
        events.append(RecordEvent(n=i + 1, gap=gap, start=start, end=start + gap))
        start += gap
    return RecordSet(
        prog=Progression(q, r), x_max=x_max, events=tuple(events),
        primes_seen=len(events) + 1,
    )


class TestExtractRecords:
    def test_first_records_by_hand(self):
        events = records_of(50, 1, 1000).events
        assert [(e.n, e.gap, e.start, e.end) for e in events[:4]] == [
            (1, 50, 101, 151),
            (2, 100, 151, 251),
            (3, 150, 251, 401),
            (4, 200, 401, 601),
        ]

    def test_table_rows(self):
        shallow = records_of(50, 1, 2 * 10**5)
        assert shallow.events[9] == RecordEvent(n=10, gap=1150, start=158551, end=159701)
        deep = records_of(50, 33, 10**7)
        assert deep.events[9] == RecordEvent(n=10, gap=3000, start=8314433, end=8317433)

    def test_pure_python_recount_oracle(self):
        # independent record extraction from a trial-division prime list
        def trial_primes(q, r, limit):
            out = []
            for m in range(2, limit + 1):
                if m % q != r % q:
                    continue
                if all(m % d for d in range(2, int(math.isqrt(m)) + 1)):
                    out.append(m)
            return out

        for q, r, limit in ((7, 5, 30000), (1, 1, 10000), (50, 27, 50000)):
            primes = trial_primes(q, r, limit)
            expected = []
            best = 0
            for a, b in zip(primes, primes[1:]):
                if b - a > best:
                    best = b - a
                    expected.append((len(expected) + 1, b - a, a, b))
            got = records_of(q, r, limit)
            assert [(e.n, e.gap, e.start, e.end) for e in got.events] == expected
            assert got.primes_seen == len(primes)

    def test_too_few_primes(self):
        assert records_of(97, 89, 89).events == ()
        assert records_of(97, 89, 88).events == ()

    def test_event_invariants(self):
        for r in (1, 4, 9, 16):
            record_set = records_of(17, r, 10**6)
            events = record_set.events
            assert [e.n for e in events] == list(range(1, len(events) + 1))
            for e in events:
                assert e.gap == e.end - e.start
                assert e.gap % 17 == 0 and e.gap >= 17
                assert e.end <= record_set.x_max
            gaps = [e.gap for e in events]
            ends = [e.end for e in events]
            assert gaps == sorted(gaps) and len(set(gaps)) == len(gaps)
            assert ends == sorted(ends) and len(set(ends)) == len(ends)

    def test_prefix_stability(self):
        shallow = records_of(17, 2, 10**5).events
        deep = records_of(17, 2, 10**6).events
        assert deep[: len(shallow)] == shallow
        assert len(deep) > len(shallow)


class TestCountRecordsBelow:
    def test_table_endpoints(self):
        r1 = records_of(50, 1, 10**7)
        assert count_records_below(r1, 159701) == 10
        assert count_records_below(r1, 159700) == 9
        r47 = records_of(50, 47, 10**7)
        assert count_records_below(r47, 40597) == 10

    def test_below_first_end(self):
        record_set = records_of(50, 1, 10**6)
        assert count_records_below(record_set, 150) == 0

    def test_full_range_equals_event_count(self):
        record_set = records_of(50, 11, 10**6)
        assert count_records_below(record_set, 10**6) == len(record_set.events)

    def test_step_function_monotone(self):
        record_set = records_of(50, 3, 10**6)
        counts = [count_records_below(record_set, x)
                  for x in range(10**2, 10**6, 37 * 10**3)]
        assert counts == sorted(counts)

    def test_out_of_range(self):
        record_set = records_of(50, 1, 10**5)
        with pytest.raises(OutOfScanRangeError):
            count_records_below(record_set, 10**5 + 1)


class TestScanModulus:
    def test_matches_individual_scans(self):
        sets = scan_modulus(17, 10**5)
        assert [s.prog.r for s in sets] == [r for r in range(1, 17)]
        for record_set in sets:
            alone = records_of(17, record_set.prog.r, 10**5)
            assert record_set.events == alone.events
            assert record_set.primes_seen == alone.primes_seen

    def test_worker_count_is_invisible(self):
        sequential = scan_modulus(17, 2 * 10**5, workers=1)
        parallel = scan_modulus(17, 2 * 10**5, workers=3)
        assert sequential == parallel

    def test_residue_subset(self):
        sets = scan_modulus(50, 10**5, residues=[33, 1])
        assert [s.prog.r for s in sets] == [1, 33]


class TestEnsembles:
    def test_complete_at_1e7(self, q50_sets):
        ensemble = build_ensemble(q50_sets, 10)
        assert ensemble.complete and len(ensemble.values) == 20

    def test_incomplete_at_1e5(self):
        sets = scan_modulus(50, 10**5)
        ensemble = build_ensemble(sets, 10)
        assert not ensemble.complete
        assert 21 not in [r for r, _ in ensemble.values]

    def test_singleton_for_q1(self):
        sets = [records_of(1, 1, 10**4)]
        ensemble = build_ensemble(sets, 3)
        assert ensemble.complete and len(ensemble.values) == 1

    def test_mixed_moduli_rejected(self):
        with pytest.raises(ValueError):
            build_ensemble([records_of(17, 2, 10**4), records_of(19, 2, 10**4)], 1)

    def test_duplicate_residue_rejected(self):
        record_set = records_of(17, 2, 10**4)
        with pytest.raises(ValueError):
            build_ensemble([record_set, record_set], 1)


class TestEnsembleMedian:
    def test_even_count_complete(self):
        sets = [synthetic_set(8, r, [gap]) for r, gap in
                zip((1, 3, 5, 7), (16, 24, 40, 48))]
        assert ensemble_median(sets, 1) == 32.0

    def test_censored_median_defined(self):
        # one residue lacks a 2nd record; both middle order statistics are
        # still observed because the missing value sorts above everything
        sets = [
            synthetic_set(8, 1, [16, 32]),
            synthetic_set(8, 3, [24, 40]),
            synthetic_set(8, 5, [40, 56]),
            synthetic_set(8, 7, [48]),
        ]
        assert ensemble_median(sets, 2) == 48.0

    def test_censored_median_undefined(self):
        sets = [
            synthetic_set(8, 1, [16, 32]),
            synthetic_set(8, 3, [24, 40]),
            synthetic_set(8, 5, [40]),
            synthetic_set(8, 7, [48]),
        ]
        with pytest.raises(IncompleteEnsembleError):
            ensemble_median(sets, 2)

    def test_odd_count(self):
        assert ensemble_median([synthetic_set(2, 1, [10])], 1) == 10.0

    def test_requires_all_residues(self):
        # a residue with no RecordSet at all is a usage error, not censoring
        sets = [synthetic_set(8, r, [16]) for r in (1, 3, 5)]
        with pytest.raises(ValueError):
            ensemble_median(sets, 1)

    def test_matches_plain_median_when_complete(self, q50_sets):
        import statistics

        for n in (1, 5, 10):
            gaps = sorted(build_ensemble(q50_sets, n).gaps)
            assert ensemble_median(q50_sets, n) == statistics.median(gaps)


class TestMeanRecordCountIncrement:
    def test_in_band(self, q50_sets):
        value = mean_record_count_increment(q50_sets, 10**5)
        assert 0 < value < 4

    def test_recount_oracle(self, q50_sets):
        x = 10**5
        upper = math.floor(math.e * x)
        expected = sum(
            count_records_below(s, upper) - count_records_below(s, x)
            for s in q50_sets
        ) / len(q50_sets)
        assert mean_record_count_increment(q50_sets, x) == expected

    def test_telescoping(self, q50_sets):
        xs = [10**3]
        while math.floor(math.e * xs[-1]) <= 10**7:
            xs.append(math.floor(math.e * xs[-1]))
        total = sum(mean_record_count_increment(q50_sets, x) for x in xs[:-1])
        mean_at = lambda x: sum(  # noqa: E731
            count_records_below(s, x) for s in q50_sets) / len(q50_sets)
        assert total == pytest.approx(mean_at(xs[-1]) - mean_at(xs[0]), abs=1e-12)

    def test_out_of_range(self, q50_sets):
        with pytest.raises(OutOfScanRangeError):
            mean_record_count_increment(q50_sets, 4 * 10**6)


class TestMeanDeltaR:
    def test_strictly_positive(self, q50_sets):
        lower = build_ensemble(q50_sets, 1)
        upper = build_ensemble(q50_sets, 2)
        value = mean_delta_r(lower, upper)
        assert value > 0
        by_r = {r: g for r, g in lower.values}
        expected = sum(g - by_r[r] for r, g in upper.values) / 20
        assert value == pytest.approx(expected, abs=1e-12)

    def test_median_level_delta_for_q11(self):
        sets = scan_modulus(11, 10**6)
        assert ensemble_median(sets, 2) - ensemble_median(sets, 1) == 33

    def test_incomplete_rejected(self):
        sets = scan_modulus(50, 10**5)
        with pytest.raises(IncompleteEnsembleError):
            mean_delta_r(build_ensemble(sets, 9), build_ensemble(sets, 10))
