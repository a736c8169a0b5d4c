"""Number-theory helpers checked against brute force and quadrature oracles."""

import math

import numpy as np
import pytest
import scipy.integrate
import scipy.special

from apgaps.arith import (
    CONSTANTS,
    coprime_residues,
    gcd,
    gumbel_skewness_constant,
    log_integral,
    mod_inverse,
    totient,
)
from apgaps.errors import DomainError, NotInvertibleError


def _li_2() -> float:
    """Principal value of the integral of 1/ln t from 0 to 2.

    Split at 0.5; the singular piece integrates g(t)/(t-1) with
    g(t) = (t-1)/ln t smooth (g(0)=0, g(1)=1), which the Cauchy-weighted
    quadrature handles exactly at t=1.
    """

    def g(t):
        if t == 0.0:
            return 0.0
        if t == 1.0:
            return 1.0
        return (t - 1.0) / math.log(t)

    head, _ = scipy.integrate.quad(
        lambda t: 0.0 if t == 0.0 else 1.0 / math.log(t), 0.0, 0.5,
        limit=200, epsabs=1e-13,
    )
    singular, _ = scipy.integrate.quad(
        g, 0.5, 2.0, weight="cauchy", wvar=1.0, limit=200, epsabs=1e-13,
    )
    return head + singular


LI_2 = _li_2()


def li_quadrature(x: float) -> float:
    """Adaptive-quadrature li(x): li(2) plus the smooth tail from 2."""
    if x == 2.0:
        return LI_2
    tail, _ = scipy.integrate.quad(
        lambda t: 1.0 / math.log(t), 2.0, x, limit=500, epsabs=1e-11, epsrel=1e-13,
    )
    return LI_2 + tail


class TestConstants:
    def test_euler_gamma(self):
        assert CONSTANTS.euler_gamma == pytest.approx(np.euler_gamma, abs=1e-15)

    def test_zeta3(self):
        assert CONSTANTS.zeta3 == pytest.approx(scipy.special.zeta(3.0), abs=1e-15)

    def test_gumbel_skewness_recomputed(self):
        recomputed = 12.0 * math.sqrt(6.0) * CONSTANTS.zeta3 / math.pi**3
        assert abs(CONSTANTS.gumbel_skewness - recomputed) < 1e-12

    def test_gumbel_skewness_six_decimals(self):
        assert round(gumbel_skewness_constant(), 6) == 1.139547


class TestGcd:
    def test_examples(self):
        assert gcd(50, 15) == 5
        assert gcd(7, 7) == 7
        assert gcd(50, 21) == 1

    def test_matches_math_gcd(self):
        rng = np.random.default_rng(5)
        for a, b in rng.integers(1, 10**9, size=(200, 2)):
            assert gcd(int(a), int(b)) == math.gcd(int(a), int(b))


class TestTotient:
    def test_examples(self):
        assert totient(50) == 20
        assert totient(1) == 1
        assert totient(11) == 10

    def test_brute_force_small(self):
        for q in range(1, 1001):
            r = np.arange(1, q + 1)
            assert totient(q) == int(np.count_nonzero(np.gcd(r, q) == 1))

    def test_sieve_table_to_1e4(self):
        # independent multiplicative construction: phi[m] -= phi[m]/p for p | m
        limit = 10**4
        phi = np.arange(limit + 1, dtype=np.int64)
        is_prime = np.ones(limit + 1, dtype=bool)
        is_prime[:2] = False
        for p in range(2, limit + 1):
            if is_prime[p]:
                is_prime[2 * p :: p] = False
                phi[p::p] -= phi[p::p] // p
        for q in range(1, limit + 1):
            assert totient(q) == int(phi[q])

    def test_coprime_residues_consistent(self):
        for q in (1, 2, 11, 50, 60, 97):
            residues = coprime_residues(q)
            assert len(residues) == totient(q)
            assert residues == sorted(residues)
            assert all(math.gcd(r, q) == 1 for r in residues)


class TestModInverse:
    def test_examples(self):
        assert mod_inverse(3, 7) == 5
        assert mod_inverse(1, 2) == 1
        assert mod_inverse(50, 101) == 99

    def test_brute_force_example(self):
        matches = [b for b in range(1, 101) if 50 * b % 101 == 1]
        assert matches == [mod_inverse(50, 101)]

    def test_round_trip_random(self):
        rng = np.random.default_rng(11)
        done = 0
        while done < 10**4:
            m = int(rng.integers(2, 10**9))
            a = int(rng.integers(1, m))
            if math.gcd(a, m) != 1:
                continue
            b = mod_inverse(a, m)
            assert 1 <= b < m
            assert a * b % m == 1
            done += 1

    def test_not_invertible(self):
        with pytest.raises(NotInvertibleError):
            mod_inverse(6, 9)
        with pytest.raises(NotInvertibleError):
            mod_inverse(50, 50)


class TestLogIntegral:
    def test_li_2(self):
        assert log_integral(2.0) == pytest.approx(1.045163780117493, abs=1e-9)
        assert log_integral(2.0) == pytest.approx(li_quadrature(2.0), abs=1e-9)

    def test_li_1e6(self):
        value = log_integral(1e6)
        assert value == pytest.approx(78627.549159, abs=1e-3)
        # li(1e6) is close to pi(1e6) + 130 = 78628
        assert 78498 < value < 78498 + 200

    def test_quadrature_oracle_band(self):
        for x in (2.0, 3.0, 10.0, 100.0, 12345.0, 1e6):
            assert log_integral(x) == pytest.approx(li_quadrature(x), abs=1e-9)

    def test_expi_oracle_wide(self):
        # li(x) = Ei(ln x); beyond ~1e9 float64 rounding dominates, so the
        # comparison is relative there rather than the absolute 1e-9
        for exponent in range(1, 13):
            x = 10.0**exponent
            reference = float(scipy.special.expi(math.log(x)))
            assert log_integral(x) == pytest.approx(reference, rel=5e-13, abs=1e-9)

    def test_monotonic(self):
        grid = np.geomspace(2.0, 1e12, 400)
        values = [log_integral(float(x)) for x in grid]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_efold_log_increment_below_one(self):
        for x in np.geomspace(3.0, 1e9, 50):
            ratio = math.log(log_integral(math.e * float(x))) - math.log(log_integral(float(x)))
            assert ratio < 1.0

    def test_domain(self):
        with pytest.raises(DomainError):
            log_integral(1.9999)
        with pytest.raises(DomainError):
            log_integral(-5.0)
