import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramellin import primes as nt
from ramellin.series import Parity, SeriesKernel, Zeta, closed_form_kernel
from ramellin.specfun import Flag, riemann_zeta


def trial_division_is_prime(n):
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def mu_by_factoring(n):
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    return -result if n > 1 else result


@pytest.fixture(scope="module")
def t1e4():
    return nt.build_tables(10**4)


def test_tables_up_to_ten():
    t = nt.build_tables(10)
    assert t.primes.tolist() == [2, 3, 5, 7]
    assert t.mobius[1:].tolist() == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_pi_100_and_mu_30():
    t = nt.build_tables(100)
    assert len(t.primes) == 25
    assert t.mu(30) == -1


def test_primes_against_trial_division(t1e4):
    expected = [n for n in range(10**4 + 1) if trial_division_is_prime(n)]
    assert t1e4.primes.tolist() == expected
    assert nt.prime_count(t1e4, 10**4) == 1229


def test_mobius_against_factoring(t1e4):
    got = t1e4.mobius[1:].tolist()
    assert got == [mu_by_factoring(n) for n in range(1, 10**4 + 1)]


def test_mertens_partial_sums(t1e4):
    mertens = np.cumsum(t1e4.mobius[1:1001].astype(int))
    direct = 0
    for k in range(1, 1001):
        direct += mu_by_factoring(k)
        assert mertens[k - 1] == direct


def test_segment_size_invariance(monkeypatch):
    reference = nt.build_tables(50_000)
    monkeypatch.setattr(nt, "SEGMENT", 997)
    small = nt.build_tables(50_000)
    assert np.array_equal(reference.primes, small.primes)
    assert np.array_equal(reference.mobius, small.mobius)


def test_resource_guard():
    with pytest.raises(ValueError):
        nt.build_tables(10**9 + 1)
    with pytest.raises(ValueError):
        nt.build_tables(1)


def test_prime_count_values(tables_1e6):
    assert nt.prime_count(tables_1e6, 1) == 0
    assert nt.prime_count(tables_1e6, 2) == 1
    assert nt.prime_count(tables_1e6, 10**6) == 78498
    assert tables_1e6.pi_checkpoints[10**6] == 78498


def test_prime_count_range(t1e4):
    with pytest.raises(nt.TableRangeError):
        nt.prime_count(t1e4, 10**4 + 1)
    with pytest.raises(nt.TableRangeError):
        nt.prime_count(t1e4, -1)


def test_direct_sum_s3(tables_1e6):
    r = nt.prime_log_sum_direct(tables_1e6, 3.0, 10**6)
    assert not r.divergent
    assert r.tail_estimate < 1e-11
    assert r.primes_used == 78498


def test_direct_sum_s1_grows(tables_1e6):
    values = [nt.prime_log_sum_direct(tables_1e6, 1.0, N) for N in (10**3, 10**4, 10**5)]
    assert all(v.divergent and v.tail_estimate == math.inf for v in values)
    assert values[0].value < values[1].value < values[2].value


def test_direct_sum_s2_four_terms(t1e4):
    # log2/4 + log3/9 + log5/25 + log7/49
    r = nt.prime_log_sum_direct(t1e4, 2.0, 10)
    hand = math.log(2) / 4 + math.log(3) / 9 + math.log(5) / 25 + math.log(7) / 49
    assert abs(r.value - hand) < 1e-15
    assert abs(r.value - 0.39944479573312175) < 1e-15


def test_f_analytic_all_zero_mask():
    mask = [0] * 11
    assert nt.f_analytic(3.0, 10, mobius=mask).value == 0.0


def test_f_analytic_domain_and_flag():
    assert not nt.f_analytic(1.0, 5).ok
    assert Flag.TRUNCATED in nt.f_analytic(3.0, 30).flags


def test_f_analytic_terms_do_not_decay_fast():
    # the bracket is asymptotic to 1/(ks - 1), so a squarefree K leaves a term near 1/(Ks)
    k, s = 30, 3.0
    term = nt.f_analytic(s, k).value - nt.f_analytic(s, k - 1).value
    assert abs(term) > 1e-3


def test_mobius_form_equals_split_form():
    s, K = 3.0, 30
    mu = nt.cached_tables(K).mobius
    split = math.fsum(int(mu[k]) / (s * k - 1) for k in range(1, K + 1)) + nt.f_analytic(s, K).value
    assert abs(split - nt.prime_log_sum_mobius(s, K).value) < 1e-14


def test_mobius_single_term():
    s = 2.5
    one = nt.prime_log_sum_mobius(s, 1).value
    assert abs(one - (1 / (s - 1) + nt.f_analytic(s, 1).value)) < 1e-14


def test_mobius_against_direct_s3(tables_1e6):
    mob = nt.prime_log_sum_mobius(3.0, 30)
    direct = nt.prime_log_sum_direct(tables_1e6, 3.0, 10**6)
    assert abs(mob.value - direct.value) <= 1e-9


def test_mobius_against_direct_s2():
    t = nt.cached_tables(10**7)
    direct = nt.prime_log_sum_direct(t, 2.0, 10**7)
    assert abs(nt.prime_log_sum_mobius(2.0, 40).value - direct.value) <= 5e-6


def test_mobius_domain():
    r = nt.prime_log_sum_mobius(1.0, 10)
    assert math.isnan(r.value) and Flag.OUT_OF_DOMAIN in r.flags


def test_c_n_values():
    assert abs(nt.c_n(0).value - math.pi**2 / 6) < 1e-15
    # -zeta(6)/2 with zeta(6) = pi^6/945
    assert abs(nt.c_n(1).value - (-(math.pi**6) / 945 / 2)) < 1e-15
    assert abs(nt.c_n(1).value - (-0.5086715309922246)) < 1e-15


@pytest.mark.parametrize("n", range(0, 12))
def test_c_n_alternates(n):
    assert math.copysign(1, nt.c_n(n).value) == (-1) ** n


def test_c_n_decay():
    # |c_{n+1}/c_n| = zeta(4n+6) / (zeta(4n+2) (2n+2)(2n+1)); equals 1/90 to 1e-6 at n = 4
    ratios = [abs(nt.c_n(n + 1).value / nt.c_n(n).value) for n in range(10)]
    for n, r in enumerate(ratios):
        exact = riemann_zeta(4 * n + 6).value / (riemann_zeta(4 * n + 2).value * (2 * n + 2) * (2 * n + 1))
        assert abs(r - exact) <= 1e-14 * exact
    assert ratios == sorted(ratios, reverse=True)
    assert ratios[5] < 1e-2


def test_a_n_pole_at_zero():
    r = nt.a_n_formal(0, 10)
    assert Flag.OUT_OF_DOMAIN in r.flags
    assert "pole" in r.notes
    assert math.isnan(r.value)


def test_a_n_one_hand_sum():
    # squarefree k <= 10: 1, 2, 3, 5, 6, 7, 10
    mu = {1: 1, 2: -1, 3: -1, 5: -1, 6: 1, 7: -1, 10: 1}
    hand = math.fsum(m / (-k - 1) for k, m in mu.items())
    r = nt.a_n_formal(1, 10)
    assert abs(r.value - hand) < 1e-15
    assert abs(r.value - 0.1412337662337662) < 1e-15
    assert r.formal and r.divergent
    assert "NOT EVALUABLE" in r.notes


def test_a_n_truncations_reported():
    a, b = nt.a_n_formal(1, 500), nt.a_n_formal(1, 1000)
    assert math.isfinite(a.value) and math.isfinite(b.value)
    assert abs(a.value - b.value) < 0.05


def test_prime_kernel_sum_lhs_four_primes(t1e4):
    r = nt.theorem22_lhs(t1e4, 10)
    kernel = SeriesKernel(Zeta(), Parity.EVEN)
    hand = math.fsum(math.log(p) / p * closed_form_kernel(kernel, p).value for p in (2, 3, 5, 7))
    assert abs(r.value - hand) < 1e-15
    assert abs(r.value - 0.44657065110606714) < 1e-12
    assert r.formal and r.divergent


def test_prime_kernel_sum_kernel_at_two():
    kernel = SeriesKernel(Zeta(), Parity.EVEN)
    assert abs(closed_form_kernel(kernel, 2.0).value - 0.1947587363083482) < 1e-13


def test_prime_kernel_sum_lhs_checkpoints(tables_1e6):
    r = nt.theorem22_lhs(tables_1e6, 10**5)
    assert [N for N, _ in r.checkpoints] == [100, 1000, 10000, 100000]
    for N, v in r.checkpoints:
        assert f"{N}: " in r.notes


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5, 7, 11, 101, 7919, 99991]))
def test_kernel_magnitude_bound(p):
    kernel = SeriesKernel(Zeta(), Parity.EVEN)
    assert abs(closed_form_kernel(kernel, p).value) <= math.pi**2 / 6


def test_divergence_small(t1e4):
    r = nt.divergence_diagnostic(t1e4, 1, 10)
    hand = 2 * math.log(2) + 3 * math.log(3) + 5 * math.log(5) + 7 * math.log(7)
    assert abs(r.value - hand) < 1e-13
    assert abs(r.value - 26.350691832681914) < 1e-13


def test_divergence_growth(t1e4):
    r = nt.divergence_diagnostic(t1e4, 1, 10**4)
    cp = dict(r.checkpoints)
    assert cp[10**4] > 10 * cp[10**3]
    values = [v for _, v in r.checkpoints]
    assert values == sorted(values)
    assert r.divergent and r.tail_estimate == math.inf
    assert abs(r.growth_exponent - 2.0) < 0.1


def test_divergence_requires_positive_n(t1e4):
    with pytest.raises(ValueError):
        nt.divergence_diagnostic(t1e4, 0, 100)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=10**4), st.integers(min_value=2, max_value=10**4))
def test_divergence_monotone_in_up_to(a, b):
    t = nt.cached_tables(10**4)
    lo, hi = sorted((a, b))
    assert nt.divergence_diagnostic(t, 1, lo).value <= nt.divergence_diagnostic(t, 1, hi).value


def test_divergent_forces_infinite_tail():
    r = nt.PrimeSumResult(1.0, tail_estimate=0.5, divergent=True)
    assert r.tail_estimate == math.inf
