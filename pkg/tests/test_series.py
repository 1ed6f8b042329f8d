import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramellin.series import (
    Binomial,
    HurwitzOdd,
    Parity,
    Power,
    SeriesKernel,
    Strategy,
    Zeta,
    closed_form_kernel,
    eval_kernel,
    kernel_table,
    kernel_terms,
    maclaurin,
    table_csv,
)
from ramellin.specfun import Flag, hurwitz_zeta

ZETA2 = math.pi**2 / 6
ZETA4 = math.pi**4 / 90

ODD, EVEN, FULL = Parity.ODD, Parity.EVEN, Parity.FULL


def kern(phi, parity, p=1.0, k=1.0, strategy=Strategy.AUTO):
    return SeriesKernel(phi, parity, p, k, strategy)


def test_sine_kernel_at_half_pi():
    assert abs(eval_kernel(kern(Power(1.0), ODD), math.pi / 2).value - 1.0) < 1e-15


def test_zeta_odd_leading_term():
    x = 1e-4
    assert abs(eval_kernel(kern(Zeta(), ODD), x).value / x - ZETA4) < 1e-8


def test_binomial_full_at_one():
    assert abs(eval_kernel(kern(Binomial(1.0, 2.0), FULL), 1.0).value - 0.25) < 1e-14


def test_zeta_closed_form_at_zero():
    assert closed_form_kernel(kern(Zeta(), EVEN), 0.0).value == pytest.approx(ZETA2, abs=1e-15)
    assert closed_form_kernel(kern(Zeta(), ODD), 0.0).value == 0.0


def test_binomial_odd_dual_strategy_small_x():
    k = Binomial(2.0, 3.0)
    mac = maclaurin(kern(k, ODD), 0.1)
    cf = closed_form_kernel(kern(k, ODD), 0.1)
    assert abs(mac.value - cf.value) <= 1e-12
    # mpmath oracle: -Im (1 + 0.2i)^-3
    assert abs(cf.value - 0.5262858443331816) <= 1e-15


def test_kernel_table_examples():
    rows = kernel_table(kern(Power(1.0), ODD), [0.0, math.pi, 2 * math.pi])
    assert all(abs(r.value) <= 1e-12 for _, r in rows)
    rows = kernel_table(kern(Zeta(), EVEN), [0.0])
    assert rows[0][1].value == pytest.approx(ZETA2, rel=1e-15)
    rows = kernel_table(kern(Binomial(1.0, 2.0), FULL), [0.0, 1.0, 3.0])
    assert [r.value for _, r in rows] == pytest.approx([1.0, 0.25, 0.0625], abs=1e-14)


def test_kernel_table_keeps_order_and_flags_bad_points():
    xs = [3.0, -1.0, 0.5, math.nan]
    rows = kernel_table(kern(Power(1.0), EVEN), xs)
    assert [x for x, _ in rows][:3] == xs[:3]
    assert Flag.OUT_OF_DOMAIN in rows[1][1].flags
    assert Flag.OUT_OF_DOMAIN in rows[3][1].flags


DUAL_KERNELS = [
    kern(Power(1.0), ODD),
    kern(Power(1.0), EVEN),
    kern(Power(0.7), FULL),
    kern(Power(2.0), ODD, p=3.0, k=2.0),
    kern(Power(1.0), EVEN, p=2.0, k=1.5),
    kern(Binomial(1.0, 2.0), FULL),
    kern(Binomial(2.0, 3.0), ODD),
    kern(Binomial(0.5, 1.5), EVEN),
    kern(Zeta(), ODD),
    kern(Zeta(), EVEN),
]


@pytest.mark.parametrize("kernel", DUAL_KERNELS, ids=lambda k: str(k.describe()))
def test_dual_strategy_agreement(kernel):
    checked = 0
    for x in np.linspace(0.0, 5.0, 50):
        mac = maclaurin(kernel, float(x))
        cf = closed_form_kernel(kernel, float(x))
        assert cf.ok
        if Flag.CANCELLATION in mac.flags or Flag.TRUNCATED in mac.flags:
            continue
        checked += 1
        assert abs(mac.value - cf.value) <= 1e-10 * (1 + abs(cf.value))
    assert checked > 0


@pytest.mark.parametrize(
    "phi", [Power(1.3), Binomial(0.8, 2.5), Zeta()], ids=["power", "binomial", "zeta"]
)
@pytest.mark.parametrize("x", [0.3, 1.7])
def test_term_accounting(phi, x):
    full = kernel_terms(kern(phi, FULL), x, 40)
    even = kernel_terms(kern(phi, EVEN), x, 20)
    odd = kernel_terms(kern(phi, ODD), x, 20)
    assert np.allclose(np.abs(full[0::2]), np.abs(even), rtol=1e-14, atol=0)
    assert np.allclose(np.abs(full[1::2]), np.abs(odd), rtol=1e-14, atol=0)
    raw = math.fsum(abs(t) for t in full)
    assert raw == pytest.approx(math.fsum(map(abs, even)) + math.fsum(map(abs, odd)), rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(min_value=0.2, max_value=5.0),
    st.floats(min_value=0.3, max_value=3.0),
    st.floats(min_value=0.0, max_value=2.0),
    st.floats(min_value=0.2, max_value=2.0),
)
def test_scaling_law_termwise(p, k, x, c):
    scaled = kernel_terms(kern(Power(c), ODD, p=p, k=k), x, 20)
    plain = kernel_terms(kern(Power(c), ODD), x**k / p, 20)
    assert scaled == plain
    for n, term in enumerate(scaled[:8]):
        m = 2 * n + 1
        expected = (-1) ** n * c**m * x ** (m * k) / (math.factorial(m) * p**m)
        assert term == pytest.approx(expected, rel=1e-12, abs=1e-300)


def test_cancellation_guard_trips_for_zeta_even_at_30():
    mac = maclaurin(kern(Zeta(), EVEN, strategy=Strategy.MACLAURIN), 30.0)
    assert Flag.CANCELLATION in mac.flags


def test_auto_switches_to_closed_form_at_30():
    auto = eval_kernel(kern(Zeta(), EVEN), 30.0)
    cf = closed_form_kernel(kern(Zeta(), EVEN), 30.0)
    assert Flag.CANCELLATION not in auto.flags
    assert abs(auto.value - cf.value) <= 1e-10


def _zeta_mode_sum(x, odd, m_max=200_000):
    # brute force up to m_max, then the first two terms of the re-expanded tail
    m = np.arange(1, m_max + 1, dtype=float)
    trig = np.sin if odd else np.cos
    head = math.fsum(trig(x / m**2) / m**2)
    if odd:
        tail = x * hurwitz_zeta(4.0, m_max + 1.0).value
    else:
        tail = hurwitz_zeta(2.0, m_max + 1.0).value - 0.5 * x * x * hurwitz_zeta(6.0, m_max + 1.0).value
    return head + tail


@pytest.mark.parametrize(
    "odd, x, frozen",
    [
        (True, 50.0, -0.23366331753081462),
        (False, 400.0, -0.1510529173148152),
    ],
)
def test_zeta_closed_form_large_x(odd, x, frozen):
    r = closed_form_kernel(kern(Zeta(), ODD if odd else EVEN), x)
    assert abs(r.value - frozen) <= 1e-13
    assert abs(r.value - _zeta_mode_sum(x, odd)) <= 1e-11


@pytest.mark.parametrize("c, a, t", [(2.0, 2.0, 0.5), (3.0, 1.5, 0.3), (2.5, 4.0, 1.2)])
def test_hurwitz_odd_both_paths(c, a, t):
    k_mac = kern(HurwitzOdd(c, a), ODD, strategy=Strategy.MACLAURIN)
    k_cf = kern(HurwitzOdd(c, a), ODD, strategy=Strategy.CLOSED_FORM)
    mac, cf = eval_kernel(k_mac, t), eval_kernel(k_cf, t)
    assert abs(mac.value - cf.value) <= 1e-9 * (1 + abs(cf.value))


def test_hurwitz_odd_relaxed_domain():
    # a in (0, 1] is accepted; the closed form still requires t < a
    k = kern(HurwitzOdd(2.0, 0.8), ODD, strategy=Strategy.CLOSED_FORM)
    assert eval_kernel(k, 0.3).ok
    assert not eval_kernel(k, 0.9).ok


def test_hurwitz_odd_coefficients():
    phi = HurwitzOdd(2.0, 2.0)
    assert phi.at(3.0).value == pytest.approx(-24 * hurwitz_zeta(5.0, 2.0).value, rel=1e-14)
    assert not phi.at(2.0).ok


@pytest.mark.parametrize(
    "build",
    [
        lambda: Power(0.0),
        lambda: Binomial(-1.0, 2.0),
        lambda: Binomial(1.0, 0.0),
        lambda: HurwitzOdd(1.0, 2.0),
        lambda: SeriesKernel(Power(1.0), FULL, 2.0, 1.0),
        lambda: SeriesKernel(Power(1.0), ODD, 0.0, 1.0),
        lambda: SeriesKernel(HurwitzOdd(2.0, 2.0), EVEN),
    ],
)
def test_invalid_kernels_rejected(build):
    with pytest.raises(ValueError):
        build()


def test_zeta_full_has_no_closed_form():
    assert not closed_form_kernel(kern(Zeta(), FULL), 1.0).ok


def test_truncation_flag():
    k = SeriesKernel(Power(1.0), ODD, max_terms=5, strategy=Strategy.MACLAURIN)
    assert Flag.TRUNCATED in eval_kernel(k, 3.0).flags


def test_negative_x_out_of_domain():
    assert not eval_kernel(kern(Power(1.0), ODD), -1.0).ok


def test_csv_format():
    text = table_csv(kernel_table(kern(Binomial(1.0, 2.0), FULL), [0.0, 1.0]))
    lines = text.splitlines()
    assert lines[0] == "x,value,abs_err,flags"
    assert lines[2].startswith("1.0,0.25,")
    assert len(lines) == 3


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.0, max_value=200.0))
def test_auto_is_never_flagged_unstable(x):
    for parity in (ODD, EVEN):
        r = eval_kernel(kern(Zeta(), parity), x)
        assert Flag.CANCELLATION not in r.flags
        assert abs(r.value) <= ZETA2 + 1e-12
