import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from efimov_tms.specfun import (SIGMA0_HE, SIGMA0_MF, KernelKind, SpectralCurve, Variant,
                                eval_S, eval_gamma, find_s0, get_s0, kernel_pair, kernel_x)

SQ3 = math.sqrt(3)
# positive root of gamma, from a 1e-6 step sign-change scan plus bisection of
# the naive formula (see test_s0_oracle_reproduces_frozen_value)
S0_ORACLE = 1.006237825102781
# S_3(1) from adaptive quadrature of the defining integral
S3_AT_1 = -0.06631456208168958

CURVES = [SpectralCurve.canonical(), SpectralCurve.plus(), SpectralCurve.minlos_faddeev(0.7),
          SpectralCurve.high_energy(0.7)]


def naive_gamma(s):
    return 1 - (8 / SQ3) * math.sinh(math.pi * s / 6) / (s * math.cosh(math.pi * s / 2))


def test_s0_oracle_reproduces_frozen_value():
    s = np.arange(0.5, 1.5, 1e-6)
    v = 1 - (8 / SQ3) * np.sinh(np.pi * s / 6) / (s * np.cosh(np.pi * s / 2))
    i = np.nonzero(np.diff(np.sign(v)))[0]
    assert i.size == 1
    a, b = s[i[0]], s[i[0] + 1]
    for _ in range(60):
        m = 0.5 * (a + b)
        if np.sign(naive_gamma(m)) == np.sign(naive_gamma(a)):
            a = m
        else:
            b = m
    assert abs(a - S0_ORACLE) < 1e-14


def test_find_s0_matches_oracle_to_ten_digits():
    r = find_s0(1e-12)
    assert abs(r.s0 - S0_ORACLE) < 1e-10
    assert r.residual <= 1e-12
    assert 0 < r.s0 < 2
    assert abs(eval_gamma(SpectralCurve.canonical(), r.s0)) == pytest.approx(r.residual, abs=1e-15)


def test_find_s0_rejects_bad_tol():
    with pytest.raises(ValueError):
        find_s0(0.0)


def test_gamma_at_zero():
    assert eval_gamma(SpectralCurve.canonical(), 0.0) == pytest.approx(1 - 4 * math.pi / (3 * SQ3), abs=1e-15)
    assert eval_gamma(SpectralCurve.canonical(), 0.0) == pytest.approx(-1.4184, abs=1e-4)


def test_regularized_values_at_zero():
    assert eval_gamma(SpectralCurve.minlos_faddeev(1.0), 0.0) == pytest.approx(1 / (2 * math.pi * SQ3), abs=1e-14)
    assert eval_gamma(SpectralCurve.minlos_faddeev(1.0), 0.0) == pytest.approx(0.0919, abs=1e-4)
    assert eval_gamma(SpectralCurve.high_energy(1.0), 0.0) == pytest.approx(1.0, abs=1e-14)
    assert SIGMA0_MF == pytest.approx(2 * math.pi * SQ3 * (4 * math.pi / (3 * SQ3) - 1))
    assert SIGMA0_HE == pytest.approx(4 * math.pi / (3 * SQ3) - 1)


@pytest.mark.parametrize("s", [0.3, 1.7, 4.0])
def test_gamma_even_examples(s):
    c = SpectralCurve.canonical()
    assert eval_gamma(c, -s) == eval_gamma(c, s)


@settings(max_examples=200, deadline=None)
@given(st.floats(-60, 60), st.sampled_from(CURVES))
def test_gamma_even_property(s, curve):
    assert eval_gamma(curve, s) == eval_gamma(curve, -s)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 30))
def test_gamma_matches_naive_formula(s):
    assert eval_gamma(SpectralCurve.canonical(), s) == pytest.approx(naive_gamma(s), abs=1e-13)


def test_gamma_scalar_and_array():
    c = SpectralCurve.canonical()
    assert isinstance(eval_gamma(c, 0.5), float)
    arr = eval_gamma(c, np.array([0.5, 1.5]))
    assert arr.shape == (2,)


def test_gamma_rejects_nonfinite():
    with pytest.raises(ValueError):
        eval_gamma(SpectralCurve.canonical(), float("nan"))
    with pytest.raises(ValueError):
        eval_gamma(SpectralCurve.canonical(), np.array([1.0, np.inf]))


@pytest.mark.parametrize("sigma", [0.0, -1.0, float("nan")])
def test_regularized_sigma_must_be_positive(sigma):
    with pytest.raises(ValueError):
        SpectralCurve.minlos_faddeev(sigma)
    with pytest.raises(ValueError):
        SpectralCurve.high_energy(sigma)


def test_gamma_logratio_relation(rng):
    s = rng.uniform(-10, 10, 100)
    lhs = eval_gamma(SpectralCurve.canonical(), s)
    rhs = 1 - (8 / SQ3) * kernel_pair(KernelKind.LOG_RATIO, s) / math.sqrt(2 * math.pi)
    assert np.max(np.abs(lhs - rhs)) < 1e-14


def test_plus_factorization_away_from_root(rng):
    s0 = get_s0()
    s = rng.uniform(-10, 10, 500)
    s = s[np.abs(np.abs(s) - s0) > 1e-3]
    err = eval_gamma(SpectralCurve.plus(), s) * (s - s0) * (s + s0) - eval_gamma(SpectralCurve.canonical(), s)
    assert np.max(np.abs(err)) < 1e-12


def test_plus_continuous_across_taylor_band():
    s0 = get_s0()
    c = SpectralCurve.plus()
    inside = eval_gamma(c, s0 + 0.999e-3)
    outside = eval_gamma(c, s0 + 1.001e-3)
    slope = (eval_gamma(c, s0 + 2e-3) - eval_gamma(c, s0)) / 2e-3
    assert abs(outside - inside - slope * 2e-6) < 1e-11
    # at the root: derivative of gamma over 2 s0, from a centred difference of the naive formula
    d = (naive_gamma(s0 + 1e-5) - naive_gamma(s0 - 1e-5)) / 2e-5
    assert eval_gamma(c, s0) == pytest.approx(d / (2 * s0), rel=1e-8)
    assert eval_gamma(c, -s0) == eval_gamma(c, s0)


def test_plus_value_at_zero():
    s0 = get_s0()
    expected = (4 * math.pi / (3 * SQ3) - 1) / s0 ** 2
    assert eval_gamma(SpectralCurve.plus(), 0.0) == pytest.approx(expected, rel=1e-14)


def test_asymptotics():
    big = 50.0
    assert abs(eval_gamma(SpectralCurve.canonical(), big) - 1) < 1e-6
    assert big ** 2 * eval_gamma(SpectralCurve.plus(), big) == pytest.approx(1.0, abs=1e-3)
    mf = SpectralCurve.minlos_faddeev(1.0)
    # approaches 1 only like 1/s
    lead = (SIGMA0_MF + 1.0) / (math.pi ** 2 * SQ3)
    assert big * (eval_gamma(mf, big) - 1) == pytest.approx(lead, abs=1e-10)
    assert eval_gamma(mf, 1e6) == pytest.approx(1.0, abs=1e-6)
    he = SpectralCurve.high_energy(1.0)
    assert eval_gamma(he, big) == pytest.approx(1 + SIGMA0_HE + 1.0, abs=1e-12)


@pytest.mark.parametrize("curve", CURVES[1:])
def test_positive_curves(curve):
    s = np.linspace(-60, 60, 120001)
    assert np.all(eval_gamma(curve, s) > 0)


def test_mf_three_term_formula(rng):
    s = rng.uniform(0.01, 12, 200)
    for sig in (0.3, 3.0):
        explicit = 1 - (8 / SQ3) * np.sinh(np.pi * s / 6) / (s * np.cosh(np.pi * s / 2)) \
            + (SIGMA0_MF + sig) / (np.pi ** 2 * SQ3) * np.tanh(np.pi * s / 2) / s
        assert np.max(np.abs(eval_gamma(SpectralCurve.minlos_faddeev(sig), s) - explicit)) < 1e-12


@pytest.mark.parametrize("sigma", [0.1, 1.0, 10.0])
def test_regularized_minima_on_dense_grid(sigma):
    s = np.linspace(-50, 50, 100001)
    assert np.min(eval_gamma(SpectralCurve.minlos_faddeev(sigma), s)) == pytest.approx(
        sigma / (2 * math.pi * SQ3), abs=1e-8)
    assert np.min(eval_gamma(SpectralCurve.high_energy(sigma), s)) == pytest.approx(sigma, abs=1e-10)


def test_curve_minimum_method():
    assert SpectralCurve.canonical().minimum() == pytest.approx(eval_gamma(SpectralCurve.canonical(), 0.0), abs=1e-15)
    assert SpectralCurve.high_energy(2.0).minimum() == 2.0


def test_variant_from_string():
    assert SpectralCurve("minlos-faddeev", 1.0).variant is Variant.MINLOS_FADDEEV


# -- S curves ---------------------------------------------------------------

def test_S_special_values():
    pi = math.pi
    assert eval_S(0, 0.0) == pytest.approx(2 * pi ** 3 / 3, abs=1e-10)
    assert eval_S(0, 0.0) == pytest.approx(20.6708, abs=1e-4)
    assert eval_S(1, 0.0) == pytest.approx(-8 * pi * (1 - pi / (2 * SQ3)), abs=1e-10)
    assert eval_S(2, 0.0) == pytest.approx((pi ** 2 / 3) * (5 * pi - 9 * SQ3), abs=1e-10)


def test_S_even():
    assert eval_S(0, 2.5) == eval_S(0, -2.5)


def test_S3_against_adaptive_oracle():
    assert eval_S(3, 1.0) == pytest.approx(S3_AT_1, abs=1e-12)


def test_S3_oracle_reproduces_frozen_value():
    f = lambda t: special.eval_legendre(3, t) * math.sinh(math.acos(t / 2)) / (
        math.sin(math.acos(t / 2)) * math.sinh(math.pi))
    val = 2 * math.pi ** 2 * integrate.quad(f, -1, 1, epsabs=1e-14, limit=200)[0]
    assert val == pytest.approx(S3_AT_1, abs=1e-12)


@pytest.mark.parametrize("s", [5e-5, 2e-4])
def test_S_near_zero_against_naive_quadrature(s):
    for ell in range(3):
        f = lambda t: special.eval_legendre(ell, t) * math.sinh(s * math.acos(t / 2)) / (
            math.sin(math.acos(t / 2)) * math.sinh(math.pi * s))
        val = 2 * math.pi ** 2 * integrate.quad(f, -1, 1, epsabs=1e-14, limit=200)[0]
        assert eval_S(ell, s) == pytest.approx(val, abs=1e-10)


def test_S_ordering():
    s = np.linspace(0, 10, 401)
    S1, S2, S3, S4 = (eval_S(l, s) for l in (1, 2, 3, 4))
    assert np.all(S4 >= 0) and np.all(S4 <= S2) and np.all(S2 <= eval_S(2, 0.0) + 1e-13)
    assert np.all(eval_S(1, 0.0) <= S1 + 1e-13) and np.all(S1 <= S3) and np.all(S3 <= 0)


def test_S_monotone_decay():
    s = np.linspace(0, 10, 101)
    assert np.all(np.diff(eval_S(0, s)) < 0)


def test_S_rejects_negative_ell():
    with pytest.raises(ValueError):
        eval_S(-1, 0.0)


# -- kernel pairs --------------------------------------------------------------

def test_kernel_pair_limits():
    # sinh(pi s/6) / (s cosh(pi s/2)) -> pi/6
    assert kernel_pair(KernelKind.LOG_RATIO, 0.0) == pytest.approx(math.sqrt(2 * math.pi) * math.pi / 6, rel=1e-15)
    assert kernel_pair(KernelKind.SECH2, 0.0) == pytest.approx(math.sqrt(math.pi / 2) * 2 / math.pi, rel=1e-15)
    assert kernel_pair(KernelKind.LOG_COTH, 0.0) == pytest.approx(math.sqrt(math.pi / 2) * math.pi / 2, rel=1e-15)
    assert kernel_pair(KernelKind.COSH_MINUS, 0.0) == pytest.approx(math.sqrt(2 * math.pi / 3) * 2 / 3, rel=1e-15)
    assert kernel_pair(KernelKind.COSH_PLUS, 0.0) == pytest.approx(math.sqrt(2 * math.pi / 3) / 3, rel=1e-15)


@pytest.mark.parametrize("kind", list(KernelKind))
def test_kernel_pair_matches_naive_and_is_even(kind):
    s = np.array([0.2, 1.3, 5.0, 20.0])
    pi = math.pi
    naive = {
        KernelKind.LOG_RATIO: math.sqrt(2 * pi) * np.sinh(pi * s / 6) / (s * np.cosh(pi * s / 2)),
        KernelKind.SECH2: math.sqrt(pi / 2) * s / np.sinh(pi * s / 2),
        KernelKind.COSH_MINUS: math.sqrt(2 * pi / 3) * np.sinh(2 * pi * s / 3) / np.sinh(pi * s),
        KernelKind.COSH_PLUS: math.sqrt(2 * pi / 3) * np.sinh(pi * s / 3) / np.sinh(pi * s),
        KernelKind.LOG_COTH: math.sqrt(pi / 2) * np.tanh(pi * s / 2) / s,
    }[kind]
    assert np.allclose(kernel_pair(kind, s), naive, rtol=1e-13, atol=0)
    assert np.array_equal(kernel_pair(kind, -s), kernel_pair(kind, s))
    assert np.isfinite(kernel_pair(kind, 1e4))


def _fft_of(kind, n=2 ** 16, L=40.0):
    h = 2 * L / n
    x = (np.arange(n) - n // 2) * h
    s = 2 * np.pi * (np.arange(n) - n // 2) / (n * h)
    v = kernel_x(kind, x, h)
    return s, h / math.sqrt(2 * math.pi) * np.fft.fftshift(np.fft.fft(np.fft.ifftshift(v)))


@pytest.mark.parametrize("kind", list(KernelKind))
def test_kernel_pair_against_fft(kind):
    s, F = _fft_of(kind)
    m = np.abs(s) <= 8
    assert np.max(np.abs(F[m] - kernel_pair(kind, s[m]))) < 1e-6


def test_log_coth_at_1_3():
    n, L = 2 ** 16, 40.0
    h = 2 * L / n
    x = (np.arange(n) - n // 2) * h
    val = h / math.sqrt(2 * math.pi) * np.sum(kernel_x(KernelKind.LOG_COTH, x, h) * np.cos(1.3 * x))
    assert val == pytest.approx(kernel_pair(KernelKind.LOG_COTH, 1.3), abs=1e-6)


def test_kernel_x_matches_naive():
    x = np.array([0.1, 1.0, 3.0])
    assert np.allclose(kernel_x(KernelKind.LOG_RATIO, x), np.log((2 * np.cosh(x) + 1) / (2 * np.cosh(x) - 1)))
    assert np.allclose(kernel_x(KernelKind.SECH2, x), 1 / np.cosh(x) ** 2)
    assert np.allclose(kernel_x(KernelKind.COSH_PLUS, x), 1 / (2 * np.cosh(x) + 1))
    assert np.allclose(kernel_x(KernelKind.COSH_MINUS, x), 1 / (2 * np.cosh(x) - 1))
    assert np.allclose(kernel_x(KernelKind.LOG_COTH, x), np.log(1 / np.tanh(x / 2)))
    assert np.isinf(kernel_x(KernelKind.LOG_COTH, 0.0))
    assert np.all(np.isfinite(kernel_x(KernelKind.LOG_RATIO, np.array([800.0, -800.0]))))
