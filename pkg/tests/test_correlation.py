import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eberlein.correlation import (
    Autocorrelation, CorrelationEstimate, autocorrelation, hermiticity_check, mean,
    mean_invariance_check, positive_definite_check, reflected_eberlein, sesquilinearity_check,
    toeplitz_min_eigenvalue, translation_covariance_check, universal_bound_check,
)
from eberlein.errors import SupportError
from eberlein.sequences import (
    SampledSequence, bernoulli_pm1, character_spec, constant_one_spec, dirac_comb_spec,
    fibonacci_pm1, generate, periodic_spec, sign_spec, thue_morse_pm1,
)
from eberlein.windows import WindowFamily, make_prefix, make_symmetric
from oracles import brute_correlation, fibonacci_gamma, thue_morse_gamma


def _seq(spec, lo, hi):
    return generate(spec, (lo, hi))


def test_mean_examples():
    w = make_prefix(500, num=20)
    assert np.max(np.abs(mean(_seq(constant_one_spec(), 1, 500), w).values - 1)) < 1e-14
    ws = make_symmetric(500, num=20)
    assert np.all(mean(_seq(sign_spec(), -500, 500), ws).values == 0)
    w3 = WindowFamily.from_intervals([(1, 3 * m) for m in range(1, 50)])
    vals = mean(_seq(character_spec("1/3"), 1, 147), w3).values
    assert np.max(np.abs(vals)) < 1e-14


def test_mean_support_error():
    with pytest.raises(SupportError):
        mean(_seq(sign_spec(), 0, 10), make_prefix(11))


def test_dirac_autocorrelation_is_one():
    w = make_prefix(1000, num=10)
    d = _seq(dirac_comb_spec(), -40, 1040)
    est = reflected_eberlein(d, d, w, np.arange(-40, 41))
    assert np.all(est.values == 1)


def test_dirac_vs_sign_tends_to_zero():
    w = make_symmetric(2000, num=12)
    d = _seq(dirac_comb_spec(), -2100, 2100)
    s = _seq(sign_spec(), -2100, 2100)
    lags = np.arange(-16, 17)
    est = reflected_eberlein(d, s, w, lags)
    n = (w.lengths - 1) // 2
    for i, t in enumerate(lags):
        assert np.all(np.abs(est.values[i]) <= (abs(t) + 1) / n)


def test_sign_autocorrelation_bound():
    w = make_symmetric(5000, num=12)
    s = _seq(sign_spec(), -5100, 5100)
    lags = np.arange(-32, 33)
    est = reflected_eberlein(s, s, w, lags)
    for i, t in enumerate(lags):
        assert np.all(np.abs(est.values[i] - 1) <= 2 * (abs(t) + 1) / w.lengths)


def test_no_zero_padding():
    f = SampledSequence.from_values(1, np.ones(100))
    with pytest.raises(SupportError) as e:
        reflected_eberlein(f, f, make_prefix(100), [0, 1])
    assert e.value.missing == [(0, 0)]


def test_matches_brute_force_loop():
    rng = np.random.default_rng(1)
    f = SampledSequence.from_values(-10, rng.normal(size=80) + 1j * rng.normal(size=80))
    g = SampledSequence.from_values(-20, rng.normal(size=100) + 1j * rng.normal(size=100))
    w = WindowFamily.from_intervals([(0, 9), (-3, 20), (-5, 40)])
    lags = np.arange(-7, 8)
    est = reflected_eberlein(f, g, w, lags, method="direct")
    fft = reflected_eberlein(f, g, w, lags, method="fft", record=[0, 1, 2])
    for i, t in enumerate(lags):
        for j, (a, b) in enumerate(w.intervals):
            ref = brute_correlation(f.values, f.start, g.values, g.start, a, b, t)
            assert abs(est.values[i, j] - ref) < 1e-12
            assert abs(fft.values[i, j] - ref) < 1e-12


def test_fft_and_direct_agree_on_large_grid():
    f = bernoulli_pm1(0.5, 3, (-700, 20_700))
    w = make_prefix(20_000, num=10)
    lags = np.arange(-600, 601)
    a = reflected_eberlein(f, f, w, lags, method="direct")
    b = reflected_eberlein(f, f, w, lags)
    assert np.max(np.abs(a.final - b.final)) < 1e-12


def test_thue_morse_autocorrelation_against_recursion():
    N = 300_000
    f = thue_morse_pm1((-70, N + 70))
    g = autocorrelation(f, make_prefix(N, num=16), 64)
    assert g(0) == 1
    assert abs(g(1) + 1 / 3) <= 0.005
    assert np.max(np.abs(g.positive.real - thue_morse_gamma(64))) <= 0.005


def test_fibonacci_autocorrelation_against_rotation_formula():
    N = 200_000
    g = autocorrelation(fibonacci_pm1((-40, N + 40)), make_prefix(N, num=8), 32)
    ref = np.array([fibonacci_gamma(t) for t in range(33)])
    assert np.max(np.abs(g.positive - ref)) <= 1e-3


def test_bernoulli_autocorrelation_small():
    N = 100_000
    g = autocorrelation(bernoulli_pm1(0.5, 5, (-20, N + 20)), make_prefix(N, num=8), 16)
    assert g(0) == 1
    assert np.max(np.abs(g.gamma[g.lags != 0])) <= 5 / np.sqrt(N)


def test_periodic_two_term_exact():
    w = WindowFamily.from_intervals([(1, 2 * m) for m in range(1, 40)])
    f = _seq(periodic_spec([1, 1j]), -5, 90)
    g = autocorrelation(f, w, 2)
    assert g(0) == 1 and g(1) == 0 and g(2) == 1


def test_autocorrelation_hermitian_exact():
    rng = np.random.default_rng(0)
    v = np.exp(2j * np.pi * rng.random(3000))
    f = SampledSequence.from_values(-100, v)
    g = autocorrelation(f, make_prefix(2500, num=5), 40)
    assert np.array_equal(g.gamma[::-1], np.conj(g.gamma))
    assert g.gamma[g.L].imag == 0


def test_autocorrelation_json_round_trip():
    g = autocorrelation(thue_morse_pm1((-10, 1010)), make_prefix(1000), 8)
    back = Autocorrelation.from_dict(g.to_dict())
    assert np.array_equal(back.gamma, g.gamma) and back.n_used == g.n_used


def test_estimate_json_round_trip():
    f = thue_morse_pm1((-10, 300))
    est = reflected_eberlein(f, f, make_prefix(250, num=6), np.arange(-3, 4))
    back = CorrelationEstimate.from_dict(est.to_dict())
    assert np.array_equal(back.values, est.values) and np.array_equal(back.final, est.final)


def test_autocorrelation_rejects_asymmetric_lags():
    with pytest.raises(ValueError):
        Autocorrelation(np.arange(0, 4), np.ones(4))


def _random_seq(seed, lo, hi):
    rng = np.random.default_rng(seed)
    n = hi - lo + 1
    return SampledSequence.from_values(lo, rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n),
                                       bound=np.sqrt(2))


def test_sesquilinearity_example():
    f, g, h = (_random_seq(s, -20, 1020) for s in (1, 2, 3))
    w = make_prefix(1000, num=12)
    rep = sesquilinearity_check(f, g, h, 2 - 1j, 3, w, np.arange(-8, 9))
    assert rep.passed
    assert sesquilinearity_check(f, g, f, 1.5, -1.5, w, [0, 3]).passed


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), t0=st.integers(-30, 30),
       a=st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_structural_properties(seed, t0, a):
    f, g, h = (_random_seq(seed + k, -100, 1100) for k in range(3))
    w = make_prefix(1000, num=8)
    lags = np.arange(-10, 11)
    assert sesquilinearity_check(f, g, h, a, 1j, w, lags).passed
    assert hermiticity_check(f, g, w, lags).passed
    assert translation_covariance_check(f, g, t0, w, lags).passed
    assert universal_bound_check(f, g, w, lags).passed
    assert mean_invariance_check(f, t0, w).passed


def test_translation_covariance_examples():
    w = make_prefix(100_000, num=10)
    d = _seq(dirac_comb_spec(), -50, 100_050)
    rep = translation_covariance_check(d, d, 5, w, np.arange(-4, 5))
    assert rep.passed and rep.details["max_gap"] == 0
    b = bernoulli_pm1(0.5, 8, (-50, 100_050))
    rep = translation_covariance_check(b, b, 7, w, np.arange(-4, 5))
    assert rep.passed and rep.details["t0"] == 7


def test_positive_definite_exemplars():
    N = 50_000
    w = make_prefix(N, num=8)
    for f in (thue_morse_pm1((-70, N + 70)), fibonacci_pm1((-70, N + 70)),
              bernoulli_pm1(0.5, 1, (-70, N + 70))):
        assert positive_definite_check(autocorrelation(f, w, 64)).passed


def test_toeplitz_eigenvalue_matches_dense():
    g = thue_morse_gamma(30)
    from scipy.linalg import toeplitz
    assert abs(toeplitz_min_eigenvalue(g) - np.linalg.eigvalsh(toeplitz(g)).min()) < 1e-12


def test_non_positive_definite_detected():
    bad = Autocorrelation.from_positive(np.array([1.0, 0.9, -0.9]))
    assert not positive_definite_check(bad).passed
