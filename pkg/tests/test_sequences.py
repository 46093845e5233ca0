from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eberlein.errors import SupportError
from eberlein.sequences import (
    GOLDEN_MEAN, SampledSequence, SequenceSpec, bernoulli_pm1, bernoulli_spec, character_spec,
    constant_one_spec, custom_spec, dirac_comb_spec, fibonacci_pm1, fibonacci_spec, generate,
    incidence_matrix, is_primitive, parse_theta, perron_frequencies, periodic_spec, phases,
    sign_spec, thue_morse_pm1, thue_morse_spec, trig_polynomial_spec,
)
from oracles import fibonacci_rotation, thue_morse_digit_sum

GOLDEN = Path(__file__).parent / "golden"


def test_sign_on_small_window():
    assert generate(sign_spec(), (-3, 3)).values.real.tolist() == [-1, -1, -1, 0, 1, 1, 1]


def test_dirac_and_trivial_character():
    assert generate(dirac_comb_spec(), (1, 4)).values.tolist() == [1, 1, 1, 1]
    assert np.all(generate(character_spec(0), (-7, 12)).values == 1)


def test_character_exact_phases():
    v = generate(character_spec("1/3"), (0, 5)).values
    w = np.exp(2j * np.pi * np.arange(6) / 3)
    assert np.allclose(v, w, atol=1e-15)
    assert v[3] == 1


def test_fibonacci_first_letters():
    assert fibonacci_pm1((0, 7)).values.real.tolist() == [1, -1, 1, 1, -1, 1, -1, 1]


def test_fibonacci_matches_rotation_coding_both_sides():
    s = fibonacci_pm1((-2000, 2000))
    assert s.values.real.tolist() == [fibonacci_rotation(k) for k in range(-2000, 2001)]


def test_fibonacci_frequency_and_mean():
    N = 100_000
    v = fibonacci_pm1((0, N - 1)).values.real
    freq_a = np.mean(v == 1)
    assert abs(freq_a - 1 / GOLDEN_MEAN) <= 2 / N
    assert abs(v.mean() - (2 / GOLDEN_MEAN - 1)) <= 5 / np.sqrt(N)


def test_thue_morse_digit_sum_and_mirror():
    assert thue_morse_pm1((0, 7)).values.real.tolist() == [1, -1, -1, 1, -1, 1, 1, -1]
    s = thue_morse_pm1((-300, 300))
    assert s.values.real.tolist() == [thue_morse_digit_sum(k) for k in range(-300, 301)]


def test_substitution_frequencies_match_perron():
    N = 100_000
    rules = {"a": "abb", "b": "ba"}
    spec = SequenceSpec("substitution", {"rules": rules, "weights": {"a": 1, "b": 0},
                                         "right_seed": "a"})
    v = spec.generate(0, N - 1).values.real
    freq = perron_frequencies(rules)
    assert abs(v.mean() - freq["a"]) <= 10 / np.sqrt(N)


def test_incidence_and_primitivity():
    M = incidence_matrix({"a": "ab", "b": "a"}, ["a", "b"])
    assert M.tolist() == [[1, 1], [1, 0]]
    assert is_primitive({"a": "ab", "b": "a"})
    assert not is_primitive({"a": "aa", "b": "bb"})
    with pytest.raises(ValueError):
        SequenceSpec("substitution", {"rules": {"a": "aa", "b": "bb"},
                                      "weights": {"a": 1, "b": -1}, "right_seed": "a"})
    with pytest.raises(ValueError):
        SequenceSpec("substitution", {"rules": {"a": "ac", "b": "a"},
                                      "weights": {"a": 1, "b": -1}, "right_seed": "a"})


def test_bernoulli_golden_files():
    cases = [((0.5, 42), (1, 8), "bernoulli_p0.5_seed42_1_8.csv"),
             ((0.3, 42), (4090, 4101), "bernoulli_p0.3_seed42_4090_4101.csv"),
             ((0.5, 7), (-6, 5), "bernoulli_p0.5_seed7_-6_5.csv")]
    for (p, seed), win, name in cases:
        frozen = SampledSequence.from_csv(GOLDEN / name)
        got = bernoulli_pm1(p, seed, win)
        assert frozen.start == got.start
        assert np.array_equal(frozen.values, got.values)


def test_bernoulli_degenerate_and_mean():
    assert np.all(bernoulli_pm1(1.0, 3, (0, 99)).values == 1)
    assert np.all(bernoulli_pm1(0.0, 3, (0, 99)).values == -1)
    N = 100_000
    for seed in (0, 1, 2):
        assert abs(bernoulli_pm1(0.5, seed, (1, N)).values.real.mean()) <= 4 / np.sqrt(N)


def test_bernoulli_invalid_p():
    with pytest.raises(ValueError):
        bernoulli_spec(1.5, 0)


@settings(max_examples=30, deadline=None)
@given(lo=st.integers(-10_000, 10_000), n=st.integers(1, 6000), a=st.integers(0, 5999),
       seed=st.integers(0, 2**31), kind=st.sampled_from(["bern", "fib", "tm", "sign"]))
def test_restriction_compatibility(lo, n, a, seed, kind):
    spec = {"bern": bernoulli_spec(0.5, seed), "fib": fibonacci_spec(),
            "tm": thue_morse_spec(), "sign": sign_spec()}[kind]
    hi = lo + n - 1
    a = lo + (a % n)
    big = generate(spec, (lo, hi))
    small = generate(spec, (a, hi))
    assert np.array_equal(big.segment(a, hi), small.values)


def test_generation_is_pure():
    s1 = bernoulli_pm1(0.5, 11, (-5000, 5000))
    s2 = bernoulli_pm1(0.5, 11, (-5000, 5000))
    assert np.array_equal(s1.values, s2.values)


def test_custom_support():
    spec = custom_spec([1, 2, 3], start=10)
    assert generate(spec, (10, 12)).values.real.tolist() == [1, 2, 3]
    with pytest.raises(SupportError) as e:
        generate(spec, (9, 12))
    assert e.value.missing == [(9, 9)]


def test_sampled_sequence_bounds_and_ops():
    with pytest.raises(ValueError):
        SampledSequence(0, [2.0], 1.0)
    with pytest.raises(ValueError):
        SampledSequence(0, [], 1.0)
    s = SampledSequence.from_values(0, [1, -1, 1j])
    assert s.sup_norm_bound == 1
    t = s.shift(5)
    assert t.support == (5, 7) and t.values[0] == 1
    assert (2 * s).sup_norm_bound == 2
    u = s + s.shift(1)
    assert u.support == (1, 2)
    with pytest.raises(SupportError):
        s.segment(-1, 1)
    assert s.values.flags.writeable is False


def test_csv_and_dict_round_trip(tmp_path):
    s = generate(trig_polynomial_spec([(0.5, "1/3"), (0.25j, 0.1)]), (-20, 20))
    p = tmp_path / "s.csv"
    s.to_csv(p)
    back = SampledSequence.from_csv(p)
    assert np.array_equal(back.values, s.values) and back.start == s.start
    again = SampledSequence.from_dict(s.to_dict())
    assert np.array_equal(again.values, s.values)


@pytest.mark.parametrize("spec", [
    fibonacci_spec(), thue_morse_spec(), bernoulli_spec(0.25, 9), sign_spec(), dirac_comb_spec(),
    constant_one_spec(), character_spec("2/7"), periodic_spec([1, 1j]),
    trig_polynomial_spec([(1, 0), (0.5, "1/4")]), custom_spec([1, -1], start=-1),
])
def test_spec_round_trip_and_bound(spec):
    back = SequenceSpec.from_dict(spec.to_dict())
    assert back == spec or back.to_dict() == spec.to_dict()
    lo, hi = (-1, 0) if spec.generator == "custom" else (-50, 50)
    assert np.array_equal(back.generate(lo, hi).values, spec.generate(lo, hi).values)
    assert np.max(np.abs(spec.generate(lo, hi).values)) <= spec.sup_norm_bound + 1e-12


def test_declared_types():
    assert fibonacci_spec().declared_type == "pp"
    assert thue_morse_spec().declared_type == "sc"
    assert bernoulli_spec(0.5).declared_type == "ac"
    assert bernoulli_spec(1.0).declared_type == "pp"
    assert bernoulli_spec(0.3).declared_type == "mixed"
    assert sign_spec().declared_atoms() == {Fraction(0)}
    assert periodic_spec([1, -1]).declared_atoms() == {Fraction(1, 2)}


def test_theta_parsing_and_phases():
    assert parse_theta("1/3") == Fraction(1, 3)
    assert parse_theta(Fraction(4, 3)) == Fraction(1, 3)
    assert parse_theta(1.25) == 0.25
    k = np.array([0, 3, 10**12 + 1])
    assert np.allclose(phases(Fraction(1, 3), k), np.exp(2j * np.pi * np.array([0, 0, 2]) / 3))
