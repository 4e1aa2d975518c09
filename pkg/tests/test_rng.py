from hypothesis import given
from hypothesis import strategies as st

from cartanlab.rng import SplitMix64, fnv1a64


def test_reference_vectors():
    assert SplitMix64(0).next_u64() == 0xE220A8397B1DCDAF
    assert SplitMix64(1234567).next_u64() == 6457827717110365317


def test_fnv1a_reference():
    assert fnv1a64("") == 0xCBF29CE484222325
    assert fnv1a64("a") == 0xAF63DC4C8601EC8C


@given(st.integers(0, 2**64 - 1), st.sampled_from(["prop32", "tian", "gualtieri"]), st.integers(0, 500))
def test_trial_streams_are_reproducible(seed, suite, trial):
    a, b = SplitMix64.for_trial(seed, suite, trial), SplitMix64.for_trial(seed, suite, trial)
    assert [a.next_u64() for _ in range(8)] == [b.next_u64() for _ in range(8)]


def test_trials_and_suites_get_distinct_streams():
    firsts = {SplitMix64.for_trial(42, "prop32", t).next_u64() for t in range(1000)}
    assert len(firsts) == 1000
    assert SplitMix64.for_trial(42, "prop32", 0).next_u64() != SplitMix64.for_trial(42, "tian", 0).next_u64()


@given(st.integers(0, 2**64 - 1), st.integers(1, 1000))
def test_below_range(seed, n):
    r = SplitMix64(seed)
    assert all(0 <= r.below(n) < n for _ in range(20))


def test_sample_without_replacement():
    r = SplitMix64(7)
    s = r.sample(range(10), 6)
    assert len(set(s)) == 6 and set(s) <= set(range(10))
