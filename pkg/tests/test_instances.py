import itertools

import pytest
from hypothesis import given, strategies as st

from fairteam.core import cutoff_wage
from fairteam.exact import optimal_fair_bruteforce
from fairteam.instances import (
    SubsetSumSpec,
    has_half_sum,
    paper_example,
    random_instance,
    subset_sum_instance,
)
from fairteam.core import ModelError

import oracles


def test_examples(E1, E2, E3):
    assert E1.f(0b11) == pytest.approx(0.75)
    assert (cutoff_wage(E2, 0, 0b11), cutoff_wage(E2, 1, 0b11)) == pytest.approx((1 / 8, 1 / 4))
    assert not E3.submodular
    assert not oracles.is_submodular_bruteforce(E3)
    # pointwise max of the three additive tables
    assert E3.f(0b0011) == 12 and E3.f(0b1100) == 13 and E3.f(0b0101) == 7


def test_unknown_example():
    with pytest.raises(KeyError):
        paper_example("E9")


def test_subset_sum_arithmetic():
    spec = SubsetSumSpec((1, 1, 2), 2)
    inst, threshold = subset_sum_instance(spec)
    assert spec.delta == pytest.approx(1 / 96)
    assert inst.singleton_values == pytest.approx((1 / 96 + 1 / 6, 1 / 96 + 1 / 6, 2 / 96 + 1 / 6))
    assert threshold == pytest.approx(17 / 96)
    assert optimal_fair_bruteforce(inst).revenue >= threshold - 1e-12


def test_subset_sum_no_half_sum():
    inst, threshold = subset_sum_instance(SubsetSumSpec((1, 1, 1), 1))
    assert not has_half_sum((1, 1, 1), 1)
    assert optimal_fair_bruteforce(inst).revenue < threshold - 1e-12


def test_subset_sum_validation():
    with pytest.raises(ModelError):
        SubsetSumSpec((0, 1), 1)
    with pytest.raises(ModelError):
        SubsetSumSpec((1, 2), 3)


def test_half_sum_decider():
    assert has_half_sum((1, 2, 3), 2)  # {1,2} vs {3}: 3 = 3 with two items
    assert has_half_sum((1, 2, 3), 1)
    assert not has_half_sum((1, 2, 4), 1)


@pytest.mark.parametrize("weights", [w for m in range(1, 5) for w in itertools.product(range(1, 4), repeat=m)])
def test_reduction_small(weights):
    for k in range(1, len(weights) + 1):
        inst, threshold = subset_sum_instance(SubsetSumSpec(weights, k))
        opt = optimal_fair_bruteforce(inst).revenue
        assert (opt >= threshold - 1e-12) == has_half_sum(weights, k)


def test_random_determinism():
    assert random_instance("additive", 5, 42, 0.5) == random_instance("additive", 5, 42, 0.5)
    assert random_instance("coverage", 5, 42, 0.5) == random_instance("coverage", 5, 42, 0.5)
    assert random_instance("additive", 5, 42) != random_instance("additive", 5, 43)


def test_random_coverage_is_submodular():
    assert oracles.is_submodular_bruteforce(random_instance("coverage", 6, 7, 0.5))


def test_random_additive_normalized():
    assert sum(random_instance("additive", 3, 1, 0.5).singleton_values) <= 1 + 1e-12


def test_unknown_kind():
    with pytest.raises(KeyError):
        random_instance("budget", 3, 0)


@given(st.integers(0, 100_000), st.integers(1, 10), st.sampled_from(["additive", "coverage"]), st.floats(0.01, 3))
def test_generated_instances_validate(seed, n, kind, scale):
    inst = random_instance(kind, n, seed, scale)
    assert inst.n == n and all(c > 0 for c in inst.costs)
    assert inst.f(0) == 0
    assert inst.f(inst.ground) <= 1 + 1e-9
    for i in range(n):
        assert inst.costs[i] <= scale * inst.f(1 << i) + 1e-6


@st.composite
def _weights(draw):
    m = draw(st.integers(1, 8))
    w = draw(st.lists(st.integers(1, 20), min_size=m, max_size=m).filter(lambda w: sum(w) <= 20))
    return tuple(w), draw(st.integers(1, m))


@given(_weights())
def test_reduction_sampled_up_to_eight_houses(case):
    weights, k = case
    inst, threshold = subset_sum_instance(SubsetSumSpec(weights, k))
    assert (optimal_fair_bruteforce(inst).revenue >= threshold - 1e-12) == has_half_sum(weights, k)
