import numpy as np
import pytest
from hypothesis import given, strategies as st

from fairteam.core import AdditiveReward, EnumerationCapError, Instance, ModelError, revenue
from fairteam.exact import optimal_fair_bruteforce, optimal_nondiscriminatory_bruteforce
from fairteam.fairness import is_fair_definitional
from fairteam.instances import random_instance

import oracles


def test_fair_examples(E1, E2):
    r = optimal_fair_bruteforce(E1)
    assert r.team == 0b11
    assert r.contract.alpha == pytest.approx((2 / 15, 1 / 5), abs=1e-12)
    assert r.revenue == pytest.approx(0.5, abs=1e-12)
    r = optimal_fair_bruteforce(E2)
    assert r.team == 0b11 and r.contract.alpha == pytest.approx((1 / 8, 1 / 4))
    assert r.revenue == pytest.approx(5 / 8, abs=1e-12)


def test_unprofitable_single_agent_gives_empty_team():
    inst = Instance((2.0,), AdditiveReward((0.5,)))
    assert optimal_fair_bruteforce(inst).team == 0
    assert optimal_fair_bruteforce(inst).revenue == 0
    assert optimal_nondiscriminatory_bruteforce(inst).team == 0


def test_nondiscriminatory_examples(E1, E2):
    r = optimal_nondiscriminatory_bruteforce(E2)
    assert r.team == 0b11 and r.contract.alpha == pytest.approx((0.25, 0.25))
    assert r.revenue == pytest.approx(0.5, abs=1e-12)
    r = optimal_nondiscriminatory_bruteforce(E1)
    # {0} at share 0.1 and {0,1} at share 0.2 tie at 0.45; the larger reward wins
    assert r.revenue == pytest.approx(0.45, abs=1e-12)
    assert r.team == 0b11


def test_example_ratio(E2):
    ratio = optimal_nondiscriminatory_bruteforce(E2).revenue / optimal_fair_bruteforce(E2).revenue
    assert ratio == pytest.approx(4 / 5, abs=1e-12)


def test_refuses_non_submodular(E3):
    with pytest.raises(ModelError):
        optimal_fair_bruteforce(E3)
    # the uniform-share optimum is still well defined
    r = optimal_nondiscriminatory_bruteforce(E3)
    assert r.revenue == pytest.approx(oracles.best_over_teams(E3, oracles.uniform_revenue_of_team))


def test_cap():
    inst = Instance((0.01,) * 6, AdditiveReward((0.1,) * 6), enum_cap=5)
    with pytest.raises(EnumerationCapError):
        optimal_fair_bruteforce(inst)


def test_chunked_enumeration_matches_small_chunks(monkeypatch):
    inst = random_instance("coverage", 9, 4)
    whole = optimal_fair_bruteforce(inst)
    import fairteam.exact as ex

    monkeypatch.setattr(ex, "CHUNK", 7)
    assert optimal_fair_bruteforce(inst) == whole


@given(st.integers(0, 100_000), st.integers(1, 8), st.sampled_from(["additive", "coverage"]))
def test_matches_oracle_and_is_fair(seed, n, kind):
    inst = random_instance(kind, n, seed)
    fair = optimal_fair_bruteforce(inst)
    nd = optimal_nondiscriminatory_bruteforce(inst)
    assert fair.revenue == pytest.approx(oracles.best_over_teams(inst, oracles.fair_revenue_of_team), abs=1e-9)
    assert nd.revenue == pytest.approx(oracles.best_over_teams(inst, oracles.uniform_revenue_of_team), abs=1e-9)
    assert fair.revenue == pytest.approx(revenue(inst, fair.contract), abs=1e-9)
    assert is_fair_definitional(inst, fair.contract).fair
    assert nd.revenue <= fair.revenue + 1e-9


@given(st.integers(0, 100_000), st.integers(2, 8))
def test_optimal_uniform_team_needs_large_marginals(seed, n):
    inst = random_instance("coverage", n, seed, cost_scale=2.0)
    r = optimal_nondiscriminatory_bruteforce(inst)
    if r.team == 0:
        return
    S = r.team
    top = max(inst.costs[i] / oracles.marg(inst, i, S) for i in oracles.mem(S))
    fS = inst.f(S)
    for k in oracles.mem(S):
        assert oracles.marg(inst, k, S) / fS >= top - 1e-9


@given(st.integers(0, 100_000), st.integers(2, 8))
def test_shares_within_factor_two(seed, n):
    inst = random_instance(["additive", "coverage"][seed % 2], n, seed, cost_scale=1.0)
    r = optimal_fair_bruteforce(inst)
    S = r.team
    fS = inst.f(S)
    big = [i for i in oracles.mem(S) if inst.f(1 << i) > fS / 2]
    rest = [i for i in oracles.mem(S) if i not in big]
    a = r.contract.alpha
    for i in rest:
        for j in rest:
            assert a[i] >= a[j] / 2 - 1e-9
