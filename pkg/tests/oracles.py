"""Slow, independent reference implementations used to cross-check the library.

Everything here works from ``reward.value`` on single masks with plain loops,
and deliberately avoids the vectorized and fast-path code under test.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from fairteam.core import AdditiveReward, CoverageReward, Instance, TableReward


def subsets(mask):
    idx = [i for i in range(mask.bit_length()) if mask >> i & 1]
    for r in range(len(idx) + 1):
        for combo in itertools.combinations(idx, r):
            yield sum(1 << i for i in combo)


def f(inst, S):
    return inst.reward.value(S)


def mem(S):
    return [i for i in range(S.bit_length()) if S >> i & 1]


def marg(inst, i, S):
    return f(inst, S | 1 << i) - f(inst, S & ~(1 << i))


def demand_objective(inst, prices, S):
    return f(inst, S) - sum(prices[i] for i in mem(S))


def best_demand_value(inst, prices, ground):
    return max(demand_objective(inst, prices, S) for S in subsets(ground))


def equilibria(inst, team, alpha, tol=1e-9):
    """Pure equilibria from the two utility comparisons, nothing shared with the library."""
    out = []
    for E in subsets(team):
        ok = True
        for i in mem(team):
            a, c = alpha[i], inst.costs[i]
            if E >> i & 1:
                ok &= a * f(inst, E) - c >= a * f(inst, E & ~(1 << i)) - tol
            else:
                ok &= a * f(inst, E | 1 << i) - c < a * f(inst, E) - tol
        if ok:
            out.append(E)
    return sorted(out)


def fair_by_definition(inst, team, alpha, pessimistic=False, tol=1e-9):
    for i, j in itertools.combinations(mem(team), 2):
        if abs(alpha[i] - alpha[j]) <= tol:
            continue
        swapped = list(alpha)
        swapped[i], swapped[j] = swapped[j], swapped[i]
        eqs = equilibria(inst, team, swapped, tol)
        good = []
        for E in eqs:
            ok = True
            for me, other in ((i, j), (j, i)):
                before = alpha[me] * f(inst, team) - inst.costs[me]
                after = alpha[other] * f(inst, E) - (inst.costs[me] if E >> me & 1 else 0)
                ok &= before >= after - tol
            good.append(ok)
        if not eqs:
            return False
        if pessimistic and not all(good):
            return False
        if not pessimistic and not any(good):
            return False
    return True


def fair_revenue_of_team(inst, S, tol=1e-9):
    """Optimal fair revenue for a fixed team, or None when the team is unusable."""
    if S == 0:
        return 0.0
    fS = f(inst, S)
    if fS <= tol:
        return None
    cuts = {}
    for i in mem(S):
        m = marg(inst, i, S)
        if m <= tol:
            return None
        cuts[i] = (inst.costs[i] / m, m)
    L = max(cut * (1 - m / fS) for cut, m in cuts.values())
    return (1 - sum(max(L, cut) for cut, _ in cuts.values())) * fS


def uniform_revenue_of_team(inst, S, tol=1e-9):
    if S == 0:
        return 0.0
    cuts = []
    for i in mem(S):
        m = marg(inst, i, S)
        if m <= tol:
            return None
        cuts.append(inst.costs[i] / m)
    return (1 - len(cuts) * max(cuts)) * f(inst, S)


def best_over_teams(inst, scorer):
    vals = [scorer(inst, S) for S in range(1 << inst.n)]
    return max(v for v in vals if v is not None)


def random_table_instance(rng, n, submodular=True):
    """Explicit table from a random coverage (submodular) or a random monotone table."""
    if submodular:
        m = 2 * n
        w = rng.uniform(0.1, 1.0, m)
        covers = [rng.choice(m, size=int(rng.integers(1, m)), replace=False).tolist() for _ in range(n)]
        cov = CoverageReward(w / w.sum(), covers)
        table = [cov.value(S) for S in range(1 << n)]
    else:
        table = [0.0] * (1 << n)
        for S in range(1, 1 << n):
            lo = max(table[S & ~(1 << i)] for i in mem(S))
            table[S] = lo + float(rng.uniform(0, 0.3))
    costs = rng.uniform(0.01, 0.2, n)
    return Instance(costs, TableReward(table))


def random_feasible_contract(rng, inst, team, spread=1.0):
    alpha = [0.0] * inst.n
    for i in mem(team):
        m = marg(inst, i, team)
        alpha[i] = inst.costs[i] / m * (1 + spread * float(rng.uniform(0, 1)))
    return alpha


def usable_team(inst, S, tol=1e-9):
    return S != 0 and f(inst, S) > tol and all(marg(inst, i, S) > tol for i in mem(S))


def is_submodular_bruteforce(inst, tol=1e-9):
    n = inst.n
    for S in range(1 << n):
        for T in subsets(S):
            for i in range(n):
                if S >> i & 1:
                    continue
                if marg(inst, i, S) > marg(inst, i, T) + tol:
                    return False
    return True


def additive_instance(values, costs):
    return Instance(costs, AdditiveReward(values))


def is_close(a, b, tol=1e-9):
    return math.isclose(a, b, rel_tol=0, abs_tol=tol)


def rng(seed):
    return np.random.default_rng(seed)
