"""Brute-force optimal fair and non-discriminatory contracts.

Every team is scored in vectorized chunks of bitmasks.  These solvers are the
ground truth the approximation algorithms are measured against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    CHUNK,
    Instance,
    ModelError,
    TeamContract,
    check_cap,
    cutoff_wage,
    members,
    revenue,
)
from .fairness import least_incentive_contract, optimal_minimum_share


@dataclass(frozen=True)
class SolveResult:
    team: int
    contract: TeamContract
    minimum_share: float | None
    revenue: float
    algorithm: str
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "team": members(self.team),
            "alpha": list(self.contract.alpha),
            "minimum_share": self.minimum_share,
            "revenue": self.revenue,
            "algorithm": self.algorithm,
            "params": dict(self.params),
        }


def fair_result(inst: Instance, S: int, algorithm: str, params: dict | None = None) -> SolveResult:
    """Least-incentive contract at the optimal minimum share for team ``S``."""
    if S == 0:
        return SolveResult(0, TeamContract.empty(inst.n), 0.0, 0.0, algorithm, dict(params or {}))
    L = optimal_minimum_share(inst, S)
    contract = least_incentive_contract(inst, S, L)
    return SolveResult(S, contract, L, revenue(inst, contract), algorithm, dict(params or {}))


def uniform_result(inst: Instance, S: int, algorithm: str, params: dict | None = None) -> SolveResult:
    """Every member paid the largest cut-off wage in ``S``."""
    if S == 0:
        return SolveResult(0, TeamContract.empty(inst.n), None, 0.0, algorithm, dict(params or {}))
    p = max(cutoff_wage(inst, i, S) for i in members(S))
    contract = TeamContract.from_shares(inst.n, {i: p for i in members(S)})
    return SolveResult(S, contract, p, revenue(inst, contract), algorithm, dict(params or {}))


def _score_chunk(inst: Instance, masks: np.ndarray, fair: bool) -> tuple[np.ndarray, np.ndarray]:
    """Revenue of the per-team optimal contract and f(S) for a chunk of teams.

    Unusable teams (zero reward, or a member with zero marginal) score -inf.
    """
    tol = inst.tol
    fS = inst.values_for(masks)
    size = np.zeros(len(masks))
    paid_cut = np.zeros(len(masks))
    max_cut = np.zeros(len(masks))
    max_floor = np.zeros(len(masks))
    ok = fS > tol
    cuts = []
    for i in range(inst.n):
        inside = (masks >> i) & 1 == 1
        m = fS - inst.values_for(masks & ~np.int64(1 << i))
        ok &= ~inside | (m > tol)
        with np.errstate(divide="ignore", invalid="ignore"):
            cut = np.where(inside & (m > tol), inst.costs[i] / m, 0.0)
            floor = np.where(inside & (m > tol), cut * (1.0 - m / fS), 0.0)
        size += inside
        max_cut = np.maximum(max_cut, cut)
        max_floor = np.maximum(max_floor, floor)
        cuts.append((inside, cut))
    if fair:
        for inside, cut in cuts:
            paid_cut += np.where(inside, np.maximum(max_floor, cut), 0.0)
        paid = paid_cut
    else:
        paid = size * max_cut
    rev = np.where(ok, (1.0 - paid) * fS, -np.inf)
    rev[masks == 0] = 0.0
    return rev, fS


def _best_team(inst: Instance, fair: bool) -> int:
    check_cap(inst.n, inst.enum_cap)
    tol = inst.tol
    best = -math.inf
    cands: list[tuple[float, float, int]] = []
    total = 1 << inst.n
    for start in range(0, total, CHUNK):
        masks = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        rev, fS = _score_chunk(inst, masks, fair)
        top = rev.max()
        if top < best - tol:
            continue
        best = max(best, top)
        keep = rev >= best - tol
        cands = [c for c in cands if c[0] >= best - tol]
        cands.extend(zip(rev[keep].tolist(), fS[keep].tolist(), masks[keep].tolist()))
    f_top = max(c[1] for c in cands)
    return min(c[2] for c in cands if c[1] >= f_top - tol)


def optimal_fair_bruteforce(inst: Instance) -> SolveResult:
    """Revenue-maximizing fair contract over all teams (submodular rewards only)."""
    if not inst.submodular:
        raise ModelError("exact fair optimum relies on the minimum-share structure of submodular rewards")
    return fair_result(inst, _best_team(inst, fair=True), "exact")


def optimal_nondiscriminatory_bruteforce(inst: Instance) -> SolveResult:
    """Revenue-maximizing contract paying all members the same share."""
    return uniform_result(inst, _best_team(inst, fair=False), "exact-nd")
