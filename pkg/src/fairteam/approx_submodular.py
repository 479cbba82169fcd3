"""Constant-factor approximation for submodular rewards.

The search targets the best *non-discriminatory* team (objective ``g``) and
then pays the chosen team with its least-incentive fair contract, which can
only cost less than the uniform share.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .core import (
    Instance,
    ModelError,
    PreconditionError,
    demand_set,
    marginal,
    members,
    to_mask,
)
from .exact import SolveResult, fair_result


@dataclass(frozen=True)
class SubmodApproxParams:
    delta: float = 1 / 128
    tau: float = 1 / 128
    eta: float = 17 / 16
    beta: float = 17 / 16
    lam: float = 1 / 2

    def __post_init__(self):
        if not (0 < self.delta < 1 and 0 < self.tau < 1):
            raise PreconditionError("delta and tau must lie in (0, 1)")
        if not (self.eta > 1 and self.beta > 1):
            raise PreconditionError("eta and beta must exceed 1")
        if not (0 < self.lam <= 1):
            raise PreconditionError("lambda must lie in (0, 1]")


def _require_submodular(inst: Instance) -> None:
    if not inst.submodular:
        raise ModelError("this routine needs a submodular reward")


def g_value(inst: Instance, S: int) -> float:
    """Revenue of team ``S`` when every member gets the largest cut-off wage in ``S``."""
    if S == 0:
        return 0.0
    worst = 0.0
    for i in members(S):
        m = marginal(inst, i, S)
        if m <= inst.tol:
            return -math.inf
        worst = max(worst, inst.costs[i] / m)
    return (1.0 - len(members(S)) * worst) * inst.f(S)


def _in_window(inst: Instance, S: int, lam: float, psi: float) -> bool:
    top = max((inst.f(1 << i) for i in members(S)), default=0.0)
    fS = inst.f(S)
    return (1 - lam) * psi - inst.tol <= fS <= psi + top + inst.tol


def scaling_lemma(inst: Instance, S: int, lam: float, psi: float) -> int | None:
    """Shrink ``S`` until ``(1-lam)*psi <= f(U) <= psi + max_{i in U} f(i)``.

    Agents are peeled off in increasing order of marginal contribution (ties
    to the smaller index).  Returns ``None`` when no prefix lands in the window.
    """
    _require_submodular(inst)
    if not (0 < lam <= 1):
        raise PreconditionError("lambda must lie in (0, 1]")
    if psi < 0 or psi >= inst.f(S):
        raise PreconditionError("target must satisfy 0 <= psi < f(S)")
    if _in_window(inst, S, lam, psi):
        return S
    for _ in range(len(members(S))):
        weakest = min(members(S), key=lambda k: (marginal(inst, k, S), k))
        S &= ~(1 << weakest)
        if _in_window(inst, S, lam, psi):
            return S
    return None


def gamma_grid(n: int, params: SubmodApproxParams) -> list[float]:
    base = params.tau / (2 * n)
    top = math.floor(math.log(2 * n / params.tau) / math.log(params.beta) + 1e-12)
    return [params.beta**k * base for k in range(top + 1)]


def reward_grid(inst: Instance, params: SubmodApproxParams) -> list[float]:
    """Geometric estimates ``eta^k f(i)`` of the optimal team's reward."""
    top = math.floor(math.log(inst.n) / math.log(params.eta) + 1e-12)
    vals = {params.eta**k * fi for fi in inst.singleton_values if fi > 0 for k in range(top + 1)}
    return sorted(vals)


def case3_search(
    inst: Instance, params: SubmodApproxParams | None = None, trace: list | None = None
) -> int:
    """Demand queries over the (share, reward) estimate grid, each followed by scaling.

    Iterations whose demand set is empty or whose scaling target falls outside
    ``[0, f(S_hat))`` are skipped.  If ``trace`` is a list, one dict per
    evaluated iteration is appended to it.
    """
    _require_submodular(inst)
    params = params or SubmodApproxParams()
    n = inst.n
    single = inst.singleton_values
    best, best_g = 0, 0.0
    ys = reward_grid(inst, params)
    for gam in gamma_grid(n, params):
        for y in ys:
            allowed = to_mask(i for i in range(n) if single[i] <= params.delta * params.eta * y + inst.tol)
            if allowed == 0:
                continue
            prices = [max(c / (2 * gam * params.beta), gam * y / 4) for c in inst.costs]
            S_hat = demand_set(inst, prices, allowed)
            if S_hat == 0:
                continue
            psi = y / 16 - max(single[i] for i in members(S_hat))
            if psi < 0 or psi >= inst.f(S_hat):
                continue
            U = scaling_lemma(inst, S_hat, params.lam, psi)
            if U is None:
                continue
            gU = g_value(inst, U)
            if trace is not None:
                trace.append({"gamma": gam, "y": y, "allowed": allowed, "demand": S_hat, "psi": psi, "U": U, "g": gU})
            if gU > best_g:
                best, best_g = U, gU
    return best


def case2_bounded(inst: Instance, tau: float = 1 / 128) -> int:
    """Demand set at prices ``c_i * n / tau``: every hired agent must be cheap to incentivize."""
    _require_submodular(inst)
    prices = [c * inst.n / tau for c in inst.costs]
    return demand_set(inst, prices, inst.ground)


def best_singleton(inst: Instance) -> int:
    best, best_g = 0, -math.inf
    for i, fi in enumerate(inst.singleton_values):
        if fi <= 0:
            continue
        gi = g_value(inst, 1 << i)
        if gi > best_g:
            best, best_g = 1 << i, gi
    return best


def constant_approx(
    inst: Instance, params: SubmodApproxParams | None = None, rescore: bool = False
) -> SolveResult:
    """Pick the best of the singleton, Case 3 and Case 2 candidates and pay it fairly.

    Candidates are compared by ``g`` unless ``rescore`` is set, in which case
    the fair-contract revenue of each candidate decides.
    """
    _require_submodular(inst)
    params = params or SubmodApproxParams()
    candidates = {
        "singleton": best_singleton(inst),
        "case3": case3_search(inst, params),
        "case2": case2_bounded(inst, params.tau),
    }

    def score(S: int) -> float:
        if g_value(inst, S) == -math.inf:
            return -math.inf
        return fair_result(inst, S, "").revenue if rescore else g_value(inst, S)

    chosen, branch, top = 0, "empty", 0.0
    for name, S in candidates.items():
        s = score(S)
        if s > top:
            chosen, branch, top = S, name, s
    info = asdict(params)
    info["branch"] = branch
    info["rescore"] = rescore
    return fair_result(inst, chosen, "submodular-approx", info)
