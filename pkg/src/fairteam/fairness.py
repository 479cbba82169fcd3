"""Swap-based fairness of team contracts and the minimum-share construction."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .core import (
    InfeasibleTeamError,
    Instance,
    ModelError,
    PreconditionError,
    TeamContract,
    cutoff_wage,
    is_feasible,
    marginal,
    members,
    weakly_geq,
)
from .equilibrium import enumerate_equilibria, is_equilibrium, swap_equilibrium, team_utility

OPTIMISTIC = "optimistic"
PESSIMISTIC = "pessimistic"


class InfeasibleContractError(PreconditionError):
    """Fairness is only defined for contracts under which the whole team works."""


@dataclass(frozen=True)
class Witness:
    """A swap that breaks envy-freeness.

    ``utilities`` maps each agent of the pair to ``(before, after)``: its
    utility under the original contract and under the swapped contract at
    ``equilibrium``.  ``violated_by`` lists the agents strictly better off
    after the swap.
    """

    pair: tuple[int, int]
    equilibrium: int | None
    violated_by: tuple[int, ...]
    utilities: dict[int, tuple[float, float]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "pair": list(self.pair),
            "equilibrium": None if self.equilibrium is None else members(self.equilibrium),
            "violated_by": list(self.violated_by),
            "utilities": {str(k): {"before": b, "after": a} for k, (b, a) in self.utilities.items()},
        }


@dataclass(frozen=True)
class FairnessVerdict:
    fair: bool
    witness: Witness | None = None
    semantics: str = OPTIMISTIC

    def __bool__(self) -> bool:
        return self.fair

    def to_json(self) -> dict:
        return {
            "fair": self.fair,
            "semantics": self.semantics,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def _distinct(contract: TeamContract, i: int, j: int, tol: float) -> bool:
    return abs(contract.alpha[i] - contract.alpha[j]) > tol


def swap_witness(inst: Instance, contract: TeamContract, i: int, j: int, E: int | None) -> Witness:
    """Evaluate both envy inequalities for the swap of ``i`` and ``j`` landing in ``E``."""
    S = contract.team
    a = contract.alpha
    utilities = {}
    violated = []
    for me, other in ((i, j), (j, i)):
        before = team_utility(inst, a[me], me, S)
        after = -math.inf if E is None else team_utility(inst, a[other], me, E)
        utilities[me] = (before, after)
        if E is None or not weakly_geq(before, after, inst.tol):
            violated.append(me)
    return Witness((i, j), E, tuple(violated), utilities)


def witness_holds(inst: Instance, contract: TeamContract, w: Witness) -> bool:
    """Independently re-check a witness: the equilibrium is genuine and someone envies."""
    i, j = w.pair
    if w.equilibrium is None:
        return not enumerate_equilibria(inst, contract.swapped(i, j))
    if not is_equilibrium(inst, contract.swapped(i, j), w.equilibrium):
        return False
    return bool(swap_witness(inst, contract, i, j, w.equilibrium).violated_by)


def pair_fairness(
    inst: Instance, contract: TeamContract, i: int, j: int, semantics: str = OPTIMISTIC
) -> FairnessVerdict:
    """Envy-freeness of the single swap ``(i, j)``.

    Optimistic semantics ask for *some* post-swap equilibrium where neither
    agent gains; pessimistic semantics ask it of *every* equilibrium.  With no
    post-swap equilibrium at all the pair is reported unfair either way.
    """
    if semantics not in (OPTIMISTIC, PESSIMISTIC):
        raise ValueError(f"unknown semantics {semantics!r}")
    outcome = swap_equilibrium(inst, contract, i, j)
    if not outcome.equilibria:
        return FairnessVerdict(False, swap_witness(inst, contract, i, j, None), semantics)
    witnesses = [swap_witness(inst, contract, i, j, E) for E in outcome.equilibria]
    failing = [w for w in witnesses if w.violated_by]
    if semantics == OPTIMISTIC:
        fair = len(failing) < len(witnesses)
    else:
        fair = not failing
    return FairnessVerdict(fair, None if fair else failing[0], semantics)


def is_fair_definitional(
    inst: Instance, contract: TeamContract, semantics: str = OPTIMISTIC
) -> FairnessVerdict:
    """Check every swap of two team members with different shares directly."""
    if not is_feasible(inst, contract):
        raise InfeasibleContractError("contract does not incentivize its whole team")
    for i, j in itertools.combinations(contract.members, 2):
        if not _distinct(contract, i, j, inst.tol):
            continue
        verdict = pair_fairness(inst, contract, i, j, semantics)
        if not verdict.fair:
            return verdict
    return FairnessVerdict(True, None, semantics)


def is_fair_submodular(inst: Instance, contract: TeamContract) -> FairnessVerdict:
    """Closed-form fairness test for submodular rewards.

    For every pair with ``alpha_i < alpha_j`` the lower share must sit strictly
    below ``j``'s cut-off wage (so ``j`` quits after the swap) and no lower
    than ``alpha_j * f(S - j) / f(S)`` (so ``i`` does not envy).  Landing
    exactly on the cut-off counts as a violation: ``j`` would keep working.
    """
    if not inst.submodular:
        raise ModelError("closed-form fairness test needs a submodular reward")
    if not is_feasible(inst, contract):
        raise InfeasibleContractError("contract does not incentivize its whole team")
    S = contract.team
    team = contract.members
    tol = inst.tol
    a = contract.alpha
    fS = inst.f(S)
    if len(team) > 1 and fS <= tol:
        raise InfeasibleTeamError("team has zero reward")
    for x, y in itertools.combinations(team, 2):
        if not _distinct(contract, x, y, tol):
            continue
        i, j = (x, y) if a[x] < a[y] else (y, x)
        m_j = marginal(inst, j, S)
        if weakly_geq(a[i], cutoff_wage(inst, j, S), tol):
            return FairnessVerdict(False, swap_witness(inst, contract, i, j, S))
        if a[i] < a[j] * (1.0 - m_j / fS) - tol:
            return FairnessVerdict(False, swap_witness(inst, contract, i, j, S & ~(1 << j)))
    return FairnessVerdict(True)


def _team_cutoffs(inst: Instance, S: int) -> dict[int, tuple[float, float]]:
    out = {}
    for i in members(S):
        m = marginal(inst, i, S)
        if m <= inst.tol:
            raise InfeasibleTeamError(f"agent {i} has zero marginal contribution in the team")
        out[i] = (m, inst.costs[i] / m)
    return out


def optimal_minimum_share(inst: Instance, S: int) -> float:
    """Smallest uniform floor on shares that keeps the least-incentive contract fair.

    ``max_i cutoff_i * (1 - f(i | S - i) / f(S))``; zero for singletons and the
    empty team.
    """
    if S == 0:
        return 0.0
    fS = inst.f(S)
    if fS <= inst.tol:
        raise InfeasibleTeamError("team has zero reward")
    return max(cut * (1.0 - m / fS) for m, cut in _team_cutoffs(inst, S).values())


def least_incentive_contract(inst: Instance, S: int, floor: float | None = None) -> TeamContract:
    """Pay every member ``max(floor, cutoff)``; the floor defaults to the optimal one."""
    cutoffs = _team_cutoffs(inst, S)
    best = optimal_minimum_share(inst, S)
    if floor is None:
        floor = best
    elif floor < best - inst.tol:
        raise PreconditionError(f"minimum share {floor} is below the fair threshold {best}")
    return TeamContract.from_shares(inst.n, {i: max(floor, cut) for i, (_, cut) in cutoffs.items()})
