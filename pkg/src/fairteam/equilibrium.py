"""Pure Nash equilibria of the effort game induced by a team contract."""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    Instance,
    PreconditionError,
    TeamContract,
    check_cap,
    cutoff_wage,
    is_feasible,
    popcount,
    submasks,
    weakly_geq,
)


def works(inst: Instance, share: float, i: int, E: int) -> bool:
    """Whether agent ``i`` weakly prefers effort when the others in ``E`` work.

    Indifference counts as effort (ties favor the principal).
    """
    bit = 1 << i
    gain = share * (inst.f(E | bit) - inst.f(E & ~bit))
    return weakly_geq(gain, inst.costs[i], inst.tol)


def is_equilibrium(inst: Instance, contract: TeamContract, E: int) -> bool:
    if E & ~contract.team:
        raise PreconditionError("equilibrium candidate must be a subset of the team")
    for i in contract.members:
        if works(inst, contract.alpha[i], i, E) != bool(E >> i & 1):
            return False
    return True


def enumerate_equilibria(inst: Instance, contract: TeamContract) -> list[int]:
    """All pure equilibria inside the team, ascending by bitmask."""
    check_cap(popcount(contract.team), inst.enum_cap)
    return [int(E) for E in submasks(contract.team) if is_equilibrium(inst, contract, int(E))]


@dataclass(frozen=True)
class SwapOutcome:
    swapped_pair: tuple[int, int]
    equilibrium: int | None
    unique: bool
    equilibria: tuple[int, ...] = field(default=())


def swap_equilibrium(inst: Instance, contract: TeamContract, i: int, j: int) -> SwapOutcome:
    """Equilibrium reached after agents ``i`` and ``j`` exchange their shares.

    On submodular rewards with a feasible contract only the agent whose share
    went down can drop out, so the answer is ``S`` or ``S - k``.  Otherwise all
    equilibria are enumerated and ``equilibrium`` is the first of them (or
    ``None`` when there is none).
    """
    S = contract.team
    if not (S >> i & 1 and S >> j & 1):
        raise PreconditionError(f"agents {i} and {j} must both be in the team")
    swapped = contract.swapped(i, j)

    if inst.submodular and is_feasible(inst, contract):
        a_i, a_j = contract.alpha[i], contract.alpha[j]
        if a_i == a_j:
            return SwapOutcome((i, j), S, True, (S,))
        k = j if a_i < a_j else i
        if weakly_geq(swapped.alpha[k], cutoff_wage(inst, k, S), inst.tol):
            E = S
        else:
            E = S & ~(1 << k)
        return SwapOutcome((i, j), E, True, (E,))

    eqs = tuple(enumerate_equilibria(inst, swapped))
    return SwapOutcome((i, j), eqs[0] if eqs else None, len(eqs) == 1, eqs)


def team_utility(inst: Instance, share: float, i: int, E: int) -> float:
    """Utility of agent ``i`` holding ``share`` when ``E`` is the working set."""
    return share * inst.f(E) - (inst.costs[i] if E >> i & 1 else 0.0)

