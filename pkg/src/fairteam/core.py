"""Instances, reward oracles, cut-off wages and revenue.

Subsets of agents are plain ``int`` bitmasks: agent ``i`` is in ``S`` iff
``S >> i & 1``.  Agents are 0-indexed everywhere.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
DEFAULT_ENUM_CAP = 25
MAX_AGENTS = 63
# full value tables are cached up to this many agents
TABLE_LIMIT = 18
CHUNK = 1 << 16


class ContractError(Exception):
    """Base class for library errors."""


class PreconditionError(ContractError):
    """An operation was called outside its domain (wrong reward model, bad arguments)."""


class InfeasibleTeamError(PreconditionError):
    """A team has a zero-marginal member or zero reward."""


class EnumerationCapError(ContractError):
    """An exhaustive routine was asked to enumerate more agents than allowed."""


class ModelError(ContractError, ValueError):
    """A reward model or instance failed validation."""


# ---------------------------------------------------------------------------
# bitmask helpers


def to_mask(agents: Iterable[int]) -> int:
    mask = 0
    for i in agents:
        mask |= 1 << int(i)
    return mask


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def submasks(mask: int) -> np.ndarray:
    """All submasks of ``mask`` as an int64 array, in ascending order."""
    idx = members(mask)
    k = len(idx)
    combos = np.arange(1 << k, dtype=np.int64)
    out = np.zeros(1 << k, dtype=np.int64)
    for t, i in enumerate(idx):
        out |= ((combos >> t) & 1) << i
    return out


def bit_matrix(masks: np.ndarray, n: int) -> np.ndarray:
    """``(len(masks), n)`` 0/1 float matrix of membership."""
    shifts = np.arange(n, dtype=np.int64)
    return ((masks[:, None] >> shifts[None, :]) & 1).astype(float)


def weakly_geq(a: float, b: float, tol: float) -> bool:
    """``a >= b`` with ties (up to ``tol``) counted as satisfied.

    Every incentive and threshold comparison goes through here so that
    indifference always resolves toward effort / inclusion.
    """
    return a >= b - tol


def check_cap(k: int, cap: int, what: str = "agents") -> None:
    if k > cap:
        raise EnumerationCapError(f"exhaustive enumeration over {k} {what} exceeds cap {cap}")


# ---------------------------------------------------------------------------
# reward models


@dataclass(frozen=True)
class AdditiveReward:
    values: tuple[float, ...]
    kind = "additive"

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if any(v < 0 or not math.isfinite(v) for v in self.values):
            raise ModelError("additive values must be finite and nonnegative")

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def submodular(self) -> bool:
        return True

    def value(self, mask: int) -> float:
        return float(sum(self.values[i] for i in members(mask)))

    def values_for(self, masks: np.ndarray) -> np.ndarray:
        return bit_matrix(masks, self.n) @ np.asarray(self.values)

    def to_json(self) -> dict:
        return {"kind": self.kind, "values": list(self.values)}


@dataclass(frozen=True)
class TableReward:
    """Reward given explicitly on every subset; ``table[mask] = f(mask)``."""

    table: tuple[float, ...]
    tol: float = field(default=DEFAULT_TOL, compare=False)
    kind = "explicit"

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(float(v) for v in self.table))
        size = len(self.table)
        if size == 0 or size & (size - 1):
            raise ModelError("explicit table length must be a power of two")
        arr = np.asarray(self.table)
        if not np.all(np.isfinite(arr)) or np.any(arr < -self.tol):
            raise ModelError("explicit table entries must be finite and nonnegative")
        if abs(arr[0]) > self.tol:
            raise ModelError("reward must be normalized: f(empty) = 0")
        masks = np.arange(size, dtype=np.int64)
        for i in range(self.n):
            without = masks[(masks >> i) & 1 == 0]
            if np.any(arr[without | (1 << i)] < arr[without] - self.tol):
                raise ModelError(f"reward is not monotone in agent {i}")

    @property
    def n(self) -> int:
        return len(self.table).bit_length() - 1

    @cached_property
    def submodular(self) -> bool:
        # f(S+i) + f(S+j) >= f(S+i+j) + f(S) for all S and i, j outside S
        arr = np.asarray(self.table)
        masks = np.arange(len(arr), dtype=np.int64)
        for i in range(self.n):
            for j in range(i + 1, self.n):
                base = masks[((masks >> i) & 1 == 0) & ((masks >> j) & 1 == 0)]
                lhs = arr[base | (1 << i)] + arr[base | (1 << j)]
                rhs = arr[base | (1 << i) | (1 << j)] + arr[base]
                if np.any(lhs < rhs - self.tol):
                    return False
        return True

    def value(self, mask: int) -> float:
        return self.table[mask]

    def values_for(self, masks: np.ndarray) -> np.ndarray:
        return np.asarray(self.table)[masks]

    def to_json(self) -> dict:
        return {"kind": self.kind, "table": list(self.table)}


@dataclass(frozen=True)
class CoverageReward:
    """Weighted coverage: ``f(S)`` is the weight of elements covered by ``S``."""

    element_weights: tuple[float, ...]
    agent_covers: tuple[tuple[int, ...], ...]
    kind = "coverage"

    def __post_init__(self):
        weights = tuple(float(w) for w in self.element_weights)
        covers = tuple(tuple(sorted(set(int(e) for e in c))) for c in self.agent_covers)
        object.__setattr__(self, "element_weights", weights)
        object.__setattr__(self, "agent_covers", covers)
        if any(w < 0 or not math.isfinite(w) for w in weights):
            raise ModelError("element weights must be finite and nonnegative")
        m = len(weights)
        for c in covers:
            if any(e < 0 or e >= m for e in c):
                raise ModelError("covered element index out of range")

    @property
    def n(self) -> int:
        return len(self.agent_covers)

    @property
    def submodular(self) -> bool:
        return True

    @cached_property
    def _cover_matrix(self) -> np.ndarray:
        mat = np.zeros((self.n, len(self.element_weights)))
        for i, c in enumerate(self.agent_covers):
            mat[i, list(c)] = 1.0
        return mat

    def value(self, mask: int) -> float:
        covered = set()
        for i in members(mask):
            covered.update(self.agent_covers[i])
        return float(sum(self.element_weights[e] for e in covered))

    def values_for(self, masks: np.ndarray) -> np.ndarray:
        hit = bit_matrix(masks, self.n) @ self._cover_matrix > 0
        return hit @ np.asarray(self.element_weights)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "element_weights": list(self.element_weights),
            "agent_covers": [list(c) for c in self.agent_covers],
        }


RewardModel = AdditiveReward | TableReward | CoverageReward


# ---------------------------------------------------------------------------
# instance and contracts


@dataclass(frozen=True)
class Instance:
    costs: tuple[float, ...]
    reward: RewardModel
    tol: float = DEFAULT_TOL
    enum_cap: int = DEFAULT_ENUM_CAP
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "costs", tuple(float(c) for c in self.costs))
        if len(self.costs) != self.reward.n:
            raise ModelError(f"{len(self.costs)} costs given for {self.reward.n} agents")
        if self.n > MAX_AGENTS:
            raise ModelError(f"at most {MAX_AGENTS} agents are supported")
        if any(not (c > 0) or not math.isfinite(c) for c in self.costs):
            raise ModelError("costs must be finite and strictly positive")
        if self.tol < 0:
            raise ModelError("tol must be nonnegative")
        if self.reward.value(self.ground) > 1 + self.tol:
            logger.warning("reward exceeds 1; treating f as an unnormalized reward")

    @property
    def n(self) -> int:
        return len(self.costs)

    @property
    def ground(self) -> int:
        return (1 << self.n) - 1

    @property
    def submodular(self) -> bool:
        return self.reward.submodular

    @property
    def additive(self) -> bool:
        return isinstance(self.reward, AdditiveReward)

    @cached_property
    def _table(self) -> list[float] | None:
        if self.n > TABLE_LIMIT:
            return None
        out: list[float] = []
        for start in range(0, 1 << self.n, CHUNK):
            masks = np.arange(start, min(start + CHUNK, 1 << self.n), dtype=np.int64)
            out.extend(self.reward.values_for(masks).tolist())
        return out

    @cached_property
    def _table_array(self) -> np.ndarray | None:
        table = self._table
        return None if table is None else np.asarray(table)

    @cached_property
    def singleton_values(self) -> tuple[float, ...]:
        return tuple(self.f(1 << i) for i in range(self.n))

    def f(self, mask: int) -> float:
        table = self._table
        if table is not None:
            return table[mask]
        return self.reward.value(mask)

    def values_for(self, masks: np.ndarray) -> np.ndarray:
        table = self._table_array
        if table is not None:
            return table[masks]
        return self.reward.values_for(masks)

    def check_subset(self, mask: int) -> None:
        if mask < 0 or mask >> self.n:
            raise PreconditionError(f"subset {mask:#x} is not within {self.n} agents")


@dataclass(frozen=True)
class TeamContract:
    """Team bitmask plus one linear share per agent (zero outside the team)."""

    team: int
    alpha: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        for i, a in enumerate(self.alpha):
            if a < 0 or not math.isfinite(a):
                raise ModelError(f"share of agent {i} must be finite and nonnegative")
            if not (self.team >> i) & 1 and a != 0:
                raise ModelError(f"agent {i} is outside the team but has share {a}")
        if self.team >> len(self.alpha):
            raise ModelError("team contains agents without a share")

    @classmethod
    def from_shares(cls, n: int, shares: dict[int, float]) -> "TeamContract":
        alpha = [0.0] * n
        for i, a in shares.items():
            alpha[i] = a
        return cls(to_mask(shares), tuple(alpha))

    @classmethod
    def empty(cls, n: int) -> "TeamContract":
        return cls(0, (0.0,) * n)

    @property
    def members(self) -> list[int]:
        return members(self.team)

    def swapped(self, i: int, j: int) -> "TeamContract":
        alpha = list(self.alpha)
        alpha[i], alpha[j] = alpha[j], alpha[i]
        return TeamContract(self.team, tuple(alpha))


@dataclass(frozen=True)
class PriceVector:
    prices: tuple[float, ...]
    ground: int


# ---------------------------------------------------------------------------
# oracles


def value(inst: Instance, S: int) -> float:
    inst.check_subset(S)
    return inst.f(S)


def marginal(inst: Instance, i: int, S: int) -> float:
    """``f(S) - f(S - i)`` when ``i`` is in ``S``, else ``f(S + i) - f(S)``."""
    bit = 1 << i
    if S & bit:
        return inst.f(S) - inst.f(S & ~bit)
    return inst.f(S | bit) - inst.f(S)


def cutoff_wage(inst: Instance, i: int, S: int) -> float:
    """Smallest share that makes agent ``i`` willing to work inside team ``S``.

    Returns ``math.inf`` when the agent's marginal contribution is zero.
    """
    m = marginal(inst, i, S | (1 << i))
    if m <= inst.tol:
        return math.inf
    return inst.costs[i] / m


def revenue(inst: Instance, contract: TeamContract) -> float:
    paid = sum(contract.alpha[i] for i in contract.members)
    return (1.0 - paid) * inst.f(contract.team)


def is_feasible(inst: Instance, contract: TeamContract) -> bool:
    return all(
        weakly_geq(contract.alpha[i], cutoff_wage(inst, i, contract.team), inst.tol)
        for i in contract.members
    )


def demand_set(inst: Instance, pv: PriceVector | Sequence[float], ground: int | None = None) -> int:
    """Set maximizing ``f(S) - sum(prices[S])`` over subsets of the ground set.

    Ties are broken toward an inclusion-wise maximal maximizer, and among the
    maximal ones toward the smallest bitmask.
    """
    if not isinstance(pv, PriceVector):
        pv = PriceVector(tuple(pv), inst.ground if ground is None else ground)
    inst.check_subset(pv.ground)
    prices = np.asarray(pv.prices, dtype=float)
    if len(prices) != inst.n:
        raise PreconditionError("price vector length must equal the number of agents")
    tol = inst.tol
    if inst.additive:
        vals = inst.singleton_values
        return to_mask(i for i in members(pv.ground) if vals[i] >= prices[i] - tol)

    check_cap(popcount(pv.ground), inst.enum_cap)
    subs, vals, bits = _ground_cache(inst, pv.ground)
    obj = vals - bits @ prices
    best = obj.max()
    cand = subs[obj >= best - tol]
    if len(cand) == 1:
        return int(cand[0])
    return _maximal_smallest(cand)


def _ground_cache(inst: Instance, ground: int):
    cache = inst.__dict__.setdefault("_demand_cache", {})
    hit = cache.get(ground)
    if hit is None:
        subs = submasks(ground)
        hit = (subs, inst.values_for(subs), bit_matrix(subs, inst.n))
        if len(cache) < 4096:
            cache[ground] = hit
    return hit


def _maximal_smallest(cand: np.ndarray) -> int:
    sizes = np.array([popcount(int(c)) for c in cand])
    order = np.lexsort((cand, -sizes))
    maximal: list[int] = []
    for c in cand[order]:
        c = int(c)
        if not any(m & c == c for m in maximal):
            maximal.append(c)
    return min(maximal)
