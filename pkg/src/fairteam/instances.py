"""Worked-example instances, seeded random families and the subset-sum gadget."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AdditiveReward, CoverageReward, Instance, ModelError, TableReward, bit_matrix


def _max_of_additive(weights: list[list[float]]) -> TableReward:
    n = len(weights[0])
    masks = np.arange(1 << n, dtype=np.int64)
    bits = bit_matrix(masks, n)
    return TableReward((bits @ np.asarray(weights, dtype=float).T).max(axis=1))


def paper_example(name: str) -> Instance:
    """The three small reference instances ``E1``, ``E2`` and ``E3``.

    E1 and E2 are two-agent additive instances; E3 is a four-agent
    max-of-additive reward (not submodular) stored as an explicit table.
    """
    key = name.upper()
    if key == "E1":
        return Instance((0.05, 0.05), AdditiveReward((0.5, 0.25)), name="E1")
    if key == "E2":
        return Instance((1 / 16, 1 / 8), AdditiveReward((0.5, 0.5)), name="E2")
    if key == "E3":
        table = _max_of_additive([[6, 6, 0, 0], [0, 0, 6.5, 6.5], [2, 2, 5, 5]])
        return Instance((0.34, 0.25, 0.5, 0.08), table, name="E3")
    raise KeyError(f"unknown example {name!r}")


@dataclass(frozen=True)
class SubsetSumSpec:
    weights: tuple[int, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if not self.weights or any(w < 1 for w in self.weights):
            raise ModelError("weights must be positive integers")
        if not 1 <= self.k <= len(self.weights):
            raise ModelError("k must lie in [1, m]")

    @property
    def m(self) -> int:
        return len(self.weights)

    @property
    def W(self) -> int:
        return sum(self.weights)

    @property
    def delta(self) -> float:
        return 1.0 / (4 * self.W * self.m * self.k)


def subset_sum_instance(spec: SubsetSumSpec) -> tuple[Instance, float]:
    """Additive instance whose optimal fair revenue reaches the returned threshold
    exactly when some ``k`` weights sum to ``W/2``."""
    d, m = spec.delta, spec.m
    scale = spec.W * d + spec.k / m
    f = [w * d + 1 / (2 * m) for w in spec.weights]
    c = [fi * fi / scale for fi in f]
    name = f"subset-sum-{'-'.join(map(str, spec.weights))}-k{spec.k}"
    return Instance(c, AdditiveReward(f), name=name), scale / 4


def has_half_sum(weights: tuple[int, ...], k: int) -> bool:
    """Brute-force check for ``k`` weights summing to exactly half the total."""
    total = sum(weights)
    if total % 2:
        return False
    n = len(weights)
    for mask in range(1 << n):
        if bin(mask).count("1") == k and sum(w for i, w in enumerate(weights) if mask >> i & 1) * 2 == total:
            return True
    return False


def random_instance(kind: str, n: int, seed: int, cost_scale: float = 0.5) -> Instance:
    """Seeded additive or coverage instance with costs below ``cost_scale * f(i)``."""
    rng = np.random.default_rng(seed)
    name = f"{kind}-n{n}-s{seed}"
    if kind == "additive":
        vals = rng.uniform(0.05, 1.0, n)
        vals = vals / vals.sum()
        costs = rng.uniform(0.0, 1.0, n) * cost_scale * vals
        costs = np.maximum(costs, 1e-6 * vals)
        return Instance(costs, AdditiveReward(vals), name=name)
    if kind == "coverage":
        m = 2 * n
        weights = rng.uniform(0.05, 1.0, m)
        weights = weights / weights.sum()
        covers = []
        for _ in range(n):
            size = rng.integers(1, max(2, m // 2) + 1)
            covers.append(sorted(rng.choice(m, size=size, replace=False).tolist()))
        reward = CoverageReward(weights, covers)
        single = [reward.value(1 << i) for i in range(n)]
        costs = np.maximum(rng.uniform(0.0, 1.0, n) * cost_scale * np.asarray(single), 1e-6)
        return Instance(costs, reward, name=name)
    raise KeyError(f"unknown instance kind {kind!r}")
