"""Solvers specialised to additive rewards.

``nondiscriminatory_additive`` is the exact greedy for uniform shares.  The
FPTAS guesses the largest agent, the agent that pins the minimum share and a
discretized team reward, then solves a small knapsack-style DP for the
cheapest team hitting that reward exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    Instance,
    PreconditionError,
    TeamContract,
    members,
    revenue,
    to_mask,
    weakly_geq,
)
from .exact import SolveResult, fair_result

# guards floor() against representation error when the exact quotient is an integer
_GRID_EPS = 1e-9


def _require_additive(inst: Instance) -> None:
    if not inst.additive:
        raise PreconditionError("this solver needs an additive reward")


def nondiscriminatory_additive(inst: Instance) -> SolveResult:
    """Optimal uniform-share contract for additive rewards."""
    _require_additive(inst)
    f = inst.singleton_values
    c = inst.costs
    order = sorted((i for i in range(inst.n) if f[i] > 0), key=lambda i: (-f[i], i))
    best, best_share, best_rev = 0, 0.0, 0.0
    for i in order:
        share = c[i] / f[i]
        team, total = 1 << i, f[i]
        for j in order:
            if j == i or not weakly_geq(share, c[j] / f[j], inst.tol):
                continue
            k = len(members(team))
            if (1 - (k + 1) * share) * (total + f[j]) > (1 - k * share) * total:
                team |= 1 << j
                total += f[j]
        rev = (1 - len(members(team)) * share) * total
        if best_rev < rev:
            best, best_share, best_rev = team, share, rev
    contract = TeamContract.from_shares(inst.n, {i: best_share for i in members(best)})
    return SolveResult(best, contract, best_share if best else None, revenue(inst, contract), "nd-greedy")


# ---------------------------------------------------------------------------
# FPTAS pieces


@dataclass(frozen=True)
class FptasParams:
    gamma: float
    n: int

    def __post_init__(self):
        if not (0 < self.gamma <= 1):
            raise PreconditionError("gamma must lie in (0, 1]")

    @property
    def epsilon(self) -> float:
        g = self.gamma
        return 0.5 * g * g / (g + self.n * (1 - g))

    def disc_step(self, f_star: float) -> float:
        return self.epsilon * f_star / (2 * self.n**2)

    @property
    def grid_top(self) -> int:
        return math.floor(2 * self.n**3 / self.epsilon + _GRID_EPS)


def lower_bound_L(inst: Instance, S: int, x: float) -> tuple[float, int, int]:
    """``max_{i in S} (c_i/f_i)(1 - f_i/x)`` with its argmax and the largest-f agent.

    Both argmaxes break ties toward the smaller index.
    """
    if x <= 0:
        raise PreconditionError("x must be positive")
    f = inst.singleton_values
    team = members(S)
    if not team:
        raise PreconditionError("S must be nonempty")
    if any(f[i] <= 0 for i in team):
        raise PreconditionError("every member needs a positive reward")
    terms = [(inst.costs[i] / f[i] * (1 - f[i] / x), i) for i in team]
    value = max(t for t, _ in terms)
    i_bar = min(i for t, i in terms if t == value)
    i_star = min(team, key=lambda i: (-f[i], i))
    return value, i_bar, i_star


def approx_min_share(inst: Instance, i_bar: int, x_tilde: float, epsilon: float) -> float:
    """Minimum-share estimate pinned by ``i_bar`` at inflated reward ``x_tilde / (1 - eps/2n)``."""
    if x_tilde <= 0:
        raise PreconditionError("x_tilde must be positive")
    fi = inst.singleton_values[i_bar]
    if fi <= 0:
        raise PreconditionError("pinning agent needs a positive reward")
    X = x_tilde / (1 - epsilon / (2 * inst.n))
    return inst.costs[i_bar] / fi * (1 - fi / X)


def domain_set(inst: Instance, i_bar: int, x_tilde: float, i_star: int, epsilon: float) -> int:
    """Agents no larger than ``i_star`` whose own share bound does not exceed the estimate."""
    f = inst.singleton_values
    if f[i_bar] > f[i_star]:
        raise PreconditionError("pinning agent must not exceed the largest agent")
    L = approx_min_share(inst, i_bar, x_tilde, epsilon)
    X = x_tilde / (1 - epsilon / (2 * inst.n))
    keep = []
    for i in range(inst.n):
        if f[i] <= 0 or f[i] > f[i_star]:
            continue
        if i == i_bar or inst.costs[i] / f[i] * (1 - f[i] / X) <= L:
            keep.append(i)
    return to_mask(keep)


def share_estimates(inst: Instance, domain: int, L: float) -> list[float]:
    """Per-agent shares: the estimate for cheap agents, the cut-off otherwise, zero outside."""
    f = inst.singleton_values
    out = [0.0] * inst.n
    for i in members(domain):
        cut = inst.costs[i] / f[i]
        out[i] = L if cut <= L else cut
    return out


def grid_units(inst: Instance, step: float) -> list[int]:
    return [math.floor(fi / step + _GRID_EPS) for fi in inst.singleton_values]


def dp_solve(
    inst: Instance,
    domain: int,
    i_star: int,
    i_bar: int,
    x_tilde: float,
    alpha_tilde: list[float],
    disc_step: float,
) -> tuple[int, float] | None:
    """Cheapest team ``{i_star, i_bar} <= S <= domain`` with discretized reward exactly ``x_tilde``.

    Returns ``(S, (1 - total_share) * x_tilde)`` or ``None`` when the target is
    unreachable.  States are kept sparsely and only while they can still hit
    the target; a state is replaced only on strict improvement.
    """
    if not (domain >> i_star & 1 and domain >> i_bar & 1):
        raise PreconditionError("both anchor agents must lie in the domain")
    target = round(x_tilde / disc_step)
    if abs(x_tilde / disc_step - target) > 1e-6:
        raise PreconditionError("x_tilde is not on the discretization grid")
    units = grid_units(inst, disc_step)
    seed = 1 << i_star | 1 << i_bar
    start = sum(units[i] for i in members(seed))
    rest = [a for a in members(domain) if not seed >> a & 1]
    # remaining[k] = total units of rest[k:]
    remaining = [0] * (len(rest) + 1)
    for k in range(len(rest) - 1, -1, -1):
        remaining[k] = remaining[k + 1] + units[rest[k]]
    if not start <= target <= start + remaining[0]:
        return None

    states: dict[int, tuple[float, int]] = {start: (sum(alpha_tilde[i] for i in members(seed)), seed)}
    for k, a in enumerate(rest):
        qa, wa = units[a], alpha_tilde[a]
        # skipping the agent first, so an equal-cost addition never displaces it
        nxt = {y: s for y, s in states.items() if y + remaining[k + 1] >= target}
        for y, (v, D) in states.items():
            y2 = y + qa
            if y2 > target or y2 + remaining[k + 1] < target:
                continue
            old = nxt.get(y2)
            if old is None or v + wa < old[0]:
                nxt[y2] = (v + wa, D | 1 << a)
        states = nxt
    hit = states.get(target)
    if hit is None:
        return None
    V, D = hit
    return D, (1 - V) * x_tilde


def _subset_sums(units: list[int], agents: list[int]) -> set[int]:
    sums = {0}
    for a in agents:
        sums |= {s + units[a] for s in sums}
    return sums


def fptas_case2(inst: Instance, gamma: float, trace: list | None = None) -> tuple[int, float]:
    """Best DP candidate over all (largest agent, discretized reward, pinning agent) guesses.

    Reward guesses that no team containing the largest agent can produce are
    not visited, and guesses whose best conceivable objective cannot beat the
    incumbent are not solved; neither changes the result.  If ``trace`` is a
    list, every DP candidate is appended as ``(S, alpha_tilde, objective)``.
    """
    _require_additive(inst)
    p = FptasParams(gamma, inst.n)
    eps = p.epsilon
    f = inst.singleton_values
    best, v_max = 0, 0.0
    for i_star in range(inst.n):
        if f[i_star] <= 0:
            continue
        step = p.disc_step(f[i_star])
        units = grid_units(inst, step)
        smaller = [i for i in range(inst.n) if i != i_star and 0 < f[i] <= f[i_star]]
        reach = sorted(s + units[i_star] for s in _subset_sums(units, smaller))
        for k in reach:
            if k == 0 or k > p.grid_top:
                continue
            x = k * step
            for i_bar in range(inst.n):
                if f[i_bar] <= 0 or f[i_bar] > f[i_star]:
                    continue
                L = approx_min_share(inst, i_bar, x, eps)
                dom = domain_set(inst, i_bar, x, i_star, eps)
                if not dom >> i_star & 1:
                    continue
                alpha = share_estimates(inst, dom, L)
                seed = 1 << i_star | 1 << i_bar
                if (1 - sum(alpha[i] for i in members(seed))) * x <= v_max and trace is None:
                    continue
                out = dp_solve(inst, dom, i_star, i_bar, x, alpha, step)
                if out is None:
                    continue
                S, v = out
                if trace is not None:
                    trace.append((S, [alpha[i] if S >> i & 1 else 0.0 for i in range(inst.n)], v))
                if v > v_max:
                    best, v_max = S, v
    return best, v_max


def fptas(inst: Instance, gamma: float, trace: list | None = None) -> SolveResult:
    """Fair contract with revenue at least ``(1 - gamma)^2`` times the optimum."""
    _require_additive(inst)
    f = inst.singleton_values
    S1, top = 0, -math.inf
    for i in range(inst.n):
        if f[i] > 0 and (1 - inst.costs[i] / f[i]) * f[i] > top:
            S1, top = 1 << i, (1 - inst.costs[i] / f[i]) * f[i]
    S2, _ = fptas_case2(inst, gamma, trace)
    params = {"gamma": gamma, "epsilon": FptasParams(gamma, inst.n).epsilon}
    best = fair_result(inst, 0, "fptas", params)
    for S in (S1, S2):
        if S:
            cand = fair_result(inst, S, "fptas", params)
            if cand.revenue > best.revenue:
                best = cand
    return best
