"""Revenue-optimal fair team contracts: solvers, fairness checks and instances."""
from .core import (
    AdditiveReward,
    ContractError,
    CoverageReward,
    EnumerationCapError,
    InfeasibleTeamError,
    Instance,
    ModelError,
    PreconditionError,
    PriceVector,
    TableReward,
    TeamContract,
    cutoff_wage,
    demand_set,
    is_feasible,
    marginal,
    revenue,
    value,
)
from .equilibrium import enumerate_equilibria, is_equilibrium, swap_equilibrium
from .exact import SolveResult, optimal_fair_bruteforce, optimal_nondiscriminatory_bruteforce
from .fairness import (
    FairnessVerdict,
    is_fair_definitional,
    is_fair_submodular,
    least_incentive_contract,
    optimal_minimum_share,
    pair_fairness,
)
from .approx_submodular import SubmodApproxParams, constant_approx
from .fptas_additive import fptas, nondiscriminatory_additive
from .instances import paper_example, random_instance, subset_sum_instance, SubsetSumSpec

__version__ = "0.1.0"
