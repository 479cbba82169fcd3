"""Command-line front end: ``solve``, ``verify``, ``gen`` and ``bench``.

Exit codes: 0 success, 1 malformed input, 2 algorithm precondition violated,
3 enumeration cap exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from functools import lru_cache
from importlib import resources

import jsonschema

from .approx_submodular import SubmodApproxParams, constant_approx
from .core import (
    DEFAULT_ENUM_CAP,
    DEFAULT_TOL,
    AdditiveReward,
    ContractError,
    CoverageReward,
    EnumerationCapError,
    Instance,
    ModelError,
    PreconditionError,
    TableReward,
    TeamContract,
    is_feasible,
    to_mask,
)
from .exact import SolveResult, optimal_fair_bruteforce, optimal_nondiscriminatory_bruteforce
from .fairness import (
    OPTIMISTIC,
    PESSIMISTIC,
    InfeasibleContractError,
    is_fair_definitional,
    is_fair_submodular,
)
from .fptas_additive import fptas, nondiscriminatory_additive
from .instances import SubsetSumSpec, paper_example, random_instance, subset_sum_instance

ALGORITHMS = ("exact", "exact-nd", "nd-greedy", "fptas", "submodular-approx")
BENCH_HEADER = ["instance", "n", "algorithm", "revenue", "exact_opt", "ratio", "wall_time_ms", "params"]

EXIT_SCHEMA = 1
EXIT_PRECONDITION = 2
EXIT_CAP = 3


class SchemaError(Exception):
    pass


# ---------------------------------------------------------------------------
# JSON I/O


@lru_cache(maxsize=None)
def _schema(name: str) -> dict:
    text = resources.files("fairteam").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(doc, name: str) -> None:
    try:
        jsonschema.validate(doc, _schema(name))
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"{name}: {exc.message}") from exc


def dumps(doc) -> str:
    """Canonical form: sorted keys, two-space indent, shortest round-trip floats."""
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def instance_to_json(inst: Instance, seed: int | None = None) -> dict:
    doc = {"n": inst.n, "costs": list(inst.costs), "reward": inst.reward.to_json()}
    if inst.tol != DEFAULT_TOL:
        doc["tol"] = inst.tol
    meta = {}
    if inst.name is not None:
        meta["name"] = inst.name
    if seed is not None:
        meta["seed"] = seed
    if meta:
        doc["metadata"] = meta
    return doc


def instance_from_json(doc: dict, enum_cap: int = DEFAULT_ENUM_CAP) -> Instance:
    validate(doc, "instance")
    r = doc["reward"]
    tol = doc.get("tol", DEFAULT_TOL)
    try:
        if r["kind"] == "additive":
            reward = AdditiveReward(r["values"])
        elif r["kind"] == "explicit":
            reward = TableReward(r["table"], tol)
        else:
            reward = CoverageReward(r["element_weights"], r["agent_covers"])
        if reward.n != doc["n"]:
            raise ModelError(f"reward describes {reward.n} agents but n = {doc['n']}")
        name = doc.get("metadata", {}).get("name")
        return Instance(doc["costs"], reward, tol=tol, enum_cap=enum_cap, name=name)
    except ModelError as exc:
        raise SchemaError(str(exc)) from exc


def contract_from_json(doc: dict, n: int) -> TeamContract:
    validate(doc, "contract")
    if len(doc["alpha"]) != n:
        raise SchemaError(f"contract has {len(doc['alpha'])} shares for {n} agents")
    if any(i >= n for i in doc["team"]):
        raise SchemaError("contract team names an unknown agent")
    try:
        return TeamContract(to_mask(doc["team"]), tuple(doc["alpha"]))
    except ModelError as exc:
        raise SchemaError(str(exc)) from exc


# ---------------------------------------------------------------------------
# commands


def solve(inst: Instance, algorithm: str, args: argparse.Namespace | None = None) -> SolveResult:
    a = args or argparse.Namespace()
    if algorithm == "exact":
        return optimal_fair_bruteforce(inst)
    if algorithm == "exact-nd":
        return optimal_nondiscriminatory_bruteforce(inst)
    if algorithm == "nd-greedy":
        return nondiscriminatory_additive(inst)
    if algorithm == "fptas":
        return fptas(inst, getattr(a, "gamma", 0.2))
    if algorithm == "submodular-approx":
        defaults = SubmodApproxParams()
        params = SubmodApproxParams(
            delta=getattr(a, "delta", None) or defaults.delta,
            tau=getattr(a, "tau", None) or defaults.tau,
            eta=getattr(a, "eta", None) or defaults.eta,
            beta=getattr(a, "beta", None) or defaults.beta,
            lam=getattr(a, "lam", None) or defaults.lam,
        )
        return constant_approx(inst, params, rescore=getattr(a, "rescore", False))
    raise PreconditionError(f"unknown algorithm {algorithm!r}")


def _load(args) -> Instance:
    return instance_from_json(_read_json(args.instance), args.enum_cap)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    inst = _load(args)
    result = solve(inst, args.algorithm, args)
    _emit(dumps(result.to_json()), args.out)
    return 0


def verify_contract(inst: Instance, contract: TeamContract, semantics: str = OPTIMISTIC) -> dict:
    """Fairness report for one contract; both semantics are included for non-submodular rewards."""
    if not is_feasible(inst, contract):
        raise InfeasibleContractError("contract does not incentivize its whole team")
    doc = is_fair_definitional(inst, contract, semantics).to_json()
    doc["feasible"] = True
    if inst.submodular:
        doc["closed_form_fair"] = is_fair_submodular(inst, contract).fair
    else:
        doc["optimistic"] = is_fair_definitional(inst, contract, OPTIMISTIC).to_json()
        doc["pessimistic"] = is_fair_definitional(inst, contract, PESSIMISTIC).to_json()
    return doc


def cmd_verify(args) -> int:
    inst = _load(args)
    contract = contract_from_json(_read_json(args.contract), inst.n)
    _emit(dumps(verify_contract(inst, contract, args.semantics)), args.out)
    return 0


def generate(args) -> tuple[Instance, int | None]:
    kind = args.kind
    if kind in ("E1", "E2", "E3"):
        return paper_example(kind), None
    if kind == "subset-sum":
        if not args.weights or args.k is None:
            raise PreconditionError("subset-sum needs --weights and --k")
        return subset_sum_instance(SubsetSumSpec(tuple(args.weights), args.k))[0], None
    if args.n is None:
        raise PreconditionError(f"{kind} instances need --n")
    return random_instance(kind, args.n, args.seed, args.cost_scale), args.seed


def cmd_gen(args) -> int:
    inst, seed = generate(args)
    _emit(dumps(instance_to_json(inst, seed)), args.out)
    return 0


def bench_rows(kind: str, sizes: list[int], seeds: list[int], algorithms: list[str], args) -> list[dict]:
    rows = []
    for n in sizes:
        for seed in seeds:
            inst = random_instance(kind, n, seed, args.cost_scale)
            inst = Instance(inst.costs, inst.reward, inst.tol, args.enum_cap, inst.name)
            opt = None
            if n <= inst.enum_cap and inst.submodular:
                opt = optimal_fair_bruteforce(inst).revenue
            for alg in algorithms:
                t0 = time.perf_counter()
                res = solve(inst, alg, args)
                ms = (time.perf_counter() - t0) * 1000
                ratio = "" if opt is None or opt <= 0 else repr(res.revenue / opt)
                rows.append({
                    "instance": inst.name,
                    "n": n,
                    "algorithm": alg,
                    "revenue": repr(res.revenue),
                    "exact_opt": "" if opt is None else repr(opt),
                    "ratio": ratio,
                    "wall_time_ms": f"{ms:.3f}",
                    "params": json.dumps(res.params, sort_keys=True),
                })
    rows.sort(key=lambda r: (r["instance"], r["algorithm"]))
    return rows


def cmd_bench(args) -> int:
    algorithms = args.algorithms or (["fptas", "nd-greedy", "exact-nd"] if args.kind == "additive" else ["submodular-approx", "exact-nd"])
    rows = bench_rows(args.kind, args.sizes, args.seeds, algorithms, args)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_HEADER, lineterminator="\n")
    fresh = not args.out or not os.path.exists(args.out) or os.path.getsize(args.out) == 0
    if fresh:
        writer.writeheader()
    writer.writerows(rows)
    if args.out:
        with open(args.out, "a", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _seed_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fairteam", description="Fair team contracts under moral hazard.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--enum-cap", type=int, default=DEFAULT_ENUM_CAP, help="largest team size enumerated exhaustively")
        sp.add_argument("--out", help="write output here instead of stdout")

    def algo_flags(sp):
        sp.add_argument("--gamma", type=float, default=0.2, help="FPTAS accuracy parameter in (0, 1]")
        sp.add_argument("--delta", type=float)
        sp.add_argument("--tau", type=float)
        sp.add_argument("--eta", type=float)
        sp.add_argument("--beta", type=float)
        sp.add_argument("--lambda", dest="lam", type=float)
        sp.add_argument("--rescore", action="store_true", help="rank approximation candidates by fair revenue")

    s = sub.add_parser("solve", help="compute a fair contract")
    s.add_argument("instance")
    s.add_argument("--algorithm", choices=ALGORITHMS, default="exact")
    algo_flags(s)
    common(s)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a contract for swap fairness")
    v.add_argument("instance")
    v.add_argument("--contract", required=True)
    v.add_argument("--semantics", choices=(OPTIMISTIC, PESSIMISTIC), default=OPTIMISTIC)
    common(v)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="write an instance file")
    g.add_argument("--kind", required=True, choices=("additive", "coverage", "subset-sum", "E1", "E2", "E3"))
    g.add_argument("--n", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--cost-scale", type=float, default=0.5)
    g.add_argument("--weights", type=int, nargs="+")
    g.add_argument("--k", type=int)
    common(g)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="compare algorithms against the exact optimum, as CSV")
    b.add_argument("--kind", choices=("additive", "coverage"), default="additive")
    b.add_argument("--sizes", type=int, nargs="+", default=[3, 4, 5, 6])
    b.add_argument("--seeds", type=_seed_list, default=list(range(5)), help="e.g. 0-9 or 1,4,7")
    b.add_argument("--algorithms", nargs="+", choices=ALGORITHMS)
    b.add_argument("--cost-scale", type=float, default=0.5)
    algo_flags(b)
    common(b)
    b.set_defaults(func=cmd_bench)
    return p


def run_command(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (PreconditionError, ModelError, ContractError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


def main() -> None:
    sys.exit(run_command())
