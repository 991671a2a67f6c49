"""Optimal, pessimal, and top-k orderings of a workflow under a cost model.

Two routes are provided on purpose.  ``solve`` searches prefixes of linear
extensions with branch-and-bound (or exhaustively, on request) through the
selected kernel; ``brute_force`` enumerates every extension in lexicographic
order and prices each one, sharing no code with the kernels.  Agreement
between the two is part of the test contract.
"""

from __future__ import annotations

import enum
from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from time import perf_counter

from . import _backend
from .costs import (
    CostModel,
    Rule,
    Scope,
    TransitionBreakdown,
    pair_cost,
    sequence_cost,
)
from .errors import BudgetExceededError, CogseqError, WorkflowError
from .model import (
    Ordering,
    Workflow,
    count_linear_extensions,
    enumerate_linear_extensions,
    instantiate_variant,
    validate_workflow,
)

DEFAULT_BUDGET = 10_000_000


class Objective(enum.Enum):
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"

    @classmethod
    def parse(cls, label: str) -> Objective:
        folded = label.strip().lower()
        if folded in ("min", "minimize", "minimise"):
            return cls.MINIMIZE
        if folded in ("max", "maximize", "maximise"):
            return cls.MAXIMIZE
        raise CogseqError(f"unknown objective {label!r} (expected min or max)")


class Backend(enum.Enum):
    BRANCH_AND_BOUND = "branch-and-bound"
    EXHAUSTIVE = "exhaustive"

    @classmethod
    def parse(cls, label: str) -> Backend:
        folded = label.strip().lower()
        if folded in ("bnb", "branch-and-bound", "branch_and_bound", "b&b"):
            return cls.BRANCH_AND_BOUND
        if folded == "exhaustive":
            return cls.EXHAUSTIVE
        raise CogseqError(
            f"unknown backend {label!r} (expected bnb or exhaustive)"
        )


@dataclass(frozen=True, slots=True)
class SearchStats:
    """Informational counters; excluded from machine-readable output because
    node and prune counts vary with worker partitioning."""

    nodes: int
    prunes: int
    elapsed: float


@dataclass(frozen=True)
class Solution:
    ordering: Ordering
    total: int
    breakdowns: tuple[TransitionBreakdown, ...]
    stats: SearchStats


@dataclass(frozen=True)
class SolveRequest:
    workflow: Workflow
    model: CostModel = field(default_factory=CostModel.calibrated)
    objective: Objective = Objective.MINIMIZE
    k: int = 1
    backend: Backend = Backend.BRANCH_AND_BOUND
    workers: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise CogseqError(f"k must be at least 1, got {self.k}")
        if self.workers < 1:
            raise CogseqError(f"workers must be at least 1, got {self.workers}")


def _checked(workflow: Workflow, operation: str) -> None:
    workflow.require_concrete(operation)
    report = validate_workflow(workflow)
    if not report.ok:
        raise WorkflowError(f"invalid workflow:\n{report.summary()}")


def _kernel_inputs(workflow: Workflow, model: CostModel, objective: Objective):
    """Dense index-space arrays for the search kernels.

    Index order is ascending task code, so kernel index tuples compare
    exactly like code sequences.  Under full-history scope the history
    -dependent RecentPractice term is lifted out of the pair table into
    (shares, rp_cost); otherwise it stays folded into the table.
    """
    codes = workflow.codes()
    tasks = [workflow.tasks[code] for code in codes]
    n = len(codes)
    index = {code: i for i, code in enumerate(codes)}

    preds = [0] * n
    for i, task in enumerate(tasks):
        for pre in task.prerequisites:
            preds[i] |= 1 << index[pre]

    rp = model.rule_cost(Rule.RECENT_PRACTICE)
    lift_rp = (model.rules_enabled and rp is not None
               and model.recent_practice_scope is Scope.FULL_HISTORY)
    if lift_rp:
        rp_cost = rp
        base_model = model.without_rule(Rule.RECENT_PRACTICE)
        shares = [0] * n
        for j, tj in enumerate(tasks):
            for i, ti in enumerate(tasks):
                if i != j and (ti.modality == tj.modality
                               or ti.resource is tj.resource):
                    shares[j] |= 1 << i
    else:
        rp_cost = 0
        base_model = model
        shares = [0] * n

    pair = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if a != b:
                pair[a][b] = pair_cost(tasks[a], tasks[b], base_model)

    # Strict descendants, via reverse topological order.
    succ: list[list[int]] = [[] for _ in range(n)]
    indegree = [0] * n
    for j in range(n):
        mask = preds[j]
        while mask:
            low = mask & -mask
            succ[low.bit_length() - 1].append(j)
            indegree[j] += 1
            mask ^= low
    topo: list[int] = [i for i in range(n) if indegree[i] == 0]
    for i in topo:
        for j in succ[i]:
            indegree[j] -= 1
            if indegree[j] == 0:
                topo.append(j)
    desc = [0] * n
    for i in reversed(topo):
        for j in succ[i]:
            desc[i] |= (1 << j) | desc[j]

    maximize = objective is Objective.MAXIMIZE
    bound_in = [0] * n
    for j in range(n):
        candidates = [
            pair[i][j]
            for i in range(n)
            if i != j and not (desc[j] >> i) & 1
        ]
        if not candidates:
            continue
        if maximize:
            # Upper bound on j's incoming transition: dearest feasible pair
            # cost, plus the lifted RecentPractice surcharge when any task at
            # all shares j's modality or resource.
            bound_in[j] = max(candidates) + (rp_cost if shares[j] else 0)
        else:
            # Lower bound: cheapest feasible pair cost; the lifted term only
            # ever adds, so omitting it keeps the bound admissible.
            bound_in[j] = min(candidates)
    return codes, preds, pair, shares, rp_cost, bound_in


def _adjacent_pair_table(workflow: Workflow,
                         model: CostModel) -> tuple[tuple[str, ...], dict]:
    codes = workflow.codes()
    tasks = {code: workflow.tasks[code] for code in codes}
    table = {
        (a, b): pair_cost(tasks[a], tasks[b], model)
        for a in codes for b in codes if a != b
    }
    return codes, table


def _ordering_total(ordering: Ordering, workflow: Workflow, model: CostModel,
                    table: dict | None) -> int:
    if table is not None:
        return sum(
            table[ordering[i], ordering[i + 1]]
            for i in range(len(ordering) - 1)
        )
    total, _ = sequence_cost(ordering, workflow, model)
    return total


def _uses_pair_table(model: CostModel) -> bool:
    # Adjacent scope (or rules off entirely) makes the total a sum over
    # consecutive pairs, so enumeration can price orderings from one table.
    return (not model.rules_enabled
            or model.recent_practice_scope is Scope.ADJACENT
            or model.rule_cost(Rule.RECENT_PRACTICE) is None)


def _finish(workflow: Workflow, model: CostModel, ordering: Ordering,
            total: int, stats: SearchStats) -> Solution:
    check, breakdowns = sequence_cost(ordering, workflow, model)
    if check != total:
        raise CogseqError(
            f"internal error: search total {total} disagrees with "
            f"recomputed sequence cost {check} for {ordering}"
        )
    return Solution(ordering=ordering, total=total, breakdowns=breakdowns,
                    stats=stats)


def solve(request: SolveRequest) -> list[Solution]:
    """Best-first list of at most k extremal orderings.

    Deterministic: ties are broken by lexicographically smallest code
    sequence, and the parallel search partitions work by first task, so the
    result is identical for every worker count.
    """
    workflow, model = request.workflow, request.model
    _checked(workflow, "solve")
    if request.backend is Backend.EXHAUSTIVE:
        return _solve_exhaustive(request)

    start = perf_counter()
    codes, preds, pair, shares, rp_cost, bound_in = _kernel_inputs(
        workflow, model, request.objective)
    n = len(codes)
    maximize = request.objective is Objective.MAXIMIZE
    kernel = _backend.search if n <= 64 else _backend.pure_search

    def run(allowed_first: int | None):
        return kernel(n, preds, pair, shares, rp_cost, bound_in,
                      maximize, request.k, True, allowed_first)

    sources = [i for i in range(n) if preds[i] == 0]
    if request.workers > 1 and len(sources) > 1:
        with ThreadPoolExecutor(max_workers=request.workers) as pool:
            branches = list(pool.map(run, (1 << s for s in sources)))
    else:
        branches = [run(None)]

    sign = -1 if maximize else 1
    merged = sorted(
        (entry for solutions, _, _ in branches for entry in solutions),
        key=lambda entry: (sign * entry[0], entry[1]),
    )[:request.k]
    nodes = sum(b[1] for b in branches)
    prunes = sum(b[2] for b in branches)
    stats = SearchStats(nodes=nodes, prunes=prunes,
                        elapsed=perf_counter() - start)
    return [
        _finish(workflow, model, tuple(codes[i] for i in seq), total, stats)
        for total, seq in merged
    ]


def _solve_exhaustive(request: SolveRequest,
                      budget: int = DEFAULT_BUDGET) -> list[Solution]:
    from bisect import bisect_right

    workflow, model = request.workflow, request.model
    start = perf_counter()
    count = count_linear_extensions(workflow)
    if count > budget:
        raise BudgetExceededError(count, budget)

    table = None
    if _uses_pair_table(model):
        _, table = _adjacent_pair_table(workflow, model)
    sign = -1 if request.objective is Objective.MAXIMIZE else 1
    k = request.k
    keys: list[int] = []
    seqs: list[Ordering] = []
    evaluated = 0
    for ordering in enumerate_linear_extensions(workflow):
        evaluated += 1
        total = _ordering_total(ordering, workflow, model, table)
        key = sign * total
        if len(keys) < k or key < keys[-1]:
            pos = bisect_right(keys, key)
            keys.insert(pos, key)
            seqs.insert(pos, ordering)
            if len(keys) > k:
                keys.pop()
                seqs.pop()
    stats = SearchStats(nodes=evaluated, prunes=0,
                        elapsed=perf_counter() - start)
    return [
        _finish(workflow, model, seqs[i], sign * key, stats)
        for i, key in enumerate(keys)
    ]


def brute_force(workflow: Workflow, model: CostModel,
                objective: Objective = Objective.MINIMIZE,
                budget: int = DEFAULT_BUDGET) -> Solution:
    """Extremal ordering by pricing every linear extension, no search tree.

    Refuses to start when the extension count exceeds ``budget``.  Shares the
    tie-break with solve: among equal totals, the lexicographically smallest
    code sequence wins (enumeration order makes that the first one seen).
    """
    _checked(workflow, "brute_force")
    start = perf_counter()
    count = count_linear_extensions(workflow)
    if count > budget:
        raise BudgetExceededError(count, budget)

    table = None
    if _uses_pair_table(model):
        _, table = _adjacent_pair_table(workflow, model)
    maximize = objective is Objective.MAXIMIZE
    best_total: int | None = None
    best: Ordering = ()
    evaluated = 0
    for ordering in enumerate_linear_extensions(workflow):
        evaluated += 1
        total = _ordering_total(ordering, workflow, model, table)
        if (best_total is None
                or (total > best_total if maximize else total < best_total)):
            best_total = total
            best = ordering
    stats = SearchStats(nodes=evaluated, prunes=0,
                        elapsed=perf_counter() - start)
    return _finish(workflow, model, best, best_total or 0, stats)


@dataclass(frozen=True)
class VariantRow:
    member: str
    solution: Solution


@dataclass(frozen=True)
class VariantComparison:
    """Optimal solution per member of one variant group, cheapest first."""

    group: str
    rows: tuple[VariantRow, ...]
    delta: int


def compare_variants(workflow: Workflow, model: CostModel,
                     baseline: Mapping[str, str] | None = None,
                     workers: int = 1) -> tuple[VariantComparison, ...]:
    """Sweep each variant group, solving minimize/k=1 per member.

    With several groups, the groups not being swept are pinned to
    ``baseline`` choices; a missing baseline entry is an error rather than a
    silent guess.
    """
    if workflow.is_concrete:
        raise WorkflowError(
            "workflow has no variant groups; use solve for a plain optimum"
        )
    baseline = dict(baseline or {})
    group_codes = {g.code for g in workflow.variant_groups}
    for code in baseline:
        if code not in group_codes:
            raise WorkflowError(f"baseline names unknown variant group {code!r}")

    comparisons: list[VariantComparison] = []
    for grp in workflow.variant_groups:
        rows: list[VariantRow] = []
        for member in sorted(grp.members):
            candidate = instantiate_variant(workflow, grp.code, member)
            for other in tuple(candidate.variant_groups):
                if other.code not in baseline:
                    raise WorkflowError(
                        f"several variant groups are unresolved; pick a "
                        f"baseline member for {other.code!r} while sweeping "
                        f"{grp.code!r}"
                    )
                candidate = instantiate_variant(candidate, other.code,
                                                baseline[other.code])
            solution = solve(SolveRequest(
                workflow=candidate, model=model,
                objective=Objective.MINIMIZE, k=1, workers=workers,
            ))[0]
            rows.append(VariantRow(member=member, solution=solution))
        rows.sort(key=lambda row: (row.solution.total, row.member))
        delta = rows[-1].solution.total - rows[0].solution.total
        comparisons.append(VariantComparison(
            group=grp.code, rows=tuple(rows), delta=delta,
        ))
    return tuple(comparisons)
