"""Workflow model: tasks, precedence, variant groups, and linear extensions.

A workflow is a set of tasks with a partial order given by per-task
prerequisite lists, plus optional variant groups: named slots (such as an
authentication step) that stand for exactly one of several interchangeable
member tasks.  A workflow is *concrete* once every variant group has been
resolved to a single member; only concrete workflows can be sequenced.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass

from .errors import WorkflowError

Ordering = tuple[str, ...]


class Resource(enum.Enum):
    """The dominant cognitive subsystem a task engages."""

    VWM = "VWM"  # visual working memory
    PM = "PM"    # procedural memory
    DR = "DR"    # declarative recall
    SR = "SR"    # semantic recognition
    ER = "ER"    # episodic recognition


#: Canonical row/column order used everywhere a resource index is needed.
RESOURCE_ORDER: tuple[Resource, ...] = (
    Resource.VWM, Resource.PM, Resource.DR, Resource.SR, Resource.ER,
)


def normalize_modality(label: str) -> str:
    """Intern a response-modality label: compare after lowercasing and trimming."""
    return label.strip().lower()


@dataclass(frozen=True, slots=True)
class Task:
    """One workflow step and its cognitive/physical properties.

    ``familiarity`` and ``complexity`` are 1 (low) to 5 (high).  Range and
    reference problems are reported by :func:`validate_workflow` rather than
    raised here, so that malformed inputs can be described as data.
    """

    code: str
    name: str
    resource: Resource
    modality: str
    voluntary: bool
    familiarity: int
    complexity: int
    prerequisites: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "code", self.code.strip())
        object.__setattr__(self, "modality", normalize_modality(self.modality))
        object.__setattr__(self, "prerequisites", frozenset(self.prerequisites))
        if not self.code:
            raise WorkflowError("task code must be non-empty")


@dataclass(frozen=True, slots=True)
class VariantGroup:
    """A named slot with interchangeable member tasks (exactly one is kept)."""

    code: str
    members: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "code", self.code.strip())
        object.__setattr__(self, "members", frozenset(self.members))
        if not self.code:
            raise WorkflowError("variant-group code must be non-empty")


@dataclass(frozen=True)
class Workflow:
    """An immutable task set plus precedence constraints and variant groups.

    ``tasks`` maps task code to :class:`Task`.  Instances are safe to share
    across concurrent solver runs.
    """

    tasks: Mapping[str, Task]
    variant_groups: tuple[VariantGroup, ...] = ()

    @classmethod
    def from_tasks(cls, tasks: Iterable[Task],
                   variant_groups: Iterable[VariantGroup] = ()) -> Workflow:
        table: dict[str, Task] = {}
        for task in tasks:
            if task.code in table:
                raise WorkflowError(f"duplicate task code {task.code!r}")
            table[task.code] = task
        return cls(tasks=table, variant_groups=tuple(variant_groups))

    @property
    def is_concrete(self) -> bool:
        return not self.variant_groups

    def codes(self) -> tuple[str, ...]:
        """Task codes in ascending order (the canonical enumeration order)."""
        return tuple(sorted(self.tasks))

    def group(self, code: str) -> VariantGroup | None:
        for grp in self.variant_groups:
            if grp.code == code:
                return grp
        return None

    def precedence_edges(self) -> tuple[tuple[str, str], ...]:
        """(prerequisite, dependent) pairs, one per prerequisite entry."""
        edges = []
        for code in self.codes():
            for pre in sorted(self.tasks[code].prerequisites):
                edges.append((pre, code))
        return tuple(edges)

    def require_concrete(self, operation: str) -> None:
        if not self.is_concrete:
            groups = ", ".join(g.code for g in self.variant_groups)
            raise WorkflowError(
                f"{operation} requires a concrete workflow; "
                f"unresolved variant groups: {groups}"
            )


@dataclass(frozen=True, slots=True)
class Violation:
    """One validation finding; ``codes`` names the offending tasks/groups."""

    kind: str
    message: str
    codes: tuple[str, ...] = ()


@dataclass(frozen=True, slots=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __iter__(self) -> Iterator[Violation]:
        return iter(self.violations)

    def summary(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(f"[{v.kind}] {v.message}" for v in self.violations)


def validate_workflow(workflow: Workflow) -> ValidationReport:
    """Check every structural invariant; violations are data, not failures."""
    found: list[Violation] = []
    tasks = workflow.tasks
    group_codes = {g.code for g in workflow.variant_groups}
    member_of: dict[str, str] = {}

    for grp in workflow.variant_groups:
        if grp.code in tasks:
            found.append(Violation(
                "group-code-collision",
                f"variant group {grp.code!r} collides with a task code",
                (grp.code,),
            ))
        if not grp.members:
            found.append(Violation(
                "empty-group", f"variant group {grp.code!r} has no members", (grp.code,),
            ))
        for member in sorted(grp.members):
            if member not in tasks:
                found.append(Violation(
                    "unknown-member",
                    f"variant group {grp.code!r} lists unknown member {member!r}",
                    (grp.code, member),
                ))
            member_of[member] = grp.code

    for code in workflow.codes():
        task = tasks[code]
        for prop, value in (("familiarity", task.familiarity),
                            ("complexity", task.complexity)):
            if not 1 <= value <= 5:
                found.append(Violation(
                    "out-of-range",
                    f"task {code!r} has {prop}={value}, outside [1, 5]",
                    (code,),
                ))
        for pre in sorted(task.prerequisites):
            if pre == code:
                found.append(Violation(
                    "self-prerequisite", f"task {code!r} lists itself as a prerequisite",
                    (code,),
                ))
            elif pre not in tasks and pre not in group_codes:
                found.append(Violation(
                    "unknown-prerequisite",
                    f"task {code!r} requires unknown code {pre!r}",
                    (code, pre),
                ))
            elif pre in member_of:
                found.append(Violation(
                    "direct-member-reference",
                    f"task {code!r} requires {pre!r} directly; use its group "
                    f"{member_of[pre]!r} instead",
                    (code, pre),
                ))

    cycle = _find_cycle(workflow)
    if cycle:
        found.append(Violation(
            "cycle",
            "precedence cycle: " + " -> ".join(cycle + (cycle[0],)),
            cycle,
        ))
    return ValidationReport(tuple(found))


def _find_cycle(workflow: Workflow) -> tuple[str, ...] | None:
    """Find one precedence cycle, if any, over tasks and group codes.

    Group resolution is modelled conservatively by adding member -> group
    edges: a cycle here exists iff some single choice of members yields a
    cyclic concrete workflow (a simple cycle passes through a group node at
    most once, entering via exactly one member).
    """
    succ: dict[str, list[str]] = {}
    nodes = set(workflow.tasks) | {g.code for g in workflow.variant_groups}
    for code, task in workflow.tasks.items():
        for pre in task.prerequisites:
            if pre in nodes:
                succ.setdefault(pre, []).append(code)
    for grp in workflow.variant_groups:
        for member in grp.members:
            if member in nodes:
                succ.setdefault(member, []).append(grp.code)

    WHITE, GREY, BLACK = 0, 1, 2
    color = dict.fromkeys(nodes, WHITE)
    stack: list[str] = []

    def visit(node: str) -> tuple[str, ...] | None:
        color[node] = GREY
        stack.append(node)
        for nxt in sorted(succ.get(node, ())):
            if color[nxt] == GREY:
                return tuple(stack[stack.index(nxt):])
            if color[nxt] == WHITE:
                cyc = visit(nxt)
                if cyc:
                    return cyc
        stack.pop()
        color[node] = BLACK
        return None

    for start in sorted(nodes):
        if color[start] == WHITE:
            cyc = visit(start)
            if cyc:
                return cyc
    return None


def instantiate_variant(workflow: Workflow, group: str, member: str) -> Workflow:
    """Resolve one variant group to a single member.

    Non-chosen members are removed and every prerequisite reference to the
    group code is rewritten to the chosen member's code.
    """
    grp = workflow.group(group)
    if grp is None:
        known = ", ".join(g.code for g in workflow.variant_groups) or "none"
        raise WorkflowError(
            f"unknown variant group {group!r} (available: {known})"
        )
    if member not in grp.members:
        raise WorkflowError(
            f"{member!r} is not a member of group {group!r} "
            f"(members: {', '.join(sorted(grp.members))})"
        )

    dropped = grp.members - {member}
    tasks: dict[str, Task] = {}
    for code, task in workflow.tasks.items():
        if code in dropped:
            continue
        prereqs = frozenset(
            member if pre == group else pre
            for pre in task.prerequisites
            if pre not in dropped
        )
        tasks[code] = Task(
            code=task.code, name=task.name, resource=task.resource,
            modality=task.modality, voluntary=task.voluntary,
            familiarity=task.familiarity, complexity=task.complexity,
            prerequisites=prereqs,
        )
    remaining = tuple(g for g in workflow.variant_groups if g.code != group)
    return Workflow(tasks=tasks, variant_groups=remaining)


def instantiate_all(workflow: Workflow, choices: Mapping[str, str]) -> Workflow:
    """Resolve every variant group using ``choices`` (group code -> member)."""
    current = workflow
    for grp in workflow.variant_groups:
        if grp.code not in choices:
            raise WorkflowError(
                f"no member chosen for variant group {grp.code!r}"
            )
        current = instantiate_variant(current, grp.code, choices[grp.code])
    for group in choices:
        if workflow.group(group) is None:
            raise WorkflowError(f"unknown variant group {group!r}")
    return current


def is_linear_extension(ordering: Sequence[str], workflow: Workflow) -> bool:
    """True iff ``ordering`` permutes the task set and respects every prerequisite."""
    workflow.require_concrete("is_linear_extension")
    codes = set(workflow.tasks)
    if len(ordering) != len(codes) or set(ordering) != codes:
        return False
    position = {code: i for i, code in enumerate(ordering)}
    for code, task in workflow.tasks.items():
        for pre in task.prerequisites:
            if position[pre] >= position[code]:
                return False
    return True


def extension_violation(ordering: Sequence[str], workflow: Workflow) -> str | None:
    """Describe the first reason ``ordering`` is not a linear extension, or None."""
    workflow.require_concrete("sequencing")
    codes = set(workflow.tasks)
    seen: set[str] = set()
    for code in ordering:
        if code not in codes:
            return f"unknown task {code!r}"
        if code in seen:
            return f"task {code!r} appears more than once"
        seen.add(code)
    missing = codes - seen
    if missing:
        return "missing tasks: " + ", ".join(sorted(missing))
    position = {code: i for i, code in enumerate(ordering)}
    for code in ordering:
        for pre in sorted(workflow.tasks[code].prerequisites):
            if position[pre] >= position[code]:
                return f"{pre!r} must precede {code!r}"
    return None


def _direct_prerequisites(workflow: Workflow) -> dict[str, frozenset[str]]:
    return {code: task.prerequisites for code, task in workflow.tasks.items()}


def enumerate_linear_extensions(workflow: Workflow,
                                limit: int | None = None) -> Iterator[Ordering]:
    """Yield every linear extension, lexicographically by task code.

    At each step the eligible tasks are tried in ascending code order, so the
    stream is deterministic and each extension appears exactly once.  The
    stream is single-consumer.  Raises :class:`WorkflowError` on cycles.
    """
    workflow.require_concrete("enumeration")
    report = [v for v in validate_workflow(workflow) if v.kind == "cycle"]
    if report:
        raise WorkflowError(report[0].message)

    codes = workflow.codes()
    prereqs = _direct_prerequisites(workflow)
    n = len(codes)

    def generate(placed: list[str], done: set[str]) -> Iterator[Ordering]:
        if len(placed) == n:
            yield tuple(placed)
            return
        for code in codes:
            if code not in done and prereqs[code] <= done:
                placed.append(code)
                done.add(code)
                yield from generate(placed, done)
                placed.pop()
                done.remove(code)

    produced = 0
    for ordering in generate([], set()):
        yield ordering
        produced += 1
        if limit is not None and produced >= limit:
            return


def count_linear_extensions(workflow: Workflow, *,
                            memo_limit: int = 4_000_000) -> int:
    """Count linear extensions without enumerating them (count-only mode).

    Dynamic programming over downsets of the precedence order; the memo is
    capped at ``memo_limit`` entries to bound memory on very wide posets.
    """
    workflow.require_concrete("counting")
    if any(v.kind == "cycle" for v in validate_workflow(workflow)):
        raise WorkflowError("cannot count extensions of a cyclic workflow")

    codes = workflow.codes()
    index = {code: i for i, code in enumerate(codes)}
    n = len(codes)
    pred_masks = [0] * n
    for code, task in workflow.tasks.items():
        for pre in task.prerequisites:
            pred_masks[index[code]] |= 1 << index[pre]

    full = (1 << n) - 1
    memo: dict[int, int] = {}

    def count(placed: int) -> int:
        if placed == full:
            return 1
        cached = memo.get(placed)
        if cached is not None:
            return cached
        total = 0
        for i in range(n):
            bit = 1 << i
            if not placed & bit and pred_masks[i] & ~placed == 0:
                total += count(placed | bit)
        if len(memo) >= memo_limit:
            raise WorkflowError(
                "workflow too large for exact extension counting"
            )
        memo[placed] = total
        return total

    return count(0)
