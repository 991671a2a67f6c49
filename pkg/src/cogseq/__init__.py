"""cogseq: minimum cognitive-cost orderings for partially ordered workflows.

Workflows are task sets with prerequisite edges and optional variant groups;
costs come from an empirically grounded task-switching model (a 5x5
cognitive-resource matrix plus five property-transition rules).  The solver
searches linear extensions with branch-and-bound; a brute-force oracle and a
WCSP encoding provide independent evaluation routes.
"""

from ._backend import KERNEL_NAME
from .analysis import (
    ReportRow,
    consensus_ordering,
    distance_squared,
    ordering_distance,
    transition_report,
)
from .costs import (
    DEFAULT_MATRIX,
    DEFAULT_RULE_COSTS,
    CostModel,
    Rule,
    Scope,
    TransitionBreakdown,
    TransitionRule,
    fired_rules,
    pair_cost,
    render_effect,
    resource_switch_cost,
    sequence_cost,
    to_thousandths,
    transition_cost,
)
from .errors import (
    BudgetExceededError,
    CogseqError,
    CostModelError,
    DocumentError,
    OrderingError,
    WorkflowError,
)
from .io import (
    FIXTURES,
    WorkflowDocument,
    document_to_dict,
    export_dot,
    fixture_text,
    load_cost_model,
    load_document,
    load_fixture,
    load_workflow,
    parse_cost_model_document,
    parse_ordering_text,
    parse_resource,
    parse_workflow_document,
    read_orderings_file,
    render_cost_model,
    resolve_workflow_path,
    save_document,
)
from .model import (
    Ordering,
    Resource,
    Task,
    ValidationReport,
    VariantGroup,
    Violation,
    Workflow,
    count_linear_extensions,
    enumerate_linear_extensions,
    instantiate_all,
    instantiate_variant,
    is_linear_extension,
    validate_workflow,
)
from .solver import (
    Backend,
    Objective,
    SearchStats,
    Solution,
    SolveRequest,
    VariantComparison,
    VariantRow,
    brute_force,
    compare_variants,
    solve,
)
from .wcsp import (
    AllDifferent,
    Assignment,
    OrderPair,
    WcspInstance,
    assignment_to_ordering,
    dump_instance,
    encode_workflow,
    evaluate_assignment,
    ordering_to_assignment,
)

__version__ = "0.1.0"

__all__ = [
    "AllDifferent", "Assignment", "Backend", "BudgetExceededError",
    "CogseqError", "CostModel", "CostModelError", "DEFAULT_MATRIX",
    "DEFAULT_RULE_COSTS", "DocumentError", "FIXTURES", "KERNEL_NAME",
    "Objective", "OrderPair", "Ordering", "OrderingError", "ReportRow",
    "Resource", "Rule", "Scope", "SearchStats", "Solution", "SolveRequest",
    "Task", "TransitionBreakdown", "TransitionRule", "ValidationReport",
    "VariantComparison", "VariantGroup", "VariantRow", "Violation",
    "WcspInstance", "Workflow", "WorkflowDocument", "WorkflowError",
    "assignment_to_ordering", "brute_force", "compare_variants",
    "consensus_ordering", "count_linear_extensions", "distance_squared",
    "document_to_dict", "dump_instance", "encode_workflow",
    "enumerate_linear_extensions", "evaluate_assignment", "export_dot",
    "fired_rules", "fixture_text", "instantiate_all", "instantiate_variant",
    "is_linear_extension", "load_cost_model", "load_document",
    "load_fixture", "load_workflow", "ordering_distance",
    "ordering_to_assignment", "pair_cost", "parse_cost_model_document",
    "parse_ordering_text", "parse_resource", "parse_workflow_document",
    "read_orderings_file", "render_cost_model", "render_effect",
    "resolve_workflow_path", "resource_switch_cost", "save_document",
    "sequence_cost", "solve", "to_thousandths", "transition_cost",
    "transition_report", "validate_workflow",
]
