"""Growth-rate comparison of complexity functions and evaluation-plan composition."""

from ._asymcomp import (
    ClassifyError,
    CompCode,
    ComparatorConfig,
    CompositionError,
    CompResult,
    EvalError,
    Expr,
    ParseError,
    Plan,
    PlanError,
    Registry,
    RegistryError,
    classify,
    compare,
    compare_json,
    compose,
    evaluate,
    format,
    insert,
    parse,
    read_plan,
    root_free_start,
)

__all__ = [
    "ClassifyError",
    "CompCode",
    "ComparatorConfig",
    "CompositionError",
    "CompResult",
    "EvalError",
    "Expr",
    "ParseError",
    "Plan",
    "PlanError",
    "Registry",
    "RegistryError",
    "classify",
    "compare",
    "compare_json",
    "compose",
    "evaluate",
    "format",
    "insert",
    "parse",
    "read_plan",
    "root_free_start",
]
