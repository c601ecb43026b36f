"""Prenexing toolkit for fully quantified boolean formulas.

Parses full (non-prenex) QBFs with arbitrary n-ary boolean operators,
rewrites them into prenex form with linear size growth and preserved
quantifier depth, verifies rewrites against a brute-force semantic oracle,
and exports solver-ready QCIR/QDIMACS.
"""

from .core import (
    App,
    CaptureError,
    FALSE,
    Formula,
    FreshGen,
    Kind,
    OperatorTable,
    Quant,
    TRUE,
    Var,
    bound_vars,
    free_vars,
    is_boolean,
    is_prenex,
    length,
    nblock,
    nbvar,
    qdepth,
    substitute,
    vars_of,
)
from .export import (
    Manifest,
    NotPrenex,
    UnloweredOperator,
    lower_operators,
    to_prenex_text,
    to_qcir,
    to_qdimacs,
)
from .parser import ParseError, Problem, format_formula, format_problem, parse, parse_formula
from .semantics import (
    RefusalError,
    Valuation,
    equisatisfiable,
    equivalent,
    equivalid,
    evaluate,
    evaluate_via_mc,
    satisfiable,
    valid,
)
from .transform import (
    Decomposition,
    SizeBudgetExceeded,
    StepResult,
    decompose_outermost,
    extract_quantifier,
    naive_prenex,
    prenex,
    prenex_mc,
    step_transform,
)

__version__ = "0.1.0"

__all__ = [
    "App",
    "CaptureError",
    "Decomposition",
    "FALSE",
    "Formula",
    "FreshGen",
    "Kind",
    "Manifest",
    "NotPrenex",
    "OperatorTable",
    "ParseError",
    "Problem",
    "Quant",
    "RefusalError",
    "SizeBudgetExceeded",
    "StepResult",
    "TRUE",
    "UnloweredOperator",
    "Valuation",
    "Var",
    "bound_vars",
    "decompose_outermost",
    "equisatisfiable",
    "equivalent",
    "equivalid",
    "evaluate",
    "evaluate_via_mc",
    "extract_quantifier",
    "format_formula",
    "format_problem",
    "free_vars",
    "is_boolean",
    "is_prenex",
    "length",
    "lower_operators",
    "naive_prenex",
    "nblock",
    "nbvar",
    "parse",
    "parse_formula",
    "prenex",
    "prenex_mc",
    "qdepth",
    "satisfiable",
    "step_transform",
    "substitute",
    "to_prenex_text",
    "to_qcir",
    "to_qdimacs",
    "valid",
    "vars_of",
]
