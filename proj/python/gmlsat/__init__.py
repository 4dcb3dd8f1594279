from .gmlsat_native import (
    FormulaParseError,
    ResourceLimitError,
    check_model,
    generate,
    measures,
    nnf,
    solve,
)

__all__ = [
    "FormulaParseError",
    "ResourceLimitError",
    "check_model",
    "generate",
    "measures",
    "nnf",
    "solve",
]
