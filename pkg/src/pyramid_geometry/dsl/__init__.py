"""A small ruler-and-compass scripting language (``.geo`` files)."""

from .evaluator import AssertionResult, Env, EvalError, EvalResult, eval_expr, evaluate
from .svg import render_svg
from .syntax import DslError, ParseError, Program, parse, parse_expression, to_source, tokenize

__all__ = [
    "AssertionResult",
    "DslError",
    "Env",
    "EvalError",
    "EvalResult",
    "ParseError",
    "Program",
    "eval_expr",
    "evaluate",
    "parse",
    "parse_expression",
    "render_svg",
    "run_source",
    "to_source",
    "tokenize",
]


def run_source(source: str, filename: str | None = None, resolver=None) -> EvalResult:
    return evaluate(parse(source, filename), resolver=resolver, filename=filename)
