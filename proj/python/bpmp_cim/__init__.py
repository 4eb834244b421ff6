"""BPMP model suite and Composite Index Method bindings."""

import json

from ._core import (
    emit,
    generate,
    grand_composite,
    lp_relaxation,
    run_cli,
    run_table_speedups,
    size_index,
    summarize,
)
from ._core import solve as _solve
from ._core import solve_exact as _solve_exact


def solve(instance, formulation, techniques="", cuts=""):
    return json.loads(_solve(instance, formulation, techniques, cuts))


def solve_exact(instance):
    return json.loads(_solve_exact(instance))


__all__ = [
    "emit",
    "generate",
    "grand_composite",
    "lp_relaxation",
    "run_cli",
    "run_table_speedups",
    "size_index",
    "solve",
    "solve_exact",
    "summarize",
]
