"""Backend selection and concept compilation for the DL extension kernel.

The compiled module is used when it was built and ``RELAXREV_PURE_PYTHON``
is unset; otherwise the numpy implementation runs. Both take a postfix
program of ``(opcode, argument)`` rows.
"""

from __future__ import annotations

import os

import numpy as np

from .syntax import TOP_ROLE, And, BotC, Concept, Exists, Forall, Name, Not, Or, TopC
from . import _dlkernel_py

PUSH_TOP, PUSH_BOT, PUSH_NAME, AND, OR, NOT, EXISTS, FORALL = range(8)
MAX_STACK = 256

_compiled = None
if not os.environ.get("RELAXREV_PURE_PYTHON"):
    try:
        from . import _dlkernel as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "numpy"


def compile_concept(c: Concept, concept_index: dict, role_index: dict) -> np.ndarray:
    rows: list[tuple[int, int]] = []

    def emit(x: Concept) -> None:
        if isinstance(x, TopC):
            rows.append((PUSH_TOP, 0))
        elif isinstance(x, BotC):
            rows.append((PUSH_BOT, 0))
        elif isinstance(x, Name):
            rows.append((PUSH_NAME, concept_index[x.name]))
        elif isinstance(x, Not):
            emit(x.arg)
            rows.append((NOT, 0))
        elif isinstance(x, (And, Or)):
            for a in x.args:
                emit(a)
            rows.append((AND if isinstance(x, And) else OR, len(x.args)))
        elif isinstance(x, (Exists, Forall)):
            emit(x.arg)
            r = -1 if x.role == TOP_ROLE else role_index[x.role]
            rows.append((EXISTS if isinstance(x, Exists) else FORALL, r))
        else:
            raise TypeError(f"not a concept: {x!r}")

    emit(c)
    if _stack_depth(rows) > MAX_STACK:
        raise ValueError("concept too deep for the kernel stack")
    return np.ascontiguousarray(np.array(rows, dtype=np.int32).reshape(-1, 2))


def _stack_depth(rows) -> int:
    sp = top = 0
    for op, arg in rows:
        if op in (PUSH_TOP, PUSH_BOT, PUSH_NAME):
            sp += 1
        elif op in (AND, OR):
            sp -= arg - 1
        top = max(top, sp)
    return top


def eval_program(prog: np.ndarray, n: int, nc: int, nr: int, backend: str | None = None) -> np.ndarray:
    """Extension byte of the program's concept for every low-bit interpretation index."""
    use = backend or BACKEND
    if use == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernel is not available")
        return _compiled.eval_program(prog, n, nc, nr)
    return _dlkernel_py.eval_program(prog, n, nc, nr)
