"""Vectorised numpy evaluator with the same contract as the compiled kernel."""

from __future__ import annotations

import numpy as np

PUSH_TOP, PUSH_BOT, PUSH_NAME, AND, OR, NOT, EXISTS, FORALL = range(8)
CHUNK = 1 << 20


def eval_program(prog, n: int, nc: int, nr: int) -> np.ndarray:
    low_bits = n * nc + nr * n * n
    count = 1 << low_bits
    full = np.uint8((1 << n) - 1)
    roff = n * nc
    out = np.empty(count, dtype=np.uint8)
    mask64 = np.uint64((1 << n) - 1)
    for start in range(0, count, CHUNK):
        idx = np.arange(start, min(count, start + CHUNK), dtype=np.uint64)

        def bits_at(shift: int) -> np.ndarray:
            return ((idx >> np.uint64(shift)) & mask64).astype(np.uint8)

        stack: list[np.ndarray] = []
        for op, arg in prog:
            op, arg = int(op), int(arg)
            if op == PUSH_TOP:
                stack.append(np.full(idx.shape, full, dtype=np.uint8))
            elif op == PUSH_BOT:
                stack.append(np.zeros(idx.shape, dtype=np.uint8))
            elif op == PUSH_NAME:
                stack.append(bits_at(arg * n))
            elif op in (AND, OR):
                args = stack[len(stack) - arg:]
                del stack[len(stack) - arg:]
                v = args[0].copy()
                for a in args[1:]:
                    if op == AND:
                        v &= a
                    else:
                        v |= a
                stack.append(v)
            elif op == NOT:
                stack[-1] = full & ~stack[-1]
            else:
                e = stack[-1]
                if arg < 0:
                    hit = (e != 0) if op == EXISTS else (e == full)
                    v = np.where(hit, full, np.uint8(0)).astype(np.uint8)
                else:
                    v = np.zeros(idx.shape, dtype=np.uint8)
                    for x in range(n):
                        succ = bits_at(roff + arg * n * n + x * n)
                        if op == EXISTS:
                            ok = (succ & e) != 0
                        else:
                            ok = (succ & ~e & full) == 0
                        v |= ok.astype(np.uint8) << np.uint8(x)
                stack[-1] = v
        out[start:start + len(idx)] = stack[0]
    return out
