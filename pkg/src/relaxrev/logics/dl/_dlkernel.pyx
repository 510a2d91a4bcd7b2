# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled evaluator for concept programs over all interpretations of one domain size.

Interpretation index layout (low bits only; individuals do not affect
concept extensions): concept j occupies bits [j*n, (j+1)*n), role r row x
occupies bits [n*nc + r*n*n + x*n, ... + n). Each result byte is the
extension of the concept as a subset of the domain {0..n-1}.

The program runs column-wise: each opcode is one pass over all
interpretations, with stack slots held as byte columns.
"""

import numpy as np
from libc.stdint cimport int32_t, uint8_t, uint64_t

cdef enum:
    PUSH_TOP = 0
    PUSH_BOT = 1
    PUSH_NAME = 2
    AND = 3
    OR = 4
    NOT = 5
    EXISTS = 6
    FORALL = 7


cdef void _push_bits(uint8_t* dst, uint64_t count, int shift, uint8_t full) noexcept nogil:
    cdef uint64_t i
    for i in range(count):
        dst[i] = <uint8_t>((i >> shift) & full)


cdef void _quantify(uint8_t* col, uint8_t* acc, uint64_t count, int n, int base,
                    uint8_t full, bint exists) noexcept nogil:
    # x-outer passes keep the inner loops branch-free
    cdef uint64_t i
    cdef int x, shift
    cdef uint8_t bit
    for i in range(count):
        acc[i] = 0
    for x in range(n):
        shift = base + x * n
        bit = <uint8_t>(1 << x)
        if exists:
            for i in range(count):
                acc[i] |= bit * (((i >> shift) & col[i]) != 0)
        else:
            for i in range(count):
                acc[i] |= bit * (((i >> shift) & ~col[i] & full) == 0)
    for i in range(count):
        col[i] = acc[i]


def eval_program(const int32_t[:, ::1] prog, int n, int nc, int nr):
    cdef int low_bits = n * nc + nr * n * n
    cdef uint64_t count = (<uint64_t>1) << low_bits
    cdef uint8_t full = <uint8_t>((1 << n) - 1)
    cdef int roff = n * nc
    cdef int length = prog.shape[0]
    cdef int depth = 0, sp = 0, top = 0
    cdef int pc, op, arg, k
    cdef uint64_t i
    cdef uint8_t* a
    cdef uint8_t* b

    for pc in range(length):
        op = prog[pc, 0]
        if op <= PUSH_NAME:
            sp += 1
        elif op == AND or op == OR:
            sp -= prog[pc, 1] - 1
        if sp > top:
            top = sp
    depth = top if top > 0 else 1
    # one spare column for quantifier accumulation
    slots = np.empty((depth + 1, count), dtype=np.uint8)
    cdef uint8_t[:, ::1] cols = slots

    sp = 0
    with nogil:
        for pc in range(length):
            op = prog[pc, 0]
            arg = prog[pc, 1]
            if op == PUSH_TOP or op == PUSH_BOT:
                a = &cols[sp, 0]
                for i in range(count):
                    a[i] = full if op == PUSH_TOP else 0
                sp += 1
            elif op == PUSH_NAME:
                _push_bits(&cols[sp, 0], count, arg * n, full)
                sp += 1
            elif op == AND or op == OR:
                a = &cols[sp - arg, 0]
                for k in range(sp - arg + 1, sp):
                    b = &cols[k, 0]
                    if op == AND:
                        for i in range(count):
                            a[i] &= b[i]
                    else:
                        for i in range(count):
                            a[i] |= b[i]
                sp -= arg - 1
            elif op == NOT:
                a = &cols[sp - 1, 0]
                for i in range(count):
                    a[i] = full & ~a[i]
            else:
                a = &cols[sp - 1, 0]
                if arg < 0:
                    for i in range(count):
                        if op == EXISTS:
                            a[i] = full if a[i] else 0
                        else:
                            a[i] = full if a[i] == full else 0
                else:
                    _quantify(a, &cols[depth, 0], count, n, roff + arg * n * n, full, op == EXISTS)
    return slots[0].copy()
