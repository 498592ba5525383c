# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled partition refinement kernel (same contract as _refine_py)."""

from libc.stdlib cimport malloc, free, qsort


cdef struct Key:
    long a
    long b
    long c
    long idx


cdef int _cmp(const void *p, const void *q) noexcept nogil:
    cdef const Key *x = <const Key *>p
    cdef const Key *y = <const Key *>q
    if x.a != y.a:
        return -1 if x.a < y.a else 1
    if x.b != y.b:
        return -1 if x.b < y.b else 1
    if x.c != y.c:
        return -1 if x.c < y.c else 1
    return 0


cdef long _relabel(Key *keys, long *blocks, long *first, long n) noexcept nogil:
    # group equal keys, then renumber groups by first occurrence
    cdef long i, g = 0
    qsort(keys, n, sizeof(Key), _cmp)
    for i in range(n):
        if i > 0 and _cmp(&keys[i - 1], &keys[i]) != 0:
            g += 1
        blocks[keys[i].idx] = g
    for i in range(g + 1):
        first[i] = -1
    cdef long count = 0
    for i in range(n):
        if first[blocks[i]] < 0:
            first[blocks[i]] = count
            count += 1
        blocks[i] = first[blocks[i]]
    return count


def refine_partition(initial, then, else_):
    cdef long n = len(initial)
    if n == 0:
        return []
    cdef Key *keys = <Key *>malloc(n * sizeof(Key))
    cdef long *blocks = <long *>malloc(n * sizeof(long))
    cdef long *nxt = <long *>malloc(n * sizeof(long))
    cdef long *t = <long *>malloc(n * sizeof(long))
    cdef long *e = <long *>malloc(n * sizeof(long))
    cdef long *first = <long *>malloc(n * sizeof(long))
    if not (keys and blocks and nxt and t and e and first):
        free(keys); free(blocks); free(nxt); free(t); free(e); free(first)
        raise MemoryError()
    cdef long i, count, new_count
    try:
        ids = {}
        for i in range(n):
            blocks[i] = ids.setdefault(initial[i], len(ids))
            t[i] = then[i]
            e[i] = else_[i]
            if not (0 <= t[i] < n and 0 <= e[i] < n):
                raise IndexError("successor index out of range")
        count = len(ids)
        with nogil:
            while True:
                for i in range(n):
                    keys[i].a = blocks[i]
                    keys[i].b = blocks[t[i]]
                    keys[i].c = blocks[e[i]]
                    keys[i].idx = i
                new_count = _relabel(keys, nxt, first, n)
                for i in range(n):
                    blocks[i] = nxt[i]
                if new_count == count:
                    break
                count = new_count
        return [blocks[i] for i in range(n)]
    finally:
        free(keys); free(blocks); free(nxt); free(t); free(e); free(first)
