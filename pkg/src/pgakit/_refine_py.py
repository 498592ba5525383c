"""Pure-Python partition refinement, used when the compiled kernel is absent."""


def refine_partition(initial, then, else_):
    """Coarsest partition of states stable under the two successor maps.

    ``initial[i]`` is the starting block of state ``i``; ``then``/``else_``
    give successor indices. Returns block ids numbered by first occurrence.
    """
    n = len(initial)
    ids: dict = {}
    blocks = [ids.setdefault(b, len(ids)) for b in initial]
    count = len(ids)
    while True:
        ids = {}
        new = [
            ids.setdefault((blocks[i], blocks[then[i]], blocks[else_[i]]), len(ids))
            for i in range(n)
        ]
        if len(ids) == count:
            return new
        blocks, count = new, len(ids)
