"""Pure-Python solver kernel.

Twin of the compiled kernel in ``_mtcore.pyx``: same lowered-instance
layout, same SplitMix64 stream, same draw order (all variables once at
startup, then the violated event's domain in domain order per resample),
so the two lanes produce bit-identical trajectories. This lane
additionally supports events lowered to opaque predicates, which cannot
cross into C.
"""
from __future__ import annotations

from .rng import SplitMix64

KIND_EXPLICIT = 0
KIND_BLOCKS = 1
KIND_PREDICATE = 2

STATUS_SOLVED = 0
STATUS_BUDGET_EXHAUSTED = 1


def check_violated(lowered, e: int, values) -> bool:
    kind = lowered.kinds[e]
    if kind == KIND_EXPLICIT:
        row = tuple(values[v] for v in lowered.domains[e])
        return row in lowered.row_sets[e]
    if kind == KIND_BLOCKS:
        for blk in lowered.blocks[e]:
            for v, s in blk:
                if values[v] != s:
                    break
            else:
                return False  # a fully matched block escapes the event
        return True
    row = tuple(values[v] for v in lowered.domains[e])
    return lowered.predicates[e](row)


def first_violated(lowered, values) -> int:
    for e in range(len(lowered.kinds)):
        if check_violated(lowered, e, values):
            return e
    return -1


def mt_solve(lowered, seed: int, max_resamples: int, trace=None):
    """Resample the lowest-index violated event until none remains.

    Returns (values, resamples) on success and (None, resamples) when the
    budget runs out. ``trace``, if a list, collects the resampled event
    indices in order.
    """
    rng = SplitMix64(seed)
    k = lowered.k
    values = [rng.below(k) for _ in range(lowered.n_vars)]
    resamples = 0
    while True:
        e = first_violated(lowered, values)
        if e < 0:
            return values, resamples
        if resamples >= max_resamples:
            return None, resamples
        for v in lowered.domains[e]:
            values[v] = rng.below(k)
        resamples += 1
        if trace is not None:
            trace.append(e)
