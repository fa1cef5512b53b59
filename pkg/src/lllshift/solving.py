"""Solvers: constructive resampling and an exhaustive oracle.

``solve_moser_tardos`` realizes the constructive route: start from a
uniformly random assignment and repeatedly resample the domain of the
lowest-index violated event. For a correct instance the expected number
of resamples is finite and small, but the call is always budgeted and
never returns an unverified assignment: every success is re-checked
against the event objects before being handed back.

``solve_backtracking`` is the independent oracle for small instances:
depth-first search over all assignments with event-violation pruning,
complete up to a configurable search-space cap.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from . import _mtcore_py, kernel
from .instances import Instance, verify_solution

log = logging.getLogger("lllshift.solving")

DEFAULT_MAX_RESAMPLES = 10**6


class SearchSpaceError(ValueError):
    """Backtracking refused: k^{|universe|} exceeds the configured cap."""


class KernelMismatchError(RuntimeError):
    """A solver returned an assignment that fails object-level verification."""


@dataclass
class MTResult:
    assignment: Optional[dict]
    resamples: int

    @property
    def success(self) -> bool:
        return self.assignment is not None


def _lowered(inst: Instance) -> kernel.LoweredInstance:
    cached = getattr(inst, "_lowered", None)
    if cached is None:
        cached = kernel.lower(inst)
        inst._lowered = cached
    return cached


def solve_moser_tardos(
    inst: Instance,
    seed: int = 0,
    max_resamples: int = DEFAULT_MAX_RESAMPLES,
    lane: Optional[str] = None,
) -> MTResult:
    """Budgeted resampling from a 64-bit seed; deterministic per (instance, seed)."""
    if max_resamples < 0:
        raise ValueError("max_resamples must be >= 0")
    low = _lowered(inst)
    values, resamples = kernel.mt_solve(low, seed, max_resamples, lane=lane)
    if values is None:
        log.debug("resampling budget %d exhausted (seed=%d)", max_resamples, seed)
        return MTResult(None, resamples)
    assignment = {v: values[i] for i, v in enumerate(inst.universe.variables)}
    leftover = verify_solution(inst, assignment)
    if leftover:
        raise KernelMismatchError(
            f"kernel returned a non-solution; violated events {leftover}"
        )
    return MTResult(assignment, resamples)


def mt_trajectory(inst: Instance, seed: int, max_resamples: int = DEFAULT_MAX_RESAMPLES):
    """Resampled event indices in order (Python lane); for determinism checks."""
    trace: list = []
    low = _lowered(inst)
    values, _ = _mtcore_py.mt_solve(low, seed & ((1 << 64) - 1), max_resamples, trace=trace)
    return trace, values


def solve_backtracking(inst: Instance, cap: int = 2**24) -> Optional[dict]:
    """Exhaustive depth-first search with violation pruning.

    Returns a solution iff one exists, else None. Deterministic: variables
    in universe order, symbols in ascending order, so the returned solution
    is the lexicographically least one.
    """
    n = len(inst.universe)
    k = inst.universe.k
    if k**n > cap:
        raise SearchSpaceError(f"search space k^n = {k}^{n} exceeds cap {cap}")
    low = _lowered(inst)

    # check each event as soon as its last variable receives a value
    by_last: list = [[] for _ in range(n)]
    upfront = []
    for e, dom in enumerate(low.domains):
        if dom:
            by_last[max(dom)].append(e)
        else:
            upfront.append(e)
    values = [0] * n
    for e in upfront:
        if _mtcore_py.check_violated(low, e, values):
            return None

    def extend(v: int) -> bool:
        if v == n:
            return True
        for s in range(k):
            values[v] = s
            if all(not _mtcore_py.check_violated(low, e, values) for e in by_last[v]):
                if extend(v + 1):
                    return True
        return False

    if not extend(0):
        return None
    assignment = {tok: values[i] for i, tok in enumerate(inst.universe.variables)}
    leftover = verify_solution(inst, assignment)
    if leftover:
        raise KernelMismatchError(
            f"backtracking returned a non-solution; violated events {leftover}"
        )
    return assignment
