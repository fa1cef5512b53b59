"""Instance lowering and solver-lane selection.

The resampling loop is the hot path of the whole package, so it exists
twice: a Cython extension (``lllshift._mtcore``) and a pure-Python twin
(``lllshift._mtcore_py``). Both consume the same lowered form of an
instance and the same SplitMix64 stream, so a given (instance, seed)
pair yields the identical trajectory on either lane.

The lane is picked once at import time. Set ``LLL_SHIFT_KERNEL=py`` to
force the fallback, ``=c`` to require the extension (ImportError if it
is missing), or leave unset/``auto`` to prefer the extension when
available. Instances containing opaque predicate events always run on
the Python lane regardless of the selection.
"""
from __future__ import annotations

import os

import numpy as np

from . import _mtcore_py
from ._mtcore_py import (
    KIND_BLOCKS,
    KIND_EXPLICIT,
    KIND_PREDICATE,
    STATUS_BUDGET_EXHAUSTED,
    STATUS_SOLVED,
    check_violated,
)
from .instances import BlockImplicit, Explicit, Instance

try:
    from . import _mtcore
except ImportError:  # extension not built; pure-Python lane only
    _mtcore = None


def _select_lane() -> str:
    requested = os.environ.get("LLL_SHIFT_KERNEL", "auto").lower()
    if requested not in ("auto", "c", "py"):
        raise ValueError(
            f"LLL_SHIFT_KERNEL must be one of auto/c/py, got {requested!r}"
        )
    if requested == "c" and _mtcore is None:
        raise ImportError(
            "LLL_SHIFT_KERNEL=c but the compiled kernel is not importable"
        )
    if requested == "auto":
        return "c" if _mtcore is not None else "py"
    return requested


ACTIVE_LANE = _select_lane()


def available_lanes() -> tuple:
    return ("c", "py") if _mtcore is not None else ("py",)


class LoweredInstance:
    """Index-space form of an instance, shared by both solver lanes."""

    __slots__ = (
        "n_vars",
        "k",
        "kinds",
        "domains",
        "rows",
        "row_sets",
        "blocks",
        "predicates",
        "_packed",
    )

    def __init__(self, n_vars, k, kinds, domains, rows, row_sets, blocks, predicates):
        self.n_vars = n_vars
        self.k = k
        self.kinds = kinds
        self.domains = domains
        self.rows = rows
        self.row_sets = row_sets
        self.blocks = blocks
        self.predicates = predicates
        self._packed = None

    @property
    def c_ready(self) -> bool:
        return KIND_PREDICATE not in self.kinds


def lower(inst: Instance) -> LoweredInstance:
    """Map variables to indices and event bodies to flat index-space data."""
    pos = inst.universe.position
    kinds, domains, rows, row_sets, blocks, predicates = [], [], [], [], [], []
    for ev in inst.events:
        dom = [pos(v) for v in ev.domain]
        domains.append(dom)
        if isinstance(ev.body, Explicit):
            kinds.append(KIND_EXPLICIT)
            rows.append(ev.body.forbidden)
            row_sets.append(ev.body.forbidden_set)
            blocks.append(None)
            predicates.append(None)
        elif isinstance(ev.body, BlockImplicit):
            kinds.append(KIND_BLOCKS)
            rows.append(None)
            row_sets.append(None)
            blocks.append(
                tuple(tuple((pos(v), s) for v, s in blk) for blk in ev.body.blocks)
            )
            predicates.append(None)
        else:
            kinds.append(KIND_PREDICATE)
            rows.append(None)
            row_sets.append(None)
            blocks.append(None)
            predicates.append(ev.body.predicate)
    return LoweredInstance(
        len(inst.universe),
        inst.universe.k,
        kinds,
        domains,
        rows,
        row_sets,
        blocks,
        predicates,
    )


def _pack_for_c(lowered: LoweredInstance) -> dict:
    """Flatten the lowered form into int64 arrays for the extension."""
    if lowered._packed is not None:
        return lowered._packed
    if not lowered.c_ready:
        raise ValueError("instance with predicate events cannot run on the C lane")
    m = len(lowered.kinds)
    dom_off = [0]
    dom_idx = []
    row_cnt = []
    row_off = [0]
    rows_flat = []
    ev_blk_off = [0]
    blk_pos_off = [0]
    blk_var = []
    blk_val = []
    for e in range(m):
        dom_idx.extend(lowered.domains[e])
        dom_off.append(len(dom_idx))
        if lowered.kinds[e] == KIND_EXPLICIT:
            evrows = lowered.rows[e]
            row_cnt.append(len(evrows))
            for row in evrows:
                rows_flat.extend(row)
            ev_blk_off.append(ev_blk_off[-1])
        else:
            row_cnt.append(0)
            for blk in lowered.blocks[e]:
                for v, s in blk:
                    blk_var.append(v)
                    blk_val.append(s)
                blk_pos_off.append(len(blk_var))
            ev_blk_off.append(len(blk_pos_off) - 1)
        row_off.append(len(rows_flat))
    arr = lambda x: np.asarray(x, dtype=np.int64)
    packed = {
        "kinds": arr(lowered.kinds),
        "dom_off": arr(dom_off),
        "dom_idx": arr(dom_idx),
        "row_cnt": arr(row_cnt),
        "row_off": arr(row_off),
        "rows_flat": arr(rows_flat),
        "ev_blk_off": arr(ev_blk_off),
        "blk_pos_off": arr(blk_pos_off),
        "blk_var": arr(blk_var),
        "blk_val": arr(blk_val),
    }
    lowered._packed = packed
    return packed


def _resolve_lane(lowered: LoweredInstance, lane) -> str:
    lane = ACTIVE_LANE if lane is None else lane
    if lane not in ("c", "py"):
        raise ValueError(f"unknown lane {lane!r}")
    if lane == "c":
        if _mtcore is None:
            raise ImportError("compiled kernel not available")
        if not lowered.c_ready:
            lane = "py"  # opaque predicates cannot cross into C
    return lane


def mt_solve(lowered: LoweredInstance, seed: int, max_resamples: int, lane=None):
    """Run the resampling loop; returns (values or None, resamples)."""
    seed = seed & ((1 << 64) - 1)
    lane = _resolve_lane(lowered, lane)
    if lane == "py":
        return _mtcore_py.mt_solve(lowered, seed, max_resamples)
    packed = _pack_for_c(lowered)
    values = np.zeros(lowered.n_vars, dtype=np.int64)
    status, resamples = _mtcore.mt_solve(
        packed["kinds"],
        packed["dom_off"],
        packed["dom_idx"],
        packed["row_cnt"],
        packed["row_off"],
        packed["rows_flat"],
        packed["ev_blk_off"],
        packed["blk_pos_off"],
        packed["blk_var"],
        packed["blk_val"],
        lowered.n_vars,
        lowered.k,
        seed,
        max_resamples,
        values,
    )
    if status == STATUS_SOLVED:
        return [int(v) for v in values], resamples
    return None, resamples


def first_violated(lowered: LoweredInstance, values, lane=None) -> int:
    lane = _resolve_lane(lowered, lane)
    if lane == "py":
        return _mtcore_py.first_violated(lowered, values)
    packed = _pack_for_c(lowered)
    return _mtcore.first_violated(
        packed["kinds"],
        packed["dom_off"],
        packed["dom_idx"],
        packed["row_cnt"],
        packed["row_off"],
        packed["rows_flat"],
        packed["ev_blk_off"],
        packed["blk_pos_off"],
        packed["blk_var"],
        packed["blk_val"],
        np.asarray(values, dtype=np.int64),
    )
