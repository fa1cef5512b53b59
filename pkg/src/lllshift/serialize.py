"""JSON interchange for groups, configs, instances, assignments, reports.

Everything round-trips: writing an instance file and reading it back
produces an equal in-memory structure. Translated-pattern events are
serialized as generator references (their construction parameters, never
their bodies); explicit events carry their forbidden rows; structured
block events can also be inlined. Files are written with sorted keys and
fixed indentation, so identical data yields byte-identical files.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

from .groups import (
    FiniteCyclicProduct,
    FiniteTable,
    FreeGroup,
    GroupContext,
    IntegerLattice,
)
from .instances import (
    BadEvent,
    BlockImplicit,
    Explicit,
    Instance,
    VariableUniverse,
    block_miss_event,
)
from .shift import (
    BuiltShift,
    Pattern,
    ShiftConfig,
    TrapReport,
    build_bad_event,
    config_for_finite_group,
    config_windowed,
    make_pattern,
)


class SerializationError(ValueError):
    """Malformed or inconsistent document."""


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise SerializationError(f"{where}: missing key {key!r}")
    return obj[key]


# -- groups and elements ----------------------------------------------------

def group_to_json(ctx: GroupContext) -> dict:
    if isinstance(ctx, IntegerLattice):
        return {"family": "lattice", "dim": ctx.dim}
    if isinstance(ctx, FiniteCyclicProduct):
        return {"family": "cyclic", "moduli": list(ctx.moduli)}
    if isinstance(ctx, FreeGroup):
        return {"family": "free", "rank": ctx.rank}
    if isinstance(ctx, FiniteTable):
        return {
            "family": "table",
            "mul": [list(row) for row in ctx.mul],
            "identity": ctx.identity_index,
        }
    raise SerializationError(f"unknown group context {ctx!r}")


def group_from_json(obj: dict) -> GroupContext:
    family = _require(obj, "family", "group")
    if family == "lattice":
        return IntegerLattice(_require(obj, "dim", "group"))
    if family == "cyclic":
        return FiniteCyclicProduct(tuple(_require(obj, "moduli", "group")))
    if family == "free":
        return FreeGroup(_require(obj, "rank", "group"))
    if family == "table":
        return FiniteTable(
            tuple(tuple(row) for row in _require(obj, "mul", "group")),
            _require(obj, "identity", "group"),
            tuple(obj["inverse"]) if "inverse" in obj else None,
        )
    raise SerializationError(f"unknown group family {family!r}")


def element_to_json(ctx: GroupContext, elem):
    ctx.check(elem)
    if isinstance(ctx, FiniteTable):
        return elem
    return list(elem)


def element_from_json(ctx: GroupContext, obj):
    if isinstance(ctx, FiniteTable):
        if not isinstance(obj, int):
            raise SerializationError(f"table elements are indices, got {obj!r}")
        return ctx.check(obj)
    if not isinstance(obj, list):
        raise SerializationError(f"expected an integer array element, got {obj!r}")
    return ctx.check(tuple(obj))


# -- patterns and shift configs ---------------------------------------------

def pattern_to_json(ctx: GroupContext, pattern: Pattern) -> dict:
    return {
        "support": [element_to_json(ctx, d) for d in pattern.support],
        "values": [pattern.values[d] for d in pattern.support],
    }


def pattern_from_json(ctx: GroupContext, obj: dict, k: int) -> Pattern:
    support = [element_from_json(ctx, e) for e in _require(obj, "support", "pattern")]
    values = _require(obj, "values", "pattern")
    if len(values) != len(support):
        raise SerializationError("pattern support and values differ in length")
    return make_pattern(ctx, dict(zip(support, values)), k)


def shift_config_from_json(obj: dict) -> ShiftConfig:
    ctx = group_from_json(_require(obj, "group", "config"))
    k = _require(obj, "k", "config")
    pattern = pattern_from_json(ctx, _require(obj, "pattern", "config"), k)
    f_set = tuple(element_from_json(ctx, e) for e in _require(obj, "F", "config"))
    l_override = (
        tuple(element_from_json(ctx, e) for e in obj["L"]) if "L" in obj else None
    )
    if ctx.is_finite:
        return config_for_finite_group(ctx, pattern, f_set, l_override)
    if "core_radius" not in obj:
        raise SerializationError("config: infinite groups need core_radius")
    return config_windowed(
        ctx,
        pattern,
        f_set,
        obj["core_radius"],
        obj.get("universe_radius"),
        l_override,
    )


def shift_config_to_json(config: ShiftConfig) -> dict:
    ctx = config.ctx
    doc = {
        "group": group_to_json(ctx),
        "k": config.pattern.k,
        "pattern": pattern_to_json(ctx, config.pattern),
        "F": [element_to_json(ctx, e) for e in config.f_set],
    }
    if config.l_override is not None:
        doc["L"] = [element_to_json(ctx, e) for e in config.l_override]
    if not ctx.is_finite:
        doc["core_radius"] = max(ctx.length(g) for g in config.core_window)
        doc["universe_radius"] = max(ctx.length(g) for g in config.universe)
    return doc


# -- instances ----------------------------------------------------------------

def _token_to_json(ctx: Optional[GroupContext], token):
    if ctx is None:
        if not isinstance(token, str):
            raise SerializationError(
                f"universes without a group need string variables, got {token!r}"
            )
        return token
    return element_to_json(ctx, token)


def _token_from_json(ctx: Optional[GroupContext], obj):
    if ctx is None:
        if not isinstance(obj, str):
            raise SerializationError(f"expected a variable name, got {obj!r}")
        return obj
    return element_from_json(ctx, obj)


def _event_to_json(ctx, ev: BadEvent) -> dict:
    domain = [_token_to_json(ctx, v) for v in ev.domain]
    if isinstance(ev.body, Explicit):
        return {"domain": domain, "forbidden": [list(r) for r in ev.body.forbidden]}
    if isinstance(ev.body, BlockImplicit):
        return {
            "domain": domain,
            "blocks": [
                [[_token_to_json(ctx, v), s] for v, s in blk]
                for blk in ev.body.blocks
            ],
        }
    raise SerializationError(
        "events with opaque predicates cannot be serialized; "
        "materialize them explicitly first"
    )


def instance_to_json(inst: Instance, ctx: Optional[GroupContext] = None) -> dict:
    variables = {
        "kind": "name" if ctx is None else "element",
        "items": [_token_to_json(ctx, v) for v in inst.universe.variables],
    }
    if ctx is not None:
        variables["group"] = group_to_json(ctx)
    return {
        "format": "lll-instance",
        "k": inst.universe.k,
        "variables": variables,
        "events": [_event_to_json(ctx, ev) for ev in inst.events],
    }


def built_shift_to_json(built: BuiltShift) -> dict:
    """Instance document with translated-pattern events stored by reference."""
    ctx = built.config.ctx
    doc = instance_to_json(built.instance, ctx)
    doc["shift"] = {
        "pattern": pattern_to_json(ctx, built.config.pattern),
        "translates": [element_to_json(ctx, e) for e in built.translates],
    }
    doc["events"] = [
        {"generator": "block-miss", "gamma": element_to_json(ctx, gamma)}
        for gamma in built.config.core_window
    ]
    return doc


def instance_from_json(obj: dict):
    """Read an instance document; returns (Instance, group context or None)."""
    if obj.get("format") != "lll-instance":
        raise SerializationError("not an lll-instance document")
    k = _require(obj, "k", "instance")
    variables = _require(obj, "variables", "instance")
    kind = _require(variables, "kind", "variables")
    ctx = None
    if kind == "element":
        ctx = group_from_json(_require(variables, "group", "variables"))
    elif kind != "name":
        raise SerializationError(f"unknown variable kind {kind!r}")
    tokens = [_token_from_json(ctx, it) for it in _require(variables, "items", "variables")]
    universe = VariableUniverse(tokens, k)

    shift_ctx = None
    if "shift" in obj:
        if ctx is None:
            raise SerializationError("shift section requires element variables")
        pattern = pattern_from_json(ctx, _require(obj["shift"], "pattern", "shift"), k)
        translates = tuple(
            element_from_json(ctx, e)
            for e in _require(obj["shift"], "translates", "shift")
        )
        shift_ctx = (pattern, translates)

    events = []
    for i, evobj in enumerate(_require(obj, "events", "instance")):
        where = f"event {i}"
        if "generator" in evobj:
            if evobj["generator"] != "block-miss":
                raise SerializationError(
                    f"{where}: unknown generator {evobj['generator']!r}"
                )
            if shift_ctx is None:
                raise SerializationError(f"{where}: generator without shift section")
            gamma = element_from_json(ctx, _require(evobj, "gamma", where))
            pattern, translates = shift_ctx
            events.append(build_bad_event(ctx, gamma, translates, pattern))
            continue
        domain = [_token_from_json(ctx, t) for t in _require(evobj, "domain", where)]
        if "forbidden" in evobj:
            events.append(
                BadEvent(domain, Explicit([tuple(r) for r in evobj["forbidden"]]))
            )
        elif "blocks" in evobj:
            blocks = [
                [(_token_from_json(ctx, v), s) for v, s in blk]
                for blk in evobj["blocks"]
            ]
            events.append(block_miss_event(domain, blocks, k))
        else:
            raise SerializationError(f"{where}: no forbidden/blocks/generator body")
    return Instance(universe, events), ctx


# -- assignments --------------------------------------------------------------

def variable_key(ctx: Optional[GroupContext], token) -> str:
    """Stable string key for a variable in assignment files."""
    if ctx is None:
        return _token_to_json(None, token)
    return json.dumps(element_to_json(ctx, token), separators=(",", ":"))


def assignment_to_json(f, universe: VariableUniverse, ctx: Optional[GroupContext]) -> dict:
    values = {}
    for token in universe.variables:
        values[variable_key(ctx, token)] = f[token]
    return {"format": "lll-assignment", "values": values}


def assignment_from_json(obj: dict, universe: VariableUniverse, ctx: Optional[GroupContext]):
    if obj.get("format") != "lll-assignment":
        raise SerializationError("not an lll-assignment document")
    raw = _require(obj, "values", "assignment")
    by_key = {variable_key(ctx, token): token for token in universe.variables}
    f = {}
    for key, val in raw.items():
        token = by_key.get(key)
        if token is None:
            raise SerializationError(f"assignment key {key!r} not in the universe")
        if not isinstance(val, int) or not 0 <= val < universe.k:
            raise SerializationError(f"assignment value {val!r} not in [0, {universe.k})")
        f[token] = val
    missing = [k for k in by_key if k not in raw]
    if missing:
        raise SerializationError(f"assignment not total; missing {missing[:3]!r}...")
    return f


# -- trap reports -------------------------------------------------------------

def trap_report_to_json(ctx: GroupContext, report: TrapReport) -> dict:
    return {
        "format": "trap-report",
        "translates": [element_to_json(ctx, t) for t in report.translates],
        "total": report.total,
        "trapped": report.trapped_count,
        "all_trapped": report.all_trapped,
        "verdicts": [
            {
                "gamma": element_to_json(ctx, gamma),
                "witness": None if w is None else element_to_json(ctx, w),
            }
            for gamma, w in report.entries
        ],
    }


# -- files --------------------------------------------------------------------

def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_json(path, doc: dict) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SerializationError(f"{path}: malformed JSON ({exc})") from None
