"""Translated-pattern ("shift") instances and orbit trapping.

Given a finite pattern phi on a support D inside a group, the cylinder
of phi is the set of configurations x: G -> k extending it. For a
translate set L whose inverse is left D-separated, the bad event at a
group element gamma forbids exactly the assignments that match phi on
*none* of the disjoint blocks D*l^-1*gamma, l in L. Avoiding the event
at gamma means the shifted configuration gamma.x lies in some l-translate
of the cylinder; avoiding all of them traps the whole orbit.

The block-count threshold ell0 is the point from which
e * (1 - k^-|D|)^ell * |D|^2 * ell^2 stays below 1; any translate set of
size >= n := ell0 * |D|^2 admits an L large enough that the instance
passes the correctness criterion. All threshold comparisons use the same
certified rational/e-enclosure discipline as the correctness check.
"""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .certify import (
    CERT_BELOW,
    Verdict,
    compare_e_product_to_one,
    e_product_bounds,
)
from .groups import Element, GroupContext, element_set, set_inverse, set_product
from .instances import (
    Assignment,
    BadEvent,
    Instance,
    VariableUniverse,
    block_miss_event,
    event_probability,
    is_correct,
    verify_solution,
)
from .separation import left_separated_subset

log = logging.getLogger("lllshift.shift")

_SCAN_LIMIT = 10**6


class WindowError(ValueError):
    """A required position falls outside the configured window."""


class BoundViolationError(RuntimeError):
    """A guaranteed bound failed on measured data: implementation bug."""


def shrink_base(k: int, dsize: int) -> Fraction:
    """Per-block miss probability 1 - k^-dsize."""
    if not isinstance(k, int) or k < 1:
        raise ValueError("alphabet size k must be an integer >= 1")
    if not isinstance(dsize, int) or dsize < 1:
        raise ValueError("pattern support size must be an integer >= 1")
    return 1 - Fraction(1, k**dsize)


def threshold_product(k: int, dsize: int, ell: int) -> Fraction:
    """Rational part of the threshold product: (1-k^-dsize)^ell * dsize^2 * ell^2."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    return shrink_base(k, dsize) ** ell * dsize * dsize * ell * ell


def threshold_product_bounds(k: int, dsize: int, ell: int):
    """Certified enclosure of e * (1-k^-dsize)^ell * dsize^2 * ell^2."""
    return e_product_bounds(threshold_product(k, dsize, ell))


def _ratio_certifies_decrease(base: Fraction, ell: int) -> bool:
    # one-step ratio of the product; once < 1 it stays < 1, so the
    # product decreases from ell onward
    return base * Fraction((ell + 1) ** 2, ell * ell) < 1


@functools.lru_cache(maxsize=None)
def compute_ell0(k: int, dsize: int) -> int:
    """Smallest ell0 with the threshold product certified < 1 for ALL ell >= ell0.

    The product rises before it falls, so the scan declares ell0 only at
    an ell where (a) e * product(ell) < 1 is certified against the
    e-enclosure and (b) the one-step decrease ratio is < 1, which pins
    the product below 1 for every later ell. k = 1 collapses the base to
    0 (every block matches trivially), giving ell0 = 1.
    """
    base = shrink_base(k, dsize)
    if base == 0:
        return 1
    mult = dsize * dsize
    power = Fraction(1)
    for ell in range(1, _SCAN_LIMIT + 1):
        power *= base
        q = power * mult * ell * ell
        if compare_e_product_to_one(q) == CERT_BELOW and _ratio_certifies_decrease(
            base, ell
        ):
            return ell
    raise RuntimeError(f"no threshold found below {_SCAN_LIMIT}")


def compute_n(k: int, dsize: int) -> int:
    """Translate-pool size n = ell0 * dsize^2 that guarantees a large enough L."""
    return compute_ell0(k, dsize) * dsize * dsize


@dataclass(frozen=True)
class Pattern:
    """A partial map support -> {0..k-1}; defines the cylinder it pins."""

    support: tuple
    values: Mapping[Element, int]
    k: int


def make_pattern(ctx: GroupContext, values: Mapping[Element, int], k: int) -> Pattern:
    support = element_set(ctx, values.keys())
    if not support:
        raise ValueError("pattern support must be nonempty")
    if not isinstance(k, int) or k < 1:
        raise ValueError("alphabet size k must be an integer >= 1")
    vals = {}
    for elem in support:
        v = values[elem]
        if not isinstance(v, int) or not 0 <= v < k:
            raise ValueError(f"pattern value {v!r} at {elem!r} not in [0, {k})")
        vals[elem] = v
    return Pattern(support, vals, k)


@dataclass
class ShiftConfig:
    """A group, a pattern, the translate pool F, and the two windows.

    ``universe`` is the variable set; ``core_window`` holds the gammas at
    which events are built and trapping is claimed. For finite groups both
    default to the whole group; for infinite groups they are balls, with
    the universe radius padded so every event domain fits.
    """

    ctx: GroupContext
    pattern: Pattern
    f_set: tuple
    core_window: tuple
    universe: tuple
    l_override: Optional[tuple] = None

    def __post_init__(self):
        self.f_set = element_set(self.ctx, self.f_set)
        self.core_window = element_set(self.ctx, self.core_window)
        self.universe = element_set(self.ctx, self.universe)
        if not self.f_set:
            raise ValueError("translate pool F must be nonempty")
        if self.l_override is not None:
            self.l_override = element_set(self.ctx, self.l_override)
            if not set(self.l_override) <= set(self.f_set):
                raise ValueError("explicit L must be a subset of F")


def config_for_finite_group(
    ctx: GroupContext,
    pattern: Pattern,
    f_set: Sequence,
    l_override: Optional[Sequence] = None,
) -> ShiftConfig:
    """Whole-group windows: one event per group element."""
    everything = ctx.elements()
    return ShiftConfig(
        ctx,
        pattern,
        element_set(ctx, f_set),
        everything,
        everything,
        element_set(ctx, l_override) if l_override is not None else None,
    )


def config_windowed(
    ctx: GroupContext,
    pattern: Pattern,
    f_set: Sequence,
    core_radius: int,
    universe_radius: Optional[int] = None,
    l_override: Optional[Sequence] = None,
) -> ShiftConfig:
    """Ball windows for infinite groups; trapping is claimed on the core only."""
    if ctx.is_finite:
        return config_for_finite_group(ctx, pattern, f_set, l_override)
    f_set = element_set(ctx, f_set)
    translates = (
        element_set(ctx, l_override)
        if l_override is not None
        else select_l(ctx, f_set, pattern.support)
    )
    if universe_radius is None:
        pad_d = max(ctx.length(d) for d in pattern.support)
        pad_l = max(ctx.length(t) for t in translates)
        universe_radius = core_radius + pad_d + pad_l
    return ShiftConfig(
        ctx,
        pattern,
        f_set,
        ctx.ball(core_radius),
        ctx.ball(universe_radius),
        element_set(ctx, l_override) if l_override is not None else None,
    )


def select_l(ctx: GroupContext, f_set: Sequence, d_set: Sequence) -> tuple:
    """Subset L of F with L^-1 left D-separated and |L| >= |F|/|D|^2.

    Runs the left-separated extraction on F^-1 and inverts the result
    back, then re-verifies both guarantees directly.
    """
    f_set = element_set(ctx, f_set)
    d_set = element_set(ctx, d_set)
    inverted = left_separated_subset(ctx, set_inverse(ctx, f_set), d_set)
    out = set_inverse(ctx, inverted)
    if not set(out) <= set(f_set):
        raise RuntimeError("selected L escaped F; inversion bug")
    if len(out) * len(d_set) ** 2 < len(f_set):
        raise RuntimeError("size guarantee |L| >= |F|/|D|^2 violated")
    if len(set_product(ctx, d_set, set_inverse(ctx, out))) != len(d_set) * len(out):
        raise RuntimeError("L^-1 not left D-separated; extraction bug")
    return out


def build_bad_event(
    ctx: GroupContext, gamma: Element, translates: Sequence, pattern: Pattern
) -> BadEvent:
    """Event at gamma: forbidden iff every block D*l^-1*gamma mismatches phi.

    Requires the inverse of ``translates`` to be left D-separated so the
    blocks are disjoint; the domain then has size |D|*|L| exactly and the
    forbidden count is (k^|D| - 1)^|L| in closed form.
    """
    translates = element_set(ctx, translates)
    if not translates:
        raise ValueError("translate set must be nonempty")
    d_set = pattern.support
    inv = set_inverse(ctx, translates)
    if len(set_product(ctx, d_set, inv)) != len(d_set) * len(translates):
        raise ValueError(
            "translate inverses are not left D-separated; blocks would overlap"
        )
    blocks = []
    for lam in translates:
        shift_by = ctx.multiply(ctx.inverse(lam), gamma)
        blocks.append(
            tuple(
                (ctx.multiply(d, shift_by), pattern.values[d]) for d in d_set
            )
        )
    domain = element_set(ctx, (pos for blk in blocks for pos, _ in blk))
    if len(domain) != len(d_set) * len(translates):
        raise RuntimeError("block positions collided despite separation check")
    return block_miss_event(domain, blocks, pattern.k)


@dataclass
class BuiltShift:
    """An instance plus the construction data needed to audit it."""

    instance: Instance
    config: ShiftConfig
    translates: tuple  # the L actually used
    ell0: int
    n: int


def build_instance(config: ShiftConfig) -> BuiltShift:
    """One event per core-window gamma over the configured universe."""
    ctx = config.ctx
    pattern = config.pattern
    d_set = pattern.support
    translates = (
        config.l_override
        if config.l_override is not None
        else select_l(ctx, config.f_set, d_set)
    )
    ell0 = compute_ell0(pattern.k, len(d_set))
    n = ell0 * len(d_set) ** 2
    if len(config.f_set) < n:
        log.warning(
            "|F| = %d < n = %d: the correctness hypothesis may fail",
            len(config.f_set),
            n,
        )
    if len(translates) < ell0:
        log.warning(
            "|L| = %d < ell0 = %d: instance may not be correct",
            len(translates),
            ell0,
        )
    universe_set = set(config.universe)
    events = []
    for gamma in config.core_window:
        ev = build_bad_event(ctx, gamma, translates, pattern)
        missing = [v for v in ev.domain if v not in universe_set]
        if missing:
            raise WindowError(
                f"universe too small: event at {gamma!r} needs {missing[:3]!r}..."
            )
        events.append(ev)
    inst = Instance(VariableUniverse(config.universe, pattern.k), events)
    return BuiltShift(inst, config, translates, ell0, n)


@dataclass
class BoundsReport:
    event_count: int
    d_size: int
    l_size: int
    k: int
    degree_bound: int
    max_degree: int
    closed_form_probability: Fraction
    ell0: int
    n: int
    hypothesis_met: bool  # |L| >= ell0
    product_lo: Fraction  # enclosure of e * closed_form * |D|^2 |L|^2
    product_hi: Fraction
    verdict: Verdict
    warnings: tuple


def check_instance_bounds(built: BuiltShift) -> BoundsReport:
    """Re-measure the built instance against its closed-form guarantees.

    Violations of the degree bound or of the probability closed form are
    construction bugs and raise; a translate set below ell0 merely breaks
    the hypothesis and is reported as a warning.
    """
    inst = built.instance
    d_size = len(built.config.pattern.support)
    l_size = len(built.translates)
    k = built.config.pattern.k
    degree_bound = d_size**2 * l_size**2 - 1
    closed = shrink_base(k, d_size) ** l_size
    warnings = []

    if inst.events and inst.d > degree_bound:
        raise BoundViolationError(
            f"measured degree {inst.d} exceeds |D|^2|L|^2 - 1 = {degree_bound}"
        )
    for i, ev in enumerate(inst.events):
        got = event_probability(ev, k)
        if got != closed:
            raise BoundViolationError(
                f"event {i} probability {got} != closed form {closed}"
            )

    hypothesis_met = l_size >= built.ell0
    q = closed * d_size**2 * l_size**2
    lo, hi = e_product_bounds(q)
    verdict = is_correct(inst)
    if hypothesis_met:
        if compare_e_product_to_one(q) != CERT_BELOW:
            raise BoundViolationError(
                f"|L| = {l_size} >= ell0 = {built.ell0} but the final product "
                f"is not certified < 1 (enclosure [{lo}, {hi}])"
            )
        if verdict is Verdict.INCORRECT:
            raise BoundViolationError(
                "correct-by-construction instance measured as incorrect"
            )
    else:
        warnings.append(
            f"|L| = {l_size} < ell0 = {built.ell0}; correctness not guaranteed"
        )
    if len(built.config.f_set) < built.n:
        warnings.append(f"|F| = {len(built.config.f_set)} < n = {built.n}")

    return BoundsReport(
        event_count=len(inst.events),
        d_size=d_size,
        l_size=l_size,
        k=k,
        degree_bound=degree_bound,
        max_degree=inst.d,
        closed_form_probability=closed,
        ell0=built.ell0,
        n=built.n,
        hypothesis_met=hypothesis_met,
        product_lo=lo,
        product_hi=hi,
        verdict=verdict,
        warnings=tuple(warnings),
    )


def is_trapped_at(
    ctx: GroupContext,
    x: Assignment,
    gamma: Element,
    translates: Sequence,
    pattern: Pattern,
):
    """Witness l with x(d * l^-1 * gamma) = phi(d) for all d, or None.

    A witness means the shifted configuration gamma.x lies in the
    l-translate of the pattern's cylinder.
    """
    for lam in translates:
        shift_by = ctx.multiply(ctx.inverse(lam), gamma)
        hit = True
        for d in pattern.support:
            pos = ctx.multiply(d, shift_by)
            try:
                val = x[pos]
            except KeyError:
                raise WindowError(
                    f"configuration not defined at {pos!r}; window too small"
                ) from None
            if val != pattern.values[d]:
                hit = False
                break
        if hit:
            return lam
    return None


@dataclass
class TrapReport:
    """Per-gamma trapping verdicts over a core window."""

    translates: tuple
    entries: tuple  # (gamma, witness-or-None) in core-window order

    @property
    def total(self) -> int:
        return len(self.entries)

    @property
    def trapped_count(self) -> int:
        return sum(1 for _, w in self.entries if w is not None)

    @property
    def all_trapped(self) -> bool:
        return self.trapped_count == self.total

    def untrapped(self) -> list:
        return [g for g, w in self.entries if w is None]


def verify_trapping(
    ctx: GroupContext,
    x: Assignment,
    translates: Sequence,
    pattern: Pattern,
    core_window: Sequence,
    instance: Optional[Instance] = None,
) -> TrapReport:
    """Trapping verdict at every core gamma, with witnesses.

    When the instance is supplied and ``x`` solves it, every gamma must be
    trapped; a counterexample would contradict the construction and raises.
    """
    translates = element_set(ctx, translates)
    entries = tuple(
        (gamma, is_trapped_at(ctx, x, gamma, translates, pattern))
        for gamma in core_window
    )
    report = TrapReport(translates, entries)
    if instance is not None and not verify_solution(instance, x):
        if not report.all_trapped:
            raise BoundViolationError(
                f"solution left {report.untrapped()[:3]!r} untrapped; "
                "event construction bug"
            )
    return report
