"""Variable-framework LLL instances.

An instance is a family of bad events over a shared universe of
variables with a common alphabet {0..k-1}. A bad event is a set of
forbidden assignments to one finite domain, stored either explicitly
(the forbidden rows) or implicitly (a membership predicate plus the
exact forbidden count, from which the exact rational probability
follows). An assignment avoids an event if its restriction to the
event's domain is not forbidden; a solution avoids every event.

All probability arithmetic is exact (fractions.Fraction); the
correctness test e * p * (d+1) < 1 is decided against a rational
enclosure of e, so verdicts are certified rather than floating-point
guesses.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .certify import Verdict, correctness_verdict

Token = Hashable
Assignment = Mapping[Token, int]


class InstanceError(ValueError):
    """Malformed universe, event, or instance."""


class VariableUniverse:
    """Ordered, duplicate-free variable identifiers plus the alphabet size."""

    __slots__ = ("variables", "k", "_index")

    def __init__(self, variables: Iterable[Token], k: int):
        self.variables = tuple(variables)
        if not isinstance(k, int) or k < 1:
            raise InstanceError("alphabet size k must be an integer >= 1")
        self.k = k
        self._index = {v: i for i, v in enumerate(self.variables)}
        if len(self._index) != len(self.variables):
            raise InstanceError("duplicate variable identifiers")

    def position(self, v: Token) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise InstanceError(f"unknown variable: {v!r}") from None

    def __contains__(self, v: Token) -> bool:
        return v in self._index

    def __len__(self) -> int:
        return len(self.variables)

    def __iter__(self):
        return iter(self.variables)

    def __eq__(self, other):
        return (
            isinstance(other, VariableUniverse)
            and self.variables == other.variables
            and self.k == other.k
        )

    def __repr__(self):
        return f"VariableUniverse({len(self.variables)} vars, k={self.k})"


class Explicit:
    """Event body listing every forbidden row, aligned with the domain order."""

    __slots__ = ("forbidden", "forbidden_set")

    def __init__(self, forbidden: Iterable[Sequence[int]]):
        rows = [tuple(row) for row in forbidden]
        for row in rows:
            if not all(isinstance(v, int) and v >= 0 for v in row):
                raise InstanceError(f"forbidden row has non-symbol entries: {row!r}")
        if len(set(rows)) != len(rows):
            raise InstanceError("duplicate forbidden rows")
        self.forbidden = tuple(sorted(rows))
        self.forbidden_set = frozenset(rows)

    def __eq__(self, other):
        return isinstance(other, Explicit) and self.forbidden == other.forbidden

    def __repr__(self):
        return f"Explicit({len(self.forbidden)} rows)"


class Implicit:
    """Event body given by a membership predicate plus exact counts.

    ``predicate(values)`` receives the restriction of an assignment to
    the event's domain (a tuple in domain order) and returns True iff
    that restriction is forbidden. ``count`` is the exact number of
    forbidden rows and must satisfy probability == count / k^{|domain|};
    the instance enforces that identity.
    """

    __slots__ = ("predicate", "probability", "count")

    def __init__(self, predicate: Callable[[tuple], bool], probability: Fraction, count: int):
        if not isinstance(count, int) or count < 0:
            raise InstanceError("forbidden count must be a nonnegative integer")
        self.predicate = predicate
        self.probability = Fraction(probability)
        self.count = count

    def __repr__(self):
        return f"Implicit(count={self.count}, p={self.probability})"


class BlockImplicit(Implicit):
    """Implicit body structured as disjoint equal-size (variable, symbol)
    blocks: a row is forbidden iff every block has at least one mismatch.

    This is the shape that translated-pattern events take; storing the
    blocks keeps the body enumerable-free, serializable, and lowerable to
    the compiled solver kernel.
    """

    __slots__ = ("blocks",)

    def __init__(self, domain: Sequence[Token], blocks, k: int):
        blocks = tuple(tuple((v, int(s)) for v, s in blk) for blk in blocks)
        if not blocks or any(not blk for blk in blocks):
            raise InstanceError("blocks must be nonempty")
        sizes = {len(blk) for blk in blocks}
        if len(sizes) != 1:
            raise InstanceError("blocks must all have the same size")
        bsize = sizes.pop()
        positions = [v for blk in blocks for v, _ in blk]
        if len(set(positions)) != len(positions):
            raise InstanceError("blocks must use pairwise-distinct variables")
        if set(positions) != set(domain) or len(domain) != len(positions):
            raise InstanceError("blocks must cover the event domain exactly")
        if any(not 0 <= s < k for blk in blocks for _, s in blk):
            raise InstanceError(f"block symbols must lie in [0, {k})")
        pos = {v: i for i, v in enumerate(domain)}
        idx_blocks = tuple(
            tuple((pos[v], s) for v, s in blk) for blk in blocks
        )

        def predicate(values: tuple) -> bool:
            return all(
                any(values[i] != s for i, s in blk) for blk in idx_blocks
            )

        count = (k**bsize - 1) ** len(blocks)
        probability = Fraction(count, k ** (bsize * len(blocks)))
        super().__init__(predicate, probability, count)
        self.blocks = blocks

    def __eq__(self, other):
        return (
            isinstance(other, BlockImplicit)
            and self.blocks == other.blocks
            and self.count == other.count
        )

    def __repr__(self):
        return f"BlockImplicit({len(self.blocks)} blocks, p={self.probability})"


class BadEvent:
    """A finite domain plus its forbidden-assignment body."""

    __slots__ = ("domain", "body")

    def __init__(self, domain: Sequence[Token], body):
        domain = tuple(domain)
        if len(set(domain)) != len(domain):
            raise InstanceError("event domain has duplicate variables")
        if isinstance(body, Explicit):
            for row in body.forbidden:
                if len(row) != len(domain):
                    raise InstanceError(
                        f"forbidden row width {len(row)} != domain size {len(domain)}"
                    )
            if not body.forbidden and domain:
                # the only event with an empty body is the empty bad event
                raise InstanceError("empty forbidden list requires an empty domain")
        elif not isinstance(body, Implicit):
            raise InstanceError(f"unsupported event body: {body!r}")
        self.domain = domain
        self.body = body

    def __eq__(self, other):
        return (
            isinstance(other, BadEvent)
            and self.domain == other.domain
            and self.body == other.body
        )

    def __repr__(self):
        return f"BadEvent(domain={list(self.domain)!r}, body={self.body!r})"


def block_miss_event(domain: Sequence[Token], blocks, k: int) -> BadEvent:
    """Event forbidding every row in which each block mismatches somewhere."""
    return BadEvent(domain, BlockImplicit(tuple(domain), blocks, k))


def event_probability(event: BadEvent, k: int) -> Fraction:
    """Exact probability |body| / k^{|domain|} of drawing a forbidden row."""
    total = k ** len(event.domain)
    if isinstance(event.body, Explicit):
        return Fraction(len(event.body.forbidden), total)
    stored = event.body.probability
    if stored != Fraction(event.body.count, total):
        raise InstanceError(
            f"implicit probability {stored} != count/k^|D| = "
            f"{Fraction(event.body.count, total)}"
        )
    return stored


def avoids(f: Assignment, event: BadEvent) -> bool:
    """True iff the restriction of ``f`` to the event domain is not forbidden."""
    restriction = tuple(f[v] for v in event.domain)
    if isinstance(event.body, Explicit):
        return restriction not in event.body.forbidden_set
    return not event.body.predicate(restriction)


class Instance:
    """A family of bad events over one universe, with precomputed stats.

    ``p`` is the maximum event probability (exact rational, 0 when there
    are no events); ``d`` is the maximum degree, where two events are
    neighbors when their domains intersect.
    """

    def __init__(self, universe: VariableUniverse, events: Iterable[BadEvent]):
        self.universe = universe
        self.events = tuple(events)
        k = universe.k
        for ev in self.events:
            total = k ** len(ev.domain)
            if isinstance(ev.body, Explicit):
                for row in ev.body.forbidden:
                    if any(v >= k for v in row):
                        raise InstanceError(f"forbidden symbol >= k in {row!r}")
            else:
                if ev.body.count > total:
                    raise InstanceError("implicit count exceeds k^|D|")
                event_probability(ev, k)  # enforces the probability identity
            for v in ev.domain:
                universe.position(v)  # unknown variables raise here

        var_events: list[list[int]] = [[] for _ in range(len(universe))]
        for ei, ev in enumerate(self.events):
            for v in ev.domain:
                var_events[universe.position(v)].append(ei)
        self._var_events = var_events

        stamp = [-1] * len(self.events)
        degrees = []
        for ei, ev in enumerate(self.events):
            deg = 0
            for v in ev.domain:
                for ej in var_events[universe.position(v)]:
                    if ej != ei and stamp[ej] != ei:
                        stamp[ej] = ei
                        deg += 1
            degrees.append(deg)
        self.degrees = tuple(degrees)
        self.d = max(degrees, default=0)
        self.p = max(
            (event_probability(ev, k) for ev in self.events),
            default=Fraction(0),
        )

    def __eq__(self, other):
        return (
            isinstance(other, Instance)
            and self.universe == other.universe
            and self.events == other.events
        )

    def __repr__(self):
        return (
            f"Instance({len(self.events)} events over {len(self.universe)} vars, "
            f"k={self.universe.k}, p={self.p}, d={self.d})"
        )


def neighborhood(inst: Instance, index: int) -> tuple:
    """Indices of the other events whose domains intersect event ``index``."""
    if not 0 <= index < len(inst.events):
        raise InstanceError(f"event index out of range: {index}")
    out = set()
    for v in inst.events[index].domain:
        out.update(inst._var_events[inst.universe.position(v)])
    out.discard(index)
    return tuple(sorted(out))


def is_correct(inst: Instance) -> Verdict:
    """Certified verdict of the correctness criterion e * p * (d+1) < 1."""
    return correctness_verdict(inst.p * (inst.d + 1))


def verify_solution(inst: Instance, f: Assignment) -> list:
    """Indices of the events ``f`` fails to avoid; empty iff f is a solution."""
    return [i for i, ev in enumerate(inst.events) if not avoids(f, ev)]


def enumerate_forbidden(event: BadEvent, k: int, cap: int = 2**24) -> list:
    """All forbidden rows of an event by exhaustive enumeration.

    Independent of the stored counts, so it doubles as an oracle for
    implicit bodies; guarded because the row space has k^{|domain|} entries.
    """
    total = k ** len(event.domain)
    if total > cap:
        raise InstanceError(f"enumeration space {total} exceeds cap {cap}")
    if isinstance(event.body, Explicit):
        member = event.body.forbidden_set.__contains__
    else:
        member = event.body.predicate
    return [
        row
        for row in itertools.product(range(k), repeat=len(event.domain))
        if member(row)
    ]


def materialize_explicit(event: BadEvent, k: int, cap: int = 2**24) -> BadEvent:
    """Explicit twin of an event, built by enumeration (size-guarded)."""
    return BadEvent(event.domain, Explicit(enumerate_forbidden(event, k, cap)))
