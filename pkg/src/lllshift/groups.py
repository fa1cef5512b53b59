"""Exact arithmetic for the supported group families.

Four families are implemented: integer lattices Z^d, finite products of
cyclic groups, free groups of finite rank, and arbitrary finite groups
given by a multiplication table. Elements are plain hashable Python
values (integer tuples, signed-generator tuples, or table indices); the
context object implements the operations on them. Contexts and elements
are immutable and every operation is a pure function, so all of this is
safe to share across threads.

Element sets are represented as duplicate-free tuples sorted by the
context's canonical order, which keeps downstream constructions
deterministic across runs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

Element = Union[tuple, int]
ElementSet = "tuple[Element, ...]"


class GroupError(ValueError):
    """Invalid element for a context, or an invalid group description."""


class GroupContext:
    """Base class for the group families. Subclasses implement the ops."""

    family: str = "?"

    def identity(self) -> Element:
        raise NotImplementedError

    def multiply(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def inverse(self, a: Element) -> Element:
        raise NotImplementedError

    def check(self, a: Element) -> Element:
        """Return ``a`` unchanged if it is a canonical element, else raise."""
        raise NotImplementedError

    def sort_key(self, a: Element):
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        raise NotImplementedError

    def elements(self) -> tuple:
        """All elements, canonically sorted. Finite families only."""
        raise GroupError(f"{self.family}: infinite family has no element list")

    def ball(self, radius: int) -> tuple:
        """Elements of norm <= radius; finite families return everything."""
        raise NotImplementedError

    def length(self, a: Element) -> int:
        """Word length / sup-norm used for window sizing (infinite families)."""
        raise GroupError(f"{self.family}: no length function")


@dataclass(frozen=True)
class IntegerLattice(GroupContext):
    """Z^dim under componentwise addition. Elements are int tuples."""

    dim: int
    family: str = field(default="lattice", init=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise GroupError("lattice dimension must be an integer >= 1")

    def identity(self):
        return (0,) * self.dim

    def multiply(self, a, b):
        self.check(a)
        self.check(b)
        return tuple(x + y for x, y in zip(a, b))

    def inverse(self, a):
        self.check(a)
        return tuple(-x for x in a)

    def check(self, a):
        if (
            not isinstance(a, tuple)
            or len(a) != self.dim
            or not all(isinstance(x, int) for x in a)
        ):
            raise GroupError(f"not a Z^{self.dim} element: {a!r}")
        return a

    def sort_key(self, a):
        return a

    @property
    def is_finite(self):
        return False

    def ball(self, radius):
        if radius < 0:
            raise GroupError("radius must be >= 0")
        rng = range(-radius, radius + 1)
        return tuple(itertools.product(rng, repeat=self.dim))

    def length(self, a):
        self.check(a)
        return max((abs(x) for x in a), default=0)


@dataclass(frozen=True)
class FiniteCyclicProduct(GroupContext):
    """Z_{m1} x ... x Z_{mr}; elements are residue tuples."""

    moduli: tuple
    family: str = field(default="cyclic", init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "moduli", tuple(self.moduli))
        if not self.moduli or any(
            not isinstance(m, int) or m < 2 for m in self.moduli
        ):
            raise GroupError("moduli must be a nonempty list of integers >= 2")

    @property
    def order(self) -> int:
        n = 1
        for m in self.moduli:
            n *= m
        return n

    def identity(self):
        return (0,) * len(self.moduli)

    def multiply(self, a, b):
        self.check(a)
        self.check(b)
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def inverse(self, a):
        self.check(a)
        return tuple((-x) % m for x, m in zip(a, self.moduli))

    def check(self, a):
        if (
            not isinstance(a, tuple)
            or len(a) != len(self.moduli)
            or not all(isinstance(x, int) and 0 <= x < m for x, m in zip(a, self.moduli))
        ):
            raise GroupError(f"not a residue vector mod {self.moduli}: {a!r}")
        return a

    def sort_key(self, a):
        return a

    @property
    def is_finite(self):
        return True

    def elements(self):
        return tuple(itertools.product(*(range(m) for m in self.moduli)))

    def ball(self, radius):
        return self.elements()


@dataclass(frozen=True)
class FreeGroup(GroupContext):
    """Free group of given rank. Elements are reduced words stored as
    tuples of nonzero signed generator indices (1 = g1, -1 = g1^-1, ...).
    Reduction happens eagerly on every multiply, so equal elements always
    compare equal as tuples."""

    rank: int
    family: str = field(default="free", init=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 1:
            raise GroupError("free-group rank must be an integer >= 1")

    def identity(self):
        return ()

    def multiply(self, a, b):
        self.check(a)
        self.check(b)
        i = len(a)
        j = 0
        while i > 0 and j < len(b) and a[i - 1] == -b[j]:
            i -= 1
            j += 1
        return a[:i] + b[j:]

    def inverse(self, a):
        self.check(a)
        return tuple(-g for g in reversed(a))

    def check(self, a):
        if not isinstance(a, tuple):
            raise GroupError(f"not a free-group word: {a!r}")
        for g in a:
            if not isinstance(g, int) or g == 0 or abs(g) > self.rank:
                raise GroupError(f"bad generator {g!r} for rank {self.rank}")
        for x, y in zip(a, a[1:]):
            if x == -y:
                raise GroupError(f"word not reduced: {a!r}")
        return a

    def sort_key(self, a):
        return (len(a), a)

    @property
    def is_finite(self):
        return False

    def ball(self, radius):
        if radius < 0:
            raise GroupError("radius must be >= 0")
        letters = [g for i in range(1, self.rank + 1) for g in (i, -i)]
        words = [()]
        level = [()]
        for _ in range(radius):
            nxt = []
            for w in level:
                for g in letters:
                    if w and w[-1] == -g:
                        continue
                    nxt.append(w + (g,))
            words.extend(nxt)
            level = nxt
        return tuple(sorted(words, key=self.sort_key))

    def length(self, a):
        self.check(a)
        return len(a)


@dataclass(frozen=True)
class FiniteTable(GroupContext):
    """A finite group given by its full multiplication table.

    Elements are indices 0..n-1. The table is validated exhaustively at
    construction (identity, inverses, associativity), so a non-group
    fails fast. Associativity is checked with one vectorized pass, O(n^3)
    space-light via int32; fine for desk-scale orders.
    """

    mul: tuple
    identity_index: int
    inverse_table: tuple = None
    family: str = field(default="table", init=False, repr=False)

    def __post_init__(self):
        mul = tuple(tuple(row) for row in self.mul)
        object.__setattr__(self, "mul", mul)
        n = len(mul)
        if n == 0:
            raise GroupError("empty multiplication table")
        for row in mul:
            if len(row) != n or any(
                not isinstance(x, int) or not 0 <= x < n for x in row
            ):
                raise GroupError("multiplication table is not a square over 0..n-1")
        e = self.identity_index
        if not isinstance(e, int) or not 0 <= e < n:
            raise GroupError("identity index out of range")
        for i in range(n):
            if mul[e][i] != i or mul[i][e] != i:
                raise GroupError(f"{e} is not an identity element")
        inv = self.inverse_table
        if inv is None:
            inv = []
            for i in range(n):
                js = [j for j in range(n) if mul[i][j] == e and mul[j][i] == e]
                if len(js) != 1:
                    raise GroupError(f"element {i} has no unique inverse")
                inv.append(js[0])
            inv = tuple(inv)
        else:
            inv = tuple(inv)
            if len(inv) != n or any(
                mul[i][inv[i]] != e or mul[inv[i]][i] != e for i in range(n)
            ):
                raise GroupError("inverse table inconsistent with multiplication")
        object.__setattr__(self, "inverse_table", inv)
        m = np.array(mul, dtype=np.int32)
        if not np.array_equal(m[m, :], m[:, m]):
            raise GroupError("multiplication table is not associative")

    @property
    def order(self) -> int:
        return len(self.mul)

    def identity(self):
        return self.identity_index

    def multiply(self, a, b):
        self.check(a)
        self.check(b)
        return self.mul[a][b]

    def inverse(self, a):
        self.check(a)
        return self.inverse_table[a]

    def check(self, a):
        if not isinstance(a, int) or not 0 <= a < len(self.mul):
            raise GroupError(f"not a table index in 0..{len(self.mul) - 1}: {a!r}")
        return a

    def sort_key(self, a):
        return a

    @property
    def is_finite(self):
        return True

    def elements(self):
        return tuple(range(len(self.mul)))

    def ball(self, radius):
        return self.elements()


def element_set(ctx: GroupContext, elems: Iterable[Element]) -> tuple:
    """Canonicalize an iterable of elements: validate, dedupe, sort."""
    seen = {ctx.check(a) for a in elems}
    return tuple(sorted(seen, key=ctx.sort_key))


def set_product(ctx: GroupContext, a_set: Sequence[Element], b_set: Sequence[Element]) -> tuple:
    """{a*b : a in A, b in B}, deduplicated and canonically sorted."""
    out = {ctx.multiply(a, b) for a in a_set for b in b_set}
    return tuple(sorted(out, key=ctx.sort_key))


def set_inverse(ctx: GroupContext, a_set: Sequence[Element]) -> tuple:
    """Elementwise inverses, canonically sorted. Same cardinality as input."""
    out = {ctx.inverse(a) for a in a_set}
    return tuple(sorted(out, key=ctx.sort_key))
