"""Separated subsets via collision graphs and greedy independent sets.

A subset L is left D-separated when the translates D*l, l in L, are
pairwise disjoint (right T-separated: l*T pairwise disjoint). Such
subsets are extracted greedily from the collision graph on F, whose
edges join elements with overlapping translates; since every vertex has
at most |D|^2 - 1 neighbors, the greedy set has size >= |F|/|D|^2.

Every extraction re-verifies its own output by direct set arithmetic
(translate disjointness and the size bound), so a bug in the graph or
the greedy order cannot slip through silently.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .groups import GroupContext, element_set, set_inverse, set_product


class SeparationError(ValueError):
    """Empty inputs, or an internal guarantee failed its re-check."""


@dataclass(frozen=True)
class CollisionGraph:
    """Symmetric, irreflexive adjacency over a canonical vertex tuple."""

    vertices: tuple
    adjacency: tuple  # adjacency[i] = sorted tuple of neighbor indices
    max_degree: int

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])


def collision_graph(
    ctx: GroupContext, f_set: Sequence, d_set: Sequence, side: str = "left"
) -> CollisionGraph:
    """Graph on F joining elements whose D-translates overlap.

    side="left": s ~ s' iff D*s and D*s' intersect, i.e. s' in D^-1*D*s.
    side="right": s ~ s' iff s*T and s'*T intersect, i.e. s' in s*T*T^-1.
    """
    if side not in ("left", "right"):
        raise SeparationError(f"side must be 'left' or 'right', got {side!r}")
    f_set = element_set(ctx, f_set)
    d_set = element_set(ctx, d_set)
    if not f_set or not d_set:
        raise SeparationError("F and D must be nonempty")
    if side == "left":
        diffs = set_product(ctx, set_inverse(ctx, d_set), d_set)
    else:
        diffs = set_product(ctx, d_set, set_inverse(ctx, d_set))
    pos = {v: i for i, v in enumerate(f_set)}
    adjacency = []
    for i, s in enumerate(f_set):
        nbrs = set()
        for q in diffs:
            cand = ctx.multiply(q, s) if side == "left" else ctx.multiply(s, q)
            j = pos.get(cand)
            if j is not None and j != i:
                nbrs.add(j)
        adjacency.append(tuple(sorted(nbrs)))
    max_degree = max((len(a) for a in adjacency), default=0)
    bound = len(d_set) ** 2 - 1
    if max_degree > bound:
        raise SeparationError(
            f"degree {max_degree} exceeds |D|^2 - 1 = {bound}; graph construction bug"
        )
    return CollisionGraph(f_set, tuple(adjacency), max_degree)


def greedy_independent_set(g: CollisionGraph) -> tuple:
    """Take vertices in ascending canonical order, deleting each closed
    neighborhood; guaranteed size >= ceil(|V|/(max_degree+1))."""
    n = len(g.vertices)
    alive = [True] * n
    picked = []
    for i in range(n):
        if not alive[i]:
            continue
        picked.append(i)
        for j in g.adjacency[i]:
            alive[j] = False
    for i in picked:
        if any(j in picked for j in g.adjacency[i]):
            raise SeparationError("greedy produced a dependent set")
    needed = -(-n // (g.max_degree + 1))  # ceil
    if n and len(picked) < needed:
        raise SeparationError(
            f"greedy returned {len(picked)} < |V|/(maxdeg+1) = {needed}"
        )
    return tuple(g.vertices[i] for i in picked)


def translates_pairwise_disjoint(
    ctx: GroupContext, subset: Sequence, d_set: Sequence, side: str = "left"
) -> bool:
    """Exact disjointness check: the union of |subset| translates of size
    |D| has full cardinality iff no two translates overlap."""
    subset = element_set(ctx, subset)
    d_set = element_set(ctx, d_set)
    if side == "left":
        union = set_product(ctx, d_set, subset)
    else:
        union = set_product(ctx, subset, d_set)
    return len(union) == len(subset) * len(d_set)


def _separated_subset(ctx, f_set, d_set, side: str) -> tuple:
    g = collision_graph(ctx, f_set, d_set, side)
    out = greedy_independent_set(g)
    if not translates_pairwise_disjoint(ctx, out, element_set(ctx, d_set), side):
        raise SeparationError("translate overlap in greedy output; adjacency bug")
    if len(out) * len(element_set(ctx, d_set)) ** 2 < len(g.vertices):
        raise SeparationError("size guarantee |L| >= |F|/|D|^2 violated")
    return out


def left_separated_subset(ctx: GroupContext, f_set: Sequence, d_set: Sequence) -> tuple:
    """L subset of F with D*l1, D*l2 disjoint for distinct l1, l2; |L| >= |F|/|D|^2."""
    return _separated_subset(ctx, f_set, d_set, "left")


def right_separated_subset(ctx: GroupContext, f_set: Sequence, t_set: Sequence) -> tuple:
    """L subset of F with l1*T, l2*T disjoint for distinct l1, l2; |L| >= |F|/|T|^2."""
    return _separated_subset(ctx, f_set, t_set, "right")
