"""
Overlap cycle data model and its splice/cut/reorient algebra.

A 1-overlap cycle lists every block of a triple system exactly once, each
written as (head, hidden, tail), so that one block's tail is the next block's
head. Dropping the hidden points gives the compressed form, a rank two universal
cycle: the triple system itself recovers each hidden point from its
two neighbours.

The operations here are the moves every cycle builder composes:

- splice_at joins two block-disjoint cycles at a shared junction point
- merge_all splices greedily until no two cycles share a junction
- cut_between and split_path open a cycle into paths
- reorient_end turns a path end's hidden point into its overlap point
- join_paths and close_path turn paths back into cycles
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Literal, NamedTuple, Optional, Sequence, Set, Tuple

from ..designs.design_core import Triple, TripleSystem
from ..errors import CycleError
from ..reports import ValidationReport

logger = logging.getLogger(__name__)


class OrientedBlock(NamedTuple):
    """A block written as (head, hidden, tail)."""

    head: int
    hidden: int
    tail: int

    @property
    def triple(self) -> Triple:
        return Triple.of(self.head, self.hidden, self.tail)

    def reversed(self) -> "OrientedBlock":
        return OrientedBlock(self.tail, self.hidden, self.head)

    def relabeled(self, mapping: Sequence[int]) -> "OrientedBlock":
        return OrientedBlock(mapping[self.head], mapping[self.hidden], mapping[self.tail])


@dataclass(frozen=True)
class OverlapCycle:
    """Cyclic sequence of oriented blocks. Chaining is checked by validate_ocycle."""

    blocks: Tuple[OrientedBlock, ...]

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[OrientedBlock]:
        return iter(self.blocks)

    def __getitem__(self, i: int) -> OrientedBlock:
        return self.blocks[i]

    def heads(self) -> Tuple[int, ...]:
        return tuple(b.head for b in self.blocks)

    def rotated(self, start: int) -> "OverlapCycle":
        return OverlapCycle(self.blocks[start:] + self.blocks[:start])


@dataclass(frozen=True)
class OverlapPath:
    """Open sequence of oriented blocks, chained without wraparound."""

    blocks: Tuple[OrientedBlock, ...]

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[OrientedBlock]:
        return iter(self.blocks)

    @property
    def start(self) -> int:
        return self.blocks[0].head

    @property
    def end(self) -> int:
        return self.blocks[-1].tail


@dataclass(frozen=True)
class CompressedCycle:
    """One point per block: the heads of an overlap cycle, no closing repeat."""

    points: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.points)

    def display(self) -> str:
        """The conventional display, with the first point repeated at the end."""
        if not self.points:
            return "()"
        return "(" + ",".join(str(p) for p in self.points + self.points[:1]) + ")"


def make_cycle(blocks: Iterable[Sequence[int]]) -> OverlapCycle:
    return OverlapCycle(tuple(OrientedBlock(*b) for b in blocks))


def make_path(blocks: Iterable[Sequence[int]]) -> OverlapPath:
    return OverlapPath(tuple(OrientedBlock(*b) for b in blocks))


# Validation


def validate_ocycle(ts: TripleSystem, cycle: OverlapCycle) -> ValidationReport:
    """
    Check chaining, block membership and exact coverage of a cycle.

    Args:
        ts: the triple system the cycle claims to list
        cycle: candidate overlap cycle

    Returns:
        ValidationReport listing every violation; never raises.
    """
    report = ValidationReport(subject=f"OCYCLE({ts.v})")
    n = len(cycle.blocks)
    seen: Dict[Triple, int] = {}
    chain_breaks = 0
    for i, block in enumerate(cycle.blocks):
        nxt = cycle.blocks[(i + 1) % n]
        if block.tail != nxt.head:
            chain_breaks += 1
            report.add(f"junction {i}: tail {block.tail} ≠ head {nxt.head} of block {(i + 1) % n}")
        if len({block.head, block.hidden, block.tail}) != 3:
            report.add(f"block {i} {tuple(block)} repeats a point")
            continue
        triple = block.triple
        if not _in_range(ts, triple) or ts.block_position(triple) is None:
            report.add(f"block {i} {tuple(block)} is not a block of STS({ts.v})")
            continue
        if triple in seen:
            report.add(f"block {i} {tuple(block)} repeats block {seen[triple]}")
            continue
        seen[triple] = i
    if len(seen) != ts.b:
        report.add(f"coverage: {len(seen)} of {ts.b} blocks")
    report.counts = {
        "v": ts.v,
        "blocks": n,
        "distinct_blocks": len(seen),
        "expected_blocks": ts.b,
        "chain_breaks": chain_breaks,
    }
    return report


def _in_range(ts: TripleSystem, triple: Triple) -> bool:
    return 0 <= triple.a and triple.c < ts.v


# Junction analysis


def junction_points(cycle: OverlapCycle) -> Set[int]:
    """Points that occur as an overlap (a block head) somewhere in the cycle."""
    return {b.head for b in cycle.blocks}


def junction_multiplicity(cycle: OverlapCycle) -> Counter:
    return Counter(b.head for b in cycle.blocks)


def hidden_only_points(ts: TripleSystem, cycle: OverlapCycle) -> List[int]:
    """Points of ts that never appear as an overlap in the cycle, ascending."""
    heads = junction_points(cycle)
    return [p for p in range(ts.v) if p not in heads]


# Splicing


def rotate_to(cycle: OverlapCycle, p: int) -> OverlapCycle:
    """Rotate so the cycle starts at its first block with head p."""
    for i, block in enumerate(cycle.blocks):
        if block.head == p:
            return cycle.rotated(i)
    raise CycleError(f"point {p} is not a junction of the cycle")


def splice_at(c1: OverlapCycle, c2: OverlapCycle, p: int) -> OverlapCycle:
    """
    Join two block-disjoint cycles at a junction point p shared by both.

    Both cycles are rotated to their first junction at p and concatenated, so
    every junction of either input survives.
    """
    shared = {b.triple for b in c1.blocks} & {b.triple for b in c2.blocks}
    if shared:
        raise CycleError(f"cannot splice cycles sharing block {sorted(shared)[0]}")
    return _concat_at(c1, c2, p)


def _concat_at(c1: OverlapCycle, c2: OverlapCycle, p: int) -> OverlapCycle:
    return OverlapCycle(rotate_to(c1, p).blocks + rotate_to(c2, p).blocks)


def merge_all(
    cycles: Sequence[OverlapCycle], exclude: Iterable[int] = ()
) -> List[OverlapCycle]:
    """
    Splice cycles until no two share a junction point.

    Junction points are visited in ascending label order; at each point every
    live cycle holding it is spliced, in creation order, into the earliest one.
    A single pass reaches the fixed point, since a merged cycle's junctions are
    the union of its parts.

    Args:
        cycles: pairwise block-disjoint cycles, in creation order
        exclude: points never used as splice points

    Returns:
        The surviving cycles in creation order.
    """
    live: Dict[int, OverlapCycle] = dict(enumerate(cycles))
    junctions: Dict[int, Set[int]] = {i: junction_points(c) for i, c in live.items()}
    banned = set(exclude)
    points = sorted(set().union(*junctions.values())) if junctions else []

    for p in points:
        if p in banned:
            continue
        holders = [i for i in sorted(live) if p in junctions[i]]
        if len(holders) < 2:
            continue
        base = holders[0]
        merged = live[base]
        for other in holders[1:]:
            merged = _concat_at(merged, live.pop(other), p)
            junctions[base] |= junctions.pop(other)
        live[base] = merged

    return [live[i] for i in sorted(live)]


# Paths


def cut_between(cycle: OverlapCycle, i: int) -> OverlapPath:
    """Open the cycle at the junction after block i: the path runs i+1, ..., i."""
    n = len(cycle.blocks)
    if not 0 <= i < n:
        raise CycleError(f"cut index {i} is outside [0, {n})")
    return OverlapPath(cycle.blocks[i + 1 :] + cycle.blocks[: i + 1])


def split_path(path: OverlapPath, k: int) -> Tuple[OverlapPath, OverlapPath]:
    """Split into blocks [0, k) and [k, len)."""
    if not 0 < k < len(path.blocks):
        raise CycleError(f"split index {k} leaves an empty path")
    return OverlapPath(path.blocks[:k]), OverlapPath(path.blocks[k:])


def reorient_end(path: OverlapPath, which: Literal["first", "last"]) -> OverlapPath:
    """
    Swap the overlap and hidden point at one end of a path.

    which="last": (h, x, t) -> (h, t, x), so the path now ends at x.
    which="first": (h, x, t) -> (x, h, t), so the path now starts at x.
    """
    if not path.blocks:
        raise CycleError("cannot reorient an empty path")
    blocks = list(path.blocks)
    if which == "last":
        h, x, t = blocks[-1]
        blocks[-1] = OrientedBlock(h, t, x)
    elif which == "first":
        h, x, t = blocks[0]
        blocks[0] = OrientedBlock(x, h, t)
    else:
        raise CycleError(f"which must be 'first' or 'last', got {which!r}")
    return OverlapPath(tuple(blocks))


def close_path(path: OverlapPath) -> OverlapCycle:
    if not path.blocks or path.start != path.end:
        raise CycleError("path does not start and end at the same point")
    return OverlapCycle(path.blocks)


def reverse_path(path: OverlapPath) -> OverlapPath:
    return OverlapPath(tuple(b.reversed() for b in reversed(path.blocks)))


def reverse_cycle(cycle: OverlapCycle) -> OverlapCycle:
    """Read the cycle backwards; each (h, x, t) becomes (t, x, h)."""
    return OverlapCycle(tuple(b.reversed() for b in reversed(cycle.blocks)))


def join_paths(first: OverlapPath, second: OverlapPath) -> OverlapCycle:
    """
    Close two paths into one cycle, reversing the second if its ends face the
    wrong way.
    """
    for candidate in (second, reverse_path(second)):
        if first.end == candidate.start and candidate.end == first.start:
            return OverlapCycle(first.blocks + candidate.blocks)
    raise CycleError(
        f"paths {first.start}->{first.end} and {second.start}->{second.end} do not close up"
    )


# Compression


def compress(cycle: OverlapCycle) -> CompressedCycle:
    return CompressedCycle(cycle.heads())


def decompress(ts: TripleSystem, cc: CompressedCycle) -> OverlapCycle:
    """
    Rebuild the full cycle from its heads, taking each hidden point from ts.

    Raises:
        CycleError: on a repeated consecutive point, or when the rebuilt cycle
            does not cover ts exactly once (the report is attached).
    """
    points = cc.points
    n = len(points)
    blocks: List[OrientedBlock] = []
    for i, p in enumerate(points):
        q = points[(i + 1) % n]
        if p == q:
            raise CycleError(f"repeated consecutive point {p} at position {i}")
        blocks.append(OrientedBlock(p, ts.third_point(p, q), q))
    cycle = OverlapCycle(tuple(blocks))
    report = validate_ocycle(ts, cycle)
    if not report.ok:
        raise CycleError(
            f"decompressed sequence is not an overlap cycle: {report.first_defect()}",
            report=report,
        )
    return cycle


def canonical_rotation(cycle: OverlapCycle) -> OverlapCycle:
    """The rotation whose compressed form is lexicographically least."""
    heads = cycle.heads()
    if not heads:
        return cycle
    best = min(range(len(heads)), key=lambda i: heads[i:] + heads[:i])
    return cycle.rotated(best)


def canonical_compressed(cc: CompressedCycle) -> CompressedCycle:
    pts = cc.points
    if not pts:
        return cc
    best = min(range(len(pts)), key=lambda i: pts[i:] + pts[:i])
    return CompressedCycle(pts[best:] + pts[:best])
