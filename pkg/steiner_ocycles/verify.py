"""
Independent checks that do not trust the builders.

automorphism_order counts the automorphisms of a triple system by
backtracking over point images. Points are first split into classes by an
invariant that every automorphism preserves: for each pair {p, q}, the blocks
through p or q (minus the one through both) form a 2-factor on the other v - 3
points, and the sorted cycle lengths of that 2-factor are the pair's invariant.
A point's class is the sorted multiset of its pair invariants. Every new image
is propagated through the third-point map, so most branches close after a few
choices.

exhaustive_ocycle_search is a brute-force oracle for tiny systems: a
depth-first search over block orders and overlap choices.
"""

import logging
import time
from typing import Dict, List, Optional, Tuple

from .config import get_settings
from .designs.design_core import TripleSystem
from .errors import DesignError
from .ocycles.ocycle_core import OrientedBlock, OverlapCycle, validate_ocycle
from .reports import AutomorphismReport

logger = logging.getLogger(__name__)

PairInvariant = Tuple[int, ...]


def pair_invariant(ts: TripleSystem, p: int, q: int) -> PairInvariant:
    """Sorted cycle lengths of the 2-factor spanned by p and q outside their block."""
    seen = {p, q, ts.third_point(p, q)}
    lengths = []
    for start in range(ts.v):
        if start in seen:
            continue
        length, current, use_p = 0, start, True
        while True:
            seen.add(current)
            current = ts.third_point(p if use_p else q, current)
            use_p = not use_p
            length += 1
            if current == start:
                break
        lengths.append(length)
    return tuple(sorted(lengths))


class _AutomorphismSearch:
    """Mutable state of one automorphism count."""

    def __init__(self, ts: TripleSystem, budget: int):
        self.ts = ts
        self.v = ts.v
        self.budget = budget
        self.nodes = 0
        self.count = 0
        self.witness: Optional[List[int]] = None
        self.exhausted = False
        self.image: List[int] = [-1] * self.v
        self.preimage: List[int] = [-1] * self.v

        self.pair_inv: Dict[Tuple[int, int], PairInvariant] = {}
        per_point: List[List[PairInvariant]] = [[] for _ in range(self.v)]
        for p in range(self.v):
            for q in range(p + 1, self.v):
                inv = pair_invariant(ts, p, q)
                self.pair_inv[(p, q)] = self.pair_inv[(q, p)] = inv
                per_point[p].append(inv)
                per_point[q].append(inv)
        self.point_class = [tuple(sorted(invs)) for invs in per_point]

    def run(self) -> None:
        if self.exhausted:
            return
        try:
            p = self.image.index(-1)
        except ValueError:
            self.count += 1
            if self.witness is None and any(q != i for i, q in enumerate(self.image)):
                self.witness = list(self.image)
            return

        for q in range(self.v):
            if self.preimage[q] >= 0 or self.point_class[q] != self.point_class[p]:
                continue
            undo: List[int] = []
            if self._assign(p, q, undo):
                self.run()
            for x in undo:
                self.preimage[self.image[x]] = -1
                self.image[x] = -1
            if self.exhausted:
                return

    def _set(self, a: int, b: int, undo: List[int], queue: List[int]) -> bool:
        self.nodes += 1
        if self.nodes > self.budget:
            self.exhausted = True
            return False
        if self.point_class[a] != self.point_class[b] or self.preimage[b] >= 0:
            return False
        self.image[a] = b
        self.preimage[b] = a
        undo.append(a)
        queue.append(a)
        return True

    def _assign(self, p: int, q: int, undo: List[int]) -> bool:
        """Map p to q and propagate; False on any contradiction."""
        done = [x for x in range(self.v) if self.image[x] >= 0]
        queue: List[int] = []
        if not self._set(p, q, undo, queue):
            return False
        third = self.ts.third_point
        while queue:
            a = queue.pop(0)
            fa = self.image[a]
            for c in done:
                fc = self.image[c]
                if self.pair_inv[(a, c)] != self.pair_inv[(fa, fc)]:
                    return False
                r, s = third(a, c), third(fa, fc)
                if self.image[r] < 0:
                    if not self._set(r, s, undo, queue):
                        return False
                elif self.image[r] != s:
                    return False
            done.append(a)
        return True


def automorphism_order(ts: TripleSystem, budget: Optional[int] = None) -> AutomorphismReport:
    """
    Count the automorphisms of ts.

    Args:
        ts: a valid triple system
        budget: node limit; defaults to Settings.af_budget

    Returns:
        AutomorphismReport. When budget_exhausted is set, order is the number
        of automorphisms found so far, a lower bound.
    """
    if budget is None:
        budget = get_settings().af_budget
    started = time.perf_counter()
    if ts.v <= 3:
        # every permutation of at most three points preserves the block set
        order = {1: 1, 3: 6}.get(ts.v, 1)
        witness = [1, 0, 2] if ts.v == 3 else None
        return AutomorphismReport(order=order, witness=witness, nodes=0, millis=0)

    search = _AutomorphismSearch(ts, budget)
    search.run()
    elapsed = int((time.perf_counter() - started) * 1000)
    logger.debug(
        "automorphism search finished",
        extra={"v": ts.v, "order": search.count, "nodes": search.nodes, "exhausted": search.exhausted},
    )
    return AutomorphismReport(
        order=search.count,
        witness=search.witness,
        nodes=search.nodes,
        millis=elapsed,
        budget_exhausted=search.exhausted,
    )


def is_af(ts: TripleSystem, budget: Optional[int] = None) -> Optional[bool]:
    """True if ts is automorphism free, False if not, None if the budget ran out first."""
    report = automorphism_order(ts, budget)
    if report.order_of_group > 1:
        return False
    if report.budget_exhausted:
        return None
    return True


def exhaustive_ocycle_search(ts: TripleSystem, limit: Optional[int] = None) -> Optional[OverlapCycle]:
    """
    Find an overlap cycle by depth-first search, or prove there is none.

    The first block is tried in all six orientations; afterwards each unused
    block through the current tail is tried with either remaining point hidden.

    Args:
        ts: a valid triple system
        limit: largest order searched; defaults to Settings.exhaustive_limit

    Returns:
        A cycle passing validate_ocycle, or None if no overlap cycle exists.

    Raises:
        DesignError: if ts.v exceeds the limit
    """
    if limit is None:
        limit = get_settings().exhaustive_limit
    if ts.v > limit:
        raise DesignError(f"exhaustive search is limited to v <= {limit}, got {ts.v}")
    if ts.b == 0:
        return None

    through: Dict[int, List[int]] = {p: [] for p in range(ts.v)}
    for i, t in enumerate(ts.blocks):
        for p in t:
            through[p].append(i)
    used = [False] * ts.b
    sequence: List[OrientedBlock] = []

    def extend(tail: int, start: int) -> bool:
        if len(sequence) == ts.b:
            return tail == start
        for i in through[tail]:
            if used[i]:
                continue
            y, z = [p for p in ts.blocks[i] if p != tail]
            for hidden, nxt in ((y, z), (z, y)):
                used[i] = True
                sequence.append(OrientedBlock(tail, hidden, nxt))
                if extend(nxt, start):
                    return True
                sequence.pop()
                used[i] = False
        return False

    a, b, c = ts.blocks[0]
    for head, hidden, tail in ((a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)):
        used[0] = True
        sequence.append(OrientedBlock(head, hidden, tail))
        if extend(tail, head):
            cycle = OverlapCycle(tuple(sequence))
            if not validate_ocycle(ts, cycle).ok:
                raise DesignError(f"exhaustive search produced an invalid cycle for STS({ts.v})")
            return cycle
        sequence.pop()
        used[0] = False
    return None
