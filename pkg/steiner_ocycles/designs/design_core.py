"""
Points, triples and Steiner triple systems.

A TripleSystem is an order v together with its block list and a pair index that
maps every unordered pair of points to the position of the single block holding
it. make_triple_system is the gate every construction passes through: it either
returns a system with all STS invariants in place or raises DesignError with a
ValidationReport naming the first offending pair or block.

Points are plain integer labels 0..v-1. Constructions that work with structured
points (pairs over a cyclic group, infinite points) describe the bijection with a
LabelScheme, so a label can always be traced back to its origin.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from types import MappingProxyType
from typing import (
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from ..errors import DesignError
from ..reports import ValidationReport

logger = logging.getLogger(__name__)

PairKey = Tuple[int, int]


def is_admissible(v: int) -> bool:
    """True when an STS(v) exists, i.e. v ≡ 1, 3 (mod 6)."""
    return v >= 1 and v % 6 in (1, 3)


def admissibility_rule(v: int) -> str:
    return f"{v} ≢ 1,3 (mod 6)"


def pair_key(p: int, q: int) -> PairKey:
    return (p, q) if p < q else (q, p)


# Point origins


@dataclass(frozen=True)
class PlainInt:
    z: int


@dataclass(frozen=True)
class Pair:
    coset: int
    residue: int


@dataclass(frozen=True)
class Infinity:
    index: int = 0


Origin = Union[PlainInt, Pair, Infinity]


@dataclass(frozen=True)
class Point:
    """A design point: its label and, when known, the structured name it came from."""

    label: int
    origin: Optional[Origin] = None


class Triple(NamedTuple):
    """An unordered block, stored ascending."""

    a: int
    b: int
    c: int

    @classmethod
    def of(cls, p: int, q: int, r: int) -> "Triple":
        x, y, z = sorted((p, q, r))
        if x == y or y == z:
            raise DesignError(f"block ({p},{q},{r}) repeats a point")
        return cls(x, y, z)

    def third(self, p: int, q: int) -> int:
        """The point of the block that is neither p nor q."""
        for x in self:
            if x != p and x != q:
                return x
        raise DesignError(f"block {set(self)} has no third point for {p},{q}")

    def pairs(self) -> Tuple[PairKey, PairKey, PairKey]:
        return ((self.a, self.b), (self.a, self.c), (self.b, self.c))


# Label schemes


class LabelScheme:
    """Base class for a fixed bijection between structured origins and labels."""

    order: int = 0

    def label(self, origin: Origin) -> int:
        raise NotImplementedError

    def origin(self, label: int) -> Origin:
        raise NotImplementedError

    def domain(self) -> Iterator[Origin]:
        for label in range(self.order):
            yield self.origin(label)


class PlainScheme(LabelScheme):
    """Identity labelling: PlainInt(z) ↔ z."""

    def __init__(self, order: int):
        self.order = order

    def label(self, origin: Origin) -> int:
        if not isinstance(origin, PlainInt) or not 0 <= origin.z < self.order:
            raise DesignError(f"{origin} is outside the plain scheme of order {self.order}")
        return origin.z

    def origin(self, label: int) -> Origin:
        if not 0 <= label < self.order:
            raise DesignError(f"label {label} is outside [0, {self.order})")
        return PlainInt(label)


class CosetScheme(LabelScheme):
    """
    Labels for points (c, x) with c a coset index and x a residue, plus a run of
    infinite points appended after the last coset.

    Pair(c, x) -> c*modulus + x, and Infinity(i) -> cosets*modulus + (i - first_infinity).
    """

    def __init__(
        self,
        name: str,
        cosets: int,
        modulus: int,
        infinities: int = 0,
        first_infinity: int = 0,
    ):
        self.name = name
        self.cosets = cosets
        self.modulus = modulus
        self.infinities = infinities
        self.first_infinity = first_infinity
        self.order = cosets * modulus + infinities

    def label(self, origin: Origin) -> int:
        if isinstance(origin, Pair):
            if 0 <= origin.coset < self.cosets and 0 <= origin.residue < self.modulus:
                return origin.coset * self.modulus + origin.residue
        elif isinstance(origin, Infinity):
            offset = origin.index - self.first_infinity
            if 0 <= offset < self.infinities:
                return self.cosets * self.modulus + offset
        raise DesignError(f"{origin} is outside the {self.name} scheme")

    def origin(self, label: int) -> Origin:
        if not 0 <= label < self.order:
            raise DesignError(f"label {label} is outside the {self.name} scheme")
        if label < self.cosets * self.modulus:
            return Pair(label // self.modulus, label % self.modulus)
        return Infinity(label - self.cosets * self.modulus + self.first_infinity)

    def pair(self, coset: int, residue: int) -> int:
        """Label of (coset, residue), reducing the residue mod the modulus."""
        return (coset % self.cosets) * self.modulus + residue % self.modulus

    def infinity(self, index: int = 0) -> int:
        return self.label(Infinity(index))


def doubling_scheme(v: int) -> CosetScheme:
    """(Z2 x Zv) ∪ {∞} for the 2v+1 construction."""
    return CosetScheme("2v+1", 2, v, infinities=1)


def seven_scheme(v: int) -> CosetScheme:
    """(Z2 x Zv) ∪ {∞_i : |i| <= 3} for the 2v+7 construction."""
    return CosetScheme("2v+7", 2, v, infinities=7, first_infinity=-3)


def bose_scheme(m: int) -> CosetScheme:
    return CosetScheme("bose", 3, m)


def skolem_scheme(t: int) -> CosetScheme:
    """Pair(i, x) is the point (x, i) of Z_2t x Z3; the coset is the Z3 coordinate."""
    return CosetScheme("skolem", 3, 2 * t, infinities=1)


def product_scheme(u: int, w: int) -> CosetScheme:
    return CosetScheme("product", u, w)


def canonical_label(origin: Origin, scheme: LabelScheme) -> int:
    """Flat label of a structured point; raises DesignError outside the scheme's domain."""
    return scheme.label(origin)


# Triple systems


class TripleSystem:
    """
    An immutable Steiner triple system.

    Build instances with make_triple_system; the constructor trusts its inputs.
    """

    __slots__ = ("v", "blocks", "pair_index", "scheme")

    def __init__(
        self,
        v: int,
        blocks: Tuple[Triple, ...],
        pair_index: Mapping[PairKey, int],
        scheme: Optional[LabelScheme] = None,
    ):
        self.v = v
        self.blocks = blocks
        self.pair_index: Mapping[PairKey, int] = MappingProxyType(dict(pair_index))
        self.scheme = scheme

    @property
    def b(self) -> int:
        return len(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.blocks)

    def __repr__(self) -> str:
        return f"TripleSystem(v={self.v}, b={self.b})"

    def block_of_pair(self, p: int, q: int) -> Triple:
        if p == q:
            raise DesignError(f"block_of_pair needs two distinct points, got {p} twice")
        if not (0 <= p < self.v and 0 <= q < self.v):
            raise DesignError(f"pair ({p},{q}) is outside [0, {self.v})")
        return self.blocks[self.pair_index[pair_key(p, q)]]

    def third_point(self, p: int, q: int) -> int:
        return self.block_of_pair(p, q).third(p, q)

    def block_position(self, triple: Triple) -> Optional[int]:
        """Position of triple in the block list, or None if it is not a block."""
        pos = self.pair_index.get((triple.a, triple.b))
        if pos is None or self.blocks[pos] != triple:
            return None
        return pos

    def point(self, label: int) -> Point:
        origin = self.scheme.origin(label) if self.scheme is not None else None
        return Point(label, origin)

    def replication(self) -> int:
        return (self.v - 1) // 2

    def relabeled(self, perm: Sequence[int]) -> "TripleSystem":
        """The isomorphic system obtained by sending point p to perm[p]."""
        return make_triple_system(
            self.v, [Triple.of(perm[t.a], perm[t.b], perm[t.c]) for t in self.blocks]
        )


def _inspect(
    v: int, blocks: Iterable[Sequence[int]]
) -> Tuple[ValidationReport, List[Triple], Dict[PairKey, int]]:
    report = ValidationReport(subject=f"STS({v})")
    triples: List[Triple] = []
    index: Dict[PairKey, int] = {}
    cover: Counter = Counter()
    degree: Counter = Counter()

    if v < 1:
        report.add(f"order {v} must be at least 1")
    elif not is_admissible(v):
        report.add(admissibility_rule(v))

    for pos, raw in enumerate(blocks):
        pts = tuple(raw)
        if len(pts) != 3 or len(set(pts)) != 3:
            report.add(f"block {pos} {pts} does not have three distinct points")
            continue
        bad = [p for p in pts if not 0 <= p < v]
        if bad:
            report.add(f"block {pos} {pts} has out-of-range label {bad[0]}")
            continue
        triple = Triple.of(*pts)
        triples.append(triple)
        for p in triple:
            degree[p] += 1
        for key in triple.pairs():
            cover[key] += 1
            if cover[key] == 1:
                index[key] = len(triples) - 1
            elif cover[key] == 2:
                report.add(f"pair {{{key[0]},{key[1]}}} covered twice (block {pos})")

    expected = v * (v - 1) // 6 if v >= 1 else 0
    if len(triples) != expected:
        report.add(f"block count {len(triples)} ≠ {expected}")

    uncovered = 0
    for p in range(max(v, 0)):
        for q in range(p + 1, v):
            if (p, q) not in cover:
                uncovered += 1
                report.add(f"pair {{{p},{q}}} uncovered")

    deviations = 0
    if v >= 1 and v % 2 == 1:
        r = (v - 1) // 2
        for p in range(v):
            if degree[p] != r:
                deviations += 1
                report.add(f"point {p} lies in {degree[p]} blocks, expected {r}")

    report.counts = {
        "v": v,
        "blocks": len(triples),
        "expected_blocks": expected,
        "uncovered_pairs": uncovered,
        "doubly_covered_pairs": sum(1 for k in cover.values() if k > 1),
        "replication_deviations": deviations,
    }
    return report, triples, index


def validate_sts(v: int, blocks: Iterable[Sequence[int]]) -> ValidationReport:
    """
    Check a block list against every STS invariant without raising.

    Args:
        v: claimed order
        blocks: block list, each block any 3-element sequence of labels

    Returns:
        ValidationReport; ok is True iff make_triple_system would accept the input.
    """
    report, _, _ = _inspect(v, blocks)
    return report


def make_triple_system(
    v: int, blocks: Iterable[Sequence[int]], scheme: Optional[LabelScheme] = None
) -> TripleSystem:
    """
    Build a TripleSystem, keeping the construction's block order.

    Raises:
        DesignError: carrying the ValidationReport, message naming the first defect.
    """
    report, triples, index = _inspect(v, blocks)
    if not report.ok:
        raise DesignError(
            f"not an STS({v}): {report.first_defect()} ({report.defect_total} defects)",
            report,
        )
    logger.debug("built triple system", extra={"v": v, "blocks": len(triples)})
    return TripleSystem(v, tuple(triples), index, scheme)


def block_of_pair(ts: TripleSystem, p: int, q: int) -> Triple:
    return ts.block_of_pair(p, q)
