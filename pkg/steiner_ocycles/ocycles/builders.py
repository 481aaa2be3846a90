"""
Overlap cycle builders.

Each builder constructs a Steiner triple system together with a 1-overlap cycle
for it, and returns both as an OcycleCertificate whose provenance records the
construction tree. The builders work in steps: every step produces a few cycles
over a known family of blocks, and the families of all steps must partition the
block set of the constructed system. Cycles are connected with merge_all and
the single result is validated before it is returned.

Two dispatchers sit on top:

- ocycle_af(n): recursive 2v+1 / 2v+7 doubling from the automorphism-free
  base cases, chosen by n mod 12
- ocycle_any(n): Bose for n ≡ 3 (mod 6), Skolem for n ≡ 1 (mod 6)
"""

import logging
from contextlib import contextmanager
from dataclasses import dataclass
from math import gcd
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Set

from ..designs.base_cases import AF_BASE_ORDERS, Fano7Seed, base_case, default_fano_seed
from ..designs.constructions import (
    bose,
    direct_product,
    double_plus_one,
    double_plus_seven,
    skolem,
    skolem_op,
)
from ..designs.design_core import (
    Triple,
    TripleSystem,
    admissibility_rule,
    is_admissible,
    validate_sts,
)
from ..errors import CycleError, InadmissibleOrderError
from ..reports import Provenance
from .ocycle_core import (
    OrientedBlock,
    OverlapCycle,
    OverlapPath,
    close_path,
    cut_between,
    hidden_only_points,
    join_paths,
    junction_points,
    merge_all,
    reorient_end,
    reverse_cycle,
    splice_at,
    validate_ocycle,
)

logger = logging.getLogger(__name__)

BlockRule = Callable[[int], OrientedBlock]


@dataclass(frozen=True)
class DifferenceClass:
    """
    The blocks template(x), x in Z_modulus, of one difference d.

    Walking x -> x + step (step defaults to d) chains template(x) into
    template(x + step) and splits the class into gcd(step, modulus) cycles.
    """

    modulus: int
    d: int
    template: BlockRule
    step: Optional[int] = None

    def cycles(self) -> List[OverlapCycle]:
        return difference_class_cycles(self.modulus, self.d, self.template, self.step)


def difference_class_cycles(
    modulus: int, d: int, template: BlockRule, step: Optional[int] = None
) -> List[OverlapCycle]:
    """
    Split a difference class into its chains.

    Args:
        modulus: order of the cyclic group
        d: the difference, 1 <= d <= (modulus - 1) / 2
        template: block rule x -> OrientedBlock
        step: residue increment between consecutive blocks (default d)

    Returns:
        gcd(step, modulus) cycles, started at x0 = 0, 1, ... in that order

    Raises:
        CycleError: d out of range, or a template block that does not chain
            into its successor
    """
    if not 1 <= d <= (modulus - 1) // 2:
        raise CycleError(f"difference {d} is outside [1, {(modulus - 1) // 2}] for modulus {modulus}")
    step = d if step is None else step % modulus
    if step == 0:
        raise CycleError(f"step {step} does not move through Z_{modulus}")

    cycles = []
    for x0 in range(gcd(step, modulus)):
        blocks = []
        x = x0
        while True:
            block = template(x)
            nxt = (x + step) % modulus
            if block.tail != template(nxt).head:
                raise CycleError(f"template block at x={x} does not chain into x={nxt} (d={d})")
            blocks.append(block)
            x = nxt
            if x == x0:
                break
        cycles.append(OverlapCycle(tuple(blocks)))
    return cycles


@dataclass(frozen=True)
class OcycleCertificate:
    """A triple system, a verified overlap cycle for it, and how both were built."""

    ts: TripleSystem
    cycle: OverlapCycle
    provenance: Provenance

    @property
    def v(self) -> int:
        return self.ts.v


# Step bookkeeping


@contextmanager
def _step(name: str) -> Iterator[None]:
    """Attach the step name to a CycleError raised without one."""
    try:
        yield
    except CycleError as e:
        if e.step:
            raise
        raise CycleError(str(e), step=name, report=e.report) from e


class _StepLedger:
    """Records the blocks each step covers and checks they partition the design."""

    def __init__(self, construction: str, ts: TripleSystem):
        self.construction = construction
        self.ts = ts
        self.sizes: Dict[str, int] = {}
        self._owner: Dict[Triple, str] = {}

    def record(self, step: str, cycles: Sequence[OverlapCycle]) -> None:
        count = 0
        for cycle in cycles:
            for block in cycle:
                triple = block.triple
                if triple in self._owner:
                    raise CycleError(
                        f"block {tuple(triple)} already covered by {self._owner[triple]}",
                        step=f"{self.construction}:{step}",
                    )
                self._owner[triple] = step
                count += 1
        self.sizes[step] = self.sizes.get(step, 0) + count
        logger.debug(
            "step recorded",
            extra={"step": f"{self.construction}:{step}", "cycles": len(cycles), "blocks": count},
        )

    def check_partition(self) -> None:
        missing = [t for t in self.ts.blocks if t not in self._owner]
        if missing or len(self._owner) != self.ts.b:
            raise CycleError(
                f"steps cover {len(self._owner)} of {self.ts.b} blocks; first missing {missing[:1]}",
                step=f"{self.construction}:partition",
            )


def _require_junctions(cycle: OverlapCycle, points: Sequence[int], step: str) -> None:
    heads = junction_points(cycle)
    for p in points:
        if p not in heads:
            raise CycleError(f"point {p} is not an overlap point", step=step)


def _merge_into_one(
    cycles: Sequence[OverlapCycle], step: str, exclude: Sequence[int] = ()
) -> OverlapCycle:
    merged = merge_all(cycles, exclude)
    if len(merged) != 1:
        raise CycleError(f"{len(cycles)} cycles merged into {len(merged)}, expected 1", step=step)
    logger.debug("merged", extra={"step": step, "cycles": len(cycles), "blocks": len(merged[0])})
    return merged[0]


def certify(ts: TripleSystem, cycle: OverlapCycle, provenance: Provenance) -> OcycleCertificate:
    """
    Validate a design and its cycle, and wrap them in a certificate.

    Raises:
        CycleError: naming the construction, with the failing report attached.
    """
    sts_report = validate_sts(ts.v, ts.blocks)
    if not sts_report.ok:
        raise CycleError(
            f"design is not an STS({ts.v}): {sts_report.first_defect()}",
            step=provenance.construction,
            report=sts_report,
        )
    report = validate_ocycle(ts, cycle)
    if not report.ok:
        raise CycleError(
            f"cycle does not certify: {report.first_defect()}",
            step=provenance.construction,
            report=report,
        )
    return OcycleCertificate(ts, cycle, provenance)


def _position(cycle: OverlapCycle, triple: Triple) -> int:
    for i, block in enumerate(cycle):
        if block.triple == triple:
            return i
    raise CycleError(f"block {tuple(triple)} is not in the cycle")


def _lift(cycle: OverlapCycle, mapping: Callable[[int], int]) -> OverlapCycle:
    return OverlapCycle(
        tuple(OrientedBlock(mapping(b.head), mapping(b.hidden), mapping(b.tail)) for b in cycle)
    )


def _require_order(cert: OcycleCertificate, minimum: int, name: str) -> None:
    v = cert.ts.v
    if not is_admissible(v):
        raise InadmissibleOrderError(admissibility_rule(v))
    if v < minimum:
        raise InadmissibleOrderError(f"{name} needs an input of order >= {minimum}, got {v}")


# Base cases


def base_certificate(v: int, data_dir: Optional[Path] = None) -> OcycleCertificate:
    """Certificate for a shipped base case, using its listed cycle as is."""
    asset = base_case(v, data_dir)
    params = {"v": v}
    if asset.errata:
        params["errata"] = len(asset.errata)
    return certify(asset.parsed_sts, asset.cycle, Provenance(construction="base", params=params))


# Doubling


def ocycle_double_plus_one(cert: OcycleCertificate) -> OcycleCertificate:
    """
    Certificate for an STS(2v+1) built from one for an STS(v), v >= 7.

    Args:
        cert: certificate of the STS(v)

    Returns:
        Certificate whose provenance has tag "d2v1" and the input as its child.
    """
    _require_order(cert, 7, "ocycle_double_plus_one")
    v = cert.ts.v
    ts = double_plus_one(cert.ts)
    scheme = ts.scheme
    inv2 = (v + 1) // 2
    inf = scheme.infinity()
    ledger = _StepLedger("d2v1", ts)

    def p0(x: int) -> int:
        return scheme.pair(0, x)

    def p1(x: int) -> int:
        return scheme.pair(1, x)

    cycles: List[OverlapCycle] = []
    with _step("d2v1:lift"):
        lifted = _lift(cert.cycle, lambda p: v + p)
        ledger.record("lift", [lifted])
        cycles.append(lifted)

    with _step("d2v1:step2"):
        for d in range(1, (v - 1) // 2 + 1):
            if d == 2:
                continue
            rule = DifferenceClass(v, d, lambda x, d=d: OrientedBlock(p0(x), p1(x + d * inv2), p0(x + d)))
            chains = rule.cycles()
            ledger.record("step2", chains)
            cycles.extend(chains)

    with _step("d2v1:step3"):
        blocks: List[OrientedBlock] = []
        for x in range(v):
            blocks.append(OrientedBlock(p1(x + 1), p0(x), p0(x + 2)))
            blocks.append(OrientedBlock(p0(x + 2), inf, p1(x + 2)))
        paired = OverlapCycle(tuple(blocks))
        ledger.record("step3", [paired])
        cycles.append(paired)

    ledger.check_partition()
    cycle = _merge_into_one(cycles, "d2v1:merge")
    provenance = Provenance(
        construction="d2v1",
        params={"n": ts.v, "v": v, "steps": ledger.sizes},
        children=[cert.provenance],
    )
    return certify(ts, cycle, provenance)


def ocycle_double_plus_seven(
    cert: OcycleCertificate, seed: Optional[Fano7Seed] = None
) -> OcycleCertificate:
    """
    Certificate for an STS(2v+7) built from one for an STS(v), v >= 15.

    The STS(7) on ∞_-3..∞_3 comes from seed (the v=7 base case by default). If
    the seed carries no cycle, one is found by exhaustive search.
    """
    _require_order(cert, 15, "ocycle_double_plus_seven")
    if seed is None:
        seed = default_fano_seed()
    seed_cycle = seed.cycle
    if seed_cycle is None:
        from ..verify import exhaustive_ocycle_search

        seed_cycle = exhaustive_ocycle_search(seed.sts)
        if seed_cycle is None:
            raise CycleError("seed STS(7) has no overlap cycle", step="d2v7:seed")

    v = cert.ts.v
    ts = double_plus_seven(cert.ts, seed)
    scheme = ts.scheme
    ledger = _StepLedger("d2v7", ts)

    def p0(x: int) -> int:
        return scheme.pair(0, x)

    def p1(x: int) -> int:
        return scheme.pair(1, x)

    def inf(i: int) -> int:
        return scheme.infinity(i)

    cycles: List[OverlapCycle] = []
    with _step("d2v7:lift"):
        lifted = _lift(cert.cycle, lambda p: v + p)
        ledger.record("lift", [lifted])
        cycles.append(lifted)

    with _step("d2v7:step2"):
        chains = difference_class_cycles(v, 2, lambda x: OrientedBlock(p0(x), p0(x + 6), p0(x + 2)))
        ledger.record("step2", chains)
        cycles.extend(chains)

    with _step("d2v7:step3"):
        for y in range(5, (v - 1) // 2 + 1):
            chains = difference_class_cycles(
                v, y, lambda x, y=y: OrientedBlock(p0(x), p1(x + y), p0(x + 2 * y)), step=2 * y
            )
            ledger.record("step3", chains)
            cycles.extend(chains)

    with _step("d2v7:step4"):
        paired: List[OrientedBlock] = []
        for x in range(v):
            paired.append(OrientedBlock(p0(x), p0(x + 8), p1(x + 4)))
            paired.append(OrientedBlock(p1(x + 4), inf(-3), p0(x + 1)))
        step4 = OverlapCycle(tuple(paired))
        _require_junctions(step4, [p0(x) for x in range(v)] + [p1(x) for x in range(v)], "d2v7:step4")
        ledger.record("step4", [step4])

    with _step("d2v7:step5"):
        cut = 2 * (v - 8) + 1
        first = reorient_end(OverlapPath(tuple(paired[:cut])), "last")
        second = reorient_end(reorient_end(OverlapPath(tuple(paired[cut:])), "first"), "last")
        cycles.append(close_path(first))
        fano = _lift(seed_cycle, lambda label: inf(seed.relabel[label]))
        ledger.record("fano", [fano])
        cycles.append(splice_at(close_path(second), fano, inf(-3)))

    with _step("d2v7:step6"):
        for k in (-2, 0, 2):
            blocks: List[OrientedBlock] = []
            for x in range(v):
                blocks.append(OrientedBlock(p0(x), inf(-k), p1(x + k)))
                blocks.append(OrientedBlock(p1(x + k), inf(1 - k), p0(x + 1)))
            ring = OverlapCycle(tuple(blocks))
            ledger.record(f"step6[k={k}]", [ring])
            cycles.append(ring)

    ledger.check_partition()
    cycle = _merge_into_one(cycles, "d2v7:merge")
    provenance = Provenance(
        construction="d2v7",
        params={"n": ts.v, "v": v, "steps": ledger.sizes},
        children=[cert.provenance],
    )
    return certify(ts, cycle, provenance)


# Direct constructions


def ocycle_bose(m: int) -> OcycleCertificate:
    """
    Certificate for the Bose STS(3m), m odd and at least 3.

    The a=1 classes form one cycle. The a=2 classes are merged without using
    (2,1) as a splice point, then cut open into a path from (2,1) to (0,0).
    The type (2) blocks, paired with the a=0 distance-2 blocks, are merged with
    the remaining a=0 classes and the a=1 cycle while keeping (1,1) unspliced,
    then cut into a path from (0,0) to (2,1). Joining the two paths closes the
    cycle.
    """
    if m < 3 or m % 2 == 0:
        raise InadmissibleOrderError(f"ocycle_bose needs an odd m >= 3, got {m}")
    ts = bose(m)
    scheme = ts.scheme
    inv2 = (m + 1) // 2
    top = (m - 1) // 2
    # for m=3 the distance-2 blocks are the distance-1 blocks
    dist2 = min(2, m - 2)
    ledger = _StepLedger("bose", ts)

    def pt(a: int, i: int) -> int:
        return scheme.pair(a, i)

    def distance_class(a: int, d: int) -> List[OverlapCycle]:
        return difference_class_cycles(
            m, d, lambda i: OrientedBlock(pt(a, i), pt(a + 1, i + d * inv2), pt(a, i + d))
        )

    with _step("bose:step1"):
        ones: List[OverlapCycle] = []
        for d in range(1, top + 1):
            ones.extend(distance_class(1, d))
        ledger.record("step1", ones)
        backbone = _merge_into_one(ones, "bose:step1")

    with _step("bose:step2"):
        twos = distance_class(2, 1)
        if top >= 2:
            dist_two = distance_class(2, 2)[0]
            _require_junctions(dist_two, [pt(2, 0), pt(2, 1)], "bose:step2")
            twos = [splice_at(twos[0], dist_two, pt(2, 0))] + twos[1:]
        for d in range(3, top + 1):
            twos.extend(distance_class(2, d))
        ledger.record("step2", twos)
        ring = _merge_into_one(twos, "bose:step2", exclude=[pt(2, 1)])

        target = Triple.of(pt(2, 1), pt(2, -1), pt(0, 0))
        at = _position(ring, target)
        if ring[at].tail != pt(2, 1):
            ring = reverse_cycle(ring)
            at = _position(ring, target)
        left = reorient_end(cut_between(ring, at), "last")

    with _step("bose:step3"):
        blocks: List[OrientedBlock] = []
        for k in range(m):
            i = (1 + k) % m
            blocks.append(OrientedBlock(pt(0, i), pt(2, i), pt(1, i)))
            blocks.append(OrientedBlock(pt(1, i), pt(0, i - 1), pt(0, i + 1)))
        paired = OverlapCycle(tuple(blocks))
        ledger.record("step3", [paired])

    with _step("bose:step4"):
        zeros: List[OverlapCycle] = []
        for d in range(1, top + 1):
            if d != dist2:
                zeros.extend(distance_class(0, d))
        ledger.record("step4", zeros)
        ledger.check_partition()

        ring = _merge_into_one([paired] + zeros + [backbone], "bose:step4", exclude=[pt(1, 1)])
        y_block = OrientedBlock(pt(0, 1), pt(2, 1), pt(1, 1))
        at = next((i for i, b in enumerate(ring) if b == y_block), None)
        if at is None:
            raise CycleError(f"block {tuple(y_block)} lost its orientation while merging")
        after = ring[(at + 1) % len(ring)]
        if after.triple != Triple.of(pt(1, 1), pt(0, 0), pt(0, 2)):
            raise CycleError(f"block {tuple(y_block)} is followed by {tuple(after)}")
        right = reorient_end(reorient_end(cut_between(ring, at), "first"), "last")
        cycle = join_paths(left, right)

    provenance = Provenance(
        construction="bose", params={"n": ts.v, "m": m, "steps": ledger.sizes}
    )
    return certify(ts, cycle, provenance)


def ocycle_skolem(t: int) -> OcycleCertificate:
    """
    Certificate for the Skolem STS(6t+1), t >= 1.

    Distances 1..t-1 give one backbone per Z3 coordinate. Each x < t adds a
    seven-block cycle over A_x, the distance-t blocks and the C blocks of x,
    compressed x2 y2 ∞ y0 x0 x1 y1 with y = x + t. For t = 1 there is no
    backbone and that single cycle is the whole answer.
    """
    if t < 1:
        raise InadmissibleOrderError(f"ocycle_skolem needs t >= 1, got {t}")
    ts = skolem(t)
    scheme = ts.scheme
    modulus = 2 * t
    inf = scheme.infinity()
    ledger = _StepLedger("skolem", ts)

    def pt(x: int, i: int) -> int:
        return scheme.pair(i, x)

    def op(x: int, y: int) -> int:
        return skolem_op(x % modulus, y % modulus, t)

    cycles: List[OverlapCycle] = []
    with _step("skolem:step1"):
        for i in range(3):
            chains: List[OverlapCycle] = []
            for k in range(1, t):
                chains.extend(
                    difference_class_cycles(
                        modulus,
                        k,
                        lambda x, i=i, k=k: OrientedBlock(pt(x, i), pt(op(x, x + k), i + 1), pt(x + k, i)),
                    )
                )
            if chains:
                ledger.record("step1", chains)
                cycles.append(_merge_into_one(chains, f"skolem:step1[i={i}]"))

    with _step("skolem:step2"):
        for x in range(t):
            y = x + t
            z = op(x, y)
            mini = OverlapCycle(
                (
                    OrientedBlock(pt(x, 2), pt(z, 0), pt(y, 2)),
                    OrientedBlock(pt(y, 2), pt(x, 0), inf),
                    OrientedBlock(inf, pt(x, 1), pt(y, 0)),
                    OrientedBlock(pt(y, 0), pt(z, 1), pt(x, 0)),
                    OrientedBlock(pt(x, 0), pt(x, 2), pt(x, 1)),
                    OrientedBlock(pt(x, 1), pt(z, 2), pt(y, 1)),
                    OrientedBlock(pt(y, 1), inf, pt(x, 2)),
                )
            )
            ledger.record("step2", [mini])
            cycles.append(mini)

    ledger.check_partition()
    cycle = _merge_into_one(cycles, "skolem:merge")
    provenance = Provenance(
        construction="skolem", params={"n": ts.v, "t": t, "steps": ledger.sizes}
    )
    return certify(ts, cycle, provenance)


def ocycle_product(first: OcycleCertificate, second: OcycleCertificate) -> OcycleCertificate:
    """
    Certificate for the direct product of an STS(u) and an STS(w).

    Type (1) and (2) blocks come as lifted copies of the input cycles. Every
    pair of blocks adds a six-block cycle; a point of the first cycle that is
    never an overlap point is moved to the tail of the first block hiding it,
    so it becomes a junction of the six-block cycles built over that block.

    A block hides exactly one point, so each move touches a different block.

    Raises:
        CycleError: if a hidden-only point lies in no block of the cycle.
    """
    u, w = first.ts.v, second.ts.v
    ts = direct_product(first.ts, second.ts)
    scheme = ts.scheme
    ledger = _StepLedger("product", ts)

    def pt(i: int, a: int) -> int:
        return scheme.pair(i, a)

    cycles: List[OverlapCycle] = []
    with _step("product:type1"):
        copies = [_lift(second.cycle, lambda a, i=i: pt(i, a)) for i in range(u)]
        ledger.record("type1", copies)
        cycles.extend(copies)

    with _step("product:type2"):
        copies = [_lift(first.cycle, lambda i, a=a: pt(i, a)) for a in range(w)]
        ledger.record("type2", copies)
        cycles.extend(copies)

    with _step("product:fallback"):
        oriented = list(first.cycle.blocks)
        moved: Set[int] = set()
        for p in hidden_only_points(first.ts, first.cycle):
            at = next((i for i, b in enumerate(oriented) if b.hidden == p), None)
            if at is None:
                raise CycleError(f"point {p} lies in no block of the cycle")
            moved.add(at)
            h, x, t = oriented[at]
            oriented[at] = OrientedBlock(h, t, x)
        if moved:
            logger.debug("hidden points moved", extra={"step": "product:fallback", "blocks": len(moved)})

    with _step("product:type3"):
        for i, j, k in oriented:
            for a, b, c in second.cycle:
                six = OverlapCycle(
                    (
                        OrientedBlock(pt(i, a), pt(j, b), pt(k, c)),
                        OrientedBlock(pt(k, c), pt(j, a), pt(i, b)),
                        OrientedBlock(pt(i, b), pt(j, c), pt(k, a)),
                        OrientedBlock(pt(k, a), pt(j, b), pt(i, c)),
                        OrientedBlock(pt(i, c), pt(j, a), pt(k, b)),
                        OrientedBlock(pt(k, b), pt(j, c), pt(i, a)),
                    )
                )
                ledger.record("type3", [six])
                cycles.append(six)

    ledger.check_partition()
    cycle = _merge_into_one(cycles, "product:merge")
    provenance = Provenance(
        construction="product",
        params={"n": ts.v, "u": u, "w": w, "fallback_blocks": len(moved), "steps": ledger.sizes},
        children=[first.provenance, second.provenance],
    )
    return certify(ts, cycle, provenance)


# Dispatchers


def ocycle_af(
    n: int,
    memo: Optional[Dict[int, OcycleCertificate]] = None,
    data_dir: Optional[Path] = None,
) -> OcycleCertificate:
    """
    Certificate for an STS(n) on the automorphism-free route, n >= 15.

    Base cases are returned as shipped. Otherwise n mod 12 picks the step:
    1 or 9 -> 2v+7 with v = (n-7)/2, 3 or 7 -> 2v+1 with v = (n-1)/2.

    Args:
        n: admissible order, at least 15
        memo: certificates already built, keyed by order; filled in place
        data_dir: base-case asset directory; defaults to Settings.data_dir

    Raises:
        InadmissibleOrderError: if n is not admissible or below 15
    """
    if not is_admissible(n):
        raise InadmissibleOrderError(admissibility_rule(n))
    if n < 15:
        raise InadmissibleOrderError(f"the af route needs n >= 15, got {n}")
    if memo is None:
        memo = {}
    if n in memo:
        return memo[n]

    if n in AF_BASE_ORDERS:
        cert = base_certificate(n, data_dir)
    elif n % 12 in (1, 9):
        v = (n - 7) // 2
        logger.info("af route", extra={"n": n, "construction": "d2v7", "v": v})
        cert = ocycle_double_plus_seven(ocycle_af(v, memo, data_dir), default_fano_seed(data_dir))
    else:
        v = (n - 1) // 2
        logger.info("af route", extra={"n": n, "construction": "d2v1", "v": v})
        cert = ocycle_double_plus_one(ocycle_af(v, memo, data_dir))
    memo[n] = cert
    return cert


def ocycle_any(n: int) -> OcycleCertificate:
    """Certificate for some STS(n), n >= 7: Bose when n ≡ 3 (mod 6), Skolem otherwise."""
    if not is_admissible(n):
        raise InadmissibleOrderError(admissibility_rule(n))
    if n < 7:
        raise InadmissibleOrderError(f"the any route needs n >= 7, got {n}")
    if n % 6 == 3:
        logger.info("any route", extra={"n": n, "construction": "bose"})
        return ocycle_bose(n // 3)
    logger.info("any route", extra={"n": n, "construction": "skolem"})
    return ocycle_skolem((n - 1) // 6)
