"""
Steiner triple system constructions.

Five classical constructions, each returning a TripleSystem labelled by a
documented CosetScheme:

- bose(m): STS(3m) on Z3 x Zm, m odd
- skolem(t): STS(6t+1) on (Z_2t x Z3) ∪ {∞}
- direct_product(A, B): STS(uw) on the product of the point sets
- double_plus_one(A): STS(2v+1) on (Z2 x Zv) ∪ {∞}
- double_plus_seven(A, seed): STS(2v+7) on (Z2 x Zv) ∪ {∞_-3, ..., ∞_3}

Block lists keep construction order (type by type) because the overlap cycle
builders rely on it. Every result goes through make_triple_system, so a wrong
formula fails loudly instead of producing a broken design.
"""

import logging
from typing import TYPE_CHECKING, List, Optional, Tuple

from ..errors import DesignError, InadmissibleOrderError
from .design_core import (
    Triple,
    TripleSystem,
    admissibility_rule,
    bose_scheme,
    doubling_scheme,
    is_admissible,
    make_triple_system,
    product_scheme,
    seven_scheme,
    skolem_scheme,
)

if TYPE_CHECKING:
    from .base_cases import Fano7Seed

logger = logging.getLogger(__name__)

# (x, y, z) index patterns for the six bijection blocks of a product, in the
# order abc, bac, bca, cba, cab, acb.
PRODUCT_ASSIGNMENTS: Tuple[Tuple[int, int, int], ...] = (
    (0, 1, 2),
    (1, 0, 2),
    (1, 2, 0),
    (2, 1, 0),
    (2, 0, 1),
    (0, 2, 1),
)


def trivial_system(v: int) -> TripleSystem:
    """The degenerate systems: STS(1) has no blocks, STS(3) has one."""
    if v == 1:
        return make_triple_system(1, [])
    if v == 3:
        return make_triple_system(3, [(0, 1, 2)])
    raise DesignError(f"no degenerate triple system of order {v}")


def bose(m: int) -> TripleSystem:
    """
    Bose construction of an STS(3m).

    Args:
        m: odd integer, at least 3

    Returns:
        TripleSystem labelled (a, i) -> a*m + i with type (1) blocks
        {(a,i),(a,j),(a+1,k)}, i+j ≡ 2k, followed by the m type (2) blocks
        {(0,i),(1,i),(2,i)}.
    """
    if m < 3 or m % 2 == 0:
        raise InadmissibleOrderError(f"bose needs an odd m >= 3, got {m}")
    scheme = bose_scheme(m)
    inv2 = (m + 1) // 2
    blocks: List[Tuple[int, int, int]] = []
    for a in range(3):
        for i in range(m):
            for j in range(i + 1, m):
                k = (i + j) * inv2
                blocks.append((scheme.pair(a, i), scheme.pair(a, j), scheme.pair(a + 1, k)))
    for i in range(m):
        blocks.append((scheme.pair(0, i), scheme.pair(1, i), scheme.pair(2, i)))
    return make_triple_system(3 * m, blocks, scheme)


def skolem_pi(z: int, t: int) -> int:
    """π(z) = z/2 for even z, (z + 2t - 1)/2 for odd z; a bijection of Z_2t."""
    return z // 2 if z % 2 == 0 else (z + 2 * t - 1) // 2


def skolem_op(x: int, y: int, t: int) -> int:
    """
    The half-idempotent commutative quasigroup x∘y = π(x + y mod 2t):
    x∘x = (x+t)∘(x+t) = x for x < t.
    """
    return skolem_pi((x + y) % (2 * t), t)


def skolem(t: int) -> TripleSystem:
    """
    Skolem construction of an STS(6t+1).

    Points (x, i) of Z_2t x Z3 are labelled i*2t + x, and ∞ is 6t. Blocks are
    A_x for x < t, then B_{x,y,i} for x < y, then C_{x,i} for x < t.
    """
    if t < 1:
        raise InadmissibleOrderError(f"skolem needs t >= 1, got {t}")
    scheme = skolem_scheme(t)
    inf = scheme.infinity()
    n2 = 2 * t

    def pt(x: int, i: int) -> int:
        return scheme.pair(i, x)

    blocks: List[Tuple[int, int, int]] = []
    for x in range(t):
        blocks.append((pt(x, 0), pt(x, 1), pt(x, 2)))
    for i in range(3):
        for x in range(n2):
            for y in range(x + 1, n2):
                blocks.append((pt(x, i), pt(y, i), pt(skolem_op(x, y, t), i + 1)))
    for i in range(3):
        for x in range(t):
            blocks.append((inf, pt(x + t, i), pt(x, i + 1)))
    return make_triple_system(6 * t + 1, blocks, scheme)


def direct_product(first: TripleSystem, second: TripleSystem) -> TripleSystem:
    """
    Direct product of an STS(u) and an STS(w), an STS(uw).

    Point (i, a) is labelled i*w + a. The result holds u copies of the second
    system, then w copies of the first, then six blocks for every pair of blocks.
    """
    u, w = first.v, second.v
    scheme = product_scheme(u, w)
    blocks: List[Tuple[int, int, int]] = []
    for i in range(u):
        for t in second.blocks:
            blocks.append((scheme.pair(i, t.a), scheme.pair(i, t.b), scheme.pair(i, t.c)))
    for a in range(w):
        for t in first.blocks:
            blocks.append((scheme.pair(t.a, a), scheme.pair(t.b, a), scheme.pair(t.c, a)))
    for ta in first.blocks:
        for tb in second.blocks:
            for x, y, z in PRODUCT_ASSIGNMENTS:
                blocks.append(
                    (
                        scheme.pair(ta.a, tb[x]),
                        scheme.pair(ta.b, tb[y]),
                        scheme.pair(ta.c, tb[z]),
                    )
                )
    expected = u * second.b + w * first.b + 6 * first.b * second.b
    if len(blocks) != expected:
        raise DesignError(f"product produced {len(blocks)} blocks, expected {expected}")
    return make_triple_system(u * w, blocks, scheme)


def _check_input(ts: TripleSystem, minimum: int, name: str) -> None:
    if not is_admissible(ts.v):
        raise InadmissibleOrderError(admissibility_rule(ts.v))
    if ts.v < minimum:
        raise InadmissibleOrderError(f"{name} needs an input of order >= {minimum}, got {ts.v}")


def double_plus_one(source: TripleSystem) -> TripleSystem:
    """
    Build an STS(2v+1) from an STS(v).

    Blocks: {1}⊕A (type 1), {(0,x),(0,y),(1,(x+y)/2)} for x < y (type 2),
    {(0,x),(1,x),∞} (type 3). AF is preserved when the input is AF and v >= 15;
    the construction itself works for any admissible v >= 3.
    """
    _check_input(source, 3, "double_plus_one")
    v = source.v
    scheme = doubling_scheme(v)
    inv2 = (v + 1) // 2
    inf = scheme.infinity()
    blocks: List[Tuple[int, int, int]] = []
    for t in source.blocks:
        blocks.append((v + t.a, v + t.b, v + t.c))
    for x in range(v):
        for y in range(x + 1, v):
            blocks.append((x, y, scheme.pair(1, (x + y) * inv2)))
    for x in range(v):
        blocks.append((x, v + x, inf))
    return make_triple_system(2 * v + 1, blocks, scheme)


def seven_y_values(v: int) -> List[int]:
    """
    The y of the {(0,x),(1,x+y),(0,x+2y)} blocks: centered representatives with
    |y| > 3, i.e. ±4, ..., ±(v-1)/2, positive before negative.
    """
    ys: List[int] = []
    for y in range(4, (v - 1) // 2 + 1):
        ys.extend((y, -y))
    return ys


def double_plus_seven(source: TripleSystem, seed: Optional["Fano7Seed"] = None) -> TripleSystem:
    """
    Build an STS(2v+7) from an STS(v) and a fixed STS(7) on the infinite points.

    Type (4) is generated over every y of seven_y_values and x in Zv; a block
    reached from both (x, y) and (x+2y, -y) is kept once.

    Args:
        source: the STS(v)
        seed: the STS(7) on ∞_-3..∞_3; defaults to the v=7 base case

    Returns:
        TripleSystem labelled by seven_scheme(v).
    """
    _check_input(source, 7, "double_plus_seven")
    if seed is None:
        from .base_cases import default_fano_seed

        seed = default_fano_seed()
    v = source.v
    scheme = seven_scheme(v)

    def p0(x: int) -> int:
        return scheme.pair(0, x)

    def p1(x: int) -> int:
        return scheme.pair(1, x)

    def inf(label: int) -> int:
        return scheme.infinity(seed.relabel[label])

    blocks: List[Tuple[int, int, int]] = []
    for t in source.blocks:
        blocks.append((v + t.a, v + t.b, v + t.c))
    for t in seed.sts.blocks:
        blocks.append((inf(t.a), inf(t.b), inf(t.c)))
    for x in range(v):
        blocks.append((p0(x), p0(x + 2), p0(x + 6)))

    seen = set()
    for y in seven_y_values(v):
        for x in range(v):
            triple = Triple.of(p0(x), p1(x + y), p0(x + 2 * y))
            if triple not in seen:
                seen.add(triple)
                blocks.append((p0(x), p1(x + y), p0(x + 2 * y)))

    for i in range(-3, 4):
        for j in range(v):
            blocks.append((scheme.infinity(i), p1(j), p0(i + j)))

    try:
        return make_triple_system(2 * v + 7, blocks, scheme)
    except DesignError as e:
        logger.error("2v+7 construction failed its STS gate", extra={"v": v})
        raise DesignError(f"double_plus_seven(v={v}) rejected: {e}", e.report) from e
