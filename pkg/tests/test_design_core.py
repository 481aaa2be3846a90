"""
Tests for points, triples, label schemes and the STS gate.

Covers admissibility, the pair index, every defect class validate_sts reports
and the DesignError raised by make_triple_system.
"""

import pytest

from steiner_ocycles.designs.design_core import (
    CosetScheme,
    Infinity,
    Pair,
    PlainInt,
    PlainScheme,
    Triple,
    admissibility_rule,
    block_of_pair,
    canonical_label,
    doubling_scheme,
    is_admissible,
    make_triple_system,
    seven_scheme,
    validate_sts,
)
from steiner_ocycles.errors import DesignError

from .conftest import FANO_BLOCKS


class TestAdmissibility:
    """Test suite for the v ≡ 1, 3 (mod 6) rule."""

    @pytest.mark.parametrize("v", [1, 3, 7, 9, 13, 15, 19, 21, 99])
    def test_admissible_orders(self, v):
        """Test orders congruent to 1 or 3 mod 6 are admissible."""
        assert is_admissible(v)

    @pytest.mark.parametrize("v", [0, 2, 5, 11, 17, 23, -5])
    def test_inadmissible_orders(self, v):
        """Test every other order is rejected."""
        assert not is_admissible(v)

    def test_rule_message(self):
        """Test the rule is quoted the way the CLI reports it."""
        assert admissibility_rule(11) == "11 ≢ 1,3 (mod 6)"


class TestTriple:
    """Test suite for the unordered block type."""

    def test_of_sorts(self):
        """Test Triple.of stores points ascending."""
        assert Triple.of(5, 0, 3) == Triple(0, 3, 5)

    def test_of_rejects_repeats(self):
        """Test a repeated point is refused."""
        with pytest.raises(DesignError):
            Triple.of(2, 2, 4)

    def test_third_and_pairs(self):
        """Test the third point and the three pair keys."""
        t = Triple(1, 4, 6)
        assert t.third(6, 1) == 4
        assert t.pairs() == ((1, 4), (1, 6), (4, 6))


class TestLabelSchemes:
    """Test suite for structured point labels."""

    def test_doubling_scheme(self):
        """Test (Z2 x Zv) ∪ {∞} labels for v = 15."""
        scheme = doubling_scheme(15)
        assert scheme.order == 31
        assert scheme.pair(1, 17) == 17
        assert scheme.infinity() == 30
        assert scheme.origin(30) == Infinity(0)

    def test_seven_scheme_infinities(self):
        """Test ∞_-3..∞_3 sit after the two cosets."""
        scheme = seven_scheme(15)
        assert scheme.order == 37
        assert scheme.infinity(-3) == 30
        assert scheme.infinity(3) == 36
        assert scheme.origin(33) == Infinity(0)

    def test_round_trip_over_domain(self):
        """Test label(origin(l)) == l for every label."""
        scheme = CosetScheme("test", 3, 5, infinities=2, first_infinity=1)
        assert [scheme.label(o) for o in scheme.domain()] == list(range(17))

    @pytest.mark.parametrize("scheme", [doubling_scheme(15), seven_scheme(15), PlainScheme(7)])
    def test_canonical_label_is_a_bijection(self, scheme):
        """Test canonical_label numbers the whole domain 0..order-1 and inverts through origin."""
        origins = list(scheme.domain())
        labels = [canonical_label(o, scheme) for o in origins]
        assert sorted(labels) == list(range(scheme.order))
        assert [scheme.origin(label) for label in labels] == origins

    def test_canonical_label_doubling_and_seven(self):
        """Test the fixed labels of the 2v+1 and 2v+7 schemes for v = 15."""
        doubling = doubling_scheme(15)
        assert canonical_label(Pair(0, 4), doubling) == 4
        assert canonical_label(Pair(1, 4), doubling) == 19
        assert canonical_label(Infinity(0), doubling) == 30
        seven = seven_scheme(15)
        assert [canonical_label(Infinity(i), seven) for i in range(-3, 4)] == list(range(30, 37))
        with pytest.raises(DesignError):
            canonical_label(Infinity(4), seven)

    def test_out_of_scheme_origin(self):
        """Test origins outside the scheme are rejected."""
        with pytest.raises(DesignError):
            doubling_scheme(7).label(Pair(2, 0))
        with pytest.raises(DesignError):
            PlainScheme(7).label(PlainInt(7))


class TestTripleSystem:
    """Test suite for TripleSystem and make_triple_system."""

    def setup_method(self):
        """Set up the Fano plane."""
        self.ts = make_triple_system(7, FANO_BLOCKS)

    def test_counts(self):
        """Test b and the replication number of STS(7)."""
        assert self.ts.b == 7
        assert self.ts.replication() == 3

    def test_block_order_is_kept(self):
        """Test blocks keep construction order."""
        assert self.ts.blocks[4] == Triple(0, 4, 5)

    def test_block_of_pair(self):
        """Test every pair finds its block."""
        assert self.ts.block_of_pair(0, 1) == Triple(0, 1, 3)
        assert block_of_pair(self.ts, 6, 2) == Triple(0, 2, 6)
        assert self.ts.third_point(4, 3) == 6

    def test_block_of_pair_rejects_bad_input(self):
        """Test equal or out-of-range points raise."""
        with pytest.raises(DesignError):
            self.ts.block_of_pair(3, 3)
        with pytest.raises(DesignError):
            self.ts.block_of_pair(0, 7)

    def test_block_position(self):
        """Test membership lookup for blocks and non-blocks."""
        assert self.ts.block_position(Triple(1, 5, 6)) == 5
        assert self.ts.block_position(Triple(0, 1, 2)) is None

    def test_relabeled_is_valid(self):
        """Test relabeling by a permutation gives another STS(7)."""
        relabeled = self.ts.relabeled([3, 0, 6, 1, 5, 2, 4])
        assert relabeled.v == 7
        assert validate_sts(7, relabeled.blocks).ok

    def test_pair_index_is_read_only(self):
        """Test the pair index cannot be changed after construction."""
        with pytest.raises(TypeError):
            self.ts.pair_index[(0, 1)] = 3
        assert self.ts.block_of_pair(0, 1) == Triple(0, 1, 3)

    def test_trivial_orders(self):
        """Test STS(1) and STS(3)."""
        assert make_triple_system(1, []).b == 0
        assert make_triple_system(3, [(2, 0, 1)]).blocks == (Triple(0, 1, 2),)


class TestValidateSts:
    """Test suite for the non-raising validator."""

    def test_clean_report(self):
        """Test a valid design yields ok and the expected counts."""
        report = validate_sts(7, FANO_BLOCKS)
        assert report.ok
        assert report.defects == []
        assert report.counts["blocks"] == 7

    def test_doubly_covered_pairs(self):
        """Test replacing one block reports double cover, uncovered pairs and degrees."""
        blocks = FANO_BLOCKS[:6] + [(0, 1, 6)]
        report = validate_sts(7, blocks)
        assert not report.ok
        assert "pair {0,1} covered twice (block 6)" in report.defects
        assert "pair {1,6} covered twice (block 6)" in report.defects
        assert "pair {0,2} uncovered" in report.defects
        assert "pair {2,6} uncovered" in report.defects
        assert "point 2 lies in 2 blocks, expected 3" in report.defects
        assert report.counts["doubly_covered_pairs"] == 2
        assert report.counts["uncovered_pairs"] == 2

    def test_wrong_block_count(self):
        """Test a missing block is reported by count."""
        report = validate_sts(7, FANO_BLOCKS[:6])
        assert "block count 6 ≠ 7" in report.defects

    def test_inadmissible_order(self):
        """Test the admissibility rule appears as a defect."""
        report = validate_sts(11, [])
        assert not report.ok
        assert report.defects[0] == "11 ≢ 1,3 (mod 6)"

    def test_malformed_blocks(self):
        """Test repeated points and out-of-range labels."""
        report = validate_sts(7, [(0, 0, 1), (0, 1, 9)] + FANO_BLOCKS)
        assert any("does not have three distinct points" in d for d in report.defects)
        assert any("out-of-range label 9" in d for d in report.defects)

    def test_make_triple_system_raises_with_report(self):
        """Test the gate raises DesignError carrying the report."""
        with pytest.raises(DesignError) as excinfo:
            make_triple_system(7, FANO_BLOCKS[:6] + [(0, 1, 6)])
        assert excinfo.value.report is not None
        assert "not an STS(7)" in str(excinfo.value)
        assert isinstance(excinfo.value, ValueError)
