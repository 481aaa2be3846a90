"""
Tests for the independent checkers: automorphism counting and exhaustive search.
"""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steiner_ocycles.designs.base_cases import base_case
from steiner_ocycles.designs.constructions import (
    bose,
    direct_product,
    double_plus_one,
    skolem,
    trivial_system,
)
from steiner_ocycles.designs.design_core import Triple
from steiner_ocycles.errors import DesignError
from steiner_ocycles.ocycles.ocycle_core import validate_ocycle
from steiner_ocycles.verify import automorphism_order, exhaustive_ocycle_search, is_af, pair_invariant


def _preserves_blocks(ts, perm):
    return {Triple.of(perm[t.a], perm[t.b], perm[t.c]) for t in ts.blocks} == set(ts.blocks)


class TestPairInvariant:
    """Test suite for the 2-factor cycle type of a pair."""

    def test_fano(self, fano):
        """Test every pair of STS(7) spans one 4-cycle."""
        assert {pair_invariant(fano, p, q) for p in range(7) for q in range(p + 1, 7)} == {(4,)}

    def test_lengths_add_up(self):
        """Test the cycle lengths cover the v - 3 points off the pair's block."""
        ts = base_case(15).parsed_sts
        assert sum(pair_invariant(ts, 0, 1)) == 12


class TestAutomorphismOrder:
    """Test suite for automorphism_order and is_af."""

    @pytest.mark.parametrize(
        "build, order",
        [
            (lambda: base_case(7).parsed_sts, 168),
            (lambda: bose(3), 432),
            (lambda: skolem(2), 39),
            (lambda: bose(5), 60),
        ],
    )
    def test_known_orders(self, build, order):
        """Test group orders of classical systems."""
        report = automorphism_order(build())
        assert report.order_of_group == order
        assert report.conclusive

    def test_witness_is_an_automorphism(self, fano):
        """Test the sample non-identity map preserves the block set."""
        report = automorphism_order(fano)
        assert report.sample_nonidentity is not None
        assert report.sample_nonidentity != list(range(7))
        assert _preserves_blocks(fano, report.sample_nonidentity)

    @pytest.mark.parametrize("v", [15, 19, 27, 33])
    def test_af_base_cases(self, v):
        """Test the automorphism-free base cases have a trivial group."""
        ts = base_case(v).parsed_sts
        report = automorphism_order(ts)
        assert report.order_of_group == 1
        assert report.sample_nonidentity is None
        assert is_af(ts) is True

    @pytest.mark.parametrize("v", [21, 25])
    def test_base_cases_with_a_residue_shift(self, v):
        """Test the corrected 21 and 25 listings are fixed by an order-3 shift."""
        ts = base_case(v).parsed_sts
        report = automorphism_order(ts)
        assert report.order_of_group == 3
        assert _preserves_blocks(ts, report.sample_nonidentity)
        assert is_af(ts) is False

    def test_doubling_keeps_af(self):
        """Test 2v+1 over an AF STS(15) is again AF."""
        ts = double_plus_one(base_case(15).parsed_sts)
        assert automorphism_order(ts).order_of_group == 1

    def test_small_orders(self):
        """Test STS(1) and STS(3)."""
        assert automorphism_order(trivial_system(1)).order_of_group == 1
        report = automorphism_order(trivial_system(3))
        assert report.order_of_group == 6
        assert report.sample_nonidentity == [1, 0, 2]

    def test_budget_exhausted(self):
        """Test a tiny budget leaves the answer open."""
        ts = base_case(15).parsed_sts
        report = automorphism_order(ts, budget=5)
        assert report.budget_exhausted
        assert not report.conclusive
        assert is_af(ts, budget=5) is None

    def test_report_json_uses_short_names(self, fano):
        """Test the serialized report."""
        payload = json.loads(automorphism_order(fano).to_json())
        assert payload["order"] == 168
        assert "witness" in payload
        assert "millis" in payload

    @settings(max_examples=25, deadline=None)
    @given(data=st.data())
    def test_order_is_invariant_under_relabeling(self, data):
        """Test a random relabeling leaves the group order unchanged."""
        ts, order = data.draw(
            st.sampled_from([(base_case(7).parsed_sts, 168), (bose(5), 60), (base_case(15).parsed_sts, 1)])
        )
        perm = data.draw(st.permutations(range(ts.v)))
        assert automorphism_order(ts.relabeled(perm)).order_of_group == order

    @pytest.mark.slow
    def test_product_order(self, fano):
        """Test STS(3) x STS(7) has 1008 automorphisms."""
        ts = direct_product(trivial_system(3), fano)
        assert automorphism_order(ts).order_of_group == 1008


class TestExhaustiveSearch:
    """Test suite for the brute-force cycle search."""

    def test_finds_fano_cycle(self, fano):
        """Test STS(7) has an overlap cycle."""
        cycle = exhaustive_ocycle_search(fano)
        assert cycle is not None
        assert validate_ocycle(fano, cycle).ok

    def test_finds_nine(self):
        """Test STS(9) has an overlap cycle."""
        ts = bose(3)
        cycle = exhaustive_ocycle_search(ts)
        assert cycle is not None
        assert len(cycle) == 12

    @pytest.mark.parametrize("v", [1, 3])
    def test_degenerate_orders(self, v):
        """Test STS(1) and STS(3) have no overlap cycle."""
        assert exhaustive_ocycle_search(trivial_system(v)) is None

    def test_limit(self):
        """Test orders above the limit are refused."""
        with pytest.raises(DesignError):
            exhaustive_ocycle_search(skolem(2))
        with pytest.raises(DesignError):
            exhaustive_ocycle_search(bose(3), limit=7)
