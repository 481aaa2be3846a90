"""
Tests for the overlap cycle builders and their dispatchers.

Every builder certifies its own output, so a returned certificate is already a
valid design with a valid cycle. These tests pin the step bookkeeping, the
provenance trees and the refusal paths.
"""

import pytest

from steiner_ocycles.designs.constructions import trivial_system
from steiner_ocycles.designs.design_core import is_admissible
from steiner_ocycles.errors import ConfigurationError, CycleError, InadmissibleOrderError
from steiner_ocycles.ocycles.builders import (
    DifferenceClass,
    OcycleCertificate,
    base_certificate,
    certify,
    difference_class_cycles,
    ocycle_af,
    ocycle_any,
    ocycle_bose,
    ocycle_double_plus_one,
    ocycle_double_plus_seven,
    ocycle_product,
    ocycle_skolem,
)
from steiner_ocycles.ocycles.ocycle_core import (
    OrientedBlock,
    compress,
    hidden_only_points,
    make_cycle,
    validate_ocycle,
)
from steiner_ocycles.reports import Provenance


def _assert_certified(cert: OcycleCertificate, n: int) -> None:
    assert cert.v == n
    assert cert.ts.b == n * (n - 1) // 6
    assert validate_ocycle(cert.ts, cert.cycle).ok


class TestDifferenceClasses:
    """Test suite for splitting a difference class into chains."""

    def test_single_cycle(self):
        """Test d coprime to the modulus gives one cycle through every x."""
        cycles = difference_class_cycles(7, 1, lambda x: OrientedBlock(x % 7, 20, (x + 1) % 7))
        assert len(cycles) == 1
        assert len(cycles[0]) == 7

    def test_gcd_many_cycles(self):
        """Test gcd(step, modulus) cycles, started at 0, 1, 2."""
        rule = DifferenceClass(9, 3, lambda x: OrientedBlock(x % 9, 50, (x + 3) % 9))
        cycles = rule.cycles()
        assert [len(c) for c in cycles] == [3, 3, 3]
        assert [c[0].head for c in cycles] == [0, 1, 2]

    def test_explicit_step(self):
        """Test a step other than d."""
        cycles = difference_class_cycles(
            15, 5, lambda x: OrientedBlock(x % 15, 99, (x + 10) % 15), step=10
        )
        assert [len(c) for c in cycles] == [3] * 5

    @pytest.mark.parametrize("d", [0, 5])
    def test_difference_out_of_range(self, d):
        """Test d must lie in [1, (modulus-1)/2]."""
        with pytest.raises(CycleError):
            difference_class_cycles(9, d, lambda x: OrientedBlock(x, 50, x + d))

    def test_zero_step(self):
        """Test a step that does not move is refused."""
        with pytest.raises(CycleError):
            difference_class_cycles(9, 1, lambda x: OrientedBlock(x % 9, 50, (x + 1) % 9), step=9)

    def test_template_that_does_not_chain(self):
        """Test the chaining check on the template."""
        with pytest.raises(CycleError, match="does not chain"):
            difference_class_cycles(7, 1, lambda x: OrientedBlock(x % 7, 20, (x + 2) % 7))


class TestCertify:
    """Test suite for the certificate gate."""

    def test_rejects_broken_cycle(self, fano):
        """Test a cycle that does not cover the design fails with the construction named."""
        broken = make_cycle([(0, 1, 3), (3, 4, 6)])
        with pytest.raises(CycleError) as excinfo:
            certify(fano, broken, Provenance(construction="toy"))
        assert excinfo.value.step == "toy"
        assert str(excinfo.value).startswith("[toy]")
        assert excinfo.value.report is not None


class TestBaseCertificates:
    """Test suite for certificates of the shipped listings."""

    def test_plain(self):
        """Test a listing without errata."""
        cert = base_certificate(7)
        assert cert.provenance.construction == "base"
        assert cert.provenance.params == {"v": 7}

    def test_with_errata(self):
        """Test corrected listings record how many errata were applied."""
        assert base_certificate(25).provenance.params == {"v": 25, "errata": 9}


class TestDoublePlusOne:
    """Test suite for the 2v+1 cycle builder."""

    def test_from_fano(self):
        """Test STS(7) doubles to STS(15) with the expected step sizes."""
        cert = ocycle_double_plus_one(base_certificate(7))
        _assert_certified(cert, 15)
        assert cert.provenance.construction == "d2v1"
        assert cert.provenance.params["steps"] == {"lift": 7, "step2": 14, "step3": 14}
        assert cert.provenance.children[0].construction == "base"

    @pytest.mark.parametrize("v", [9, 13, 19, 21, 25])
    def test_over_any_route(self, v):
        """Test doubling children from the any route."""
        _assert_certified(ocycle_double_plus_one(ocycle_any(v)), 2 * v + 1)

    def test_rejects_small_input(self):
        """Test an STS(3) input is refused before building."""
        tiny = OcycleCertificate(trivial_system(3), make_cycle([(0, 1, 2)]), Provenance(construction="toy"))
        with pytest.raises(InadmissibleOrderError):
            ocycle_double_plus_one(tiny)


class TestDoublePlusSeven:
    """Test suite for the 2v+7 cycle builder."""

    def test_from_base_fifteen(self):
        """Test STS(15) gives STS(37) and every step is accounted for."""
        cert = ocycle_double_plus_seven(base_certificate(15))
        _assert_certified(cert, 37)
        assert cert.provenance.params["steps"] == {
            "lift": 35,
            "step2": 15,
            "step3": 45,
            "step4": 30,
            "fano": 7,
            "step6[k=-2]": 30,
            "step6[k=0]": 30,
            "step6[k=2]": 30,
        }

    @pytest.mark.parametrize("v", [19, 21, 25])
    def test_over_any_route(self, v):
        """Test children from the any route."""
        _assert_certified(ocycle_double_plus_seven(ocycle_any(v)), 2 * v + 7)

    def test_rejects_small_input(self):
        """Test an STS(13) input is too small."""
        with pytest.raises(InadmissibleOrderError):
            ocycle_double_plus_seven(base_certificate(13))


class TestDirectBuilders:
    """Test suite for the Bose and Skolem builders."""

    def test_bose_three(self):
        """Test the smallest Bose system."""
        cert = ocycle_bose(3)
        _assert_certified(cert, 9)
        assert cert.provenance.params["steps"] == {"step1": 3, "step2": 3, "step3": 6, "step4": 0}

    @pytest.mark.parametrize("m", [5, 7, 9, 11, 13])
    def test_bose(self, m):
        """Test odd m."""
        _assert_certified(ocycle_bose(m), 3 * m)

    @pytest.mark.parametrize("m", [1, 2, 4])
    def test_bose_rejects(self, m):
        """Test even and too small m."""
        with pytest.raises(InadmissibleOrderError):
            ocycle_bose(m)

    def test_skolem_one(self):
        """Test t=1 is the seven-block cycle on its own."""
        cert = ocycle_skolem(1)
        _assert_certified(cert, 7)
        assert compress(cert.cycle).points == (4, 5, 6, 1, 0, 2, 3)

    @pytest.mark.parametrize("t", [2, 3, 4, 5])
    def test_skolem(self, t):
        """Test larger t."""
        _assert_certified(ocycle_skolem(t), 6 * t + 1)

    def test_skolem_rejects_zero(self):
        """Test t must be positive."""
        with pytest.raises(InadmissibleOrderError):
            ocycle_skolem(0)


class TestProduct:
    """Test suite for the direct product builder."""

    @pytest.mark.parametrize(
        "first, second, fallback",
        [
            (lambda: base_certificate(9), lambda: base_certificate(7), 1),
            (lambda: base_certificate(9), lambda: ocycle_skolem(1), 1),
            (lambda: ocycle_skolem(1), lambda: base_certificate(9), 0),
            (lambda: ocycle_bose(3), lambda: ocycle_bose(3), 0),
        ],
    )
    def test_hidden_only_fallback(self, first, second, fallback):
        """Test how many blocks give up their hidden point."""
        a, b = first(), second()
        cert = ocycle_product(a, b)
        _assert_certified(cert, a.v * b.v)
        assert cert.provenance.params["fallback_blocks"] == fallback
        # one moved block per hidden-only point of the first factor
        assert len(hidden_only_points(a.ts, a.cycle)) == fallback
        assert [c.construction for c in cert.provenance.children] == [
            a.provenance.construction,
            b.provenance.construction,
        ]

    @pytest.mark.parametrize("u, w", [(7, 7), (7, 9), (9, 7)])
    def test_over_any_route(self, u, w):
        """Test products of any-route children."""
        _assert_certified(ocycle_product(ocycle_any(u), ocycle_any(w)), u * w)

    @pytest.mark.slow
    @pytest.mark.parametrize("u, w", [(9, 9), (7, 13), (13, 7)])
    def test_larger_products(self, u, w):
        """Test products with a few thousand blocks."""
        _assert_certified(ocycle_product(ocycle_any(u), ocycle_any(w)), u * w)


class TestDispatchers:
    """Test suite for ocycle_af and ocycle_any."""

    def test_af_base_case(self):
        """Test AF base orders come straight from the listings."""
        assert ocycle_af(19).provenance.construction == "base"

    def test_af_seven_step(self):
        """Test 37 ≡ 1 (mod 12) takes the 2v+7 step from 15."""
        assert ocycle_af(37).provenance.describe() == "d2v7(n=37, v=15; base(v=15))"

    def test_af_tree(self):
        """Test the recursion tree of 75 and the memo it leaves behind."""
        memo = {}
        cert = ocycle_af(75, memo)
        _assert_certified(cert, 75)
        assert cert.provenance.describe() == "d2v1(n=75, v=37; d2v7(n=37, v=15; base(v=15)))"
        assert set(memo) == {15, 37, 75}
        assert ocycle_af(75, memo) is cert

    def test_af_one_step(self):
        """Test 31 ≡ 7 (mod 12) takes the 2v+1 step from 15."""
        assert ocycle_af(31).provenance.describe() == "d2v1(n=31, v=15; base(v=15))"

    @pytest.mark.parametrize(
        "n, tree",
        [
            (39, "d2v1(n=39, v=19; base(v=19))"),
            (45, "d2v7(n=45, v=19; base(v=19))"),
        ],
    )
    def test_af_steps_over_nineteen(self, n, tree):
        """Test 39 = 2·19+1 and 45 = 2·19+7 are built from the STS(19) base case."""
        cert = ocycle_af(n)
        _assert_certified(cert, n)
        assert cert.provenance.describe() == tree

    @pytest.mark.parametrize("n", [7, 9, 13, 17])
    def test_af_rejects(self, n):
        """Test inadmissible orders and orders below 15."""
        with pytest.raises(InadmissibleOrderError):
            ocycle_af(n)

    def test_af_custom_data_dir(self, data_copy):
        """Test the asset directory is passed down the recursion."""
        (data_copy / "v15.txt").unlink()
        with pytest.raises(ConfigurationError):
            ocycle_af(31, data_dir=data_copy)

    def test_any_picks_by_residue(self):
        """Test Bose for n ≡ 3 and Skolem for n ≡ 1 (mod 6)."""
        assert ocycle_any(15).provenance.construction == "bose"
        assert ocycle_any(19).provenance.construction == "skolem"

    @pytest.mark.parametrize("n", [1, 3, 11])
    def test_any_rejects(self, n):
        """Test the any route needs an admissible n >= 7."""
        with pytest.raises(InadmissibleOrderError):
            ocycle_any(n)

    @pytest.mark.slow
    def test_af_sweep(self):
        """Test every admissible order from 15 to 99 on the af route."""
        memo = {}
        for n in range(15, 100):
            if is_admissible(n):
                _assert_certified(ocycle_af(n, memo), n)

    @pytest.mark.slow
    def test_any_sweep(self):
        """Test every admissible order from 7 to 99 on the any route."""
        for n in range(7, 100):
            if is_admissible(n):
                _assert_certified(ocycle_any(n), n)
