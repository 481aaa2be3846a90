"""
Workflows behind the command line.

OcycleOrchestrator routes an order to a builder, writes certificate bundles,
re-verifies text artefacts and converts between the full and compressed cycle
formats. The CLI only parses arguments and prints; everything that touches a
certificate or a file happens here.

A bundle directory holds:

- sts.txt: the design in STS format
- ocycle.txt: the cycle in OCYCLE format, canonically rotated
- provenance.json: the construction tree
- manifest.json: the RunManifest, with a sha256 digest for each file above and
  for every base-case listing the build read

convert --out writes its output with a <out>.manifest.json beside it, and verify
attaches a manifest of the files it read to its summary.
"""

import hashlib
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

from . import __version__
from .config import Settings, get_settings
from .designs.design_core import (
    TripleSystem,
    admissibility_rule,
    is_admissible,
    make_triple_system,
    validate_sts,
)
from .designs.base_cases import ERRATA_FILE, default_fano_seed, listing_path
from .errors import CycleError, FormatError, InadmissibleOrderError
from .formats import (
    format_ocycle,
    format_sts,
    format_ucycle,
    parse_ocycle,
    parse_sts,
    parse_ucycle,
    read_text,
    sniff,
    write_text,
)
from .ocycles.builders import (
    OcycleCertificate,
    ocycle_af,
    ocycle_any,
    ocycle_bose,
    ocycle_double_plus_one,
    ocycle_double_plus_seven,
    ocycle_product,
    ocycle_skolem,
)
from .ocycles.ocycle_core import OverlapCycle, canonical_rotation, compress, decompress, validate_ocycle
from .reports import (
    ArtifactRecord,
    BundleSummary,
    Provenance,
    RunManifest,
    ValidationReport,
    VerificationSummary,
)
from .verify import automorphism_order

logger = logging.getLogger(__name__)

ROUTES = ("af", "any", "bose", "skolem", "product", "d2v1", "d2v7")

BUNDLE_FILES = ("sts.txt", "ocycle.txt", "provenance.json")


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def file_record(path: Path) -> ArtifactRecord:
    """Digest of a file's bytes as they sit on disk."""
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror or e}") from e
    return ArtifactRecord(path=str(path), sha256=hashlib.sha256(data).hexdigest())


def manifest_path_for(out_path: Path) -> Path:
    return out_path.with_name(out_path.name + ".manifest.json")


def listing_orders(provenance: Provenance) -> Set[int]:
    """Orders of the base-case listings a certificate was built from; 2v+7 reads the v=7 seed."""
    orders: Set[int] = set()
    if provenance.construction == "base":
        orders.add(provenance.params["v"])
    elif provenance.construction == "d2v7":
        orders.add(7)
    for child in provenance.children:
        orders |= listing_orders(child)
    return orders


def parse_sweep(text: str) -> Tuple[int, int]:
    """Read "A..B" into (A, B)."""
    low, sep, high = text.partition("..")
    try:
        a, b = int(low), int(high)
    except ValueError:
        raise FormatError(f"sweep range must look like A..B, got {text!r}") from None
    if not sep or a > b:
        raise FormatError(f"sweep range must look like A..B with A <= B, got {text!r}")
    return a, b


def parse_factors(text: str) -> Tuple[int, int]:
    """Read "U,W" into (U, W)."""
    try:
        u, w = (int(tok) for tok in text.split(","))
    except ValueError:
        raise FormatError(f"factors must look like U,W, got {text!r}") from None
    return u, w


def default_factors(n: int) -> Optional[Tuple[int, int]]:
    """Smallest admissible u >= 7 dividing n with an admissible cofactor >= 7."""
    for u in range(7, n // 7 + 1):
        if n % u == 0 and is_admissible(u) and is_admissible(n // u) and n // u >= 7:
            return u, n // u
    return None


def route_rule(route: str, n: int, factors: Optional[Tuple[int, int]] = None) -> Optional[str]:
    """
    Why n cannot be built on route, or None when it can.

    Args:
        route: one of ROUTES
        n: target order
        factors: explicit (u, w) for the product route

    Returns:
        A message quoting the violated rule, or None
    """
    if route not in ROUTES:
        return f"unknown route {route!r}; choose one of {', '.join(ROUTES)}"
    if not is_admissible(n):
        return admissibility_rule(n)
    if route == "af" and n < 15:
        return f"route af needs n >= 15, got {n}"
    if route == "any" and n < 7:
        return f"route any needs n >= 7, got {n}"
    if route == "bose" and (n % 6 != 3 or n < 9):
        return f"route bose needs n ≡ 3 (mod 6) and n >= 9, got {n}"
    if route == "skolem" and (n % 6 != 1 or n < 7):
        return f"route skolem needs n ≡ 1 (mod 6) and n >= 7, got {n}"
    if route == "d2v1":
        v = (n - 1) // 2
        if not is_admissible(v) or v < 7:
            return f"route d2v1 needs n = 2v+1 with v ≡ 1,3 (mod 6) and v >= 7, got {n}"
    if route == "d2v7":
        v = (n - 7) // 2
        if n < 37 or not is_admissible(v):
            return f"route d2v7 needs n = 2v+7 with v ≡ 1,3 (mod 6) and v >= 15, got {n}"
    if route == "product":
        if factors is None:
            if default_factors(n) is None:
                return f"route product needs n = uw with admissible u, w >= 7, got {n}"
        else:
            u, w = factors
            if u * w != n or u < 7 or w < 7 or not is_admissible(u) or not is_admissible(w):
                return f"route product needs admissible factors u, w >= 7 with uw = {n}, got {u},{w}"
    return None


class OcycleOrchestrator:
    """
    Runs generate, verify and convert.

    The af route keeps a memo of certificates by order, so a sweep builds each
    intermediate system once.
    """

    def __init__(self, settings: Optional[Settings] = None):
        """
        Args:
            settings: runtime settings; read from the environment when omitted
        """
        self.settings = settings or get_settings()
        self._af_memo: Dict[int, OcycleCertificate] = {}

    # Building

    def build(self, n: int, route: str, factors: Optional[Tuple[int, int]] = None) -> OcycleCertificate:
        """
        Build a certificate for order n on one route.

        Raises:
            InadmissibleOrderError: n does not fit the route
        """
        rule = route_rule(route, n, factors)
        if rule is not None:
            raise InadmissibleOrderError(rule)
        logger.info("building", extra={"n": n, "route": route})

        if route == "af":
            return ocycle_af(n, self._af_memo, self.settings.data_dir)
        if route == "any":
            return ocycle_any(n)
        if route == "bose":
            return ocycle_bose(n // 3)
        if route == "skolem":
            return ocycle_skolem((n - 1) // 6)
        if route == "d2v1":
            return ocycle_double_plus_one(ocycle_any((n - 1) // 2))
        if route == "d2v7":
            return ocycle_double_plus_seven(
                ocycle_any((n - 7) // 2), default_fano_seed(self.settings.data_dir)
            )
        u, w = factors or default_factors(n)  # type: ignore[misc]
        return ocycle_product(ocycle_any(u), ocycle_any(w))

    def listing_inputs(self, cert: OcycleCertificate) -> List[ArtifactRecord]:
        """Digests of the listing files, and the errata file, behind a certificate."""
        orders = sorted(listing_orders(cert.provenance))
        if not orders:
            return []
        data_dir = self.settings.data_dir.resolve()
        paths = [listing_path(v, data_dir) for v in orders]
        if (data_dir / ERRATA_FILE).exists():
            paths.append(data_dir / ERRATA_FILE)
        return [file_record(p) for p in paths]

    def write_bundle(
        self, cert: OcycleCertificate, out_dir: Path, parameters: Dict[str, Any]
    ) -> RunManifest:
        """
        Write the four bundle files for one certificate.

        The cycle is stored in canonical rotation, and nothing time-dependent is
        written, so the same parameters give byte-identical bundles.
        """
        texts = {
            "sts.txt": format_sts(cert.ts),
            "ocycle.txt": format_ocycle(cert.v, canonical_rotation(cert.cycle)),
            "provenance.json": cert.provenance.model_dump_json(indent=2) + "\n",
        }
        outputs = []
        for name in BUNDLE_FILES:
            write_text(out_dir / name, texts[name])
            outputs.append(ArtifactRecord(path=name, sha256=sha256_text(texts[name])))

        manifest = RunManifest(
            command="generate",
            parameters=parameters,
            inputs=self.listing_inputs(cert),
            outputs=outputs,
            tool_version=__version__,
            certificate_digests={
                "sts": sha256_text(texts["sts.txt"]),
                "ocycle": sha256_text(texts["ocycle.txt"]),
            },
        )
        write_text(out_dir / "manifest.json", manifest.model_dump_json(indent=2) + "\n")
        return manifest

    def generate(
        self, n: int, route: str, out_dir: Path, factors: Optional[Tuple[int, int]] = None
    ) -> BundleSummary:
        cert = self.build(n, route, factors)
        parameters: Dict[str, Any] = {"n": n, "route": route}
        if factors is not None:
            parameters["factors"] = list(factors)
        manifest = self.write_bundle(cert, out_dir, parameters)
        return BundleSummary(
            n=cert.v,
            b=cert.ts.b,
            route=route,
            tree=cert.provenance.describe(),
            out=str(out_dir),
            digests=manifest.certificate_digests,
        )

    def sweep(self, low: int, high: int, route: str, out_dir: Path) -> List[BundleSummary]:
        """Generate every order in [low, high] that the route accepts, one bundle per order."""
        summaries = []
        for n in range(low, high + 1):
            if route_rule(route, n) is not None:
                continue
            summaries.append(self.generate(n, route, out_dir / f"v{n}"))
        return summaries

    # Verification

    def verify(
        self,
        sts_path: Path,
        ocycle_path: Optional[Path] = None,
        check_af: bool = False,
        budget: Optional[int] = None,
    ) -> VerificationSummary:
        """
        Re-check text artefacts.

        Args:
            sts_path: STS file
            ocycle_path: OCYCLE or UCYCLE2 file checked against the design
            check_af: also count automorphisms
            budget: node limit for the automorphism search

        Returns:
            VerificationSummary; ok only if every requested check is clean and
            an AF check, when asked for, is conclusive.

        Raises:
            FormatError: unreadable or malformed files
        """
        v, blocks = parse_sts(read_text(sts_path))
        sts_report = validate_sts(v, blocks)
        summary = VerificationSummary(ok=sts_report.ok, sts=sts_report)

        summary.manifest = RunManifest(
            command="verify",
            parameters={"af": check_af, "budget": budget or self.settings.af_budget} if check_af else {},
            inputs=[file_record(p) for p in (sts_path, ocycle_path) if p is not None],
            tool_version=__version__,
        )
        if not sts_report.ok:
            return summary

        ts = make_triple_system(v, blocks)
        if ocycle_path is not None:
            summary.ocycle = self._check_cycle_file(ts, read_text(ocycle_path))
            summary.ok = summary.ok and summary.ocycle.ok

        if check_af:
            report = automorphism_order(ts, budget or self.settings.af_budget)
            summary.automorphisms = report
            if report.order_of_group > 1:
                summary.af = False
            elif report.budget_exhausted:
                summary.af = None
            else:
                summary.af = True
            summary.ok = summary.ok and summary.af is True
        return summary

    def _check_cycle_file(self, ts: TripleSystem, text: str) -> ValidationReport:
        v = ts.v
        tag = sniff(text)
        if tag == "OCYCLE":
            file_v, cycle = parse_ocycle(text)
        elif tag == "UCYCLE2":
            file_v, cc = parse_ucycle(text)
        else:
            raise FormatError(f"expected an OCYCLE or UCYCLE2 file, got {tag}", line=1)

        if file_v != v:
            report = ValidationReport(subject=f"{tag}({file_v})")
            report.add(f"cycle file is for v={file_v}, design has v={v}")
            return report
        if tag == "UCYCLE2":
            try:
                cycle = decompress(ts, cc)
            except CycleError as e:
                if e.report is not None:
                    return e.report
                report = ValidationReport(subject=f"UCYCLE2({v})")
                report.add(str(e))
                return report
        return validate_ocycle(ts, cycle)

    # Conversion

    def compress_file(self, in_path: Path) -> str:
        """OCYCLE text in, UCYCLE2 text out. The cycle must chain."""
        v, cycle = parse_ocycle(read_text(in_path))
        _require_chained(cycle)
        return format_ucycle(v, compress(cycle))

    def decompress_file(self, in_path: Path, sts_path: Path) -> str:
        """
        UCYCLE2 text in, OCYCLE text out, hidden points taken from the design.

        Raises:
            CycleError: the sequence does not cover the design exactly once
        """
        v, cc = parse_ucycle(read_text(in_path))
        sts_v, blocks = parse_sts(read_text(sts_path))
        if sts_v != v:
            raise CycleError(f"compressed cycle is for v={v}, design has v={sts_v}")
        ts = make_triple_system(sts_v, blocks)
        return format_ocycle(v, decompress(ts, cc))


    def write_conversion(
        self, text: str, out_path: Path, mode: str, inputs: Sequence[Path]
    ) -> RunManifest:
        """
        Write a converted cycle and its manifest next to it.

        Args:
            text: the converted file contents
            out_path: destination; the manifest goes to <out_path>.manifest.json
            mode: "compress" or "decompress"
            inputs: files the conversion read

        Returns:
            The RunManifest that was written
        """
        write_text(out_path, text)
        manifest = RunManifest(
            command="convert",
            parameters={"mode": mode},
            inputs=[file_record(p) for p in inputs],
            outputs=[ArtifactRecord(path=out_path.name, sha256=sha256_text(text))],
            tool_version=__version__,
        )
        write_text(manifest_path_for(out_path), manifest.model_dump_json(indent=2) + "\n")
        return manifest


def _require_chained(cycle: OverlapCycle) -> None:
    n = len(cycle)
    for i, block in enumerate(cycle):
        nxt = cycle[(i + 1) % n]
        if block.tail != nxt.head:
            raise CycleError(f"junction {i}: tail {block.tail} ≠ head {nxt.head} of block {(i + 1) % n}")
