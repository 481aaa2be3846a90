"""
Base-case designs and their overlap cycles.

Nine small systems (v = 7, 9, 13, 15, 19, 21, 25, 27, 33) seed the recursive
builders. Each ships as a verbatim text listing of its overlap cycle in one of
four notations:

- flat: underlined overlap points separated by hidden points (v <= 13)
- hex: one three-character cell per block, digits 0-9 then a-e (v = 15)
- triples: "a,b,c" cells with 1-based labels (v = 19)
- pair: "ci" / "c(ii)" tokens for (coset, residue) plus ∞ / ∞_k (v >= 21)

Tables are read column-major, skipping empty cells. Transcription typos in the
tables are corrected through errata.json, which sits next to the listings. An
erratum is applied only when the cell at its location still holds its original
text, and every application is logged. After parsing, each asset is certified
(STS validity and overlap cycle validity) before it is handed out.
"""

import json
import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from ..config import get_settings
from ..errors import ConfigurationError, CycleError, DesignError, ListingParseError
from ..ocycles.ocycle_core import OrientedBlock, OverlapCycle, validate_ocycle
from ..reports import ErratumEntry
from .design_core import CosetScheme, LabelScheme, PlainScheme, TripleSystem, make_triple_system

logger = logging.getLogger(__name__)

BASE_ORDERS: Tuple[int, ...] = (7, 9, 13, 15, 19, 21, 25, 27, 33)
AF_BASE_ORDERS: Tuple[int, ...] = (15, 19, 21, 25, 27, 33)

# notation and, for pair notation, the residue modulus m
NOTATIONS: Dict[int, Tuple[str, int]] = {
    7: ("flat", 0),
    9: ("flat", 0),
    13: ("flat", 0),
    15: ("hex", 0),
    19: ("triples", 0),
    21: ("pair", 9),
    25: ("pair", 9),
    27: ("pair", 13),
    33: ("pair", 15),
}

ERRATA_FILE = "errata.json"
_CELL_LOCATION = re.compile(r"^row (\d+), column (\d+)$")
_PAIR_TOKEN = re.compile(r"^([01])(?:(\d)|\((\d+)\))$")
_INFINITY_TOKEN = re.compile(r"^(?:\\infty|∞)(?:_\{?(\d+)\}?)?$")


@dataclass(frozen=True)
class BaseCaseAsset:
    """A certified base case: listing, parsed cycle, design and applied errata."""

    v: int
    raw_text: str
    parsed_blocks: Tuple[OrientedBlock, ...]
    parsed_sts: TripleSystem
    errata: Tuple[ErratumEntry, ...] = ()

    @property
    def cycle(self) -> OverlapCycle:
        return OverlapCycle(self.parsed_blocks)


@dataclass(frozen=True)
class Fano7Seed:
    """The STS(7) placed on the infinite points ∞_-3..∞_3 of the 2v+7 construction."""

    sts: TripleSystem
    relabel: Dict[int, int]
    cycle: Optional[OverlapCycle] = field(default=None, compare=False)


# Listing parsers


def _table_cells(text: str) -> List[List[str]]:
    body = re.sub(r"\\begin\{array\}\{[^}]*\}", "", text)
    body = body.replace("\\end{array}", "")
    return [[cell.strip() for cell in row.split("&")] for row in body.split("\\\\")]


def _column_major(rows: List[List[str]]) -> List[str]:
    width = max((len(r) for r in rows), default=0)
    cells = []
    for col in range(width):
        for row in rows:
            if col < len(row) and row[col]:
                cells.append(row[col])
    return cells


def _normalize(cell: str) -> str:
    return re.sub(r"\s+", "", cell)


def _pair_token(token: str, modulus: int) -> int:
    token = token.strip()
    match = _INFINITY_TOKEN.match(token)
    if match:
        return 2 * modulus + int(match.group(1) or 0)
    match = _PAIR_TOKEN.match(token)
    if match:
        residue = int(match.group(2) if match.group(2) is not None else match.group(3))
        if residue >= modulus:
            raise ListingParseError(f"residue {residue} in {token!r} is not below {modulus}")
        return int(match.group(1)) * modulus + residue
    raise ListingParseError(f"malformed pair-notation token {token!r}")


def parse_cell(cell: str, notation: str, modulus: int = 0) -> OrientedBlock:
    """
    Read one table cell as an oriented block.

    Args:
        cell: cell text, e.g. "2,1,0", "a3b" or "00, ∞_1, 11"
        notation: "hex", "triples" or "pair"
        modulus: residue modulus for pair notation

    Returns:
        OrientedBlock(head, hidden, tail) in listing order, labels as written
    """
    if notation == "hex":
        text = _normalize(cell)
        if len(text) != 3:
            raise ListingParseError(f"hex cell {cell!r} does not hold three digits")
        try:
            points = [int(ch, 16) for ch in text]
        except ValueError as e:
            raise ListingParseError(f"bad hex digit in {cell!r}") from e
    elif notation == "triples":
        try:
            points = [int(tok) for tok in cell.split(",")]
        except ValueError as e:
            raise ListingParseError(f"bad integer in {cell!r}") from e
    elif notation == "pair":
        points = [_pair_token(tok, modulus) for tok in cell.split(",")]
    else:
        raise ListingParseError(f"unknown notation {notation!r}")

    if len(points) != 3:
        raise ListingParseError(f"cell {cell!r} does not hold three points")
    if len(set(points)) != 3:
        raise ListingParseError(f"cell {cell!r} repeats a point")
    return OrientedBlock(*points)


def _parse_flat(text: str) -> List[OrientedBlock]:
    # every integer in the display; a break between display lines repeats the
    # overlap point, so adjacent duplicates collapse
    tokens = [int(tok) for tok in re.findall(r"\d+", text)]
    sequence: List[int] = []
    for tok in tokens:
        if not sequence or sequence[-1] != tok:
            sequence.append(tok)
    if len(sequence) < 3 or len(sequence) % 2 == 0:
        raise ListingParseError(f"flat listing has {len(sequence)} points; expected an odd count >= 3")
    blocks = []
    for i in range(0, len(sequence) - 2, 2):
        head, hidden, tail = sequence[i : i + 3]
        if len({head, hidden, tail}) != 3:
            raise ListingParseError(f"flat listing block {head},{hidden},{tail} repeats a point")
        blocks.append(OrientedBlock(head, hidden, tail))
    return blocks


def _apply_errata(rows: List[List[str]], errata: Sequence[ErratumEntry]) -> None:
    for entry in errata:
        match = _CELL_LOCATION.match(entry.location)
        if not match:
            continue
        r, c = int(match.group(1)) - 1, int(match.group(2)) - 1
        if r >= len(rows) or c >= len(rows[r]):
            raise ListingParseError(f"erratum location {entry.location!r} is outside the v={entry.v} table")
        if _normalize(rows[r][c]) != _normalize(entry.original):
            raise ListingParseError(
                f"erratum for v={entry.v} at {entry.location} expects {entry.original!r}, "
                f"listing holds {rows[r][c]!r}"
            )
        rows[r][c] = entry.corrected
        logger.info(
            "applied erratum",
            extra={"v": entry.v, "location": entry.location, "corrected": entry.corrected},
        )


def parse_appendix_listing(
    text: str, v: int, errata: Sequence[ErratumEntry] = ()
) -> List[OrientedBlock]:
    """
    Parse a verbatim base-case listing into oriented blocks, in listing order.

    The notation comes from v (NOTATIONS). A triples listing written over labels
    1..v is shifted down to 0..v-1.

    Args:
        text: listing text
        v: order of the listed system
        errata: corrections to apply to table cells before reading them

    Returns:
        The oriented blocks; labels are in [0, v) for the known orders.
    """
    notation, modulus = NOTATIONS.get(v, ("triples", 0))
    if notation == "flat":
        return _parse_flat(text)

    rows = _table_cells(text)
    _apply_errata(rows, [e for e in errata if e.v == v])
    blocks = [parse_cell(cell, notation, modulus) for cell in _column_major(rows)]

    if notation == "triples":
        labels = [p for b in blocks for p in b]
        if labels and min(labels) == 1 and max(labels) == v:
            blocks = [OrientedBlock(b.head - 1, b.hidden - 1, b.tail - 1) for b in blocks]
    return blocks


def scheme_for(v: int) -> LabelScheme:
    notation, modulus = NOTATIONS[v]
    if notation == "pair":
        return CosetScheme("appendix", 2, modulus, infinities=v - 2 * modulus)
    return PlainScheme(v)


# Assets


def load_errata(data_dir: Optional[Path] = None) -> List[ErratumEntry]:
    """Read errata.json from the asset directory; a missing file means no errata."""
    directory = Path(data_dir) if data_dir is not None else get_settings().data_dir
    path = directory / ERRATA_FILE
    if not path.exists():
        return []
    with open(path, "r", encoding="utf-8") as f:
        return [ErratumEntry(**entry) for entry in json.load(f)]


def listing_path(v: int, data_dir: Path) -> Path:
    return data_dir / f"v{v}.txt"


@lru_cache(maxsize=None)
def _load_asset(v: int, data_dir: Path) -> BaseCaseAsset:
    path = listing_path(v, data_dir)
    try:
        raw_text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"cannot read base case listing {path}: {e.strerror or e}") from e

    errata = tuple(e for e in load_errata(data_dir) if e.v == v)
    blocks = parse_appendix_listing(raw_text, v, errata)
    sts = make_triple_system(v, [b.triple for b in blocks], scheme_for(v))

    cycle = OverlapCycle(tuple(blocks))
    report = validate_ocycle(sts, cycle)
    if not report.ok:
        raise CycleError(
            f"base case v={v} listing is not an overlap cycle: {report.first_defect()}",
            report=report,
        )

    logger.debug("certified base case", extra={"v": v, "blocks": len(blocks), "errata": len(errata)})
    return BaseCaseAsset(v, raw_text, tuple(blocks), sts, errata)


def base_case(v: int, data_dir: Optional[Path] = None) -> BaseCaseAsset:
    """
    Return the certified base case of order v.

    Args:
        v: one of BASE_ORDERS
        data_dir: asset directory; defaults to Settings.data_dir (OCYCLE_DATA_DIR)

    Raises:
        DesignError: unsupported v
        ConfigurationError: the listing file cannot be read
        CycleError: the listing does not certify
    """
    if v not in NOTATIONS:
        raise DesignError(f"no base case of order {v}; available: {', '.join(map(str, BASE_ORDERS))}")
    directory = Path(data_dir) if data_dir is not None else get_settings().data_dir
    return _load_asset(v, directory.resolve())


def default_fano_seed(data_dir: Optional[Path] = None) -> Fano7Seed:
    """The v=7 base case on ∞_-3..∞_3, label l going to index l - 3."""
    asset = base_case(7, data_dir)
    return Fano7Seed(asset.parsed_sts, {label: label - 3 for label in range(7)}, asset.cycle)
