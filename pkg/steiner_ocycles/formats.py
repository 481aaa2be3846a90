"""
Normative text formats.

STS:      "STS v b", then b lines "x y z" (ascending within a line, blocks in
          construction order)
OCYCLE:   "OCYCLE v b", then b lines "head hidden tail"
UCYCLE2:  "UCYCLE2 v b", then one line of b labels (the compressed cycle)

Lines starting with '#' and blank lines are ignored on input. Every format is
written with a trailing newline. Parse failures raise FormatError with the
1-based line number.
"""

from pathlib import Path
from typing import Iterator, List, Tuple, Union

from .designs.design_core import TripleSystem
from .errors import FormatError
from .ocycles.ocycle_core import CompressedCycle, OrientedBlock, OverlapCycle

PathLike = Union[str, Path]


def _content_lines(text: str) -> Iterator[Tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield number, line


def _ints(line: str, number: int) -> List[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise FormatError(f"expected integer labels, got {line!r}", line=number) from None


def _header(lines: List[Tuple[int, str]], tag: str) -> Tuple[int, int]:
    if not lines:
        raise FormatError(f"missing '{tag} v b' header", line=1)
    number, line = lines[0]
    parts = line.split()
    if len(parts) != 3 or parts[0] != tag:
        raise FormatError(f"expected '{tag} v b' header, got {line!r}", line=number)
    v, b = _ints(" ".join(parts[1:]), number)
    if v < 0 or b < 0:
        raise FormatError(f"negative size in header {line!r}", line=number)
    return v, b


def _check_labels(labels: List[int], v: int, number: int) -> None:
    for p in labels:
        if not 0 <= p < v:
            raise FormatError(f"label {p} is outside [0, {v})", line=number)


# STS


def format_sts(ts: TripleSystem) -> str:
    lines = [f"STS {ts.v} {ts.b}"]
    lines.extend(f"{t.a} {t.b} {t.c}" for t in ts.blocks)
    return "\n".join(lines) + "\n"


def parse_sts(text: str) -> Tuple[int, List[Tuple[int, int, int]]]:
    """
    Read an STS file into its order and raw block list.

    The blocks are not checked against the STS invariants here; hand them to
    validate_sts or make_triple_system.
    """
    lines = list(_content_lines(text))
    v, b = _header(lines, "STS")
    body = lines[1:]
    if len(body) != b:
        raise FormatError(f"header announces {b} blocks, found {len(body)}", line=lines[0][0])
    blocks = []
    for number, line in body:
        labels = _ints(line, number)
        if len(labels) != 3:
            raise FormatError(f"a block has three labels, got {len(labels)}", line=number)
        _check_labels(labels, v, number)
        if not labels[0] < labels[1] < labels[2]:
            raise FormatError(f"block {line!r} is not strictly ascending", line=number)
        blocks.append((labels[0], labels[1], labels[2]))
    return v, blocks


# OCYCLE


def format_ocycle(v: int, cycle: OverlapCycle) -> str:
    lines = [f"OCYCLE {v} {len(cycle)}"]
    lines.extend(f"{b.head} {b.hidden} {b.tail}" for b in cycle)
    return "\n".join(lines) + "\n"


def parse_ocycle(text: str) -> Tuple[int, OverlapCycle]:
    lines = list(_content_lines(text))
    v, b = _header(lines, "OCYCLE")
    body = lines[1:]
    if len(body) != b:
        raise FormatError(f"header announces {b} blocks, found {len(body)}", line=lines[0][0])
    blocks = []
    for number, line in body:
        labels = _ints(line, number)
        if len(labels) != 3:
            raise FormatError(f"expected 'head hidden tail', got {line!r}", line=number)
        _check_labels(labels, v, number)
        blocks.append(OrientedBlock(*labels))
    return v, OverlapCycle(tuple(blocks))


# UCYCLE2


def format_ucycle(v: int, cc: CompressedCycle) -> str:
    return f"UCYCLE2 {v} {len(cc)}\n" + " ".join(str(p) for p in cc.points) + "\n"


def parse_ucycle(text: str) -> Tuple[int, CompressedCycle]:
    lines = list(_content_lines(text))
    v, b = _header(lines, "UCYCLE2")
    body = lines[1:]
    if b == 0 and not body:
        return v, CompressedCycle(())
    if len(body) != 1:
        raise FormatError(f"expected one line of labels, found {len(body)}", line=lines[0][0])
    number, line = body[0]
    labels = _ints(line, number)
    if len(labels) != b:
        raise FormatError(f"header announces {b} labels, found {len(labels)}", line=number)
    _check_labels(labels, v, number)
    return v, CompressedCycle(tuple(labels))


def sniff(text: str) -> str:
    """The header tag of a file: "STS", "OCYCLE" or "UCYCLE2"."""
    for number, line in _content_lines(text):
        tag = line.split()[0]
        if tag in ("STS", "OCYCLE", "UCYCLE2"):
            return tag
        raise FormatError(f"unknown header {line!r}", line=number)
    raise FormatError("empty file", line=1)


def read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror or e}") from e


def write_text(path: PathLike, text: str) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8", newline="\n")
    return target
