"""
Report and provenance models.

These pydantic models are the machine-readable face of the package: validators
return ValidationReport, the automorphism search returns AutomorphismReport and
every built certificate carries a Provenance tree. All of them serialize with
model_dump_json, so the CLI can emit them unchanged.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

MAX_ITEMIZED_DEFECTS = 100


class ValidationReport(BaseModel):
    """Outcome of a structural check on a triple system or an overlap cycle."""

    subject: str
    ok: bool = True
    defects: List[str] = Field(default_factory=list)
    defect_total: int = 0
    counts: Dict[str, int] = Field(default_factory=dict)

    def add(self, message: str) -> None:
        """Record one defect, itemizing only the first MAX_ITEMIZED_DEFECTS."""
        self.ok = False
        self.defect_total += 1
        if len(self.defects) < MAX_ITEMIZED_DEFECTS:
            self.defects.append(message)

    def first_defect(self) -> str:
        return self.defects[0] if self.defects else ""


class AutomorphismReport(BaseModel):
    """
    Result of an automorphism count.

    order_of_group is exact when budget_exhausted is False; otherwise it is the
    number of automorphisms found before the node budget ran out.
    """

    model_config = ConfigDict(populate_by_name=True)

    order_of_group: int = Field(alias="order")
    sample_nonidentity: Optional[List[int]] = Field(default=None, alias="witness")
    nodes: int = 0
    elapsed_ms: int = Field(default=0, alias="millis")
    budget_exhausted: bool = False

    @property
    def conclusive(self) -> bool:
        return not self.budget_exhausted

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, exclude_none=True)


class Provenance(BaseModel):
    """How a certificate was obtained: construction tag, parameters, sub-certificates."""

    construction: str
    params: Dict[str, Any] = Field(default_factory=dict)
    children: List["Provenance"] = Field(default_factory=list)

    def describe(self) -> str:
        """Render the recursion tree compactly, e.g. ``d2v7(v=15; base(v=15))``."""
        inner = ", ".join(f"{k}={v}" for k, v in self.params.items() if k == "v" or k == "n")
        if self.children:
            kids = "; ".join(child.describe() for child in self.children)
            return f"{self.construction}({inner}; {kids})" if inner else f"{self.construction}({kids})"
        return f"{self.construction}({inner})"


class ErratumEntry(BaseModel):
    """One documented correction to a transcribed base-case listing."""

    v: int
    location: str
    original: str
    corrected: str
    reason: str


class ArtifactRecord(BaseModel):
    """A file read or written by a CLI run, identified by its digest."""

    path: str
    sha256: str


class RunManifest(BaseModel):
    """Everything needed to reproduce one CLI invocation."""

    command: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    inputs: List[ArtifactRecord] = Field(default_factory=list)
    outputs: List[ArtifactRecord] = Field(default_factory=list)
    tool_version: str
    certificate_digests: Dict[str, str] = Field(default_factory=dict)


class BundleSummary(BaseModel):
    """What one generate run produced."""

    n: int
    b: int
    route: str
    tree: str
    out: str
    digests: Dict[str, str] = Field(default_factory=dict)


class VerificationSummary(BaseModel):
    """Combined outcome of the checks requested from verify."""

    ok: bool
    sts: ValidationReport
    ocycle: Optional[ValidationReport] = None
    automorphisms: Optional[AutomorphismReport] = None
    af: Optional[bool] = None
    manifest: Optional[RunManifest] = None

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, exclude_none=True, indent=2)


Provenance.model_rebuild()
