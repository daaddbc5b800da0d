from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .framework import Level, Method


class FindingKind(str, Enum):
    CIRCULARITY_ERROR = "CircularityError"
    PARTITION_ERROR = "PartitionError"
    SEMANTIC_INCONSISTENCY_ERROR = "SemanticInconsistencyError"
    REDUNDANCY_ERROR = "RedundancyError"
    GRAMMATICAL_REDUNDANCY_ERROR = "GrammaticalRedundancyError"
    IDENTICAL_DEFINITION = "IdenticalDefinition"


@dataclass(frozen=True)
class Finding:
    kind: FindingKind
    subjects: tuple[str, ...]
    detail: str = ""

    def __post_init__(self):
        if not self.subjects:
            raise ValueError("a finding needs at least one subject")

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "subjects": list(self.subjects), "detail": self.detail}

    @classmethod
    def from_dict(cls, d: dict) -> "Finding":
        return cls(FindingKind(d["kind"]), tuple(d["subjects"]), d.get("detail", ""))


@dataclass(frozen=True)
class MetricResult:
    """One computed measure.

    For count metrics ``value == len(findings)``. Ratio metrics leave
    ``findings`` empty and explain themselves in ``notes``.
    """

    metric_name: str
    value: float
    level: Level
    method: Method
    provenance: str
    findings: tuple[Finding, ...] = ()
    notes: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "metric_name": self.metric_name,
            "value": self.value,
            "level": self.level.value,
            "method": self.method.value,
            "provenance": self.provenance,
            "findings": [f.to_dict() for f in self.findings],
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MetricResult":
        return cls(
            metric_name=d["metric_name"],
            value=d["value"],
            level=Level(d["level"]),
            method=Method(d["method"]),
            provenance=d["provenance"],
            findings=tuple(Finding.from_dict(f) for f in d.get("findings", [])),
            notes=tuple(d.get("notes", [])),
        )


def count_result(name: str, findings, level: Level, method: Method, provenance: str, notes=()) -> MetricResult:
    findings = tuple(findings)
    return MetricResult(name, len(findings), level, method, provenance, findings, tuple(notes))
