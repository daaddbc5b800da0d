"""Evaluation report model and its JSON / Markdown renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from .context.competency import ContextReport
from .framework import (
    EvaluationPlan,
    Importance,
    Level,
    Method,
    PlanEntry,
    Purpose,
    ResourceFlags,
    Status,
)
from .results import MetricResult
from .syntax import SyntacticReport

MARKDOWN_ROW_LIMIT = 50


class LevelStatus(str, Enum):
    PASS = "Pass"
    FINDINGS = "Findings"
    SKIPPED = "Skipped"


@dataclass(frozen=True)
class LevelSummary:
    status: LevelStatus
    reason: str = ""

    def to_dict(self) -> dict:
        return {"status": self.status.value, "reason": self.reason}

    @classmethod
    def from_dict(cls, d: dict) -> "LevelSummary":
        return cls(LevelStatus(d["status"]), d.get("reason", ""))


@dataclass(frozen=True)
class SkippedMethod:
    level: Level
    method: Method
    reason: str

    def to_dict(self) -> dict:
        return {"level": self.level.value, "method": self.method.value, "reason": self.reason}

    @classmethod
    def from_dict(cls, d: dict) -> "SkippedMethod":
        return cls(Level(d["level"]), Method(d["method"]), d["reason"])


@dataclass(frozen=True)
class Report:
    plan: EvaluationPlan
    results: tuple[MetricResult, ...]
    syntactic: SyntacticReport
    context: ContextReport | None
    summary: Mapping[Level, LevelSummary]
    skipped: tuple[SkippedMethod, ...] = ()
    tool_version: str = ""
    input_digests: Mapping[str, str] = field(default_factory=dict)
    matrix_source: str = "paper-default"

    def __eq__(self, other):
        if not isinstance(other, Report):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def results_for(self, level: Level) -> list[MetricResult]:
        return [r for r in self.results if r.level is level]

    def to_dict(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "input_digests": dict(self.input_digests),
            "matrix_source": self.matrix_source,
            "plan": plan_to_dict(self.plan),
            "summary": {lv.value: s.to_dict() for lv, s in self.summary.items()},
            "results": [r.to_dict() for r in self.results],
            "skipped": [s.to_dict() for s in self.skipped],
            "syntactic": self.syntactic.to_dict(),
            "context": self.context.to_dict() if self.context is not None else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(
            plan=plan_from_dict(d["plan"]),
            results=tuple(MetricResult.from_dict(r) for r in d["results"]),
            syntactic=SyntacticReport.from_dict(d["syntactic"]),
            context=ContextReport.from_dict(d["context"]) if d.get("context") is not None else None,
            summary={Level(k): LevelSummary.from_dict(v) for k, v in d["summary"].items()},
            skipped=tuple(SkippedMethod.from_dict(s) for s in d.get("skipped", [])),
            tool_version=d.get("tool_version", ""),
            input_digests=dict(d.get("input_digests", {})),
            matrix_source=d.get("matrix_source", "paper-default"),
        )


def plan_to_dict(plan: EvaluationPlan) -> dict:
    return {
        "purposes": sorted(p.value for p in plan.purposes),
        "resource_flags": {
            "gold_standard_available": plan.resource_flags.gold_standard_available,
            "corpus_available": plan.resource_flags.corpus_available,
            "application_available": plan.resource_flags.application_available,
            "built_from_data_sources": plan.resource_flags.built_from_data_sources,
        },
        "entries": [
            {
                "purpose": e.purpose.value,
                "level": e.level.value,
                "importance": e.importance.value,
                "methods": [m.value for m in e.methods],
                "status": e.status.value,
                "rationale": e.rationale,
            }
            for e in plan.entries
        ],
    }


def plan_from_dict(d: dict) -> EvaluationPlan:
    entries = tuple(
        PlanEntry(
            Purpose(e["purpose"]),
            Level(e["level"]),
            Importance(e["importance"]),
            tuple(Method(m) for m in e["methods"]),
            Status(e["status"]),
            e.get("rationale", ""),
        )
        for e in d["entries"]
    )
    return EvaluationPlan(frozenset(Purpose(p) for p in d["purposes"]), entries, ResourceFlags(**d["resource_flags"]))


def parse_report(text: str) -> Report:
    return Report.from_dict(json.loads(text))


def render_report(report: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"
    if fmt == "markdown":
        return _markdown(report)
    raise ValueError(f"unknown report format {fmt!r}")


def plan_table(plan: EvaluationPlan) -> list[str]:
    lines = ["| Purpose | Level | Importance | Methods | Status | Rationale |", "|---|---|---|---|---|---|"]
    for e in plan.entries:
        methods = ", ".join(m.value for m in e.methods) or "-"
        lines.append(
            f"| {e.purpose.value} | {e.level.value} | {e.importance.value} | {methods} | {e.status.value} | {_cell(e.rationale) or '-'} |"
        )
    return lines


def _cell(text: str) -> str:
    return str(text).replace("|", "\\|").replace("\n", " ")


def _fmt_value(v) -> str:
    if isinstance(v, float) and not v.is_integer():
        return f"{v:.4f}"
    return str(int(v)) if isinstance(v, float) else str(v)


def _markdown(r: Report) -> str:
    out = ["# Ontology evaluation report", ""]
    out.append(f"Tool version: {r.tool_version}  ")
    out.append(f"Suitability matrix: {r.matrix_source}")
    out.append("")
    out.append("## Inputs")
    out.append("")
    out += ["| Input | SHA-256 |", "|---|---|"]
    out += [f"| {_cell(path)} | `{digest}` |" for path, digest in r.input_digests.items()]
    out.append("")
    out.append("## Evaluation plan")
    out.append("")
    out += plan_table(r.plan)
    out.append("")

    for level, summary in r.summary.items():
        out.append(f"## {level.value}")
        out.append("")
        status = summary.status.value + (f" ({summary.reason})" if summary.reason else "")
        out.append(f"Status: **{status}**")
        out.append("")
        results = r.results_for(level)
        skipped = [s for s in r.skipped if s.level is level]
        if results:
            out += ["| Metric | Method | Value | Provenance |", "|---|---|---|---|"]
            for m in results:
                out.append(f"| {m.metric_name} | {m.method.value} | {_fmt_value(m.value)} | {_cell(m.provenance)} |")
            out.append("")
        for s in skipped:
            out.append(f"- Skipped {s.method.value}: {s.reason}")
        if skipped:
            out.append("")
        findings = [(m, f) for m in results for f in m.findings]
        issues = list(r.syntactic.issues) if level is Level.SYNTACTIC else []
        failed_tasks = (
            [t for t in r.context.per_task if not t.passed]
            if level is Level.CONTEXT and r.context is not None
            else []
        )
        if not findings and not issues and not failed_tasks:
            out.append("No findings.")
            out.append("")
        if findings:
            out += ["| Metric | Kind | Subjects | Detail |", "|---|---|---|---|"]
            for m, f in findings[:MARKDOWN_ROW_LIMIT]:
                out.append(f"| {m.metric_name} | {f.kind.value} | {_cell(', '.join(f.subjects))} | {_cell(f.detail)} |")
            if len(findings) > MARKDOWN_ROW_LIMIT:
                out.append(f"\n... {len(findings) - MARKDOWN_ROW_LIMIT} more findings in the JSON report")
            out.append("")
        if issues:
            out += ["| Severity | Code | Subject | Message |", "|---|---|---|---|"]
            for i in issues[:MARKDOWN_ROW_LIMIT]:
                out.append(f"| {i.severity.value} | {i.code} | {_cell(i.subject or '-')} | {_cell(i.message)} |")
            if len(issues) > MARKDOWN_ROW_LIMIT:
                out.append(f"\n... {len(issues) - MARKDOWN_ROW_LIMIT} more issues in the JSON report")
            out.append("")
        if level is Level.CONTEXT and r.context is not None:
            out.append(f"Competency pass rate: {_fmt_value(r.context.pass_rate)}")
            out.append("")
            if r.context.per_task:
                out += ["| Task | Passed | Rows | Reason |", "|---|---|---|---|"]
                for t in r.context.per_task:
                    out.append(f"| {t.task_id} | {'yes' if t.passed else 'no'} | {len(t.actual_bindings)} | {_cell(t.reason) or '-'} |")
                out.append("")
    return "\n".join(out).rstrip() + "\n"
