"""Purpose -> level -> method selection.

The suitability grades and the purpose/level links are fixed tables; an
evaluation plan is built by walking purposes, their levels, and the methods
each level admits, then applying resource gating and user exclusions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import PlanError


class Purpose(str, Enum):
    SHARE_VOCABULARIES_INTEGRATE_DATA = "ShareVocabulariesIntegrateData"
    KNOWLEDGE_SEARCH_EXPLORATION = "KnowledgeSearchExploration"
    SYSTEM_INTEROPERABILITY = "SystemInteroperability"
    DECISION_SUPPORT = "DecisionSupport"


class Level(str, Enum):
    LEXICAL = "Lexical"
    HIERARCHY = "Hierarchy"
    SEMANTIC_RELATIONS = "SemanticRelations"
    CONTEXT = "Context"
    SYNTACTIC = "Syntactic"
    STRUCTURE_ARCHITECTURE_DESIGN = "StructureArchitectureDesign"


class Method(str, Enum):
    GOLD_STANDARD = "GoldStandard"
    APPLICATION_BASED = "ApplicationBased"
    CRITERIA_BASED = "CriteriaBased"
    DATA_DRIVEN = "DataDriven"


class Grade(str, Enum):
    UNSUITABLE = "Unsuitable"
    SUITABLE = "Suitable"
    PREFERRED = "Preferred"

    @property
    def rank(self) -> int:
        return _GRADE_RANK[self]


_GRADE_RANK = {Grade.UNSUITABLE: 0, Grade.SUITABLE: 1, Grade.PREFERRED: 2}


class Importance(str, Enum):
    PRIMARY = "Primary"
    UNIVERSAL = "Universal"


class Status(str, Enum):
    SELECTED = "Selected"
    EXCLUDED = "Excluded"


def _enum_index(member: Enum) -> int:
    return list(type(member)).index(member)


L, M = Level, Method

# Methods usable at each level.
_SUITABLE_AT: dict[Level, frozenset[Method]] = {
    L.LEXICAL: frozenset(M),
    L.HIERARCHY: frozenset(M),
    L.SEMANTIC_RELATIONS: frozenset(M),
    L.CONTEXT: frozenset({M.APPLICATION_BASED, M.CRITERIA_BASED}),
    L.SYNTACTIC: frozenset({M.GOLD_STANDARD, M.CRITERIA_BASED}),
    L.STRUCTURE_ARCHITECTURE_DESIGN: frozenset({M.CRITERIA_BASED}),
}

DEFAULT_PREFERRED: frozenset[tuple[Method, Level]] = frozenset(
    {
        (M.DATA_DRIVEN, L.LEXICAL),
        (M.GOLD_STANDARD, L.HIERARCHY),
        (M.CRITERIA_BASED, L.HIERARCHY),
        (M.APPLICATION_BASED, L.CONTEXT),
    }
)

# No method is preferred for semantic relations; criteria-based goes first there.
_TIE_BREAK: dict[Level, tuple[Method, ...]] = {
    L.SEMANTIC_RELATIONS: (M.CRITERIA_BASED, M.GOLD_STANDARD, M.APPLICATION_BASED, M.DATA_DRIVEN),
}

_PRIMARY_LEVELS: dict[Purpose, tuple[Level, ...]] = {
    Purpose.SHARE_VOCABULARIES_INTEGRATE_DATA: (L.SEMANTIC_RELATIONS, L.CONTEXT),
    Purpose.KNOWLEDGE_SEARCH_EXPLORATION: (L.HIERARCHY,),
    Purpose.SYSTEM_INTEROPERABILITY: (L.SEMANTIC_RELATIONS,),
    Purpose.DECISION_SUPPORT: (L.CONTEXT,),
}
UNIVERSAL_LEVELS = (L.LEXICAL, L.SYNTACTIC)

LEXICAL_REDUNDANT = (
    "ontology vocabulary was built from existing online data sources; "
    "comparing it against those sources again would be redundant"
)


@dataclass(frozen=True)
class SuitabilityMatrix:
    grades: Mapping[tuple[Method, Level], Grade]
    overlay_source: str = "paper-default"

    def grade(self, method: Method, level: Level) -> Grade:
        return self.grades[(method, level)]

    def suitable_methods(self, level: Level) -> list[Method]:
        return [m for m in Method if self.grade(m, level) is not Grade.UNSUITABLE]

    def with_overlay(self, overlay: Mapping[str, Mapping[str, str]], source: str) -> "SuitabilityMatrix":
        """Re-grade cells between Suitable and Preferred.

        ``overlay`` maps method name -> level name -> grade name. Cells graded
        Unsuitable stay Unsuitable; attempts to change that raise ValueError.
        """
        grades = dict(self.grades)
        for method_name, per_level in overlay.items():
            method = Method(method_name)
            for level_name, grade_name in per_level.items():
                level, grade = Level(level_name), Grade(grade_name)
                current = grades[(method, level)]
                if (current is Grade.UNSUITABLE) != (grade is Grade.UNSUITABLE):
                    raise ValueError(
                        f"overlay cannot change suitability of {method.value} at {level.value} "
                        f"({current.value} -> {grade.value})"
                    )
                grades[(method, level)] = grade
        return SuitabilityMatrix(MappingProxyType(grades), source)

    def to_dict(self) -> dict:
        return {m.value: {lv.value: self.grade(m, lv).value for lv in Level} for m in Method}


def default_matrix() -> SuitabilityMatrix:
    grades = {}
    for method in Method:
        for level in Level:
            if method not in _SUITABLE_AT[level]:
                grades[(method, level)] = Grade.UNSUITABLE
            elif (method, level) in DEFAULT_PREFERRED:
                grades[(method, level)] = Grade.PREFERRED
            else:
                grades[(method, level)] = Grade.SUITABLE
    return SuitabilityMatrix(MappingProxyType(grades))


def levels_for_purpose(purpose: Purpose) -> list[tuple[Level, Importance]]:
    primary = _PRIMARY_LEVELS[purpose]
    out = []
    for level in Level:
        if level in primary:
            out.append((level, Importance.PRIMARY))
        elif level in UNIVERSAL_LEVELS:
            out.append((level, Importance.UNIVERSAL))
    return out


@dataclass(frozen=True)
class ResourceFlags:
    gold_standard_available: bool = True
    corpus_available: bool = True
    application_available: bool = True
    built_from_data_sources: bool = False

    def permits(self, method: Method) -> bool:
        if method is Method.GOLD_STANDARD:
            return self.gold_standard_available
        if method is Method.APPLICATION_BASED:
            return self.application_available
        if method is Method.DATA_DRIVEN:
            return self.corpus_available
        return True


@dataclass(frozen=True)
class PlanEntry:
    purpose: Purpose
    level: Level
    importance: Importance
    methods: tuple[Method, ...]
    status: Status = Status.SELECTED
    rationale: str = ""


@dataclass(frozen=True)
class EvaluationPlan:
    purposes: frozenset[Purpose]
    entries: tuple[PlanEntry, ...]
    resource_flags: ResourceFlags = field(default_factory=ResourceFlags)

    def selected(self) -> list[PlanEntry]:
        return [e for e in self.entries if e.status is Status.SELECTED]

    def selected_levels(self) -> set[Level]:
        return {e.level for e in self.selected()}

    def selected_pairs(self) -> list[tuple[Level, Method]]:
        """Distinct (level, method) pairs to run, in level then method order."""
        seen: dict[tuple[Level, Method], None] = {}
        for entry in sorted(self.selected(), key=lambda e: _enum_index(e.level)):
            for method in entry.methods:
                seen.setdefault((entry.level, method), None)
        return list(seen)

    def entries_for(self, level: Level) -> list[PlanEntry]:
        return [e for e in self.entries if e.level is level]


def order_methods(methods: Iterable[Method], level: Level, matrix: SuitabilityMatrix) -> tuple[Method, ...]:
    tie = _TIE_BREAK.get(level, tuple(Method))
    return tuple(sorted(methods, key=lambda m: (-matrix.grade(m, level).rank, tie.index(m))))


def _methods_for(level: Level, flags: ResourceFlags, matrix: SuitabilityMatrix) -> tuple[Method, ...]:
    usable = [m for m in matrix.suitable_methods(level) if flags.permits(m)]
    return order_methods(usable, level, matrix)


def build_plan(
    purposes: Iterable[Purpose],
    flags: ResourceFlags | None = None,
    exclusions: Iterable[tuple[Level, str]] = (),
    matrix: SuitabilityMatrix | None = None,
    extra_levels: Iterable[Level] = (),
) -> EvaluationPlan:
    """Build the evaluation plan for a set of ontology purposes.

    ``extra_levels`` adds levels no purpose selects on its own (in practice
    structure/architecture/design) to every purpose. An exclusion for a level
    the declared purposes do not select is kept as an Excluded entry under
    each purpose that would select it; a level no purpose can select raises
    PlanError.
    """
    purposes = frozenset(Purpose(p) for p in purposes)
    if not purposes:
        raise PlanError("at least one purpose is required")
    flags = flags or ResourceFlags()
    matrix = matrix or default_matrix()
    extra = [Level(lv) for lv in extra_levels]

    excluded: dict[Level, str] = {}
    for level, rationale in exclusions:
        level = Level(level)
        if not rationale or not rationale.strip():
            raise PlanError(f"exclusion of {level.value} needs a rationale")
        if level in excluded:
            raise PlanError(f"{level.value} excluded more than once")
        excluded[level] = rationale.strip()

    entries: list[PlanEntry] = []
    seen: set[tuple[Purpose, Level]] = set()

    def add(purpose: Purpose, level: Level, importance: Importance):
        if (purpose, level) in seen:
            return
        seen.add((purpose, level))
        methods = _methods_for(level, flags, matrix)
        status, rationale = Status.SELECTED, ""
        if level in excluded:
            status, rationale = Status.EXCLUDED, excluded[level]
        elif level is Level.LEXICAL and flags.built_from_data_sources:
            status, rationale = Status.EXCLUDED, LEXICAL_REDUNDANT
        elif not methods:
            status, rationale = Status.EXCLUDED, "no suitable method is available for this level"
        entries.append(PlanEntry(purpose, level, importance, methods, status, rationale))

    for purpose in sorted(purposes, key=_enum_index):
        for level, importance in levels_for_purpose(purpose):
            add(purpose, level, importance)
        for level in extra:
            add(purpose, level, Importance.UNIVERSAL)

    planned = {e.level for e in entries}
    for level in sorted(set(excluded) - planned, key=_enum_index):
        owners = [p for p in Purpose if level in _PRIMARY_LEVELS[p]]
        if not owners:
            raise PlanError(f"exclusion names {level.value}, which no purpose selects")
        for purpose in owners:
            add(purpose, level, Importance.PRIMARY)

    entries.sort(key=lambda e: (_enum_index(e.purpose), _enum_index(e.level)))
    return EvaluationPlan(purposes, tuple(entries), flags)


def validate_plan(plan: EvaluationPlan, matrix: SuitabilityMatrix) -> list[str]:
    violations: list[str] = []
    seen: set[tuple[Purpose, Level]] = set()
    for e in plan.entries:
        where = f"{e.purpose.value}/{e.level.value}"
        if (e.purpose, e.level) in seen:
            violations.append(f"{where}: duplicate entry")
        seen.add((e.purpose, e.level))
        for m in e.methods:
            if matrix.grade(m, e.level) is Grade.UNSUITABLE:
                violations.append(f"{where}: {m.value} is unsuitable at this level")
        if len(set(e.methods)) != len(e.methods):
            violations.append(f"{where}: repeated method")
        ranks = [matrix.grade(m, e.level).rank for m in e.methods]
        if ranks != sorted(ranks, reverse=True):
            violations.append(f"{where}: preferred methods must precede suitable ones")
        if e.status is Status.EXCLUDED and not e.rationale.strip():
            violations.append(f"{where}: excluded without rationale")
        if e.status is Status.SELECTED and not e.methods:
            violations.append(f"{where}: selected with no methods")
    levels = {e.level for e in plan.entries}
    for required in UNIVERSAL_LEVELS:
        if required not in levels:
            violations.append(f"plan has no {required.value} entry")
    return violations
