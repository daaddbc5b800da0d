"""Run configuration: one JSON document per evaluation run."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ConfigError, InputIOError
from .framework import Level, Purpose, ResourceFlags
from .rdf.turtle import guess_format

FORMATS = ("ntriples", "turtle")


@dataclass(frozen=True)
class Thresholds:
    similarity: float = 0.8
    term_k: int = 50
    window: int = 10
    triple_cap: int = 1_000_000


@dataclass(frozen=True)
class OntologyInput:
    path: Path
    format: str


@dataclass(frozen=True)
class RunConfig:
    ontologies: tuple[OntologyInput, ...]
    purposes: tuple[Purpose, ...]
    resource_flags: ResourceFlags = field(default_factory=ResourceFlags)
    exclusions: tuple[tuple[Level, str], ...] = ()
    include_levels: tuple[Level, ...] = ()
    gold_path: Path | None = None
    gold_format: str | None = None
    corpus_dir: Path | None = None
    rules_path: Path | None = None
    suite_path: Path | None = None
    expert_scores_path: Path | None = None
    expected_terms_path: Path | None = None
    matrix_overlay: dict | None = None
    matrix_overlay_source: str = "paper-default"
    thresholds: Thresholds = field(default_factory=Thresholds)
    record_timings: bool = False

    def optional_paths(self) -> dict[str, Path]:
        named = {
            "gold_path": self.gold_path,
            "corpus_dir": self.corpus_dir,
            "rules_path": self.rules_path,
            "suite_path": self.suite_path,
            "expert_scores_path": self.expert_scores_path,
            "expected_terms_path": self.expected_terms_path,
        }
        return {k: v for k, v in named.items() if v is not None}


DEFAULT_CONFIG: dict[str, Any] = {
    "$comment": [
        "Relative paths resolve against this file's directory.",
        "ontologies: list of paths or {path, format}; format is ntriples or turtle (guessed from .ttl/.nt).",
        "purposes: any of ShareVocabulariesIntegrateData, KnowledgeSearchExploration, SystemInteroperability, DecisionSupport.",
        "resource_flags gate methods: no gold standard drops GoldStandard, no corpus drops DataDriven, no application drops ApplicationBased.",
        "built_from_data_sources: true excludes the Lexical level as redundant.",
        "exclusions: list of {level, rationale}; include_levels adds e.g. StructureArchitectureDesign.",
        "Optional inputs set to null make the methods needing them report Skipped with a reason.",
        "expected_terms_path: text file, one term per line, for completeness coverage.",
        "matrix_overlay: null, an inline {method: {level: grade}} object, or a path to one; only Suitable/Preferred can be swapped.",
        "thresholds: similarity in (0, 1] for label alignment, term_k top corpus terms, window co-occurrence span in tokens, triple_cap for inference.",
        "record_timings: include per-task query timings (makes reports non-reproducible byte for byte)."
    ],
    "ontologies": [{"path": "ontology.nt", "format": "ntriples"}],
    "purposes": [Purpose.SHARE_VOCABULARIES_INTEGRATE_DATA.value, Purpose.DECISION_SUPPORT.value],
    "resource_flags": {
        "gold_standard_available": True,
        "corpus_available": True,
        "application_available": True,
        "built_from_data_sources": False,
    },
    "exclusions": [],
    "include_levels": [],
    "gold_path": None,
    "corpus_dir": None,
    "rules_path": None,
    "suite_path": None,
    "expert_scores_path": None,
    "expected_terms_path": None,
    "matrix_overlay": None,
    "thresholds": {"similarity": 0.8, "term_k": 50, "window": 10, "triple_cap": 1_000_000},
    "record_timings": False,
}

_KNOWN_KEYS = set(DEFAULT_CONFIG) | {"gold_format"}


def default_config_text() -> str:
    return json.dumps(DEFAULT_CONFIG, indent=2) + "\n"


def _enum_list(raw, enum, key: str):
    if not isinstance(raw, list):
        raise ConfigError(f"{key} must be a list")
    try:
        return tuple(enum(x) for x in raw)
    except ValueError as exc:
        allowed = ", ".join(m.value for m in enum)
        raise ConfigError(f"{key}: {exc} (allowed: {allowed})") from None


def _path(raw, base: Path, key: str) -> Path | None:
    if raw is None:
        return None
    if not isinstance(raw, str) or not raw:
        raise ConfigError(f"{key} must be a path string or null")
    p = Path(raw)
    return p if p.is_absolute() else base / p


def _number(raw, key: str, kind, low, high=None):
    if isinstance(raw, bool) or not isinstance(raw, (int, float)) or (kind is int and not isinstance(raw, int)):
        raise ConfigError(f"thresholds.{key} must be a {kind.__name__}")
    if raw < low or (high is not None and raw > high):
        raise ConfigError(f"thresholds.{key} out of range")
    return kind(raw)


def parse_config(data: Any, base_dir: str | Path = ".") -> RunConfig:
    """Validate a decoded config document. Relative paths resolve against ``base_dir``."""
    base = Path(base_dir)
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(data) - _KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")

    raw_onts = data.get("ontologies")
    if not isinstance(raw_onts, list) or not raw_onts:
        raise ConfigError("ontologies must be a non-empty list")
    ontologies = []
    for i, item in enumerate(raw_onts):
        if isinstance(item, str):
            item = {"path": item}
        if not isinstance(item, dict) or "path" not in item:
            raise ConfigError(f"ontologies[{i}] needs a path")
        path = _path(item["path"], base, f"ontologies[{i}].path")
        fmt = item.get("format") or guess_format(str(path))
        if fmt not in FORMATS:
            raise ConfigError(f"ontologies[{i}].format must be one of {FORMATS}")
        ontologies.append(OntologyInput(path, fmt))

    purposes = _enum_list(data.get("purposes", []), Purpose, "purposes")
    if not purposes:
        raise ConfigError("purposes must name at least one purpose")

    raw_flags = data.get("resource_flags") or {}
    if not isinstance(raw_flags, dict):
        raise ConfigError("resource_flags must be an object")
    flag_names = set(ResourceFlags.__dataclass_fields__)
    if set(raw_flags) - flag_names:
        raise ConfigError(f"unknown resource flags: {', '.join(sorted(set(raw_flags) - flag_names))}")
    if not all(isinstance(v, bool) for v in raw_flags.values()):
        raise ConfigError("resource flags must be booleans")
    flags = ResourceFlags(**raw_flags)

    exclusions = []
    for i, ex in enumerate(data.get("exclusions") or []):
        if not isinstance(ex, dict) or "level" not in ex or not isinstance(ex.get("rationale"), str):
            raise ConfigError(f"exclusions[{i}] needs a level and a rationale")
        try:
            exclusions.append((Level(ex["level"]), ex["rationale"]))
        except ValueError:
            raise ConfigError(f"exclusions[{i}]: unknown level {ex['level']!r}") from None

    include_levels = _enum_list(data.get("include_levels") or [], Level, "include_levels")

    raw_thr = data.get("thresholds") or {}
    if not isinstance(raw_thr, dict) or set(raw_thr) - set(Thresholds.__dataclass_fields__):
        raise ConfigError("thresholds must be an object with similarity, term_k, window, triple_cap")
    d = Thresholds()
    sim = _number(raw_thr.get("similarity", d.similarity), "similarity", float, 0.0, 1.0)
    if sim == 0:
        raise ConfigError("thresholds.similarity must be greater than 0")
    thresholds = Thresholds(
        similarity=sim,
        term_k=_number(raw_thr.get("term_k", d.term_k), "term_k", int, 1),
        window=_number(raw_thr.get("window", d.window), "window", int, 2),
        triple_cap=_number(raw_thr.get("triple_cap", d.triple_cap), "triple_cap", int, 1),
    )

    overlay = data.get("matrix_overlay")
    overlay_source = "paper-default"
    if isinstance(overlay, str):
        overlay_path = _path(overlay, base, "matrix_overlay")
        overlay_source = str(overlay_path)
        try:
            overlay = json.loads(overlay_path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise InputIOError(f"cannot read matrix overlay {overlay_path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"matrix overlay {overlay_path} is not valid JSON: {exc}") from None
    elif isinstance(overlay, dict):
        overlay_source = "inline config overlay"
    elif overlay is not None:
        raise ConfigError("matrix_overlay must be an object, a path, or null")

    gold_path = _path(data.get("gold_path"), base, "gold_path")
    gold_format = data.get("gold_format") or (guess_format(str(gold_path)) if gold_path else None)
    if gold_format is not None and gold_format not in FORMATS:
        raise ConfigError(f"gold_format must be one of {FORMATS}")

    record_timings = data.get("record_timings", False)
    if not isinstance(record_timings, bool):
        raise ConfigError("record_timings must be a boolean")

    return RunConfig(
        ontologies=tuple(ontologies),
        purposes=purposes,
        resource_flags=flags,
        exclusions=tuple(exclusions),
        include_levels=include_levels,
        gold_path=gold_path,
        gold_format=gold_format,
        corpus_dir=_path(data.get("corpus_dir"), base, "corpus_dir"),
        rules_path=_path(data.get("rules_path"), base, "rules_path"),
        suite_path=_path(data.get("suite_path"), base, "suite_path"),
        expert_scores_path=_path(data.get("expert_scores_path"), base, "expert_scores_path"),
        expected_terms_path=_path(data.get("expected_terms_path"), base, "expected_terms_path"),
        matrix_overlay=overlay,
        matrix_overlay_source=overlay_source,
        thresholds=thresholds,
        record_timings=record_timings,
    )


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputIOError(f"cannot read config {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    return parse_config(data, path.parent)
