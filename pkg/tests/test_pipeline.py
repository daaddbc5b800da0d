import json
import random
import shutil
from pathlib import Path

import pytest

from onteval.config import default_config_text, load_config, parse_config
from onteval.errors import ConfigError, InputIOError
from onteval.framework import Grade, Level, Method, Status, default_matrix
from onteval.pipeline import NO_GOLD, PARSE_FAILED, prepare_plan, run_pipeline
from onteval.report import LevelStatus, parse_report, render_report
from onteval.results import Finding, FindingKind, MetricResult

from synthetic import random_report

FIXTURE = Path(__file__).parent / "fixtures" / "pest_control"


@pytest.fixture(scope="module")
def fixture_report():
    return run_pipeline(load_config(FIXTURE / "config.json"))


def _config(tmp_path, **overrides):
    for name in ("ontology.ttl", "rules.json", "suite.json"):
        shutil.copy(FIXTURE / name, tmp_path / name)
    data = {
        "ontologies": ["ontology.ttl"],
        "purposes": ["KnowledgeSearchExploration"],
        "resource_flags": {"gold_standard_available": True, "corpus_available": False},
    }
    data.update(overrides)
    return parse_config(data, tmp_path)


def test_case_study_plan(fixture_report):
    plan = fixture_report.plan
    assert plan.selected_levels() == {Level.SEMANTIC_RELATIONS, Level.SYNTACTIC, Level.CONTEXT}
    lexical = plan.entries_for(Level.LEXICAL)
    assert lexical and all(e.status is Status.EXCLUDED and e.rationale for e in lexical)


def test_case_study_results(fixture_report):
    sr = {r.metric_name: r for r in fixture_report.results_for(Level.SEMANTIC_RELATIONS)}
    assert {"semantic_inconsistency_errors", "identical_definitions", "completeness_coverage"} <= set(sr)
    assert sr["completeness_coverage"].value == pytest.approx(6 / 7)
    assert fixture_report.syntactic.parse_ok
    assert fixture_report.context is not None and fixture_report.context.pass_rate == 1.0
    assert fixture_report.summary[Level.CONTEXT].status is LevelStatus.PASS


def test_summary_covers_exactly_selected_levels(fixture_report):
    assert set(fixture_report.summary) == fixture_report.plan.selected_levels()


def test_every_selected_level_has_results_or_skips(fixture_report):
    for level in fixture_report.plan.selected_levels():
        assert fixture_report.results_for(level) or any(s.level is level for s in fixture_report.skipped)


def test_never_runs_unsuitable_pairs(fixture_report):
    m = default_matrix()
    for r in fixture_report.results:
        assert m.grade(r.method, r.level) is not Grade.UNSUITABLE


def test_digests_cover_all_inputs(fixture_report):
    names = {Path(p).name for p in fixture_report.input_digests}
    assert {"ontology.ttl", "rules.json", "suite.json", "expert_scores.json", "expected_terms.txt"} <= names
    assert all(len(d) == 64 and int(d, 16) >= 0 for d in fixture_report.input_digests.values())


def test_run_is_byte_identical():
    cfg = load_config(FIXTURE / "config.json")
    assert render_report(run_pipeline(cfg)) == render_report(run_pipeline(cfg))


def test_json_round_trip(fixture_report):
    text = render_report(fixture_report)
    assert parse_report(text) == fixture_report
    assert render_report(parse_report(text)) == text


@pytest.mark.parametrize("seed", range(50))
def test_random_report_round_trip(seed):
    r = random_report(random.Random(seed))
    back = parse_report(render_report(r))
    assert back == r and back.results == r.results and back.plan == r.plan


def test_missing_gold_is_skipped(tmp_path):
    report = run_pipeline(_config(tmp_path))
    gold_skips = [s for s in report.skipped if s.method is Method.GOLD_STANDARD]
    assert gold_skips and all(s.reason == NO_GOLD for s in gold_skips)
    assert not any(r.method is Method.GOLD_STANDARD for r in report.results)


def test_gold_comparison_runs_when_available(tmp_path):
    shutil.copy(FIXTURE / "ontology.ttl", tmp_path / "gold.ttl")
    report = run_pipeline(_config(tmp_path, gold_path="gold.ttl"))
    by_name = {r.metric_name: r.value for r in report.results if r.method is Method.GOLD_STANDARD}
    assert by_name["lexical_f1"] == 1.0 and by_name["taxonomic_overlap"] == 1.0


def test_unparsable_ontology(tmp_path):
    cfg = _config(tmp_path)
    (tmp_path / "ontology.ttl").write_text("ex:a ex:b", encoding="utf-8")
    report = run_pipeline(cfg)
    assert not report.syntactic.parse_ok
    assert all(s.reason == PARSE_FAILED for s in report.skipped if s.level is not Level.SYNTACTIC)
    assert report.summary[Level.SYNTACTIC].status is LevelStatus.FINDINGS


def test_missing_inputs_fail_before_evaluation(tmp_path):
    with pytest.raises(InputIOError):
        run_pipeline(_config(tmp_path, suite_path="nope.json"))


def test_config_errors():
    with pytest.raises(ConfigError):
        parse_config({"ontologies": [], "purposes": ["DecisionSupport"]})
    with pytest.raises(ConfigError):
        parse_config({"ontologies": ["a.nt"], "purposes": ["Fun"]})
    with pytest.raises(ConfigError):
        parse_config({"ontologies": ["a.nt"], "purposes": ["DecisionSupport"], "extra": 1})
    with pytest.raises(ConfigError):
        parse_config({"ontologies": ["a.nt"], "purposes": ["DecisionSupport"], "thresholds": {"window": 1}})


def test_overlay_errors_are_config_errors(tmp_path):
    cfg = _config(tmp_path, matrix_overlay={"DataDriven": {"Context": "Preferred"}})
    with pytest.raises(ConfigError):
        prepare_plan(cfg)


def test_default_config_parses(tmp_path):
    data = json.loads(default_config_text())
    cfg = parse_config(data, tmp_path)
    assert cfg.purposes and cfg.ontologies


def test_markdown_no_findings(tmp_path):
    report = run_pipeline(_config(tmp_path, purposes=["DecisionSupport"], resource_flags={}))
    md = render_report(report, "markdown")
    for level in report.summary:
        assert f"## {level.value}" in md
    clean = [lv for lv, s in report.summary.items() if s.status is LevelStatus.PASS]
    assert clean and md.count("No findings.") >= len(clean)


def test_findings_serialized(fixture_report):
    findings = tuple(Finding(FindingKind.REDUNDANCY_ERROR, (f"http://e/{i}",), "x") for i in range(3))
    extra = MetricResult("redundancy_errors", 3, Level.SEMANTIC_RELATIONS, Method.CRITERIA_BASED, "p", findings)
    r = type(fixture_report)(**{**fixture_report.__dict__, "results": (extra,)})
    data = json.loads(render_report(r))
    assert len(data["results"][0]["findings"]) == 3
    md = render_report(r, "markdown")
    assert sum(line.count("RedundancyError") for line in md.splitlines() if line.startswith("|")) == 3
