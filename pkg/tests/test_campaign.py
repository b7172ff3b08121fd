import json
from pathlib import Path

import pytest

from solseed.campaign import (
    MUTATION_LOG,
    STATS_CSV,
    SUMMARY_JSON,
    LOG_FIELDS,
    changed_mutant_lines,
    changed_original_lines,
    format_stats_table,
    mutant_id,
    mutant_rel_path,
    read_mutation_log,
    run_campaign,
    validate_mutants,
)
from solseed.operators import OPERATOR_ORDER, OperatorConfig, OperatorId

from conftest import CORPUS, LISTINGS

# Hand-derived from the six listing files: each listing contains exactly
# one site for its own operator; the uc/us/cl listings additionally carry
# a call/send statement that CL wraps, and the cl listing's checked send
# is also a US site.
LISTINGS_EXPECTED = {"UC": 1, "US": 2, "TX": 1, "UR": 1, "CL": 3, "DTU": 1}


@pytest.fixture()
def campaign(tmp_path):
    out = tmp_path / "out"
    stats = run_campaign(CORPUS, OperatorConfig(), out, workers=1)
    return out, stats


def test_listings_corpus_site_counts(tmp_path):
    stats = run_campaign(LISTINGS, OperatorConfig(), tmp_path / "out")
    got = {row.operator: row.mutants for row in stats.rows}
    # before+after fixtures both live there; count only *_before originals
    mutants = read_mutation_log(tmp_path / "out" / MUTATION_LOG)
    before_counts = {op.value: 0 for op in OPERATOR_ORDER}
    for m in mutants:
        if m.source_path.endswith("_before.sol"):
            before_counts[m.operator] += 1
    assert before_counts == LISTINGS_EXPECTED


def test_empty_corpus_all_zero(tmp_path):
    empty = tmp_path / "corpus"
    empty.mkdir()
    stats = run_campaign(empty, OperatorConfig(), tmp_path / "out")
    assert stats.total_mutants == 0
    assert stats.parsed_contracts == 0
    assert stats.skipped_invalid == 0
    assert all(row.mutants == 0 for row in stats.rows)
    assert stats.mean_injection_rate == 0.0


def test_fixture_campaign_matches_oracle(campaign, site_table):
    _, stats = campaign
    expected_totals = {op.value: 0 for op in OPERATOR_ORDER}
    expected_files = {op.value: 0 for op in OPERATOR_ORDER}
    for per_file in site_table["files"].values():
        for op, count in per_file.items():
            expected_totals[op] += count
            if count:
                expected_files[op] += 1
    for row in stats.rows:
        assert row.mutants == expected_totals[row.operator]
        assert row.mutated_contracts == expected_files[row.operator]
    assert stats.parsed_contracts == len(site_table["files"])
    assert stats.skipped_invalid == len(site_table["invalid_files"])
    assert stats.no_pattern == len(site_table["no_pattern_files"])
    assert not stats.quarantined


def test_injection_rate_is_exact_fraction(campaign):
    _, stats = campaign
    for row in stats.rows:
        assert row.injection_rate == row.mutated_contracts / stats.parsed_contracts


def test_log_schema_and_ordering(campaign):
    out, _ = campaign
    records = [
        json.loads(line)
        for line in (out / MUTATION_LOG).read_text().splitlines()
        if line
    ]
    assert records, "empty mutation log"
    order = {op.value: i for i, op in enumerate(OPERATOR_ORDER)}
    keys = [
        (r["source_path"], order[r["operator"]], int(r["id"].rsplit("-", 1)[1]))
        for r in records
    ]
    assert keys == sorted(keys)
    for record in records:
        assert tuple(record.keys()) == LOG_FIELDS
        assert (out / record["output_path"]).is_file()


def test_mutant_ids_unique_and_layout(campaign):
    out, _ = campaign
    mutants = read_mutation_log(out / MUTATION_LOG)
    ids = [m.id for m in mutants]
    assert len(ids) == len(set(ids))
    for m in mutants:
        assert m.output_path == mutant_rel_path(m.source_path, m.operator, m.ordinal)
        assert m.id == mutant_id(m.source_path, m.operator, m.ordinal)
        assert m.output_path.endswith(f"{m.operator}/{m.id}.sol")


def test_mutant_file_contains_mutated_snippet(campaign):
    out, _ = campaign
    for m in read_mutation_log(out / MUTATION_LOG):
        text = (out / m.output_path).read_text()
        assert m.mutated_snippet in text


def test_stats_csv_shape(campaign):
    out, stats = campaign
    lines = (out / STATS_CSV).read_text().splitlines()
    assert lines[0] == "operator,mutated_contracts,mutants,injection_rate"
    assert lines[-1].startswith("TOTAL,")
    assert len(lines) == 1 + len(stats.rows) + 1
    rates = [float(line.split(",")[3]) for line in lines[1:-1]]
    assert rates == sorted(rates, reverse=True)


def test_determinism_across_worker_counts(tmp_path):
    out1 = tmp_path / "w1"
    out8 = tmp_path / "w8"
    run_campaign(CORPUS, OperatorConfig(), out1, workers=1)
    run_campaign(CORPUS, OperatorConfig(), out8, workers=8)
    files1 = sorted(p.relative_to(out1) for p in out1.rglob("*") if p.is_file())
    files8 = sorted(p.relative_to(out8) for p in out8.rglob("*") if p.is_file())
    assert files1 == files8
    for rel in files1:
        assert (out1 / rel).read_bytes() == (out8 / rel).read_bytes(), rel


def test_consecutive_runs_byte_identical(tmp_path):
    out = tmp_path / "out"
    run_campaign(CORPUS, OperatorConfig(), out, workers=2)
    first = {
        p.relative_to(out): p.read_bytes() for p in out.rglob("*") if p.is_file()
    }
    run_campaign(CORPUS, OperatorConfig(), out, workers=2)
    second = {
        p.relative_to(out): p.read_bytes() for p in out.rglob("*") if p.is_file()
    }
    assert first == second


def test_operator_filter(tmp_path):
    cfg = OperatorConfig(enabled=frozenset({OperatorId.TX}))
    stats = run_campaign(CORPUS, cfg, tmp_path / "out")
    assert [row.operator for row in stats.rows] == ["TX"]
    mutants = read_mutation_log(tmp_path / "out" / MUTATION_LOG)
    assert mutants and all(m.operator == "TX" for m in mutants)


def test_missing_corpus_is_fatal(tmp_path):
    with pytest.raises(FileNotFoundError):
        run_campaign(tmp_path / "nope", OperatorConfig(), tmp_path / "out")


def test_summary_records_config(campaign):
    out, _ = campaign
    summary = json.loads((out / SUMMARY_JSON).read_text())
    assert summary["config"]["cl_loop_bound"] == 1000
    assert summary["parsed_contracts"] == summary["mutated_contracts"] + summary["no_pattern"]


# -- validation ------------------------------------------------------------


def test_validation_passes_on_clean_campaign(campaign):
    out, _ = campaign
    report = validate_mutants(out, CORPUS)
    assert report.passed
    assert report.failure_rate == 0.0
    assert report.total > 0
    assert report.compile_failures is None


def test_validation_detects_corrupted_log_line(campaign):
    out, _ = campaign
    log_path = out / MUTATION_LOG
    records = [json.loads(line) for line in log_path.read_text().splitlines()]
    records[0]["line"] += 7  # point the log at the wrong line
    with log_path.open("w") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")
    report = validate_mutants(out, CORPUS)
    assert records[0]["id"] in report.log_mismatch_failures
    assert records[0]["id"] in report.pattern_failures
    assert not report.passed


def test_validation_detects_corrupted_mutant_file(campaign):
    out, _ = campaign
    mutants = read_mutation_log(out / MUTATION_LOG)
    victim = mutants[0]
    path = out / victim.output_path
    path.write_text(path.read_text() + "\n}}} not solidity {{{")
    report = validate_mutants(out, CORPUS)
    assert victim.id in report.reparse_failures


def test_validation_missing_log_is_fatal(tmp_path):
    (tmp_path / "out").mkdir()
    with pytest.raises(FileNotFoundError):
        validate_mutants(tmp_path / "out", CORPUS)


def test_validation_compile_step_records_exit_status(campaign):
    out, _ = campaign
    report = validate_mutants(out, CORPUS, compile_cmd="python3 -c pass {file}")
    assert report.compile_failures == []
    report = validate_mutants(
        out, CORPUS, compile_cmd="python3 -c import(sys);sys.exit(1) {file}"
    )
    assert len(report.compile_failures) == report.total


# -- diff helpers ------------------------------------------------------------


def test_changed_line_sets():
    original = "a\nb\nc\nd\n"
    mutated = "a\nB\nc\nX\nd\n"
    # b replaced on line 2; X inserted at the seam between original 3 and 4
    assert changed_original_lines(original, mutated) == {2, 3, 4}
    # mutant side: B sits on line 2, X on line 4
    assert changed_mutant_lines(original, mutated) == {2, 4}


def test_changed_lines_pure_insertion():
    original = "a\nb\n"
    mutated = "a\nNEW\nb\n"
    assert 2 in changed_mutant_lines(original, mutated)
    assert changed_original_lines(original, mutated) & {1, 2}


def test_stats_table_format(campaign):
    _, stats = campaign
    table = format_stats_table(stats)
    assert table.splitlines()[0].startswith("Operator")
    assert "TOTAL" in table
