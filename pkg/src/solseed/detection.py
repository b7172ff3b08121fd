"""Score a static analyzer's detection of injected vulnerabilities.

Findings from analyzer reports on original/mutant pairs are compared per
mutant: the mutant is a true positive when a finding of the operator's
expected detector lands on the injected lines and was not already there
before the mutation (or, if the original was already flagged, when an
additional overlapping finding appears). Everything else the mutation
added or removed is accounted as side effects.

Because mutations shift line numbers, the injected lines are taken on the
mutant side (the diff between original and mutant), while the
before-mutation check uses the logged anchor line on the original side.
Both comparisons use a configurable +/-N line window (default 1).
"""

from __future__ import annotations

import csv
import json
import shlex
import subprocess
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path, PurePosixPath

from .campaign import (
    MUTATION_LOG,
    Mutant,
    changed_mutant_lines,
    read_mutation_log,
)
from .operators import OPERATOR_ORDER, OperatorId

OUTCOMES_LOG = "outcomes.jsonl"
SCORES_CSV = "scores.csv"
SIDE_EFFECTS_CSV = "side_effects.csv"

DEFAULT_DETECTOR_MAP: dict[OperatorId, str] = {
    OperatorId.UC: "unchecked-lowlevel",
    OperatorId.US: "unchecked-send",
    OperatorId.TX: "tx-origin",
    OperatorId.UR: "unused-return",
    OperatorId.CL: "calls-loop",
    OperatorId.DTU: "controlled-delegatecall",
}


class ReportError(Exception):
    """A findings report is missing, malformed, or violates the schema."""


@dataclass(frozen=True)
class Finding:
    detector: str
    file: str
    lines: frozenset[int]

    def __post_init__(self) -> None:
        if not self.detector:
            raise ReportError("finding with empty detector name")
        if not self.lines:
            raise ReportError(f"finding {self.detector!r} with empty line set")


class Verdict(Enum):
    TP = "TP"
    FN = "FN"
    ANALYZER_FAILED = "AnalyzerFailed"


@dataclass
class DetectionOutcome:
    mutant_id: str
    operator: str
    verdict: Verdict
    injected_lines: frozenset[int] = frozenset()
    side_effects_added: list[str] = field(default_factory=list)
    side_effects_removed: list[str] = field(default_factory=list)

    def to_record(self) -> dict:
        return {
            "mutant_id": self.mutant_id,
            "operator": self.operator,
            "verdict": self.verdict.value,
            "injected_lines": sorted(self.injected_lines),
            "side_effects_added": self.side_effects_added,
            "side_effects_removed": self.side_effects_removed,
        }

    @classmethod
    def from_record(cls, record: dict) -> "DetectionOutcome":
        return cls(
            mutant_id=record["mutant_id"],
            operator=record["operator"],
            verdict=Verdict(record["verdict"]),
            injected_lines=frozenset(record.get("injected_lines", [])),
            side_effects_added=list(record.get("side_effects_added", [])),
            side_effects_removed=list(record.get("side_effects_removed", [])),
        )


def _window(lines: set[int] | frozenset[int], tolerance: int) -> set[int]:
    return {line + d for line in lines for d in range(-tolerance, tolerance + 1)}


def classify(
    mutant: Mutant,
    original_findings: list[Finding] | None,
    mutant_findings: list[Finding] | None,
    detector_map: dict[OperatorId, str] | None = None,
    *,
    injected_lines: frozenset[int] | set[int],
    tolerance: int = 1,
) -> DetectionOutcome:
    """TP/FN verdict plus side-effect deltas for one mutant.

    ``mutant_findings`` or ``original_findings`` of None means the
    analyzer produced no report for that side: the mutant is excluded as
    AnalyzerFailed.
    """
    detector_map = detector_map or DEFAULT_DETECTOR_MAP
    expected = detector_map[OperatorId(mutant.operator)]
    if mutant_findings is None or original_findings is None:
        return DetectionOutcome(
            mutant_id=mutant.id,
            operator=mutant.operator,
            verdict=Verdict.ANALYZER_FAILED,
            injected_lines=frozenset(injected_lines),
        )

    mutant_window = _window(injected_lines, tolerance)
    anchor_window = _window({mutant.line}, tolerance)
    hits_after = sum(
        1
        for f in mutant_findings
        if f.detector == expected and f.lines & mutant_window
    )
    hits_before = sum(
        1
        for f in original_findings
        if f.detector == expected and f.lines & anchor_window
    )
    detected = hits_after > 0 and (hits_before == 0 or hits_after > hits_before)

    before = Counter(f.detector for f in original_findings if f.detector != expected)
    after = Counter(f.detector for f in mutant_findings if f.detector != expected)
    added = sorted((after - before).elements())
    removed = sorted((before - after).elements())

    return DetectionOutcome(
        mutant_id=mutant.id,
        operator=mutant.operator,
        verdict=Verdict.TP if detected else Verdict.FN,
        injected_lines=frozenset(injected_lines),
        side_effects_added=added,
        side_effects_removed=removed,
    )


# -- scoring -----------------------------------------------------------------


def format_ratio(numerator: int, denominator: int) -> str:
    """Ratio printed to three decimals, truncated (floor), '-' if undefined."""
    if denominator == 0:
        return "-"
    millis = numerator * 1000 // denominator
    return f"{millis // 1000}.{millis % 1000:03d}"


@dataclass
class ScoreRow:
    operator: str
    tp: int
    fn: int
    analyzer_failed: int = 0

    @property
    def recall(self) -> str:
        return format_ratio(self.tp, self.tp + self.fn)

    @property
    def fnr(self) -> str:
        return format_ratio(self.fn, self.tp + self.fn)


@dataclass
class ScoreTable:
    rows: list[ScoreRow]

    @property
    def total(self) -> ScoreRow:
        return ScoreRow(
            operator="TOTAL",
            tp=sum(r.tp for r in self.rows),
            fn=sum(r.fn for r in self.rows),
            analyzer_failed=sum(r.analyzer_failed for r in self.rows),
        )


def score(outcomes: list[DetectionOutcome]) -> ScoreTable:
    """Aggregate outcomes per operator; AnalyzerFailed mutants are counted
    but excluded from TP/FN and the derived rates."""
    rows: dict[str, ScoreRow] = {}
    for outcome in outcomes:
        row = rows.setdefault(outcome.operator, ScoreRow(outcome.operator, 0, 0))
        if outcome.verdict is Verdict.TP:
            row.tp += 1
        elif outcome.verdict is Verdict.FN:
            row.fn += 1
        else:
            row.analyzer_failed += 1
    order = {op.value: i for i, op in enumerate(OPERATOR_ORDER)}
    sorted_rows = sorted(
        rows.values(),
        key=lambda r: (
            -(r.tp / (r.tp + r.fn)) if (r.tp + r.fn) else 1.0,
            order.get(r.operator, len(order)),
        ),
    )
    return ScoreTable(rows=sorted_rows)


def format_score_table(table: ScoreTable) -> str:
    lines = [f"{'Operator':<10}{'TP':>10}{'FN':>10}{'Recall':>10}{'FNR':>10}"]
    for row in table.rows:
        lines.append(
            f"{row.operator:<10}{row.tp:>10}{row.fn:>10}{row.recall:>10}{row.fnr:>10}"
        )
    total = table.total
    lines.append(
        f"{'TOTAL':<10}{total.tp:>10}{total.fn:>10}{total.recall:>10}{total.fnr:>10}"
    )
    if total.analyzer_failed:
        lines.append(f"analyzer_failed={total.analyzer_failed} (excluded from rates)")
    return "\n".join(lines)


def write_scores_csv(path: Path, table: ScoreTable) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["operator", "tp", "fn", "recall", "fnr"])
        for row in table.rows:
            writer.writerow([row.operator, row.tp, row.fn, row.recall, row.fnr])
        total = table.total
        writer.writerow(["TOTAL", total.tp, total.fn, total.recall, total.fnr])


def side_effect_counts(
    outcomes: list[DetectionOutcome],
) -> list[tuple[str, str, int, int]]:
    """(operator, detector, added, removed) rows, operator-major order."""
    added: Counter[tuple[str, str]] = Counter()
    removed: Counter[tuple[str, str]] = Counter()
    for outcome in outcomes:
        for detector in outcome.side_effects_added:
            added[(outcome.operator, detector)] += 1
        for detector in outcome.side_effects_removed:
            removed[(outcome.operator, detector)] += 1
    order = {op.value: i for i, op in enumerate(OPERATOR_ORDER)}
    keys = sorted(
        set(added) | set(removed),
        key=lambda k: (order.get(k[0], len(order)), k[1]),
    )
    return [(op, det, added[(op, det)], removed[(op, det)]) for op, det in keys]


def write_side_effects_csv(path: Path, outcomes: list[DetectionOutcome]) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["operator", "detector", "added", "removed"])
        for operator, detector, n_added, n_removed in side_effect_counts(outcomes):
            writer.writerow([operator, detector, n_added, n_removed])


# -- report ingestion ----------------------------------------------------------


def ingest_report(path: str | Path) -> list[Finding]:
    """Load a findings report (one object or a list of per-file objects)."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as err:
        raise ReportError(f"cannot read report {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ReportError(f"malformed JSON in report {path}: {err}") from err
    entries = raw if isinstance(raw, list) else [raw]
    findings: list[Finding] = []
    for entry in entries:
        if not isinstance(entry, dict) or "findings" not in entry:
            raise ReportError(f"report {path}: expected objects with a 'findings' list")
        file_name = str(entry.get("file", ""))
        for item in entry["findings"]:
            try:
                findings.append(
                    Finding(
                        detector=str(item["detector"]),
                        file=file_name,
                        lines=frozenset(int(x) for x in item["lines"]),
                    )
                )
            except (KeyError, TypeError, ValueError) as err:
                raise ReportError(f"report {path}: bad finding {item!r}") from err
    findings.sort(key=lambda f: (f.file, f.detector, min(f.lines)))
    return findings


# -- diff pipeline ----------------------------------------------------------------


def report_path_for_original(reports_dir: Path, source_path: str) -> Path:
    return reports_dir / "originals" / PurePosixPath(source_path).with_suffix(".json")


def report_path_for_mutant(reports_dir: Path, output_path: str) -> Path:
    return reports_dir / "mutants" / PurePosixPath(output_path).with_suffix(".json")


def _ensure_report(sol_path: Path, report_path: Path, run_cmd: str | None) -> bool:
    if report_path.is_file():
        return True
    if run_cmd is None:
        return False
    report_path.parent.mkdir(parents=True, exist_ok=True)
    command = run_cmd.format(file=str(sol_path), report=str(report_path))
    proc = subprocess.run(shlex.split(command), capture_output=True, text=True)
    return proc.returncode == 0 and report_path.is_file()


def run_diff(
    out_dir: str | Path,
    corpus_dir: str | Path,
    reports_dir: str | Path,
    run_cmd: str | None = None,
    tolerance: int = 1,
    detector_map: dict[OperatorId, str] | None = None,
) -> list[DetectionOutcome]:
    """Classify every logged mutant from original/mutant report pairs.

    Reports live under ``<reports>/originals/<source-path>.json`` and
    ``<reports>/mutants/<mutant-path>.json``; missing ones are produced
    via ``run_cmd`` (placeholders ``{file}`` and ``{report}``) when given,
    otherwise the mutant counts as AnalyzerFailed.
    """
    out = Path(out_dir)
    corpus = Path(corpus_dir)
    reports = Path(reports_dir)
    mutants = read_mutation_log(out / MUTATION_LOG)

    original_cache: dict[str, list[Finding] | None] = {}
    outcomes: list[DetectionOutcome] = []
    for mutant in mutants:
        source_sol = corpus / mutant.source_path
        mutant_sol = out / mutant.output_path
        injected = changed_mutant_lines(
            source_sol.read_text(encoding="utf-8"),
            mutant_sol.read_text(encoding="utf-8"),
        )

        if mutant.source_path not in original_cache:
            orig_report = report_path_for_original(reports, mutant.source_path)
            if _ensure_report(source_sol, orig_report, run_cmd):
                original_cache[mutant.source_path] = ingest_report(orig_report)
            else:
                original_cache[mutant.source_path] = None
        original_findings = original_cache[mutant.source_path]

        mutant_report = report_path_for_mutant(reports, mutant.output_path)
        mutant_findings = (
            ingest_report(mutant_report)
            if _ensure_report(mutant_sol, mutant_report, run_cmd)
            else None
        )

        outcomes.append(
            classify(
                mutant,
                original_findings,
                mutant_findings,
                detector_map,
                injected_lines=injected,
                tolerance=tolerance,
            )
        )
    write_outcomes(out / OUTCOMES_LOG, outcomes)
    return outcomes


def write_outcomes(path: Path, outcomes: list[DetectionOutcome]) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for outcome in outcomes:
            fh.write(json.dumps(outcome.to_record(), ensure_ascii=False) + "\n")


def read_outcomes(path: Path) -> list[DetectionOutcome]:
    if not path.is_file():
        raise FileNotFoundError(f"outcomes log not found: {path}")
    outcomes = []
    with path.open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                outcomes.append(DetectionOutcome.from_record(json.loads(line)))
    return outcomes
