"""Corpus-scale mutation campaigns.

Walks a corpus of .sol files, runs the enabled operators on every file
that parses, writes one mutant file per site plus a JSON Lines log, and
computes per-operator injection statistics. Output is fully deterministic:
results are merged and sorted by (source path, operator, ordinal) before
anything is written, so worker count never changes a byte.
"""

from __future__ import annotations

import csv
import difflib
import json
import logging
import shlex
import subprocess
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path, PurePosixPath

from .operators import (
    OPERATOR_ORDER,
    MATCHERS,
    OperatorConfig,
    OperatorId,
    match_all,
    match_cl,
    transform,
)
from .parser import parse
from .rewrite import apply_edits_mapped
from .source import SourceFile

log = logging.getLogger(__name__)

MUTATION_LOG = "mutations.jsonl"
STATS_CSV = "stats.csv"
SUMMARY_JSON = "summary.json"
VALIDATION_JSON = "validation.json"

LOG_FIELDS = (
    "id",
    "operator",
    "source_path",
    "output_path",
    "line",
    "original_snippet",
    "mutated_snippet",
)


@dataclass(frozen=True)
class Mutant:
    """One generated mutant: provenance log entry plus its output file."""

    id: str
    operator: str
    source_path: str
    output_path: str
    line: int
    original_snippet: str
    mutated_snippet: str

    def to_record(self) -> dict:
        return {name: getattr(self, name) for name in LOG_FIELDS}

    @classmethod
    def from_record(cls, record: dict) -> "Mutant":
        return cls(**{name: record[name] for name in LOG_FIELDS})

    @property
    def ordinal(self) -> int:
        return int(self.id.rsplit("-", 1)[1])


@dataclass
class OperatorRow:
    operator: str
    mutated_contracts: int
    mutants: int
    injection_rate: float


@dataclass
class CampaignStats:
    rows: list[OperatorRow]
    parsed_contracts: int
    skipped_invalid: int
    no_pattern: int
    mutated_contracts: int
    quarantined: list[str] = field(default_factory=list)

    @property
    def total_mutants(self) -> int:
        return sum(row.mutants for row in self.rows)

    @property
    def mean_injection_rate(self) -> float:
        if not self.rows:
            return 0.0
        return sum(row.injection_rate for row in self.rows) / len(self.rows)

    def sorted_rows(self) -> list[OperatorRow]:
        order = {op.value: i for i, op in enumerate(OPERATOR_ORDER)}
        return sorted(
            self.rows, key=lambda r: (-r.injection_rate, order[r.operator])
        )


@dataclass
class _MutantText:
    operator: str
    ordinal: int
    line: int
    original_snippet: str
    mutated_snippet: str
    text: str


@dataclass
class _FileResult:
    rel_path: str
    invalid: bool = False
    diagnostic: str = ""
    mutants: list[_MutantText] = field(default_factory=list)
    quarantined: list[str] = field(default_factory=list)
    site_counts: dict[str, int] = field(default_factory=dict)


def discover_sources(corpus_dir: Path) -> list[Path]:
    return sorted(p for p in corpus_dir.rglob("*.sol") if p.is_file())


def mutant_id(rel_path: str, operator: str, ordinal: int) -> str:
    stem = str(PurePosixPath(rel_path).with_suffix("")).replace("/", "_")
    return f"{stem}-{operator}-{ordinal}"


def mutant_rel_path(rel_path: str, operator: str, ordinal: int) -> str:
    stem_dir = PurePosixPath(rel_path).with_suffix("")
    return str(stem_dir / operator / f"{mutant_id(rel_path, operator, ordinal)}.sol")


def _process_file(job: tuple[str, str, OperatorConfig]) -> _FileResult:
    rel_path, abs_path, cfg = job
    result = _FileResult(rel_path=rel_path)
    try:
        src = SourceFile.read(abs_path)
    except (OSError, UnicodeDecodeError, ValueError) as err:
        result.invalid = True
        result.diagnostic = str(err)
        return result
    outcome = parse(src)
    if not outcome.ok:
        result.invalid = True
        result.diagnostic = outcome.diagnostics[0].message if outcome.diagnostics else ""
        return result
    sites_by_op = match_all(outcome.tree, src, cfg)
    for op, sites in sites_by_op.items():
        result.site_counts[op.value] = len(sites)
        for site in sites:
            sid = mutant_id(rel_path, op.value, site.ordinal)
            try:
                edit_set = transform(site, src, cfg)
                edit_set.site_id = sid
                mutated, applied = apply_edits_mapped(src, edit_set)
                if not parse(SourceFile(path=sid, text=mutated)).ok:
                    result.quarantined.append(f"{sid}: mutant does not re-parse")
                    continue
                anchor_edit = next(
                    a for a in applied if a.span == site.anchor_span
                )
            except Exception as err:  # quarantine the site, not the file
                result.quarantined.append(f"{sid}: {err}")
                continue
            result.mutants.append(
                _MutantText(
                    operator=op.value,
                    ordinal=site.ordinal,
                    line=site.line,
                    original_snippet=site.original_snippet,
                    mutated_snippet=anchor_edit.replacement,
                    text=mutated,
                )
            )
    return result


def run_campaign(
    corpus_dir: str | Path,
    cfg: OperatorConfig,
    out_dir: str | Path,
    workers: int = 1,
) -> CampaignStats:
    """Mutate every parseable contract under ``corpus_dir`` into ``out_dir``."""
    corpus = Path(corpus_dir)
    out = Path(out_dir)
    if not corpus.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {corpus}")
    out.mkdir(parents=True, exist_ok=True)

    sources = discover_sources(corpus)
    jobs = [
        (path.relative_to(corpus).as_posix(), str(path), cfg) for path in sources
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_process_file, jobs))
    else:
        results = [_process_file(job) for job in jobs]
    results.sort(key=lambda r: r.rel_path)

    enabled = [op for op in OPERATOR_ORDER if op in cfg.enabled]
    per_op_mutants = {op.value: 0 for op in enabled}
    per_op_files = {op.value: 0 for op in enabled}
    parsed = invalid = no_pattern = 0
    mutated_files = 0
    quarantined: list[str] = []
    mutants: list[Mutant] = []

    for res in results:
        if res.invalid:
            invalid += 1
            log.info("skipping invalid file %s: %s", res.rel_path, res.diagnostic)
            continue
        parsed += 1
        quarantined.extend(res.quarantined)
        total_sites = sum(res.site_counts.values())
        if total_sites == 0:
            no_pattern += 1
        else:
            mutated_files += 1
        for op_value, count in res.site_counts.items():
            per_op_mutants[op_value] += count
            if count:
                per_op_files[op_value] += 1
        for mut in res.mutants:
            rel_out = mutant_rel_path(res.rel_path, mut.operator, mut.ordinal)
            target = out / rel_out
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(mut.text, encoding="utf-8")
            mutants.append(
                Mutant(
                    id=mutant_id(res.rel_path, mut.operator, mut.ordinal),
                    operator=mut.operator,
                    source_path=res.rel_path,
                    output_path=rel_out,
                    line=mut.line,
                    original_snippet=mut.original_snippet,
                    mutated_snippet=mut.mutated_snippet,
                )
            )

    rows = [
        OperatorRow(
            operator=op.value,
            mutated_contracts=per_op_files[op.value],
            mutants=per_op_mutants[op.value],
            injection_rate=(per_op_files[op.value] / parsed) if parsed else 0.0,
        )
        for op in enabled
    ]
    stats = CampaignStats(
        rows=rows,
        parsed_contracts=parsed,
        skipped_invalid=invalid,
        no_pattern=no_pattern,
        mutated_contracts=mutated_files,
        quarantined=sorted(quarantined),
    )
    _order = {op.value: i for i, op in enumerate(OPERATOR_ORDER)}
    mutants.sort(key=lambda m: (m.source_path, _order[m.operator], m.ordinal))
    write_mutation_log(out / MUTATION_LOG, mutants)
    write_stats_csv(out / STATS_CSV, stats)
    _write_summary(out / SUMMARY_JSON, stats, cfg)
    return stats


def write_mutation_log(path: Path, mutants: list[Mutant]) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for mutant in mutants:
            fh.write(json.dumps(mutant.to_record(), ensure_ascii=False) + "\n")


def read_mutation_log(path: Path) -> list[Mutant]:
    if not path.is_file():
        raise FileNotFoundError(f"mutation log not found: {path}")
    mutants = []
    with path.open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                mutants.append(Mutant.from_record(json.loads(line)))
    return mutants


def write_stats_csv(path: Path, stats: CampaignStats) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["operator", "mutated_contracts", "mutants", "injection_rate"])
        for row in stats.sorted_rows():
            writer.writerow(
                [row.operator, row.mutated_contracts, row.mutants, f"{row.injection_rate:.4f}"]
            )
        writer.writerow(
            [
                "TOTAL",
                stats.mutated_contracts,
                stats.total_mutants,
                f"{stats.mean_injection_rate:.4f}",
            ]
        )


def _write_summary(path: Path, stats: CampaignStats, cfg: OperatorConfig) -> None:
    payload = {
        "parsed_contracts": stats.parsed_contracts,
        "skipped_invalid": stats.skipped_invalid,
        "no_pattern": stats.no_pattern,
        "mutated_contracts": stats.mutated_contracts,
        "total_mutants": stats.total_mutants,
        "quarantined": stats.quarantined,
        "config": {
            "cl_loop_bound": cfg.cl_loop_bound,
            "cl_skip_inside_loop": cfg.cl_skip_inside_loop,
            "operators": sorted(op.value for op in cfg.enabled),
        },
    }
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def read_campaign_config(out_dir: Path) -> OperatorConfig:
    """Reconstruct the operator configuration a campaign ran with."""
    summary_path = out_dir / SUMMARY_JSON
    if not summary_path.is_file():
        return OperatorConfig()
    raw = json.loads(summary_path.read_text(encoding="utf-8")).get("config", {})
    return OperatorConfig(
        cl_loop_bound=raw.get("cl_loop_bound", 1000),
        cl_skip_inside_loop=raw.get("cl_skip_inside_loop", False),
        enabled=frozenset(
            OperatorId(name) for name in raw.get("operators", [op.value for op in OPERATOR_ORDER])
        ),
    )


def format_stats_table(stats: CampaignStats) -> str:
    """Fixed-format stats table (operator rows ordered by injection rate)."""
    lines = [
        f"{'Operator':<10}{'Mutated SCs':>14}{'Mutants':>10}{'Injection Rate':>17}"
    ]
    for row in stats.sorted_rows():
        lines.append(
            f"{row.operator:<10}{row.mutated_contracts:>14}{row.mutants:>10}"
            f"{row.injection_rate * 100:>16.2f}%"
        )
    lines.append(
        f"{'TOTAL':<10}{stats.mutated_contracts:>14}{stats.total_mutants:>10}"
        f"{stats.mean_injection_rate * 100:>16.2f}%"
    )
    lines.append(
        f"parsed={stats.parsed_contracts} invalid={stats.skipped_invalid} "
        f"no_pattern={stats.no_pattern} quarantined={len(stats.quarantined)}"
    )
    return "\n".join(lines)


# -- validation -------------------------------------------------------------


@dataclass
class ValidationReport:
    total: int
    reparse_failures: list[str] = field(default_factory=list)
    log_mismatch_failures: list[str] = field(default_factory=list)
    pattern_failures: list[str] = field(default_factory=list)
    compile_failures: list[str] | None = None

    @property
    def failed_mutants(self) -> set[str]:
        failed = set(self.reparse_failures) | set(self.log_mismatch_failures)
        failed |= set(self.pattern_failures)
        return failed

    @property
    def failure_rate(self) -> float:
        return len(self.failed_mutants) / self.total if self.total else 0.0

    @property
    def passed(self) -> bool:
        return not self.failed_mutants

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "reparse_failures": sorted(self.reparse_failures),
            "log_mismatch_failures": sorted(self.log_mismatch_failures),
            "pattern_failures": sorted(self.pattern_failures),
            "compile_failures": (
                sorted(self.compile_failures) if self.compile_failures is not None else None
            ),
            "failure_rate": self.failure_rate,
            "passed": self.passed,
        }


def validate_mutants(
    out_dir: str | Path,
    corpus_dir: str | Path,
    compile_cmd: str | None = None,
) -> ValidationReport:
    """Check every logged mutant: re-parse, log cross-check, pattern
    adherence, and optionally an external compile command."""
    out = Path(out_dir)
    corpus = Path(corpus_dir)
    mutants = read_mutation_log(out / MUTATION_LOG)
    cfg = read_campaign_config(out)
    report = ValidationReport(total=len(mutants))
    if compile_cmd is not None:
        report.compile_failures = []

    originals: dict[str, SourceFile] = {}
    site_cache: dict[tuple[str, str], list] = {}

    for mutant in mutants:
        mutant_path = out / mutant.output_path
        try:
            mutant_text = mutant_path.read_text(encoding="utf-8")
        except OSError:
            report.reparse_failures.append(mutant.id)
            continue

        # Step 1: the mutant must still parse.
        if not parse(SourceFile(path=str(mutant_path), text=mutant_text)).ok:
            report.reparse_failures.append(mutant.id)

        source = originals.get(mutant.source_path)
        if source is None:
            source = SourceFile.read(corpus / mutant.source_path)
            originals[mutant.source_path] = source

        # Step 2: the log entry must match the actual file diff.
        if not _log_matches_diff(mutant, source, mutant_text):
            report.log_mismatch_failures.append(mutant.id)

        # Step 3: the logged site must satisfy its operator's pattern.
        if not _pattern_adheres(mutant, source, site_cache, cfg):
            report.pattern_failures.append(mutant.id)

        # Step 4: optional external compile check.
        if compile_cmd is not None:
            command = compile_cmd.format(file=str(mutant_path))
            proc = subprocess.run(
                shlex.split(command), capture_output=True, text=True
            )
            if proc.returncode != 0:
                report.compile_failures.append(mutant.id)
    return report


def _log_matches_diff(mutant: Mutant, source: SourceFile, mutant_text: str) -> bool:
    starts = _occurrence_lines(source, mutant.original_snippet)
    if mutant.line not in starts:
        return False
    if mutant.mutated_snippet not in mutant_text:
        return False
    return mutant.line in changed_original_lines(source.text, mutant_text)


def _occurrence_lines(source: SourceFile, snippet: str) -> set[int]:
    lines: set[int] = set()
    offset = source.text.find(snippet)
    while offset != -1:
        lines.add(source.byte_to_line(offset))
        offset = source.text.find(snippet, offset + 1)
    return lines


def changed_original_lines(original: str, mutated: str) -> set[int]:
    """1-based original-side line numbers touched by the mutation."""
    matcher = difflib.SequenceMatcher(
        None, original.splitlines(), mutated.splitlines(), autojunk=False
    )
    changed: set[int] = set()
    for tag, i1, i2, _j1, _j2 in matcher.get_opcodes():
        if tag == "equal":
            continue
        if i1 == i2:  # pure insertion between original lines i1 and i1+1
            changed.update({i1, i1 + 1})
        else:
            changed.update(range(i1 + 1, i2 + 1))
    return changed


def changed_mutant_lines(original: str, mutated: str) -> set[int]:
    """1-based mutant-side line numbers introduced or altered by the mutation."""
    matcher = difflib.SequenceMatcher(
        None, original.splitlines(), mutated.splitlines(), autojunk=False
    )
    changed: set[int] = set()
    for tag, _i1, _i2, j1, j2 in matcher.get_opcodes():
        if tag == "equal":
            continue
        if j1 == j2:  # pure deletion: mark the seam
            changed.update({j1, j1 + 1})
        else:
            changed.update(range(j1 + 1, j2 + 1))
    return changed


def _pattern_adheres(
    mutant: Mutant,
    source: SourceFile,
    cache: dict[tuple[str, str], list],
    cfg: OperatorConfig,
) -> bool:
    key = (mutant.source_path, mutant.operator)
    sites = cache.get(key)
    if sites is None:
        outcome = parse(source)
        if not outcome.ok:
            cache[key] = []
            return False
        operator = OperatorId(mutant.operator)
        if operator is OperatorId.CL:
            sites = match_cl(outcome.tree, source, cfg)
        else:
            sites = MATCHERS[operator](outcome.tree, source)
        cache[key] = sites
    for site in sites:
        if site.ordinal == mutant.ordinal:
            return (
                site.line == mutant.line
                and site.original_snippet == mutant.original_snippet
            )
    return False
