"""Command-line interface.

Subcommands cover the whole pipeline: ``mutate`` (inject vulnerabilities
and write stats), ``validate`` (re-parse, log cross-check, pattern
adherence, optional compile), ``diff`` (classify analyzer findings per
mutant), ``score`` (TP/FN tables plus side effects), and ``run`` (all of
the above in one shot).

Flags override values from an optional INI config file (section
``[campaign]``). Exit codes: 0 success, 1 partial failures (quarantined
sites or validation failures), 2 configuration or schema errors.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .campaign import (
    VALIDATION_JSON,
    format_stats_table,
    run_campaign,
    validate_mutants,
)
from .detection import (
    OUTCOMES_LOG,
    SCORES_CSV,
    SIDE_EFFECTS_CSV,
    ReportError,
    Verdict,
    format_score_table,
    read_outcomes,
    run_diff,
    score,
    write_scores_csv,
    write_side_effects_csv,
)
from .operators import OPERATOR_ORDER, OperatorConfig, OperatorId

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2


class ConfigError(Exception):
    pass


@dataclass
class CampaignConfig:
    corpus_dir: str | None = None
    out_dir: str | None = None
    reports_dir: str | None = None
    operators: frozenset[OperatorId] = field(
        default_factory=lambda: frozenset(OPERATOR_ORDER)
    )
    cl_loop_bound: int = 1000
    cl_skip_inside_loop: bool = False
    workers: int = 1
    line_tolerance: int = 1
    run_cmd: str | None = None
    compile_cmd: str | None = None
    figures: bool = True

    def validate(self) -> None:
        if not self.operators:
            raise ConfigError("no operators enabled")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.cl_loop_bound < 1:
            raise ConfigError("cl-loop-bound must be >= 1")
        if self.line_tolerance < 0:
            raise ConfigError("line-tolerance must be >= 0")

    def operator_config(self) -> OperatorConfig:
        return OperatorConfig(
            cl_loop_bound=self.cl_loop_bound,
            cl_skip_inside_loop=self.cl_skip_inside_loop,
            enabled=self.operators,
        )


def parse_operators(text: str) -> frozenset[OperatorId]:
    names = [part.strip().upper() for part in text.split(",") if part.strip()]
    if not names:
        raise ConfigError("empty operator list")
    try:
        return frozenset(OperatorId(name) for name in names)
    except ValueError:
        valid = ",".join(op.value for op in OPERATOR_ORDER)
        raise ConfigError(f"unknown operator in {text!r} (valid: {valid})") from None


def load_config_file(path: str) -> dict:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    if not parser.has_section("campaign"):
        raise ConfigError(f"config file {path} has no [campaign] section")
    section = parser["campaign"]
    values: dict = {}
    if "corpus" in section:
        values["corpus_dir"] = section["corpus"]
    if "out" in section:
        values["out_dir"] = section["out"]
    if "reports" in section:
        values["reports_dir"] = section["reports"]
    if "operators" in section:
        values["operators"] = parse_operators(section["operators"])
    for key, attr in (
        ("cl_loop_bound", "cl_loop_bound"),
        ("workers", "workers"),
        ("line_tolerance", "line_tolerance"),
    ):
        if key in section:
            try:
                values[attr] = section.getint(key)
            except ValueError:
                raise ConfigError(f"config {key} must be an integer") from None
    if "cl_skip_inside_loop" in section:
        try:
            values["cl_skip_inside_loop"] = section.getboolean("cl_skip_inside_loop")
        except ValueError:
            raise ConfigError("config cl_skip_inside_loop must be a boolean") from None
    if "run_cmd" in section:
        values["run_cmd"] = section["run_cmd"]
    if "compile_cmd" in section:
        values["compile_cmd"] = section["compile_cmd"]
    return values


def build_config(args: argparse.Namespace) -> CampaignConfig:
    cfg = CampaignConfig()
    if getattr(args, "config", None):
        for key, value in load_config_file(args.config).items():
            setattr(cfg, key, value)
    flag_map = {
        "corpus": "corpus_dir",
        "out": "out_dir",
        "reports": "reports_dir",
        "cl_loop_bound": "cl_loop_bound",
        "workers": "workers",
        "line_tolerance": "line_tolerance",
        "run_cmd": "run_cmd",
        "compile_cmd": "compile_cmd",
    }
    for flag, attr in flag_map.items():
        value = getattr(args, flag, None)
        if value is not None:
            setattr(cfg, attr, value)
    if getattr(args, "operators", None) is not None:
        cfg.operators = parse_operators(args.operators)
    if getattr(args, "cl_skip_inside_loop", False):
        cfg.cl_skip_inside_loop = True
    if getattr(args, "no_figures", False):
        cfg.figures = False
    cfg.validate()
    return cfg


def _require(cfg: CampaignConfig, *attrs: str) -> None:
    labels = {"corpus_dir": "--corpus", "out_dir": "--out", "reports_dir": "--reports"}
    for attr in attrs:
        if getattr(cfg, attr) is None:
            raise ConfigError(f"missing required option {labels[attr]}")


# -- subcommands -----------------------------------------------------------


def cmd_mutate(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    _require(cfg, "corpus_dir", "out_dir")
    if not Path(cfg.corpus_dir).is_dir():
        raise ConfigError(f"corpus directory not found: {cfg.corpus_dir}")
    stats = run_campaign(
        cfg.corpus_dir, cfg.operator_config(), cfg.out_dir, workers=cfg.workers
    )
    print(format_stats_table(stats))
    if cfg.figures:
        from .figures import STATS_PNG, render_stats_figure

        render_stats_figure(stats, Path(cfg.out_dir) / STATS_PNG)
    return EXIT_PARTIAL if stats.quarantined else EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    _require(cfg, "corpus_dir", "out_dir")
    report = validate_mutants(cfg.out_dir, cfg.corpus_dir, cfg.compile_cmd)
    out_path = Path(cfg.out_dir) / VALIDATION_JSON
    out_path.write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
    failed = len(report.failed_mutants)
    print(
        f"validated {report.total} mutants: "
        f"reparse={len(report.reparse_failures)} "
        f"log={len(report.log_mismatch_failures)} "
        f"pattern={len(report.pattern_failures)} failures"
    )
    if report.compile_failures is not None:
        print(f"compile failures: {len(report.compile_failures)}")
    print(f"failure rate: {report.failure_rate:.4f}")
    return EXIT_OK if failed == 0 else EXIT_PARTIAL


def cmd_diff(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    _require(cfg, "corpus_dir", "out_dir", "reports_dir")
    outcomes = run_diff(
        cfg.out_dir,
        cfg.corpus_dir,
        cfg.reports_dir,
        run_cmd=cfg.run_cmd,
        tolerance=cfg.line_tolerance,
    )
    counts = {verdict: 0 for verdict in Verdict}
    for outcome in outcomes:
        counts[outcome.verdict] += 1
    print(
        f"classified {len(outcomes)} mutants: "
        f"TP={counts[Verdict.TP]} FN={counts[Verdict.FN]} "
        f"AnalyzerFailed={counts[Verdict.ANALYZER_FAILED]}"
    )
    return EXIT_OK


def cmd_score(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    _require(cfg, "out_dir")
    out = Path(cfg.out_dir)
    outcomes = read_outcomes(out / OUTCOMES_LOG)
    table = score(outcomes)
    write_scores_csv(out / SCORES_CSV, table)
    write_side_effects_csv(out / SIDE_EFFECTS_CSV, outcomes)
    print(format_score_table(table))
    if cfg.figures:
        from .figures import (
            SCORES_PNG,
            SIDE_EFFECTS_PNG,
            render_scores_figure,
            render_side_effects_figure,
        )

        render_scores_figure(table, out / SCORES_PNG)
        render_side_effects_figure(outcomes, out / SIDE_EFFECTS_PNG)
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    code = cmd_mutate(args)
    if code > EXIT_PARTIAL:
        return code
    validate_code = cmd_validate(args)
    diff_code = cmd_diff(args)
    score_code = cmd_score(args)
    return max(code, validate_code, diff_code, score_code)


# -- argument parsing ---------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--corpus", help="directory of .sol source contracts")
    parser.add_argument("--out", help="campaign output directory")
    parser.add_argument("--reports", help="analyzer reports directory")
    parser.add_argument(
        "--operators",
        help="comma-separated operators to enable (default: all of "
        + ",".join(op.value for op in OPERATOR_ORDER)
        + ")",
    )
    parser.add_argument("--cl-loop-bound", type=int, dest="cl_loop_bound")
    parser.add_argument(
        "--cl-skip-inside-loop", action="store_true", dest="cl_skip_inside_loop",
        help="do not wrap statements that are already inside a loop",
    )
    parser.add_argument("--workers", type=int)
    parser.add_argument("--line-tolerance", type=int, dest="line_tolerance")
    parser.add_argument(
        "--run-cmd", dest="run_cmd",
        help="analyzer command template with {file} and {report} placeholders",
    )
    parser.add_argument(
        "--compile-cmd", dest="compile_cmd",
        help="compile command template with a {file} placeholder",
    )
    parser.add_argument("--config", help="INI config file with a [campaign] section")
    parser.add_argument(
        "--no-figures", action="store_true", dest="no_figures",
        help="skip rendering PNG charts next to the CSV reports",
    )


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solseed",
        description="Seed vulnerabilities into Solidity contracts and score analyzer detection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "mutate": (cmd_mutate, "inject vulnerabilities into a corpus"),
        "validate": (cmd_validate, "check generated mutants against the log"),
        "diff": (cmd_diff, "classify analyzer findings per mutant"),
        "score": (cmd_score, "write TP/FN score and side-effect tables"),
        "run": (cmd_run, "mutate, validate, diff and score in one shot"),
    }
    for name, (handler, help_text) in commands.items():
        cmd_parser = sub.add_parser(name, help=help_text)
        _add_common(cmd_parser)
        cmd_parser.set_defaults(handler=handler)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        code = args.handler(args)
    except (ConfigError, FileNotFoundError, ReportError) as err:
        print(f"error: {err}", file=sys.stderr)
        code = EXIT_CONFIG
    if argv is None:
        sys.exit(code)
    return code


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
