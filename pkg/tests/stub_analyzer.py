#!/usr/bin/env python3
"""Toy line-pattern analyzer used by the end-to-end tests.

Emits findings in the JSON report schema the scorer consumes. Detection
is deliberately shallow (regex over lines plus brace counting for loop
membership); it exists so the pipeline can run offline, not to be right.
"""

import json
import re
import sys

TRANSFER_CALL = re.compile(r"\.(call|send|transfer)\s*[({.]|\.call\b")
BARE_STMT = re.compile(r"^[A-Za-z_$][\w$]*(\s*\(|\.)")
LOOP_HEAD = re.compile(r"\b(for|while)\s*\(")
DECL_ONLY = re.compile(r"^(uint\d*|int\d*|bool|bytes\d*|address|string)\s+[\w$]+;$")
CALL_STMT_HEADS = ("require", "assert", "if", "while", "for", "return", "emit", "revert")


def _is_bare_statement(stripped: str) -> bool:
    if not stripped.endswith(";"):
        return False
    head = stripped.split("(")[0].split(".")[0].strip()
    if head in CALL_STMT_HEADS or "=" in stripped.split("(")[0]:
        return False
    return bool(BARE_STMT.match(stripped))


def analyze(text: str) -> list[dict]:
    findings = []
    loop_stack = []  # brace depth at each open loop body
    depth = 0
    pending_loop = False
    settable = set(re.findall(r"([\w$]+)\s*=\s*_[\w$]+\s*;", text))

    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if LOOP_HEAD.search(stripped):
            pending_loop = True
        in_loop = bool(loop_stack) or (pending_loop and ")" in stripped)

        if "tx.origin" in stripped:
            findings.append(("tx-origin", lineno))
        if "throw;" in stripped:
            findings.append(("deprecated-statement", lineno))
        if DECL_ONLY.match(stripped):
            findings.append(("uninitialized-local", lineno))

        if ".delegatecall" in stripped:
            receiver = stripped.split(".delegatecall")[0].split("(")[-1].strip()
            if receiver in settable:
                findings.append(("controlled-delegatecall", lineno))
        elif in_loop and TRANSFER_CALL.search(stripped):
            findings.append(("calls-loop", lineno))
        elif _is_bare_statement(stripped):
            if ".call" in stripped:
                findings.append(("unchecked-lowlevel", lineno))
            elif ".send(" in stripped:
                findings.append(("unchecked-send", lineno))
            elif ".delegatecall" not in stripped:
                findings.append(("unused-return", lineno))

        for ch in line:
            if ch == "{":
                depth += 1
                if pending_loop:
                    loop_stack.append(depth)
                    pending_loop = False
            elif ch == "}":
                if loop_stack and loop_stack[-1] == depth:
                    loop_stack.pop()
                depth -= 1
    return [
        {"detector": detector, "lines": [lineno]} for detector, lineno in findings
    ]


def main() -> int:
    if len(sys.argv) != 3:
        print("usage: stub_analyzer.py <file.sol> <report.json>", file=sys.stderr)
        return 2
    sol_path, report_path = sys.argv[1], sys.argv[2]
    with open(sol_path, encoding="utf-8") as fh:
        text = fh.read()
    report = {"file": sol_path, "findings": analyze(text)}
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
