"""Hand-labeled classifier oracle.

Each case is one synthetic mutant with findings before/after mutation and
a verdict assigned by hand from the classification rule: detected iff an
expected-detector finding lands in the injected-line window and either no
such finding sat in the anchor window before the mutation, or more of
them overlap afterwards than before. Side-effect labels are the hand-
computed multiset deltas of the non-expected detector names.

Fields: (case id, operator, anchor line, injected lines,
         original findings, mutant findings, tolerance,
         verdict, side effects added, side effects removed)

findings are (detector, lines) pairs; None means no report (analyzer
failed on that side).
"""

UC = "unchecked-lowlevel"
US = "unchecked-send"
TX = "tx-origin"
UR = "unused-return"
CL = "calls-loop"
DTU = "controlled-delegatecall"

CASES = [
    # A: clean detections, nothing there before
    ("A1", "UC", 10, {10}, [], [(UC, (10,))], 1, "TP", [], []),
    ("A2", "US", 7, {7}, [], [(US, (7,))], 1, "TP", [], []),
    ("A3", "TX", 5, {5}, [], [(TX, (5,))], 1, "TP", [], []),
    ("A4", "UR", 12, {12}, [], [(UR, (12,))], 1, "TP", [], []),
    ("A5", "CL", 20, {20, 21, 22}, [], [(CL, (21,))], 1, "TP", [], []),
    ("A6", "DTU", 15, {3, 4, 5, 15}, [], [(DTU, (15,))], 1, "TP", [], []),
    # B: analyzer silent on both sides
    ("B1", "UC", 10, {10}, [], [], 1, "FN", [], []),
    ("B2", "US", 7, {7}, [], [], 1, "FN", [], []),
    ("B3", "TX", 5, {5}, [], [], 1, "FN", [], []),
    ("B4", "UR", 12, {12}, [], [], 1, "FN", [], []),
    ("B5", "CL", 20, {20, 21, 22}, [], [], 1, "FN", [], []),
    ("B6", "DTU", 15, {15}, [], [], 1, "FN", [], []),
    # C: only unrelated detectors fire
    ("C1", "UC", 10, {10}, [], [(UR, (10,))], 1, "FN", [UR], []),
    ("C2", "TX", 5, {5}, [], [("suicidal", (5,))], 1, "FN", ["suicidal"], []),
    ("C3", "CL", 20, {20, 21}, [], [("msg-value-loop", (21,))], 1, "FN", ["msg-value-loop"], []),
    # D: hit within the +/-1 window
    ("D1", "US", 7, {7}, [], [(US, (6,))], 1, "TP", [], []),
    ("D2", "UR", 12, {12}, [], [(UR, (13,))], 1, "TP", [], []),
    # E: hit outside the window
    ("E1", "UC", 10, {10}, [], [(UC, (12,))], 1, "FN", [], []),
    ("E2", "TX", 5, {5}, [], [(TX, (3,))], 1, "FN", [], []),
    # F: already flagged before the mutation, nothing new
    ("F1", "CL", 20, {20, 21, 22}, [(CL, (20,))], [(CL, (21,))], 1, "FN", [], []),
    ("F2", "UC", 10, {10}, [(UC, (10,))], [(UC, (10,))], 1, "FN", [], []),
    ("F3", "DTU", 15, {15}, [(DTU, (14,))], [(DTU, (15,))], 1, "FN", [], []),
    # G: already flagged, but an additional overlapping finding appears
    ("G1", "UC", 10, {10}, [(UC, (10,))], [(UC, (10,)), (UC, (11,))], 1, "TP", [], []),
    ("G2", "US", 7, {7}, [(US, (7,))], [(US, (6,)), (US, (7,))], 1, "TP", [], []),
    ("G3", "CL", 20, {20, 21, 22}, [(CL, (20,))], [(CL, (20,)), (CL, (22,))], 1, "TP", [], []),
    # H: missing reports
    ("H1", "UC", 10, {10}, [], None, 1, "AnalyzerFailed", [], []),
    ("H2", "CL", 20, {20, 21}, [(CL, (20,))], None, 1, "AnalyzerFailed", [], []),
    ("H3", "TX", 5, {5}, None, [(TX, (5,))], 1, "AnalyzerFailed", [], []),
    # I: side effects added alongside the verdict
    ("I1", "UR", 12, {11, 12}, [], [(UR, (12,)), ("uninitialized-local", (11,))], 1,
     "TP", ["uninitialized-local"], []),
    ("I2", "CL", 20, {20, 21, 22},
     [("msg-value-loop", (2,))],
     [(CL, (21,)), ("msg-value-loop", (2,)), ("msg-value-loop", (21,)), ("msg-value-loop", (30,))],
     1, "TP", ["msg-value-loop", "msg-value-loop"], []),
    ("I3", "DTU", 15, {3, 4, 15}, [],
     [(DTU, (15,)), ("missing-zero-check", (4,)), ("naming-convention", (4,))], 1,
     "TP", ["missing-zero-check", "naming-convention"], []),
    # J: side effects removed
    ("J1", "UC", 10, {10}, [("deprecated-statement", (11,))], [(UC, (10,))], 1,
     "TP", [], ["deprecated-statement"]),
    ("J2", "UR", 12, {12}, [("divide-before-multiply", (12,))], [(UR, (12,))], 1,
     "TP", [], ["divide-before-multiply"]),
    ("J3", "TX", 5, {5}, [("events-math", (5,))], [], 1, "FN", [], ["events-math"]),
    ("J4", "UR", 12, {11, 12},
     [("reentrancy-eth", (12,)), ("constable-states", (3,))],
     [(UR, (12,)), ("uninitialized-local", (11,)), ("constable-states", (3,))], 1,
     "TP", ["uninitialized-local"], ["reentrancy-eth"]),
    # K: multi-line injections
    ("K1", "CL", 20, {20, 21, 22}, [], [(CL, (19,))], 1, "TP", [], []),
    ("K2", "CL", 20, {20, 21, 22}, [], [(CL, (25,))], 1, "FN", [], []),
    # M: the expected detector never shows up as a side effect
    ("M1", "US", 7, {7}, [(US, (50,))], [], 1, "FN", [], []),
    ("M2", "UC", 10, {10}, [(UC, (50,))], [(UC, (10,))], 1, "TP", [], []),
    # N: findings spanning several lines
    ("N1", "TX", 5, {5}, [], [(TX, (4, 5, 6))], 1, "TP", [], []),
    ("N2", "UR", 12, {12}, [], [(UR, (1, 2, 3))], 1, "FN", [], []),
    # O: zero tolerance
    ("O1", "US", 7, {7}, [], [(US, (7,))], 0, "TP", [], []),
    ("O2", "US", 7, {7}, [], [(US, (8,))], 0, "FN", [], []),
    ("O3", "CL", 20, {21}, [(CL, (21,))], [(CL, (21,))], 0, "TP", [], []),
    # P: pre-existing finding far from the anchor does not block
    ("P1", "DTU", 15, {3, 4, 15}, [(DTU, (3,))], [(DTU, (3,))], 1, "TP", [], []),
    # R: assorted mixtures
    ("R1", "TX", 5, {5}, [("events-access", (5,))], [(TX, (5,)), ("suicidal", (5,))], 1,
     "TP", ["suicidal"], ["events-access"]),
    ("R2", "US", 7, {7}, [("deprecated-statement", (8,))], [(US, (7,))], 1,
     "TP", [], ["deprecated-statement"]),
    ("R3", "UR", 12, {12}, [], [("constable-states", (3,))], 1, "FN", ["constable-states"], []),
    ("R4", "CL", 20, {20, 21, 22},
     [(CL, (20,)), ("costly-loop", (20,))],
     [(CL, (21,)), ("costly-loop", (21,)), ("cyclomatic-complexity", (1,))], 1,
     "FN", ["cyclomatic-complexity"], []),
    ("R5", "DTU", 15, {15}, [(DTU, (15,))], [(DTU, (15,))], 1, "FN", [], []),
    ("R6", "UC", 10, {10}, [], [(UC, (10,)), (UC, (10,))], 1, "TP", [], []),
    ("R7", "TX", 5, {5}, [(TX, (5,))], [(TX, (5,))], 1, "FN", [], []),
    ("R8", "TX", 5, {5}, [(TX, (40,))], [(TX, (5,)), (TX, (40,))], 1, "TP", [], []),
    ("R9", "US", 7, {7}, None, None, 1, "AnalyzerFailed", [], []),
    ("R10", "UR", 11, {11, 12}, [], [(UR, (11, 12))], 1, "TP", [], []),
]
