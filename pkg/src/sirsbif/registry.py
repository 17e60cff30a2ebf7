"""Bundled scenario registry: named parameter sets with expected qualitative
outcomes, and the pipeline that re-runs them and grades the result.

Each entry stores the parameter values verbatim; where a stored value is a
reconstruction (one grid value had a dropped decimal point in its source) the
note says so.  `reproduce` returns a verdict:

  match        detected outcome equals the expected one
  mismatch     detection ran fine but disagrees
  inconclusive detection hit its resolution floor (diagnostics included)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import Inconclusive, UnknownFigure
from .model import ModelParams, validate_params
from .equilibria import classified_equilibria, classify_equilibrium
from .degeneracy import classify_degenerate
from .dynamics import bifurcation_sweep, cycle_scan_for_params


@dataclass(frozen=True)
class FigureRegistryEntry:
    figure_id: str
    task: str                   # cycles | sweep | classify
    params: ModelParams
    expected: dict
    note: str
    gamma_grid: Optional[tuple] = None


def _entries() -> dict:
    entries = [
        FigureRegistryEntry(
            figure_id="w2", task="sweep",
            params=validate_params(5.7966, 1.8993, 2.6731, 2.3072, 2.0),
            gamma_grid=(2.6731, 2.6717, 2.6712, 2.6708, 2.6706, 2.6687),
            expected={"event_sequence": ["saddle-node", "hopf",
                                         "suspected-homoclinic", "cycles-to-zero"]},
            note="six-step gamma sweep; final value 2.6687 reconstructed from a "
                 "misprint (6687, dropped decimal point)"),
        FigureRegistryEntry(
            figure_id="w3", task="sweep",
            params=validate_params(0.9331, 3.1832, 3.0047, 0.6355, 3.0),
            gamma_grid=(3.0047, 3.004, 3.00312, 3.00311, 3.00305, 3.0029),
            expected={"events_include": ["saddle-node", "hopf"],
                      "cycle_counts_include": [2, 3]},
            note="six-step gamma sweep near a degenerate double-zero point"),
        FigureRegistryEntry(
            figure_id="w4a", task="cycles",
            params=validate_params(1.0, 5.106, 5.24, 2.01, 2.0),
            expected={"cycle_count": 1},
            note="one limit cycle expected around the endemic focus"),
        FigureRegistryEntry(
            figure_id="w4b", task="cycles",
            params=validate_params(1.0, 5.417, 7.195, 0.75, 2.0),
            expected={"cycle_count": 1},
            note="one limit cycle expected around the endemic focus"),
        FigureRegistryEntry(
            figure_id="w4c", task="cycles",
            params=validate_params(1.0, 6.02, 6.0, 2.01, 2.0),
            expected={"cycle_count": 1, "stability": "attracting"},
            note="one attracting limit cycle expected"),
        FigureRegistryEntry(
            figure_id="w4d", task="cycles",
            params=validate_params(8.0, 1.753, 2.626, 2.5, 2.0),
            expected={"cycle_count": 2},
            note="two nested limit cycles expected"),
        FigureRegistryEntry(
            figure_id="w5", task="cycles",
            params=validate_params(1.05, 4.03906, 3.5075, 1.5, 3.0),
            expected={"cycle_count": 3, "min_sign_changes": 2, "best_effort": True},
            note="up to three nested cycles; innermost may fall below the "
                 "displacement resolution floor"),
        FigureRegistryEntry(
            figure_id="w6", task="cycles",
            params=validate_params(0.4, 5.06313, 4.4746, 0.870547, 3.0),
            expected={"cycle_count": 3, "min_sign_changes": 2, "best_effort": True},
            note="up to three nested cycles; innermost may fall below the "
                 "displacement resolution floor"),
        FigureRegistryEntry(
            figure_id="w10", task="classify",
            params=validate_params(192.0 * math.sqrt(3.0) / (175.0 * math.sqrt(35.0)),
                                   125.0 / 16.0, 7.5, 8.0 / 7.0, 2.5),
            expected={"degenerate_kind": "NilpotentEllipticCodim4Plus"},
            note="triple degeneracy on the type-discriminant zero locus"),
    ]
    return {e.figure_id: e for e in entries}


REGISTRY = _entries()


def list_figures() -> list:
    return [REGISTRY[k] for k in sorted(REGISTRY)]


def get_entry(figure_id: str) -> FigureRegistryEntry:
    try:
        return REGISTRY[figure_id]
    except KeyError:
        raise UnknownFigure(f"unknown figure id {figure_id!r}; "
                            f"known: {', '.join(sorted(REGISTRY))}") from None


@dataclass
class FigureOutcome:
    figure_id: str
    verdict: str                # match | mismatch | inconclusive
    detected: dict
    expected: dict
    scan: object = None
    sweep: object = None


def reproduce_figure(figure_id: str, rel_tol: float = 1e-12,
                     jobs: int = 1) -> FigureOutcome:
    entry = get_entry(figure_id)
    if entry.task == "cycles":
        return _reproduce_cycles(entry, rel_tol)
    if entry.task == "sweep":
        return _reproduce_sweep(entry, rel_tol, jobs)
    if entry.task == "classify":
        return _reproduce_classify(entry)
    raise UnknownFigure(f"registry entry {figure_id} has unknown task {entry.task!r}")


def _reproduce_cycles(entry: FigureRegistryEntry, rel_tol: float) -> FigureOutcome:
    try:
        focus, scan = cycle_scan_for_params(entry.params, rel_tol=rel_tol)
    except Inconclusive as exc:
        return FigureOutcome(entry.figure_id, "inconclusive",
                             {"reason": str(exc), "samples": exc.samples},
                             entry.expected)
    count = scan.count if scan is not None else 0
    sign_changes = _sign_changes(scan.samples) if scan is not None else 0
    detected = {
        "cycle_count": count,
        "sign_changes": sign_changes,
        "stabilities": [rec.stability for rec in (scan.records if scan else [])],
        "radii": [rec.radius for rec in (scan.records if scan else [])],
        "focus_z": focus.z if focus is not None else None,
        "focus_trace": focus.trace if focus is not None else None,
    }
    expected = entry.expected
    verdict = "match" if count == expected["cycle_count"] else "mismatch"
    if verdict == "match" and "stability" in expected and scan.records:
        if scan.records[-1].stability != expected["stability"]:
            verdict = "mismatch"
    if (verdict == "mismatch" and expected.get("best_effort")
            and sign_changes >= expected.get("min_sign_changes", 0)
            and _inner_trend_monotone(scan.samples)):
        verdict = "inconclusive"
    return FigureOutcome(entry.figure_id, verdict, detected, expected, scan=scan)


def _reproduce_sweep(entry: FigureRegistryEntry, rel_tol: float,
                     jobs: int) -> FigureOutcome:
    grid = sorted(entry.gamma_grid, reverse=True)
    sweep = bifurcation_sweep(entry.params, "gamma", grid,
                              rel_tol=max(rel_tol, 1e-11), jobs=jobs)
    kinds = []
    for ev in sweep.events:
        if ev.kind == "cycle-count-change" and ev.detail.endswith("-> 0"):
            kinds.append("cycles-to-zero")
        else:
            kinds.append(ev.kind)
    counts = [pt.cycle_count for pt in sweep.points]
    detected = {"event_kinds": kinds,
                "cycle_counts": counts,
                "events": [(ev.kind, ev.lo, ev.hi, ev.detail) for ev in sweep.events]}
    expected = entry.expected
    if "event_sequence" in expected:
        verdict = "match" if _is_subsequence(expected["event_sequence"], kinds) \
            else "mismatch"
    else:
        have_events = all(any(k == want for k in kinds)
                          for want in expected.get("events_include", []))
        have_counts = all(c in [c2 for c2 in counts if c2 is not None]
                          for c in expected.get("cycle_counts_include", []))
        verdict = "match" if (have_events and have_counts) else "mismatch"
    return FigureOutcome(entry.figure_id, verdict, detected, expected, sweep=sweep)


def _reproduce_classify(entry: FigureRegistryEntry) -> FigureOutcome:
    params = entry.params
    reports = classified_equilibria(params)
    detected_kinds = []
    for rep in reports:
        if rep.multiplicity == 2:
            kind = classify_degenerate(params, rep.z)
            detected_kinds.append((rep.z, kind.value))
    detected = {
        "origin": classify_equilibrium(params, "origin").value,
        "equilibria": [(r.z, r.kind.value if r.kind else None, r.multiplicity)
                       for r in reports],
        "degenerate": detected_kinds,
    }
    expected = entry.expected
    want = expected.get("degenerate_kind")
    got = [k for _, k in detected_kinds]
    verdict = "match" if want in got else "mismatch"
    return FigureOutcome(entry.figure_id, verdict, detected, expected)


def _sign_changes(samples: list) -> int:
    vals = [d for _, d in samples if d is not None]
    changes = 0
    for a, b in zip(vals[:-1], vals[1:]):
        if a != 0.0 and a * b < 0.0:
            changes += 1
    return changes


def _inner_trend_monotone(samples: list) -> bool:
    """True when the innermost displacement magnitudes decrease toward zero,
    the signature of a crossing hiding below the resolution floor."""
    vals = [abs(d) for _, d in samples[:6] if d is not None]
    if len(vals) < 3:
        return False
    return all(a <= b for a, b in zip(vals[:-1], vals[1:]))


def _is_subsequence(needle: list, haystack: list) -> bool:
    it = iter(haystack)
    return all(any(x == want for x in it) for want in needle)
