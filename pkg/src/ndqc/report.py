"""Measure reports: strict JSON schema, canonical serialization, CSV views.

Canonical serialization is sorted-key compact JSON plus one newline, so
identical flags and seed produce byte-identical files.
"""

from __future__ import annotations

import json

from . import boolfn, polys
from .boolfn import CapExceeded, TruthTable

MEASURE_KEYS = ("deg", "ndeg", "C0", "C1", "bs0", "bs1", "D", "N", "NQ")
REPORT_KEYS = frozenset(
    {"function", "n", "measures", "witness", "checks", "seed", "config"})
CHECK_KEYS = frozenset({"name", "pass", "details"})


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"


def _measure(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except CapExceeded as e:
        return {"skipped": str(e)}


def compute_measures(f: TruthTable, seed: int):
    """All MeasureReport measures, honoring per-operation caps.

    Returns (measures dict, witness polynomial or None).
    """
    measures = {}
    witness = None
    p = _measure(polys.exact_poly, f)
    measures["deg"] = p.degree if not isinstance(p, dict) else p
    try:
        nd, cert = polys.ndeg(f, seed=seed)
        measures["ndeg"] = nd
        witness = cert.witness
    except CapExceeded as e:
        measures["ndeg"] = {"skipped": str(e)}
    except polys.IdenticallyZero:
        measures["ndeg"] = {"error": "IdenticallyZero"}
    measures["C0"] = _measure(boolfn.c_zero, f)
    measures["C1"] = _measure(boolfn.c_one, f)
    measures["bs0"] = _measure(boolfn.bs_zero, f)
    measures["bs1"] = _measure(boolfn.bs_one, f)
    measures["D"] = _measure(boolfn.decision_tree_depth, f)
    measures["N"] = measures["C1"]
    measures["NQ"] = measures["ndeg"]
    return measures, witness


def build_measure_report(f: TruthTable, seed: int, config: dict) -> dict:
    measures, witness = compute_measures(f, seed)
    checks = []
    if witness is not None:
        checks.append({
            "name": "witness_verifies",
            "pass": polys.verify_ndet(witness, f),
            "details": "exact nonzero-pattern check over all inputs"})
        checks.append({
            "name": "witness_degree_matches",
            "pass": witness.degree == measures["ndeg"],
            "details": f"deg(witness)={witness.degree}"})
    checks.append({
        "name": "nq_equals_ndeg",
        "pass": measures["NQ"] == measures["ndeg"],
        "details": "NQ(f)=ndeg(f) identity"})
    return {
        "function": boolfn.format_table(f),
        "n": f.n,
        "measures": measures,
        "witness": polys.format_poly(witness) if witness is not None else None,
        "checks": checks,
        "seed": seed,
        "config": config,
    }


def load_measure_report(text: str) -> dict:
    """Strict loader: rejects unknown keys and re-verifies the witness."""
    report = json.loads(text)
    if set(report) != REPORT_KEYS:
        unknown = set(report) - REPORT_KEYS
        missing = REPORT_KEYS - set(report)
        raise ValueError(f"bad report keys: unknown={sorted(unknown)}, "
                         f"missing={sorted(missing)}")
    if set(report["measures"]) != set(MEASURE_KEYS):
        raise ValueError("bad measure keys")
    for chk in report["checks"]:
        if set(chk) != CHECK_KEYS:
            raise ValueError("bad check keys")
    f = boolfn.parse_table(report["function"])
    if f.n != report["n"]:
        raise ValueError("n does not match the function table")
    if report["witness"] is not None:
        w = polys.parse_poly(report["witness"], f.n)
        if not polys.verify_ndet(w, f):
            raise ValueError("stored witness fails re-verification")
    return report


def report_all_pass(report: dict) -> bool:
    return all(c["pass"] for c in report.get("checks", []))


def measure_report_csv_lines(report: dict) -> list:
    lines = ["key,value"]
    lines.append(f"function,{report['function']}")
    lines.append(f"n,{report['n']}")
    for k in MEASURE_KEYS:
        v = report["measures"][k]
        if isinstance(v, dict):
            tag, detail = next(iter(v.items()))
            v = f"{tag}:{detail}"
        lines.append(f"{k},{v}")
    lines.append(f"seed,{report['seed']}")
    for chk in report["checks"]:
        lines.append(f"check:{chk['name']},{'pass' if chk['pass'] else 'FAIL'}")
    return lines


def suite_report_csv_lines(report: dict) -> list:
    """One row per (function, inequality) for theorem-suite reports."""
    lines = ["function,inequality,pass"]
    for row in report["results"]:
        lines.append(f"{row['function']},{row['inequality']},"
                     f"{'pass' if row['pass'] else 'FAIL'}")
    return lines


def checks_report_csv_lines(report: dict) -> list:
    lines = ["check,pass,details"]
    for chk in report["checks"]:
        detail = str(chk["details"]).replace(",", ";")
        lines.append(f"{chk['name']},{'pass' if chk['pass'] else 'FAIL'},"
                     f"{detail}")
    return lines
