"""Consolidate experiment summaries into a single acceptance report."""

from __future__ import annotations

from .errors import SummaryError
from .io import read_json


def consolidate(summaries: list[dict]) -> dict:
    sections = []
    failures = []
    for s in summaries:
        if not isinstance(s, dict) or "contracts" not in s or "experiment" not in s:
            raise SummaryError("summary lacks 'experiment' or 'contracts'")
        label = f"{s['experiment']}:{s.get('name', '?')}"
        rows = []
        for cname in sorted(s["contracts"]):
            c = s["contracts"][cname]
            rows.append({"criterion": cname, "value": c["value"], "op": c["op"],
                         "threshold": c["threshold"], "pass": bool(c["pass"])})
            if not c["pass"]:
                failures.append(f"{label}/{cname}")
        sections.append({"section": label, "experiment": s["experiment"], "criteria": rows,
                         "pass": all(r["pass"] for r in rows)})
    return {"sections": sections, "failures": failures, "overall": "PASS" if not failures else "FAIL"}


def report(paths) -> dict:
    """Load summary files and consolidate them."""
    if not paths:
        raise SummaryError("no summaries given")
    return consolidate([read_json(p) for p in paths])


def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.3e}"
    return str(v)


def format_table(rep: dict) -> str:
    lines = []
    for sec in rep["sections"]:
        lines.append(f"[{'PASS' if sec['pass'] else 'FAIL'}] {sec['section']}")
        for r in sec["criteria"]:
            mark = "ok " if r["pass"] else "BAD"
            lines.append(f"    {mark} {r['criterion']:<34} {_cell(r['value']):>12} {r['op']} {_cell(r['threshold'])}")
    lines.append(f"overall: {rep['overall']}")
    for f in rep["failures"]:
        lines.append(f"  failed: {f}")
    return "\n".join(lines)
