"""CSV and JSON serialization of search verdicts."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from typing import Iterable

from .search import STATUSES, SearchVerdict

CSV_COLUMNS = ("r", "ell", "m", "delta", "status", "t_plus", "t_minus", "notes")


def _notes(v: SearchVerdict) -> str:
    parts = []
    if v.status == "candidate":
        parts.append(f"surviving={v.surviving:+d}" if v.surviving else "surviving=0")
    if v.budget_limited:
        parts.append("budget_limited")
    if v.notes:
        parts.append(v.notes)
    return "; ".join(parts)


def verdict_record(v: SearchVerdict) -> dict:
    return {
        "r": v.r,
        "ell": v.ell,
        "m": v.m,
        "delta": v.delta,
        "status": v.status,
        "t_plus": v.t_plus,
        "t_minus": v.t_minus,
        "notes": _notes(v),
    }


def summarize(verdicts: Iterable[SearchVerdict]) -> dict:
    verdicts = list(verdicts)
    counts = Counter(v.status for v in verdicts)
    candidates = sorted({(v.r, v.ell, v.delta) for v in verdicts if v.status == "candidate"})
    return {
        "rows": len(verdicts),
        **{s: counts.get(s, 0) for s in STATUSES},
        "budget_limited": sum(v.budget_limited for v in verdicts),
        "candidate_triples": [list(c) for c in candidates],
    }


def _sorted(verdicts: Iterable[SearchVerdict]) -> list[SearchVerdict]:
    return sorted(verdicts, key=SearchVerdict.key)


def verdicts_to_csv(verdicts: Iterable[SearchVerdict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for v in _sorted(verdicts):
        rec = verdict_record(v)
        writer.writerow({k: "" if rec[k] is None else rec[k] for k in CSV_COLUMNS})
    return buf.getvalue()


def verdicts_to_json(verdicts: Iterable[SearchVerdict]) -> str:
    verdicts = _sorted(verdicts)
    doc = {"summary": summarize(verdicts), "verdicts": [verdict_record(v) for v in verdicts]}
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def read_verdicts_csv(text: str) -> list[dict]:
    """Parse verdict CSV back into dicts with ints restored."""
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        out = {}
        for k, val in row.items():
            if k in ("r", "ell", "m", "delta", "t_plus", "t_minus"):
                out[k] = int(val) if val != "" else None
            else:
                out[k] = val
        rows.append(out)
    return rows


def rows_to_csv(header: tuple[str, ...], rows: Iterable[tuple]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()
