"""Append-only JSON-lines store of verified solutions."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from .construction import verify_equation
from .search import SolutionRecord

__all__ = [
    "JournalError",
    "JournalCorruptError",
    "AppendResult",
    "dumps",
    "journal_append",
    "read_journal",
    "best_per_coeffs",
]


class JournalError(ValueError):
    pass


class JournalCorruptError(JournalError):
    def __init__(self, path: Path, line_no: int, reason: str):
        super().__init__(f"{path}: line {line_no}: {reason}")
        self.line_no = line_no


@dataclass(frozen=True)
class AppendResult:
    status: str  # "appended" or "duplicate"
    record: SolutionRecord

    @property
    def appended(self) -> bool:
        return self.status == "appended"


def dumps(record: SolutionRecord) -> str:
    return json.dumps(record.to_dict(), ensure_ascii=False, separators=(",", ":"))


def read_journal(path: str | os.PathLike) -> list[SolutionRecord]:
    path = Path(path)
    if not path.exists():
        return []
    records = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                records.append(SolutionRecord.from_dict(json.loads(line)))
            except (ValueError, KeyError, TypeError) as exc:
                raise JournalCorruptError(path, line_no, str(exc) or type(exc).__name__) from None
    return records


def journal_append(path: str | os.PathLike, record: SolutionRecord) -> AppendResult:
    """Verify, dedupe by canonical key, then append one line."""
    sol = record.solution
    if not verify_equation(sol.spec, sol.x, sol.y):
        raise JournalError(f"record {record.key} fails the equation; not written")
    path = Path(path)
    if any(existing.key == record.key for existing in read_journal(path)):
        return AppendResult("duplicate", record)
    if record.discovered_at is None:
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        record = replace(record, discovered_at=stamp)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(dumps(record) + "\n")
        fh.flush()
        os.fsync(fh.fileno())
    return AppendResult("appended", record)


def best_per_coeffs(records: list[SolutionRecord]) -> dict[tuple[int, ...], SolutionRecord]:
    best: dict[tuple[int, ...], SolutionRecord] = {}
    for rec in records:
        a = rec.solution.spec.a
        if a not in best or rec.rank < best[a].rank:
            best[a] = rec
    return best
