"""
Report assembly for the command-line front end.

A report is a JSON document (sorted keys, two-space indent) followed by a
single trailer line ``VERDICT: <token>``.  Sorting keys everywhere keeps
reports byte-identical across runs.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, Mapping

import numpy as np


def _plain(value: Any) -> Any:
    """Convert sets, tuples and numpy values into JSON-ready structures."""
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted(_plain(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


class ReportService:
    """Static helpers that render payloads and verdicts as report text."""

    @staticmethod
    def render(command: str, payload: Mapping[str, Any], verdict: str) -> str:
        body = {"command": command, **payload}
        text = json.dumps(_plain(body), sort_keys=True, indent=2)
        return f"{text}\nVERDICT: {verdict}\n"

    @staticmethod
    def verdict_of(report: str) -> str:
        """The token from a report's trailer line."""
        last = report.rstrip("\n").rsplit("\n", 1)[-1]
        prefix = "VERDICT: "
        if not last.startswith(prefix):
            raise ValueError("report has no VERDICT trailer")
        return last[len(prefix):]

    @staticmethod
    def label_sets(sets: Iterable[Iterable[str]]) -> list[list[str]]:
        """Sets of labels as sorted lists, ordered by size then content."""
        return sorted((sorted(s) for s in sets), key=lambda s: (len(s), s))
