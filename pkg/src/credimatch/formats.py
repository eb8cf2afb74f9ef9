"""File formats: entity catalogs, injected scores, bba documents, JSON output.

bba documents look like::

    {"frame": ["a", "b", "c"],
     "bbas": [{"name": "s1", "masses": {"a": 0.4, "b|c": 0.2, "*": 0.4}}]}

Subsets are ``|``-joined labels, ``*`` is the whole frame and ``{}`` the
empty set.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from .errors import EvidenceError
from .evidence import Frame, MassFunction, frame_new, mass_new
from .pipeline import EntityCatalog, SimilarityRecord


class FormatError(EvidenceError):
    """Input document does not follow the expected layout."""


def read_catalog(path: str | Path, ontology_id: str | None = None) -> EntityCatalog:
    """One label per line; blank lines and ``#`` comments are skipped."""
    path = Path(path)
    labels = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            labels.append(line)
    return EntityCatalog(ontology_id or path.stem, tuple(labels))


def parse_scores(doc: Any) -> list[SimilarityRecord]:
    if not isinstance(doc, list):
        raise FormatError("scores document must be a JSON list")
    try:
        return [
            SimilarityRecord(item["matcher"], item["source"], item["target"], float(item["score"]))
            for item in doc
        ]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, EvidenceError):
            raise
        raise FormatError(f"malformed score record: {exc}") from exc


def read_scores(path: str | Path) -> list[SimilarityRecord]:
    return parse_scores(json.loads(Path(path).read_text(encoding="utf-8")))


def parse_bbas(doc: Any) -> tuple[Frame, list[tuple[str, MassFunction]]]:
    """Decode a bba document.  Empty-set mass is accepted here; rules that
    need a normalized input check for it themselves."""
    if not isinstance(doc, dict) or "frame" not in doc or "bbas" not in doc:
        raise FormatError("bba document needs 'frame' and 'bbas'")
    frame = frame_new(doc["frame"])
    out = []
    for i, entry in enumerate(doc["bbas"]):
        if not isinstance(entry, dict) or not isinstance(entry.get("masses"), dict):
            raise FormatError(f"bba #{i} has no 'masses' object")
        masses = [(frame.parse(k), v) for k, v in entry["masses"].items()]
        out.append((str(entry.get("name", f"bba{i + 1}")), mass_new(frame, masses, normalized=False)))
    if not out:
        raise FormatError("bba document lists no bba")
    return frame, out


def read_bbas(path: str | Path) -> tuple[Frame, list[tuple[str, MassFunction]]]:
    return parse_bbas(json.loads(Path(path).read_text(encoding="utf-8")))


def bba_document(frame: Frame, named: Sequence[tuple[str, MassFunction]]) -> dict[str, Any]:
    # full precision: six-decimal rounding breaks the unit-sum check on re-read
    return {
        "frame": list(frame.labels),
        "bbas": [
            {"name": name, "masses": m.to_labels()}
            for name, m in named
        ],
    }


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
