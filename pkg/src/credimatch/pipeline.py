"""Credibilistic entity matching between two catalogs.

For every source entity each matcher proposes its best target; each
proposal becomes a simple mass function ``m({target}) = score`` with the
remainder on the whole frame.  The proposals are fused and the decision is
the candidate subset of targets nearest to the fused evidence, which yields
either a 1:1 or a 1:n correspondence.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Any

from .combination import CombinationRule, combine_all
from .decision import DecisionConfig, decide_min_distance
from .errors import EvidenceError, ScoreOutOfRange
from .evidence import Frame, MassFunction, frame_new, mass_new
from .similarity import MatcherKind, score

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EntityCatalog:
    ontology_id: str
    entities: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entities", tuple(self.entities))
        if not self.entities:
            raise ValueError(f"catalog {self.ontology_id!r} is empty")
        if len(set(self.entities)) != len(self.entities):
            raise ValueError(f"catalog {self.ontology_id!r} has duplicate labels")
        if not all(self.entities):
            raise ValueError(f"catalog {self.ontology_id!r} has an empty label")


@dataclass(frozen=True)
class SimilarityRecord:
    matcher: MatcherKind
    source: str
    target: str
    score: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "matcher", MatcherKind(self.matcher))
        if not 0.0 <= self.score <= 1.0:
            raise ScoreOutOfRange(f"score {self.score!r} for {self.source!r} is outside [0, 1]")

    def to_dict(self) -> dict[str, Any]:
        return {"matcher": self.matcher.value, "target": self.target, "score": round(self.score, 6)}


@dataclass(frozen=True)
class PipelineConfig:
    matchers: tuple[MatcherKind, ...] = tuple(MatcherKind)
    threshold: float = 0.0
    combination: CombinationRule = CombinationRule.DEMPSTER
    decision: DecisionConfig = DecisionConfig()
    require_all_matchers: bool = True

    def __post_init__(self) -> None:
        matchers = tuple(MatcherKind(m) for m in self.matchers)
        if not matchers:
            raise ValueError("at least one matcher is required")
        if len(set(matchers)) != len(matchers):
            raise ValueError("matchers must be distinct")
        if not 0.0 <= self.threshold < 1.0:
            raise ValueError(f"threshold must lie in [0, 1), got {self.threshold!r}")
        object.__setattr__(self, "matchers", matchers)
        object.__setattr__(self, "combination", CombinationRule(self.combination))

    def to_dict(self) -> dict[str, Any]:
        d = self.decision
        return {
            "matchers": [m.value for m in self.matchers],
            "threshold": self.threshold,
            "combination": self.combination.value,
            "decision": {
                "min_cardinality": d.min_cardinality,
                "max_cardinality": d.max_cardinality,
                "include_full_frame": d.include_full_frame,
                "tie_tolerance": d.tie_tolerance,
            },
            "require_all_matchers": self.require_all_matchers,
        }


@dataclass(frozen=True)
class CorrespondenceDecision:
    source: str
    decided: tuple[str, ...]
    distance: float
    fused: MassFunction
    per_matcher: tuple[SimilarityRecord, ...]
    tie: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "source": self.source,
            "decided": list(self.decided),
            "distance": round(self.distance, 6),
            "tie": self.tie,
            "fused": {k: round(v, 6) for k, v in self.fused.to_labels().items()},
            "per_matcher": [r.to_dict() for r in self.per_matcher],
        }


@dataclass(frozen=True)
class AlignmentDocument:
    source_ontology: str
    target_ontology: str
    config: PipelineConfig
    cells: tuple[CorrespondenceDecision, ...] = ()
    frame: Frame | None = None
    diagnostics: tuple[dict[str, str], ...] = field(default=())

    def cell(self, source: str) -> CorrespondenceDecision:
        for c in self.cells:
            if c.source == source:
                return c
        raise KeyError(source)

    def to_dict(self) -> dict[str, Any]:
        return {
            "source_ontology": self.source_ontology,
            "target_ontology": self.target_ontology,
            "config": self.config.to_dict(),
            "frame": list(self.frame.labels) if self.frame else [],
            "cells": [c.to_dict() for c in self.cells],
            "diagnostics": list(self.diagnostics),
        }


def _map(fn: Callable, items: Sequence, workers: int) -> list:
    # executor.map keeps input order, so results are scheduling-independent
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _best_targets(
    source: str, targets: Sequence[str], matchers: Sequence[MatcherKind], threshold: float
) -> list[SimilarityRecord]:
    out = []
    for kind in matchers:
        best_target, best = None, -1.0
        for target in targets:
            s = score(kind, source, target)
            if s > best:
                best_target, best = target, s
        if best > threshold and best > 0.0:
            out.append(SimilarityRecord(kind, source, best_target, best))
    return out


def compute_similarities(
    c1: EntityCatalog, c2: EntityCatalog, config: PipelineConfig, workers: int = 1
) -> list[SimilarityRecord]:
    """Top-1 target per (matcher, source entity), kept when its score beats the threshold.

    Ties go to the earlier target in catalog order.
    """
    fn = partial(_best_targets, targets=c2.entities, matchers=config.matchers, threshold=config.threshold)
    return [r for batch in _map(fn, c1.entities, workers) for r in batch]


def filter_records(
    records: Iterable[SimilarityRecord],
    c1: EntityCatalog,
    c2: EntityCatalog,
    config: PipelineConfig,
) -> tuple[list[SimilarityRecord], list[dict[str, str]]]:
    """Bring externally supplied scores into the shape ``compute_similarities`` produces.

    Unknown entities are reported, records of unconfigured matchers dropped,
    the threshold applied, and only the best record per (matcher, source)
    kept.  Output is ordered by source catalog order, then matcher order.
    """
    sources = {e: i for i, e in enumerate(c1.entities)}
    targets = {e: i for i, e in enumerate(c2.entities)}
    diagnostics = []
    best: dict[tuple[str, MatcherKind], SimilarityRecord] = {}
    for r in records:
        if r.source not in sources or r.target not in targets:
            diagnostics.append({
                "source": r.source,
                "error": "UnknownEntity",
                "message": f"{r.matcher.value} record {r.source!r} -> {r.target!r} names an entity outside the catalogs",
            })
            continue
        if r.matcher not in config.matchers or not (r.score > config.threshold and r.score > 0.0):
            continue
        key = (r.source, r.matcher)
        held = best.get(key)
        if held is None or r.score > held.score or (
            r.score == held.score and targets[r.target] < targets[held.target]
        ):
            best[key] = r
    order = {m: i for i, m in enumerate(config.matchers)}
    kept = sorted(best.values(), key=lambda r: (sources[r.source], order[r.matcher]))
    return kept, diagnostics


def select_entities(records: Iterable[SimilarityRecord], config: PipelineConfig) -> list[str]:
    """Source entities with enough matcher support, in first-appearance order."""
    seen: dict[str, set[MatcherKind]] = {}
    for r in records:
        seen.setdefault(r.source, set()).add(r.matcher)
    if not config.require_all_matchers:
        return list(seen)
    wanted = set(config.matchers)
    return [s for s, kinds in seen.items() if wanted <= kinds]


def build_frame(records: Iterable[SimilarityRecord]) -> Frame:
    """Global frame of every distinct target, in first-appearance order."""
    return frame_new(list(dict.fromkeys(r.target for r in records)))


def build_bbas(source: str, records: Iterable[SimilarityRecord], frame: Frame) -> list[MassFunction]:
    out = []
    for r in records:
        if r.source != source:
            continue
        if not 0.0 < r.score <= 1.0:
            raise ScoreOutOfRange(f"cannot turn score {r.score!r} into a mass")
        out.append(mass_new(frame, [(frame.singleton(r.target), r.score), (frame.full, 1.0 - r.score)]))
    return out


def match_entity(
    source: str,
    records: Sequence[SimilarityRecord],
    frame: Frame,
    config: PipelineConfig = PipelineConfig(),
) -> CorrespondenceDecision:
    own = tuple(r for r in records if r.source == source)
    fused = combine_all(config.combination, build_bbas(source, own, frame))
    outcome = decide_min_distance(fused, config.decision)
    return CorrespondenceDecision(
        source=source,
        decided=tuple(frame.labels_of(outcome.chosen)),
        distance=outcome.score,
        fused=fused,
        per_matcher=own,
        tie=outcome.tie,
    )


def _match_or_report(
    source: str, records: Sequence[SimilarityRecord], frame: Frame, config: PipelineConfig
) -> CorrespondenceDecision | dict[str, str]:
    try:
        return match_entity(source, records, frame, config)
    except EvidenceError as exc:
        log.debug("entity %r failed: %s", source, exc)
        return {"source": source, "error": type(exc).__name__, "message": str(exc)}


def run_pipeline(
    c1: EntityCatalog,
    c2: EntityCatalog,
    config: PipelineConfig = PipelineConfig(),
    records: Iterable[SimilarityRecord] | None = None,
    workers: int = 1,
) -> AlignmentDocument:
    """Match every source entity and collect an alignment.

    ``records`` replaces the computed similarities (replay of known
    scores).  Per-entity failures land in ``diagnostics`` instead of
    aborting the run.
    """
    if records is None:
        scored, diagnostics = compute_similarities(c1, c2, config, workers), []
    else:
        scored, diagnostics = filter_records(records, c1, c2, config)
    retained = set(select_entities(scored, config))
    kept = [r for r in scored if r.source in retained]
    if not kept:
        return AlignmentDocument(c1.ontology_id, c2.ontology_id, config, diagnostics=tuple(diagnostics))
    frame = build_frame(kept)
    by_source: dict[str, list[SimilarityRecord]] = {}
    for r in kept:
        by_source.setdefault(r.source, []).append(r)
    sources = [e for e in c1.entities if e in by_source]
    fn = partial(_run_one, by_source=by_source, frame=frame, config=config)
    cells = []
    for result in _map(fn, sources, workers):
        if isinstance(result, dict):
            diagnostics.append(result)
        else:
            cells.append(result)
    return AlignmentDocument(
        c1.ontology_id, c2.ontology_id, config, tuple(cells), frame, tuple(diagnostics)
    )


def _run_one(source, by_source, frame, config):
    return _match_or_report(source, by_source[source], frame, config)
