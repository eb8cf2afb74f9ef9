"""Decision rules on combined mass functions.

Singleton rules (max credibility, max plausibility, max pignistic
probability), the cardinality-weighted plausibility rule of Appriou, and the
minimum-distance rule: pick the candidate subset whose categorical mass
function is nearest, in Jousselme distance, to the combined one.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from itertools import combinations

from .errors import EmptyCandidateSet, FrameMismatch, NotSingleton, TotalConflict
from .evidence import EMPTY, Frame, MassFunction, SubsetMask, bel, categorical, pl, popcount


@dataclass(frozen=True)
class DecisionConfig:
    """Candidate filtering and tie handling.

    Candidates are the subsets whose cardinality lies in
    ``[min_cardinality, max_cardinality]``, plus the full frame when
    ``include_full_frame`` is set.
    """

    max_cardinality: int = 2
    include_full_frame: bool = False
    tie_tolerance: float = 1e-9
    min_cardinality: int = 1

    def __post_init__(self) -> None:
        if self.min_cardinality < 1:
            raise ValueError("min_cardinality must be at least 1")
        if self.max_cardinality < self.min_cardinality:
            raise ValueError("max_cardinality must be >= min_cardinality")
        if self.tie_tolerance < 0:
            raise ValueError("tie_tolerance must be non-negative")


@dataclass(frozen=True)
class AppriouParams:
    r: float = 1.0
    weights: Mapping[SubsetMask, float] = field(default_factory=dict)
    k_d: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"r must lie in [0, 1], got {self.r!r}")
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("subset weights must be non-negative")

    def weight(self, subset: SubsetMask) -> float:
        return self.weights.get(subset, 1.0)


@dataclass(frozen=True)
class DecisionOutcome:
    chosen: SubsetMask
    score_table: tuple[tuple[SubsetMask, float], ...]
    rule_name: str
    tie: bool = False

    @property
    def score(self) -> float:
        return dict(self.score_table)[self.chosen]


def _order_key(mask: SubsetMask) -> tuple[int, int]:
    return popcount(mask), mask


def _select(
    scores: Sequence[tuple[SubsetMask, float]], rule_name: str, maximize: bool, tol: float
) -> DecisionOutcome:
    if not scores:
        raise EmptyCandidateSet(f"{rule_name}: no candidate to decide on")
    values = [v for _, v in scores]
    best = max(values) if maximize else min(values)
    near = [mask for mask, v in scores if abs(v - best) <= tol]
    chosen = min(near, key=_order_key)
    return DecisionOutcome(chosen, tuple(scores), rule_name, tie=len(near) > 1)


def betp(m: MassFunction, singleton: SubsetMask) -> float:
    """Pignistic probability of one singleton."""
    m.frame.check(singleton)
    if popcount(singleton) != 1:
        raise NotSingleton(f"{m.frame.format(singleton)} is not a singleton")
    scale = 1.0 - m.empty_mass
    if scale <= 0.0:
        raise TotalConflict("pignistic transform undefined when m(empty) = 1")
    return math.fsum(v / (popcount(a) * scale) for a, v in m.items() if a & singleton)


def _singleton_rule(
    m: MassFunction, name: str, fn: Callable[[MassFunction, SubsetMask], float], tol: float
) -> DecisionOutcome:
    scores = [(x, fn(m, x)) for x in m.frame.singletons()]
    return _select(scores, name, maximize=True, tol=tol)


def decide_max_bel(m: MassFunction, tie_tolerance: float = 1e-9) -> DecisionOutcome:
    return _singleton_rule(m, "max_bel", bel, tie_tolerance)


def decide_max_pl(m: MassFunction, tie_tolerance: float = 1e-9) -> DecisionOutcome:
    return _singleton_rule(m, "max_pl", pl, tie_tolerance)


def decide_max_betp(m: MassFunction, tie_tolerance: float = 1e-9) -> DecisionOutcome:
    return _singleton_rule(m, "max_betp", betp, tie_tolerance)


def candidates(frame: Frame, config: DecisionConfig = DecisionConfig()) -> list[SubsetMask]:
    """Non-empty candidate subsets ordered by (cardinality, mask).

    Cardinality bounds are clipped to the frame size.
    """
    n = len(frame)
    out: list[SubsetMask] = []
    for k in range(config.min_cardinality, min(config.max_cardinality, n) + 1):
        masks = [sum(1 << i for i in combo) for combo in combinations(range(n), k)]
        out.extend(sorted(masks))
    if config.include_full_frame and frame.full not in out:
        out.append(frame.full)
    return out


def appriou_decide(
    m: MassFunction,
    params: AppriouParams = AppriouParams(),
    config: DecisionConfig = DecisionConfig(),
) -> DecisionOutcome:
    """Maximize ``m_d(X) * pl(X)`` with ``m_d(X) = K_d * w_X / |X|**r``.

    When ``params.k_d`` is None, ``K_d`` normalizes ``m_d`` over the
    candidate set.
    """
    cands = candidates(m.frame, config)
    if not cands:
        raise EmptyCandidateSet("appriou: no candidate to decide on")
    raw = [params.weight(x) / popcount(x) ** params.r for x in cands]
    if params.k_d is not None:
        k_d = params.k_d
    else:
        total = math.fsum(raw)
        k_d = 1.0 / total if total > 0 else 0.0
    scores = [(x, k_d * w * pl(m, x)) for x, w in zip(cands, raw)]
    return _select(scores, "appriou", maximize=True, tol=config.tie_tolerance)


def jaccard(a: SubsetMask, b: SubsetMask) -> float:
    union = a | b
    if union == EMPTY:
        return 1.0
    return popcount(a & b) / popcount(union)


def jousselme_distance(m1: MassFunction, m2: MassFunction) -> float:
    """Jousselme distance restricted to the union of both focal sets.

    Outside that union the difference vector is zero, so the restriction is
    exact.
    """
    if m1.frame != m2.frame:
        raise FrameMismatch("mass functions are defined on different frames")
    keys = sorted(set(m1.focal) | set(m2.focal))
    diff = [m1[k] - m2[k] for k in keys]
    quad = 0.0
    for i, (a, da) in enumerate(zip(keys, diff)):
        quad += da * da
        for b, db in zip(keys[i + 1 :], diff[i + 1 :]):
            quad += 2.0 * da * db * jaccard(a, b)
    return math.sqrt(max(0.0, 0.5 * quad))


def distance_table(
    m: MassFunction, config: DecisionConfig = DecisionConfig()
) -> list[tuple[SubsetMask, float]]:
    return [(x, jousselme_distance(m, categorical(m.frame, x))) for x in candidates(m.frame, config)]


def decide_min_distance(m: MassFunction, config: DecisionConfig = DecisionConfig()) -> DecisionOutcome:
    """Choose the candidate whose categorical mass function is closest to ``m``.

    Distances within ``tie_tolerance`` of the minimum tie; the tie goes to
    the smaller subset, then the lower mask, and is flagged on the outcome.
    """
    return _select(distance_table(m, config), "min_distance", maximize=False, tol=config.tie_tolerance)
