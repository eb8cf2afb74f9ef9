"""Conjunctive, Dempster and disjunctive combination of mass functions.

All rules accumulate over pairs of focal elements only, so the cost is
``O(F1 * F2)`` in the focal counts regardless of the frame size.
"""

from __future__ import annotations

import enum
import operator
from collections.abc import Callable, Sequence
from functools import reduce

from .errors import EmptyInput, FrameMismatch, TotalConflict
from .evidence import EMPTY, MassFunction, SubsetMask

TOTAL_CONFLICT_THRESHOLD = 1e-12


class CombinationRule(str, enum.Enum):
    CONJUNCTIVE = "conjunctive"
    DEMPSTER = "dempster"
    DISJUNCTIVE = "disjunctive"


def _check_frames(m1: MassFunction, m2: MassFunction) -> None:
    if m1.frame != m2.frame:
        raise FrameMismatch("mass functions are defined on different frames")


def _pairwise(
    m1: MassFunction, m2: MassFunction, op: Callable[[SubsetMask, SubsetMask], SubsetMask]
) -> MassFunction:
    _check_frames(m1, m2)
    acc: dict[SubsetMask, float] = {}
    for b, vb in m1.items():
        for c, vc in m2.items():
            key = op(b, c)
            acc[key] = acc.get(key, 0.0) + vb * vc
    return MassFunction(m1.frame, acc)


def conjunctive(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Unnormalized conjunctive rule; conflict is left on the empty set."""
    return _pairwise(m1, m2, operator.and_)


def disjunctive(m1: MassFunction, m2: MassFunction) -> MassFunction:
    return _pairwise(m1, m2, operator.or_)


def normalize(m: MassFunction) -> MassFunction:
    """Drop the empty-set mass and rescale the rest by ``1 - m(empty)``."""
    k = m.empty_mass
    if 1.0 - k <= TOTAL_CONFLICT_THRESHOLD:
        raise TotalConflict(f"conflict {k!r} leaves nothing to normalize")
    if k == 0.0:
        return m
    scale = 1.0 - k
    return MassFunction(m.frame, {a: v / scale for a, v in m.items() if a != EMPTY})


def dempster(m1: MassFunction, m2: MassFunction) -> MassFunction:
    return normalize(conjunctive(m1, m2))


def conflict(m1: MassFunction, m2: MassFunction) -> float:
    """Mass the conjunctive rule sends to the empty set."""
    return conjunctive(m1, m2).empty_mass


def combine_all(rule: CombinationRule | str, masses: Sequence[MassFunction]) -> MassFunction:
    """Fold any number of mass functions with one rule.

    Dempster folds conjunctively and normalizes once at the end.
    """
    rule = CombinationRule(rule)
    if not masses:
        raise EmptyInput("nothing to combine")
    first = masses[0]
    for m in masses[1:]:
        _check_frames(first, m)
    if len(masses) == 1:
        return first
    if rule is CombinationRule.DISJUNCTIVE:
        return reduce(disjunctive, masses)
    folded = reduce(conjunctive, masses)
    if rule is CombinationRule.DEMPSTER:
        return normalize(folded)
    return folded


RULES: dict[CombinationRule, Callable[[MassFunction, MassFunction], MassFunction]] = {
    CombinationRule.CONJUNCTIVE: conjunctive,
    CombinationRule.DEMPSTER: dempster,
    CombinationRule.DISJUNCTIVE: disjunctive,
}
