"""Frames of discernment, subset masks and mass functions.

Subsets of a frame are plain ``int`` bitmasks: bit ``i`` is set when the
``i``-th label belongs to the subset.  Set algebra is therefore bitwise
(``&``, ``|``, ``~``) and cardinality is ``int.bit_count``.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from types import MappingProxyType

from .errors import (
    DuplicateLabel,
    EmptyFrame,
    EmptySetMass,
    EmptySubset,
    FrameTooLarge,
    InvalidSubset,
    MassOutOfRange,
    SumNotOne,
)

MAX_FRAME_SIZE = 64
SUM_TOLERANCE = 1e-9
ULP_NOISE = 1e-15

EMPTY = 0
THETA_TOKEN = "*"
EMPTY_TOKEN = "{}"
SEPARATOR = "|"

SubsetMask = int


def popcount(mask: SubsetMask) -> int:
    return mask.bit_count()


@dataclass(frozen=True)
class Frame:
    """Ordered set of mutually exclusive hypothesis labels.

    Label order fixes bit positions, so two frames are equal only when they
    list the same labels in the same order.
    """

    labels: tuple[str, ...]
    _index: Mapping[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise EmptyFrame("a frame needs at least one label")
        if len(labels) > MAX_FRAME_SIZE:
            raise FrameTooLarge(f"{len(labels)} labels exceed the capacity of {MAX_FRAME_SIZE}")
        index: dict[str, int] = {}
        for i, label in enumerate(labels):
            if not isinstance(label, str) or not label:
                raise EmptyFrame(f"label #{i} is empty or not text")
            if label in index:
                raise DuplicateLabel(f"duplicate label {label!r}")
            index[label] = i
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> SubsetMask:
        """Mask of the whole frame."""
        return (1 << len(self.labels)) - 1

    def singleton(self, label: str) -> SubsetMask:
        try:
            return 1 << self._index[label]
        except KeyError:
            raise InvalidSubset(f"unknown label {label!r}") from None

    def mask(self, labels: Iterable[str]) -> SubsetMask:
        bits = 0
        for label in labels:
            bits |= self.singleton(label)
        return bits

    def singletons(self) -> list[SubsetMask]:
        return [1 << i for i in range(len(self.labels))]

    def labels_of(self, mask: SubsetMask) -> list[str]:
        self.check(mask)
        return [label for i, label in enumerate(self.labels) if mask >> i & 1]

    def check(self, mask: SubsetMask) -> SubsetMask:
        if not isinstance(mask, int) or mask < 0 or mask & ~self.full:
            raise InvalidSubset(f"mask {mask!r} is not a subset of a frame of size {len(self)}")
        return mask

    def format(self, mask: SubsetMask, theta_token: bool = False) -> str:
        """Render a subset as ``a|b``; ``{}`` for the empty set.

        With ``theta_token`` the full frame is written as ``*``.
        """
        if mask == EMPTY:
            return EMPTY_TOKEN
        if theta_token and mask == self.full:
            return THETA_TOKEN
        return SEPARATOR.join(self.labels_of(mask))

    def parse(self, text: str) -> SubsetMask:
        text = text.strip()
        if text == EMPTY_TOKEN:
            return EMPTY
        if text == THETA_TOKEN:
            return self.full
        return self.mask(part.strip() for part in text.split(SEPARATOR))


def frame_new(labels: Sequence[str]) -> Frame:
    return Frame(tuple(labels))


class MassFunction:
    """Immutable sparse basic belief assignment over one frame.

    Only focal elements are stored.  ``normalized`` is true when the empty
    set carries no mass; unnormalized instances only come out of the
    conjunctive rule.
    """

    __slots__ = ("_frame", "_focal")

    def __init__(self, frame: Frame, focal: Mapping[SubsetMask, float]):
        # trusted constructor: callers validate; use mass_new for raw input
        object.__setattr__(self, "_frame", frame)
        ordered = {k: focal[k] for k in sorted(focal) if focal[k] > 0.0}
        object.__setattr__(self, "_focal", MappingProxyType(ordered))

    def __setattr__(self, name, value):
        raise AttributeError("MassFunction is immutable")

    def __reduce__(self):
        return MassFunction, (self._frame, dict(self._focal))

    @property
    def frame(self) -> Frame:
        return self._frame

    @property
    def focal(self) -> Mapping[SubsetMask, float]:
        return self._focal

    @property
    def normalized(self) -> bool:
        return EMPTY not in self._focal

    @property
    def empty_mass(self) -> float:
        return self._focal.get(EMPTY, 0.0)

    def __getitem__(self, mask: SubsetMask) -> float:
        return self._focal.get(mask, 0.0)

    def __iter__(self) -> Iterator[SubsetMask]:
        return iter(self._focal)

    def __len__(self) -> int:
        return len(self._focal)

    def items(self):
        return self._focal.items()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MassFunction):
            return NotImplemented
        return self._frame == other._frame and dict(self._focal) == dict(other._focal)

    def __hash__(self) -> int:
        return hash((self._frame, tuple(self._focal.items())))

    def isclose(self, other: MassFunction, tol: float = 1e-9) -> bool:
        if self._frame != other._frame:
            return False
        keys = set(self._focal) | set(other._focal)
        return all(abs(self[k] - other[k]) <= tol for k in keys)

    def to_labels(self, theta_token: bool = True) -> dict[str, float]:
        return {self._frame.format(k, theta_token): v for k, v in self._focal.items()}

    def __repr__(self) -> str:
        body = ", ".join(f"{self._frame.format(k, True)}: {v:.6g}" for k, v in self._focal.items())
        return f"MassFunction({{{body}}})"


def mass_new(
    frame: Frame,
    assignments: Mapping[SubsetMask, float] | Iterable[tuple[SubsetMask, float]],
    normalized: bool = True,
) -> MassFunction:
    """Validate raw assignments and build a mass function.

    Duplicate subsets are summed, zero masses dropped, and a total within
    ``SUM_TOLERANCE`` of one is rescaled to exactly one.
    """
    if isinstance(assignments, Mapping):
        assignments = assignments.items()
    merged: dict[SubsetMask, float] = {}
    for mask, value in assignments:
        frame.check(mask)
        value = float(value)
        if not 0.0 <= value <= 1.0 or math.isnan(value):
            raise MassOutOfRange(f"mass {value!r} on {frame.format(mask)} is outside [0, 1]")
        merged[mask] = merged.get(mask, 0.0) + value
    if normalized and merged.get(EMPTY, 0.0) > 0.0:
        raise EmptySetMass(f"normalized mass function assigns {merged[EMPTY]!r} to the empty set")
    total = math.fsum(merged.values())
    if abs(total - 1.0) > SUM_TOLERANCE:
        raise SumNotOne(f"masses sum to {total!r}")
    if abs(total - 1.0) <= ULP_NOISE:
        # rescaling here would only perturb the last bits and break re-reads
        total = 1.0
    return MassFunction(frame, {k: min(v / total, 1.0) for k, v in merged.items() if v > 0.0})


def categorical(frame: Frame, subset: SubsetMask) -> MassFunction:
    if frame.check(subset) == EMPTY:
        raise EmptySubset("categorical mass function on the empty set")
    return MassFunction(frame, {subset: 1.0})


def vacuous(frame: Frame) -> MassFunction:
    return MassFunction(frame, {frame.full: 1.0})


def bel(m: MassFunction, subset: SubsetMask) -> float:
    """Total mass of non-empty focal sets contained in ``subset``."""
    m.frame.check(subset)
    return math.fsum(v for b, v in m.items() if b and b & ~subset == 0)


def pl(m: MassFunction, subset: SubsetMask) -> float:
    """Total mass of focal sets meeting ``subset``."""
    m.frame.check(subset)
    return math.fsum(v for b, v in m.items() if b & subset)


def focal_elements(m: MassFunction) -> list[tuple[SubsetMask, float]]:
    return list(m.items())
