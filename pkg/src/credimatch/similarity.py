"""Name-based similarity measures normalized to [0, 1].

Comparisons are case-sensitive and operate on Unicode code points.
"""

from __future__ import annotations

import enum


class MatcherKind(str, enum.Enum):
    LEVENSHTEIN = "levenshtein"
    JARO = "jaro"
    HAMMING = "hamming"


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance with unit insert/delete/substitute costs."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        current = [i]
        for j, cb in enumerate(b, 1):
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb)))
        previous = current
    return previous[-1]


def levenshtein_sim(a: str, b: str) -> float:
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - edit_distance(a, b) / longest


def jaro_sim(a: str, b: str) -> float:
    """Standard Jaro similarity.

    Characters match when equal and no further apart than
    ``max(len) // 2 - 1``; transpositions are half the out-of-order matches.
    """
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    window = max(0, max(len(a), len(b)) // 2 - 1)
    used = [False] * len(b)
    a_matches = []
    for i, ca in enumerate(a):
        lo, hi = max(0, i - window), min(len(b), i + window + 1)
        for j in range(lo, hi):
            if not used[j] and b[j] == ca:
                used[j] = True
                a_matches.append(ca)
                break
    m = len(a_matches)
    if m == 0:
        return 0.0
    b_matches = [cb for cb, u in zip(b, used) if u]
    transpositions = sum(x != y for x, y in zip(a_matches, b_matches)) / 2
    return (m / len(a) + m / len(b) + (m - transpositions) / m) / 3


def hamming_sim(a: str, b: str) -> float:
    """Positional agreement over the shorter string, divided by the longer length."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return sum(x == y for x, y in zip(a, b)) / longest


MATCHERS = {
    MatcherKind.LEVENSHTEIN: levenshtein_sim,
    MatcherKind.JARO: jaro_sim,
    MatcherKind.HAMMING: hamming_sim,
}


def score(kind: MatcherKind | str, a: str, b: str) -> float:
    return MATCHERS[MatcherKind(kind)](a, b)
