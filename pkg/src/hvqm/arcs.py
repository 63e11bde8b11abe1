"""Exact arithmetic on finite unions of half-open arcs of the phase circle.

Angles live in (-pi, pi].  An arc (a, b] is taken counterclockwise from a
to b; wrapping past pi is allowed on input and resolved into canonical
non-wrapping segments.  All set operations are closed and use exact float
comparisons on endpoints, so arcs built from shared endpoint values compose
without double-counting.
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi


class ArcSet:
    """A canonical disjoint sorted list of half-open segments (lo, hi]."""

    __slots__ = ("segments",)

    def __init__(self, raw_arcs=(), _canonical=None):
        if _canonical is not None:
            self.segments = _canonical
            return
        segments = []
        for a, b in raw_arcs:
            length = b - a
            if length <= 0.0:
                continue
            if length >= TWO_PI:
                segments = [(-np.pi, np.pi)]
                break
            lo, hi = float(a), float(b)
            # shift out-of-range starts by whole turns into [-pi, pi);
            # in-range endpoints are kept bit-exact so endpoints shared
            # between arcs stay shared
            if lo >= np.pi:
                turns = np.floor((lo + np.pi) / TWO_PI)
                lo -= turns * TWO_PI
                hi -= turns * TWO_PI
            elif lo < -np.pi:
                turns = np.ceil((-np.pi - lo) / TWO_PI)
                lo += turns * TWO_PI
                hi += turns * TWO_PI
            if hi <= np.pi:
                segments.append((lo, hi))
            else:
                if lo < np.pi:
                    segments.append((lo, np.pi))
                segments.append((-np.pi, hi - TWO_PI))
        self.segments = _merge(segments)

    @classmethod
    def empty(cls) -> "ArcSet":
        return cls(_canonical=[])

    @classmethod
    def full(cls) -> "ArcSet":
        return cls(_canonical=[(-np.pi, np.pi)])

    @property
    def length(self) -> float:
        return float(sum(hi - lo for lo, hi in self.segments))

    @property
    def normalized_measure(self) -> float:
        """Arc length divided by 2 pi: a probability in [0, 1]."""
        return self.length / TWO_PI

    def contains(self, u) -> bool:
        u = float(u)
        return any(lo < u <= hi for lo, hi in self.segments)

    def contains_many(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        out = np.zeros(u.shape, dtype=bool)
        for lo, hi in self.segments:
            out |= (u > lo) & (u <= hi)
        return out

    def complement(self) -> "ArcSet":
        segments = []
        cursor = -np.pi
        for lo, hi in self.segments:
            if lo > cursor:
                segments.append((cursor, lo))
            cursor = hi
        if cursor < np.pi:
            segments.append((cursor, np.pi))
        return ArcSet(_canonical=segments)

    def union(self, other: "ArcSet") -> "ArcSet":
        return ArcSet(_canonical=_merge(list(self.segments) + list(other.segments)))

    def intersection(self, other: "ArcSet") -> "ArcSet":
        segments = []
        for lo1, hi1 in self.segments:
            for lo2, hi2 in other.segments:
                lo, hi = max(lo1, lo2), min(hi1, hi2)
                if hi > lo:
                    segments.append((lo, hi))
        return ArcSet(_canonical=_merge(segments))

    def difference(self, other: "ArcSet") -> "ArcSet":
        return self.intersection(other.complement())

    def shift(self, c: float) -> "ArcSet":
        """Rotation of the whole set by the angle c (wrapping as needed)."""
        if c == 0.0:
            return self
        return ArcSet([(lo + c, hi + c) for lo, hi in self.segments])

    def __eq__(self, other):
        return isinstance(other, ArcSet) and self.segments == other.segments

    def __hash__(self):
        return hash(tuple(self.segments))

    def __repr__(self):
        body = ", ".join(f"({lo:+.6f}, {hi:+.6f}]" for lo, hi in self.segments)
        return f"ArcSet[{body}]"


def _merge(segments):
    """Sort, drop empties, and merge abutting half-open segments exactly."""
    segments = sorted((lo, hi) for lo, hi in segments if hi > lo)
    merged: list[tuple[float, float]] = []
    for lo, hi in segments:
        if merged and lo <= merged[-1][1]:
            prev_lo, prev_hi = merged[-1]
            merged[-1] = (prev_lo, max(prev_hi, hi))
        else:
            merged.append((lo, hi))
    return merged
