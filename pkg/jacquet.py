#!/usr/bin/env python3
"""
Jacquet module splitting rules for the three block types of the orbit engine:
L(Delta) splits end-first, Z(Delta) splits beginning-first, and a ladder
L(Delta_1, ..., Delta_k) splits at strictly decreasing cut points.

Sizes are counted in support points (segment lengths).
"""

import logging
from typing import List, Sequence, Tuple

from errors import InputValidationError, PreconditionError
from segcalc import Multisegment, Segment, is_ladder, seg2, std_sort

logger = logging.getLogger(__name__)

Composition = Tuple[int, ...]


def check_composition(parts: Sequence[int], total: int) -> Composition:
    parts = tuple(parts)
    if any(not isinstance(p, int) or p < 1 for p in parts):
        raise InputValidationError(f"composition {parts} has a non-positive part", clause="Composition: positive parts")
    if sum(parts) != total:
        raise InputValidationError(f"composition {parts} sums to {sum(parts)}, expected {total}",
                                   clause="Composition: sum equals size")
    return parts


def compositions(n: int) -> List[Composition]:
    """All compositions of n, by number of parts then lexicographically"""
    if n == 0:
        return [()]
    out = []

    def extend(prefix: Tuple[int, ...], left: int) -> None:
        if left == 0:
            out.append(prefix)
            return
        for part in range(1, left + 1):
            extend(prefix + (part,), left - part)

    extend((), n)
    return sorted(out, key=lambda c: (len(c), c))


def split_L(s: Segment, parts: Sequence[int]) -> Tuple[Segment, ...]:
    """End-first splitting: the first piece carries e(s)"""
    parts = check_composition(parts, s.length)
    pieces = []
    top = s.b2
    for part in parts:
        pieces.append(seg2(s.line, top - 2 * (part - 1), top))
        top -= 2 * part
    return tuple(pieces)


def split_Z(s: Segment, parts: Sequence[int]) -> Tuple[Segment, ...]:
    """Beginning-first splitting: the first piece carries b(s), the last e(s)"""
    parts = check_composition(parts, s.length)
    pieces = []
    bottom = s.a2
    for part in parts:
        pieces.append(seg2(s.line, bottom, bottom + 2 * (part - 1)))
        bottom += 2 * part
    return tuple(pieces)


def split_ladder(m: Multisegment, left_size: int) -> List[Tuple[Multisegment, Multisegment]]:
    """
    Two-block Jacquet module terms of a ladder.

    A term picks cut points x_i in [a_i, b_i + 1], strictly decreasing along the
    ladder, with left = {[x_i, b_i]} of total length left_size and
    right = {[a_i, x_i - 1]}; empty pieces are dropped.
    """
    if not is_ladder(m):
        raise PreconditionError(f"{m} is not a ladder", clause="split_ladder: ladder input")
    if not 0 <= left_size <= m.size:
        raise PreconditionError(f"left size {left_size} outside 0..{m.size}", clause="split_ladder: size range")
    segs = std_sort(m)
    terms = []
    seen = set()

    def choose(i: int, upper: int, budget: int, cuts: Tuple[int, ...]) -> None:
        if i == len(segs):
            if budget == 0:
                left = tuple(p for p in (seg2(s.line, x, s.b2) for s, x in zip(segs, cuts)) if p)
                right = tuple(p for p in (seg2(s.line, s.a2, x - 2) for s, x in zip(segs, cuts)) if p)
                term = (Multisegment(left), Multisegment(right))
                if term not in seen:
                    seen.add(term)
                    terms.append(term)
            return
        s = segs[i]
        # x ranges over doubled values a2 .. b2 + 2, kept below the previous cut
        for x in range(s.b2 + 2, s.a2 - 2, -2):
            if upper is not None and x >= upper:
                continue
            taken = (s.b2 - x) // 2 + 1
            if taken > budget:
                break
            choose(i + 1, x, budget - taken, cuts + (x,))

    choose(0, None, left_size, ())
    logger.debug(f"split_ladder({m}, {left_size}) -> {len(terms)} terms")
    return terms


def split_ladder_composition(m: Multisegment, parts: Sequence[int]) -> List[Tuple[Multisegment, ...]]:
    """Iterate two-block splits left to right; the first factor carries the ends"""
    parts = check_composition(parts, m.size)
    if len(parts) == 1:
        return [(m,)]
    out = []
    for left, right in split_ladder(m, parts[0]):
        for rest in split_ladder_composition(right, parts[1:]):
            out.append((left,) + rest)
    return out
